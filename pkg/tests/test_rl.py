import math

import numpy as np
import pytest

from qwalk import rl
from qwalk.rl import QTable, StateDistribution, TrainConfig
from qwalk.sequences import F, H, evaluate_sequence

from oracles import COINS, dense_walk, schmidt_svd

SQRT2 = math.sqrt(2)
COIN = {"H": H, "F": F}


class TestConfig:
    def test_defaults(self):
        c = TrainConfig(5)
        assert (c.n_episodes, c.learning_rate, c.eps_init, c.eps_fin) == (20_000, 0.7, 0.9, 0.01)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_steps=0),
            dict(n_steps=3, n_episodes=0),
            dict(n_steps=3, learning_rate=0.0),
            dict(n_steps=3, learning_rate=1.5),
            dict(n_steps=3, eps_init=0.1, eps_fin=0.2),
            dict(n_steps=3, eps_fin=-0.1),
            dict(n_steps=3, seed=-1),
            dict(n_steps=3, state_distribution="uniform"),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TrainConfig(**kwargs)

    def test_distribution_from_string(self):
        assert TrainConfig(2, state_distribution="random").state_distribution is StateDistribution.FULLY_RANDOM


class TestEpsilon:
    def test_start(self):
        assert rl.epsilon_schedule(0, TrainConfig(5, n_episodes=100)) == 0.9

    def test_end_value(self):
        c = TrainConfig(5, n_episodes=1000)
        assert rl.epsilon_schedule(1000, c) == pytest.approx(0.01 + 0.89 * math.exp(-8))
        assert round(rl.epsilon_schedule(1000, c), 5) == 0.0103

    def test_constant(self):
        c = TrainConfig(5, n_episodes=50, eps_init=0.3, eps_fin=0.3)
        assert {rl.epsilon_schedule(i, c) for i in range(50)} == {0.3}

    def test_decreasing(self):
        c = TrainConfig(5, n_episodes=200)
        vals = [rl.epsilon_schedule(i, c) for i in range(200)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestSelectAction:
    def test_uniform_when_exploring(self):
        rng = np.random.default_rng(0)
        q = QTable(3)
        q["", "H"] = 5.0
        n = 10_000
        hits = sum(rl.select_action(q, "", 1.0, rng) == "H" for _ in range(n))
        assert abs(hits - n / 2) < 3 * math.sqrt(n / 4)

    def test_greedy(self):
        q = QTable(3)
        q["H", "H"], q["H", "F"] = 0.3, 0.1
        rng = np.random.default_rng(1)
        assert {rl.select_action(q, "H", 0.0, rng) for _ in range(200)} == {"H"}
        q["H", "F"] = 0.4
        assert {rl.select_action(q, "H", 0.0, rng) for _ in range(200)} == {"F"}

    def test_ties_are_random(self):
        q = QTable(3)
        seen = {rl.select_action(q, "", 0.0, np.random.default_rng(s)) for s in range(40)}
        assert seen == {"H", "F"}


class TestTDUpdate:
    def test_terminal(self):
        q = rl.td_update(QTable(1), "", "H", 1.4, None, 0.7)
        assert q["", "H"] == pytest.approx(0.98, abs=1e-15)

    def test_full_learning_rate(self):
        r = 1.2345678901234567
        assert rl.td_update(QTable(2), "F", "F", r, None, 1.0)["F", "F"] == r

    def test_two_step_backup(self):
        q = QTable(2)
        rl.td_update(q, "H", "F", 1.4, None, 0.7)
        rl.td_update(q, "", "H", 0.0, "H", 0.7)
        assert q["", "H"] == pytest.approx(0.686, abs=1e-15)

    def test_bootstrap_uses_max(self):
        q = QTable(2)
        q["F", "H"], q["F", "F"] = 0.2, 0.9
        rl.td_update(q, "", "F", 0.0, "F", 1.0)
        assert q["", "F"] == 0.9


class TestQTable:
    def test_fresh_is_zero(self):
        q = QTable(4)
        assert all(q[h, a] == 0.0 for h in rl.all_histories(4) for a in rl.ACTIONS)
        assert len(rl.all_histories(4)) == 2**4 - 1

    @pytest.mark.parametrize("key", [("HF", "H"), ("X", "H"), ("", "Z"), ("HFH", "F")])
    def test_invalid_keys(self, key):
        q = QTable(2)
        with pytest.raises(KeyError):
            q[key]
        with pytest.raises(KeyError):
            q[key] = 1.0

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            QTable(2)["", "H"] = float("nan")


class TestGreedyPolicy:
    def test_all_zero_prefers_h(self):
        assert rl.greedy_policy(QTable(4)) == (H, H, H, H)

    def test_follows_argmax(self):
        q = QTable(3)
        q["", "F"] = 1.0
        q["F", "H"] = 0.5
        assert rl.greedy_policy(q)[:2] == (F, H)

    def test_trained_five_step(self):
        rec = rl.train(TrainConfig(5, seed=3))
        assert rec.greedy_string == "HFHFF"


class TestEnvironment:
    def test_reward_matches_position_space_oracle(self):
        env = rl.WalkEnvironment(6)
        rng = np.random.default_rng(4)
        for _ in range(40):
            hist = "".join(rng.choice(["H", "F"], size=6))
            t, p = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
            oracle = schmidt_svd(dense_walk([COINS[c] for c in hist], t, p))
            assert env.reward(hist, t, p) == pytest.approx(oracle, abs=1e-12)

    def test_incomplete_history_rejected(self):
        with pytest.raises(ValueError):
            rl.WalkEnvironment(3).reward("HF", 0.2)


class TestTraining:
    def test_rewards_bounded(self):
        for dist in StateDistribution:
            rec = rl.train(TrainConfig(4, n_episodes=500, seed=7, state_distribution=dist))
            assert rec.per_episode_reward.shape == (500,)
            assert np.all(rec.per_episode_reward >= 1 - 1e-12)
            assert np.all(rec.per_episode_reward <= SQRT2 + 1e-12)

    def test_deterministic(self):
        c = TrainConfig(5, n_episodes=2000, seed=123, state_distribution="random")
        assert rl.train(c) == rl.train(c)

    def test_different_seeds_differ(self):
        a = rl.train(TrainConfig(3, n_episodes=300, seed=1))
        b = rl.train(TrainConfig(3, n_episodes=300, seed=2))
        assert not np.array_equal(a.per_episode_reward, b.per_episode_reward)

    def test_q_table_keys_are_non_terminal(self):
        rec = rl.train(TrainConfig(3, n_episodes=400, seed=5))
        assert all(len(h) < 3 for h, _ in rec.q_table.values)
        assert len(rec.q_table.values) == 2 * (2**3 - 1)

    def test_tabular_backup_converges_to_branch_value(self):
        # pure exploration, lr = 1, one fixed initial state
        theta, n = 0.9, 2
        env = rl.WalkEnvironment(n)
        q = QTable(n)
        rng = np.random.default_rng(8)
        for _ in range(200):
            h = ""
            for t in range(n):
                a = rl.select_action(q, h, 1.0, rng)
                if t < n - 1:
                    rl.td_update(q, h, a, 0.0, h + a, 1.0)
                else:
                    rl.td_update(q, h, a, env.reward(h + a, theta), None, 1.0)
                h += a
        for first in "HF":
            for a in "HF":
                exact = evaluate_sequence(tuple(COIN[c] for c in first + a), [theta]).mean
                assert abs(q[first, a] - exact) < 1e-9
            assert abs(q["", first] - max(q[first, "H"], q[first, "F"])) < 1e-9


class TestManyRuns:
    def test_run_streams_independent_and_ordered(self):
        c = TrainConfig(3, n_episodes=200, seed=11)
        recs = rl.train_many(c, 3)
        assert recs[0] == rl.train(c, rng=rl.run_rng(11, 0))
        assert not np.array_equal(recs[0].per_episode_reward, recs[1].per_episode_reward)

    def test_parallel_matches_serial(self):
        c = TrainConfig(3, n_episodes=200, seed=12)
        assert rl.train_many(c, 3, workers=2) == rl.train_many(c, 3)

    def test_learning_curve(self):
        recs = rl.train_many(TrainConfig(3, n_episodes=100, seed=13), 4)
        mean, err = rl.learning_curve(recs)
        data = np.stack([r.per_episode_reward for r in recs])
        np.testing.assert_allclose(mean, data.mean(axis=0))
        np.testing.assert_allclose(err, data.std(axis=0, ddof=1) / 2)

    def test_single_run_has_zero_band(self):
        _, err = rl.learning_curve(rl.train_many(TrainConfig(2, n_episodes=10), 1))
        assert not err.any()

    def test_modal_sequence(self):
        recs = rl.train_many(TrainConfig(5, n_episodes=20_000, seed=14), 3)
        seq, count = rl.modal_sequence(recs)
        assert seq == "HFHFF" and count >= 2

    def test_rejects_zero_runs(self):
        with pytest.raises(ValueError):
            rl.train_many(TrainConfig(2), 0)


class TestBruteForce:
    def test_one_step_by_hand(self):
        # after one step the state is a|1,down> + b|-1,up>, so the Schmidt norm is |a| + |b|;
        # H gives (|u + d| + |u - d|)/sqrt2, F gives sqrt2 for real (u, d)
        ranked = rl.brute_force_search(1, 500, seed=21)
        thetas, _ = rl.sample_initial_states(rl.run_rng(21), 500, StateDistribution.FIXED_PHI_ZERO)
        u, d = np.cos(thetas / 2), np.sin(thetas / 2)
        h_mean = float(np.mean((np.abs(u + d) + np.abs(u - d)) / SQRT2))
        assert [s for s, _, _ in ranked] == [(F,), (H,)]
        assert ranked[0][1] == pytest.approx(SQRT2, abs=1e-13)
        assert ranked[1][1] == pytest.approx(h_mean, abs=1e-13)

    def test_one_step_theta_zero(self):
        # from |up>: H spreads evenly, so both coins are maximally entangling
        for seq in ((H,), (F,)):
            assert evaluate_sequence(seq, [0.0]).mean == pytest.approx(SQRT2, abs=1e-15)

    def test_five_steps(self):
        ranked = rl.brute_force_search(5, 1000, seed=0)
        assert len(ranked) == 32
        assert ranked[0][0] == (H, F, H, F, F)
        assert round(ranked[0][1], 4) == 1.4114
        means = [m for _, m, _ in ranked]
        assert means == sorted(means, reverse=True)

    def test_matches_direct_evaluation(self):
        ranked = rl.brute_force_search(3, 50, StateDistribution.FULLY_RANDOM, seed=22)
        thetas, phis = rl.sample_initial_states(rl.run_rng(22), 50, StateDistribution.FULLY_RANDOM)
        env = rl.WalkEnvironment(3)
        for seq, mean, var in ranked:
            hist = "".join(c.kind for c in seq)
            vals = [env.reward(hist, t, p) for t, p in zip(thetas, phis)]
            assert mean == pytest.approx(np.mean(vals), abs=1e-13)
            assert var == pytest.approx(np.var(vals), abs=1e-13)

    @pytest.mark.parametrize("n", [0, rl.MAX_BRUTE_FORCE_STEPS + 1])
    def test_guard(self, n):
        with pytest.raises(ValueError):
            rl.brute_force_search(n, 10)
