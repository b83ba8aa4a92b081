"""
Tabular Q-learning over coin sequences, plus an exhaustive search used as its oracle.

The agent never sees the quantum state. Its state is the history of coins applied
so far (``""``, ``"H"``, ``"HF"``, ...), actions are ``"H"`` and ``"F"``, and the only
nonzero reward is the Schmidt norm at the end of the ``n``-step episode. Each
episode starts from a freshly sampled initial coin state.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np
from numpy.typing import NDArray

from . import walk
from .sequences import F, H, CoinSequence, basis_evolution, schmidt_norms

__all__ = [
    "ACTIONS",
    "MAX_BRUTE_FORCE_STEPS",
    "StateDistribution",
    "TrainConfig",
    "QTable",
    "TrainingRecord",
    "WalkEnvironment",
    "run_rng",
    "sample_initial_states",
    "epsilon_schedule",
    "select_action",
    "td_update",
    "train",
    "train_many",
    "greedy_policy",
    "history_to_sequence",
    "learning_curve",
    "modal_sequence",
    "brute_force_search",
    "all_histories",
]

ACTIONS = ("H", "F")
MAX_BRUTE_FORCE_STEPS = 22
_COINS = {"H": H, "F": F}


class StateDistribution(str, Enum):
    FIXED_PHI_ZERO = "phi0"  # theta ~ U[0, pi], phi = 0
    FULLY_RANDOM = "random"  # theta ~ U[0, pi], phi ~ U[0, 2pi]


@dataclass(frozen=True)
class TrainConfig:
    n_steps: int
    n_episodes: int = 20_000
    learning_rate: float = 0.7
    eps_init: float = 0.9
    eps_fin: float = 0.01
    seed: int = 0
    state_distribution: StateDistribution = StateDistribution.FIXED_PHI_ZERO

    def __post_init__(self) -> None:
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.n_episodes < 1:
            raise ValueError(f"n_episodes must be >= 1, got {self.n_episodes}")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        for name in ("eps_init", "eps_fin"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.eps_init < self.eps_fin:
            raise ValueError("eps_init must be >= eps_fin")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "state_distribution", StateDistribution(self.state_distribution))


class QTable:
    """
    Q-values keyed by ``(history, action)``.

    Histories are strings over ``{H, F}`` shorter than ``n_steps``; unvisited
    entries read as exactly 0.
    """

    def __init__(self, n_steps: int):
        self.n_steps = n_steps
        self.values: dict[tuple[str, str], float] = {}

    def _check(self, history: str, action: str) -> None:
        if action not in ACTIONS:
            raise KeyError(f"unknown action {action!r}")
        if len(history) >= self.n_steps or history.strip("HF"):
            raise KeyError(f"invalid history {history!r} for {self.n_steps}-step table")

    def __getitem__(self, key: tuple[str, str]) -> float:
        self._check(*key)
        return self.values.get(key, 0.0)

    def __setitem__(self, key: tuple[str, str], value: float) -> None:
        self._check(*key)
        if not math.isfinite(value):
            raise ValueError(f"non-finite Q-value {value}")
        self.values[key] = float(value)

    def max_value(self, history: str | None) -> float:
        """``max_a Q(history, a)``; 0 for the terminal history (``None``)."""
        if history is None:
            return 0.0
        return max(self.values.get((history, a), 0.0) for a in ACTIONS)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QTable)
            and self.n_steps == other.n_steps
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"QTable(n_steps={self.n_steps}, entries={len(self.values)})"


@dataclass
class TrainingRecord:
    per_episode_reward: NDArray[np.float64]
    final_greedy_sequence: CoinSequence
    q_table: QTable
    config: TrainConfig = field(repr=False)

    @property
    def greedy_string(self) -> str:
        return "".join(c.kind for c in self.final_greedy_sequence)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TrainingRecord)
            and np.array_equal(self.per_episode_reward, other.per_episode_reward)
            and self.final_greedy_sequence == other.final_greedy_sequence
            and self.q_table == other.q_table
        )


def run_rng(seed: int, run: int | None = None) -> np.random.Generator:
    """PCG64 stream for ``seed``; ``run`` selects an independent child stream."""
    if run is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run,)))


def sample_initial_states(
    rng: np.random.Generator, size: int, distribution: StateDistribution
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    thetas = rng.uniform(0.0, np.pi, size)
    if StateDistribution(distribution) is StateDistribution.FULLY_RANDOM:
        phis = rng.uniform(0.0, 2.0 * np.pi, size)
    else:
        phis = np.zeros(size)
    return thetas, phis


class WalkEnvironment:
    """Final-step reward for a full coin history, caching the basis evolution per history."""

    def __init__(self, n_steps: int):
        self.n_steps = n_steps
        self._cache: dict[str, tuple[NDArray, NDArray]] = {}
        self._gram: dict[str, tuple] = {}

    def basis(self, history: str) -> tuple[NDArray, NDArray]:
        if len(history) != self.n_steps:
            raise ValueError(f"history {history!r} is not a complete {self.n_steps}-step episode")
        basis = self._cache.get(history)
        if basis is None:
            basis = basis_evolution(history_to_sequence(history))
            self._cache[history] = basis
        return basis

    def _gram_entries(self, history: str) -> tuple:
        g = self._gram.get(history)
        if g is None:
            up, down = self.basis(history)
            uu, ud, dd = up.T @ up.conj(), up.T @ down.conj(), down.T @ down.conj()
            g = (
                uu[0, 0].real, uu[1, 1].real, complex(uu[0, 1]),
                complex(ud[0, 0]), complex(ud[1, 1]), complex(ud[0, 1]), complex(ud[1, 0]).conjugate(),
                dd[0, 0].real, dd[1, 1].real, complex(dd[0, 1]),
            )
            self._gram[history] = g
        return g

    def reward(self, history: str, theta: float, phi: float = 0.0) -> float:
        """Schmidt norm after ``history`` from the initial state ``(theta, phi)``."""
        uu00, uu11, uu01, ud00, ud11, ud01, du01, dd00, dd11, dd01 = self._gram_entries(history)
        u = math.cos(theta / 2.0)
        d = complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)
        pu, pd, x = u * u, abs(d) ** 2, u * d.conjugate()
        rho00 = pu * uu00 + 2.0 * (x * ud00).real + pd * dd00
        rho11 = pu * uu11 + 2.0 * (x * ud11).real + pd * dd11
        rho01 = pu * uu01 + x * ud01 + x.conjugate() * du01 + pd * dd01
        r = math.sqrt(rho01.real**2 + rho01.imag**2 + ((rho00 - rho11) / 2.0) ** 2)
        return math.sqrt(max(0.5 + r, 0.0)) + math.sqrt(max(0.5 - r, 0.0))


def epsilon_schedule(episode: int, config: TrainConfig) -> float:
    """``(eps_init - eps_fin) exp(-8 episode / n_episodes) + eps_fin``."""
    return (config.eps_init - config.eps_fin) * math.exp(
        -8.0 * episode / config.n_episodes
    ) + config.eps_fin


def select_action(q: QTable, history: str, eps: float, rng: np.random.Generator) -> str:
    """Epsilon-greedy: uniform random action with probability ``eps``, else greedy with random ties."""
    if rng.random() < eps:
        return "H" if rng.random() < 0.5 else "F"
    qh, qf = q[history, "H"], q[history, "F"]
    if qh == qf:
        return "H" if rng.random() < 0.5 else "F"
    return "H" if qh > qf else "F"


def td_update(
    q: QTable, s: str, a: str, reward: float, s_next: str | None, lr: float
) -> QTable:
    """Undiscounted one-step Q-learning backup; ``s_next=None`` marks the terminal state."""
    old = q[s, a]
    q[s, a] = old + lr * (reward + q.max_value(s_next) - old)
    return q


def greedy_policy(q: QTable) -> CoinSequence:
    """Follow ``argmax_a Q`` from the empty history; ties go to H."""
    history = ""
    for _ in range(q.n_steps):
        history += "F" if q[history, "F"] > q[history, "H"] else "H"
    return history_to_sequence(history)


def history_to_sequence(history: str) -> CoinSequence:
    return tuple(_COINS[a] for a in history)


def train(
    config: TrainConfig,
    rng: np.random.Generator | None = None,
    env: WalkEnvironment | None = None,
) -> TrainingRecord:
    """Run ``config.n_episodes`` episodes of online Q-learning; deterministic per seed."""
    rng = run_rng(config.seed) if rng is None else rng
    env = WalkEnvironment(config.n_steps) if env is None else env
    q = QTable(config.n_steps)
    n = config.n_steps
    rewards = np.empty(config.n_episodes)
    random_phi = config.state_distribution is StateDistribution.FULLY_RANDOM
    for episode in range(config.n_episodes):
        eps = epsilon_schedule(episode, config)
        theta = rng.uniform(0.0, np.pi)
        phi = rng.uniform(0.0, 2.0 * np.pi) if random_phi else 0.0
        history = ""
        for t in range(n):
            action = select_action(q, history, eps, rng)
            nxt = history + action
            if t < n - 1:
                td_update(q, history, action, 0.0, nxt, config.learning_rate)
            else:
                r = env.reward(nxt, theta, phi)
                td_update(q, history, action, r, None, config.learning_rate)
                rewards[episode] = r
            history = nxt
    return TrainingRecord(rewards, greedy_policy(q), q, config)


def _train_run(args: tuple[TrainConfig, int]) -> TrainingRecord:
    config, run = args
    return train(config, rng=run_rng(config.seed, run))


def train_many(config: TrainConfig, runs: int, workers: int = 1) -> list[TrainingRecord]:
    """Independent runs on child streams of ``config.seed``, returned in run order."""
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    jobs = [(config, r) for r in range(runs)]
    if workers <= 1:
        env = WalkEnvironment(config.n_steps)
        return [train(config, rng=run_rng(config.seed, r), env=env) for r in range(runs)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_train_run, jobs))


def learning_curve(records: list[TrainingRecord]) -> tuple[NDArray, NDArray]:
    """Per-episode mean reward across runs and its standard error."""
    data = np.stack([r.per_episode_reward for r in records])
    mean = data.mean(axis=0)
    if len(records) < 2:
        return mean, np.zeros_like(mean)
    return mean, data.std(axis=0, ddof=1) / np.sqrt(len(records))


def modal_sequence(records: list[TrainingRecord]) -> tuple[str, int]:
    """Most frequent greedy sequence (earliest run wins ties) and its count."""
    counts = Counter(r.greedy_string for r in records)
    best = max(counts.values())
    for r in records:
        if counts[r.greedy_string] == best:
            return r.greedy_string, best
    raise ValueError("no records")


def _enumerate_bases(n: int) -> Iterator[tuple[str, tuple[NDArray, NDArray]]]:
    """Depth-first walk of the 2^n prefix tree, sharing evolution of common prefixes."""
    coins = {a: _COINS[a].matrix() for a in ACTIONS}

    def rec(prefix: str, up: walk.WalkerCoinState, down: walk.WalkerCoinState):
        if len(prefix) == n:
            yield prefix, (up.amplitudes, down.amplitudes)
            return
        for a in ACTIONS:
            yield from rec(prefix + a, walk.step(up, coins[a]), walk.step(down, coins[a]))

    start = []
    for coin in (walk.UP, walk.DOWN):
        amps = np.zeros((2 * n + 1, 2), dtype=np.complex128)
        amps[n, coin] = 1.0
        start.append(walk.WalkerCoinState(amps, 0, n))
    yield from rec("", *start)


def brute_force_search(
    n_steps: int,
    n_samples: int,
    distribution: StateDistribution = StateDistribution.FIXED_PHI_ZERO,
    seed: int = 0,
) -> list[tuple[CoinSequence, float, float]]:
    """
    Mean and variance of the Schmidt norm for every H/F sequence of length ``n_steps``.

    All sequences are scored on the same ``n_samples`` initial states. The result
    is sorted by mean, best first; equal means keep enumeration order (H before F).
    """
    if not 1 <= n_steps <= MAX_BRUTE_FORCE_STEPS:
        raise ValueError(f"n_steps must be in [1, {MAX_BRUTE_FORCE_STEPS}], got {n_steps}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    thetas, phis = sample_initial_states(run_rng(seed), n_samples, distribution)
    rows = []
    for history, basis in _enumerate_bases(n_steps):
        values = schmidt_norms(basis, thetas, phis)
        rows.append((history_to_sequence(history), float(values.mean()), float(values.var())))
    rows.sort(key=lambda row: -row[1])
    return rows


def all_histories(n_steps: int) -> list[str]:
    return ["".join(p) for length in range(n_steps) for p in itertools.product(ACTIONS, repeat=length)]
