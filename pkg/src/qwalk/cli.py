"""Command line entry point: ``qwalk <subcommand> [flags]``.

Exit status is 0 on success, 2 for invalid arguments or configuration and 1 for
runtime failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from . import rl

log = logging.getLogger("qwalk")


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("values must be positive integers")
    return values


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--out", type=Path, default=Path("results"))
    common.add_argument("--plot", action="store_true", help="also write a PNG per CSV")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="qwalk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval-seq", parents=[common], help="Schmidt norm of one coin sequence")
    s.add_argument("--seq", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--theta", type=float)
    g.add_argument("--theta-grid", type=int, default=101)
    s.add_argument("--phi", type=float, default=0.0)

    s = sub.add_parser("universal", parents=[common], help="universal sequence against theta")
    s.add_argument("--m-list", type=_int_list, default=[1, 2, 3, 4, 5])
    s.add_argument("--theta-grid", type=int, default=101)

    s = sub.add_parser("converge", parents=[common], help="universal sequence against n")
    s.add_argument("--m-max", type=int, default=50)
    s.add_argument("--samples", type=int, default=1000)

    s = sub.add_parser("omega-sweep", parents=[common], help="generalized Hadamard sweep")
    s.add_argument("--m-list", type=_int_list, default=[2, 3, 7])
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--samples", type=int, default=1000)

    s = sub.add_parser("asymptotic", parents=[common], help="m -> infinity limit per theta")
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--quadrature", type=int, default=512)

    s = sub.add_parser("brute-force", parents=[common], help="rank all 2^n H/F sequences")
    s.add_argument("--steps", type=int, default=5)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--dist", choices=[d.value for d in rl.StateDistribution], default="phi0")

    s = sub.add_parser("train", parents=[common], help="Q-learning over coin sequences")
    s.add_argument("--steps", type=int, default=5)
    s.add_argument("--episodes", type=int, help="default 20000 for n <= 7, else 100000")
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--dist", choices=[d.value for d in rl.StateDistribution], default="phi0")
    s.add_argument("--lr", type=float, default=0.7)
    s.add_argument("--eps-init", type=float, default=0.9)
    s.add_argument("--eps-fin", type=float, default=0.01)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--theta-grid", type=int, default=101)
    s.add_argument("--phi-grid", type=int, default=101)
    return p


def _run(args: argparse.Namespace) -> list[Path]:
    out = args.out
    cmd = args.command
    try:
        if cmd == "eval-seq":
            thetas = np.array([args.theta]) if args.theta is not None else ex.theta_grid(args.theta_grid)
            if np.any((thetas < 0) | (thetas > np.pi)) or not 0 <= args.phi <= 2 * np.pi:
                raise ConfigError("theta must be in [0, pi] and phi in [0, 2pi]")
            return ex.run_eval_seq(args.seq, thetas, args.phi, out)
        if cmd == "universal":
            return ex.run_fig_universal(args.m_list, ex.theta_grid(args.theta_grid), out)
        if cmd == "converge":
            return ex.run_fig_convergence(args.m_max, args.samples, args.seed, out)
        if cmd == "omega-sweep":
            return ex.run_fig_omega_sweep(args.m_list, args.grid, args.samples, args.seed, out)
        if cmd == "asymptotic":
            if args.quadrature < 64:
                raise ConfigError("quadrature must be >= 64")
            return ex.run_asymptotic_report(ex.theta_grid(args.grid), args.quadrature, out)
        if cmd == "brute-force":
            dist = rl.StateDistribution(args.dist)
            return ex.run_brute_force(args.steps, args.samples, dist, args.seed, out)
        if cmd == "train":
            config = rl.TrainConfig(
                n_steps=args.steps,
                n_episodes=args.episodes or ex.default_episodes(args.steps),
                learning_rate=args.lr,
                eps_init=args.eps_init,
                eps_fin=args.eps_fin,
                seed=args.seed,
                state_distribution=rl.StateDistribution(args.dist),
            )
            return ex.run_optimize(
                config, args.runs, out, args.workers, args.theta_grid, args.phi_grid
            )
    except (OSError, RuntimeError):
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown command {cmd}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        paths = _run(args)
        if args.plot:
            from .plotting import plot_csv

            for path in paths:
                if path.suffix == ".csv":
                    plot_csv(path)
    except ConfigError as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report any runtime failure as exit 1
        print(f"qwalk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
