"""
Reproducible experiment drivers. Each ``run_*`` function computes its data, writes
one CSV per table into ``out_dir`` and returns the written paths.

CSV conventions: one header line, comma separated, floats with 17 significant
digits so the files are bit-reproducible and round-trip to the same doubles.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import asymptotics, rl
from .sequences import (
    basis_evolution,
    format_sequence,
    generalized_universal_sequence,
    parse_sequence,
    schmidt_norms,
    universal_sequence,
)

log = logging.getLogger(__name__)

__all__ = [
    "theta_grid",
    "write_csv",
    "run_eval_seq",
    "run_fig_universal",
    "run_fig_convergence",
    "run_fig_omega_sweep",
    "run_asymptotic_report",
    "run_brute_force",
    "run_optimize",
    "write_surface",
    "default_episodes",
]


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    log.info("wrote %s", path)
    return path


def _write_json(path: Path, payload: dict) -> Path:
    try:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def theta_grid(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"grid size must be positive, got {n}")
    return np.linspace(0.0, np.pi, n)


def _check_positive(**counts: int) -> None:
    for name, value in counts.items():
        if value < 1:
            raise ValueError(f"{name} must be positive, got {value}")


def run_eval_seq(seq_text: str, thetas: np.ndarray, phi: float, out_dir: Path) -> list[Path]:
    seq = parse_sequence(seq_text)
    if not seq:
        raise ValueError("empty coin sequence")
    values = schmidt_norms(basis_evolution(seq), thetas, phi)
    rows = [(t, phi, v) for t, v in zip(thetas, values)]
    return [write_csv(Path(out_dir) / "eval_seq.csv", ("theta", "phi", "schmidt"), rows)]


def run_fig_universal(m_list: Sequence[int], thetas: np.ndarray, out_dir: Path) -> list[Path]:
    """Schmidt norm of ``[(H,F)^m, F]`` against theta (phi = 0) for each m."""
    out_dir = Path(out_dir)
    rows = []
    for m in sorted(m_list):
        values = schmidt_norms(basis_evolution(universal_sequence(m)), thetas)
        rows.extend((m, 2 * m + 1, t, v) for t, v in zip(thetas, values))
    meta = {
        "max_schmidt": float(np.sqrt(2.0)),
        "asymptotic_schmidt": asymptotics.closed_form_schmidt(),
    }
    return [
        write_csv(out_dir / "universal.csv", ("m", "n", "theta", "schmidt"), rows),
        _write_json(out_dir / "universal.meta.json", meta),
    ]


def run_fig_convergence(m_max: int, samples: int, seed: int, out_dir: Path) -> list[Path]:
    """Mean and variance over random theta (phi = 0) for n = 3, 5, ..., 2 m_max + 1."""
    _check_positive(m_max=m_max, samples=samples)
    thetas = rl.run_rng(seed).uniform(0.0, np.pi, samples)
    rows = []
    for m in range(1, m_max + 1):
        values = schmidt_norms(basis_evolution(universal_sequence(m)), thetas)
        mean = float(values.mean())
        rows.append((m, 2 * m + 1, mean, float(values.var()), mean / np.sqrt(2.0)))
    return [
        write_csv(
            Path(out_dir) / "converge.csv",
            ("m", "n", "mean", "variance", "mean_over_sqrt2"),
            rows,
        )
    ]


def run_fig_omega_sweep(
    m_list: Sequence[int], grid: int, samples: int, seed: int, out_dir: Path
) -> list[Path]:
    """Generalized-Hadamard universal sequence over an omega grid on [0, pi/2]."""
    _check_positive(grid=grid, samples=samples)
    thetas = rl.run_rng(seed).uniform(0.0, np.pi, samples)
    omegas = np.linspace(0.0, np.pi / 2.0, grid)
    rows = []
    for m in sorted(m_list):
        for w in omegas:
            values = schmidt_norms(basis_evolution(generalized_universal_sequence(m, w)), thetas)
            rows.append((m, 2 * m + 1, w, float(values.mean()), float(values.var())))
    return [
        write_csv(Path(out_dir) / "omega_sweep.csv", ("m", "n", "omega", "mean", "variance"), rows)
    ]


def run_asymptotic_report(thetas: np.ndarray, quadrature: int, out_dir: Path) -> list[Path]:
    """Limit Bloch vectors of the universal sequence per theta; checks planarity and theta-independence."""
    closed = asymptotics.closed_form_schmidt()
    rows = []
    for t in thetas:
        res = asymptotics.asymptotic_reduced_state(float(t), 0.0, quadrature)
        b = res.bloch
        if abs(b.a3) > 1e-10:
            raise RuntimeError(f"limit state leaves the x-y plane at theta={t}: a3={b.a3}")
        if abs(res.schmidt - closed) > 1e-8:
            raise RuntimeError(f"limit Schmidt norm depends on theta at theta={t}")
        rows.append((t, b.a0, b.a1, b.a2, b.a3, res.schmidt, closed))
    return [
        write_csv(
            Path(out_dir) / "asymptotic.csv",
            ("theta", "a0", "a1", "a2", "a3", "schmidt", "closed_form_schmidt"),
            rows,
        )
    ]


def run_brute_force(
    steps: int, samples: int, distribution: rl.StateDistribution, seed: int, out_dir: Path
) -> list[Path]:
    ranked = rl.brute_force_search(steps, samples, distribution, seed)
    rows = [
        (i + 1, "".join(c.kind for c in seq), mean, var)
        for i, (seq, mean, var) in enumerate(ranked)
    ]
    return [
        write_csv(Path(out_dir) / "brute_force.csv", ("rank", "sequence", "mean", "variance"), rows)
    ]


def default_episodes(n_steps: int) -> int:
    return 20_000 if n_steps <= 7 else 100_000


def run_optimize(
    config: rl.TrainConfig,
    runs: int,
    out_dir: Path,
    workers: int = 1,
    theta_points: int = 101,
    phi_points: int = 101,
) -> list[Path]:
    """
    Train ``runs`` agents and write learning curve, per-run greedy sequences,
    the modal sequence, its theta profile next to the universal sequence, and
    its (theta, phi) surface.
    """
    _check_positive(runs=runs, theta_points=theta_points, phi_points=phi_points)
    out_dir = Path(out_dir)
    records = rl.train_many(config, runs, workers)
    mean, stderr = rl.learning_curve(records)
    paths = [
        write_csv(
            out_dir / "learning_curve.csv",
            ("episode", "mean_reward", "stderr"),
            zip(range(len(mean)), mean, stderr),
        ),
        write_csv(
            out_dir / "runs.csv",
            ("run", "greedy_sequence"),
            ((i, r.greedy_string) for i, r in enumerate(records)),
        ),
    ]
    modal, count = rl.modal_sequence(records)
    seq = rl.history_to_sequence(modal)
    seq_path = out_dir / "sequence.txt"
    seq_path.write_text(f"{format_sequence(seq)}\n")
    paths.append(seq_path)
    log.info("modal greedy sequence %s (%d/%d runs)", modal, count, runs)

    basis = basis_evolution(seq)
    thetas = theta_grid(theta_points)
    found = schmidt_norms(basis, thetas)
    n = config.n_steps
    if n % 2 == 1 and n >= 3:
        univ = schmidt_norms(basis_evolution(universal_sequence((n - 1) // 2)), thetas)
    else:
        univ = np.full_like(found, np.nan)
    paths.append(
        write_csv(
            out_dir / "profile.csv",
            ("theta", "schmidt_found", "schmidt_universal"),
            zip(thetas, found, univ),
        )
    )
    paths.append(write_surface(seq, theta_points, phi_points, out_dir))
    return paths


def write_surface(seq, theta_points: int, phi_points: int, out_dir: Path) -> Path:
    """Schmidt norm of ``seq`` on a (theta, phi) grid over [0, pi] x [0, 2pi], theta-major."""
    _check_positive(theta_points=theta_points, phi_points=phi_points)
    tt, pp = np.meshgrid(
        theta_grid(theta_points), np.linspace(0.0, 2.0 * np.pi, phi_points), indexing="ij"
    )
    surface = schmidt_norms(basis_evolution(seq), tt.ravel(), pp.ravel())
    return write_csv(
        Path(out_dir) / "surface.csv",
        ("theta", "phi", "schmidt"),
        zip(tt.ravel(), pp.ravel(), surface),
    )
