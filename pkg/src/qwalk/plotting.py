"""PNG rendering of the experiment CSVs. Every plot is a pure function of its CSV."""

from __future__ import annotations

from pathlib import Path

import numpy as np

SQRT2 = float(np.sqrt(2.0))


def _load(path: Path) -> dict[str, np.ndarray]:
    with Path(path).open() as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {}
    for i, name in enumerate(header):
        raw = [r[i] for r in rows]
        try:
            cols[name] = np.array(raw, dtype=float)
        except ValueError:
            cols[name] = np.array(raw)
    return cols


def plot_csv(path: Path) -> Path | None:
    """Write ``<stem>.png`` next to a known CSV; returns None for tables with no plot."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    d = _load(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    stem = path.stem
    if stem in ("universal", "eval_seq"):
        groups = d["m"] if "m" in d else np.zeros_like(d["theta"])
        for g in np.unique(groups):
            sel = groups == g
            ax.plot(d["theta"][sel], d["schmidt"][sel], label=f"m={int(g)}" if "m" in d else None)
        ax.set_xlabel("theta")
        ax.set_ylabel("Schmidt norm")
    elif stem == "converge":
        ax.plot(d["n"], d["mean"], "o-")
        ax.set_xlabel("steps n")
        ax.set_ylabel("mean Schmidt norm")
    elif stem == "omega_sweep":
        for m in np.unique(d["m"]):
            sel = d["m"] == m
            ax.plot(d["omega"][sel], d["mean"][sel], label=f"n={int(2 * m + 1)}")
        ax.set_xlabel("omega")
        ax.set_ylabel("mean Schmidt norm")
    elif stem == "asymptotic":
        for name in ("a1", "a2", "a3"):
            ax.plot(d["theta"], d[name], label=name)
        ax.set_xlabel("theta")
    elif stem == "learning_curve":
        ax.plot(d["episode"], d["mean_reward"])
        ax.fill_between(
            d["episode"], d["mean_reward"] - d["stderr"], d["mean_reward"] + d["stderr"], alpha=0.3
        )
        ax.set_xlabel("episode")
        ax.set_ylabel("reward")
    elif stem == "profile":
        ax.plot(d["theta"], d["schmidt_found"], label="found")
        ax.plot(d["theta"], d["schmidt_universal"], "-.", label="universal")
        ax.set_xlabel("theta")
        ax.set_ylabel("Schmidt norm")
    elif stem == "surface":
        thetas, phis = np.unique(d["theta"]), np.unique(d["phi"])
        z = d["schmidt"].reshape(len(thetas), len(phis))
        im = ax.pcolormesh(phis, thetas, z, shading="auto")
        fig.colorbar(im, ax=ax, label="Schmidt norm")
        ax.set_xlabel("phi")
        ax.set_ylabel("theta")
    else:
        plt.close(fig)
        return None
    if stem not in ("asymptotic", "surface"):
        ax.axhline(SQRT2, color="k", ls="--", lw=0.8)
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    out = path.with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
