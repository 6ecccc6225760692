"""Atlas figures written to files (no display backend needed)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .symmetric import AtlasRow  # noqa: E402

_STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "figure.dpi": 100,
    "svg.hashsalt": "polytriv",
}


def _label(row: AtlasRow) -> str:
    return "{" + ",".join(str(w) for w in sorted(row.W)) + "}"


def triviality_grid(rows: Sequence[AtlasRow], path: Path) -> Path:
    """One column per (m, W), four rows of 0/1 cells: predicted from W and brute force, for both families."""
    labels = ["Phi_neg (from W)", "Phi_neg (brute)", "Phi_id (from W)", "Phi_id (brute)"]
    data = [
        [r.neg_trivial for r in rows],
        [r.brute_neg_trivial for r in rows],
        [r.id_trivial for r in rows],
        [r.brute_id_trivial for r in rows],
    ]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.28 * len(rows) + 1.5), 2.4))
        ax.imshow([[int(v) for v in line] for line in data], aspect="auto",
                  cmap=ListedColormap(["#d9d9d9", "#2b6cb0"]), vmin=0, vmax=1, interpolation="nearest")
        ax.set_yticks(range(len(labels)), labels)
        ax.set_xticks(range(len(rows)), [f"{r.m}:{_label(r)}" for r in rows], rotation=90)
        for x, r in enumerate(rows):
            if not r.agrees:
                ax.axvline(x, color="#c53030", lw=2)
        ax.set_title("Triviality per weight set (blue = trivial)")
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path


def polymorphism_counts(rows: Sequence[AtlasRow], path: Path) -> Path:
    """Polymorphism counts per (m, W) on a log scale, one series per arity."""
    arities = sorted({n for r in rows for n in r.counts})
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.28 * len(rows) + 1.5), 3.2))
        xs = range(len(rows))
        for n, marker in zip(arities, "o^sD"):
            ax.plot(xs, [r.counts.get(n, 0) for r in rows], marker=marker, ms=3, lw=0.8, label=f"n={n}")
        ax.set_yscale("log")
        ax.set_xticks(list(xs), [f"{r.m}:{_label(r)}" for r in rows], rotation=90)
        ax.set_ylabel("polymorphisms")
        ax.legend(frameon=False)
        ax.set_title("Polymorphism counts")
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path


def write_atlas_figures(rows: Sequence[AtlasRow], directory, fmt: str = "png") -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    if not rows:
        return []
    return [
        triviality_grid(rows, out / f"atlas_triviality.{fmt}"),
        polymorphism_counts(rows, out / f"atlas_counts.{fmt}"),
    ]
