"""SVG figures for the oligarchy model (matplotlib, Agg backend)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from constlab.jury import LARGE_MIN, SMALL_MAX, Dynamics, GridCell  # noqa: E402

BASIN_COLORS = {
    "dictatorship": "#2ca02c",
    "oligarchy": "#d62728",
    "committee": "#1f77b4",
    "oligarchy+committee": "#9467bd",
}


def _save(fig, path) -> None:
    # fixed salt and no date keep the SVG byte-identical between runs
    with matplotlib.rc_context({"svg.hashsalt": "constlab", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_stable_grid(cells: Sequence[GridCell], path) -> None:
    """3-D scatter of stable sizes over (λ, p): x for small, circles for large."""
    fig = plt.figure(figsize=(7, 5.5))
    ax = fig.add_subplot(projection="3d")
    small = [(c.lam, c.p, s) for c in cells for s in c.stable_sizes if s <= SMALL_MAX]
    large = [(c.lam, c.p, s) for c in cells for s in c.stable_sizes if s >= LARGE_MIN]
    if small:
        xs, ys, zs = zip(*small)
        ax.scatter(xs, ys, zs, marker="x", color="black", label=f"i <= {SMALL_MAX}")
    if large:
        xs, ys, zs = zip(*large)
        ax.scatter(xs, ys, zs, marker="o", facecolors="none", edgecolors="blue",
                   label=f"i >= {LARGE_MIN}")
    ax.set_xlabel("lambda")
    ax.set_ylabel("p")
    ax.set_zlabel("stable size i")
    if cells:
        ax.set_title(f"stable oligarchies (n={cells[0].n})")
    ax.legend(loc="upper left")
    _save(fig, path)


def plot_slice(cells: Sequence[GridCell], path, fixed: str = "p", value: float = 0.6) -> None:
    """Stable sizes along λ at fixed p (or along p at fixed λ)."""
    if fixed == "p":
        chosen = [c for c in cells if abs(c.p - value) < 1e-9]
        xs_of = lambda c: c.lam
        xlabel = "lambda"
    else:
        chosen = [c for c in cells if abs(c.lam - value) < 1e-9]
        xs_of = lambda c: c.p
        xlabel = "p"
    fig, ax = plt.subplots(figsize=(6, 4))
    for c in chosen:
        for s in c.stable_sizes:
            if s <= SMALL_MAX:
                ax.scatter([xs_of(c)], [s], marker="x", color="black")
            elif s >= LARGE_MIN:
                ax.scatter([xs_of(c)], [s], marker="o", facecolors="none", edgecolors="blue")
            else:
                ax.scatter([xs_of(c)], [s], marker="s", color="gray")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("stable size i")
    ax.set_title(f"{fixed} = {value:g}")
    _save(fig, path)


def plot_dynamics(runs: Sequence[Dynamics], path) -> None:
    """Utility curve, stable points and basin ribbons, one panel per run."""
    fig, axes = plt.subplots(len(runs), 1, figsize=(8, 2.6 * len(runs)), squeeze=False)
    for ax, d in zip(axes[:, 0], runs):
        cfg = d.result.config
        g = d.result.g
        sizes = list(range(1, cfg.n + 1))
        lo, hi = float(g[1:].min()), float(g[1:].max())
        pad = 0.05 * (hi - lo or 1.0)
        band = (lo - 3 * pad, 2 * pad)
        for i in sizes:
            color = BASIN_COLORS.get(d.basins[i])
            if color:
                ax.broken_barh([(i - 0.5, 1.0)], band, facecolors=color, linewidth=0)
        ax.plot(sizes, g[1:], color="black", linewidth=0.8)
        ax.scatter(d.result.stable_sizes, [g[s] for s in d.result.stable_sizes],
                   color="gold", edgecolors="black", zorder=3)
        ax.set_ylim(band[0], hi + pad)
        ax.set_xlim(0, cfg.n + 1)
        ax.set_ylabel("u_i(O_i)")
        ax.set_title(f"lambda = {cfg.lam:g}, p = {cfg.p:g}")
    axes[-1, 0].set_xlabel("oligarchy size i")
    handles = [Patch(color=c, label=k) for k, c in BASIN_COLORS.items()]
    fig.legend(handles=handles, loc="upper right", fontsize="small")
    fig.tight_layout()
    _save(fig, path)
