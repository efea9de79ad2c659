"""Figures for CLI reports (Agg backend, written to files only)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

GOLDEN = (np.sqrt(5) - 1.0) / 2.0
FLOOR = 1e-18  # residuals of exactly zero are drawn here on log axes


def set_publication_style(width_pt: float = 400.0, aspect: float = GOLDEN, scale: float = 1.0) -> None:
    """Update rcParams for compact serif figures of a given column width."""
    inches_per_pt = 1.0 / 72.27
    fig_width = width_pt * inches_per_pt * scale
    params = {
        "font.family": "serif",
        "font.size": 9,
        "axes.labelsize": 9,
        "axes.titlesize": 9,
        "legend.fontsize": 7,
        "xtick.labelsize": 8,
        "ytick.labelsize": 8,
        "lines.linewidth": 1.0,
        "lines.markersize": 4,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "figure.figsize": [fig_width, fig_width * aspect],
        "savefig.dpi": 150,
        "savefig.bbox": "tight",
    }
    plt.rcParams.update(params)


def new_figure():
    plt.close("all")
    fig = plt.figure()
    ax = fig.add_subplot(111)
    return fig, ax


def _save(fig, directory: str, name: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_residuals(series: dict, directory: str, name: str, xlabel: str = "N",
                   ylabel: str = "residual", tol: float | None = None, title: str = "") -> str:
    """Log-scale residuals; ``series`` maps a legend label to (x, y) lists."""
    set_publication_style()
    fig, ax = new_figure()
    for label, (xs, ys) in sorted(series.items()):
        ax.semilogy(xs, [max(float(y), FLOOR) for y in ys], "o-", label=label)
    if tol is not None:
        ax.axhline(tol, color="k", ls="--", lw=0.8, label=f"tol {tol:g}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend()
    return _save(fig, directory, name)


def plot_product_norms(pairs: list, commutator: list, exchange: list, directory: str,
                       name: str = "yb_products.png", title: str = "") -> str:
    """Two 4 x 4 heatmaps (log10 norm) of the Yang-Baxter algebra products."""
    set_publication_style(aspect=0.45)
    plt.close("all")
    fig, axes = plt.subplots(1, 2)
    labels = [p[0] for p in pairs[::4]]
    for ax, values, heading in zip(axes, (commutator, exchange), ("commutator", "exchange")):
        grid = np.log10(np.maximum(np.asarray(values, dtype=float), FLOOR)).reshape(4, 4)
        im = ax.imshow(grid, cmap="viridis")
        ax.set_xticks(range(4), labels)
        ax.set_yticks(range(4), labels)
        ax.set_xlabel("second factor")
        ax.set_ylabel("first factor")
        ax.set_title(heading)
        ax.grid(False)
        fig.colorbar(im, ax=ax, shrink=0.8, label="log10 norm")
    if title:
        fig.suptitle(title)
    return _save(fig, directory, name)


def plot_z_profile(triples: list, names: tuple, directory: str, name: str = "z_profile.png",
                   title: str = "") -> str:
    """Bar chart of configuration counts per weight-exponent profile."""
    set_publication_style()
    fig, ax = new_figure()
    labels = [" ".join(f"{n}^{e}" for n, e in zip(names, t[:-1]) if e) or "1" for t in triples]
    counts = [float(t[-1]) for t in triples]
    ax.bar(range(len(counts)), counts, color="0.4")
    ax.set_xticks(range(len(counts)), labels, rotation=45, ha="right")
    ax.set_ylabel("configurations")
    if title:
        ax.set_title(title)
    return _save(fig, directory, name)
