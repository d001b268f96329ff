"""Figures written next to CLI output (``--figure PATH``)."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.2),
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def norm_histogram(exponents, q: int, path, title: str = "") -> Path:
    """Bar chart of how many elements have ||x||_max = q^k, per k."""
    counts = Counter(exponents)
    keys = sorted(counts)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.bar([str(k) for k in keys], [counts[k] for k in keys], color="0.35")
        ax.set_xlabel(f"k  (norm = {q}^k)")
        ax.set_ylabel("elements")
        ax.set_title(title or "bounded-norm elements by norm")
        return _save(fig, path)


def invariant_profile(profile: dict, l: int, path, title: str = "") -> Path:
    """Local invariants k/l per ramified place."""
    labels = [str(v) for v in profile]
    values = [float(f) for f in profile.values()]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.bar(labels, values, color="0.35")
        ax.set_ylim(0, 1)
        ax.set_yticks([k / l for k in range(l + 1)])
        ax.set_yticklabels([f"{k}/{l}" for k in range(l + 1)])
        ax.set_ylabel("local invariant")
        ax.set_title(title or f"ramified places (sum = {sum(profile.values()) % 1})")
        if not labels:
            ax.text(0.5, 0.5, "split everywhere", ha="center", va="center", transform=ax.transAxes)
        return _save(fig, path)


def valuation_histogram(histogram: dict, path, title: str = "") -> Path:
    """Counts of v(gamma(a)) over sampled a, with the negative side shaded."""
    keys = sorted(int(k) for k in histogram)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        colors = ["tab:red" if k < 0 else "0.35" for k in keys]
        ax.bar([str(k) for k in keys], [histogram[str(k)] for k in keys], color=colors)
        ax.set_xlabel("valuation of gamma(a)")
        ax.set_ylabel("samples")
        ax.set_title(title or "gamma valuations at (1,1)-places")
        return _save(fig, path)


def series_coefficients(series, path, title: str = "") -> Path:
    """Nonzero pattern of a Laurent series by power of t."""
    exps = [-(series.order + i) for i, c in enumerate(series.coeffs)]
    nonzero = [1 if c else 0 for c in series.coeffs]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.stem(exps, nonzero, basefmt=" ")
        ax.set_xlabel("power of t")
        ax.set_yticks([0, 1])
        ax.set_yticklabels(["0", "nonzero"])
        ax.invert_xaxis()
        ax.set_title(title or str(series)[:60])
        return _save(fig, path)
