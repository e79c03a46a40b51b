"""Figures written next to CLI reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 120,
}


def _subgroup_label(entry) -> str:
    H = entry.subgroup
    if H.rank == 0:
        return "{0}"
    return " ".join("(" + ",".join(map(str, b)) + ")" for b in H.basis)


def plot_bounds(report, path: str | Path) -> Path:
    """Bar chart of the zero-set bound per isotropy subgroup."""
    path = Path(path)
    entries = report.per_subgroup
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(entries) + 2), 3.0))
        x = np.arange(len(entries))
        vals = [e.bound for e in entries]
        colors = ["tab:blue" if v >= 0 else "tab:gray" for v in vals]
        ax.bar(x, vals, color=colors)
        ax.axhline(report.global_bound, color="tab:red", lw=1, ls="--", label="global bound")
        ax.axhline(0, color="k", lw=0.5)
        ax.set_xticks(x)
        ax.set_xticklabels([_subgroup_label(e) for e in entries], rotation=45, ha="right")
        ax.set_xlabel("isotropy subgroup H (basis)")
        ax.set_ylabel(r"$\dim_R V^H - \dim_R W^H - 1$")
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_verification(residuals: np.ndarray, spectra: list[list[float]], path: str | Path,
                      tol: float | None = None) -> Path:
    """Residual histogram and normalized local PCA spectra."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.0))
        r = np.log10(np.maximum(np.asarray(residuals, dtype=float), 1e-18))
        a1.hist(r, bins=40, color="tab:blue")
        if tol is not None:
            a1.axvline(np.log10(tol), color="tab:red", ls="--", lw=1, label="tolerance")
            a1.legend(loc="best")
        a1.set_xlabel(r"$\log_{10}|f(gx) - g f(x)|$")
        a1.set_ylabel("trials")
        for s in spectra:
            s = np.asarray(s)
            if len(s) and s[0] > 0:
                a2.semilogy(np.arange(1, len(s) + 1), s / s[0], color="tab:blue", alpha=0.2, lw=0.8)
        a2.set_xlabel("singular value index")
        a2.set_ylabel(r"$\sigma_i / \sigma_1$")
        a2.set_title(f"{len(spectra)} neighborhoods")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
