"""Figure rendering for solve and sweep reports.

Figures are written next to the CSV/JSON outputs; the delimited files remain
the machine interface.
"""
from __future__ import annotations

from typing import Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .state import PairState
from .surface import SurfaceSample

__all__ = ["profile_figure", "trace_figure", "surface_figure"]


def profile_figure(state: PairState, path: str, title: str = "") -> str:
    x = state.grid.x
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(x, state.rho.values, label=r"$\rho$", color="tab:blue")
    axes[0].plot(x, state.v.values, label=r"$v$", color="tab:orange")
    axes[0].axhline(1.0, color="gray", lw=0.5, ls=":")
    axes[0].set_ylabel("profiles")
    axes[0].legend()
    if title:
        axes[0].set_title(title)
    axes[1].plot(x, state.phi.values, color="tab:green")
    axes[1].set_ylabel(r"phase gradient $\theta'$")
    axes[1].set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def trace_figure(trace: np.ndarray, path: str) -> str:
    fig, ax1 = plt.subplots(figsize=(7, 4))
    it = trace[:, 0]
    ax1.plot(it, trace[:, 1], color="tab:blue", label="energy")
    ax1.set_xlabel("iteration")
    ax1.set_ylabel("energy", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.semilogy(it, trace[:, 2], color="tab:red", label="gradient norm")
    ax2.set_ylabel("gradient norm", color="tab:red")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def surface_figure(samples: Sequence[SurfaceSample], path: str) -> str:
    qs = sorted({s.q for s in samples})
    ms = sorted({s.m for s in samples})
    grid = np.full((len(ms), len(qs)), np.nan)
    for s in samples:
        grid[ms.index(s.m), qs.index(s.q)] = s.e_min
    fig, ax = plt.subplots(figsize=(6.5, 5))
    im = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis",
                   extent=(min(qs), max(qs), min(ms), max(ms)))
    for s in samples:
        ax.plot(s.q, s.m, marker="o" if s.converged else "x",
                color="white" if s.converged else "red", ms=4)
    fig.colorbar(im, ax=ax, label=r"$E_{\min}(q, m)$")
    ax.set_xlabel("momentum target q")
    ax.set_ylabel("mass target m")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
