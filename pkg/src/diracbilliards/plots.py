"""Figure rendering for the CLI report path.

Every command that writes data can also drop a PNG next to it; rendering
is optional and never touches the data files themselves.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def save_series_figure(series, path, title: str):
    """Wall position, norm and energy stacked against time."""
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(6.4, 6.0))
    axes[0].plot(series.t, series.L, lw=1.2)
    axes[0].set_ylabel("L(t)")
    axes[1].plot(series.t, series.norm, lw=1.2, color="tab:orange")
    axes[1].set_ylabel("norm")
    axes[2].plot(series.t, series.energy, lw=1.2, color="tab:green")
    axes[2].set_ylabel("energy")
    axes[2].set_xlabel("t")
    axes[0].set_title(title)
    for ax in axes:
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_spectrum_figure(eigenvalues, path, title: str):
    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    n = np.arange(1, len(eigenvalues) + 1)
    ax.stem(n, eigenvalues, basefmt=" ")
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\lambda_n$")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_mode_figure(y, psi1, psi2, path, title: str):
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(y, np.abs(psi1), lw=1.3, label=r"$|\Psi_1|$")
    ax.plot(y, np.abs(psi2), lw=1.3, label=r"$|\Psi_2|$")
    ax.plot(y, psi1.real, lw=0.8, ls="--", alpha=0.7, label=r"Re $\Psi_1$")
    ax.plot(y, psi2.real, lw=0.8, ls=":", alpha=0.7, label=r"Re $\Psi_2$")
    ax.set_xlabel("y")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
