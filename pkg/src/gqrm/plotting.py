"""Matplotlib rendering of spectrum sweeps to figure files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .spectra import SpectrumTable


def spectrum_figure(table: SpectrumTable, title: str = ""):
    """Normalized level differences against the coupling strength."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    etas = table.etas
    for j in range(table.n_levels):
        ax.plot(etas, table.level(j), lw=1.2)
    ax.set_xlabel(r"normalized coupling $\eta$")
    ax.set_ylabel(r"$(E_j - E_0)/\omega_{\mathrm{ph}}$")
    if title:
        ax.set_title(title)
    ax.set_xlim(etas[0], etas[-1])
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def save_spectrum_plot(table: SpectrumTable, path, title: str = "") -> None:
    """Render and write the figure; format follows the file extension
    (.svg, .png, .pdf)."""
    fig = spectrum_figure(table, title=title)
    try:
        fig.savefig(path)
    finally:
        plt.close(fig)
