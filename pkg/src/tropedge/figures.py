"""Figure rendering for comparison reports."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_montage(path: str | os.PathLike, original: np.ndarray,
                   panels: list[tuple[str, np.ndarray]]) -> None:
    """Save a one-row montage: the original image first, then each edge map."""
    count = len(panels) + 1
    fig, axes = plt.subplots(1, count, figsize=(2.6 * count, 2.9))
    axes = np.atleast_1d(axes)
    axes[0].imshow(original, cmap="gray", vmin=0.0, vmax=1.0)
    axes[0].set_title("original", fontsize=9)
    for ax, (name, edge_map) in zip(axes[1:], panels):
        ax.imshow(np.asarray(edge_map, dtype=float), cmap="gray", vmin=0.0, vmax=1.0)
        ax.set_title(name, fontsize=9)
    for ax in axes:
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
