"""Deterministic synthetic test images.

Five textured grayscale scenes (gradients, shapes, periodic texture, seeded
noise) used by the test suite and handy for trying the CLI without assets.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import InvalidInputError
from .image_core import save_image

SAMPLE_NAMES = ("bars", "rings", "grid", "waves", "spots")


def _canvas(dims: tuple[int, int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    h, w = dims
    rr, cc = np.mgrid[0:h, 0:w].astype(np.float64)
    return np.zeros((h, w)), rr / max(h - 1, 1), cc / max(w - 1, 1)


def sample_image(name: str, dims: tuple[int, int] = (300, 400)) -> np.ndarray:
    """Generate one named sample scene at (height, width), values in [0, 1]."""
    if name not in SAMPLE_NAMES:
        raise InvalidInputError(f"unknown sample {name!r}; valid: {SAMPLE_NAMES}")
    h, w = int(dims[0]), int(dims[1])
    img, rn, cn = _canvas((h, w))
    rng = np.random.default_rng(SAMPLE_NAMES.index(name) + 11)
    if name == "bars":
        img = 0.25 + 0.4 * cn
        img[int(0.2 * h):int(0.45 * h), int(0.15 * w):int(0.4 * w)] = 0.9
        img[int(0.55 * h):int(0.85 * h), int(0.55 * w):int(0.9 * w)] = 0.08
        img += 0.05 * np.sin(2 * np.pi * 9 * rn)
    elif name == "rings":
        r = np.hypot(rn - 0.5, cn - 0.5)
        img = 0.5 + 0.35 * np.cos(2 * np.pi * 6 * r) * np.exp(-2.5 * r)
        img += 0.2 * cn
    elif name == "grid":
        img = 0.3 + 0.3 * rn
        img += 0.35 * ((np.sin(2 * np.pi * 7 * cn) > 0.6)
                       | (np.sin(2 * np.pi * 5 * rn) > 0.6))
        yy, xx = int(0.3 * h), int(0.7 * w)
        blob = np.exp(-(((rn - 0.3) * h) ** 2 + ((cn - 0.7) * w) ** 2)
                      / (2 * (0.08 * min(h, w)) ** 2))
        img -= 0.3 * blob
    elif name == "waves":
        img = 0.5 + 0.22 * np.sin(2 * np.pi * 4 * cn) * np.cos(2 * np.pi * 3 * rn)
        img += 0.3 * (cn + rn > 1.0)
        img -= 0.15 * rn
    else:  # spots
        img = 0.2 + 0.5 * rn * cn
        for (cy, cx, rad, amp) in ((0.25, 0.3, 0.10, 0.55), (0.6, 0.65, 0.14, -0.15),
                                   (0.75, 0.25, 0.08, 0.6), (0.35, 0.8, 0.07, 0.5)):
            d2 = ((rn - cy) * h) ** 2 + ((cn - cx) * w) ** 2
            img += amp * (d2 < (rad * min(h, w)) ** 2)
    img += rng.normal(0.0, 0.015, size=img.shape)
    return np.clip(img, 0.0, 1.0)


def write_sample_images(out_dir: str | os.PathLike,
                        dims: tuple[int, int] = (300, 400),
                        ext: str = ".png") -> list[str]:
    """Write all sample scenes into a directory; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name in SAMPLE_NAMES:
        path = os.path.join(os.fspath(out_dir), f"{name}{ext}")
        save_image(path, sample_image(name, dims))
        paths.append(path)
    return paths
