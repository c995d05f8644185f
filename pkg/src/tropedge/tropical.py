"""Min-plus / max-plus convolution, the tropical gradient, and kernel banks.

In the tropical setting the convolution sum becomes a minimum (or maximum)
and the per-cell product becomes an addition: each output pixel is
``min_{i,j} [K(i,j) + I(..)]`` (min-plus) or the max-plus dual. Min-plus
selects the dominant downward intensity transition in the neighborhood,
max-plus the dominant upward one; outputs are signed and may be negative.

Both the classical and tropical operators here use cross-correlation
orientation (the kernel is laid over the neighborhood as printed, without
flipping), so symmetric-looking worked examples evaluate cell-for-cell.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidInputError
from .image_core import PaddingMode, as_image, as_kernel, pad

Semiring = Literal["min-plus", "max-plus"]

SEMIRINGS = ("min-plus", "max-plus")


@dataclass(frozen=True)
class KernelBank:
    """An ordered, non-empty set of equally sized kernels fused as one detector."""

    name: str
    kernels: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.kernels:
            raise InvalidInputError(f"kernel bank {self.name!r} is empty")
        kernels = tuple(as_kernel(k, name=f"{self.name}[{i}]")
                        for i, k in enumerate(self.kernels))
        sides = {k.shape[0] for k in kernels}
        if len(sides) != 1:
            raise InvalidInputError(
                f"kernel bank {self.name!r} mixes sizes {sorted(sides)}"
            )
        object.__setattr__(self, "kernels", kernels)

    def __len__(self) -> int:
        return len(self.kernels)


def _check_semiring(semiring: str) -> None:
    if semiring not in SEMIRINGS:
        raise InvalidInputError(f"unknown semiring {semiring!r}; use one of {SEMIRINGS}")


def _check_kernel_fits(img: np.ndarray, k: np.ndarray) -> None:
    if k.shape[0] > min(img.shape):
        raise InvalidInputError(
            f"kernel side {k.shape[0]} exceeds image dimensions {img.shape}"
        )


def classical_convolve(img: np.ndarray, kernel: np.ndarray,
                       border: PaddingMode = "replicate") -> np.ndarray:
    """Linear convolution (cross-correlation orientation), same-size output.

    Each output pixel is the sum over the kernel support of
    ``coefficient * neighbor``; borders are resolved by ``border`` padding.
    """
    img = as_image(img)
    k = as_kernel(kernel)
    _check_kernel_fits(img, k)
    side = k.shape[0]
    margin = side // 2
    padded = pad(img, margin, border)
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.float64)
    for i in range(side):
        for j in range(side):
            out += k[i, j] * padded[i:i + h, j:j + w]
    return out


def tropical_convolve(img: np.ndarray, kernel: np.ndarray,
                      semiring: Semiring = "min-plus",
                      border: PaddingMode = "replicate") -> np.ndarray:
    """Tropical convolution: min (or max) over the support of coefficient + neighbor.

    Every kernel cell participates (zero coefficients are offsets, not holes).
    The output is signed; min-plus responses mark strong edges with large
    negative values.
    """
    img = as_image(img)
    k = as_kernel(kernel)
    _check_semiring(semiring)
    _check_kernel_fits(img, k)
    side = k.shape[0]
    margin = side // 2
    padded = pad(img, margin, border)
    h, w = img.shape
    combine = np.minimum if semiring == "min-plus" else np.maximum
    out = np.full((h, w), np.inf if semiring == "min-plus" else -np.inf)
    for i in range(side):
        for j in range(side):
            combine(out, k[i, j] + padded[i:i + h, j:j + w], out=out)
    return out


def tropical_gradient(img: np.ndarray) -> np.ndarray:
    """Element-wise minimum of zero-padded forward differences along both axes.

    The row-direction difference grid ``I[r+1, c] - I[r, c]`` is padded with a
    zero bottom row and the column-direction grid ``I[r, c+1] - I[r, c]`` with
    a zero right column, then the two full-size grids are combined by
    element-wise min. Strongly negative outputs mark edges.
    """
    img = as_image(img)
    h, w = img.shape
    if h < 2 or w < 2:
        raise InvalidInputError(f"tropical gradient needs at least 2x2, got {img.shape}")
    d_row = np.zeros_like(img)
    d_row[:-1, :] = img[1:, :] - img[:-1, :]
    d_col = np.zeros_like(img)
    d_col[:, :-1] = img[:, 1:] - img[:, :-1]
    return np.minimum(d_row, d_col)


def fuse_bank(img: np.ndarray, bank: KernelBank,
              semiring: Semiring = "max-plus",
              border: PaddingMode = "replicate") -> np.ndarray:
    """Fuse per-kernel tropical responses across a bank.

    Max-plus banks combine by element-wise max (strongest upward response
    wins); min-plus banks combine by element-wise min (strongest drop wins).
    """
    _check_semiring(semiring)
    if not isinstance(bank, KernelBank):
        bank = KernelBank("bank", tuple(bank))
    responses = [tropical_convolve(img, k, semiring, border) for k in bank.kernels]
    combine = np.minimum if semiring == "min-plus" else np.maximum
    out = responses[0]
    for r in responses[1:]:
        out = combine(out, r)
    return out


# --------------------------------------------------------------------------
# Named kernel banks
# --------------------------------------------------------------------------

#: The eight 3x3 directional masks, ordered 0, 90, 180, 270, 45, 135, 225, 315 degrees.
DIRECTIONAL_MASKS = {
    0: np.array([[1, 1, 1], [0, 0, 0], [-1, -1, -1]], dtype=np.float64),
    90: np.array([[1, 0, -1], [1, 0, -1], [1, 0, -1]], dtype=np.float64),
    180: np.array([[-1, -1, -1], [0, 0, 0], [1, 1, 1]], dtype=np.float64),
    270: np.array([[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]], dtype=np.float64),
    45: np.array([[2, 1, 0], [1, 0, -1], [0, -1, -2]], dtype=np.float64),
    135: np.array([[0, 1, 2], [-1, 0, 1], [-2, -1, 0]], dtype=np.float64),
    225: np.array([[-2, -1, 0], [-1, 0, 1], [0, 1, 2]], dtype=np.float64),
    315: np.array([[0, -1, -2], [1, 0, -1], [2, 1, 0]], dtype=np.float64),
}

#: The four cross/diagonal difference masks fused by the max-plus detector.
CROSS_MASKS = (
    np.array([[1, 2, 1], [0, -4, 0], [-1, -2, -1]], dtype=np.float64),
    np.array([[1, 0, -1], [2, -4, -2], [1, 0, -1]], dtype=np.float64),
    np.array([[-1, -2, -1], [0, -4, 0], [1, 2, 1]], dtype=np.float64),
    np.array([[-1, 0, 1], [-2, -4, 2], [-1, 0, 1]], dtype=np.float64),
)


def directional8() -> KernelBank:
    """All eight directional masks in their canonical order."""
    order = (0, 90, 180, 270, 45, 135, 225, 315)
    return KernelBank("directional8", tuple(DIRECTIONAL_MASKS[a] for a in order))


def directional6() -> KernelBank:
    """Six-mask subset at 0, 45, 90, 135, 180, 270 degrees.

    The six-kernel variant is named but never listed anywhere authoritative;
    this reconstruction takes the directional masks at the six angles above.
    """
    order = (0, 45, 90, 135, 180, 270)
    return KernelBank("directional6", tuple(DIRECTIONAL_MASKS[a] for a in order))


def hessian4() -> KernelBank:
    """The four-kernel bank used by the max-plus fusion detector."""
    return KernelBank("hessian4", CROSS_MASKS)


_BUILTIN_BANKS = {
    "directional8": directional8,
    "directional6": directional6,
    "hessian4": hessian4,
}


def get_bank(name: str) -> KernelBank:
    """Return a built-in bank by name (directional8, directional6, hessian4)."""
    try:
        return _BUILTIN_BANKS[name]()
    except KeyError:
        raise InvalidInputError(
            f"unknown kernel bank {name!r}; built-ins: {sorted(_BUILTIN_BANKS)}"
        ) from None


def load_kernel_bank(path: str | os.PathLike) -> KernelBank:
    """Load a bank from a plain-text kernel file.

    One kernel per block: rows of space-separated reals, blocks separated by
    blank lines. The bank name is the file stem.
    """
    name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read kernel file {path}: {exc}") from exc
    kernels = []
    for block in text.split("\n\n"):
        rows = [line.split() for line in block.strip().splitlines()
                if line.strip() and not line.lstrip().startswith("#")]
        if not rows:
            continue
        try:
            mat = np.array([[float(v) for v in row] for row in rows])
        except ValueError as exc:
            raise InvalidInputError(f"malformed kernel block in {path}: {exc}") from exc
        kernels.append(mat)
    if not kernels:
        raise InvalidInputError(f"kernel file {path} contains no kernels")
    return KernelBank(name, tuple(kernels))
