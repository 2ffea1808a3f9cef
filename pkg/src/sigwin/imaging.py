"""Grayscale loading, Otsu binarization and background speck removal.

Images are plain numpy arrays throughout the package: a grayscale image is a
``(height, width)`` uint8 array, a binary image is a ``(height, width)`` bool
array where True marks foreground ink.  Coordinates in tuples are always
``(x, y)`` with x running along columns and y along rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

GrayImage = NDArray[np.uint8]
BinaryImage = NDArray[np.bool_]

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def as_gray(pixels) -> GrayImage:
    """Coerce array-like input to a validated (h, w) uint8 grayscale image."""
    arr = np.asarray(pixels)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"grayscale image must be 2-D and nonempty, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"grayscale image must hold integers 0..255, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("grayscale intensities must lie in 0..255")
        arr = arr.astype(np.uint8)
    return arr


def as_binary(bits) -> BinaryImage:
    """Coerce array-like input to a validated (h, w) bool image."""
    arr = np.asarray(bits)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"binary image must be 2-D and nonempty, got shape {arr.shape}")
    return arr.astype(bool)


def foreground_count(img: BinaryImage) -> int:
    return int(np.count_nonzero(img))


@dataclass(frozen=True)
class Component:
    """One maximal 8-connected blob of foreground pixels.

    ``pixels`` is a (k, 2) int array of (x, y) coordinates in row-major scan
    order; ``bounding_box`` is the tight (x_min, y_min, x_max, y_max).
    """

    label: int
    pixels: NDArray[np.int64]
    bounding_box: tuple[int, int, int, int]

    @property
    def size(self) -> int:
        return len(self.pixels)


def otsu_threshold(img: GrayImage) -> int:
    """Threshold maximizing between-class variance; smallest value wins ties.

    The split at threshold t puts intensities <= t in the dark class.  The
    variance comparison is done in exact integer arithmetic (cross-multiplied
    rationals), so the argmax never depends on floating-point rounding.
    """
    img = as_gray(img)
    hist = np.bincount(img.ravel(), minlength=256)
    counts = [int(c) for c in hist]
    total = sum(counts)
    total_sum = sum(i * c for i, c in enumerate(counts))

    # variance(t) = (s0*w1 - s1*w0)^2 / (w0*w1); compare a/b vs c/d as a*d vs c*b
    best_t = 0
    best_num = 0
    best_den = 1
    w0 = 0
    s0 = 0
    for t in range(256):
        w0 += counts[t]
        s0 += t * counts[t]
        w1 = total - w0
        s1 = total_sum - s0
        den = w0 * w1
        if den == 0:
            num = 0
            den = 1
        else:
            num = (s0 * w1 - s1 * w0) ** 2
        if num * best_den > best_num * den:
            best_t = t
            best_num = num
            best_den = den
    return best_t


def binarize(img: GrayImage, t: int) -> BinaryImage:
    """Mark every pixel with intensity <= t as foreground (dark ink on paper)."""
    if not 0 <= t <= 255:
        raise ValueError(f"threshold must lie in 0..255, got {t}")
    return as_gray(img) <= t


def connected_components(img: BinaryImage) -> list[Component]:
    """Partition foreground into maximal 8-connected components.

    Labels are assigned in order of each component's first pixel in a
    row-major scan.  An empty image yields an empty list.
    """
    img = as_binary(img)
    labeled, n = ndimage.label(img, structure=_EIGHT_CONNECTED)
    if n == 0:
        return []
    ys, xs = np.nonzero(img)
    raw = labeled[ys, xs]
    # nonzero() is row-major, so the first occurrence of each raw label fixes
    # its scan-order rank
    _, first_idx = np.unique(raw, return_index=True)
    rank = np.empty(n + 1, dtype=np.int64)
    rank[raw[np.sort(first_idx)]] = np.arange(1, n + 1)
    order = rank[raw]

    components = []
    for new_label in range(1, n + 1):
        sel = order == new_label
        cx = xs[sel].astype(np.int64)
        cy = ys[sel].astype(np.int64)
        pixels = np.column_stack([cx, cy])
        bbox = (int(cx.min()), int(cy.min()), int(cx.max()), int(cy.max()))
        components.append(Component(label=new_label, pixels=pixels, bounding_box=bbox))
    return components


def remove_specks(img: BinaryImage, min_size: int = 8) -> BinaryImage:
    """Erase every 8-connected component smaller than min_size pixels."""
    if min_size < 0:
        raise ValueError(f"min_size must be >= 0, got {min_size}")
    img = as_binary(img)
    if min_size <= 1:
        return img.copy()
    labeled, n = ndimage.label(img, structure=_EIGHT_CONNECTED)
    if n == 0:
        return img.copy()
    sizes = np.bincount(labeled.ravel(), minlength=n + 1)
    keep = sizes >= min_size
    keep[0] = False
    return keep[labeled]
