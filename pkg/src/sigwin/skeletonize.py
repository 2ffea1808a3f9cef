"""Binary thinning to one-pixel-wide skeletons.

Implements the Zhang-Suen two-subiteration rule: boundary pixels are peeled
in two alternating parallel passes until nothing changes.  Pixels outside the
image frame count as background.  One deviation from the textbook rule: the
parallel formulation erases an isolated 2x2 square outright, which would drop
a whole component, so those squares are exempted and survive as 2x2 residues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .imaging import BinaryImage, as_binary, foreground_count


@dataclass(frozen=True)
class Skeleton:
    """Thinned image plus the foreground count of the source it came from."""

    image: BinaryImage
    source_foreground_count: int


def _neighbors(padded: NDArray[np.uint8]):
    """Return the eight neighbor planes P2..P9 (N, NE, E, SE, S, SW, W, NW)."""
    c = padded[1:-1, 1:-1]
    n = padded[:-2, 1:-1]
    s = padded[2:, 1:-1]
    e = padded[1:-1, 2:]
    w = padded[1:-1, :-2]
    ne = padded[:-2, 2:]
    se = padded[2:, 2:]
    sw = padded[2:, :-2]
    nw = padded[:-2, :-2]
    del c
    return n, ne, e, se, s, sw, w, nw


def _isolated_2x2(img: NDArray[np.uint8]) -> NDArray[np.bool_]:
    """Mask of pixels belonging to a fully isolated 2x2 foreground square."""
    p = np.pad(img, 1)
    # all-foreground 2x2 block anchored at its top-left pixel
    blk = (p[1:-1, 1:-1] & p[1:-1, 2:] & p[2:, 1:-1] & p[2:, 2:]).astype(bool)
    if not blk.any():
        return np.zeros_like(blk)
    # block is isolated iff the surrounding 4x4 neighborhood holds exactly 4 ink pixels
    p2 = np.pad(img.astype(np.int32), 2)
    csum = p2.cumsum(0).cumsum(1)
    h, w = img.shape
    r0 = np.arange(h) + 1  # 4x4 region rows [r-1, r+2] in p2 coords
    c0 = np.arange(w) + 1
    total4 = (
        csum[np.ix_(r0 + 3, c0 + 3)]
        - csum[np.ix_(r0 - 1, c0 + 3)]
        - csum[np.ix_(r0 + 3, c0 - 1)]
        + csum[np.ix_(r0 - 1, c0 - 1)]
    )
    anchor = blk & (total4 == 4)
    if not anchor.any():
        return np.zeros_like(blk)
    mask = np.zeros((h + 1, w + 1), dtype=bool)
    ar, ac = np.nonzero(anchor)
    for dr in (0, 1):
        for dc in (0, 1):
            mask[ar + dr, ac + dc] = True
    return mask[:h, :w]


def _transitions(seq: list[NDArray[np.uint8]]) -> NDArray[np.int32]:
    """Count 0->1 transitions around the cyclic neighbor sequence."""
    total = np.zeros(seq[0].shape, dtype=np.int32)
    for a, b in zip(seq, seq[1:] + seq[:1]):
        total += (1 - a) * b
    return total


def _subiteration(img: NDArray[np.uint8], second: bool, keep: NDArray[np.bool_]) -> NDArray[np.uint8]:
    padded = np.pad(img, 1)
    p2, p3, p4, p5, p6, p7, p8, p9 = _neighbors(padded)
    b = (
        p2.astype(np.int32) + p3 + p4 + p5 + p6 + p7 + p8 + p9
    )
    a = _transitions([p2, p3, p4, p5, p6, p7, p8, p9])
    if second:
        cond3 = p2 * p4 * p8 == 0
        cond4 = p2 * p6 * p8 == 0
    else:
        cond3 = p2 * p4 * p6 == 0
        cond4 = p4 * p6 * p8 == 0
    deletable = (
        (img == 1) & (b >= 2) & (b <= 6) & (a == 1) & cond3 & cond4 & ~keep
    )
    if deletable.any():
        img = img.copy()
        img[deletable] = 0
    return img


def thin(img: BinaryImage) -> Skeleton:
    """Peel boundary pixels with the two-subiteration rule until stable."""
    src = as_binary(img)
    work = src.astype(np.uint8)
    while True:
        after1 = _subiteration(work, second=False, keep=_isolated_2x2(work))
        after2 = _subiteration(after1, second=True, keep=_isolated_2x2(after1))
        if np.array_equal(after2, work):
            break
        work = after2
    return Skeleton(image=work.astype(bool), source_foreground_count=foreground_count(src))
