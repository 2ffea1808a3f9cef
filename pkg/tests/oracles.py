"""Independent reference implementations used to check the fast paths.

Everything here is deliberately written the slow, obvious way: exact
rational arithmetic instead of the library's integer tricks, python loops
instead of vectorization, scipy labeling instead of the wrapped variant.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import ndimage


def otsu_exhaustive(img: np.ndarray) -> int:
    """Smallest threshold maximizing between-class variance, in exact rationals."""
    hist = np.bincount(img.ravel(), minlength=256)
    total = int(hist.sum())
    best_t, best_var = 0, Fraction(-1)
    for t in range(256):
        w0 = int(hist[: t + 1].sum())
        w1 = total - w0
        if w0 == 0 or w1 == 0:
            var = Fraction(0)
        else:
            s0 = int((np.arange(t + 1) * hist[: t + 1]).sum())
            s1 = int((np.arange(256) * hist).sum()) - s0
            mu0 = Fraction(s0, w0)
            mu1 = Fraction(s1, w1)
            var = Fraction(w0 * w1, total * total) * (mu0 - mu1) ** 2
        if var > best_var:
            best_t, best_var = t, var
    return best_t


def phi_bruteforce(a: np.ndarray, b: np.ndarray) -> float:
    """Phi coefficient by enumerating every pixel pair with plain counters."""
    n11 = n10 = n01 = n00 = 0
    for pa, pb in zip(a.ravel().tolist(), b.ravel().tolist()):
        if pa and pb:
            n11 += 1
        elif pa and not pb:
            n10 += 1
        elif not pa and pb:
            n01 += 1
        else:
            n00 += 1
    den = (n11 + n10) * (n01 + n00) * (n11 + n01) * (n10 + n00)
    if den == 0:
        return 1.0 if n10 == 0 and n01 == 0 else 0.0
    return (n11 * n00 - n10 * n01) / math.sqrt(den)


def count_components_8(img: np.ndarray) -> int:
    _, count = ndimage.label(img, structure=np.ones((3, 3), dtype=int))
    return int(count)


def random_blob(rng: np.random.Generator, size: int = 48) -> np.ndarray:
    """Union of a few random discs plus a random walk; occasionally multiple blobs."""
    img = np.zeros((size, size), dtype=bool)
    yy, xx = np.mgrid[0:size, 0:size]
    for _ in range(int(rng.integers(1, 4))):
        cy, cx = rng.integers(6, size - 6, size=2)
        r = int(rng.integers(2, 7))
        img |= (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r
    y, x = rng.integers(4, size - 4, size=2)
    for _ in range(int(rng.integers(20, 80))):
        img[y, x] = True
        y = int(np.clip(y + rng.integers(-1, 2), 1, size - 2))
        x = int(np.clip(x + rng.integers(-1, 2), 1, size - 2))
    return img


def random_fragment(rng: np.random.Generator, n: int = 13, density: float | None = None) -> np.ndarray:
    if density is None:
        density = float(rng.uniform(0.1, 0.9))
    return rng.random((n, n)) < density
