"""Fragment features, correlation similarity and leader clustering.

Similarity between two equally sized binary fragments is the phi coefficient
of their pixelwise 2x2 contingency table.  All contingency counts are exact
integers, and every arithmetic intermediate fits a float64 exactly, so the
scalar and the vectorized batch path return bit-identical scores; clustering
decisions therefore never depend on which path computed them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatchError, EmptyFragmentError, FormatError
from .windowing import Fragment, WindowSpec

DEFAULT_THETA = 0.8

_HEADER_RE = re.compile(r"^SIGWIN-CODEBOOK v1 n=(\d+) theta=([^\s]+)$")
_CLASS_RE = re.compile(r"^class (\d+) freq=(\d+)$")


@dataclass(frozen=True)
class FeatureVector:
    """Projection and shape statistics of a corner-adjusted fragment."""

    hh: NDArray[np.int64]
    vh: NDArray[np.int64]
    upper: int
    lower: int
    rect: float
    perim: int


@dataclass(frozen=True)
class PixelContingency:
    n11: int
    n10: int
    n01: int
    n00: int

    @property
    def total(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00


@dataclass
class PatternClass:
    """One codebook class: the founding fragment plus everything that joined it."""

    representative: Fragment
    members: list[Fragment] = field(default_factory=list)

    def __post_init__(self):
        if not self.members:
            self.members = [self.representative]

    @property
    def frequency(self) -> int:
        return len(self.members)


@dataclass
class Codebook:
    """Ordered pattern classes for one writer; immutable once built."""

    classes: list[PatternClass] = field(default_factory=list)
    spec: WindowSpec = field(default_factory=WindowSpec)
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if not -1.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (-1, 1], got {self.theta}")

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def frequencies(self) -> list[int]:
        return [c.frequency for c in self.classes]

    @property
    def representatives(self) -> list[Fragment]:
        return [c.representative for c in self.classes]


def _bits(frag) -> NDArray[np.bool_]:
    if isinstance(frag, Fragment):
        return frag.bits
    arr = np.asarray(frag)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"fragment must be 2-d, got shape {arr.shape}")
    return arr.astype(bool)


def features(frag: Fragment) -> FeatureVector:
    """Per-column/per-row ink counts plus extent, rectangularity and boundary size."""
    bits = _bits(frag)
    if not bits.any():
        raise EmptyFragmentError("fragment has no foreground pixel")
    hh = np.count_nonzero(bits, axis=0).astype(np.int64)
    vh = np.count_nonzero(bits, axis=1).astype(np.int64)
    ys, xs = np.nonzero(bits)
    upper, lower = int(ys.min()), int(ys.max())
    bbox = (lower - upper + 1) * (int(xs.max()) - int(xs.min()) + 1)
    padded = np.pad(bits, 1)
    touches_bg = (
        ~padded[:-2, 1:-1] | ~padded[2:, 1:-1] | ~padded[1:-1, :-2] | ~padded[1:-1, 2:]
    )
    return FeatureVector(
        hh=hh,
        vh=vh,
        upper=upper,
        lower=lower,
        rect=bbox / len(ys),
        perim=int(np.count_nonzero(bits & touches_bg)),
    )


def contingency(x, y) -> PixelContingency:
    """Pixelwise agreement counts between two equally sized fragments."""
    a, b = _bits(x), _bits(y)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"fragment shapes differ: {a.shape} vs {b.shape}")
    n11 = int(np.count_nonzero(a & b))
    n10 = int(np.count_nonzero(a & ~b))
    n01 = int(np.count_nonzero(~a & b))
    return PixelContingency(n11=n11, n10=n10, n01=n01, n00=a.size - n11 - n10 - n01)


def _phi(n11: int, n10: int, n01: int, n00: int) -> float:
    # constant fragment -> zero denominator; the natural limit is an identity check
    den_sq = (n11 + n10) * (n01 + n00) * (n11 + n01) * (n10 + n00)
    if den_sq == 0:
        return 1.0 if n10 == 0 and n01 == 0 else 0.0
    return (n11 * n00 - n10 * n01) / math.sqrt(den_sq)


def similarity(x, y) -> float:
    """Phi-coefficient similarity in [-1, 1]; 1 means identical bit patterns."""
    c = contingency(x, y)
    return _phi(c.n11, c.n10, c.n01, c.n00)


def _stack(frags) -> NDArray[np.float64]:
    if not frags:
        return np.zeros((0, 0), dtype=np.float64)
    rows = []
    size = None
    for f in frags:
        bits = _bits(f)
        if size is None:
            size = bits.shape
        elif bits.shape != size:
            raise DimensionMismatchError(f"fragment shapes differ: {size} vs {bits.shape}")
        rows.append(bits.ravel())
    return np.asarray(rows, dtype=np.float64)


def _phi_matrix(a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
    # rows are raveled 0/1 fragments; the matmul partial sums are small
    # integers, hence exact, so this equals the scalar path bit for bit
    total = float(a.shape[1])
    n11 = a @ b.T
    n10 = a.sum(axis=1)[:, None] - n11
    n01 = b.sum(axis=1)[None, :] - n11
    n00 = total - n11 - n10 - n01
    den_sq = ((n11 + n10) * (n01 + n00)) * ((n11 + n01) * (n10 + n00))
    num = n11 * n00 - n10 * n01
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = num / np.sqrt(den_sq)
    identical = (n10 == 0) & (n01 == 0)
    return np.where(den_sq == 0.0, np.where(identical, 1.0, 0.0), scores)


def similarity_matrix(xs, ys) -> NDArray[np.float64]:
    """All-pairs similarity between two fragment sequences, rows indexed by xs."""
    a, b = _stack(xs), _stack(ys)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]), dtype=np.float64)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatchError(
            f"fragment sizes differ: {a.shape[1]} vs {b.shape[1]} pixels"
        )
    return _phi_matrix(a, b)


def cluster(fragments: list[Fragment], theta: float = DEFAULT_THETA, spec: WindowSpec | None = None) -> Codebook:
    """Single-pass leader clustering of adjusted fragments.

    The first fragment founds class 1.  Each later fragment joins the class
    whose representative scores highest, provided that score reaches theta
    (ties go to the earliest-founded class); otherwise it founds a new class.
    Representatives are never recomputed, so the pass is deterministic.
    """
    if not -1.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (-1, 1], got {theta}")
    if spec is None:
        spec = WindowSpec(n=fragments[0].n) if fragments else WindowSpec()

    classes: list[PatternClass] = []
    rep_rows: list[NDArray[np.float64]] = []
    rep_matrix = np.zeros((0, 0), dtype=np.float64)
    for frag in fragments:
        row = _bits(frag).ravel().astype(np.float64)
        if classes:
            scores = _phi_matrix(row[None, :], rep_matrix)[0]
            best = int(np.argmax(scores))
            if scores[best] >= theta:
                classes[best].members.append(frag)
                continue
        classes.append(PatternClass(representative=frag))
        rep_rows.append(row)
        rep_matrix = np.asarray(rep_rows)
    return Codebook(classes=classes, spec=spec, theta=theta)


def _format_fragment(frag: Fragment) -> list[str]:
    return ["".join("1" if v else "0" for v in row) for row in frag.bits]


def save_codebook(cb: Codebook, path) -> None:
    """Write a codebook as versioned, diff-able text (bit-exact round trip)."""
    lines = [f"SIGWIN-CODEBOOK v1 n={cb.spec.n} theta={cb.theta!r}"]
    for idx, cls in enumerate(cb.classes, start=1):
        lines.append(f"class {idx} freq={cls.frequency}")
        for member in cls.members:
            lines.extend(_format_fragment(member))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_fragment(lines: list[str], pos: int, n: int, path) -> tuple[Fragment, int]:
    if pos + n > len(lines):
        raise FormatError(f"{path}: truncated fragment at line {pos + 1}")
    rows = []
    for i in range(n):
        line = lines[pos + i]
        if len(line) != n or set(line) - {"0", "1"}:
            raise FormatError(f"{path}: bad fragment row at line {pos + i + 1}: {line!r}")
        rows.append([ch == "1" for ch in line])
    return Fragment(bits=np.array(rows, dtype=bool), adjusted=True), pos + n


def load_codebook(path) -> Codebook:
    """Read a codebook written by save_codebook; strict parse, FormatError on any deviation."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(f"{path}: empty file")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise FormatError(f"{path}: bad header line: {lines[0]!r}")
    n = int(header.group(1))
    try:
        theta = float(header.group(2))
    except ValueError:
        raise FormatError(f"{path}: bad theta: {header.group(2)!r}") from None
    if n < 3 or n % 2 == 0:
        raise FormatError(f"{path}: bad window size n={n}")
    if not -1.0 < theta <= 1.0:
        raise FormatError(f"{path}: theta out of range: {theta}")

    classes: list[PatternClass] = []
    pos = 1
    while pos < len(lines):
        m = _CLASS_RE.match(lines[pos])
        if m is None:
            raise FormatError(f"{path}: expected class line at line {pos + 1}: {lines[pos]!r}")
        if int(m.group(1)) != len(classes) + 1:
            raise FormatError(f"{path}: class index out of order at line {pos + 1}")
        freq = int(m.group(2))
        if freq < 1:
            raise FormatError(f"{path}: class frequency must be >= 1 at line {pos + 1}")
        pos += 1
        members = []
        for _ in range(freq):
            frag, pos = _parse_fragment(lines, pos, n, path)
            members.append(frag)
        classes.append(PatternClass(representative=members[0], members=members))
    return Codebook(classes=classes, spec=WindowSpec(n=n), theta=theta)
