"""Square-window placement along a signature skeleton.

The traversal starts a window at the first ink pixel (topmost, then leftmost)
and follows the skeleton through the window's exit sides, placing abutting
windows as it goes.  Every window sits on a grid anchored at the start pixel,
so any two accepted windows are either identical or fully disjoint, and every
skeleton pixel ends up covered; disconnected strokes are picked up by
reseeding.  Fragments are cut from the original (unthinned) component under
each accepted window and finally shifted to the window's upper-left corner so
placement cannot leak into later comparisons.  No rotation and no scaling is
ever applied.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatchError, EmptyImageError
from .imaging import BinaryImage, as_binary
from .skeletonize import Skeleton

DEFAULT_WINDOW_SIZE = 13


@dataclass(frozen=True)
class WindowSpec:
    """Window geometry and fragment filtering knobs."""

    n: int = DEFAULT_WINDOW_SIZE
    overlap_max: float = 0.0
    min_fragment_pixels: int = 3
    max_slide: int | None = None

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"window size must be odd and >= 3, got {self.n}")
        if not 0.0 <= self.overlap_max <= 1.0:
            raise ValueError(f"overlap_max must lie in [0, 1], got {self.overlap_max}")
        if self.min_fragment_pixels < 0:
            raise ValueError("min_fragment_pixels must be >= 0")
        if self.max_slide is None:
            object.__setattr__(self, "max_slide", self.n // 2)
        elif self.max_slide < 0:
            raise ValueError("max_slide must be >= 0")


@dataclass(frozen=True)
class Window:
    """An n-by-n window at top-left corner (x, y); may overhang the image."""

    x: int
    y: int
    n: int = DEFAULT_WINDOW_SIZE

    @property
    def rect(self) -> tuple[int, int, int, int]:
        """Exclusive bounds (x0, y0, x1, y1)."""
        return self.x, self.y, self.x + self.n, self.y + self.n


@dataclass(frozen=True)
class ExitFlags:
    east: bool = False
    west: bool = False
    north: bool = False
    south: bool = False

    def __bool__(self) -> bool:
        return self.east or self.west or self.north or self.south


@dataclass
class Fragment:
    """An n-by-n ink patch cut at a window, optionally corner-adjusted."""

    bits: NDArray[np.bool_]
    origin_window: Window | None = None
    adjusted: bool = False

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def ink(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fragment):
            return NotImplemented
        return self.adjusted == other.adjusted and np.array_equal(self.bits, other.bits)


def _skeleton_image(skel) -> BinaryImage:
    if isinstance(skel, Skeleton):
        return skel.image
    return as_binary(skel)


def find_start(img: BinaryImage) -> tuple[int, int]:
    """First foreground pixel in a top-to-bottom, left-to-right scan."""
    arr = as_binary(img)
    if not arr.any():
        raise EmptyImageError("image has no foreground pixel")
    idx = int(np.argmax(arr.ravel()))
    y, x = divmod(idx, arr.shape[1])
    return x, y


def _count_in_window(mask: BinaryImage, win: Window) -> int:
    h, w = mask.shape
    x0, y0, x1, y1 = win.rect
    x0, y0 = max(x0, 0), max(y0, 0)
    x1, y1 = min(x1, w), min(y1, h)
    if x0 >= x1 or y0 >= y1:
        return 0
    return int(np.count_nonzero(mask[y0:y1, x0:x1]))


def _overlap_area(a: Window, b: Window) -> int:
    dx = min(a.x + a.n, b.x + b.n) - max(a.x, b.x)
    dy = min(a.y + a.n, b.y + b.n) - max(a.y, b.y)
    return max(dx, 0) * max(dy, 0)


def _near(idx: NDArray[np.int64], bound: int) -> NDArray[np.int64]:
    """Indices within one step of any given index, clipped to [0, bound)."""
    near = np.unique(np.concatenate([idx - 1, idx, idx + 1]))
    return near[(near >= 0) & (near < bound)]


def _side_exits(border: BinaryImage, outside: BinaryImage, win: Window) -> ExitFlags:
    """Exit flags with border pixels read from `border` and the continuation
    checked against `outside` (they differ during traversal, where visited
    skeleton must not be re-entered)."""
    h, w = border.shape
    x0, y0, x1, y1 = win.rect
    cy0, cy1 = max(y0, 0), min(y1, h)
    cx0, cx1 = max(x0, 0), min(x1, w)

    east = west = north = south = False

    col = x1 - 1
    if 0 <= col < w - 1 and cy0 < cy1:
        ys = np.nonzero(border[cy0:cy1, col])[0] + cy0
        if len(ys):
            east = bool(outside[_near(ys, h), col + 1].any())
    col = x0
    if 1 <= col < w and cy0 < cy1:
        ys = np.nonzero(border[cy0:cy1, col])[0] + cy0
        if len(ys):
            west = bool(outside[_near(ys, h), col - 1].any())
    row = y0
    if 1 <= row < h and cx0 < cx1:
        xs = np.nonzero(border[row, cx0:cx1])[0] + cx0
        if len(xs):
            north = bool(outside[row - 1, _near(xs, w)].any())
    row = y1 - 1
    if 0 <= row < h - 1 and cx0 < cx1:
        xs = np.nonzero(border[row, cx0:cx1])[0] + cx0
        if len(xs):
            south = bool(outside[row + 1, _near(xs, w)].any())

    return ExitFlags(east=east, west=west, north=north, south=south)


def exit_flags(skel, win: Window) -> ExitFlags:
    """Which window sides the skeleton leaves through (8-connected steps)."""
    img = _skeleton_image(skel)
    return _side_exits(img, img, win)


def slide_adjust(skel, candidate: Window, axis: str, visited=None, max_slide: int | None = None) -> Window:
    """Translate the candidate along `axis` to best cover unvisited skeleton.

    Offsets are tried in the order 0, -1, +1, -2, +2, ... up to max_slide
    (floor(n/2) by default) and the first strictly better coverage wins, which
    realizes the tie-break "smallest |d|, then negative d".
    """
    if axis not in ("vertical", "horizontal"):
        raise ValueError(f"axis must be 'vertical' or 'horizontal', got {axis!r}")
    img = _skeleton_image(skel)
    target = img if visited is None else img & ~np.asarray(visited, dtype=bool)
    if max_slide is None:
        max_slide = candidate.n // 2

    best = candidate
    best_cov = -1
    for step in range(max_slide + 1):
        for d in ((0,) if step == 0 else (-step, step)):
            if axis == "vertical":
                moved = Window(candidate.x, candidate.y + d, candidate.n)
            else:
                moved = Window(candidate.x + d, candidate.y, candidate.n)
            cov = _count_in_window(target, moved)
            if cov > best_cov:
                best, best_cov = moved, cov
    if best_cov <= 0:
        return candidate
    return best


def place_windows(component: BinaryImage, skel, spec: WindowSpec | None = None) -> list[Window]:
    """Tile the skeleton with grid-aligned windows following the trace.

    Breadth-first from a window whose top-left corner sits on the scan-order
    start pixel; each dequeued window marks the skeleton it covers as visited,
    then spawns abutting candidates through its exit sides in E, W, N, S
    order.  Candidates stay on the grid anchored at the start pixel: freely
    repositioned windows can fence a pixel in so that no disjoint window
    covers it, while grid cells never collide.  A candidate is kept only when
    it covers at least one unvisited skeleton pixel and overlaps every kept
    window by at most overlap_max * n^2.  When the queue drains with skeleton
    left over (disconnected strokes), the grid cell holding the earliest
    unvisited pixel is seeded; that cell is always admissible, so the loop
    terminates with every skeleton pixel covered.
    """
    if spec is None:
        spec = WindowSpec()
    comp = as_binary(component)
    skimg = _skeleton_image(skel)
    if comp.shape != skimg.shape:
        raise DimensionMismatchError(
            f"component {comp.shape} and skeleton {skimg.shape} differ in size"
        )
    if not skimg.any():
        raise EmptyImageError("skeleton has no foreground pixel")

    h, w = skimg.shape
    n = spec.n
    budget = spec.overlap_max * n * n
    visited = np.zeros_like(skimg)
    accepted: list[Window] = []
    origins: set[tuple[int, int]] = set()
    queue: deque[Window] = deque()

    sx, sy = find_start(skimg)

    def cell_at(px: int, py: int) -> Window:
        return Window(sx + ((px - sx) // n) * n, sy + ((py - sy) // n) * n, n)

    def admit(win: Window) -> None:
        if (win.x, win.y) in origins:
            return
        if _count_in_window(skimg & ~visited, win) < 1:
            return
        if any(_overlap_area(win, other) > budget for other in accepted):
            return
        accepted.append(win)
        origins.add((win.x, win.y))
        queue.append(win)

    admit(Window(sx, sy, n))

    while True:
        if not queue:
            remaining = skimg & ~visited
            if not remaining.any():
                break
            admit(cell_at(*find_start(remaining)))
            continue
        win = queue.popleft()
        x0, y0, x1, y1 = win.rect
        cy0, cy1 = max(y0, 0), min(y1, h)
        cx0, cx1 = max(x0, 0), min(x1, w)
        if cy0 < cy1 and cx0 < cx1:
            visited[cy0:cy1, cx0:cx1] |= skimg[cy0:cy1, cx0:cx1]
        flags = _side_exits(skimg, skimg & ~visited, win)
        moves = (
            (flags.east, Window(win.x + n, win.y, n)),
            (flags.west, Window(win.x - n, win.y, n)),
            (flags.north, Window(win.x, win.y - n, n)),
            (flags.south, Window(win.x, win.y + n, n)),
        )
        for flagged, candidate in moves:
            if flagged:
                admit(candidate)

    return accepted


def extract_fragment(component: BinaryImage, win: Window) -> Fragment:
    """Copy the n-by-n ink patch under a window; out-of-bounds reads as blank."""
    comp = as_binary(component)
    h, w = comp.shape
    bits = np.zeros((win.n, win.n), dtype=bool)
    x0, y0, x1, y1 = win.rect
    sx0, sy0 = max(x0, 0), max(y0, 0)
    sx1, sy1 = min(x1, w), min(y1, h)
    if sx0 < sx1 and sy0 < sy1:
        bits[sy0 - y0 : sy1 - y0, sx0 - x0 : sx1 - x0] = comp[sy0:sy1, sx0:sx1]
    return Fragment(bits=bits, origin_window=win, adjusted=False)


def adjust_fragment(frag: Fragment) -> Fragment:
    """Shift the ink so it touches both row 0 and column 0 (no rotation)."""
    ys, xs = np.nonzero(frag.bits)
    if len(ys) == 0:
        return Fragment(bits=frag.bits.copy(), origin_window=frag.origin_window, adjusted=True)
    dy, dx = int(ys.min()), int(xs.min())
    if dy == 0 and dx == 0:
        bits = frag.bits.copy()
    else:
        bits = np.zeros_like(frag.bits)
        nrows, ncols = frag.bits.shape
        bits[: nrows - dy, : ncols - dx] = frag.bits[dy:, dx:]
    return Fragment(bits=bits, origin_window=frag.origin_window, adjusted=True)


def collect_fragments(component: BinaryImage, windows: list[Window], spec: WindowSpec | None = None) -> list[Fragment]:
    """Cut, corner-adjust and filter the fragments for a placed window list.

    Fragments holding fewer than spec.min_fragment_pixels ink pixels are
    dropped; they carry too little shape to cluster meaningfully.
    """
    if spec is None:
        spec = WindowSpec()
    out = []
    for win in windows:
        frag = adjust_fragment(extract_fragment(component, win))
        if frag.ink >= spec.min_fragment_pixels:
            out.append(frag)
    return out
