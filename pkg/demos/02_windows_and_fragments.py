"""
Windowing the skeleton into fragments
=====================================

Signatures are compared through small square ink patches.  The placement
walks the skeleton breadth-first on a grid anchored at the first ink pixel,
which makes the windows pairwise disjoint while still covering every
skeleton pixel.
"""

import numpy as np

from sigwin import (
    WindowSpec,
    binary_to_gray,
    collect_fragments,
    exit_flags,
    make_writer_params,
    place_windows,
    preprocess,
    synth_signature,
    thin,
    write_pgm,
)
from pathlib import Path

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

params = make_writer_params(base_seed=0, index=3)
gray = synth_signature(params, sample_seed=1)
binary = preprocess(gray)
skel = thin(binary).image

spec = WindowSpec()  # 13x13, no overlap allowed, fragments need >= 3 ink pixels
windows = place_windows(binary, skel, spec)
print(f"{len(windows)} windows of {spec.n}x{spec.n} placed")

# Each window reports through which sides the skeleton leaves it; that is
# what drove the traversal from window to window.
first = windows[0]
flags = exit_flags(skel, first)
print(f"first window at ({first.x}, {first.y}) exits: "
      f"E={flags.east} W={flags.west} N={flags.north} S={flags.south}")

# Coverage and disjointness can be checked directly.
h, w = skel.shape
covered = np.zeros_like(skel)
for win in windows:
    x0, y0, x1, y1 = win.rect
    covered[max(y0, 0):min(y1, h), max(x0, 0):min(x1, w)] = True
print(f"skeleton pixels outside all windows: {(skel & ~covered).sum()}")

overlaps = 0
for i, a in enumerate(windows):
    for b in windows[i + 1:]:
        dx = min(a.x + a.n, b.x + b.n) - max(a.x, b.x)
        dy = min(a.y + a.n, b.y + b.n) - max(a.y, b.y)
        overlaps += dx > 0 and dy > 0
print(f"overlapping window pairs: {overlaps}")

# Fragments are cut from the unthinned ink, shifted into the upper-left
# corner so the in-window position cannot affect comparisons, and dropped
# when nearly blank.
fragments = collect_fragments(binary, windows, spec)
print(f"{len(fragments)} fragments kept "
      f"(ink {min(f.ink for f in fragments)}..{max(f.ink for f in fragments)} pixels)")

# A contact sheet of the first 60 fragments, 10 per row, 2px gutters.
cols, rows, gap = 10, 6, 2
sheet = np.full((rows * (spec.n + gap) + gap, cols * (spec.n + gap) + gap), 128, dtype=np.uint8)
for k, frag in enumerate(fragments[: cols * rows]):
    r, c = divmod(k, cols)
    y = gap + r * (spec.n + gap)
    x = gap + c * (spec.n + gap)
    sheet[y : y + spec.n, x : x + spec.n] = binary_to_gray(frag.bits)
write_pgm(sheet, out / "fragments.pgm")
print(f"wrote fragments.pgm under {out}")
