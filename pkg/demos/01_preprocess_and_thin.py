"""
From gray scan to one-pixel skeleton
====================================

Every later stage works on the skeleton, so this walks the two steps that
produce it: global thresholding and iterative thinning.
"""

import numpy as np

from sigwin import (
    binarize,
    binary_to_gray,
    make_writer_params,
    otsu_threshold,
    preprocess,
    remove_specks,
    synth_signature,
    thin,
    write_pgm,
)
from pathlib import Path

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# A synthetic signature stands in for a scan: gray strokes on paper-toned
# noise, plus a few dirt specks like a flatbed scanner would add.
params = make_writer_params(base_seed=0, index=3)
gray = synth_signature(params, sample_seed=1)
print(f"gray scan: {gray.shape[1]}x{gray.shape[0]}, levels {gray.min()}..{gray.max()}")
write_pgm(gray, out / "scan.pgm")

# Otsu picks the threshold that best separates the ink mode from the paper
# mode of the histogram; everything at or below it becomes foreground.
t = otsu_threshold(gray)
raw = binarize(gray, t)
print(f"otsu threshold {t}: {raw.sum()} ink pixels before cleanup")

# Dirt specks survive thresholding. Dropping tiny 8-connected components
# keeps them out of the windows later on.
clean = remove_specks(raw)
print(f"despeckled: {clean.sum()} ink pixels "
      f"({raw.sum() - clean.sum()} removed)")

# preprocess() is the same two steps packaged for the pipeline.
assert np.array_equal(clean, preprocess(gray))

# Thinning peels boundary pixels until strokes are one pixel wide while
# never breaking connectivity, so the trace topology survives.
skel = thin(clean)
print(f"skeleton: {skel.image.sum()} pixels "
      f"from {skel.source_foreground_count} ink pixels")

write_pgm(binary_to_gray(clean), out / "binary.pgm")
write_pgm(binary_to_gray(skel.image), out / "skeleton.pgm")
print(f"wrote scan.pgm, binary.pgm, skeleton.pgm under {out}")
