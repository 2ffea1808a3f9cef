"""
Building a writer's codebook
============================

Fragments from several genuine samples are grouped by shape: each fragment
joins the first class whose representative correlates with it at phi >= theta,
or founds a new class.  The classes with their frequencies form the writer's
codebook.
"""

from pathlib import Path

from sigwin import (
    cluster,
    collect_fragments,
    load_codebook,
    make_writer_params,
    place_windows,
    preprocess,
    save_codebook,
    similarity,
    synth_signature,
    thin,
)

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# Pool the fragments of five samples from the same synthetic writer.
params = make_writer_params(base_seed=0, index=3)
pool = []
for sample in range(5):
    gray = synth_signature(params, sample_seed=sample)
    binary = preprocess(gray)
    windows = place_windows(binary, thin(binary).image)
    pool.extend(collect_fragments(binary, windows))
print(f"{len(pool)} fragments pooled from 5 samples")

# theta controls how alike two fragments must be to share a class.  Tighter
# thresholds split the pool into more, purer classes.
for theta in (0.5, 0.7, 0.8, 0.9):
    book = cluster(pool, theta=theta)
    repeated = sum(1 for c in book.classes if c.frequency > 1)
    print(f"theta {theta}: {len(book.classes):3d} classes, "
          f"{repeated:3d} with frequency > 1")

book = cluster(pool, theta=0.8)
top = max(book.classes, key=lambda c: c.frequency)
print(f"most recurrent shape at theta 0.8: frequency {top.frequency}")

# Every member really does sit within theta of its representative.
worst = min(
    similarity(member, cls.representative)
    for cls in book.classes
    for member in cls.members
)
print(f"weakest member-to-representative similarity: {worst:.3f}")

# Codebooks serialize to a plain text format and round-trip losslessly.
path = out / "writer.codebook"
save_codebook(book, path)
reloaded = load_codebook(path)
assert len(reloaded.classes) == len(book.classes)
assert [c.frequency for c in reloaded.classes] == [c.frequency for c in book.classes]
print(f"saved and reloaded {path.name}: {len(reloaded.classes)} classes intact")
