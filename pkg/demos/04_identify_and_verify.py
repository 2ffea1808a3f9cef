"""
Identifying and verifying writers
=================================

Enrollment clusters each writer's fragments into a codebook; a questioned
signature is then scored against every codebook by how well its fragments
are explained.
"""

from sigwin import (
    Registry,
    enroll,
    identify,
    make_writer_params,
    synth_signature,
    verify,
)

# Three synthetic writers, five genuine samples each for enrollment.
registry = Registry()
for index, name in enumerate(["ines", "jorge", "katya"]):
    params = make_writer_params(base_seed=0, index=index)
    samples = [synth_signature(params, sample_seed=k) for k in range(5)]
    profile = enroll(name, samples)
    registry.add(profile)
    print(f"enrolled {name}: {len(profile.codebook.classes)} classes "
          f"from {profile.sample_count} samples")

# A held-out sample of jorge (sample_seed the enrollment never saw).
questioned = synth_signature(make_writer_params(base_seed=0, index=1), sample_seed=7)
report = identify(questioned, registry)
print("\nidentification ranking:")
for rank, (writer, score) in enumerate(report.ranked, start=1):
    print(f"  {rank}. {writer:<6} {score:.3f}")
print(f"top match: {report.top[0]}")

# Verification asks a narrower question: does this signature back the
# claimed identity?  The claim score must clear tau; 0.65 sits between the
# genuine and impostor score ranges that the evaluation demo sweeps out.
genuine_claim = verify(questioned, "jorge", registry, tau=0.65)
print(f"\nclaim 'jorge': score {genuine_claim.score:.3f} vs tau {genuine_claim.tau} "
      f"-> {'accept' if genuine_claim.accepted else 'reject'}")

# The same signature under katya's name is a random forgery: it still shares
# generic stroke shapes with her codebook, but not enough to clear tau.
forged_claim = verify(questioned, "katya", registry, tau=0.65)
print(f"claim 'katya': score {forged_claim.score:.3f} vs tau {forged_claim.tau} "
      f"-> {'accept' if forged_claim.accepted else 'reject'}")
