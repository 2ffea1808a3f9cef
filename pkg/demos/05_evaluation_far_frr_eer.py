"""
Measuring the pipeline: FAR, FRR and EER
========================================

A self-contained benchmark: render a synthetic dataset, enroll on the first
samples of each writer, test on the rest, and sweep the acceptance threshold
to find the equal error rate.
"""

import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from sigwin import Protocol, format_report, generate_dataset, roc_csv, run_experiment

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# 10 writers x 10 samples; writers differ in stroke count, slant and
# curvature, samples of one writer differ by jitter and noise.
with tempfile.TemporaryDirectory() as dataset:
    generate_dataset(dataset, writers=10, samples=10, base_seed=0)
    result = run_experiment(dataset, Protocol(enroll_count=5))

print(format_report(result))

# Genuine scores come from matching each test sample against its own writer,
# forgery scores from matching it against everyone else.
print(f"genuine scores: {len(result.scores.genuine)}, "
      f"forgery scores: {len(result.scores.forgery)}")

# The full threshold sweep saves as CSV for external tooling.
(out / "roc.csv").write_text(roc_csv(result.metrics))
print(f"wrote roc.csv under {out}")

# FAR falls and FRR rises as tau tightens; the EER sits where they cross.
taus = [tau for tau, _, _ in result.metrics.roc]
fars = [far for _, far, _ in result.metrics.roc]
frrs = [frr for _, _, frr in result.metrics.roc]
plt.figure(figsize=(6, 4))
plt.plot(taus, fars, label="FAR %")
plt.plot(taus, frrs, label="FRR %")
plt.axvline(result.metrics.tau_star, linestyle=":", color="gray",
            label=f"tau* = {result.metrics.tau_star:.3f}")
plt.xlabel("acceptance threshold tau")
plt.ylabel("error rate (%)")
plt.title(f"EER {result.metrics.eer:.2f}%")
plt.legend()
plt.tight_layout()
plt.savefig(out / "error_rates.png", dpi=120)
print(f"wrote error_rates.png under {out}")
