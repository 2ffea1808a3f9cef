"""Biometric error rates, experiment protocol, and a synthetic signature corpus.

FAR counts accepted forgery claims and FRR rejected genuine claims at a
threshold; the equal error rate is reported as the average of the two at the
sweep point where they come closest.  The synthetic generator stands in for a
real signature database: each writer is a deterministic style seed that fixes
stroke geometry, and samples vary only by small parameter jitter plus sensor
noise, so experiments are reproducible bit for bit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .errors import EmptyScoresError, InsufficientSamplesError, LayoutError
from .identify import Registry, enroll, identify, match_score, signature_fragments
from .imaging import GrayImage
from .imgio import read_image, write_png


@dataclass(frozen=True)
class ScoreSet:
    """Match scores split by claim truth: genuine vs random-forgery claims."""

    genuine: list[float]
    forgery: list[float]

    def __post_init__(self):
        for name, values in (("genuine", self.genuine), ("forgery", self.forgery)):
            for s in values:
                if not 0.0 <= s <= 1.0:
                    raise ValueError(f"{name} score out of [0, 1]: {s}")


@dataclass(frozen=True)
class EvalMetrics:
    far: float
    frr: float
    eer: float
    tau_star: float
    roc: list[tuple[float, float, float]]


@dataclass(frozen=True)
class SynthParams:
    """Style parameters of one synthetic writer."""

    writer_seed: int
    strokes: int = 4
    slant: float = 0.0
    curvature: float = 1.0
    jitter: float = 0.25
    canvas: tuple[int, int] = (240, 120)

    def __post_init__(self):
        if self.strokes < 1:
            raise ValueError("strokes must be >= 1")
        if self.jitter < 0:
            raise ValueError("jitter must be >= 0")
        if self.canvas[0] < 32 or self.canvas[1] < 32:
            raise ValueError("canvas must be at least 32x32")


def far_frr(scores: ScoreSet, tau: float) -> tuple[float, float]:
    """Error percentages at one threshold, by direct counting."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    if len(scores.genuine) == 0 or len(scores.forgery) == 0:
        raise EmptyScoresError("both genuine and forgery scores are required")
    far = 100.0 * sum(1 for s in scores.forgery if s >= tau) / len(scores.forgery)
    frr = 100.0 * sum(1 for s in scores.genuine if s < tau) / len(scores.genuine)
    return far, frr


def averaged_eer(far: float, frr: float) -> float:
    """Equal error rate as the plain average of an operating point's FAR and FRR."""
    return (far + frr) / 2.0


def eer(scores: ScoreSet) -> EvalMetrics:
    """Sweep every distinct score (plus 0 and 1) and average FAR/FRR at the
    threshold where they come closest; ties go to the smallest threshold."""
    if len(scores.genuine) == 0 or len(scores.forgery) == 0:
        raise EmptyScoresError("both genuine and forgery scores are required")
    taus = sorted({0.0, 1.0, *map(float, scores.genuine), *map(float, scores.forgery)})
    roc = []
    best = None
    for tau in taus:
        far, frr = far_frr(scores, tau)
        roc.append((tau, far, frr))
        gap = abs(far - frr)
        if best is None or gap < best[0]:
            best = (gap, tau, far, frr)
    _, tau_star, far_star, frr_star = best
    return EvalMetrics(
        far=far_star,
        frr=frr_star,
        eer=averaged_eer(far_star, frr_star),
        tau_star=tau_star,
        roc=roc,
    )


def _disk_offsets(radius: float) -> np.ndarray:
    r = int(math.ceil(radius))
    dy, dx = np.mgrid[-r : r + 1, -r : r + 1]
    keep = dy * dy + dx * dx <= radius * radius
    return np.stack([dy[keep], dx[keep]], axis=1)

_PEN = _disk_offsets(1.3)


def _stamp(mask: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> None:
    h, w = mask.shape
    pts_y = (ys[:, None] + _PEN[None, :, 0]).ravel()
    pts_x = (xs[:, None] + _PEN[None, :, 1]).ravel()
    keep = (pts_y >= 0) & (pts_y < h) & (pts_x >= 0) & (pts_x < w)
    mask[pts_y[keep], pts_x[keep]] = True


def synth_signature(params: SynthParams, sample_seed: int = 0) -> GrayImage:
    """Render one sample of a synthetic writer's signature.

    Stroke geometry (endpoints, wave amplitude/frequency/phase) comes only
    from writer_seed; per-sample jitter perturbs those parameters and the
    paper/ink noise comes from (writer_seed, sample_seed), so a writer's
    samples share shape while differing in detail.  curvature 0 degenerates
    every stroke to a straight segment.
    """
    w, h = params.canvas
    style = np.random.default_rng(params.writer_seed)
    noise = np.random.default_rng(np.random.SeedSequence([params.writer_seed, sample_seed]))

    canvas = noise.normal(245.0, 4.0, size=(h, w))
    ink = np.zeros((h, w), dtype=bool)

    for _ in range(params.strokes):
        x0 = style.uniform(0.08 * w, 0.35 * w)
        x1 = style.uniform(0.60 * w, 0.92 * w)
        y0 = style.uniform(0.20 * h, 0.80 * h)
        y1 = style.uniform(0.20 * h, 0.80 * h)
        amp = style.uniform(0.06, 0.18) * math.hypot(x1 - x0, y1 - y0)
        waves = int(style.integers(1, 4))
        phase = style.uniform(0.0, 2.0 * math.pi)

        jit = params.jitter
        x0 += noise.normal(0.0, 2.0 * jit)
        y0 += noise.normal(0.0, 2.0 * jit)
        x1 += noise.normal(0.0, 2.0 * jit)
        y1 += noise.normal(0.0, 2.0 * jit)
        amp *= 1.0 + noise.normal(0.0, 0.05 * jit)
        phase += noise.normal(0.0, 0.10 * jit)

        length = math.hypot(x1 - x0, y1 - y0)
        steps = max(int(2.0 * length), 8)
        t = np.linspace(0.0, 1.0, steps)
        bx = x0 + (x1 - x0) * t
        by = y0 + (y1 - y0) * t
        # perpendicular wave, pinned to zero at both endpoints
        if length > 0:
            nx, ny = -(y1 - y0) / length, (x1 - x0) / length
        else:
            nx, ny = 0.0, 1.0
        wave = params.curvature * amp * np.sin(waves * 2.0 * math.pi * t + phase) * np.sin(math.pi * t)
        px = bx + nx * wave
        py = by + ny * wave
        # slant: shear about the canvas midline
        px = px + math.tan(params.slant) * (h / 2.0 - py)
        _stamp(ink, np.rint(px).astype(np.int64), np.rint(py).astype(np.int64))

    canvas[ink] = noise.normal(30.0, 6.0, size=int(ink.sum()))

    # a few sub-speck dirt clusters so despeckling has something to do
    for _ in range(int(noise.integers(3, 8))):
        sy = int(noise.integers(0, h))
        sx = int(noise.integers(0, w))
        size = int(noise.integers(1, 5))
        cy, cx = sy, sx
        for _ in range(size):
            if 0 <= cy < h and 0 <= cx < w:
                canvas[cy, cx] = noise.normal(60.0, 10.0)
            cy += int(noise.integers(-1, 2))
            cx += int(noise.integers(-1, 2))

    return np.clip(np.rint(canvas), 0, 255).astype(np.uint8)


def make_writer_params(base_seed: int, index: int, canvas: tuple[int, int] = (240, 120), jitter: float = 0.25) -> SynthParams:
    """Derive one writer's style deterministically from a corpus seed."""
    rng = np.random.default_rng(np.random.SeedSequence([base_seed, 7, index]))
    return SynthParams(
        writer_seed=int(rng.integers(0, 2**31 - 1)),
        strokes=int(rng.integers(3, 6)),
        slant=float(rng.uniform(-0.30, 0.30)),
        curvature=float(rng.uniform(0.7, 1.5)),
        jitter=jitter,
        canvas=canvas,
    )


def generate_dataset(root, writers: int, samples: int, base_seed: int = 0, jitter: float = 0.25, canvas: tuple[int, int] = (240, 120)) -> list[str]:
    """Write a `<root>/<writer_id>/genuine_<k>.png` corpus; returns writer ids."""
    if writers < 1:
        raise ValueError("writers must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    out = Path(root)
    out.mkdir(parents=True, exist_ok=True)
    width = max(2, len(str(writers)))
    ids = []
    for i in range(writers):
        writer_id = f"w{i + 1:0{width}d}"
        params = make_writer_params(base_seed, i, canvas=canvas, jitter=jitter)
        writer_dir = out / writer_id
        writer_dir.mkdir(exist_ok=True)
        for k in range(samples):
            write_png(synth_signature(params, sample_seed=k), writer_dir / f"genuine_{k + 1:02d}.png")
        ids.append(writer_id)
    return ids


_GENUINE_RE = re.compile(r"^genuine_(\d+)\.(png|pgm)$")
_FORGERY_RE = re.compile(r"^forgery_(\d+)\.(png|pgm)$")


@dataclass(frozen=True)
class Protocol:
    """Experiment protocol: enroll the first k genuine samples per writer,
    test the rest as genuine claims and cross-writer as forgery claims."""

    enroll_count: int = 5

    def __post_init__(self):
        if self.enroll_count < 1:
            raise ValueError("enroll_count must be >= 1")


@dataclass(frozen=True)
class WriterReport:
    writer_id: str
    enrolled: int
    tested: int
    rank1_hits: int
    mean_genuine: float
    mean_forgery: float


@dataclass(frozen=True)
class ExperimentResult:
    metrics: EvalMetrics
    rank1_accuracy: float
    scores: ScoreSet
    per_writer: list[WriterReport]


def _scan_dataset(root) -> dict[str, tuple[list[Path], list[Path]]]:
    base = Path(root)
    if not base.is_dir():
        raise LayoutError(f"{base}: dataset root is not a directory")
    writers: dict[str, tuple[list[Path], list[Path]]] = {}
    for child in sorted(base.iterdir()):
        if not child.is_dir():
            continue
        genuine: list[tuple[int, Path]] = []
        forgery: list[tuple[int, Path]] = []
        for item in child.iterdir():
            m = _GENUINE_RE.match(item.name)
            if m:
                genuine.append((int(m.group(1)), item))
                continue
            m = _FORGERY_RE.match(item.name)
            if m:
                forgery.append((int(m.group(1)), item))
        if not genuine:
            raise LayoutError(f"{child}: no genuine_<k> images")
        writers[child.name] = (
            [p for _, p in sorted(genuine)],
            [p for _, p in sorted(forgery)],
        )
    if not writers:
        raise LayoutError(f"{base}: no writer directories found")
    return writers


def run_experiment(dataset_root, protocol: Protocol | None = None, config: PipelineConfig | None = None) -> ExperimentResult:
    """Enroll/test split over a dataset directory, returning metrics and a
    per-writer breakdown.  Genuine claims are the held-out genuine samples;
    forgery claims are those same samples scored against every other writer,
    plus any dedicated forgery_<k> images scored against their own writer.
    """
    if protocol is None:
        protocol = Protocol()
    if config is None:
        config = PipelineConfig()
    writers = _scan_dataset(dataset_root)
    k = protocol.enroll_count
    for writer_id, (genuine, _) in writers.items():
        if k >= len(genuine):
            raise InsufficientSamplesError(
                f"{writer_id}: {len(genuine)} genuine samples cannot cover "
                f"enroll_count={k} plus at least one test sample"
            )

    registry = Registry(config=config)
    for writer_id, (genuine, _) in writers.items():
        registry.add(enroll(writer_id, [read_image(p) for p in genuine[:k]], config))

    genuine_scores: list[float] = []
    forgery_scores: list[float] = []
    per_writer_genuine: dict[str, list[float]] = {w: [] for w in writers}
    per_writer_forgery: dict[str, list[float]] = {w: [] for w in writers}
    hits: dict[str, int] = {w: 0 for w in writers}

    for writer_id, (genuine, forgery) in writers.items():
        for path in genuine[k:]:
            report = identify(read_image(path), registry)
            by_writer = dict(report.ranked)
            genuine_scores.append(by_writer[writer_id])
            per_writer_genuine[writer_id].append(by_writer[writer_id])
            if report.top[0] == writer_id:
                hits[writer_id] += 1
            for other in registry.writer_ids:
                if other != writer_id:
                    forgery_scores.append(by_writer[other])
                    per_writer_forgery[other].append(by_writer[other])
        for path in forgery:
            frags = signature_fragments(read_image(path), config)
            score = match_score(frags, registry.profiles[writer_id])
            forgery_scores.append(score)
            per_writer_forgery[writer_id].append(score)

    rows = []
    total_tests = 0
    total_hits = 0
    for writer_id, (genuine, _) in writers.items():
        tested = len(genuine) - k
        total_tests += tested
        total_hits += hits[writer_id]
        g = per_writer_genuine[writer_id]
        f = per_writer_forgery[writer_id]
        rows.append(
            WriterReport(
                writer_id=writer_id,
                enrolled=k,
                tested=tested,
                rank1_hits=hits[writer_id],
                mean_genuine=float(np.mean(g)) if g else math.nan,
                mean_forgery=float(np.mean(f)) if f else math.nan,
            )
        )

    metrics = eer(ScoreSet(genuine=genuine_scores, forgery=forgery_scores))
    return ExperimentResult(
        metrics=metrics,
        rank1_accuracy=total_hits / total_tests if total_tests else math.nan,
        scores=ScoreSet(genuine=genuine_scores, forgery=forgery_scores),
        per_writer=rows,
    )


def format_report(result: ExperimentResult) -> str:
    """Human-readable experiment summary (fixed layout, deterministic)."""
    lines = []
    lines.append(f"{'writer':<12}{'enrolled':>9}{'tested':>7}{'rank-1':>8}{'genuine':>9}{'forgery':>9}")
    for row in result.per_writer:
        mg = f"{row.mean_genuine:.4f}" if not math.isnan(row.mean_genuine) else "-"
        mf = f"{row.mean_forgery:.4f}" if not math.isnan(row.mean_forgery) else "-"
        lines.append(
            f"{row.writer_id:<12}{row.enrolled:>9}{row.tested:>7}"
            f"{row.rank1_hits:>4}/{row.tested:<3}{mg:>9}{mf:>9}"
        )
    lines.append("")
    lines.append(f"rank-1 accuracy: {100.0 * result.rank1_accuracy:.2f}%")
    m = result.metrics
    lines.append(f"{'FAR (%)':>10}{'FRR (%)':>10}{'EER (%)':>10}{'tau*':>10}")
    lines.append(f"{m.far:>10.2f}{m.frr:>10.2f}{m.eer:>10.2f}{m.tau_star:>10.4f}")
    return "\n".join(lines) + "\n"


def roc_csv(metrics: EvalMetrics) -> str:
    """ROC sweep as `tau,far,frr` rows with round-trippable float formatting."""
    lines = ["tau,far,frr"]
    for tau, far, frr in metrics.roc:
        lines.append(f"{tau!r},{far!r},{frr!r}")
    return "\n".join(lines) + "\n"
