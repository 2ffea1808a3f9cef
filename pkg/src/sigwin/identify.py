"""Writer enrollment and nearest-codebook identification.

A writer is enrolled by running every genuine sample through
binarize -> despeckle -> thin -> window placement -> fragment adjustment,
pooling the fragments of all samples and clustering them once into the
writer's codebook.  A test signature is scored against a codebook as the
mean over its fragments of the best similarity to any class representative,
negatives clipped to zero: anti-correlated shapes carry no identity evidence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote, unquote

import numpy as np
from numpy.typing import NDArray

from .codebook import Codebook, cluster, load_codebook, save_codebook, similarity_matrix
from .config import PipelineConfig
from .errors import (
    ConfigMismatchError,
    EmptyImageError,
    EmptyRegistryError,
    FormatError,
    NoFragmentsError,
    UnknownWriterError,
)
from .imaging import BinaryImage, GrayImage, binarize, otsu_threshold, remove_specks
from .skeletonize import thin
from .windowing import Fragment, collect_fragments, place_windows

_MANIFEST_NAME = "manifest.json"
_MANIFEST_FORMAT = "sigwin-registry"
_MANIFEST_VERSION = 1


@dataclass(frozen=True)
class WriterProfile:
    writer_id: str
    codebook: Codebook
    sample_count: int

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("profile needs at least one enrolled sample")
        if len(self.codebook) == 0:
            raise ValueError("profile codebook must be nonempty")


@dataclass
class Registry:
    """All enrolled writers plus the configuration they were built under."""

    profiles: dict[str, WriterProfile] = field(default_factory=dict)
    config: PipelineConfig = field(default_factory=PipelineConfig)

    def add(self, profile: WriterProfile) -> None:
        self.profiles[profile.writer_id] = profile

    def __len__(self) -> int:
        return len(self.profiles)

    @property
    def writer_ids(self) -> list[str]:
        return sorted(self.profiles)


@dataclass(frozen=True)
class MatchReport:
    """Full identification ranking; ranked[0] is the decision."""

    ranked: list[tuple[str, float]]
    per_fragment: dict[str, list[float]]

    @property
    def top(self) -> tuple[str, float]:
        return self.ranked[0]


@dataclass(frozen=True)
class VerifyResult:
    writer_id: str
    score: float
    tau: float
    accepted: bool


def preprocess(image: GrayImage, config: PipelineConfig | None = None) -> BinaryImage:
    """Binarize at the Otsu threshold and drop sub-speck components."""
    if config is None:
        config = PipelineConfig()
    fg = binarize(image, otsu_threshold(image))
    return remove_specks(fg, config.speck_min_size)


def signature_fragments(image: GrayImage, config: PipelineConfig | None = None) -> list[Fragment]:
    """Run the full fragmentation pipeline on one grayscale signature image."""
    if config is None:
        config = PipelineConfig()
    fg = preprocess(image, config)
    if not fg.any():
        raise EmptyImageError("no ink left after preprocessing")
    spec = config.to_window_spec()
    windows = place_windows(fg, thin(fg), spec)
    return collect_fragments(fg, windows, spec)


def enroll(writer_id: str, images: list[GrayImage], config: PipelineConfig | None = None) -> WriterProfile:
    """Build one writer's profile from genuine samples (pooled clustering)."""
    if config is None:
        config = PipelineConfig()
    if not images:
        raise ValueError("enroll needs at least one image")
    pooled: list[Fragment] = []
    for index, image in enumerate(images):
        frags = signature_fragments(image, config)
        if not frags:
            raise NoFragmentsError(f"image {index} yielded no usable fragment")
        pooled.extend(frags)
    book = cluster(pooled, config.cluster_theta, config.to_window_spec())
    return WriterProfile(writer_id=writer_id, codebook=book, sample_count=len(images))


def _best_per_fragment(fragments: list[Fragment], profile: WriterProfile) -> NDArray[np.float64]:
    scores = similarity_matrix(fragments, profile.codebook.representatives)
    return np.clip(scores.max(axis=1), 0.0, None)


def match_score(test_fragments: list[Fragment], profile: WriterProfile) -> float:
    """Mean over fragments of the best clipped similarity to the codebook."""
    if not test_fragments:
        raise NoFragmentsError("no test fragments to score")
    return float(_best_per_fragment(test_fragments, profile).mean())


def identify_fragments(fragments: list[Fragment], registry: Registry) -> MatchReport:
    """Rank every enrolled writer for an already fragmented test signature."""
    if not registry.profiles:
        raise EmptyRegistryError("no writers enrolled")
    if not fragments:
        raise NoFragmentsError("no test fragments to score")
    per_fragment: dict[str, list[float]] = {}
    scored: list[tuple[str, float]] = []
    for writer_id in registry.writer_ids:
        best = _best_per_fragment(fragments, registry.profiles[writer_id])
        per_fragment[writer_id] = [float(v) for v in best]
        scored.append((writer_id, float(best.mean())))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return MatchReport(ranked=scored, per_fragment=per_fragment)


def identify(test: GrayImage, registry: Registry) -> MatchReport:
    """Pipeline the test image and rank all enrolled writers (top-1 = decision)."""
    if not registry.profiles:
        raise EmptyRegistryError("no writers enrolled")
    return identify_fragments(signature_fragments(test, registry.config), registry)


def verify(test: GrayImage, claimed_writer: str, registry: Registry, tau: float | None = None) -> VerifyResult:
    """Accept the claimed identity iff the match score reaches tau."""
    if claimed_writer not in registry.profiles:
        raise UnknownWriterError(f"writer {claimed_writer!r} is not enrolled")
    if tau is None:
        tau = registry.config.verify_tau
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    fragments = signature_fragments(test, registry.config)
    score = match_score(fragments, registry.profiles[claimed_writer])
    return VerifyResult(writer_id=claimed_writer, score=score, tau=tau, accepted=score >= tau)


def _codebook_filename(writer_id: str) -> str:
    # percent-encode so arbitrary writer ids map to safe, unique file names
    return quote(writer_id, safe="") + ".codebook"


def save_registry(registry: Registry, path) -> None:
    """Persist as a directory: manifest.json plus one codebook file per writer."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    writers = []
    for writer_id in registry.writer_ids:
        profile = registry.profiles[writer_id]
        filename = _codebook_filename(writer_id)
        save_codebook(profile.codebook, root / filename)
        writers.append(
            {"id": writer_id, "codebook": filename, "sample_count": profile.sample_count}
        )
    manifest = {
        "format": _MANIFEST_FORMAT,
        "version": _MANIFEST_VERSION,
        "config": registry.config.to_dict(),
        "writers": writers,
    }
    with open(root / _MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_registry(path, expected_config: PipelineConfig | None = None) -> Registry:
    """Load a registry directory; any configuration mismatch is a hard error."""
    root = Path(path)
    manifest_path = root / _MANIFEST_NAME
    if not manifest_path.is_file():
        raise FormatError(f"{root}: not a registry directory (missing {_MANIFEST_NAME})")
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{manifest_path}: invalid JSON: {exc}") from None
    if manifest.get("format") != _MANIFEST_FORMAT or manifest.get("version") != _MANIFEST_VERSION:
        raise FormatError(f"{manifest_path}: unrecognized manifest format")
    try:
        config = PipelineConfig.from_dict(manifest["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{manifest_path}: bad config block: {exc}") from None
    if expected_config is not None and config != expected_config:
        raise ConfigMismatchError(
            f"{root}: registry was built with a different configuration"
        )

    registry = Registry(config=config)
    for entry in manifest.get("writers", []):
        writer_id = entry["id"]
        book = load_codebook(root / entry["codebook"])
        if book.spec.n != config.window_size or book.theta != config.cluster_theta:
            raise ConfigMismatchError(
                f"{root}: codebook for {writer_id!r} disagrees with the manifest config"
            )
        book.spec = config.to_window_spec()
        registry.add(
            WriterProfile(
                writer_id=writer_id,
                codebook=book,
                sample_count=int(entry["sample_count"]),
            )
        )
    return registry


def writer_id_from_filename(filename: str) -> str:
    """Inverse of the codebook file naming scheme."""
    name = filename
    if name.endswith(".codebook"):
        name = name[: -len(".codebook")]
    return unquote(name)
