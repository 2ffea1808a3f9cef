"""Offline handwritten signature identification from skeleton-guided window fragments.

The pipeline binarizes a scanned signature, thins the ink to a skeleton,
tiles the skeleton with grid-aligned square windows, cuts and
corner-adjusts the ink fragment under each window, clusters a writer's
fragments into a codebook of recurring stroke shapes, and identifies test
signatures by nearest-codebook correlation scoring.  An evaluation harness
computes FAR/FRR/EER over synthetic multi-writer corpora.
"""

from .codebook import (
    DEFAULT_THETA,
    Codebook,
    FeatureVector,
    PatternClass,
    PixelContingency,
    cluster,
    contingency,
    features,
    load_codebook,
    save_codebook,
    similarity,
    similarity_matrix,
)
from .config import PipelineConfig
from .errors import (
    ConfigMismatchError,
    DimensionMismatchError,
    EmptyFragmentError,
    EmptyImageError,
    EmptyRegistryError,
    EmptyScoresError,
    FormatError,
    InsufficientSamplesError,
    LayoutError,
    NoFragmentsError,
    SigwinError,
    UnknownWriterError,
)
from .evalkit import (
    EvalMetrics,
    ExperimentResult,
    Protocol,
    ScoreSet,
    SynthParams,
    WriterReport,
    averaged_eer,
    eer,
    far_frr,
    format_report,
    generate_dataset,
    make_writer_params,
    roc_csv,
    run_experiment,
    synth_signature,
)
from .identify import (
    MatchReport,
    Registry,
    VerifyResult,
    WriterProfile,
    enroll,
    identify,
    identify_fragments,
    load_registry,
    match_score,
    preprocess,
    save_registry,
    signature_fragments,
    verify,
    writer_id_from_filename,
)
from .imaging import (
    BinaryImage,
    Component,
    GrayImage,
    binarize,
    connected_components,
    foreground_count,
    otsu_threshold,
    remove_specks,
)
from .imgio import binary_to_gray, read_image, read_pgm, write_pbm, write_pgm, write_png
from .skeletonize import Skeleton, thin
from .windowing import (
    DEFAULT_WINDOW_SIZE,
    ExitFlags,
    Fragment,
    Window,
    WindowSpec,
    adjust_fragment,
    collect_fragments,
    exit_flags,
    extract_fragment,
    find_start,
    place_windows,
    slide_adjust,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryImage",
    "Codebook",
    "Component",
    "ConfigMismatchError",
    "DEFAULT_THETA",
    "DEFAULT_WINDOW_SIZE",
    "DimensionMismatchError",
    "EmptyFragmentError",
    "EmptyImageError",
    "EmptyRegistryError",
    "EmptyScoresError",
    "EvalMetrics",
    "ExitFlags",
    "ExperimentResult",
    "FeatureVector",
    "FormatError",
    "Fragment",
    "GrayImage",
    "InsufficientSamplesError",
    "LayoutError",
    "MatchReport",
    "NoFragmentsError",
    "PatternClass",
    "PipelineConfig",
    "PixelContingency",
    "Protocol",
    "Registry",
    "ScoreSet",
    "SigwinError",
    "Skeleton",
    "SynthParams",
    "UnknownWriterError",
    "VerifyResult",
    "Window",
    "WindowSpec",
    "WriterProfile",
    "WriterReport",
    "adjust_fragment",
    "averaged_eer",
    "binarize",
    "binary_to_gray",
    "cluster",
    "collect_fragments",
    "connected_components",
    "contingency",
    "eer",
    "enroll",
    "exit_flags",
    "extract_fragment",
    "far_frr",
    "features",
    "find_start",
    "foreground_count",
    "format_report",
    "generate_dataset",
    "identify",
    "identify_fragments",
    "load_codebook",
    "load_registry",
    "make_writer_params",
    "match_score",
    "otsu_threshold",
    "place_windows",
    "preprocess",
    "read_image",
    "read_pgm",
    "remove_specks",
    "roc_csv",
    "run_experiment",
    "save_codebook",
    "save_registry",
    "signature_fragments",
    "similarity",
    "similarity_matrix",
    "slide_adjust",
    "synth_signature",
    "thin",
    "verify",
    "writer_id_from_filename",
    "write_pbm",
    "write_pgm",
    "write_png",
]
