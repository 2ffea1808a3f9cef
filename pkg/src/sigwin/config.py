"""Pipeline-wide configuration shared by the library and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from .codebook import DEFAULT_THETA
from .windowing import DEFAULT_WINDOW_SIZE, WindowSpec

DEFAULT_SPECK_MIN_SIZE = 8
DEFAULT_VERIFY_TAU = 0.5


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of the enrollment/identification pipeline in one place.

    A registry stores this alongside its codebooks; profiles built under
    different configurations must never be mixed.
    """

    window_size: int = DEFAULT_WINDOW_SIZE
    cluster_theta: float = DEFAULT_THETA
    min_fragment_pixels: int = 3
    speck_min_size: int = DEFAULT_SPECK_MIN_SIZE
    overlap_max: float = 0.0
    verify_tau: float = DEFAULT_VERIFY_TAU
    seed: int = 0

    def __post_init__(self):
        self.to_window_spec()
        if not -1.0 < self.cluster_theta <= 1.0:
            raise ValueError(f"cluster_theta must lie in (-1, 1], got {self.cluster_theta}")
        if not 0.0 <= self.verify_tau <= 1.0:
            raise ValueError(f"verify_tau must lie in [0, 1], got {self.verify_tau}")
        if self.speck_min_size < 0:
            raise ValueError("speck_min_size must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")

    def to_window_spec(self) -> WindowSpec:
        return WindowSpec(
            n=self.window_size,
            overlap_max=self.overlap_max,
            min_fragment_pixels=self.min_fragment_pixels,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        """Build from a mapping; keys may use dashes (flag style) or underscores."""
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in data.items():
            name = str(key).replace("-", "_")
            if name not in known:
                raise ValueError(f"unknown configuration key: {key!r}")
            values[name] = value
        return cls(**values)
