"""Shared pipeline configuration and the flat key = value config format."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .gdwgif import FilterParams

__all__ = ["PipelineConfig", "parse_config_text", "config_text"]

# config-file keys mirror the CLI flag names
_KEYS = {
    "lambda": ("lam", float),
    "xi": ("xi", int),
    "r": ("r", int),
    "threshold": ("threshold", float),
    "alpha": ("alpha", float),
    "tau-r": ("tau_r", float),
    "seed": ("seed", int),
    "depth": ("depth", int),
}


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline tunables with their published defaults."""

    lam: float = 0.2
    xi: int = 7
    r: int = 5
    threshold: float = 0.2
    alpha: float = 2.0
    tau_r: float = 1e-3
    mu_radius: int = 7
    scale_factors: tuple[int, int, int] = (1, 2, 4)
    scale_weights: tuple[float, float, float] = (0.5, 0.3, 0.2)
    seed: int = 0
    depth: int = 8

    def __post_init__(self):
        if self.lam <= 0 or self.xi < 1 or self.r < 1 or self.threshold <= 0:
            raise ValueError("lambda, xi, r, threshold must be positive")
        if self.alpha <= 0 or self.tau_r <= 0 or self.mu_radius < 1:
            raise ValueError("alpha, tau-r, mu-radius must be positive")
        if self.depth not in (8, 16):
            raise ValueError("depth must be 8 or 16")
        if len(self.scale_factors) != len(self.scale_weights):
            raise ValueError("scale factors and weights must pair up")
        if not math.isclose(sum(self.scale_weights), 1.0, abs_tol=1e-9):
            raise ValueError("scale weights must sum to 1")

    def filter_params(self, xi: int | None = None, lam: float | None = None) -> FilterParams:
        return FilterParams(
            lam=self.lam if lam is None else lam,
            xi=self.xi if xi is None else xi,
            r=self.r,
            threshold=self.threshold,
        )

    def scale_radii(self) -> tuple[int, ...]:
        return tuple(self.xi * f for f in self.scale_factors)

    def with_overrides(self, **kwargs) -> "PipelineConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines (# comments) into override kwargs."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in _KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        attr, cast = _KEYS[key]
        try:
            overrides[attr] = cast(value)
        except ValueError as exc:
            raise ValueError(f"config line {lineno}: bad value for {key!r}: {value!r}") from exc
    return overrides


def config_text(cfg: PipelineConfig) -> str:
    """Render a config in the same format parse_config_text reads."""
    lines = [f"{key} = {getattr(cfg, attr)}" for key, (attr, _) in _KEYS.items()]
    return "\n".join(lines) + "\n"
