"""Rate-curve containers exchanged between simulation, fitting, and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RatePoint:
    """One (intensity, rate) measurement with an optional inverse-variance weight."""

    I_s: float
    R: float
    weight: float = 1.0

    def __post_init__(self):
        if self.I_s < 0:
            raise ValueError(f"I_s must be >= 0, got {self.I_s}")
        if self.R < 0:
            raise ValueError(f"R must be >= 0, got {self.R}")
        if self.weight <= 0:
            raise ValueError(f"weight must be > 0, got {self.weight}")


@dataclass(frozen=True)
class RateCurve:
    """Ordered sequence of (I_s, R) points with optional weights and errors."""

    intensities: np.ndarray
    rates: np.ndarray
    stderr: np.ndarray | None = None
    weights: np.ndarray | None = None
    censored_fraction: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        I = np.asarray(self.intensities, dtype=float)
        R = np.asarray(self.rates, dtype=float)
        object.__setattr__(self, "intensities", I)
        object.__setattr__(self, "rates", R)
        if I.ndim != 1 or R.shape != I.shape:
            raise ValueError("intensities and rates must be 1-d arrays of equal length")
        for name in ("stderr", "weights", "censored_fraction"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float)
                object.__setattr__(self, name, v)
                if v.shape != I.shape:
                    raise ValueError(f"{name} must match the number of points")
        if self.weights is not None and np.any(self.weights <= 0):
            raise ValueError("weights must be > 0")

    def __len__(self) -> int:
        return len(self.intensities)

    def __iter__(self):
        w = self.weights if self.weights is not None else np.ones(len(self))
        for I, R, wi in zip(self.intensities, self.rates, w):
            yield RatePoint(float(I), float(R), float(wi))

    def points(self) -> list[RatePoint]:
        return list(self)
