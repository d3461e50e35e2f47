"""Result containers for gradient estimates and Monte Carlo aggregates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class GradientEstimate:
    """A pathwise estimate of D_u F or D_u X_t.

    ``value`` is the primary estimate for the recorded method; jump-difference
    estimates carry the difference step in ``theta`` and, where available, the
    closed-form value in ``analytic``.
    """

    u: float
    t: float
    value: float | np.ndarray
    method: str  # jump_difference | flow_oracle | analytic
    theta: float | None = None
    analytic: float | np.ndarray | None = None
    snapped: bool = False


@dataclass
class EstimatorReport:
    """Monte Carlo aggregate for a scalar target; a pure function of (seed, config)."""

    mean: float
    std_error: float
    n_paths: int
    master_seed: int
    grid: dict

    @classmethod
    def from_samples(cls, samples: np.ndarray, master_seed: int, grid) -> "EstimatorReport":
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        se = float(samples.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
        return cls(float(samples.mean()), se, n, master_seed, grid.summary())
