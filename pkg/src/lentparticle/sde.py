"""One-dimensional SDEs, their Euler scheme and the first-variation flow.

The solver is the explicit left-endpoint scheme

    X_{k+1} = X_k + sigma(t_k, X_k) dW_k + b(t_k, X_k) dt

and consumes only increments, so any driver (Brownian, rotated, or
jump-augmented) can be plugged in.  The first-variation process

    Y_{k+1} = Y_k (1 + sigma_x(t_k, X_k) dW_k + b_x(t_k, X_k) dt),  Y_0 = 1

yields the flow form of the Malliavin gradient, D_u X_t = sigma(u-) Y_t / Y_u,
with the perturbation point snapped forward to a grid point t_k and the
diffusion coefficient taken at the left-endpoint state of the snap step (the
convention used uniformly by the jump-difference estimators, which makes the
two routes agree path by path up to the difference-step bias).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalBlowupError, SingularFlowError
from .estimates import GradientEstimate
from .grid import RngStream, SamplePath


@dataclass(frozen=True)
class SdeSpec:
    """Coefficients and x-derivatives of dX = sigma(t,X) dB + b(t,X) dt."""

    name: str
    x0: float
    sigma: Callable
    b: Callable
    sigma_x: Callable
    b_x: Callable
    params: dict = field(default_factory=dict)

    def check_derivatives(self, rng: RngStream, n_points: int = 25, tol: float = 1e-5) -> None:
        """Spot-check sigma_x / b_x against central differences at random (t, x)."""
        gen = rng.generator()
        ts = gen.uniform(0.0, 1.0, n_points)
        xs = gen.uniform(-2.0, 2.0, n_points) + self.x0
        eps = 1e-6
        for fn, dfn, label in ((self.sigma, self.sigma_x, "sigma"), (self.b, self.b_x, "b")):
            fd = (fn(ts, xs + eps) - fn(ts, xs - eps)) / (2 * eps)
            exact = dfn(ts, xs) * np.ones_like(xs)
            scale = np.abs(exact) + 1.0
            if np.any(np.abs(fd - exact) / scale > tol):
                raise ConfigurationError(f"{label}_x inconsistent with finite differences")


def make_sde(name: str, **params) -> SdeSpec:
    """Built-in registry: gbm, additive, sine-diffusion."""
    if name == "gbm":
        sig = float(params.pop("sigma", 0.3))
        mu = float(params.pop("b", 0.1))
        x0 = float(params.pop("x0", 1.0))
        _reject_extra(name, params)
        return SdeSpec(
            "gbm",
            x0,
            sigma=lambda t, x: sig * x,
            b=lambda t, x: mu * x,
            sigma_x=lambda t, x: sig * np.ones_like(np.asarray(x, dtype=float)),
            b_x=lambda t, x: mu * np.ones_like(np.asarray(x, dtype=float)),
            params={"sigma": sig, "b": mu, "x0": x0},
        )
    if name == "additive":
        c = float(params.pop("sigma", 1.0))
        mu = float(params.pop("b", 0.0))
        x0 = float(params.pop("x0", 0.0))
        _reject_extra(name, params)
        zeros = lambda t, x: np.zeros_like(np.asarray(x, dtype=float))
        return SdeSpec(
            "additive",
            x0,
            sigma=lambda t, x: c * np.ones_like(np.asarray(x, dtype=float)),
            b=lambda t, x: mu * np.ones_like(np.asarray(x, dtype=float)),
            sigma_x=zeros,
            b_x=zeros,
            params={"sigma": c, "b": mu, "x0": x0},
        )
    if name == "sine-diffusion":
        x0 = float(params.pop("x0", 1.0))
        _reject_extra(name, params)
        zeros = lambda t, x: np.zeros_like(np.asarray(x, dtype=float))
        return SdeSpec(
            "sine-diffusion",
            x0,
            sigma=lambda t, x: np.sin(x) + 2.0,
            b=zeros,
            sigma_x=lambda t, x: np.cos(x),
            b_x=zeros,
            params={"x0": x0},
        )
    raise ConfigurationError(f"unknown SDE spec {name!r}; known: gbm, additive, sine-diffusion")


def _reject_extra(name: str, params: dict) -> None:
    if params:
        raise ConfigurationError(f"unknown parameters for {name!r}: {sorted(params)}")


def solve_sde(spec: SdeSpec, driver: SamplePath) -> np.ndarray:
    """Euler path(s) of the SDE; shape (..., n_steps + 1).

    A single path raises NumericalBlowupError at the first non-finite state;
    batches return non-finite entries for the caller to mask and count.
    """
    grid = driver.grid
    dt = grid.dt
    times = grid.times
    inc = driver.increments
    shape = inc.shape[:-1]
    out = np.empty(shape + (grid.n_steps + 1,))
    x = np.full(shape, float(spec.x0)) if shape else float(spec.x0)
    out[..., 0] = x
    for j in range(grid.n_steps):
        t = times[j]
        x = x + spec.sigma(t, x) * inc[..., j] + spec.b(t, x) * dt
        out[..., j + 1] = x
    if not shape and not np.all(np.isfinite(out)):
        step = int(np.argmax(~np.isfinite(out)))
        raise NumericalBlowupError(step)
    return out


def first_variation(spec: SdeSpec, driver: SamplePath, x_values: np.ndarray) -> np.ndarray:
    """Linearized flow Y on the same increments; Y_0 = 1."""
    grid = driver.grid
    dt = grid.dt
    times = grid.times
    inc = driver.increments
    shape = inc.shape[:-1]
    out = np.empty(shape + (grid.n_steps + 1,))
    y = np.ones(shape) if shape else 1.0
    out[..., 0] = y
    for j in range(grid.n_steps):
        t = times[j]
        x = x_values[..., j]
        y = y * (1.0 + spec.sigma_x(t, x) * inc[..., j] + spec.b_x(t, x) * dt)
        out[..., j + 1] = y
    return out


def flow_oracle(spec: SdeSpec, brownian: SamplePath, u: float, t: float) -> GradientEstimate:
    """D_u X_t via the first-variation transfer: sigma(u-, X_{u-}) Y_t / Y_u."""
    grid = brownian.grid
    k = grid.index_at_or_after(u)
    m = int(round(t / grid.dt))
    if not k <= m <= grid.n_steps:
        raise DomainError(f"need u <= t <= T on the grid, got u={u}, t={t}")
    x = solve_sde(spec, brownian)
    y = first_variation(spec, brownian, x)
    y_u = y[..., k]
    if np.any(y_u == 0.0):
        raise SingularFlowError("first variation vanished at the perturbation time")
    sig = spec.sigma(grid.times[k - 1], x[..., k - 1])
    value = sig * y[..., m] / y_u
    return GradientEstimate(u=k * grid.dt, t=m * grid.dt, value=value, method="flow_oracle")
