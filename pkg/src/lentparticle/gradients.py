"""Malliavin gradients by jump insertion and their independent cross-checks.

The central move: perturb the driving path by a * 1_{. >= u} ("lend" a jump of
size a at time u), re-evaluate the functional, and difference in a.  Central
differences with a default step of 1e-4 are used throughout, so the bias is
O(step^2) for smooth functionals.  Each estimator is paired with a route that
does not go through the jump difference:

* cylindrical functionals -- the chain-rule value sum_i dPhi_i * h_i(u-);
* chaos vectors           -- the order-lowering kernel contraction integrated
                             against the martingale;
* SDE solutions           -- the first-variation flow (sde.flow_oracle);
* running suprema         -- the closed-form indicator from the piecewise
                             linear structure of the max.
"""

from __future__ import annotations

import numpy as np

from .chaos import chaotic_extension, iterated_integral, stochastic_integral
from .drivers import add_unit_jump, rotate
from .errors import ConfigurationError, DomainError
from .estimates import GradientEstimate
from .functionals import CylindricalFunctional, evaluate_functional
from .grid import SamplePath, require_same_grid
from .kernels import ChaosVector, SimplexKernel
from .sde import SdeSpec, solve_sde
from .stepfn import StepFunction

DEFAULT_STEP = 1e-4


def gradient_cylindrical(
    F: CylindricalFunctional, path: SamplePath, u: float, a0: float = DEFAULT_STEP
) -> GradientEstimate:
    """D_u F for F = Phi(...): jump difference plus the chain-rule value.

    The perturbation lands in the increment of the snap step, so the analytic
    value evaluates each h_i at the left endpoint of that step.
    """
    grid = path.grid
    k = grid.index_at_or_after(u)
    snapped = abs(k * grid.dt - u) > 1e-12 * grid.horizon
    u_left = grid.times[k - 1]

    plus = evaluate_functional(F, add_unit_jump(path, u, a0))
    minus = evaluate_functional(F, add_unit_jump(path, u, -a0))
    diff = (plus - minus) / (2.0 * a0)

    args = F.arguments(path)
    grads = F.phi_grad(*args)
    analytic = 0.0
    for g, h in zip(grads, F.h_list):
        analytic = analytic + g * _argument_derivative(h, path, u_left)
    return GradientEstimate(
        u=k * grid.dt, t=grid.horizon, value=diff, method="jump_difference",
        theta=a0, analytic=analytic, snapped=snapped,
    )


def _argument_derivative(h, path: SamplePath, u_left: float):
    """D_u of a single argument, with u taken at the snap step's left endpoint."""
    if isinstance(h, StepFunction):
        return h(u_left)
    if isinstance(h, SimplexKernel):
        total = 0.0
        for g, reduced in h.contractions():
            total = total + g(u_left) * iterated_integral(reduced, path)
        return total
    raise ConfigurationError(f"unsupported argument type {type(h)!r}")


def gradient_chaos(
    F: ChaosVector, brownian: SamplePath, martingale: SamplePath, theta0: float = 1e-3
) -> np.ndarray:
    """F-sharp: central difference of the chaotic extension, (F^t - F^-t)/(2t)."""
    plus = chaotic_extension(F, brownian, martingale, theta0)
    minus = chaotic_extension(F, brownian, martingale, -theta0)
    return (plus - minus) / (2.0 * theta0)


def chaos_gradient_contraction(
    F: ChaosVector, brownian: SamplePath, martingale: SamplePath
) -> np.ndarray:
    """The theta-free route: int D_s F dM_s by kernel contraction.

    D_s F = sum_n sum_i g_i(s) I_{n-1}(sym of the other factors), so the
    integral splits into Brownian iterated integrals times first-order
    integrals of the sliced factors against M.
    """
    require_same_grid(brownian, martingale)
    total = 0.0
    for kernel in F.kernels:
        if kernel.order == 0:
            continue
        for g, reduced in kernel.contractions():
            total = total + iterated_integral(reduced, brownian) * stochastic_integral(
                g, martingale
            )
    return total


def lent_particle_sde(
    spec: SdeSpec, brownian: SamplePath, u: float, t: float, theta: float = DEFAULT_STEP
) -> GradientEstimate:
    """D_u X_t by solving against dB + theta 1_{. >= u} and differencing in theta."""
    if theta <= 0.0:
        raise DomainError(f"theta must be > 0, got {theta}")
    grid = brownian.grid
    k = grid.index_at_or_after(u)
    m = int(round(t / grid.dt))
    if not k <= m <= grid.n_steps:
        raise DomainError(f"need u <= t <= T on the grid, got u={u}, t={t}")
    plus = solve_sde(spec, add_unit_jump(brownian, u, theta))[..., m]
    minus = solve_sde(spec, add_unit_jump(brownian, u, -theta))[..., m]
    value = (plus - minus) / (2.0 * theta)
    return GradientEstimate(u=k * grid.dt, t=m * grid.dt, value=value,
                            method="jump_difference", theta=theta)


def lent_particle_sde_poisson(
    spec: SdeSpec,
    brownian: SamplePath,
    martingale: SamplePath,
    t: float,
    theta: float = DEFAULT_STEP,
    u_from_jump: bool = True,
) -> GradientEstimate | None:
    """The Poisson-driver variant: solve against Y^theta and difference at 0.

    With the symmetric compound driver on a single-jump path the limit is
    J_1 * D_{U_1} X_t; multiplying by the mark recovers D_{U_1} X_t.  Returns
    None (skip) when ``u_from_jump`` is set and the path carries no jump.
    """
    grid = require_same_grid(brownian, martingale)
    m = int(round(t / grid.dt))
    if not 1 <= m <= grid.n_steps:
        raise DomainError(f"t={t} not a positive grid time")
    u = float("nan")
    if u_from_jump:
        if martingale.is_batch:
            raise ConfigurationError("u_from_jump needs a single martingale path")
        times = martingale.jump_times
        if times.size == 0:
            return None
        u = float(times[0])
    plus = solve_sde(spec, rotate(brownian, martingale, theta))[..., m]
    minus = solve_sde(spec, rotate(brownian, martingale, -theta))[..., m]
    value = (plus - minus) / (2.0 * theta)
    return GradientEstimate(u=u, t=m * grid.dt, value=value,
                            method="jump_difference", theta=theta)


def integration_by_parts_pair(F, G: StepFunction, brownian: SamplePath):
    """Per-path (lhs, rhs) of E[F int G dB] = E[int D_u F G_u du], G deterministic."""
    lhs = evaluate_functional(F, brownian) * stochastic_integral(G, brownian)
    if isinstance(F, ChaosVector):
        rhs = 0.0
        for kernel in F.kernels:
            if kernel.order == 0:
                continue
            for g, reduced in kernel.contractions():
                rhs = rhs + iterated_integral(reduced, brownian) * g.inner(G)
    elif isinstance(F, CylindricalFunctional):
        args = F.arguments(brownian)
        grads = F.phi_grad(*args)
        rhs = 0.0
        for dphi, h in zip(grads, F.h_list):
            if not isinstance(h, StepFunction):
                raise ConfigurationError("IBP pairs support step-function arguments only")
            rhs = rhs + dphi * h.inner(G)
    else:
        raise ConfigurationError(f"unsupported functional type {type(F)!r}")
    return lhs, rhs


def integration_by_parts_check(
    F, G: StepFunction, n_paths: int, seed: int, grid, chunk: int = 8192
) -> tuple[float, float, float]:
    """Returns (lhs mean, rhs mean, pooled standard error of the difference)."""
    from .drivers import martingale_batch

    lhs_sum = rhs_sum = d_sum = d_sq = 0.0
    done = 0
    while done < n_paths:
        count = min(chunk, n_paths - done)
        B = martingale_batch("brownian", grid, seed, done, count)
        lhs, rhs = integration_by_parts_pair(F, G, B)
        lhs = np.broadcast_to(np.asarray(lhs, dtype=float), (count,))
        rhs = np.broadcast_to(np.asarray(rhs, dtype=float), (count,))
        d = lhs - rhs
        lhs_sum += lhs.sum()
        rhs_sum += rhs.sum()
        d_sum += d.sum()
        d_sq += np.sum(d**2)
        done += count
    mean_d = d_sum / n_paths
    var_d = max(d_sq / n_paths - mean_d**2, 0.0)
    pooled_se = float(np.sqrt(var_d / n_paths))
    return lhs_sum / n_paths, rhs_sum / n_paths, pooled_se


def supremum_decomposition(K, brownian: SamplePath, u: float):
    """(sup_{s < u}, sup_{s >= u}) of B + K over the grid, u snapped forward."""
    grid = brownian.grid
    k = grid.index_at_or_after(u)
    levels = brownian.values + _k_values(K, grid)
    before = np.max(levels[..., :k], axis=-1)
    after = np.max(levels[..., k:], axis=-1)
    return before, after


def _k_values(K, grid) -> np.ndarray:
    if K is None:
        return np.zeros(grid.n_steps + 1)
    if isinstance(K, StepFunction):
        return np.asarray(K(grid.times))
    if callable(K):
        return np.asarray(K(grid.times), dtype=float)
    return np.asarray(K, dtype=float)


def supremum_gradient(K, brownian: SamplePath, u: float, a: float) -> np.ndarray:
    """(M(B + a 1_{. >= u}) - M(B)) / a for M(B) = sup_{s <= T} (B_s + K_s).

    Uses the max decomposition, so the piecewise-linear structure is evaluated
    exactly: the quotient is 1 where the post-u supremum dominates, 0 where it
    trails by more than a, and the transitional value in between.
    """
    if a <= 0.0:
        raise DomainError(f"a must be > 0, got {a}")
    before, after = supremum_decomposition(K, brownian, u)
    gap = after - before
    return np.clip(gap / a + 1.0, 0.0, 1.0)
