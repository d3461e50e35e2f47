"""Simulation of the driving processes.

Three drivers are supported: standard Brownian motion B, the compensated
unit-rate Poisson process N~_t = N_t - t, and the symmetric compound Poisson
process M_t = sum_{n <= N_t} J_n with marks J_n = +-1.  Rotations
Y^theta = B cos(theta) + M sin(theta) and jump-augmented Brownian paths
(omega + a 1_{. >= u}) are built on top of them.

Jump times are drawn as unit-rate exponential gaps and snapped forward to the
nearest grid point strictly after the previous jump; the compensator -t of N~
is carried analytically as a continuous drift of -dt per step, not as
pseudo-jumps.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .grid import (
    CHANNEL_BROWNIAN,
    CHANNEL_COMPOUND,
    CHANNEL_HAT,
    CHANNEL_POISSON,
    RngStream,
    SamplePath,
    TimeGrid,
    require_same_grid,
)


def simulate_brownian(grid: TimeGrid, rng: RngStream) -> SamplePath:
    """Brownian path: i.i.d. N(0, dt) increments, B_0 = 0."""
    gen = rng.generator()
    inc = gen.standard_normal(grid.n_steps) * np.sqrt(grid.dt)
    return SamplePath.from_increments(grid, inc)


def simulate_compensated_poisson(grid: TimeGrid, rng: RngStream) -> SamplePath:
    """Compensated Poisson path N~_t = N_t - t with unit jumps on the grid."""
    gen = rng.generator()
    jumps = np.zeros(grid.n_steps)
    for k in _jump_step_indices(gen, grid):
        jumps[k - 1] += 1.0
    return SamplePath.from_increments(grid, jumps - grid.dt, jump_increments=jumps)


def simulate_symmetric_compound_poisson(grid: TimeGrid, rng: RngStream) -> SamplePath:
    """Compound Poisson path with +-1 marks; mean-zero, no compensator term."""
    gen = rng.generator()
    jumps = np.zeros(grid.n_steps)
    idx = _jump_step_indices(gen, grid)
    if idx:
        marks = gen.integers(0, 2, size=len(idx)) * 2.0 - 1.0
        for k, m in zip(idx, marks):
            jumps[k - 1] += m
    return SamplePath.from_increments(grid, jumps.copy(), jump_increments=jumps)


def _jump_step_indices(gen: np.random.Generator, grid: TimeGrid) -> list[int]:
    """Arrival times as exponential gaps, snapped forward to distinct grid points."""
    out: list[int] = []
    t = 0.0
    prev = 0
    while True:
        t += gen.standard_exponential()
        if t > grid.horizon:
            return out
        k = max(int(np.ceil(t / grid.dt - 1e-9)), prev + 1)
        if k > grid.n_steps:
            return out
        out.append(k)
        prev = k


def _cos_sin(theta: float) -> tuple[float, float]:
    # Clamp values that are zero up to the representation error of pi/2
    # multiples, so that rotate(B, M, pi/2) returns the martingale exactly.
    c, s = np.cos(theta), np.sin(theta)
    if abs(c) < 1e-15:
        c = 0.0
    if abs(s) < 1e-15:
        s = 0.0
    return float(c), float(s)


def rotate(brownian: SamplePath, martingale: SamplePath, theta: float) -> SamplePath:
    """Y^theta = B cos(theta) + M sin(theta), combined at the level of grid values.

    The identity Y^theta_{t_k} = B_{t_k} cos(theta) + M_{t_k} sin(theta) holds
    bit-for-bit at every grid point because the levels are combined directly
    and the increments are derived from them.
    """
    grid = require_same_grid(brownian, martingale)
    c, s = _cos_sin(theta)
    values = c * brownian.values + s * martingale.values
    increments = c * brownian.increments + s * martingale.increments
    jumps = None
    if martingale.jump_increments is not None:
        jumps = s * martingale.jump_increments
    out = SamplePath(grid, increments, jump_increments=jumps)
    out._values = values
    return out


def add_unit_jump(path: SamplePath, u: float, a: float) -> SamplePath:
    """Path perturbed by a * 1_{. >= u}, with u snapped forward to the grid.

    Levels at every grid point t_k >= u are increased by exactly a; the
    increments are unchanged except at the snap step, whose increment grows
    by a.
    """
    grid = path.grid
    k = grid.index_at_or_after(u)
    inc = path.increments.copy()
    inc[..., k - 1] += a
    values = path.values.copy()
    values[..., k:] += a
    jumps = None if path.jump_increments is None else path.jump_increments.copy()
    out = SamplePath(grid, inc, jumps)
    out._values = values
    return out


# --- batch simulation -------------------------------------------------------
#
# Batches stack per-path streams: path i uses the stream (master_seed,
# channel, i, 0) regardless of batch boundaries, so any chunking or worker
# layout produces bitwise-identical paths.

def brownian_batch(
    grid: TimeGrid, master_seed: int, start: int, count: int, channel: int = CHANNEL_BROWNIAN
) -> SamplePath:
    inc = np.empty((count, grid.n_steps))
    root = np.sqrt(grid.dt)
    for i in range(count):
        gen = RngStream(master_seed, start + i, channel).generator()
        inc[i] = gen.standard_normal(grid.n_steps)
    inc *= root
    return SamplePath.from_increments(grid, inc)


def compensated_poisson_batch(grid: TimeGrid, master_seed: int, start: int, count: int) -> SamplePath:
    jumps = np.zeros((count, grid.n_steps))
    for i in range(count):
        gen = RngStream(master_seed, start + i, CHANNEL_POISSON).generator()
        for k in _jump_step_indices(gen, grid):
            jumps[i, k - 1] += 1.0
    return SamplePath.from_increments(grid, jumps - grid.dt, jump_increments=jumps)


def compound_poisson_batch(grid: TimeGrid, master_seed: int, start: int, count: int) -> SamplePath:
    jumps = np.zeros((count, grid.n_steps))
    for i in range(count):
        gen = RngStream(master_seed, start + i, CHANNEL_COMPOUND).generator()
        idx = _jump_step_indices(gen, grid)
        if idx:
            marks = gen.integers(0, 2, size=len(idx)) * 2.0 - 1.0
            for k, m in zip(idx, marks):
                jumps[i, k - 1] += m
    return SamplePath.from_increments(grid, jumps.copy(), jump_increments=jumps)


DRIVER_BATCHES = {
    "brownian": brownian_batch,
    "poisson": compensated_poisson_batch,
    "compound": compound_poisson_batch,
}


def martingale_batch(kind: str, grid: TimeGrid, master_seed: int, start: int, count: int) -> SamplePath:
    """Batch of normal-martingale paths; kind in {brownian, poisson, compound, hat}."""
    if kind == "hat":
        return brownian_batch(grid, master_seed, start, count, channel=CHANNEL_HAT)
    try:
        return DRIVER_BATCHES[kind](grid, master_seed, start, count)
    except KeyError:
        raise DomainError(f"unknown driver kind {kind!r}") from None
