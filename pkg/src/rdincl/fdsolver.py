"""Monotone implicit finite-difference stepper on (0, 1) with zero boundaries.

One step solves

    (I + dt*A - dt*omega(t_{n+1})*I) u^{n+1} = u^n + dt*b(t_{n+1}) h^n,

with A the standard second-difference operator (2/dx^2 on the diagonal,
-1/dx^2 off it) and h^n the selection field chosen at the old state.  Under
dt*omega1 < 1 the system matrix is an irreducible tridiagonal M-matrix, so
its inverse is entrywise positive.  The solve is a symmetric
positive-definite tridiagonal factorization without pivoting, whose forward
and backward sweeps only ever add products of non-negative quantities when
the right-hand side is non-negative; positivity and componentwise comparison
therefore hold exactly in floating point, not merely up to round-off.

Coefficient evaluation times inside ``solve`` are formed as
``tau + (n + 1) * dt`` (one product, one addition).  Together with lazy
symbol translation this makes time-shifted reruns reproduce the original
float operation sequence, which is what the bitwise cocycle and translation
checks exercise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs

from . import spectral
from .coefficients import Symbol
from .selections import SelectionPolicy, sign_band_distance

_ptsv, = get_lapack_funcs(("ptsv",), (np.array([1.0]), np.array([1.0])))


class StepSizeError(ValueError):
    """dt too large for the monotone (M-matrix) structure: needs dt*omega1 < 1."""


class SourceSignError(ValueError):
    """A check required non-negative reaction sources and the data violate it."""


@dataclass(frozen=True)
class Grid:
    """Uniform interior grid of (0, 1): nodes x_i = i/(n+1), i = 1..n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"need at least 3 interior nodes, got {self.n}")

    @property
    def dx(self) -> float:
        return 1.0 / (self.n + 1)

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(1, self.n + 1)


def l2_norm(grid: Grid, u: np.ndarray) -> float:
    return float(math.sqrt(grid.dx * np.sum(np.asarray(u) ** 2)))


def h1_norm(grid: Grid, u: np.ndarray) -> float:
    """Discrete gradient norm by forward differences, boundary gaps included."""
    padded = np.concatenate(([0.0], np.asarray(u), [0.0]))
    return float(math.sqrt(np.sum(np.diff(padded) ** 2) / grid.dx))


def second_difference(grid: Grid, u: np.ndarray) -> np.ndarray:
    """(u_{i-1} - 2 u_i + u_{i+1}) / dx^2 with zero boundary values."""
    padded = np.concatenate(([0.0], np.asarray(u), [0.0]))
    return (padded[:-2] - 2.0 * padded[1:-1] + padded[2:]) / grid.dx ** 2


@dataclass(frozen=True)
class Trajectory:
    """States and the selection fields that produced them.

    states[n] is the field after n steps (times tau + n*dt); sources[n] is
    the selection applied over step n, kept so the run can be audited against
    the admissible-set condition and re-integrated independently.
    """

    grid: Grid
    symbol: Symbol
    tau: float
    dt: float
    states: np.ndarray   # (steps + 1, n)
    sources: np.ndarray  # (steps, n)

    @property
    def steps(self) -> int:
        return self.sources.shape[0]

    def times(self) -> np.ndarray:
        return self.tau + self.dt * np.arange(self.steps + 1)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _check_step_size(dt: float, sigma: Symbol) -> None:
    if dt <= 0.0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if dt * sigma.omega1 >= 1.0:
        raise StepSizeError(
            f"dt*omega1 = {dt * sigma.omega1} >= 1 breaks the monotone scheme; "
            f"reduce dt below {1.0 / sigma.omega1}"
        )


def _advance(u: np.ndarray, dt: float, b: float, omega: float, h: np.ndarray,
             grid: Grid) -> np.ndarray:
    r = dt / grid.dx ** 2
    diag = np.full(grid.n, 1.0 + 2.0 * r - dt * omega)
    off = np.full(grid.n - 1, -r)
    rhs = u + (dt * b) * h
    _d, _e, out, info = _ptsv(diag, off, rhs)
    if info != 0:
        raise RuntimeError(f"tridiagonal solve failed with LAPACK info={info}")
    return out


def step(u: np.ndarray, t: float, dt: float, sigma: Symbol, h: np.ndarray,
         grid: Grid) -> np.ndarray:
    """One implicit step from time t; coefficients are taken at t + dt."""
    _check_step_size(dt, sigma)
    b, omega = sigma.eval(t + dt)
    return _advance(np.asarray(u, dtype=float), dt, b, omega,
                    np.asarray(h, dtype=float), grid)


def _n_steps(tau: float, t_end: float, dt: float) -> int:
    if t_end <= tau:
        raise ValueError(f"need tau < t_end, got tau={tau}, t_end={t_end}")
    return max(1, round((t_end - tau) / dt))


def solve(u_tau: np.ndarray, tau: float, t_end: float, dt: float, sigma: Symbol,
          policy: SelectionPolicy, grid: Grid) -> Trajectory:
    """March from tau to within dt of t_end, recording states and selections."""
    _check_step_size(dt, sigma)
    steps = _n_steps(tau, t_end, dt)
    states = np.empty((steps + 1, grid.n))
    sources = np.empty((steps, grid.n))
    u = np.asarray(u_tau, dtype=float).copy()
    states[0] = u
    for n in range(steps):
        h = policy.select(u, tau + n * dt)
        b, omega = sigma.eval(tau + (n + 1) * dt)
        u = _advance(u, dt, b, omega, h, grid)
        sources[n] = h
        states[n + 1] = u
    return Trajectory(grid=grid, symbol=sigma, tau=tau, dt=dt,
                      states=states, sources=sources)


def evolve(u_tau: np.ndarray, tau: float, t_end: float, dt: float, sigma: Symbol,
           policy: SelectionPolicy, grid: Grid,
           capture: set[int] | None = None) -> np.ndarray | dict[int, np.ndarray]:
    """Same march as ``solve`` without recording; returns the final state.

    With ``capture`` (a set of step indices) returns {index: state} instead,
    which keeps long pullback runs at O(1) memory.
    """
    _check_step_size(dt, sigma)
    steps = _n_steps(tau, t_end, dt)
    u = np.asarray(u_tau, dtype=float).copy()
    captured: dict[int, np.ndarray] = {}
    if capture is not None and 0 in capture:
        captured[0] = u.copy()
    for n in range(steps):
        h = policy.select(u, tau + n * dt)
        b, omega = sigma.eval(tau + (n + 1) * dt)
        u = _advance(u, dt, b, omega, h, grid)
        if capture is not None and n + 1 in capture:
            captured[n + 1] = u.copy()
    if capture is not None:
        return captured
    return u


def residual_audit(traj: Trajectory, n_checkpoints: int = 8) -> tuple[float, float]:
    """Audit a trajectory: selection admissibility and equation residual.

    Returns (inclusion_residual, pde_residual).  The inclusion residual is
    the worst pointwise distance of any recorded selection from the
    admissible set at its state.  The pde residual re-integrates the recorded
    sources with the sine-series dynamics from the same initial state and
    reports the largest L2 gap over checkpoints; for trajectories produced by
    ``solve`` it measures pure discretization error, O(dx^2 + dt).
    """
    if traj.steps == 0:
        raise ValueError("empty trajectory")
    eta = 1e-12
    inclusion = max(
        sign_band_distance(traj.sources[n], traj.states[n], eta)
        for n in range(traj.steps)
    )
    stride = max(1, traj.steps // n_checkpoints)
    marks = set(range(stride, traj.steps + 1, stride)) | {traj.steps}
    oracle_states = spectral.reintegrate_sources(
        traj.states[0], traj.tau, traj.dt, traj.symbol, traj.sources, traj.grid, marks
    )
    pde = max(l2_norm(traj.grid, traj.states[n] - oracle_states[n]) for n in marks)
    return inclusion, pde


def discrete_min_principle_check(traj: Trajectory) -> bool:
    """Interior space-time minimum must not undercut the parabolic boundary.

    Requires the realized reaction b*h + omega*u to be non-negative over the
    window (checked against the implicit state, matching the scheme); raises
    SourceSignError otherwise rather than reporting a vacuous pass.  The
    boundary minimum is min(initial slice, 0) since the lateral columns are
    identically zero.
    """
    for n in range(traj.steps):
        b, omega = traj.symbol.eval(traj.tau + (n + 1) * traj.dt)
        reaction = b * traj.sources[n] + omega * traj.states[n + 1]
        if np.any(reaction < 0.0):
            raise SourceSignError(
                f"reaction source negative at step {n}; the minimum principle "
                "precondition does not hold on this window"
            )
    boundary_min = min(float(traj.states[0].min()), 0.0)
    interior_min = float(traj.states[1:].min())
    return interior_min >= boundary_min


def comparison_check(u_traj: Trajectory, v_traj: Trajectory) -> bool:
    """True iff u stays componentwise below v at every recorded step."""
    if u_traj.grid != v_traj.grid or u_traj.dt != v_traj.dt \
            or u_traj.tau != v_traj.tau or u_traj.steps != v_traj.steps \
            or u_traj.symbol != v_traj.symbol:
        raise ValueError("comparison requires identical grid, steps and symbol")
    return bool(np.all(u_traj.states <= v_traj.states))
