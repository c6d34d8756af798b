"""Equilibria, the pullback limit state, ignition connections and diagnostics.

In the positive cone the long-time picture is spanned by three kinds of
objects: the rest state 0, a unique positive bounded state xi(t) obtained in
the pullback limit of the positively forced linear dynamics, and the delayed
ignition trajectories that leave 0 at some time tau and climb toward xi.
This module computes all three on the grid, together with the autonomous
equilibrium formulas that sandwich xi, an energy functional that decreases
along autonomous trajectories, and rate/distance diagnostics used by the
verification suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fdsolver
from .coefficients import Symbol, constant
from .fdsolver import Grid, l2_norm
from .selections import POSITIVE_BRANCH, SelectionPolicy, SignWithValue

PI_SQUARED = math.pi ** 2


@dataclass(frozen=True)
class AttractorParams:
    """Decay rate and coefficient bounds extracted from a symbol."""

    delta: float
    b0: float
    b1: float
    omega0: float
    omega1: float

    @classmethod
    def from_symbol(cls, sigma: Symbol) -> "AttractorParams":
        return cls(delta=PI_SQUARED - sigma.omega1, b0=sigma.b0, b1=sigma.b1,
                   omega0=sigma.omega0, omega1=sigma.omega1)


@dataclass(frozen=True)
class EquilibriumField:
    """A stationary profile with the coefficients and elliptic residual used."""

    values: np.ndarray
    b: float
    omega: float
    residual_inf: float


def positive_equilibrium(b: float, omega: float, grid: Grid) -> EquilibriumField:
    """The positive stationary profile of -u'' = b + omega*u, zero at 0 and 1.

    For omega > 0 the closed form is
    (b/omega) cos(sqrt(omega) x) + b(1-cos sqrt(omega))/(omega sin sqrt(omega))
    * sin(sqrt(omega) x) - b/omega; for omega = 0 it degenerates to the
    parabola b*x(1-x)/2 (the b factor is forced by the stationary equation).
    Requires 0 <= omega < pi^2, which keeps sqrt(omega) clear of the zeros of
    sin.
    """
    if b <= 0.0:
        raise ValueError(f"b must be positive, got {b}")
    if not 0.0 <= omega < PI_SQUARED:
        raise ValueError(f"omega must lie in [0, pi^2), got {omega}")
    x = grid.x
    if omega == 0.0:
        values = b * x * (1.0 - x) / 2.0
    else:
        r = math.sqrt(omega)
        coeff = b * (1.0 - math.cos(r)) / (omega * math.sin(r))
        values = (b / omega) * np.cos(r * x) + coeff * np.sin(r * x) - b / omega
    residual = fdsolver.second_difference(grid, values) + b + omega * values
    return EquilibriumField(values=values, b=b, omega=omega,
                            residual_inf=float(np.abs(residual).max()))


def discrete_equilibrium(b: float, omega: float, grid: Grid) -> np.ndarray:
    """Fixed point of the implicit step itself: solves (A - omega I) u = b."""
    from scipy.linalg import solveh_banded
    ab = np.zeros((2, grid.n))
    ab[0, 1:] = -1.0 / grid.dx ** 2
    ab[1, :] = 2.0 / grid.dx ** 2 - omega
    return solveh_banded(ab, np.full(grid.n, b))


def sandwich_bounds(sigma: Symbol, grid: Grid) -> tuple[EquilibriumField, EquilibriumField]:
    """Stationary profiles at the extreme coefficients; lower <= upper pointwise."""
    lower = positive_equilibrium(sigma.b0, sigma.omega0, grid)
    upper = positive_equilibrium(sigma.b1, sigma.omega1, grid)
    return lower, upper


def pullback_equilibrium(t: float, sigma: Symbol, t_pull: float, grid: Grid,
                         dt: float, from_upper: bool = True) -> np.ndarray:
    """The unique positive bounded state at time t, by pullback.

    Runs the positively forced linear dynamics from t - t_pull with the
    stationary upper (or lower) bound as data; the one-sided error after the
    pull is below exp(-delta*t_pull) times the data norm, by the contraction
    of the forced linear flow.
    """
    if t_pull <= 0.0:
        raise ValueError(f"t_pull must be positive, got {t_pull}")
    lower, upper = sandwich_bounds(sigma, grid)
    start = upper.values if from_upper else lower.values
    return evolve_positive_branch(start, t - t_pull, t, dt, sigma, grid)


def pullback_equilibrium_bracket(t: float, sigma: Symbol, t_pull: float, grid: Grid,
                                 dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Two-sided pullback: states from the lower and upper stationary bounds."""
    lo = pullback_equilibrium(t, sigma, t_pull, grid, dt, from_upper=False)
    hi = pullback_equilibrium(t, sigma, t_pull, grid, dt, from_upper=True)
    return lo, hi


def evolve_positive_branch(u0: np.ndarray, tau: float, t: float, dt: float,
                           sigma: Symbol, grid: Grid) -> np.ndarray:
    if t == tau:
        return np.asarray(u0, dtype=float).copy()
    return fdsolver.evolve(u0, tau, t, dt, sigma, POSITIVE_BRANCH, grid)


def pullback_equilibrium_path(times, sigma: Symbol, t_pull: float, grid: Grid,
                              dt: float) -> dict[float, np.ndarray]:
    """Pullback states at several times from a single backward-started run."""
    times = sorted(set(float(t) for t in times))
    start = times[0] - t_pull
    _lower, upper = sandwich_bounds(sigma, grid)
    marks = {round((t - start) / dt): t for t in times}
    captured = fdsolver.evolve(upper.values, start, times[-1], dt, sigma,
                               POSITIVE_BRANCH, grid, capture=set(marks))
    return {t: captured[n] for n, t in marks.items()}


def connection(tau_ignite: float, t: float, sigma: Symbol, grid: Grid,
               dt: float) -> np.ndarray:
    """State at time t of the trajectory resting at 0 up to tau_ignite.

    Zero for t <= tau_ignite; afterwards the positively forced linear flow
    from zero data, which is strictly positive in the interior.
    """
    if t <= tau_ignite:
        return np.zeros(grid.n)
    return evolve_positive_branch(np.zeros(grid.n), tau_ignite, t, dt, sigma, grid)


@dataclass(frozen=True)
class AttractorSection:
    """The computed objects at one observation time."""

    time: float
    zero: np.ndarray
    equilibrium: np.ndarray
    connections: tuple[tuple[float, np.ndarray], ...]  # (ignition time, state)

    def elements(self) -> list[tuple[str, np.ndarray]]:
        out = [("zero", self.zero), ("equilibrium", self.equilibrium)]
        out.extend((f"ignition,tau={tau:g}", u) for tau, u in self.connections)
        return out


def section(t: float, sigma: Symbol, tau_samples, grid: Grid, dt: float,
            t_pull: float | None = None) -> AttractorSection:
    """Sample the attracting family at time t: 0, the pullback state, connections."""
    tau_samples = sorted(float(tau) for tau in tau_samples)
    if tau_samples and tau_samples[-1] > t:
        raise ValueError("ignition samples must not exceed the section time")
    if t_pull is None:
        oldest = min(tau_samples) if tau_samples else t
        t_pull = max(t - oldest + 2.0, 4.0)
    xi = pullback_equilibrium(t, sigma, t_pull, grid, dt)
    conns = tuple((tau, connection(tau, t, sigma, grid, dt)) for tau in tau_samples)
    return AttractorSection(time=t, zero=np.zeros(grid.n), equilibrium=xi,
                            connections=conns)


class SectionDistance:
    """L2 distance to a sampled section, with ignition-grid refinement.

    The connection family is a continuum in the ignition time; per query the
    sample grid is refined (midpoints of adjacent samples plus one toward the
    section time) until the nearest-element distance stabilizes within
    rel_tol.  Connection states are cached so sweeps over many states reuse
    them.
    """

    def __init__(self, sec: AttractorSection, sigma: Symbol, grid: Grid, dt: float,
                 rel_tol: float = 0.01, max_refine: int = 6):
        self.sec = sec
        self.sigma = sigma
        self.grid = grid
        self.dt = dt
        self.rel_tol = rel_tol
        self.max_refine = max_refine
        self._conn: dict[float, np.ndarray] = {tau: v for tau, v in sec.connections}

    def _connection(self, tau: float) -> np.ndarray:
        if tau not in self._conn:
            self._conn[tau] = connection(tau, self.sec.time, self.sigma, self.grid, self.dt)
        return self._conn[tau]

    def nearest(self, u: np.ndarray) -> tuple[str, float]:
        """(label, distance) of the nearest section element after refinement."""
        u = np.asarray(u, dtype=float)
        grid = self.grid
        scored: list[tuple[float, str]] = [
            (l2_norm(grid, u - self.sec.zero), "zero"),
            (l2_norm(grid, u - self.sec.equilibrium), "equilibrium"),
        ]
        for tau in list(self._conn):
            scored.append((l2_norm(grid, u - self._conn[tau]), f"ignition,tau={tau:g}"))
        if not self._conn:
            return min(scored)[1], min(scored)[0]
        current = min(scored)[0]
        for _ in range(self.max_refine):
            taus = sorted(self._conn)
            candidates = [0.5 * (a + b) for a, b in zip(taus, taus[1:])]
            candidates.append(0.5 * (taus[-1] + self.sec.time))
            fresh = [tau for tau in candidates
                     if min(abs(tau - s) for s in taus) > self.dt]
            if not fresh:
                break
            for tau in fresh:
                scored.append((l2_norm(grid, u - self._connection(tau)),
                               f"ignition,tau={tau:g}"))
            refined = min(scored)[0]
            stable = abs(refined - current) <= self.rel_tol * max(current, 1e-30)
            current = refined
            if stable:
                break
        dist, label = min(scored)
        return label, dist

    def __call__(self, u: np.ndarray) -> float:
        return self.nearest(u)[1]


def section_distance(u: np.ndarray, sec: AttractorSection, sigma: Symbol,
                     grid: Grid, dt: float, rel_tol: float = 0.01,
                     max_refine: int = 6) -> float:
    """One-off distance from u to the sampled section (see SectionDistance)."""
    return SectionDistance(sec, sigma, grid, dt, rel_tol, max_refine)(u)


def pullback_attraction_table(
    fields,
    t: float,
    s_list,
    sigma: Symbol,
    grid: Grid,
    dt: float,
    sec: AttractorSection | None = None,
    policy: SelectionPolicy | None = None,
) -> list[tuple[float, list[float]]]:
    """Distances to the section after evolving each field from earlier starts.

    For each start s the rows hold the section distance of every evolved
    state at time t; pullback attraction shows as rows shrinking while s
    recedes.
    """
    s_list = list(s_list)
    if any(b >= a for a, b in zip(s_list, s_list[1:])) or any(s >= t for s in s_list):
        raise ValueError("start times must be strictly decreasing and below t")
    if policy is None:
        policy = SignWithValue(beta=0.0)
    if sec is None:
        sec = section(t, sigma, [t - 1.0, t - 2.0, t - 4.0], grid, dt)
    measure = SectionDistance(sec, sigma, grid, dt)
    rows = []
    for s in s_list:
        dists = []
        for u0 in fields:
            evolved = fdsolver.evolve(u0, s, t, dt, sigma, policy, grid)
            dists.append(measure(evolved))
        rows.append((float(s), dists))
    return rows


def energy(u: np.ndarray, b: float, omega: float, grid: Grid) -> float:
    """Energy 0.5*int u_x^2 - b*int |u| - (omega/2)*int u^2 on the grid.

    Decreases along autonomous trajectories of the implicit scheme for any
    exact selection policy: the quadratic part is convex (omega below the
    discrete principal eigenvalue) and handled implicitly, the |u| part is
    concave and handled through its explicit selection.
    """
    u = np.asarray(u, dtype=float)
    padded = np.concatenate(([0.0], u, [0.0]))
    grad2 = np.sum(np.diff(padded) ** 2) / grid.dx
    return float(0.5 * grad2 - b * grid.dx * np.sum(np.abs(u))
                 - 0.5 * omega * grid.dx * np.sum(u ** 2))


def fit_exponential_rate(times, values) -> float:
    """Least-squares decay rate r from values ~ C exp(-r t)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0.0):
        raise ValueError("rate fit needs strictly positive values")
    slope = np.polyfit(times, np.log(values), 1)[0]
    return float(-slope)


def measure_connection_decay(b: float, omega: float, grid: Grid, dt: float,
                             window: tuple[float, float] = (1.0, 3.0),
                             n_samples: int = 9, floor: float = 1e-12) -> float:
    """Fitted decay rate of an ignition trajectory toward the fixed point.

    The reference state is the fixed point of the scheme itself (for
    omega = 0 it coincides with the closed-form parabola to round-off), so
    the fit window is not polluted by the O(dx^2) offset between the grid
    fixed point and the continuum profile.  Samples whose gap has fallen to
    the round-off floor carry no rate information and are dropped.
    """
    sigma = constant(b, omega)
    target = discrete_equilibrium(b, omega, grid)
    t_lo, t_hi = window
    times = np.linspace(t_lo, t_hi, n_samples)
    marks = {round(t / dt): t for t in times}
    captured = fdsolver.evolve(np.zeros(grid.n), 0.0, t_hi, dt, sigma,
                               POSITIVE_BRANCH, grid, capture=set(marks))
    pairs = [(t, l2_norm(grid, captured[nstep] - target))
             for nstep, t in sorted(marks.items())]
    kept = [(t, gap) for t, gap in pairs if gap > floor]
    if len(kept) < 2:
        raise ValueError("decay fit window left fewer than two resolved samples")
    return fit_exponential_rate([t for t, _ in kept], [gap for _, gap in kept])
