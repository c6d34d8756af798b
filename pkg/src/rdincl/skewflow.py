"""Hull-level constructions: evolution identities, assembled attractors, Morse check.

The driving data live on the hull of the coefficient pair; evolving the state
while translating the symbol defines a cocycle, and pairing the two gives an
autonomous flow on state x symbol.  This module turns the defining identities
into executable checks (they hold bitwise when the time lattice is exactly
representable), assembles the union of per-symbol sections into the uniform
object, and classifies sampled trajectories against the two-level Morse
structure {positive bounded state} < {rest state}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import attractor, fdsolver
from .attractor import AttractorSection, section
from .coefficients import HullSample, Symbol
from .fdsolver import Grid, l2_norm
from .selections import SelectionPolicy


@dataclass(frozen=True)
class CocycleState:
    """A point of the product phase space: field plus driving symbol."""

    u: np.ndarray
    sigma: Symbol


def _require_aligned(value: float, dt: float, name: str) -> int:
    steps = round(value / dt)
    if not math.isclose(steps * dt, value, rel_tol=0.0, abs_tol=1e-9 * max(1.0, abs(value))):
        raise ValueError(f"{name}={value} is not an integer multiple of dt={dt}")
    return steps


def cocycle_check(t: float, s: float, sigma: Symbol, u0: np.ndarray,
                  policy: SelectionPolicy, grid: Grid, dt: float) -> float:
    """Deviation between one-shot evolution over t+s and the composed run.

    The composed run advances by s under sigma, then by t under the translate
    of sigma by s with the policy shifted accordingly.  On an exactly
    representable time lattice both runs perform the identical float
    operation sequence, so the deviation is exactly zero.
    """
    if t < 0.0 or s < 0.0:
        raise ValueError("durations must be non-negative")
    _require_aligned(s, dt, "s")
    _require_aligned(t, dt, "t")
    one_shot = u0 if t + s == 0.0 else fdsolver.evolve(u0, 0.0, t + s, dt, sigma, policy, grid)
    mid = u0 if s == 0.0 else fdsolver.evolve(u0, 0.0, s, dt, sigma, policy, grid)
    composed = mid if t == 0.0 else fdsolver.evolve(
        mid, 0.0, t, dt, sigma.translate(s), policy.translate(s), grid
    )
    return l2_norm(grid, np.asarray(one_shot) - np.asarray(composed))


def translation_identity_check(sigma: Symbol, h: float, tau: float, t: float,
                               u0: np.ndarray, policy: SelectionPolicy,
                               grid: Grid, dt: float) -> float:
    """Deviation between evolution over [tau+h, t+h] and the translated run.

    Realizes the change-of-variables identity: running the original symbol on
    the shifted window equals running the symbol translated by h on the
    original window.
    """
    if t <= tau:
        raise ValueError(f"need tau < t, got tau={tau}, t={t}")
    shifted = fdsolver.evolve(u0, tau + h, t + h, dt, sigma, policy, grid)
    translated = fdsolver.evolve(u0, tau, t, dt, sigma.translate(h),
                                 policy.translate(h), grid)
    return l2_norm(grid, shifted - translated)


@dataclass(frozen=True)
class UniformAssembly:
    """Union of per-symbol sections with its enclosing envelope."""

    sections: tuple[tuple[float, AttractorSection], ...]  # (hull shift, section)
    envelope_lower: np.ndarray
    envelope_upper: np.ndarray
    ball_radius: float


def uniform_attractor_assemble(hull: HullSample, tau_samples, grid: Grid,
                               dt: float, t_pull: float = 4.0) -> UniformAssembly:
    """Union over hull samples of the time-zero sections.

    Per sampled symbol the section at time zero is the cocycle-attractor
    fiber; the union approximates the uniform object.  Reports the pointwise
    envelope [0, max over samples of the positive bounded state] and the
    radius of the smallest centered L2 ball containing every element.
    """
    if len(hull) == 0:
        raise ValueError("hull sample is empty")
    secs = []
    upper = np.zeros(grid.n)
    radius = 0.0
    for shift, sym in zip(hull.shifts, hull.symbols):
        sec = section(0.0, sym, tau_samples, grid, dt, t_pull=t_pull)
        secs.append((float(shift), sec))
        upper = np.maximum(upper, sec.equilibrium)
        for _label, values in sec.elements():
            radius = max(radius, l2_norm(grid, values))
    return UniformAssembly(sections=tuple(secs), envelope_lower=np.zeros(grid.n),
                           envelope_upper=upper, ball_radius=radius)


@dataclass(frozen=True)
class MorseDecomposition:
    """The two-level structure over a hull sample: rest state below, positive above."""

    equilibria: tuple[tuple[float, np.ndarray], ...]  # (hull shift, state at time 0)
    separation_margin: float  # min over samples of the L2 norm of the positive state


def morse_decomposition(hull: HullSample, grid: Grid, dt: float,
                        t_pull: float = 4.0) -> MorseDecomposition:
    eq = []
    margin = math.inf
    for shift, sym in zip(hull.shifts, hull.symbols):
        xi = attractor.pullback_equilibrium(0.0, sym, t_pull, grid, dt)
        eq.append((float(shift), xi))
        margin = min(margin, l2_norm(grid, xi))
    return MorseDecomposition(equilibria=tuple(eq), separation_margin=margin)


@dataclass(frozen=True)
class TrajectoryClassification:
    hull_shift: float
    ignition: float
    backward_distance: float   # to the rest state, at the early end of the window
    forward_distance: float    # to the positive bounded state, at the late end
    forward_tolerance: float
    verdict: str               # "connection", "rest", "equilibrium"


@dataclass(frozen=True)
class GradientStructureReport:
    classifications: tuple[TrajectoryClassification, ...]
    counterexamples: tuple[TrajectoryClassification, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def gradient_structure_check(hull: HullSample, tau_samples, grid: Grid, dt: float,
                             t_back: float = 2.0, t_fwd: float = 8.0,
                             t_pull: float = 4.0, slack: float = 0.1,
                             floor: float = 1e-9) -> GradientStructureReport:
    """Classify sampled bounded trajectories against the two Morse levels.

    Every sampled nontrivial trajectory must run from the rest state
    (backward) to the positive bounded state (forward): backward distance
    exactly zero on the window (the trajectories are constructively zero
    before ignition) and forward distance within the rate-certified
    tolerance exp(-delta*(t_fwd - tau)) * ||xi(tau)|| * (1 + slack), floored
    by round-off.  Any violation is returned as a counterexample.
    """
    rows: list[TrajectoryClassification] = []
    bad: list[TrajectoryClassification] = []
    for shift, sym in zip(hull.shifts, hull.symbols):
        delta = math.pi ** 2 - sym.omega1
        taus = sorted(float(tau) for tau in tau_samples)
        xi_times = sorted({*taus, t_fwd, 0.0})
        xi_path = attractor.pullback_equilibrium_path(xi_times, sym, t_pull, grid, dt)
        for tau in taus:
            gamma_fwd = attractor.connection(tau, t_fwd, sym, grid, dt)
            gamma_back = attractor.connection(tau, min(-t_back, tau), sym, grid, dt)
            backward = l2_norm(grid, gamma_back)  # zero by construction
            forward = l2_norm(grid, gamma_fwd - xi_path[t_fwd])
            tol = max(
                math.exp(-delta * (t_fwd - tau)) * l2_norm(grid, xi_path[tau]) * (1.0 + slack),
                floor,
            )
            verdict = "connection" if (backward == 0.0 and forward <= tol) else "violation"
            row = TrajectoryClassification(
                hull_shift=float(shift), ignition=tau, backward_distance=backward,
                forward_distance=forward, forward_tolerance=tol, verdict=verdict,
            )
            rows.append(row)
            if verdict == "violation":
                bad.append(row)
        # the two equilibrium trajectories classify onto their own levels
        rows.append(TrajectoryClassification(
            hull_shift=float(shift), ignition=math.inf,
            backward_distance=0.0, forward_distance=0.0,
            forward_tolerance=0.0, verdict="rest"))
        xi_invariance = l2_norm(
            grid,
            attractor.evolve_positive_branch(xi_path[0.0], 0.0, t_fwd, dt, sym, grid)
            - xi_path[t_fwd],
        )
        rows.append(TrajectoryClassification(
            hull_shift=float(shift), ignition=-math.inf,
            backward_distance=0.0, forward_distance=xi_invariance,
            forward_tolerance=max(math.exp(-delta * t_pull) * 1.0 * (1.0 + slack), floor),
            verdict="equilibrium"))
    return GradientStructureReport(classifications=tuple(rows),
                                   counterexamples=tuple(bad))
