"""Selection policies realizing one branch of the set-valued sign forcing.

The forcing term is set-valued at u = 0 ({1} for u > 0, {-1} for u < 0,
[-1, 1] at u = 0), so a trajectory is only determined once a selection rule
fixes the value on the zero set.  Policies are immutable value objects whose
``select`` is pure; the zero set is detected with an absolute threshold eta
far below any physical scale, which keeps the selection semantically exact
while avoiding comparisons against exact floating zeros.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_ETA = 1e-12


@dataclass(frozen=True)
class SignWithValue:
    """+1 above the zero band, -1 below it, a fixed beta in [-1, 1] on it."""

    beta: float = 0.0
    eta: float = DEFAULT_ETA
    exact: bool = True

    def __post_init__(self) -> None:
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta}")

    def select(self, u: np.ndarray, t: float) -> np.ndarray:
        h = np.full_like(u, self.beta)
        h[u > self.eta] = 1.0
        h[u < -self.eta] = -1.0
        return h

    def translate(self, s: float) -> "SignWithValue":
        return self


@dataclass(frozen=True)
class DelayedIgnition:
    """Zero on the zero band until time t0, +1 from t0 on.

    With zero initial data this produces the trajectory that stays at rest
    until t0 and then follows the positive forced branch; t0 = +inf selects
    the trajectory that never leaves zero.
    """

    t0: float
    eta: float = DEFAULT_ETA
    exact: bool = True

    def select(self, u: np.ndarray, t: float) -> np.ndarray:
        h = np.where(u > self.eta, 1.0, 0.0)
        if t >= self.t0:
            h[np.abs(u) <= self.eta] = 1.0
        h[u < -self.eta] = -1.0
        return h

    def translate(self, s: float) -> "DelayedIgnition":
        if math.isinf(self.t0):
            return self
        return replace(self, t0=self.t0 - s)


@dataclass(frozen=True)
class Regularized:
    """Single-valued ramp clamp(u/eps, -1, 1); NOT an exact selection."""

    eps: float
    eta: float = DEFAULT_ETA
    exact: bool = False

    def __post_init__(self) -> None:
        if self.eps <= 0.0:
            raise ValueError(f"eps must be positive, got {self.eps}")

    def select(self, u: np.ndarray, t: float) -> np.ndarray:
        return np.clip(u / self.eps, -1.0, 1.0)

    def translate(self, s: float) -> "Regularized":
        return self


SelectionPolicy = SignWithValue | DelayedIgnition | Regularized

# the positive linear branch: forcing identically +1 on non-negative states
POSITIVE_BRANCH = SignWithValue(beta=1.0)


def sign_band_distance(h: np.ndarray, u: np.ndarray, eta: float = DEFAULT_ETA) -> float:
    """Max pointwise distance from h to the admissible set at u.

    The admissible set is {1} where u > eta, {-1} where u < -eta and the
    whole interval [-1, 1] on the zero band; an exact selection has
    distance 0.
    """
    d = np.zeros_like(h)
    pos = u > eta
    neg = u < -eta
    band = ~(pos | neg)
    d[pos] = np.abs(h[pos] - 1.0)
    d[neg] = np.abs(h[neg] + 1.0)
    d[band] = np.maximum(np.abs(h[band]) - 1.0, 0.0)
    return float(d.max()) if d.size else 0.0


_POLICY_RE = re.compile(r"^\s*(sign|ignite|reg)\s*\(([^)]*)\)\s*$")


def parse_policy(text: str) -> SelectionPolicy:
    """Parse the config syntax: sign(beta=0.0) | ignite(t0=1.5) | reg(eps=1e-2)."""
    m = _POLICY_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse policy {text!r}")
    name, argstr = m.groups()
    kwargs = {}
    for part in filter(None, (p.strip() for p in argstr.split(","))):
        key, _, val = part.partition("=")
        kwargs[key.strip()] = float(val) if val.strip() != "inf" else math.inf
    if name == "sign":
        return SignWithValue(beta=kwargs.pop("beta", 0.0), **kwargs)
    if name == "ignite":
        return DelayedIgnition(t0=kwargs.pop("t0"), **kwargs)
    return Regularized(eps=kwargs.pop("eps"), **kwargs)


@dataclass(frozen=True)
class RegularizationTable:
    """Sup-in-time differences between ramp trajectories and the exact one."""

    rows: tuple[tuple[float, float], ...]  # (eps, sup L2 difference)

    def is_monotone(self, slack: float = 0.1) -> bool:
        """Differences should not increase as eps decreases, up to the slack."""
        diffs = [d for _eps, d in self.rows]
        return all(b <= a * (1.0 + slack) + 1e-15 for a, b in zip(diffs, diffs[1:]))


def regularization_convergence(
    u_tau: np.ndarray,
    tau: float,
    t_end: float,
    dt: float,
    sigma,
    grid,
    eps_seq,
) -> RegularizationTable:
    """Compare ramp-regularized trajectories against the exact selection.

    Requires non-negative, not identically zero initial data (the regime in
    which the exact non-negative trajectory is unique) and a strictly
    decreasing eps sequence.
    """
    from . import fdsolver  # runtime import keeps the module dependency one-way

    u_tau = np.asarray(u_tau, dtype=float)
    if np.any(u_tau < 0.0) or not np.any(u_tau > 0.0):
        raise ValueError("need non-negative, not identically zero initial data")
    eps_seq = list(eps_seq)
    if any(b >= a for a, b in zip(eps_seq, eps_seq[1:])):
        raise ValueError("eps sequence must be strictly decreasing")
    exact = fdsolver.solve(u_tau, tau, t_end, dt, sigma, SignWithValue(beta=0.0), grid)
    rows = []
    for eps in eps_seq:
        reg = fdsolver.solve(u_tau, tau, t_end, dt, sigma, Regularized(eps=eps), grid)
        gap = max(
            fdsolver.l2_norm(grid, reg.states[n] - exact.states[n])
            for n in range(exact.states.shape[0])
        )
        rows.append((float(eps), float(gap)))
    return RegularizationTable(rows=tuple(rows))
