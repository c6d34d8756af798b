"""Sine-series solver for the linear heat problem with reaction and forcing.

Works in the orthonormal Dirichlet eigenbasis e_k(x) = sqrt(2) sin(k pi x),
where the second-derivative operator is diagonal with eigenvalues
lambda_k = (k pi)^2.  Per mode the dynamics reduce to the scalar ODE

    da_k/dt = -(lambda_k - omega(t)) a_k + b(t) c_k,

(c_k the sine coefficients of the spatial source), integrated exactly over
substeps with frozen coefficients.  For constant coefficients the integration
is exact to round-off, which is what makes this module usable as an
independent reference for the finite-difference scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coefficients import Symbol, CONSTANT


@dataclass(frozen=True)
class SpectralCoeffs:
    """Coefficients a_k, k = 1..K, against the orthonormal sine basis."""

    coeffs: np.ndarray

    @property
    def modes(self) -> int:
        return self.coeffs.size

    @property
    def eigenvalues(self) -> np.ndarray:
        k = np.arange(1, self.modes + 1, dtype=float)
        return (k * math.pi) ** 2

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs ** 2)))


@lru_cache(maxsize=16)
def _sine_basis(n: int) -> np.ndarray:
    # symmetric N x N matrix E[i, k] = sqrt(2) sin((k+1) pi x_i); E @ E = I/dx
    dx = 1.0 / (n + 1)
    x = dx * np.arange(1, n + 1)
    k = np.arange(1, n + 1)
    return math.sqrt(2.0) * np.sin(np.pi * np.outer(x, k))


def eigenvalues(modes: int) -> np.ndarray:
    k = np.arange(1, modes + 1, dtype=float)
    return (k * math.pi) ** 2


def unit_source_coeffs(modes: int) -> np.ndarray:
    """Sine coefficients of the constant function 1: integral of sqrt(2) sin(k pi x)."""
    k = np.arange(1, modes + 1)
    c = np.zeros(modes)
    odd = (k % 2) == 1
    c[odd] = 2.0 * math.sqrt(2.0) / (np.pi * k[odd])
    return c


def sine_transform(u: np.ndarray, grid, modes: int | None = None) -> SpectralCoeffs:
    """Forward transform on the interior grid; exact inverse pair for modes == grid.n."""
    if modes is None:
        modes = grid.n
    if modes > grid.n:
        raise ValueError(f"mode count {modes} exceeds interior node count {grid.n}")
    basis = _sine_basis(grid.n)
    return SpectralCoeffs(coeffs=grid.dx * (basis[:, :modes].T @ np.asarray(u, dtype=float)))


def inverse_transform(c: SpectralCoeffs, grid) -> np.ndarray:
    if c.modes > grid.n:
        raise ValueError(f"mode count {c.modes} exceeds interior node count {grid.n}")
    return _sine_basis(grid.n)[:, :c.modes] @ c.coeffs


def advance_modes(a: np.ndarray, lam: np.ndarray, dt: float, b: float, omega: float,
                  source: np.ndarray | None) -> np.ndarray:
    """One exact exponential step with coefficients frozen over the substep."""
    rate = lam - omega
    decay = np.exp(-rate * dt)
    out = a * decay
    if source is not None:
        out = out + (b / rate) * (1.0 - decay) * source
    return out


def mild_solve_linear(
    u_tau: np.ndarray,
    tau: float,
    t: float,
    sigma: Symbol,
    grid,
    source: str = "none",
    dt: float = 1e-3,
    modes: int | None = None,
) -> np.ndarray:
    """Variation-of-constants solution of the linear problem on the grid.

    source "none" solves the homogeneous heat/reaction equation; source
    "positive_branch" adds the spatially constant forcing b(t).  Coefficients
    are frozen at the substep midpoint, giving O(dt^2) quadrature error per
    substep and exact results for constant symbols (which take one substep).
    """
    if t < tau:
        raise ValueError(f"need tau <= t, got tau={tau}, t={t}")
    if source not in ("none", "positive_branch"):
        raise ValueError(f"unknown source mode {source!r}")
    a = sine_transform(u_tau, grid, modes).coeffs.copy()
    lam = eigenvalues(a.size)
    src = unit_source_coeffs(a.size) if source == "positive_branch" else None
    if t == tau:
        return inverse_transform(SpectralCoeffs(a), grid)
    if sigma.kind == CONSTANT:
        n_steps = 1
    else:
        n_steps = max(1, math.ceil((t - tau) / dt))
    h = (t - tau) / n_steps
    for n in range(n_steps):
        b, om = sigma.eval(tau + (n + 0.5) * h)
        a = advance_modes(a, lam, h, b, om, src)
    return inverse_transform(SpectralCoeffs(a), grid)


def reintegrate_sources(
    u0: np.ndarray,
    tau: float,
    dt: float,
    sigma: Symbol,
    source_fields: np.ndarray,
    grid,
    capture: set[int],
) -> dict[int, np.ndarray]:
    """Re-run recorded per-step selection fields through the mode dynamics.

    source_fields[n] is the selection h^n applied over [tau + n dt,
    tau + (n+1) dt]; coefficients are frozen at the right endpoint to match
    the implicit time discretization being audited.  Returns grid fields at
    the requested step indices (state index n = after n steps).
    """
    basis = _sine_basis(grid.n)
    a = grid.dx * (basis.T @ np.asarray(u0, dtype=float))
    lam = eigenvalues(grid.n)
    out: dict[int, np.ndarray] = {}
    if 0 in capture:
        out[0] = basis @ a
    for n in range(source_fields.shape[0]):
        b, om = sigma.eval(tau + (n + 1) * dt)
        f = grid.dx * (basis.T @ source_fields[n])
        a = advance_modes(a, lam, dt, b, om, f)
        if n + 1 in capture:
            out[n + 1] = basis @ a
    return out


def smoothness_indicator(c: SpectralCoeffs) -> float | None:
    """Least-squares slope of log|a_k| against log k over the resolved modes.

    Faster coefficient decay (a more negative slope) indicates a smoother
    represented field.  Returns None when the coefficients are all zero, in
    which case no decay exponent is defined.
    """
    if c.modes < 8:
        raise ValueError(f"need at least 8 modes to estimate decay, got {c.modes}")
    mags = np.abs(c.coeffs)
    top = mags.max()
    if top == 0.0:
        return None
    resolved = mags > top * 1e-13
    if resolved.sum() < 2:
        return None
    k = np.arange(1, c.modes + 1, dtype=float)[resolved]
    y = np.log(mags[resolved])
    x = np.log(k)
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)
