"""Time-dependent coefficient pairs (b, omega), their translates, and hull sampling.

A Symbol bundles the two scalar coefficient functions driving the evolution
together with certified bounds 0 < b0 <= b(t) <= b1 and
0 <= omega0 <= omega(t) <= omega1 < pi^2.  Symbols are immutable; translation
in time is lazy (an accumulated shift), which makes the identity

    translated.eval(t) == base.eval(t + shift)

hold bitwise by construction, and makes shift composition associative at the
float level (shifts are accumulated with a single addition each).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

PI_SQUARED = math.pi ** 2

CONSTANT = "constant"
QUASIPERIODIC = "quasiperiodic"
TABLE = "table"

_KINDS = (CONSTANT, QUASIPERIODIC, TABLE)


class ExtrapolationError(ValueError):
    """Raised when a sampled-table symbol is evaluated outside its time range."""


def _term_span(terms: tuple[tuple[float, float, float], ...]) -> float:
    return sum(abs(amp) for amp, _freq, _phase in terms)


def _cosine_sum(mean: float, terms: tuple[tuple[float, float, float], ...], t: float) -> float:
    value = mean
    for amp, freq, phase in terms:
        value += amp * math.cos(freq * t + phase)
    return value


@dataclass(frozen=True)
class Symbol:
    """A concrete coefficient pair with certified pointwise bounds.

    Use the ``constant``, ``quasiperiodic`` and ``from_table`` constructors;
    the raw dataclass fields encode all three kinds.
    """

    kind: str
    b0: float
    b1: float
    omega0: float
    omega1: float
    # constant / quasiperiodic representation
    b_mean: float = 0.0
    omega_mean: float = 0.0
    b_terms: tuple[tuple[float, float, float], ...] = ()
    omega_terms: tuple[tuple[float, float, float], ...] = ()
    # sampled-table representation (uniform time grid, linear interpolation)
    table_start: float = 0.0
    table_step: float = 0.0
    b_samples: tuple[float, ...] = ()
    omega_samples: tuple[float, ...] = ()
    # accumulated lazy time shift
    shift: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if not (0.0 < self.b0 <= self.b1):
            raise ValueError(f"need 0 < b0 <= b1, got b0={self.b0}, b1={self.b1}")
        if not (0.0 <= self.omega0 <= self.omega1):
            raise ValueError(
                f"need 0 <= omega0 <= omega1, got omega0={self.omega0}, omega1={self.omega1}"
            )
        # strict comparison, no tolerance: the theory needs omega1 < pi^2
        if not self.omega1 < PI_SQUARED:
            raise ValueError(f"omega1={self.omega1} must be strictly below pi^2={PI_SQUARED}")
        if self.kind == TABLE:
            if len(self.b_samples) < 2 or len(self.b_samples) != len(self.omega_samples):
                raise ValueError("table symbols need >= 2 aligned samples for b and omega")
            if self.table_step <= 0.0:
                raise ValueError("table step must be positive")

    # -- evaluation ---------------------------------------------------------

    def eval(self, t: float) -> tuple[float, float]:
        """Evaluate (b(t), omega(t)); the result is clamped to the declared bounds."""
        if not math.isfinite(t):
            raise ValueError(f"time must be finite, got {t}")
        s = t + self.shift
        if self.kind == CONSTANT:
            return self.b_mean, self.omega_mean
        if self.kind == QUASIPERIODIC:
            b = _cosine_sum(self.b_mean, self.b_terms, s)
            om = _cosine_sum(self.omega_mean, self.omega_terms, s)
        else:
            b = self._interp(self.b_samples, s)
            om = self._interp(self.omega_samples, s)
        b = min(max(b, self.b0), self.b1)
        om = min(max(om, self.omega0), self.omega1)
        return b, om

    def _interp(self, samples: tuple[float, ...], s: float) -> float:
        u = (s - self.table_start) / self.table_step
        n = len(samples)
        if u < 0.0 or u > n - 1:
            raise ExtrapolationError(
                f"time {s} outside table range "
                f"[{self.table_start}, {self.table_start + (n - 1) * self.table_step}]"
            )
        j = min(int(u), n - 2)
        w = u - j
        return samples[j] * (1.0 - w) + samples[j + 1] * w

    # -- translation --------------------------------------------------------

    def translate(self, s: float) -> "Symbol":
        """Time translate: the result evaluates at t exactly as self at t + s."""
        return replace(self, shift=self.shift + s)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return self.b0, self.b1, self.omega0, self.omega1


def constant(b: float, omega: float = 0.0) -> Symbol:
    """Symbol with fixed coefficients."""
    return Symbol(kind=CONSTANT, b0=b, b1=b, omega0=omega, omega1=omega,
                  b_mean=b, omega_mean=omega)


def quasiperiodic(
    b_mean: float,
    b_terms=(),
    omega_mean: float = 0.0,
    omega_terms=(),
) -> Symbol:
    """Symbol built from cosine terms ``mean + sum(amp * cos(freq*t + phase))``.

    Bounds are certified by construction as mean +/- sum(|amp|); the
    constructor rejects parameter choices whose certified range violates
    positivity of b or omega1 < pi^2.
    """
    b_terms = tuple((float(a), float(f), float(p)) for a, f, p in b_terms)
    omega_terms = tuple((float(a), float(f), float(p)) for a, f, p in omega_terms)
    return Symbol(
        kind=QUASIPERIODIC,
        b0=b_mean - _term_span(b_terms),
        b1=b_mean + _term_span(b_terms),
        omega0=omega_mean - _term_span(omega_terms),
        omega1=omega_mean + _term_span(omega_terms),
        b_mean=b_mean,
        omega_mean=omega_mean,
        b_terms=b_terms,
        omega_terms=omega_terms,
    )


def from_table(
    start: float,
    step: float,
    b_samples,
    omega_samples,
) -> Symbol:
    """Symbol interpolated linearly through uniform samples.

    Declared bounds are the sample extrema; interpolated values are clamped
    to them, so the bound invariant holds pointwise.
    """
    b_samples = tuple(float(v) for v in b_samples)
    omega_samples = tuple(float(v) for v in omega_samples)
    return Symbol(
        kind=TABLE,
        b0=min(b_samples),
        b1=max(b_samples),
        omega0=min(omega_samples),
        omega1=max(omega_samples),
        table_start=start,
        table_step=step,
        b_samples=b_samples,
        omega_samples=omega_samples,
    )


@dataclass(frozen=True)
class HullSample:
    """A finite stand-in for the closure of all time translates of a symbol."""

    base: Symbol
    shifts: tuple[float, ...]
    symbols: tuple[Symbol, ...]

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


def _default_window(sigma: Symbol) -> tuple[float, float]:
    if sigma.kind == QUASIPERIODIC:
        freqs = [abs(f) for _a, f, _p in (*sigma.b_terms, *sigma.omega_terms) if f != 0.0]
        if freqs:
            return 0.0, 2.0 * math.pi / min(freqs)
    return 0.0, 0.0


def hull_sample(sigma: Symbol, n: int, strategy: str = "shifts",
                window: tuple[float, float] | None = None) -> HullSample:
    """Sample n elements of the hull of sigma.

    strategy "shifts" realizes translates theta_s(sigma) at n uniform shifts
    over the window (default: one fundamental period for quasiperiodic
    symbols, the degenerate window {0} otherwise).  strategy "phases"
    (quasiperiodic only) advances every oscillator phase by 2*pi*j/n, which
    samples hull elements beyond finite translates when the frequencies are
    incommensurable.
    """
    if n < 1:
        raise ValueError("need at least one hull sample")
    if strategy == "shifts":
        lo, hi = window if window is not None else _default_window(sigma)
        shifts = tuple(lo + j * (hi - lo) / n for j in range(n))
        symbols = tuple(sigma.translate(s) for s in shifts)
    elif strategy == "phases":
        if sigma.kind != QUASIPERIODIC:
            raise ValueError("phase sampling only applies to quasiperiodic symbols")
        fractions = tuple(2.0 * math.pi * j / n for j in range(n))
        symbols = tuple(
            replace(
                sigma,
                b_terms=tuple((a, f, p + phi) for a, f, p in sigma.b_terms),
                omega_terms=tuple((a, f, p + phi) for a, f, p in sigma.omega_terms),
            )
            for phi in fractions
        )
        shifts = fractions
    else:
        raise ValueError(f"unknown hull sampling strategy {strategy!r}")
    return HullSample(base=sigma, shifts=shifts, symbols=symbols)
