"""Series evaluation engine for the two-parameter multiple zeta family.

The central object is the nested sum over 0 <= m_1 < ... < m_n of

    rising(alpha, m_1)/m_1!  *  m_n!/rising(alpha, m_n+1)
    *  prod_{i<n} (m_i + beta)^{-k_i}  *  (m_n + beta)^{-(k_n - 1)}

for an admissible index (k_1, ..., k_n).  At alpha = beta = 1 the rising
factorials cancel down to the classical multiple zeta series.

Everything is summed in a single streaming sweep over the outermost
variable: per-depth prefix accumulators turn the nested sum into n chained
cumulative sums, processed in numpy chunks with scalar carries between
chunks.  Every evaluation returns a SeriesValue carrying an empirically
calibrated truncation-tail bound; nothing raises on slow convergence, the
`converged` flag reports it instead.

Also here: the one- and multi-factor Hurwitz comparison sums, the
two-parameter depth-one sum, and Cauchy-integral numerical
differentiation used for parameter derivatives.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .indices import AdmissibleIndex, validate


class ParameterDomainError(ValueError):
    """A series parameter lies outside the convergence domain."""


class RadiusDomainError(ValueError):
    """A contour radius reaches outside the analyticity domain."""


class SlowConvergenceWarning(UserWarning):
    """The first parameter is close to the divergence boundary."""


class TailMode(enum.Enum):
    """How the truncation tail of a sweep is estimated."""

    REFINED = "refined"
    FIRST_OMITTED = "first-omitted"


@dataclass(frozen=True)
class EvalSettings:
    """Truncation controls shared by all series evaluators.

    target_tol = None resolves per call: 1e-8 when Re(alpha) >= 1,
    else 1e-6.  The tail mode picks between the calibrated integral
    bound and the bare first-omitted-term estimate (diagnostics only).
    """

    max_terms: int = 100_000
    target_tol: float | None = None
    tail_mode: TailMode = TailMode.REFINED

    def __post_init__(self) -> None:
        if self.max_terms < 16:
            raise ValueError("max_terms must be >= 16")
        if self.target_tol is not None and not self.target_tol > 0:
            raise ValueError("target_tol must be positive")


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series value with its error certificate."""

    value: complex | float
    tail_bound: float
    terms_used: int
    converged: bool


_CHUNK = 1 << 18
_TAIL_WINDOW = 16
_TAIL_SAFETY = 4.0

_CACHE: dict = {}
_CACHE_CAP = 200_000


def clear_cache() -> None:
    _CACHE.clear()


def check_alpha(alpha) -> complex:
    """First parameter: needs positive real part; warns near the boundary."""
    a = complex(alpha)
    if not a.real > 0:
        raise ParameterDomainError(f"first parameter needs Re > 0, got {alpha!r}")
    if a.real < 0.3:
        warnings.warn(
            f"Re(alpha) = {a.real:g} gives very slow convergence",
            SlowConvergenceWarning,
            stacklevel=3,
        )
    return a


def check_beta(beta) -> complex:
    """Second parameter: any value except the poles at 0, -1, -2, ..."""
    b = complex(beta)
    if b.imag == 0 and b.real <= 0 and b.real == int(b.real):
        raise ParameterDomainError(f"second parameter hits a pole at {beta!r}")
    return b


def resolve_tol(settings: EvalSettings, alpha: complex) -> float:
    if settings.target_tol is not None:
        return settings.target_tol
    return 1e-8 if alpha.real >= 1 else 1e-6


def _int_power(base: np.ndarray, exponent: int) -> np.ndarray:
    """base**exponent by repeated squaring; exact multiply chain, no log."""
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    result = None
    sq = base
    e = exponent
    while e:
        if e & 1:
            result = sq if result is None else result * sq
        e >>= 1
        if e:
            sq = sq * sq
    if result is None:
        return np.ones_like(base)
    return result


def _inv_int_power(base: np.ndarray, exponent: int) -> np.ndarray:
    if exponent == 0:
        return np.ones_like(base)
    return 1.0 / _int_power(base, exponent)


def _upper_gamma_int(n: int, z: float) -> float:
    """Upper incomplete gamma at integer order: (n-1)! e^{-z} sum z^j/j!."""
    acc = 0.0
    term = 1.0
    for j in range(n):
        if j > 0:
            term *= z / j
        acc += term
    return math.factorial(n - 1) * math.exp(-z) * acc


class _PochhammerStreams:
    """Chunked recurrences for rising(alpha,m)/m! and m!/rising(alpha,m+1).

    Both streams advance by one rational factor per term, so a chunk is a
    cumulative product seeded by the carry from the previous chunk.
    """

    def __init__(self, alpha, dtype) -> None:
        self.alpha = alpha
        self.dtype = dtype
        self.r_carry = dtype.type(1.0)
        self.w_last = None

    def chunk(self, ms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        al = self.alpha
        fac = (al + ms) / (1.0 + ms)
        cp = np.cumprod(fac)
        r = np.empty(ms.shape, dtype=self.dtype)
        r[0] = self.r_carry
        r[1:] = self.r_carry * cp[:-1]
        self.r_carry = self.r_carry * cp[-1]

        g = ms / (al + ms)
        if self.w_last is None:
            # first chunk starts at m = 0, where the stream is 1/alpha
            w = np.empty(ms.shape, dtype=self.dtype)
            w[0] = 1.0 / al
            if len(ms) > 1:
                w[1:] = (1.0 / al) * np.cumprod(g[1:])
        else:
            w = self.w_last * np.cumprod(g)
        self.w_last = w[-1]
        return r, w


def _tail_estimate(
    abs_terms: np.ndarray,
    ms: np.ndarray,
    terms_used: int,
    rho: float,
    log_pow: int,
    mode: TailMode,
) -> float:
    if mode is TailMode.FIRST_OMITTED:
        return float(abs_terms[-1])
    window = min(_TAIL_WINDOW, len(abs_terms))
    t = abs_terms[-window:]
    m = ms[-window:]
    scale = t * (m + 1.0) ** (1.0 + rho) / np.log(m + 2.0) ** log_pow
    c_emp = float(np.max(scale))
    if c_emp == 0.0:
        return 0.0
    z = rho * math.log(terms_used + 1.0)
    return _TAIL_SAFETY * c_emp * _upper_gamma_int(log_pow + 1, z) / rho ** (log_pow + 1)


def _sweep(
    head_exps: tuple[int, ...],
    last_exp: int,
    offset: complex,
    alpha: complex | None,
    settings: EvalSettings,
    tol: float,
    rho: float,
    log_pow: int,
) -> SeriesValue:
    """Shared chunked sweep.

    Level i < n contributes (m+offset)^{-head_exps[i]}, the final level
    (m+offset)^{-last_exp}; when alpha is given the level-1 terms carry the
    rising-factorial stream and the final level its reciprocal partner.
    """
    use_complex = offset.imag != 0 or (alpha is not None and alpha.imag != 0)
    dtype = np.dtype(np.complex128) if use_complex else np.dtype(np.float64)
    off = offset if use_complex else offset.real
    streams = None
    if alpha is not None:
        al = alpha if use_complex else alpha.real
        streams = _PochhammerStreams(al, dtype)

    n_head = len(head_exps)
    carries = [dtype.type(0.0)] * n_head
    total = dtype.type(0.0)
    m0 = 0
    tail = math.inf
    terms = None
    ms = None
    while m0 < settings.max_terms:
        size = min(_CHUNK, settings.max_terms - m0)
        ms = np.arange(m0, m0 + size, dtype=np.float64)
        base = ms + off
        if streams is not None:
            r, w = streams.chunk(ms)
            stream = r
            tail_fac = w * _inv_int_power(base, last_exp)
        else:
            stream = np.ones(size, dtype=dtype)
            tail_fac = _inv_int_power(base, last_exp)

        new_carries = []
        level_vals = stream
        for j, kexp in enumerate(head_exps):
            if j > 0:
                level_vals = np.concatenate(([carries[j - 1]], prev_a[:-1]))
            inc = level_vals * _inv_int_power(base, kexp)
            prev_a = carries[j] + np.cumsum(inc)
            new_carries.append(prev_a[-1])

        if n_head:
            final_vals = np.concatenate(([carries[-1]], prev_a[:-1]))
        else:
            final_vals = stream
        terms = final_vals * tail_fac
        total = total + terms.sum()
        carries = new_carries
        m0 += size

        tail = _tail_estimate(np.abs(terms), ms, m0, rho, log_pow, settings.tail_mode)
        if tail <= tol:
            break

    value = complex(total) if use_complex else float(total)
    return SeriesValue(value, tail, m0, tail <= tol)


def eval_Z(k, alpha, beta, settings: EvalSettings | None = None) -> SeriesValue:
    """Truncated value of the two-parameter series at an admissible index.

    Results are memoized on (index, alpha, beta, settings); the returned
    SeriesValue is immutable and safe to share.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    a = check_alpha(alpha)
    b = check_beta(beta)
    if settings is None:
        settings = EvalSettings()
    key = (k.parts, a, b, settings)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    tol = resolve_tol(settings, a)
    rho = min(a.real, 1.0) + k.parts[-1] - 2.0
    out = _sweep(
        k.parts[:-1],
        k.parts[-1] - 1,
        b,
        a,
        settings,
        tol,
        rho,
        k.depth - 1,
    )
    if len(_CACHE) >= _CACHE_CAP:
        _CACHE.clear()
    _CACHE[key] = out
    return out


def eval_Z_naive(k, alpha, beta, max_terms: int) -> complex | float:
    """Reference evaluator: per-term recomputed slice sums, no carries.

    For each value of the outermost variable the inner nested sums are
    rebuilt from scratch in plain Python, so nothing is shared with the
    chunked sweep.  Quadratic in max_terms; only for cross-checks.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    a = check_alpha(alpha)
    b = check_beta(beta)
    real = a.imag == 0 and b.imag == 0
    if real:
        a, b = a.real, b.real
    r = [1.0]
    for m in range(max_terms - 1):
        r.append(r[-1] * (a + m) / (m + 1))
    w = [1.0 / a]
    for m in range(1, max_terms):
        w.append(w[-1] * m / (a + m))

    n = k.depth
    total = 0.0
    for mn in range(max_terms):
        if n == 1:
            total += r[mn] * w[mn] * (mn + b) ** (1 - k.parts[0])
            continue
        # fresh inner sweep bounded by mn each time
        sums = [0.0] * (n - 1)
        for m in range(mn):
            prev = r[m]
            for j in range(n - 1):
                cur = prev * (m + b) ** (-k.parts[j])
                prev = sums[j]
                sums[j] += cur
        total += sums[n - 2] * w[mn] * (mn + b) ** (1 - k.parts[-1])
    return total if real else complex(total)


def eval_hurwitz(s: int, alpha, settings: EvalSettings | None = None) -> SeriesValue:
    """Hurwitz-type comparison sum over m >= 0 of (m + alpha)^{-s}.

    Integer s >= 2; the tail bound is first omitted term plus integral,
    a true majorant of the remainder.
    """
    if not isinstance(s, int) or s < 2:
        raise ParameterDomainError(f"exponent must be an integer >= 2, got {s!r}")
    a = check_alpha(alpha)
    if settings is None:
        settings = EvalSettings()
    tol = resolve_tol(settings, a)
    use_complex = a.imag != 0
    off = a if use_complex else a.real
    total = 0.0
    m0 = 0
    tail = math.inf
    while m0 < settings.max_terms:
        size = min(_CHUNK, settings.max_terms - m0)
        ms = np.arange(m0, m0 + size, dtype=np.float64)
        total = total + _inv_int_power(ms + off, s).sum()
        m0 += size
        tail = (m0 + a.real) ** (1 - s) / (s - 1) + (m0 + a.real) ** (-s)
        if tail <= tol:
            break
    value = complex(total) if use_complex else float(total)
    return SeriesValue(value, tail, m0, tail <= tol)


def eval_two_param_sum(
    m_exp: int, n_exp: int, alpha, beta, settings: EvalSettings | None = None
) -> SeriesValue:
    """Depth-one cross sum over l >= 0 of (l+alpha)^{-m_exp} (l+beta)^{-n_exp}."""
    for e in (m_exp, n_exp):
        if not isinstance(e, int) or e < 1:
            raise ParameterDomainError(f"exponents must be integers >= 1, got {e!r}")
    if m_exp + n_exp < 2:
        raise ParameterDomainError("total exponent must be >= 2 for convergence")
    a = check_alpha(alpha)
    b = check_beta(beta)
    if settings is None:
        settings = EvalSettings()
    tol = resolve_tol(settings, a)
    use_complex = a.imag != 0 or b.imag != 0
    oa = a if use_complex else a.real
    ob = b if use_complex else b.real
    c = min(a.real, b.real)
    s = m_exp + n_exp
    total = 0.0
    m0 = 0
    tail = math.inf
    while m0 < settings.max_terms:
        size = min(_CHUNK, settings.max_terms - m0)
        ms = np.arange(m0, m0 + size, dtype=np.float64)
        total = total + (_inv_int_power(ms + oa, m_exp) * _inv_int_power(ms + ob, n_exp)).sum()
        m0 += size
        if m0 + c > 1:
            tail = (m0 + c) ** (1 - s) / (s - 1) + (m0 + c) ** (-s)
        else:
            tail = math.inf
        if tail <= tol:
            break
    value = complex(total) if use_complex else float(total)
    return SeriesValue(value, tail, m0, tail <= tol)


def eval_multiple_hurwitz(s, alpha, settings: EvalSettings | None = None) -> SeriesValue:
    """Nested comparison sum: prod_i (m_i + alpha)^{-s_i} over 0 <= m_1 < ... < m_n.

    The exponent tuple must be admissible (entries >= 1, last >= 2).  At
    alpha = 1 this is term-identical to eval_Z(s, 1, 1).
    """
    s = s if isinstance(s, AdmissibleIndex) else validate(s)
    a = check_alpha(alpha)
    if settings is None:
        settings = EvalSettings()
    tol = resolve_tol(settings, a)
    rho = s.parts[-1] - 1.0
    return _sweep(s.parts[:-1], s.parts[-1], a, None, settings, tol, rho, s.depth - 1)


@dataclass(frozen=True)
class ContourSpec:
    """Circle used for Cauchy-integral differentiation.

    Trapezoidal quadrature on `points` equispaced samples recovers
    derivatives at the center with spectral accuracy as long as the order
    stays well below the sample count; orders above points/4 are refused.
    """

    center: complex
    radius: float
    points: int = 64

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise RadiusDomainError("contour radius must be positive")
        if self.points < 16:
            raise ValueError("need at least 16 contour points")

    def samples(self) -> np.ndarray:
        angles = 2.0 * np.pi * np.arange(self.points) / self.points
        return self.center + self.radius * np.exp(1j * angles)


def derivative_from_samples(values: Sequence[complex], spec: ContourSpec, order: int) -> complex:
    """order-th derivative at the center from samples on the circle."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if order > spec.points // 4:
        raise ValueError(f"order {order} too high for {spec.points} contour points")
    vals = np.asarray(values, dtype=np.complex128)
    if vals.shape != (spec.points,):
        raise ValueError("need one value per contour point")
    j = np.arange(spec.points)
    phases = np.exp(-2j * np.pi * j * order / spec.points)
    return complex(
        math.factorial(order) / (spec.points * spec.radius**order) * (vals * phases).sum()
    )


def derivative_tail_from_samples(tails: Sequence[float], spec: ContourSpec, order: int) -> float:
    """Propagated bound: contour weights applied to per-sample tail bounds.

    The quadrature weights all have modulus order!/(N rho^order), so the
    per-sample bounds aggregate linearly; a safety factor covers the
    smooth-tail model behind those bounds.
    """
    t = np.asarray(tails, dtype=np.float64)
    if t.shape != (spec.points,):
        raise ValueError("need one tail bound per contour point")
    return float(
        _TAIL_SAFETY * math.factorial(order) / (spec.points * spec.radius**order) * t.sum()
    )


def contour_derivative(f: Callable[[complex], complex], spec: ContourSpec, order: int) -> complex:
    """Convenience wrapper: sample f on the circle, extract one derivative."""
    vals = [f(z) for z in spec.samples()]
    return derivative_from_samples(vals, spec, order)
