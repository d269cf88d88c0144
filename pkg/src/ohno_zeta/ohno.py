"""Composition-shifted sums and parameter Taylor expansions.

The basic object is the shifted-sum family

    S_total(k; alpha) = sum over compositions c of `total` into depth(k)
                        nonnegative parts of Z(k + c; alpha, alpha),

the diagonal-parameter sums whose duality invariance is the headline
relation checked by the verification layer.  On top of it sit the two
Taylor-coefficient families of the off-diagonal value in either parameter
slot around the diagonal, a Taylor evaluator with a convergence-disk
guard, and Cauchy-contour parameter derivatives of S itself.

Both coefficient families have two routes: the literal enumeration over
inserted-ones patterns respectively entry increments (`method="family"`,
exponential in the order), and a compressed single sweep that streams all
orders at once in one pass over the summation variable
(`method="sweep"`).  They agree term-for-term at equal truncation; the
sweep is what makes order-16 expansions affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .indices import (
    AdmissibleIndex,
    compositions,
    insert_ones,
    insertion_patterns,
    validate,
)
from .series import (
    EvalSettings,
    RadiusDomainError,
    SeriesValue,
    _inv_int_power,
    _PochhammerStreams,
    _tail_estimate,
    ContourSpec,
    check_alpha,
    derivative_from_samples,
    derivative_tail_from_samples,
    eval_Z,
    resolve_tol,
)

_COEFF_CHUNK = 1 << 15


class OutsideDiskError(ValueError):
    """The expansion point lies outside the guaranteed convergence disk."""


@dataclass(frozen=True)
class OhnoSumSpec:
    """A shifted-sum request: index, shift total, diagonal parameter."""

    parts: tuple[int, ...]
    total: int
    alpha: complex

    def __post_init__(self) -> None:
        validate(self.parts)
        if self.total < 0:
            raise ValueError("shift total must be >= 0")


@dataclass(frozen=True)
class ConvergenceDisk:
    """Disk around the expansion center on which the expansion is trusted.

    The radius may not exceed half the center's real part, which keeps the
    disk well inside the domain of the series in either parameter slot.
    """

    center: complex
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise RadiusDomainError("disk radius must be positive")
        if self.radius > self.center.real / 2:
            raise RadiusDomainError("disk radius may not exceed half the center's real part")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius


def eval_S(k, total: int, alpha, settings: EvalSettings | None = None) -> SeriesValue:
    """Shifted sum over all ways to distribute `total` among the entries."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    if total < 0:
        raise ValueError("shift total must be >= 0")
    value = 0.0
    tail = 0.0
    terms = 0
    converged = True
    for c in compositions(total, k.depth):
        shifted = tuple(p + e for p, e in zip(k.parts, c))
        sv = eval_Z(shifted, alpha, alpha, settings)
        value = value + sv.value
        tail += sv.tail_bound
        terms = max(terms, sv.terms_used)
        converged = converged and sv.converged
    return SeriesValue(value, tail, terms, converged)


def _family_members_insertion(k: AdmissibleIndex, order: int):
    """(index, multiplicity, shift-total) triples behind one insertion coefficient."""
    for inserted_ones in range(order + 1):
        for pattern in insertion_patterns(inserted_ones, k.depth):
            yield insert_ones(k, pattern), 1, order - inserted_ones


def _family_members_increment(k: AdmissibleIndex, order: int):
    """(index, multiplicity, shift-total) triples behind one increment coefficient."""
    slots = tuple(p - 1 for p in k.parts[:-1]) + (k.parts[-1] - 2,)
    for raised in range(order + 1):
        for d in compositions(raised, k.depth):
            mult = 1
            ok = True
            for dj, sj in zip(d, slots):
                if sj == 0:
                    if dj:
                        ok = False
                        break
                    continue
                mult *= comb(dj + sj - 1, sj - 1)
            if not ok:
                continue
            shifted = tuple(p + dj for p, dj in zip(k.parts, d))
            yield validate(shifted), mult, order - raised


def _coefficient_family(k, order, alpha, settings, members) -> SeriesValue:
    value = 0.0
    tail = 0.0
    terms = 0
    converged = True
    for idx, mult, rest in members:
        sv = eval_S(idx, rest, alpha, settings)
        value = value + mult * sv.value
        tail += mult * sv.tail_bound
        terms = max(terms, sv.terms_used)
        converged = converged and sv.converged
    return SeriesValue(value, tail, terms, converged)


def _coefficient_sweep(
    k: AdmissibleIndex,
    max_order: int,
    alpha: complex,
    settings: EvalSettings,
    with_insertions: bool,
) -> list[SeriesValue]:
    """All coefficients 0..max_order in one chunked pass.

    State A[j][u] accumulates weighted chains that have placed the first j
    entries using total extra budget u; budget is spent on raising entry
    exponents and, on the insertion side, on interleaved extra depth-one
    entries.  The increment side folds its stars-and-bars multiplicities
    into per-entry binomial weights instead.
    """
    tol = resolve_tol(settings, alpha)
    use_complex = alpha.imag != 0
    dtype = np.dtype(np.complex128) if use_complex else np.dtype(np.float64)
    al = alpha if use_complex else alpha.real

    n = k.depth
    L = max_order
    last = k.parts[-1]
    if with_insertions:
        weight = lambda j, e: 1
    else:
        slots = tuple(p - 1 for p in k.parts[:-1]) + (last - 2,)
        weight = lambda j, e: comb(e + slots[j], slots[j])

    max_exp = max(k.parts) + L + 1
    streams = _PochhammerStreams(al, dtype)
    carries = [[dtype.type(0.0)] * (L + 1) for _ in range(n - 1)]
    totals = [dtype.type(0.0)] * (L + 1)
    window_abs: list[np.ndarray] = [None] * (L + 1)
    tails = [math.inf] * (L + 1)
    rho = min(alpha.real, 1.0) + last - 2.0

    m0 = 0
    ms = None
    while m0 < settings.max_terms:
        size = min(_COEFF_CHUNK, settings.max_terms - m0)
        ms = np.arange(m0, m0 + size, dtype=np.float64)
        base = ms + al
        inv = np.empty((max_exp + 1, size), dtype=dtype)
        inv[0] = 1.0
        inv[1] = 1.0 / base
        for e in range(2, max_exp + 1):
            inv[e] = inv[e - 1] * inv[1]
        r, w = streams.chunk(ms)

        shifted = [[None] * (L + 1) for _ in range(n - 1)]
        for j in range(n - 1):
            kj = k.parts[j]
            for u in range(L + 1):
                if j == 0:
                    inc = (weight(0, u) * r) * inv[kj + u]
                else:
                    inc = weight(j, 0) * shifted[j - 1][u] * inv[kj]
                    for e in range(1, u + 1):
                        inc = inc + (weight(j, e) * shifted[j - 1][u - e]) * inv[kj + e]
                if with_insertions:
                    for d in range(u):
                        inc = inc + shifted[j][u - 1 - d] * inv[1 + d]
                a_chunk = carries[j][u] + np.cumsum(inc)
                shifted[j][u] = np.concatenate(([carries[j][u]], a_chunk[:-1]))
                carries[j][u] = a_chunk[-1]

        jlast = n - 1
        for order in range(L + 1):
            if n == 1:
                t = (weight(0, order) * r) * w * inv[last - 1 + order]
            else:
                t = weight(jlast, 0) * shifted[jlast - 1][order] * inv[last - 1]
                for e in range(1, order + 1):
                    t = t + (weight(jlast, e) * shifted[jlast - 1][order - e]) * inv[last - 1 + e]
                t = t * w
            totals[order] = totals[order] + t.sum()
            window_abs[order] = np.abs(t)
        m0 += size

        stop = True
        for order in range(L + 1):
            log_pow = (n - 1 + order) if with_insertions else (n - 1)
            tails[order] = _tail_estimate(
                window_abs[order], ms, m0, rho, log_pow, settings.tail_mode
            )
            stop = stop and tails[order] <= tol
        if stop:
            break

    out = []
    for order in range(L + 1):
        v = complex(totals[order]) if use_complex else float(totals[order])
        out.append(SeriesValue(v, tails[order], m0, tails[order] <= tol))
    return out


def insertion_coefficients(k, max_order: int, alpha, settings: EvalSettings | None = None):
    """Sweep route: insertion-family coefficients for orders 0..max_order."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    a = check_alpha(alpha)
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    if settings is None:
        settings = EvalSettings()
    return _coefficient_sweep(k, max_order, a, settings, with_insertions=True)


def increment_coefficients(k, max_order: int, alpha, settings: EvalSettings | None = None):
    """Sweep route: increment-family coefficients for orders 0..max_order."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    a = check_alpha(alpha)
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    if settings is None:
        settings = EvalSettings()
    return _coefficient_sweep(k, max_order, a, settings, with_insertions=False)


def insertion_coefficient(
    k, order: int, alpha, settings: EvalSettings | None = None, method: str = "family"
) -> SeriesValue:
    """Taylor coefficient of the first-slot expansion around the diagonal.

    Order-l coefficient of Z(k; point, center) in powers of (center-point):
    shifted sums over all ways of inserting extra depth-one entries into
    the gaps of k.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    if order < 0:
        raise ValueError("order must be >= 0")
    if method == "family":
        a = check_alpha(alpha)
        return _coefficient_family(
            k, order, a, settings, _family_members_insertion(k, order)
        )
    if method == "sweep":
        return insertion_coefficients(k, order, alpha, settings)[order]
    raise ValueError(f"unknown method {method!r}")


def increment_coefficient(
    k, order: int, alpha, settings: EvalSettings | None = None, method: str = "family"
) -> SeriesValue:
    """Taylor coefficient of the second-slot expansion around the diagonal.

    Order-l coefficient of Z(k; center, point) in powers of (center-point):
    shifted sums over entrywise increments of k, with stars-and-bars
    multiplicities over each entry's exponent slots.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    if order < 0:
        raise ValueError("order must be >= 0")
    if method == "family":
        a = check_alpha(alpha)
        return _coefficient_family(
            k, order, a, settings, _family_members_increment(k, order)
        )
    if method == "sweep":
        return increment_coefficients(k, order, alpha, settings)[order]
    raise ValueError(f"unknown method {method!r}")


def taylor_eval(
    k,
    point,
    center,
    max_order: int,
    side: str = "first",
    settings: EvalSettings | None = None,
    disk: ConvergenceDisk | None = None,
) -> SeriesValue:
    """Off-diagonal value via the diagonal Taylor expansion.

    side="first" places `point` in the first parameter slot, reproducing
    Z(k; point, center); side="second" reproduces Z(k; center, point).
    Both expand in powers of (center - point) with coefficients taken at
    `center`.  The tail combines per-coefficient truncation bounds with a
    geometric bound on the orders beyond max_order, calibrated from the
    computed coefficients by a Cauchy-type estimate on the disk.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    c = check_alpha(center)
    p = complex(point)
    if disk is None:
        disk = ConvergenceDisk(c, c.real / 2)
    if not disk.contains(p):
        raise OutsideDiskError(f"point {point!r} outside disk of radius {disk.radius:g}")
    if side == "first":
        coeffs = insertion_coefficients(k, max_order, c, settings)
    elif side == "second":
        coeffs = increment_coefficients(k, max_order, c, settings)
    else:
        raise ValueError(f"unknown side {side!r}")

    x = complex(c - p)
    value = 0.0 + 0.0j
    tail = 0.0
    xpow = 1.0 + 0.0j
    cauchy = 0.0
    for order, sv in enumerate(coeffs):
        value = value + sv.value * xpow
        tail += sv.tail_bound * abs(xpow)
        cauchy = max(cauchy, abs(sv.value) * disk.radius**order)
        xpow = xpow * x
    q = abs(x) / disk.radius
    if q >= 1.0:
        remainder = math.inf
    else:
        remainder = 4.0 * cauchy * q ** (max_order + 1) / (1.0 - q)
    tail += remainder

    real_out = c.imag == 0 and p.imag == 0
    out_val = value.real if real_out else value
    terms = max(sv.terms_used for sv in coeffs)
    settings_ = settings or EvalSettings()
    tol = resolve_tol(settings_, c)
    return SeriesValue(out_val, tail, terms, tail <= tol)


def derivative_of_S(
    k,
    total: int,
    order: int,
    alpha0,
    settings: EvalSettings | None = None,
    radius: float | None = None,
    points: int = 64,
) -> SeriesValue:
    """order-th parameter derivative of the shifted sum at alpha0.

    Cauchy-integral differentiation on a circle kept strictly inside the
    parameter domain (radius < Re alpha0).
    """
    a0 = check_alpha(alpha0)
    if radius is None:
        radius = a0.real / 4
    if radius >= a0.real:
        raise RadiusDomainError("contour radius must stay below Re(alpha0)")
    spec = ContourSpec(a0, radius, points)
    vals = []
    tails = []
    terms = 0
    converged = True
    for z in spec.samples():
        sv = eval_S(k, total, z, settings)
        vals.append(sv.value)
        tails.append(sv.tail_bound)
        terms = max(terms, sv.terms_used)
        converged = converged and sv.converged
    d = derivative_from_samples(vals, spec, order)
    bound = derivative_tail_from_samples(tails, spec, order)
    if a0.imag == 0:
        # real diagonal parameter keeps S real, so the derivative is real
        d = d.real
    return SeriesValue(d, bound, terms, converged)


def explicit_derivative_expansion(
    k, total: int, order: int, alpha, settings: EvalSettings | None = None
) -> SeriesValue:
    """Closed-form counterpart of (-1)^order/order! times the S derivative.

    A finite combination of shifted sums at raised and ones-extended
    indices: budget `order` splits into extra depth-one entries after each
    original entry, an outer shift total, and entry raises weighted by
    stars-and-bars counts over each entry's exponent slots.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    a = check_alpha(alpha)
    if total < 0 or order < 0:
        raise ValueError("totals must be >= 0")
    n = k.depth
    value = 0.0
    tail = 0.0
    terms = 0
    converged = True
    for lshift in compositions(total, n):
        slots = tuple(k.parts[j] + lshift[j] for j in range(n - 1)) + (
            k.parts[-1] + lshift[-1] - 1,
        )
        for ones_total in range(order + 1):
            for ones in compositions(ones_total, n):
                for raises in compositions(order - ones_total, n):
                    mult = 1
                    for bj, sj in zip(raises, slots):
                        mult *= comb(bj + sj - 1, sj - 1)
                    if mult == 0:
                        continue
                    parts: list[int] = []
                    for j in range(n - 1):
                        parts.append(k.parts[j] + lshift[j] + raises[j])
                        parts.extend([1] * ones[j])
                    parts.append(k.parts[-1] + lshift[-1] + raises[-1])
                    sv = eval_S(tuple(parts), ones[-1], a, settings)
                    value = value + mult * sv.value
                    tail += mult * sv.tail_bound
                    terms = max(terms, sv.terms_used)
                    converged = converged and sv.converged
    return SeriesValue(value, tail, terms, converged)


def pochhammer_ratio_taylor(m1: int, mn: int, order: int, beta) -> complex | float:
    """Window form of the scaled order-th derivative of the rising-factorial ratio.

    Equals (-1)^order/order! times the beta-derivative of
    rising(beta, m1)/rising(beta, mn+1): the ratio itself times the
    complete homogeneous sum of 1/(j+beta) over the window m1 <= j <= mn.
    """
    if not 0 <= m1 <= mn:
        raise ValueError("need 0 <= m1 <= mn")
    ratio = 1.0
    for j in range(m1, mn + 1):
        ratio = ratio / (j + beta)
    h = [1.0] + [0.0] * order
    for j in range(m1, mn + 1):
        x = 1.0 / (j + beta)
        for d in range(1, order + 1):
            h[d] += x * h[d - 1]
    return ratio * h[order]


def power_product_taylor(ms, exps, order: int, beta) -> complex | float:
    """Stars-and-bars form of the scaled order-th derivative of a power product.

    Equals (-1)^order/order! times the beta-derivative of
    prod_j (ms[j]+beta)^{-exps[j]}: raises distributed over the factors
    with binomial weights.
    """
    ms = tuple(ms)
    exps = tuple(exps)
    if len(ms) != len(exps):
        raise ValueError("ms and exps must have equal length")
    if any(e < 1 for e in exps):
        raise ValueError("exponents must be >= 1")
    total = 0.0
    for d in compositions(order, len(ms)):
        term = 1.0
        for mj, cj, dj in zip(ms, exps, d):
            term = term * comb(cj + dj - 1, dj) / (mj + beta) ** (cj + dj)
        total = total + term
    return total
