"""Relation checkers producing machine-readable verification reports.

Each checker evaluates the two sides of one identity with honest
truncation tails and emits a VerificationReport.  A report passes when
the observed gap is within the larger of the requested tolerance and the
combined tail budget; by default the tolerance is ten times the budget
(floored at 1e-6), so a pass means the two sides agree to within an order
of magnitude of everything the evaluators could not account for.

Relations covered: the two-parameter duality, the shifted-sum (Ohno-type)
duality, the one- and two-parameter sum formulas, the duality of Taylor
coefficient families, the derivative exchange between the families, the
defect recursion it induces, parameter-derivative and mixed-partial
dualities, the Taylor-shift duality, and the Hurwitz-style sum formula
with its derivative kernel.  `sweep` walks index grids and appends
closure flags for shifted-sum results whose lower shifts are missing or
failing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from io import StringIO
from typing import Sequence

import csv

import numpy as np

from .indices import (
    AdmissibleIndex,
    admissible_indices,
    dual,
    format_index,
    validate,
)
from .ohno import (
    derivative_of_S,
    eval_S,
    increment_coefficient,
    increment_coefficients,
    insertion_coefficient,
    insertion_coefficients,
)
from .series import (
    ContourSpec,
    EvalSettings,
    RadiusDomainError,
    SeriesValue,
    _inv_int_power,
    _tail_estimate,
    check_alpha,
    derivative_from_samples,
    derivative_tail_from_samples,
    eval_Z,
    eval_hurwitz,
    eval_multiple_hurwitz,
    eval_two_param_sum,
    resolve_tol,
)


class WeightTooLargeError(ValueError):
    """An index enumeration was requested beyond the supported weight."""


class DepthTooLargeError(ValueError):
    """No admissible index exists at the requested depth and weight."""


_ENUM_MAX_WEIGHT = 16
_SWEEP_MAX_WEIGHT = 12

CSV_COLUMNS = [
    "relation_id",
    "inputs",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "combined_tail",
    "tol",
    "pass",
]


def _norm_input(v):
    if isinstance(v, AdmissibleIndex):
        return format_index(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    if isinstance(v, (int, float, str, bool)):
        return v
    raise TypeError(f"cannot serialize report input {v!r}")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one identity instance."""

    relation_id: str
    inputs: dict
    lhs: complex
    rhs: complex
    abs_err: float
    combined_tail: float
    tol: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "inputs": self.inputs,
            "lhs": {"re": self.lhs.real, "im": self.lhs.imag},
            "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
            "abs_err": self.abs_err,
            "combined_tail": self.combined_tail,
            "tol": self.tol,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        d = json.loads(text)
        return cls(
            relation_id=d["relation_id"],
            inputs=d["inputs"],
            lhs=complex(d["lhs"]["re"], d["lhs"]["im"]),
            rhs=complex(d["rhs"]["re"], d["rhs"]["im"]),
            abs_err=d["abs_err"],
            combined_tail=d["combined_tail"],
            tol=d["tol"],
            passed=d["pass"],
        )


def make_report(
    relation_id: str,
    inputs: dict,
    lhs: SeriesValue,
    rhs: SeriesValue,
    tol: float | None = None,
) -> VerificationReport:
    combined = lhs.tail_bound + rhs.tail_bound
    err = abs(complex(lhs.value) - complex(rhs.value))
    if tol is None:
        tol = max(1e-6, 10.0 * combined)
    passed = err <= max(tol, combined)
    return VerificationReport(
        relation_id=relation_id,
        inputs={key: _norm_input(v) for key, v in inputs.items()},
        lhs=complex(lhs.value),
        rhs=complex(rhs.value),
        abs_err=err,
        combined_tail=combined,
        tol=tol,
        passed=passed,
    )


def render_csv(reports: Sequence[VerificationReport]) -> str:
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(
            [
                r.relation_id,
                json.dumps(r.inputs, sort_keys=True, separators=(",", ":")),
                repr(r.lhs.real),
                repr(r.lhs.imag),
                repr(r.rhs.real),
                repr(r.rhs.imag),
                repr(r.abs_err),
                repr(r.combined_tail),
                repr(r.tol),
                str(r.passed).lower(),
            ]
        )
    return buf.getvalue()


def verify_duality(
    k, alpha, beta, settings: EvalSettings | None = None, tol: float | None = None
) -> VerificationReport:
    """Z(k; alpha, beta) against Z(dual k; beta, alpha)."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    lhs = eval_Z(k, alpha, beta, settings)
    rhs = eval_Z(kd, beta, alpha, settings)
    inputs = {"index": k, "dual": kd, "alpha": complex(alpha), "beta": complex(beta)}
    return make_report("duality", inputs, lhs, rhs, tol)


def verify_ohno(
    k, total: int, alpha, settings: EvalSettings | None = None, tol: float | None = None
) -> VerificationReport:
    """Shifted-sum duality: S_total(k) against S_total(dual k)."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    lhs = eval_S(k, total, alpha, settings)
    rhs = eval_S(kd, total, alpha, settings)
    inputs = {"index": k, "dual": kd, "total": total, "alpha": complex(alpha)}
    return make_report("ohno", inputs, lhs, rhs, tol)


def _check_enumeration_bounds(depth: int, weight: int) -> None:
    if weight > _ENUM_MAX_WEIGHT:
        raise WeightTooLargeError(f"weight {weight} beyond enumeration cap {_ENUM_MAX_WEIGHT}")
    if depth < 1 or depth >= weight:
        raise DepthTooLargeError(f"no admissible index has depth {depth} at weight {weight}")


def verify_sum_formula(
    depth: int,
    weight: int,
    alpha,
    settings: EvalSettings | None = None,
    tol: float | None = None,
) -> VerificationReport:
    """Diagonal sum over all indices of fixed depth and weight.

    The aggregate collapses to the depth-one comparison sum of the full
    weight, independent of depth.
    """
    _check_enumeration_bounds(depth, weight)
    value = 0.0
    tail = 0.0
    terms = 0
    conv = True
    for k in admissible_indices(weight, depth):
        sv = eval_Z(k, alpha, alpha, settings)
        value = value + sv.value
        tail += sv.tail_bound
        terms = max(terms, sv.terms_used)
        conv = conv and sv.converged
    lhs = SeriesValue(value, tail, terms, conv)
    rhs = eval_hurwitz(weight, alpha, settings)
    inputs = {"depth": depth, "weight": weight, "alpha": complex(alpha)}
    return make_report("sum-alpha", inputs, lhs, rhs, tol)


def verify_two_param_sum_formula(
    depth: int,
    weight: int,
    alpha,
    beta,
    settings: EvalSettings | None = None,
    tol: float | None = None,
) -> VerificationReport:
    """Off-diagonal sum over indices of fixed depth and weight.

    Aggregating over the full index slice leaves a single cross sum with
    exponent `depth` on the first parameter and `weight - depth` on the
    second.
    """
    _check_enumeration_bounds(depth, weight)
    value = 0.0
    tail = 0.0
    terms = 0
    conv = True
    for k in admissible_indices(weight, depth):
        sv = eval_Z(k, alpha, beta, settings)
        value = value + sv.value
        tail += sv.tail_bound
        terms = max(terms, sv.terms_used)
        conv = conv and sv.converged
    lhs = SeriesValue(value, tail, terms, conv)
    rhs = eval_two_param_sum(depth, weight - depth, alpha, beta, settings)
    inputs = {
        "depth": depth,
        "weight": weight,
        "alpha": complex(alpha),
        "beta": complex(beta),
    }
    return make_report("sum-two-param", inputs, lhs, rhs, tol)


def verify_coefficient_duality(
    k,
    order: int,
    alpha,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    method: str = "family",
) -> VerificationReport:
    """Insertion coefficients of k against increment coefficients of dual k."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    lhs = insertion_coefficient(k, order, alpha, settings, method=method)
    rhs = increment_coefficient(kd, order, alpha, settings, method=method)
    inputs = {"index": k, "dual": kd, "order": order, "alpha": complex(alpha)}
    return make_report("coefficient-duality", inputs, lhs, rhs, tol)


def _contour_for(alpha0: complex, radius: float | None, points: int) -> ContourSpec:
    if radius is None:
        radius = alpha0.real / 4
    if radius >= alpha0.real:
        raise RadiusDomainError("contour radius must stay below Re(center)")
    return ContourSpec(alpha0, radius, points)


def verify_expansion_exchange(
    k,
    order: int,
    alpha0,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    points: int = 32,
    radius: float | None = None,
) -> list[VerificationReport]:
    """Each coefficient family rebuilt from derivatives of the other.

    The order-m coefficient of one family equals (-1)^m times the sum over
    l <= m of the (m-l)-th derivative of the other family's order-l
    coefficient, scaled by 1/(m-l)!.  Checked in both directions.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    a0 = check_alpha(alpha0)
    spec = _contour_for(a0, radius, points)
    zs = spec.samples()

    ins_vals = [[] for _ in range(order + 1)]
    ins_tails = [[] for _ in range(order + 1)]
    inc_vals = [[] for _ in range(order + 1)]
    inc_tails = [[] for _ in range(order + 1)]
    for z in zs:
        for coeffs, vals, tails in (
            (insertion_coefficients(k, order, z, settings), ins_vals, ins_tails),
            (increment_coefficients(k, order, z, settings), inc_vals, inc_tails),
        ):
            for l, sv in enumerate(coeffs):
                vals[l].append(sv.value)
                tails[l].append(sv.tail_bound)

    sign = (-1.0) ** order
    reports = []
    for direction, direct_fn, vals, tails in (
        ("increment-from-insertion", increment_coefficient, ins_vals, ins_tails),
        ("insertion-from-increment", insertion_coefficient, inc_vals, inc_tails),
    ):
        lhs = direct_fn(k, order, a0, settings, method="sweep")
        rhs_val = 0.0 + 0.0j
        rhs_tail = 0.0
        for l in range(order + 1):
            p = order - l
            rhs_val += derivative_from_samples(vals[l], spec, p) / math.factorial(p)
            rhs_tail += derivative_tail_from_samples(tails[l], spec, p) / math.factorial(p)
        rhs = SeriesValue(sign * rhs_val, rhs_tail, lhs.terms_used, lhs.converged)
        inputs = {
            "index": k,
            "order": order,
            "alpha": a0,
            "direction": direction,
        }
        reports.append(make_report("expansion-exchange", inputs, lhs, rhs, tol))
    return reports


def verify_defect_recursion(
    k,
    order: int,
    alpha0,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    points: int = 32,
    radius: float | None = None,
) -> VerificationReport:
    """The shifted-sum duality defect satisfies the same exchange recursion.

    The order-m defect of the dual index equals (-1)^m times the sum over
    l <= m of scaled derivatives of the defects of the original index,
    with the subtraction order flipped.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    a0 = check_alpha(alpha0)
    spec = _contour_for(a0, radius, points)

    sv_dual = eval_S(kd, order, a0, settings)
    sv_orig = eval_S(k, order, a0, settings)
    lhs = SeriesValue(
        sv_dual.value - sv_orig.value,
        sv_dual.tail_bound + sv_orig.tail_bound,
        max(sv_dual.terms_used, sv_orig.terms_used),
        sv_dual.converged and sv_orig.converged,
    )

    defect_vals = [[] for _ in range(order + 1)]
    defect_tails = [[] for _ in range(order + 1)]
    for z in spec.samples():
        for l in range(order + 1):
            a = eval_S(k, l, z, settings)
            b = eval_S(kd, l, z, settings)
            defect_vals[l].append(a.value - b.value)
            defect_tails[l].append(a.tail_bound + b.tail_bound)

    rhs_val = 0.0 + 0.0j
    rhs_tail = 0.0
    for l in range(order + 1):
        p = order - l
        rhs_val += derivative_from_samples(defect_vals[l], spec, p) / math.factorial(p)
        rhs_tail += derivative_tail_from_samples(defect_tails[l], spec, p) / math.factorial(p)
    sign = (-1.0) ** order
    rhs = SeriesValue(sign * rhs_val, rhs_tail, lhs.terms_used, lhs.converged)
    inputs = {"index": k, "dual": kd, "order": order, "alpha": a0}
    return make_report("defect-recursion", inputs, lhs, rhs, tol)


def verify_derivative_duality(
    k,
    total: int,
    order: int,
    alpha0,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    points: int = 32,
    radius: float | None = None,
) -> VerificationReport:
    """Parameter derivatives of the shifted sums agree across duality."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    a0 = check_alpha(alpha0)
    lhs = derivative_of_S(k, total, order, a0, settings, radius=radius, points=points)
    rhs = derivative_of_S(kd, total, order, a0, settings, radius=radius, points=points)
    inputs = {"index": k, "dual": kd, "total": total, "order": order, "alpha": a0}
    return make_report("derivative-duality", inputs, lhs, rhs, tol)


def _mixed_partial(
    f, m: int, n: int, spec_outer: ContourSpec, spec_inner: ContourSpec
) -> SeriesValue:
    """Nested Cauchy quadrature: inner circle in the second slot, outer in the first."""
    inner_zs = spec_inner.samples()
    outer_vals = []
    outer_tails = []
    for za in spec_outer.samples():
        vals = []
        tails = []
        for zb in inner_zs:
            sv = f(za, zb)
            vals.append(sv.value)
            tails.append(sv.tail_bound)
        outer_vals.append(derivative_from_samples(vals, spec_inner, n))
        outer_tails.append(derivative_tail_from_samples(tails, spec_inner, n))
    val = derivative_from_samples(outer_vals, spec_outer, m)
    tail = derivative_tail_from_samples(outer_tails, spec_outer, m)
    return SeriesValue(val, tail, 0, True)


def verify_mixed_partial_duality(
    k,
    m: int,
    n: int,
    alpha0,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    points: int = 16,
    radius: float | None = None,
) -> VerificationReport:
    """Mixed (m,n) partials at the diagonal agree with the swapped-slot dual."""
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    a0 = check_alpha(alpha0)
    spec_outer = _contour_for(a0, radius, points)
    spec_inner = _contour_for(a0, radius, points)

    lhs = _mixed_partial(
        lambda a, b: eval_Z(k, a, b, settings), m, n, spec_outer, spec_inner
    )
    rhs = _mixed_partial(
        lambda a, b: eval_Z(kd, b, a, settings), m, n, spec_outer, spec_inner
    )
    inputs = {"index": k, "dual": kd, "m": m, "n": n, "alpha": a0}
    return make_report("mixed-partial-duality", inputs, lhs, rhs, tol)


def verify_taylor_shift_duality(
    k,
    order: int,
    alpha0,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    points: int = 32,
    radius: float | None = None,
) -> VerificationReport:
    """Scaled derivative aggregates of shifted sums agree across duality.

    The sum over p+q = order of the p-th derivative of S_q scaled by 1/p!
    is the same for an index and its dual.
    """
    k = k if isinstance(k, AdmissibleIndex) else validate(k)
    kd = dual(k)
    a0 = check_alpha(alpha0)
    spec = _contour_for(a0, radius, points)
    zs = spec.samples()

    sides = []
    for idx in (k, kd):
        val = 0.0 + 0.0j
        tail = 0.0
        for q in range(order + 1):
            p = order - q
            vals = []
            tails = []
            for z in zs:
                sv = eval_S(idx, q, z, settings)
                vals.append(sv.value)
                tails.append(sv.tail_bound)
            val += derivative_from_samples(vals, spec, p) / math.factorial(p)
            tail += derivative_tail_from_samples(tails, spec, p) / math.factorial(p)
        sides.append(SeriesValue(val, tail, 0, True))
    inputs = {"index": k, "dual": kd, "order": order, "alpha": a0}
    return make_report("taylor-shift-duality", inputs, sides[0], sides[1], tol)


def _derivative_kernel_sum(
    n_exp: int, alpha: complex, x: complex, settings: EvalSettings
) -> SeriesValue:
    """Sum over l >= 1 of l^{-n_exp} times the ratio kernel at offset x.

    The kernel starts at 1/(alpha - x) and advances by (l - x)/(alpha - x + l)
    per step, so each chunk is a seeded cumulative product.
    """
    tol = resolve_tol(settings, alpha)
    rho = n_exp + alpha.real - x.real - 1.0
    total = 0.0 + 0.0j
    carry = None
    l0 = 1
    tail = math.inf
    chunk = 1 << 15
    while l0 <= settings.max_terms:
        size = min(chunk, settings.max_terms - l0 + 1)
        ls = np.arange(l0, l0 + size, dtype=np.float64)
        fac = (ls - x) / (alpha - x + ls)
        if carry is None:
            g = np.empty(size, dtype=np.complex128)
            g[0] = 1.0 / (alpha - x)
            if size > 1:
                g[1:] = g[0] * np.cumprod(fac[:-1])
        else:
            g = carry * np.cumprod(np.concatenate(([1.0 + 0.0j], fac[:-1])))
        carry = g[-1] * fac[-1]
        t = g * _inv_int_power(ls, n_exp)
        total = total + t.sum()
        l0 += size
        tail = _tail_estimate(np.abs(t), ls, l0, rho, 0, settings.tail_mode)
        if tail <= tol:
            break
    return SeriesValue(complex(total), tail, l0 - 1, tail <= tol)


def verify_hurwitz_sum_formula(
    weight: int,
    depth: int,
    alpha,
    settings: EvalSettings | None = None,
    tol: float | None = None,
    points: int = 32,
) -> VerificationReport:
    """Fixed-depth aggregate of nested comparison sums via the ratio kernel.

    The sum of the multi-factor comparison sums over all admissible
    exponent tuples of the given depth and weight equals the scaled
    (weight-depth-1)-th offset derivative of the kernel cross sum.
    """
    _check_enumeration_bounds(depth, weight)
    a = check_alpha(alpha)
    if settings is None:
        settings = EvalSettings()
    value = 0.0
    tail = 0.0
    terms = 0
    conv = True
    for k in admissible_indices(weight, depth):
        sv = eval_multiple_hurwitz(k, a, settings)
        value = value + sv.value
        tail += sv.tail_bound
        terms = max(terms, sv.terms_used)
        conv = conv and sv.converged
    lhs = SeriesValue(value, tail, terms, conv)

    p = weight - depth - 1
    spec = ContourSpec(0.0 + 0.0j, min(1.0, a.real) / 2, points)
    vals = []
    tails = []
    for x in spec.samples():
        sv = _derivative_kernel_sum(depth, a, x, settings)
        vals.append(sv.value)
        tails.append(sv.tail_bound)
    rhs_val = derivative_from_samples(vals, spec, p) / math.factorial(p)
    rhs_tail = derivative_tail_from_samples(tails, spec, p) / math.factorial(p)
    rhs = SeriesValue(rhs_val, rhs_tail, settings.max_terms, conv)
    inputs = {"weight": weight, "depth": depth, "alpha": a}
    return make_report("hurwitz-sum", inputs, lhs, rhs, tol)


def ohno_closure_flags(reports: Sequence[VerificationReport]) -> list[VerificationReport]:
    """Flag odd-shift results whose lower shifts are missing or failing.

    For every passing or failing shifted-sum report at odd total, all
    totals below it for the same index and parameter must be present and
    passing; each violation yields a failing flag report.
    """
    seen: dict[tuple, bool] = {}
    for r in reports:
        if r.relation_id != "ohno":
            continue
        key = (r.inputs["index"], json.dumps(r.inputs["alpha"], sort_keys=True))
        seen[key + (r.inputs["total"],)] = r.passed

    flags = []
    for r in reports:
        if r.relation_id != "ohno" or r.inputs["total"] % 2 == 0:
            continue
        key = (r.inputs["index"], json.dumps(r.inputs["alpha"], sort_keys=True))
        for lower in range(r.inputs["total"]):
            status = seen.get(key + (lower,))
            if status is True:
                continue
            reason = "missing" if status is None else "failing"
            flags.append(
                VerificationReport(
                    relation_id="ohno-closure",
                    inputs={
                        "index": r.inputs["index"],
                        "alpha": r.inputs["alpha"],
                        "total": r.inputs["total"],
                        "lower_total": lower,
                        "reason": reason,
                    },
                    lhs=0.0 + 0.0j,
                    rhs=0.0 + 0.0j,
                    abs_err=0.0,
                    combined_tail=0.0,
                    tol=0.0,
                    passed=False,
                )
            )
    return flags


def sweep(
    relations: Sequence[str],
    max_weight: int,
    max_total: int = 0,
    alphas: Sequence = (1.0,),
    betas: Sequence | None = None,
    settings: EvalSettings | None = None,
    tol: float | None = None,
) -> list[VerificationReport]:
    """Grid-run the enumerable relations up to a weight cap.

    Shift grids are downward-closed by construction; the closure flags are
    appended regardless so externally assembled report lists get the same
    treatment.
    """
    if max_weight > _SWEEP_MAX_WEIGHT:
        raise WeightTooLargeError(f"sweep weight cap is {_SWEEP_MAX_WEIGHT}")
    known = {"duality", "ohno", "sum-alpha", "sum-two-param", "integral"}
    unknown = set(relations) - known
    if unknown:
        raise ValueError(f"unknown relations: {sorted(unknown)}")
    if betas is None:
        betas = list(alphas)

    reports: list[VerificationReport] = []
    for rel in relations:
        if rel == "duality":
            for w in range(2, max_weight + 1):
                for k in admissible_indices(w):
                    for a in alphas:
                        for b in betas:
                            reports.append(verify_duality(k, a, b, settings, tol))
        elif rel == "ohno":
            for w in range(2, max_weight + 1):
                for k in admissible_indices(w):
                    for total in range(max_total + 1):
                        for a in alphas:
                            reports.append(verify_ohno(k, total, a, settings, tol))
        elif rel == "sum-alpha":
            for w in range(2, max_weight + 1):
                for d in range(1, w):
                    for a in alphas:
                        reports.append(verify_sum_formula(d, w, a, settings, tol))
        elif rel == "sum-two-param":
            for w in range(2, max_weight + 1):
                for d in range(1, w):
                    for a in alphas:
                        for b in betas:
                            reports.append(
                                verify_two_param_sum_formula(d, w, a, b, settings, tol)
                            )
        elif rel == "integral":
            from .integral import verify_series_vs_integral

            for w in range(2, min(max_weight, 3) + 1):
                for k in admissible_indices(w):
                    for a in alphas:
                        for b in betas:
                            reports.append(
                                verify_series_vs_integral(k, a, b, settings=settings, tol=tol)
                            )
    reports.extend(ohno_closure_flags(reports))
    return reports
