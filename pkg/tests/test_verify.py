"""Report mechanics, individual checkers, sweep grids, closure flags."""

import json
import math

import pytest

from ohno_zeta.series import EvalSettings, SeriesValue
from ohno_zeta.verify import (
    CSV_COLUMNS,
    DepthTooLargeError,
    VerificationReport,
    WeightTooLargeError,
    make_report,
    ohno_closure_flags,
    render_csv,
    sweep,
    verify_coefficient_duality,
    verify_defect_recursion,
    verify_derivative_duality,
    verify_duality,
    verify_expansion_exchange,
    verify_hurwitz_sum_formula,
    verify_mixed_partial_duality,
    verify_ohno,
    verify_sum_formula,
    verify_taylor_shift_duality,
    verify_two_param_sum_formula,
)

S5 = EvalSettings(max_terms=100_000)
S4 = EvalSettings(max_terms=20_000)

ZETA3 = 1.2020569031595943


def _sv(value, tail=0.0):
    return SeriesValue(value, tail, 1, True)


class TestReportMechanics:
    def test_pass_rule_uses_larger_of_tol_and_tail(self):
        r = make_report("duality", {}, _sv(1.0, 1e-3), _sv(1.0001, 1e-3), tol=1e-6)
        assert r.passed  # covered by tails
        r = make_report("duality", {}, _sv(1.0, 1e-9), _sv(1.0001, 1e-9), tol=1e-6)
        assert not r.passed

    def test_default_tol_floors_at_ten_tails(self):
        r = make_report("duality", {}, _sv(1.0, 1e-3), _sv(1.005, 1e-3))
        assert r.tol == pytest.approx(2e-2)
        assert r.passed
        r = make_report("duality", {}, _sv(1.0, 1e-12), _sv(1.0 + 5e-7, 1e-12))
        assert r.tol == 1e-6
        assert r.passed

    def test_json_roundtrip_byte_identical(self):
        r = verify_duality((2, 3), 1.0, 1.5, S4)
        text = r.to_json()
        again = VerificationReport.from_json(text)
        assert again.to_json() == text
        assert again == r

    def test_json_fields(self):
        r = verify_ohno((1, 2), 1, 1.0, S4)
        d = json.loads(r.to_json())
        assert set(d) == {
            "relation_id",
            "inputs",
            "lhs",
            "rhs",
            "abs_err",
            "combined_tail",
            "tol",
            "pass",
        }
        assert d["relation_id"] == "ohno"
        assert set(d["lhs"]) == {"re", "im"}

    def test_json_canonical_ordering(self):
        r = verify_duality((2,), 1.0, 1.0, S4)
        text = r.to_json()
        assert text.index('"abs_err"') < text.index('"combined_tail"') < text.index('"inputs"')
        assert " " not in text.split('"index"')[0]

    def test_csv_columns_and_rows(self):
        rs = [verify_duality((2,), 1.0, 1.0, S4), verify_ohno((2,), 0, 1.0, S4)]
        text = render_csv(rs)
        lines = text.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3
        assert lines[1].startswith("duality,")
        assert lines[2].startswith("ohno,")

    def test_complex_inputs_serialized(self):
        r = verify_duality((2,), 0.8 + 0.4j, 1.0, S4)
        d = json.loads(r.to_json())
        assert d["inputs"]["alpha"] == {"re": 0.8, "im": 0.4}


class TestDuality:
    def test_holds_on_small_grid(self):
        for k in [(2,), (3,), (1, 2), (2, 2), (1, 1, 2), (1, 2, 2)]:
            for a, b in [(1.0, 1.0), (1.0, 1.5), (1.5, 0.8)]:
                r = verify_duality(k, a, b, S5)
                assert r.passed, (k, a, b, r.abs_err, r.combined_tail)

    def test_complex_parameters(self):
        r = verify_duality((1, 3), 0.8 + 0.4j, 1.2 - 0.3j, S5)
        assert r.passed

    def test_violated_identity_fails(self):
        # compare against the wrong partner with tight tolerance
        from ohno_zeta.series import eval_Z

        lhs = eval_Z((2, 3), 1.0, 1.5, S5)
        rhs = eval_Z((2, 3), 1.5, 1.0, S5)
        r = make_report("duality", {}, lhs, rhs, tol=1e-6)
        assert not r.passed


class TestOhno:
    def test_holds_for_small_shifts(self):
        for k in [(1, 2), (3,), (2, 2)]:
            for total in range(3):
                r = verify_ohno(k, total, 1.5, S5)
                assert r.passed, (k, total)

    def test_self_dual_is_exact(self):
        r = verify_ohno((1, 3), 1, 2.0, S4)
        assert r.abs_err == 0.0


class TestSumFormulas:
    def test_diagonal_formula(self):
        for depth, weight in [(1, 3), (2, 4), (3, 5), (2, 5)]:
            r = verify_sum_formula(depth, weight, 1.7, S5)
            assert r.passed, (depth, weight)

    def test_two_param_formula(self):
        for depth, weight in [(1, 3), (2, 4), (2, 5)]:
            r = verify_two_param_sum_formula(depth, weight, 1.2, 0.7, S5)
            assert r.passed, (depth, weight)

    def test_depth_bounds_checked(self):
        with pytest.raises(DepthTooLargeError):
            verify_sum_formula(4, 4, 1.0, S4)
        with pytest.raises(DepthTooLargeError):
            verify_sum_formula(0, 3, 1.0, S4)

    def test_weight_cap(self):
        with pytest.raises(WeightTooLargeError):
            verify_sum_formula(1, 40, 1.0, S4)


class TestCoefficientDuality:
    def test_small_grid(self):
        for k in [(2,), (1, 2), (2, 2)]:
            for order in (0, 1, 2):
                r = verify_coefficient_duality(k, order, 1.5, S4)
                assert r.passed, (k, order)

    def test_sweep_method(self):
        r = verify_coefficient_duality((1, 2), 1, 1.3, S4, method="sweep")
        assert r.passed


class TestContourCheckers:
    def test_expansion_exchange_both_directions(self):
        reports = verify_expansion_exchange((1, 2), 1, 1.5, S4, points=16)
        assert len(reports) == 2
        directions = {r.inputs["direction"] for r in reports}
        assert directions == {"increment-from-insertion", "insertion-from-increment"}
        for r in reports:
            assert r.passed, r.inputs

    def test_defect_recursion(self):
        r = verify_defect_recursion((1, 2), 1, 1.5, S4, points=16)
        assert r.passed
        # both sides are duality defects, so they should be near zero too
        assert abs(r.lhs) < r.combined_tail + 1e-6

    def test_derivative_duality(self):
        r = verify_derivative_duality((1, 2), 0, 1, 1.5, S4, points=16)
        assert r.passed

    def test_mixed_partial_duality(self):
        r = verify_mixed_partial_duality((1, 2), 1, 0, 1.5, S4, points=16)
        assert r.passed
        assert abs(r.lhs) > 1e-3  # nonzero quantity, not a trivial 0 == 0

    def test_taylor_shift_duality(self):
        r = verify_taylor_shift_duality((1, 2), 1, 1.5, S4, points=16)
        assert r.passed

    def test_radius_guard(self):
        from ohno_zeta.series import RadiusDomainError

        with pytest.raises(RadiusDomainError):
            verify_expansion_exchange((2,), 1, 1.0, S4, radius=2.0)


class TestHurwitzSumFormula:
    def test_depth_one_weight_three(self):
        r = verify_hurwitz_sum_formula(3, 1, 1.0, S5)
        assert r.passed
        assert abs(r.lhs.real - ZETA3) < 1e-6

    def test_depth_two_weight_four(self):
        r = verify_hurwitz_sum_formula(4, 2, 1.5, S5)
        assert r.passed

    def test_zero_order_derivative_case(self):
        # weight = depth + 1 needs no offset derivative at all
        r = verify_hurwitz_sum_formula(3, 2, 1.0, S5)
        assert r.passed


class TestSweep:
    def test_grid_counts_and_passes(self):
        rs = sweep(["duality"], 3, alphas=[1.0], settings=S4)
        # weights 2 and 3: 1 + 2 indices, one (alpha, beta) cell
        assert len(rs) == 3
        assert all(r.passed for r in rs)

    def test_ohno_grid_downward_closed(self):
        rs = sweep(["ohno"], 3, max_total=3, alphas=[1.5], settings=S4)
        totals = sorted(
            r.inputs["total"] for r in rs if r.inputs.get("index") == "1,2"
        )
        assert totals == [0, 1, 2, 3]
        assert not any(r.relation_id == "ohno-closure" for r in rs)

    def test_weight_cap(self):
        with pytest.raises(WeightTooLargeError):
            sweep(["duality"], 13, settings=S4)

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            sweep(["dualty"], 3, settings=S4)

    def test_sum_relations_included(self):
        rs = sweep(["sum-alpha", "sum-two-param"], 3, alphas=[1.0], settings=S4)
        ids = {r.relation_id for r in rs}
        assert ids == {"sum-alpha", "sum-two-param"}
        assert all(r.passed for r in rs)


class TestClosureFlags:
    def _fake(self, total, passed=True, index="1,2"):
        return VerificationReport(
            relation_id="ohno",
            inputs={"index": index, "alpha": {"re": 1.0, "im": 0.0}, "total": total},
            lhs=0j,
            rhs=0j,
            abs_err=0.0,
            combined_tail=0.0,
            tol=1e-6,
            passed=passed,
        )

    def test_complete_passing_grid_unflagged(self):
        rs = [self._fake(t) for t in range(4)]
        assert ohno_closure_flags(rs) == []

    def test_missing_lower_total_flagged(self):
        rs = [self._fake(1)]
        flags = ohno_closure_flags(rs)
        assert len(flags) == 1
        assert flags[0].relation_id == "ohno-closure"
        assert flags[0].inputs["reason"] == "missing"
        assert not flags[0].passed

    def test_failing_lower_total_flagged(self):
        rs = [self._fake(0, passed=False), self._fake(1)]
        flags = ohno_closure_flags(rs)
        assert len(flags) == 1
        assert flags[0].inputs["reason"] == "failing"

    def test_even_totals_not_gated(self):
        rs = [self._fake(2)]
        assert ohno_closure_flags(rs) == []

    def test_indices_tracked_separately(self):
        rs = [self._fake(0), self._fake(1), self._fake(1, index="2,2")]
        flags = ohno_closure_flags(rs)
        assert len(flags) == 1
        assert flags[0].inputs["index"] == "2,2"
