"""Index combinatorics: validation, block form, dual, enumerations."""

from math import comb

import pytest

from ohno_zeta.indices import (
    AdmissibleIndex,
    BlockForm,
    EmptyIndexError,
    InfeasibleTotalError,
    LastPartTooSmallError,
    NonPositivePartError,
    PatternLengthMismatchError,
    admissible_indices,
    block_distributions,
    composition_count,
    compositions,
    dual,
    dual_of_inserted,
    format_index,
    insert_ones,
    insertion_patterns,
    parse_index,
    to_block_form,
    validate,
)


class TestValidation:
    def test_accepts_admissible(self):
        k = validate([1, 2, 3])
        assert k.parts == (1, 2, 3)
        assert k.weight == 6
        assert k.depth == 3

    def test_depth_one(self):
        assert validate([2]).parts == (2,)

    def test_empty_rejected(self):
        with pytest.raises(EmptyIndexError):
            validate([])

    def test_nonpositive_rejected(self):
        with pytest.raises(NonPositivePartError):
            validate([1, 0, 2])
        with pytest.raises(NonPositivePartError):
            validate([-1, 2])

    def test_bool_rejected(self):
        with pytest.raises(NonPositivePartError):
            validate([True, 2])

    def test_trailing_one_rejected(self):
        with pytest.raises(LastPartTooSmallError):
            validate([2, 1])
        with pytest.raises(LastPartTooSmallError):
            validate([1])

    def test_frozen(self):
        k = validate([2, 3])
        with pytest.raises(Exception):
            k.parts = (3,)


class TestBlockForm:
    def test_single_entry(self):
        bf = to_block_form((2,))
        assert bf.a == (0,) and bf.b == (0,)

    def test_leading_ones(self):
        bf = to_block_form((1, 1, 2))
        assert bf.a == (2,) and bf.b == (0,)

    def test_mixed(self):
        bf = to_block_form((1, 2, 1, 1, 3))
        assert bf.a == (1, 2)
        assert bf.b == (0, 1)

    def test_roundtrip_exhaustive(self):
        for w in range(2, 11):
            for k in admissible_indices(w):
                assert to_block_form(k).to_index() == k

    def test_to_index(self):
        assert BlockForm((1, 0), (1, 2)).to_index().parts == (1, 3, 4)


class TestDual:
    def test_pinned_examples(self):
        assert dual((2, 3)).parts == (1, 2, 2)
        assert dual((1, 2, 1, 1, 3)).parts == (1, 4, 3)
        assert dual((1, 1, 2)).parts == (4,)
        assert dual((2,)).parts == (2,)

    def test_self_dual(self):
        assert dual((1, 3)).parts == (1, 3)

    def test_involution_exhaustive(self):
        for w in range(2, 11):
            for k in admissible_indices(w):
                assert dual(dual(k)) == k

    def test_weight_is_sum_of_depths(self):
        for w in range(2, 11):
            for k in admissible_indices(w):
                assert k.weight == k.depth + dual(k).depth


class TestCompositions:
    def test_basic(self):
        got = list(compositions(2, 2))
        assert got == [(0, 2), (1, 1), (2, 0)]

    def test_counts(self):
        for total in range(0, 6):
            for length in range(1, 5):
                got = list(compositions(total, length))
                assert len(got) == composition_count(total, length)
                assert len(set(got)) == len(got)
                assert all(sum(c) == total and len(c) == length for c in got)

    def test_length_one(self):
        assert list(compositions(3, 1)) == [(3,)]

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            list(compositions(1, 0))
        with pytest.raises(ValueError):
            list(compositions(-1, 2))


class TestInsertOnes:
    def test_basic(self):
        assert insert_ones((2, 3), [2]).parts == (2, 1, 1, 3)

    def test_zero_pattern(self):
        assert insert_ones((1, 2, 3), [0, 0]).parts == (1, 2, 3)

    def test_depth_one_empty_pattern(self):
        assert insert_ones((4,), []).parts == (4,)

    def test_pattern_length_checked(self):
        with pytest.raises(PatternLengthMismatchError):
            insert_ones((2, 3), [1, 1])

    def test_patterns_depth_one(self):
        assert list(insertion_patterns(0, 1)) == [()]
        assert list(insertion_patterns(2, 1)) == []

    def test_patterns_match_compositions(self):
        assert list(insertion_patterns(2, 3)) == list(compositions(2, 2))


class TestBlockDistributions:
    def test_zero_slots_blocked(self):
        got = list(block_distributions([2, 0], 1))
        assert len(got) == 1
        assert got[0].block_sums == (1, 0)
        assert got[0].multiplicity == 2

    def test_infeasible(self):
        with pytest.raises(InfeasibleTotalError):
            list(block_distributions([0, 0], 1))

    def test_total_zero(self):
        got = list(block_distributions([0, 0], 0))
        assert len(got) == 1 and got[0].multiplicity == 1

    def test_multiplicities_sum_to_stars_and_bars(self):
        # grouping slots must not change the number of raw assignments
        for slots in [(1, 2), (3,), (2, 2, 1), (2, 0, 3)]:
            n_slots = sum(slots)
            for total in range(0, 5):
                got = list(block_distributions(slots, total))
                assert sum(d.multiplicity for d in got) == comb(total + n_slots - 1, n_slots - 1)

    def test_multiplicity_is_product_of_group_counts(self):
        for d in block_distributions((2, 3), 3):
            expect = comb(d.block_sums[0] + 1, 1) * comb(d.block_sums[1] + 2, 2)
            assert d.multiplicity == expect


class TestDualOfInserted:
    def test_is_increment_of_dual(self):
        # every insertion into k shows up as entrywise increments on dual(k)
        for w in range(2, 7):
            for k in admissible_indices(w):
                for total in range(0, 3):
                    for pat in insertion_patterns(total, k.depth):
                        d = dual_of_inserted(k, pat)
                        base = dual(k)
                        excess = [x - y for x, y in zip(d.parts, base.parts)]
                        assert all(e >= 0 for e in excess)
                        assert sum(excess) == total

    def test_matches_plain_dual(self):
        assert dual_of_inserted((2, 3), (1,)) == dual((2, 1, 3))


class TestEnumeration:
    def test_total_count_is_power_of_two(self):
        for w in range(2, 11):
            assert sum(1 for _ in admissible_indices(w)) == 2 ** (w - 2)

    def test_depth_counts(self):
        for w in range(2, 11):
            for d in range(1, w):
                got = sum(1 for _ in admissible_indices(w, d))
                assert got == comb(w - 2, d - 1)

    def test_all_admissible_and_distinct(self):
        for w in range(2, 9):
            seen = set()
            for k in admissible_indices(w):
                assert isinstance(k, AdmissibleIndex)
                assert k.weight == w
                assert k not in seen
                seen.add(k)

    def test_weight_below_two_empty(self):
        assert list(admissible_indices(1)) == []


class TestParseFormat:
    def test_roundtrip(self):
        k = parse_index("1,2,3")
        assert k.parts == (1, 2, 3)
        assert format_index(k) == "1,2,3"

    def test_whitespace_tolerated(self):
        assert parse_index(" 2 , 3 ").parts == (2, 3)

    def test_malformed(self):
        with pytest.raises(ValueError):
            parse_index("1,x,3")
        with pytest.raises(ValueError):
            parse_index("")

    def test_inadmissible_rejected(self):
        with pytest.raises(LastPartTooSmallError):
            parse_index("2,1")
