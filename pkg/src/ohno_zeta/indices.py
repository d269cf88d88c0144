"""Integer index combinatorics for the two-parameter multiple zeta family.

An admissible index is a tuple of positive integers whose last entry is at
least 2.  This module provides validation, the run-length block form, the
dual index, and the small enumerations (compositions, one-insertions,
block distributions) that the summation layers build on.  Everything here
is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence


class IndexError_(ValueError):
    """Base class for index validation failures."""


class EmptyIndexError(IndexError_):
    """The index has no entries."""


class NonPositivePartError(IndexError_):
    """Some entry is zero or negative."""


class LastPartTooSmallError(IndexError_):
    """The final entry is 1, so the defining series diverges."""


class PatternLengthMismatchError(ValueError):
    """An insertion pattern does not have depth-1 entries."""


class InfeasibleTotalError(ValueError):
    """A positive total cannot be distributed over zero slots."""


@dataclass(frozen=True)
class AdmissibleIndex:
    """Tuple of positive integers with last entry >= 2."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.parts) == 0:
            raise EmptyIndexError("index must have at least one entry")
        for p in self.parts:
            if not isinstance(p, int) or isinstance(p, bool) or p < 1:
                raise NonPositivePartError(f"index entries must be positive integers, got {p!r}")
        if self.parts[-1] < 2:
            raise LastPartTooSmallError("last entry must be >= 2 for convergence")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return format_index(self)


def validate(parts: Sequence[int]) -> AdmissibleIndex:
    """Check admissibility and wrap the entries.

    Raises EmptyIndexError, NonPositivePartError, or LastPartTooSmallError,
    each naming the violated rule.
    """
    return AdmissibleIndex(tuple(parts))


def _as_index(k) -> AdmissibleIndex:
    if isinstance(k, AdmissibleIndex):
        return k
    return validate(k)


@dataclass(frozen=True)
class BlockForm:
    """Run-length form (1^{a_1}, b_1+2, ..., 1^{a_s}, b_s+2) of an index.

    a[i] counts the ones before the (i+1)-th entry >= 2, and that entry is
    b[i] + 2.  Both tuples have the same positive length.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b) or len(self.a) == 0:
            raise ValueError("block form needs matching nonempty a and b")
        if any(x < 0 for x in self.a) or any(x < 0 for x in self.b):
            raise ValueError("block counts must be nonnegative")

    def to_index(self) -> AdmissibleIndex:
        parts: list[int] = []
        for ai, bi in zip(self.a, self.b):
            parts.extend([1] * ai)
            parts.append(bi + 2)
        return AdmissibleIndex(tuple(parts))


def to_block_form(k) -> BlockForm:
    """Decompose an admissible index into its block form.

    The decomposition is unique: every maximal run of ones is followed by
    an entry >= 2 (the last entry is >= 2, so no run is left dangling).
    """
    k = _as_index(k)
    a: list[int] = []
    b: list[int] = []
    ones = 0
    for p in k.parts:
        if p == 1:
            ones += 1
        else:
            a.append(ones)
            b.append(p - 2)
            ones = 0
    return BlockForm(tuple(a), tuple(b))


def dual(k) -> AdmissibleIndex:
    """Dual index: block form (a, b) maps to blocks (b_s, a_s), ..., (b_1, a_1).

    The dual is an involution, and weight(k) = depth(k) + depth(dual(k)).
    """
    bf = to_block_form(k)
    return BlockForm(tuple(reversed(bf.b)), tuple(reversed(bf.a))).to_index()


def compositions(total: int, length: int) -> Iterator[tuple[int, ...]]:
    """Yield all tuples of `length` nonnegative integers summing to `total`.

    Lexicographic order.  There are C(total+length-1, length-1) of them.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if total < 0:
        raise ValueError("total must be >= 0")
    if length == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, length - 1):
            yield (first,) + rest


def composition_count(total: int, length: int) -> int:
    return comb(total + length - 1, length - 1)


def insert_ones(k, pattern: Sequence[int]) -> AdmissibleIndex:
    """Insert pattern[j] ones after the (j+1)-th entry, j = 0..depth-2.

    The pattern must have exactly depth-1 entries; the result is again
    admissible since the last entry is untouched.
    """
    k = _as_index(k)
    pattern = tuple(pattern)
    if len(pattern) != k.depth - 1:
        raise PatternLengthMismatchError(
            f"pattern length {len(pattern)} != depth-1 = {k.depth - 1}"
        )
    if any(p < 0 for p in pattern):
        raise ValueError("insertion counts must be nonnegative")
    parts: list[int] = []
    for j, entry in enumerate(k.parts[:-1]):
        parts.append(entry)
        parts.extend([1] * pattern[j])
    parts.append(k.parts[-1])
    return AdmissibleIndex(tuple(parts))


def insertion_patterns(total: int, depth: int) -> Iterator[tuple[int, ...]]:
    """All ways to split `total` inserted ones over the depth-1 gaps."""
    if depth == 1:
        if total == 0:
            yield ()
        # depth 1 has no gaps; positive totals contribute nothing
        return
    yield from compositions(total, depth - 1)


@dataclass(frozen=True)
class BlockDistribution:
    """Per-group totals of a per-slot distribution, with its multiplicity.

    block_sums[g] is the number of units landing in group g; multiplicity
    counts the underlying per-slot assignments, i.e. the product over
    groups of C(block_sums[g] + slots[g] - 1, slots[g] - 1).
    """

    block_sums: tuple[int, ...]
    multiplicity: int


def block_distributions(slot_counts: Sequence[int], total: int) -> Iterator[BlockDistribution]:
    """Distribute `total` units over groups with slot_counts[g] slots each.

    Groups with zero slots can only receive zero units.  Yields per-group
    totals in lexicographic order together with the exact multiplicity.
    Raises InfeasibleTotalError if total > 0 and every group has zero slots.
    """
    slot_counts = tuple(slot_counts)
    if any(s < 0 for s in slot_counts):
        raise ValueError("slot counts must be nonnegative")
    if total < 0:
        raise ValueError("total must be >= 0")
    if total > 0 and all(s == 0 for s in slot_counts):
        raise InfeasibleTotalError(f"cannot place {total} units in zero slots")

    def rec(g: int, remaining: int) -> Iterator[tuple[tuple[int, ...], int]]:
        if g == len(slot_counts):
            if remaining == 0:
                yield (), 1
            return
        s = slot_counts[g]
        top = 0 if s == 0 else remaining
        for here in range(top + 1):
            mult = comb(here + s - 1, s - 1) if s > 0 else 1
            if mult == 0:
                continue
            for rest, rest_mult in rec(g + 1, remaining - here):
                yield (here,) + rest, mult * rest_mult

    for sums, mult in rec(0, total):
        yield BlockDistribution(sums, mult)


def dual_of_inserted(k, pattern: Sequence[int]) -> AdmissibleIndex:
    """Dual of the one-inserted index, with a structural consistency check.

    The result must differ from dual(k) only by entrywise nonnegative
    increments totalling sum(pattern); that is verified here on every call
    since downstream expansions rely on it.
    """
    k = _as_index(k)
    inserted = insert_ones(k, pattern)
    d = dual(inserted)
    base = dual(k)
    if d.depth != base.depth:
        raise AssertionError(f"dual of inserted index changed depth: {d} vs {base}")
    excess = [x - y for x, y in zip(d.parts, base.parts)]
    if any(e < 0 for e in excess) or sum(excess) != sum(pattern):
        raise AssertionError(f"dual of inserted index is not an increment of {base}: {d}")
    return d


def admissible_indices(weight: int, depth: int | None = None) -> Iterator[AdmissibleIndex]:
    """All admissible indices of the given weight (optionally fixed depth).

    Ordered by depth, then lexicographically.  For weight w there are
    2^(w-2) in total and C(w-2, d-1) of depth d.
    """
    if weight < 2:
        return
    depths = range(1, weight) if depth is None else [depth]
    for d in depths:
        if d < 1 or d > weight - 1:
            continue
        # shift to nonnegative parts: entry j = extra_j + 1, last = extra + 2
        for extra in compositions(weight - d - 1, d):
            parts = tuple(e + 1 for e in extra[:-1]) + (extra[-1] + 2,)
            yield AdmissibleIndex(parts)


def parse_index(text: str) -> AdmissibleIndex:
    """Parse a comma-separated index literal like '1,2,3'."""
    items = [s.strip() for s in text.split(",")]
    try:
        parts = tuple(int(s) for s in items)
    except ValueError as exc:
        raise ValueError(f"malformed index literal {text!r}") from exc
    return validate(parts)


def format_index(k) -> str:
    k = _as_index(k)
    return ",".join(str(p) for p in k.parts)
