"""Two-parameter multiple zeta series: evaluation and relation checking."""

from .indices import (
    AdmissibleIndex,
    BlockDistribution,
    BlockForm,
    EmptyIndexError,
    InfeasibleTotalError,
    LastPartTooSmallError,
    NonPositivePartError,
    PatternLengthMismatchError,
    admissible_indices,
    block_distributions,
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

__version__ = "0.1.0"

__all__ = [
    "AdmissibleIndex",
    "BlockDistribution",
    "BlockForm",
    "EmptyIndexError",
    "InfeasibleTotalError",
    "LastPartTooSmallError",
    "NonPositivePartError",
    "PatternLengthMismatchError",
    "admissible_indices",
    "block_distributions",
    "compositions",
    "dual",
    "dual_of_inserted",
    "format_index",
    "insert_ones",
    "insertion_patterns",
    "parse_index",
    "to_block_form",
    "validate",
]
