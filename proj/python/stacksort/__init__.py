"""Sorting with a bounded stack feeding an unbounded stack.

Thin Python surface over the C++ core: sortability decisions, sorting-trace
validation and enumeration, sortable/basis counting per length, the infinite
antichain families, and structural law checks over all sorting traces.
"""

from stacksort._core import (
    __version__,
    basis_elements,
    check_law,
    constructive_sort_deletion,
    containment_witness,
    contains,
    count_sortable_table,
    decide_sortable,
    delete_at,
    enumerate_sorting_traces,
    generate_g_minus1,
    generate_gi,
    generate_git,
    is_antichain,
    lift_basis_element,
    one_point_extensions,
    parse_permutation,
    render_permutation,
    shift_values,
    sort_witness,
    validate_trace,
    verify_basis_membership,
)

__all__ = [
    "__version__",
    "basis_elements",
    "check_law",
    "constructive_sort_deletion",
    "containment_witness",
    "contains",
    "count_sortable_table",
    "decide_sortable",
    "delete_at",
    "enumerate_sorting_traces",
    "generate_g_minus1",
    "generate_gi",
    "generate_git",
    "is_antichain",
    "lift_basis_element",
    "one_point_extensions",
    "parse_permutation",
    "render_permutation",
    "shift_values",
    "sort_witness",
    "validate_trace",
    "verify_basis_membership",
]
