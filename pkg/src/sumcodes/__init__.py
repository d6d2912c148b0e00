"""Total perfect codes in Cayley sum graphs of finite abelian groups."""

from .abelian import (
    ElementSet,
    GroupSpec,
    Subgroup,
    enumerate_subgroups,
    is_good_abelian_order,
    is_normal_subset,
    is_periodic,
    is_square_free,
    make_group,
    quotient_reduce,
    squares,
    stabilizer,
    subgroup_generated,
)
from .codes import (
    SearchLimits,
    canonical_code_cyclic,
    enumerate_total_perfect_codes,
    is_total_perfect_code,
    partition_check,
    subgroup_total_perfect_codes,
    theorem34_code_family,
    translates_of_code,
)
from .factorization import (
    cyclic_certificate,
    multivariate_certificate,
    quotient_factorization_check,
    two_of_three_check,
    unique_sum_factorization,
)
from .graph import (
    CayleySumGraph,
    export_dot,
    is_connected_algebraic,
    is_connected_bfs,
    is_regular,
    make_graph,
    neighbors,
)

__all__ = [
    "ElementSet",
    "GroupSpec",
    "Subgroup",
    "enumerate_subgroups",
    "is_good_abelian_order",
    "is_normal_subset",
    "is_periodic",
    "is_square_free",
    "make_group",
    "quotient_reduce",
    "squares",
    "stabilizer",
    "subgroup_generated",
    "SearchLimits",
    "canonical_code_cyclic",
    "enumerate_total_perfect_codes",
    "is_total_perfect_code",
    "partition_check",
    "subgroup_total_perfect_codes",
    "theorem34_code_family",
    "translates_of_code",
    "cyclic_certificate",
    "multivariate_certificate",
    "quotient_factorization_check",
    "two_of_three_check",
    "unique_sum_factorization",
    "CayleySumGraph",
    "export_dot",
    "is_connected_algebraic",
    "is_connected_bfs",
    "is_regular",
    "make_graph",
    "neighbors",
]

__version__ = "0.1.0"
