"""Schur function averages over the real Ginibre ensemble."""

__version__ = "0.1.0"

from .partitions import Partition, conjugate, enumerate_partitions, hooks_of, is_even, weight
from .symfunc import (
    DegeneratePoints,
    PointSet,
    complete,
    dual_cauchy_lhs,
    dual_cauchy_rhs,
    elementary,
    hook_expand_power_sum,
    power_sum,
    schur_jacobi_trudi,
    schur_tableau,
    schur_vandermonde,
)
from .pfaffian import (
    OddDimension,
    SkewMatrix,
    build_epsilon,
    build_epsilon_inverse,
    consecutive_pair_pfaffian_sign,
    dn_polynomial,
    pfaffian,
    sub_pfaffian,
)
from .ginibre import (
    InvalidPartition,
    MomentValue,
    a_coefficient,
    build_A,
    charpoly_pair_average,
    charpoly_product_average,
    kernel_KN,
    normalization_constant,
    schur_average_closed,
    schur_average_pfaffian,
    trace_moment,
)
