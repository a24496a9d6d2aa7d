"""Finite-N heat-kernel character sums on U(N) and SU(N)."""

from .partitions import (
    add_box,
    border_strips,
    conjugate,
    hook_lengths,
    partition_count,
    partitions_of,
    remove_box,
    sim_partitions,
    sym_dim,
    total_content,
)
from .weights import (
    CompositeWeight,
    RankOverflow,
    RankTooSmall,
    casimir_su,
    casimir_u,
    classify,
    compose,
    decompose,
    dim,
    dim_explicit,
    is_canonical,
    log_dim,
    schur_eval,
    sim_neighbors,
    successors,
)
from .yangmills import (
    SPECIAL_UNITARY,
    UNITARY,
    SumReport,
    SurfaceSpec,
    TruncationPolicy,
    convergence_sweep,
    euler_phi,
    partition_function,
    plane_wilson,
    sphere_wilson,
    tail_bound,
    theta,
    wilson_expectation,
    wilson_second_moment,
    wilson_variance,
)

__version__ = "0.1.0"
