"""Wiretap-secure network coding on two-layer and separable networks.

Exact GF(q) linear algebra, coset-coding scheme construction, polymatroid
rate regions with capacity verdicts, rank/entropy secrecy verification, and
multicast lifting from child two-layer networks onto separable parents.
"""

from .gf import (
    FieldElement,
    FieldMatrix,
    NotFullRowRankError,
    default_modulus,
    rank,
    right_inverse,
    right_null_space_basis,
    smallest_prime_above,
    subspace_intersection_dim,
    subspace_sum_dim,
)
from .network import (
    CutProfile,
    SeparableNetwork,
    TwoLayerNetwork,
    build_child,
    component_count,
    dag_cut_profile,
    min_cut_dag,
    min_cut_two_layer,
    two_layer_cut_profile,
    verify_separable,
)
from .regions import (
    RateRegion,
    achievable_region,
    canonicalize,
    capacity_region_k1,
    capacity_region_m3,
    corner_point,
    cut_set_outer_bound,
    pairwise_overlap_sufficient,
    regions_equal,
)
from .scheme import (
    FieldTooSmallError,
    SecureCommunicationImpossibleError,
    WiretapScheme,
    build_message_matrix,
    build_scheme,
    build_vandermonde,
    constraint_matrix,
    decode,
    encode,
    null_spaces,
    select_decoding_vectors,
)
from .secrecy import (
    EnumerationBudgetError,
    SecurityReport,
    entropy_oracle,
    mds_check,
    rank_condition,
    verify_scheme,
    wiretap_edge_model,
)
from .lifting import (
    LiftFailureError,
    LiftedScheme,
    MulticastFailureError,
    decode_destination,
    lift_scheme,
    lifted_edge_model,
    multicast_subgraph,
    random_code_success_bound,
    transmit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
