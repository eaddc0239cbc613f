"""Executable fragments of the effective theory of countable
second-countable spaces: staged open codes, bounded cover checking,
subcover extraction, separation witnesses, and the pathology fixtures
that keep all of it honest."""
from .config import RunConfig, load_default_config
from .coding import (
    decode_bits,
    encode_bits,
    encode_seq,
    decode_seq,
    pair,
    pair3,
    unpair,
    unpair3,
)
from .foundations import (
    EnumSet,
    FinSet,
    PredicateKind,
    StagePredicate,
    constant_enumset,
    empty_enumset,
    enumset_from_predicate,
    enumset_from_stages,
    enumset_intersect_fin,
    enumset_union,
    exists_stage,
    stabilization_stage,
)
from .spaces import (
    ContinuityWitness,
    DualDescriptionMismatch,
    OpenCode,
    SpaceBase,
    Subbase,
    ValidationReport,
    code_union_stage,
    constant_code,
    discrete_space,
    effectively_open_check,
    fold_witness,
    preimage_open_code,
    product,
    staged_code,
    subbase_closure,
    subspace,
    validate_base,
    validate_continuity_witness,
)
from .covers import (
    AlexanderCertificate,
    BoundedUnknown,
    CoverDecision,
    CoverRelation,
    CoverStatus,
    Exactness,
    FailurePoint,
    InfiniteBranch,
    SubcoverCertificate,
    alexander_wkl_subcover,
    brute_force_relation,
    closed_subspace_cover_relation,
    closed_subspace_subcover,
    cofinite_point_subcover,
    cover_check_bruteforce,
    image_cover_relation,
    lift_cover_relation_to_closure,
    loeb_product_subcover,
    minimal_cover_search,
    product_cover_relation,
    accumulation_point_search,
    product_accumulation,
)
from .orders import (
    Cut,
    LinearOrder,
    completeness_check,
    cut_to_noncover,
    finite_order,
    gap_set,
    gaps_from_hausdorff,
    hausdorff_from_gaps,
    ordered_cover_relation,
    ordered_interval_cover_relation,
    ordered_space,
    permutation_order,
    validate_order,
)
from .separation import (
    ClosedSet,
    DiscreteWitness,
    HausdorffWitness,
    Separation,
    diagonal_code_from_hausdorff,
    discrete_to_hausdorff,
    hausdorff_from_diagonal_code,
    normal_separation,
    regular_separation,
    validate_discrete_witness,
    validate_hausdorff_witness,
)
from . import pathologies
from .registry import builtin_specs, listing, resolve

__version__ = "0.1.0"
