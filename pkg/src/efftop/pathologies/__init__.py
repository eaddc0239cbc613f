"""Spaces built to sit on the edge of what finite evidence can decide."""

from .blocks import (
    BIRTHDAY_CAP,
    BlockMachineRun,
    BlockMachineState,
    RequirementStatus,
    birthday,
    block_machine_run,
    check_invariants,
    dyadics_up_to,
    level,
    replay_matches,
)
from .cofinite import (
    PAST_BOUND,
    Pi01Space,
    fixture_alltrue,
    fixture_holes,
    fixture_parity,
    full_set_readoff,
    pi01_compact_space,
)
from .generics import (
    LIMIT_IN_FIRST,
    LIMIT_IN_SECOND,
    GenericRun,
    LimitFamily,
    RequirementVerdict,
    TychonoffKey,
    kleene_post_generic,
    step_family,
    tychonoff_key_extraction,
    verify_verdicts,
)
from .hypersimple import (
    HypersimpleSpace,
    classify_closure_set,
    classify_subbase_set,
    hypersimple_space,
)
from .injections import (
    DisjointFamily,
    Injection,
    KeySet,
    deficiency_set,
    default_injection,
    hypersimple_b_extraction,
    injection_ordered_space,
    prefix_injection,
    range_enumeration,
    successor_from_gaps,
    validate_injection,
)
from .subcompact import (
    DeadendSpace,
    LimitSubbaseSpace,
    comb_tree,
    deadend_tree_space,
    fixture_trees,
    full_tree,
    limit_readoff,
    limit_subbase_space,
    pair_tree,
)
from .tychonoff import (
    BASIC,
    DISCRETE,
    NoncoverWitness,
    TychonoffPair,
    alternating_family,
    canonical_cover_triples,
    tychonoff_noncover_witness,
    tychonoff_spaces,
)

__all__ = [
    "BASIC",
    "BIRTHDAY_CAP",
    "DISCRETE",
    "LIMIT_IN_FIRST",
    "LIMIT_IN_SECOND",
    "PAST_BOUND",
    "BlockMachineRun",
    "BlockMachineState",
    "DeadendSpace",
    "DisjointFamily",
    "GenericRun",
    "HypersimpleSpace",
    "Injection",
    "KeySet",
    "LimitFamily",
    "LimitSubbaseSpace",
    "NoncoverWitness",
    "Pi01Space",
    "RequirementStatus",
    "RequirementVerdict",
    "TychonoffKey",
    "TychonoffPair",
    "alternating_family",
    "birthday",
    "block_machine_run",
    "canonical_cover_triples",
    "check_invariants",
    "comb_tree",
    "deadend_tree_space",
    "deficiency_set",
    "default_injection",
    "dyadics_up_to",
    "classify_closure_set",
    "classify_subbase_set",
    "fixture_alltrue",
    "fixture_holes",
    "fixture_parity",
    "fixture_trees",
    "full_set_readoff",
    "full_tree",
    "hypersimple_b_extraction",
    "hypersimple_space",
    "injection_ordered_space",
    "kleene_post_generic",
    "level",
    "limit_readoff",
    "limit_subbase_space",
    "pair_tree",
    "pi01_compact_space",
    "prefix_injection",
    "range_enumeration",
    "replay_matches",
    "step_family",
    "successor_from_gaps",
    "tychonoff_key_extraction",
    "tychonoff_noncover_witness",
    "tychonoff_spaces",
    "validate_injection",
    "verify_verdicts",
]
