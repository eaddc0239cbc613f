"""The counterexample fixtures: injections, the hypersimple space, stage
machines, generics, and the limit-family spaces."""
from fractions import Fraction

import pytest

from efftop.coding import pair, pair3
from efftop.foundations import FinSet
from efftop.covers import (
    BoundedUnknown,
    CoverStatus,
    InfiniteBranch,
    alexander_wkl_subcover,
    cover_check_bruteforce,
    iter_index_families,
)
from efftop.pathologies import (
    DisjointFamily,
    KeySet,
    alternating_family,
    block_machine_run,
    canonical_cover_triples,
    check_invariants,
    classify_closure_set,
    classify_subbase_set,
    default_injection,
    deficiency_set,
    fixture_alltrue,
    fixture_holes,
    fixture_parity,
    full_set_readoff,
    hypersimple_b_extraction,
    kleene_post_generic,
    limit_readoff,
    step_family,
    tychonoff_key_extraction,
    tychonoff_noncover_witness,
    verify_verdicts,
)
from efftop.pathologies.blocks import (
    birthday,
    dyadics_up_to,
    level,
    replay_matches,
)
from efftop.registry import (
    blocks_fixture,
    delayed_set,
    generic_fixture_sets,
    resolve,
)
from efftop.separation import validate_discrete_witness


# --- hypersimple ---------------------------------------------------------

@pytest.fixture(scope="module")
def hyper():
    return resolve("hypersimple:default").extras["hs"]


def test_hypersimple_discrete_witness(hyper):
    report = validate_discrete_witness(hyper.space, hyper.discrete, 24)
    assert report.ok, report.violations


def test_hypersimple_classification(hyper):
    # the set at (1, 2): 2 enters at stage 3, so it holds 1 and the tail
    assert classify_subbase_set(hyper, pair(1, 2)) == \
        ("cofinite", FinSet.of([0, 2]))
    # the set at (0, 1): 1 never enters, so it is the singleton {0}
    assert classify_subbase_set(hyper, pair(0, 1)) == \
        ("finite", FinSet.of([0]))
    with pytest.raises(ValueError):
        classify_subbase_set(hyper, pair(1, 0))


def test_hypersimple_closure_classification(hyper):
    both = FinSet.of([pair(1, 2), pair(0, 4)]).encode()
    assert classify_closure_set(hyper, both) == \
        ("cofinite", FinSet.of(range(5)))
    mixed = FinSet.of([pair(1, 2), pair(0, 1)]).encode()
    kind, members = classify_closure_set(hyper, mixed)
    assert kind == "finite" and not members


def test_hypersimple_subbase_relation_vs_brute(hyper):
    pool = [i for i in range(17) if hyper.subbase.index_member(i)]
    space = hyper.space
    for fam in iter_index_families(pool, 2):
        got = hyper.subbase_relation.decide(fam)
        closure_fam = FinSet.of(FinSet.of([i]).encode() for i in fam)
        brute = cover_check_bruteforce(space, closure_fam, 40)
        assert got.covers == brute.covers, f"family {list(fam)}"


def test_b_extraction_oracle_route(hyper):
    A = hyper.enum
    s_seq = [FinSet.of([2 * n + 1, 2 * n + 2]) for n in range(8)]
    got = hypersimple_b_extraction(A, hyper.member, s_seq, 7, 64)
    assert isinstance(got, KeySet)
    # the key set avoids A and meets every listed set
    assert all(not hyper.member(x) for x in got.b)
    assert all(got.b.intersect(s) for s in s_seq)


def test_b_extraction_blind_route(hyper):
    A = hyper.enum
    s_seq = [FinSet.of([2 * n + 1, 2 * n + 2]) for n in range(8)]
    got = hypersimple_b_extraction(A, None, s_seq, 7, 64)
    assert isinstance(got, KeySet)
    assert all(x % 2 == 1 or x > 62 for x in got.b)


def test_b_extraction_disjoint_family():
    # a set whose elements enter one per stage keeps the table moving;
    # the blind route then returns the pairwise disjoint residues
    slow = delayed_set({s: [s] for s in range(1, 40)}, note="slow")
    s_seq = [FinSet.of(range(6 * n, 6 * n + 6)) for n in range(6)]
    got = hypersimple_b_extraction(slow, None, s_seq, 5, 20)
    assert isinstance(got, DisjointFamily)
    for a in range(len(got.sets)):
        for b in range(a + 1, len(got.sets)):
            assert not got.sets[a].intersect(got.sets[b])


def test_b_extraction_rejects_subset_of_a(hyper):
    s_inside = [FinSet.of([0, 2, 4])]
    with pytest.raises(ValueError):
        hypersimple_b_extraction(hyper.enum, hyper.member, s_inside, 0, 16)


# --- deficiency injections ----------------------------------------------

def test_default_injection_shape():
    inj = default_injection()
    assert [inj.f(x) for x in range(4)] == [1000, 0, 1001, 1]
    D = deficiency_set(inj)
    assert set(D.stage(20)) == {x for x in range(19) if x % 2 == 0}


# --- effectively compact predicate spaces --------------------------------

def test_pi01_fixture_relations():
    holes = fixture_holes()
    # each set misses its own index; two distinct sets cover
    assert not full_set_readoff(holes, 3)
    got = holes.subbase_relation.decide(FinSet.of([3]))
    assert got.status is CoverStatus.NOT_COVERS and got.witness == 3
    assert holes.subbase_relation.decide(FinSet.of([3, 5])).covers
    alltrue = fixture_alltrue()
    assert full_set_readoff(alltrue, 0)
    parity = fixture_parity()
    assert full_set_readoff(parity, 2) and not full_set_readoff(parity, 3)


def test_pi01_bounded_variant_stays_unknown():
    from efftop.pathologies import pi01_compact_space
    bounded = pi01_compact_space(lambda i, x: True, probe_bound=64)
    got = bounded.subbase_relation.decide(FinSet.of([0]))
    assert got.status is CoverStatus.UNKNOWN


# --- block machine --------------------------------------------------------

def test_dyadic_bookkeeping():
    assert dyadics_up_to(2) == [Fraction(0), Fraction(1, 4), Fraction(1, 2),
                                Fraction(3, 4), Fraction(1)]
    assert birthday(Fraction(1, 4)) == 2
    assert birthday(Fraction(17, 32)) == 5
    assert level(Fraction(3, 4), -3) == 5


def test_blocks_fixture_statuses():
    W, reqs = blocks_fixture()
    run = block_machine_run(W, 200, requirements=reqs)
    by_code = run.statuses
    assert by_code[pair(1, 0)].state == "SHIFTED"
    assert by_code[pair(1, 0)].stage == 16
    assert by_code[pair(1, 0)].endpoints == (6, 15)
    assert by_code[pair(0, 2)].state == "SHIFTED"
    assert by_code[pair(0, 2)].stage == 148
    assert by_code[pair(0, 2)].endpoints == (144, 147)
    assert by_code[pair(0, 1)].state == "VACUOUS"
    assert by_code[pair(0, 1)].endpoints is None
    assert not check_invariants(run.state)
    assert replay_matches(run, W, 200, requirements=reqs)


def test_blocks_waiting_when_two_blocks_eligible():
    W = [delayed_set({16: [15]}, note="W0"),
         delayed_set({}, note="W1"),
         delayed_set({7: [6]}, note="W2")]
    run = block_machine_run(W, 60, requirements=[(2, 0)])
    status = run.statuses[pair(2, 0)]
    assert status.state == "WAITING" and status.endpoints == (6, 15)


def test_blocks_vacuous_same_block_carries_distance():
    W = [delayed_set({16: [15]}, note="W0"),
         delayed_set({7: [6]}, note="W1"),
         delayed_set({16: [15]}, note="W2")]
    run = block_machine_run(W, 200, requirements=[(1, 0), (1, 2)])
    shifted = run.statuses[pair(1, 0)]
    rider = run.statuses[pair(1, 2)]
    assert shifted.state == "SHIFTED"
    assert rider.state == "VACUOUS"
    assert rider.endpoints == (6, 15)
    assert rider.distance == shifted.distance == 183


def test_blocks_rejects_stage_unbounded_sets():
    W = [delayed_set({3: [9]}, note="bad")]
    with pytest.raises(ValueError):
        block_machine_run(W, 50, requirements=[(0, 0)])


def test_blocks_shift_keeps_watched_order():
    W, reqs = blocks_fixture()
    run = block_machine_run(W, 200, requirements=reqs)
    order = run.order
    # the shift preserves relative order of the trapped points
    assert order.less(6, 15)
    assert order.less(144, 147)
    assert run.state.block_of(6) == run.state.block_of(15)
    assert run.state.block_of(144) == run.state.block_of(147)


# --- finite-extension generics -------------------------------------------

def test_generic_run_and_verification():
    D = generic_fixture_sets()
    run = kleene_post_generic(D, 64)
    states = [v.state for v in run.verdicts]
    assert states == ["MET"] * 5 + ["AVOIDED"] * 3
    assert run.limit_bits == (0, 1, 1, 0, 1)
    assert verify_verdicts(run, D, 64) == []


def test_generic_commitment_chain_grows():
    D = generic_fixture_sets()
    run = kleene_post_generic(D, 64)
    for a, b in zip(run.commitments, run.commitments[1:]):
        assert b[:len(a)] == a


def test_step_family_stabilization():
    F = step_family([1, 0, 1], [2, 5, 3])
    assert F.bit(0, 1) == 0 and F.bit(0, 2) == 1
    assert F.check_stabilized(0, 10)
    assert not F.check_stabilized(1, 4)


def test_key_extraction_on_alternating_family():
    F = alternating_family()
    s_seq = [FinSet.of(range(m, m + 4)) for m in range(33)]
    key = tychonoff_key_extraction(F, 0, s_seq, count=33, check_bound=64)
    assert key.bound == 33
    assert all(F.limit(x) == 0 for x in key.b)
    assert all(key.b.intersect(s) for s in s_seq)


def test_key_extraction_needs_matching_limits():
    F = alternating_family()
    evens_only = [FinSet.of([1, 3, 5])]
    with pytest.raises(ValueError):
        tychonoff_key_extraction(F, 0, evens_only, 1, 64)


def test_key_extraction_wrong_direction():
    F = step_family([0, 1], [3, 3])  # limits ride the second argument
    with pytest.raises(ValueError):
        tychonoff_key_extraction(F, 0, [FinSet.of([0])], 1, 16)


# --- limit-family spaces ---------------------------------------------------

def test_limit_readoff():
    ls = resolve("limit-subbase:default").extras["ls"]
    F = ls.family
    bits = [limit_readoff(ls.limit_cover, n, 40) for n in range(5)]
    assert bits == [F.limit(n) for n in range(5)]
    short = limit_readoff(ls.limit_cover, 50, 8)
    assert isinstance(short, BoundedUnknown)


def test_limit_cover_has_no_finite_subcover():
    ls = resolve("limit-subbase:default").extras["ls"]
    final = ls.limit_cover.stage(12)
    got = ls.subbase_relation.decide(final)
    assert got.status is CoverStatus.NOT_COVERS


def test_singleton_index():
    ls = resolve("limit-subbase:default").extras["ls"]
    idx = ls.singleton_index(3)
    members = [x for x in range(12) if ls.space.basic_member(x, idx)]
    assert members == [3]
    with pytest.raises(ValueError):
        ls.singleton_index(9)


def test_canonical_cover_triples():
    got = canonical_cover_triples(16)
    assert got == [0, 1, 3, 4, 6, 7, 8, 10, 11, 12, 15, 16]
    assert pair3(1, 1, 0) in got


def test_tychonoff_noncover_witness():
    F = alternating_family()
    triples = FinSet.of(canonical_cover_triples(16)[:3])
    w = tychonoff_noncover_witness(F, triples, 64)
    assert w.z == 2 and w.point == pair(2, 2)
    assert set(w.low_side) | set(w.high_side) == set(triples)


def test_tychonoff_noncover_rejects_malformed():
    F = alternating_family()
    bad = FinSet.of([pair3(0, 1, 0)])  # x below a y
    with pytest.raises(ValueError):
        tychonoff_noncover_witness(F, bad, 64)


def test_tychonoff_sides_share_family():
    lt = resolve("tychonoff:basic,0")
    rt = resolve("tychonoff:basic,1")
    assert lt.extras["pair"].family is rt.extras["pair"].family


# --- dead-end tree spaces --------------------------------------------------

def test_deadend_sibling_families_cover():
    ds = resolve("deadend:full3").extras["deadend"]
    fams = [FinSet.decode(ds.discrete.d(p)) for p in ds.space.points(2048)]
    got = alexander_wkl_subcover(ds.subbase, ds.subbase_relation, fams,
                                 depth_bound=64, point_bound=2048)
    assert got.verified and got.height == 8


def test_deadend_heights():
    comb = resolve("deadend:comb4").extras["deadend"]
    fams = [FinSet.decode(comb.discrete.d(p))
            for p in comb.space.points(2048)]
    got = alexander_wkl_subcover(comb.subbase, comb.subbase_relation, fams,
                                 depth_bound=64, point_bound=2048)
    assert got.verified and got.height == 5
    pairt = resolve("deadend:pair").extras["deadend"]
    fams = [FinSet.decode(pairt.discrete.d(p))
            for p in pairt.space.points(2048)]
    got = alexander_wkl_subcover(pairt.subbase, pairt.subbase_relation,
                                 fams, depth_bound=64, point_bound=2048)
    assert got.verified and got.height == 2


def test_deadend_constant_family_walks_forever():
    ds = resolve("deadend:full3").extras["deadend"]
    lone = ds.node_code((0,))
    got = alexander_wkl_subcover(ds.subbase, ds.subbase_relation,
                                 lambda n: FinSet.of([lone]),
                                 depth_bound=64, point_bound=2048)
    assert isinstance(got, InfiniteBranch) and len(got.prefix) == 64


def test_deadend_rejects_ragged_tree():
    from efftop.pathologies import deadend_tree_space
    with pytest.raises(ValueError):
        deadend_tree_space([(0, 1)])  # missing the root and (0,)
