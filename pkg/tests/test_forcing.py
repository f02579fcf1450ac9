import itertools

import pytest

from ramspace import Stem, ell_space, matrix_space, partition_space
from ramspace.errors import (
    CeilingExceededError,
    EmptyNeighborhoodError,
    FusionExhaustedError,
)
from ramspace.forcing import (
    ACCEPTS,
    ALT1,
    ALT2,
    INCONCLUSIVE,
    REJECTS,
    UNDECIDED,
    EngineParams,
    ForcingEngine,
    FrontFamily,
    GalvinParams,
    accepts,
    decide,
    front_family,
    fusion,
    galvin_search,
    rejects,
    verify_dichotomy,
)


@pytest.fixture(scope="module")
def even_pairs_family():
    e = ell_space(12)
    evens = [x for x in range(12) if x % 2 == 0]
    members = [e.make(p) for p in itertools.combinations(evens, 2)]
    return e, front_family(e, members)


def test_family_sorts_and_validates(e8):
    fam = front_family(e8, [e8.make((3,)), e8.make((1,))])
    assert [m.payload for m in fam.members] == [(1,), (3,)]
    assert fam.length_bound == 1
    with pytest.raises(ValueError):
        FrontFamily(e8, (e8.make((1, 2)),), 1)


def test_accepts_when_base_is_a_member(e12):
    A = e12.full_stem()
    fam = front_family(e12, [e12.make((x,)) for x in range(12)])
    v = accepts(A, e12.make((3,)), fam)
    assert v.kind == ACCEPTS


def test_empty_family_is_rejected_everywhere(e12):
    A = e12.full_stem()
    fam = front_family(e12, [], length_bound=0)
    assert decide(A, e12.make((1,)), fam).kind == REJECTS
    assert decide(A, e12.empty(), fam).kind == REJECTS


def test_rejects_odd_base_against_even_pairs(even_pairs_family):
    e, fam = even_pairs_family
    A = e.full_stem()
    v = rejects(A, e.make((1,)), fam)
    assert v.kind == REJECTS
    # the same verdict comes out of the accepts entry point: not accepts
    assert accepts(A, e.make((1,)), fam).kind == REJECTS


def test_odds_stem_does_not_accept_odd_base(even_pairs_family):
    e, fam = even_pairs_family
    odds = Stem(e, e.make(tuple(range(1, 12, 2))))
    assert accepts(odds, e.make((1,)), fam).kind != ACCEPTS


def test_member_is_never_rejected(e12):
    A = e12.full_stem()
    fam = front_family(e12, [e12.make((2, 5))])
    assert rejects(A, e12.make((2, 5)), fam).kind == ACCEPTS


def test_decide_empty_base(e12):
    A = e12.full_stem()
    all_singletons = front_family(e12, [e12.make((x,)) for x in range(12)])
    assert decide(A, e12.empty(), all_singletons).kind == ACCEPTS
    assert decide(A, e12.empty(), front_family(e12, [], length_bound=0)).kind == REJECTS


def test_verdict_requires_nonempty_neighborhood(e8):
    stem = Stem(e8, e8.make((0, 2)))
    fam = front_family(e8, [e8.make((0,))])
    with pytest.raises(EmptyNeighborhoodError):
        decide(stem, e8.make((1,)), fam)


def test_accepts_and_rejects_mutually_exclusive(e8):
    full = e8.full_stem()
    pool = [e8.empty()] + [e8.make((x,)) for x in range(4)]
    fams = [front_family(e8, c, length_bound=2) for c in itertools.combinations(pool, 2)]
    for fam in fams:
        eng = ForcingEngine(fam)
        for top in e8.fin_below(full.top)[:40]:
            stem = Stem(e8, top)
            for a in e8.fin_below(top):
                if a.length > 2:
                    continue
                v = eng.verdict(stem, a)
                assert v.kind in (ACCEPTS, REJECTS, UNDECIDED)


def test_undecided_carries_boundary_diagnostics():
    e = ell_space(4)
    # The chain stuck at {3} can still meet {3, x}-shaped members only
    # beyond the truncated stem, so small stems stay undecided.
    fam = front_family(e, [e.make((1, 2))])
    v = decide(Stem(e, e.make((1,))), e.make((1,)), fam)
    assert v.kind == UNDECIDED
    assert "boundary" in v.diagnostics or "question open" in v.diagnostics


def test_horizon_below_base_length_is_an_error(e8):
    fam = front_family(e8, [e8.make((1, 2))])
    eng = ForcingEngine(fam, EngineParams(horizon=1))
    with pytest.raises(ValueError):
        eng.verdict(e8.full_stem(), e8.make((1, 2)))


def test_fuel_capped_walk_is_undecided(e8):
    # With fuel below the family bound, clean chains cannot certify
    # avoidance, so the verdict stays undecided.
    fam = front_family(e8, [e8.make((1, 2))])
    v = decide(e8.full_stem(), e8.make((3,)), fam, horizon=1)
    assert v.kind == UNDECIDED
    # with full fuel the same base is definitively rejecting
    assert decide(e8.full_stem(), e8.make((3,)), fam).kind == REJECTS


def test_galvin_horizon_validation(e8):
    fam = front_family(e8, [e8.make((1, 2))])
    with pytest.raises(ValueError):
        galvin_search(e8.full_stem(), fam, GalvinParams(horizon=1))


def test_rejection_witness_exists_when_rejecting(even_pairs_family):
    e, fam = even_pairs_family
    A = e.full_stem()
    eng = ForcingEngine(fam)
    a = e.make((1,))
    assert eng.verdict(A, a).kind == REJECTS
    w = eng.rejection_witness(A, a)
    assert w is not None
    for b in w.space.extensions_below(a, w.top):
        assert eng.chain_status(A.top, b).name != "ALL_HIT"


# ----- fusion -----


def test_fusion_identity_step(e12):
    A = e12.full_stem()
    assert fusion(A, lambda n, cur: cur, 5).top == A.top


def test_fusion_parity_steps(e12):
    A = e12.full_stem()

    def step(n, cur):
        pay = cur.top.payload
        if len(pay) < n:
            return cur
        head, tail = pay[:n], pay[n:]
        kept = head + tuple(x for x in tail if x % 2 != n % 2)
        return Stem(e12, e12.make(kept))

    levels = []
    cur = A
    for n in range(1, 5):
        cur = step(n, cur)
        levels.append(cur)
    diagonal = fusion(A, step, 4)
    for n, stem in enumerate(levels, start=1):
        if diagonal.length >= n and stem.length >= n:
            assert diagonal.approx(n) == stem.approx(n)


def test_fusion_exhaustion_reports_level(e12):
    A = e12.full_stem()
    with pytest.raises(FusionExhaustedError) as exc:
        fusion(A, lambda n, cur: None if n == 2 else cur, 5)
    assert exc.value.level == 2


def test_fusion_rejects_non_reducts(e12):
    A = Stem(e12, e12.make((0, 1, 2)))

    def bad(n, cur):
        return Stem(e12, e12.make((0, 1, 2, 3)))

    with pytest.raises(FusionExhaustedError):
        fusion(A, bad, 2)


def test_fusion_rejects_prefix_breakers(e12):
    A = e12.full_stem()

    def bad(n, cur):
        pay = cur.top.payload
        return Stem(e12, e12.make(pay[1:]))  # drops the preserved head

    with pytest.raises(FusionExhaustedError):
        fusion(A, bad, 3)


# ----- the dichotomy -----


def test_galvin_empty_family_gives_alt1_ambient(e12):
    A = e12.full_stem()
    res = galvin_search(A, front_family(e12, [], length_bound=0))
    assert res.outcome == ALT1
    assert res.stem.top == A.top
    assert verify_dichotomy(res.certificate)


def test_galvin_all_singletons_gives_alt2_ambient(e12):
    A = e12.full_stem()
    fam = front_family(e12, [e12.make((x,)) for x in range(12)])
    res = galvin_search(A, fam)
    assert res.outcome == ALT2
    assert res.stem.top == A.top
    assert verify_dichotomy(res.certificate)


def test_galvin_even_singletons_small_ground():
    e = ell_space(8)
    fam = front_family(e, [e.make((x,)) for x in range(0, 8, 2)])
    res = galvin_search(e.full_stem(), fam)
    assert res.outcome == ALT1
    assert res.stem.top.payload == (1, 3, 5, 7)
    assert verify_dichotomy(res.certificate)


def test_galvin_even_singletons_large_ground_greedy_path():
    e = ell_space(20)
    fam = front_family(e, [e.make((x,)) for x in range(0, 20, 2)])
    res = galvin_search(e.full_stem(), fam)
    assert res.outcome == ALT1
    assert res.stem.top.payload == tuple(range(1, 20, 2))
    assert verify_dichotomy(res.certificate)


def test_galvin_certificates_are_deterministic(e12):
    fam = front_family(e12, [e12.make((x,)) for x in range(0, 12, 3)])
    A = e12.full_stem()
    first = galvin_search(A, fam).certificate
    second = galvin_search(A, fam).certificate
    assert first == second


def test_galvin_alternatives_never_both_verify(even_pairs_family):
    e, fam = even_pairs_family
    res = galvin_search(e.full_stem(), fam)
    assert res.outcome in (ALT1, ALT2)
    assert verify_dichotomy(res.certificate)
    flipped = res.certificate.replace(
        "outcome=ALT1", "outcome=ALT2"
    ) if res.outcome == ALT1 else res.certificate.replace(
        "outcome=ALT2", "outcome=ALT1"
    )
    assert not verify_dichotomy(flipped)


def test_galvin_matrix_space():
    m = matrix_space(2, 3)
    fam = front_family(m, [m.make_rows([(1,)], 1)])
    res = galvin_search(m.identity_stem(), fam)
    assert res.outcome == ALT1
    assert verify_dichotomy(res.certificate)
    assert not m.fin_leq(fam.members[0], res.stem.top)


def test_galvin_partition_space():
    p = partition_space(4)
    fam = front_family(p, [p.make([(0,), (1,)])])
    res = galvin_search(p.discrete_stem(), fam)
    assert res.outcome == ALT1
    assert verify_dichotomy(res.certificate)


def test_galvin_short_seed_family():
    # The only rejecting seed is a one-element stem shorter than the
    # family bound; the level loop must clamp its preserved prefix.
    e = ell_space(4)
    fam = front_family(
        e, [e.make((0,)), e.make((1,)), e.make((2,))], length_bound=3
    )
    res = galvin_search(e.full_stem(), fam)
    assert res.outcome == ALT1
    assert res.stem.top.payload == (3,)
    assert verify_dichotomy(res.certificate)


def test_galvin_boundary_lurking_family_falls_back_to_direct_scan():
    # Every candidate preserving a 0-prefix has members lurking just
    # beyond its frontier, so the rejecting sequence strands; the
    # down-set claim for {0,1,2} is still directly certifiable.
    e = ell_space(4)
    members = [e.make(x) for x in [(3,), (0, 3), (0, 2, 3), (0, 1, 3)]]
    res = galvin_search(e.full_stem(), front_family(e, members, length_bound=3))
    assert res.outcome == ALT1
    assert res.stem.top.payload == (0, 1, 2)
    assert res.stats.get("direct_scan") == 1
    assert verify_dichotomy(res.certificate)


def test_galvin_refuses_when_greedy_disabled():
    e = ell_space(20)
    fam = front_family(e, [e.make((0,))])
    with pytest.raises(CeilingExceededError):
        galvin_search(
            e.full_stem(), fam, GalvinParams(max_reducts=64, allow_greedy=False)
        )


def test_galvin_inconclusive_on_unsupported_greedy():
    p = partition_space(5)
    fam = front_family(p, [p.make([(0,), (1,)])])
    res = galvin_search(
        p.discrete_stem(), fam, GalvinParams(max_reducts=3, allow_greedy=True)
    )
    assert res.outcome == INCONCLUSIVE
    assert res.diagnostics


def test_verify_dichotomy_rejects_malformed():
    assert not verify_dichotomy("")
    assert not verify_dichotomy("galvin-certificate v1\nnonsense")


def test_verify_dichotomy_rejects_tampered_stem(e12):
    fam = front_family(e12, [e12.make((x,)) for x in range(0, 12, 2)])
    res = galvin_search(e12.full_stem(), fam)
    assert res.outcome == ALT1
    tampered = res.certificate.replace(
        "stem=" + res.stem.serialize(), "stem={0,1,3,5,7,9,11}"
    )
    assert not verify_dichotomy(tampered)


def test_verify_dichotomy_rejects_non_reduct_stem(e12):
    fam = front_family(e12, [], length_bound=0)
    res = galvin_search(Stem(e12, e12.make((0, 1, 2))), fam)
    tampered = res.certificate.replace("stem={0,1,2}", "stem={0,1,2,3}")
    assert not verify_dichotomy(tampered)


def test_alt2_certificate_lists_chain_hits(e12):
    fam = front_family(e12, [e12.make((x,)) for x in range(12)])
    res = galvin_search(e12.full_stem(), fam)
    lines = res.certificate.splitlines()
    chain_lines = [ln for ln in lines if ln.startswith("chain=")]
    assert len(chain_lines) == 12
    assert all(";hit=1" in ln for ln in chain_lines)
