import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramspace import Neighborhood, Stem, ell_space, matrix_space, partition_space
from ramspace.errors import (
    EmptyNeighborhoodError,
    MixedSpaceError,
    NotInSpaceError,
    OutOfRangeError,
)


@pytest.fixture(scope="module")
def spaces():
    return [ell_space(6), matrix_space(2, 3), partition_space(4)]


def test_zeroth_approximation_is_empty(spaces):
    for sp in spaces:
        for top in sp.stems():
            assert Stem(sp, top).approx(0) == sp.empty()


def test_length_examples(e8):
    assert e8.empty().length == 0
    assert e8.make((0, 5, 7)).length == 3


def test_partition_length_is_block_count():
    p = partition_space(6)
    assert p.make([(0, 3), (1, 4), (2, 5)]).length == 3


def test_approx_restriction_of_evens():
    e = ell_space(10)
    evens = Stem(e, e.make((0, 2, 4, 6, 8)))
    assert evens.approx(3).payload == (0, 2, 4)
    assert evens.approx(0) == e.empty()


def test_approx_out_of_range(e8):
    stem = Stem(e8, e8.make((1, 3)))
    with pytest.raises(OutOfRangeError):
        stem.approx(3)


def test_chain_lengths(spaces):
    for sp in spaces:
        for top in sp.stems():
            chain = sp.chain(top)
            assert [a.length for a in chain] == list(range(top.length + 1))


def test_fin_leq_examples(e8):
    assert e8.fin_leq(e8.make((2, 6)), e8.make((0, 2, 4, 6)))
    a = e8.make((1, 5))
    assert e8.fin_leq(a, a)


def test_fin_leq_mixed_space_rejected(e8, m24):
    with pytest.raises(MixedSpaceError):
        e8.fin_leq(e8.make((1,)), m24.empty())


def test_fin_below_contains_self_and_empty(spaces):
    for sp in spaces:
        for top in sp.stems():
            below = sp.fin_below(top)
            assert top in below
            assert sp.empty() in below


def test_fin_below_ellentuck_is_all_subsets(e8):
    a = e8.make((1, 2))
    got = {b.payload for b in e8.fin_below(a)}
    assert got == {(), (1,), (2,), (1, 2)}
    assert [b.payload for b in e8.fin_below(e8.empty())] == [()]


def test_fin_below_matches_direct_filter(spaces):
    # Dual route: the per-space enumeration against a filter of the universe.
    for sp in spaces:
        universe = sp.stems()
        for a in universe[:40]:
            direct = {b for b in universe if sp.fin_leq(b, a)}
            assert set(sp.fin_below(a)) == direct


def test_depth_examples():
    e = ell_space(10)
    evens = Stem(e, e.make((0, 2, 4, 6, 8)))
    assert evens.depth(e.make((2, 6))) == 4
    assert evens.depth(e.empty()) == 0
    for n in range(evens.length + 1):
        assert evens.depth(evens.approx(n)) == n


def test_depth_not_in_space(e8):
    stem = Stem(e8, e8.make((0, 2)))
    with pytest.raises(NotInSpaceError):
        stem.depth(e8.make((1,)))


def test_depth_minimality(spaces):
    for sp in spaces:
        for top in sp.stems()[:60]:
            stem = Stem(sp, top)
            for a in sp.fin_below(top):
                d = stem.depth(a)
                assert a.length <= d
                assert sp.fin_leq(a, stem.approx(d))
                if d > 0:
                    assert not sp.fin_leq(a, stem.approx(d - 1))


def test_extensions_examples():
    e = ell_space(6)
    full = e.full_stem()
    got = {b.payload for b in full.extensions(e.make((1,)))}
    assert got == {(1, 2), (1, 3), (1, 4), (1, 5)}

    e10 = ell_space(10)
    evens = Stem(e10, e10.make((0, 2, 4, 6, 8)))
    got = {b.payload for b in evens.extensions(e10.empty())}
    assert got == {(0,), (2,), (4,), (6,), (8,)}


def test_extensions_empty_neighborhood_error(e8):
    stem = Stem(e8, e8.make((0, 2)))
    with pytest.raises(EmptyNeighborhoodError):
        stem.extensions(e8.make((1,)))


def test_extension_members_extend_base(spaces):
    for sp in spaces:
        for top in sp.stems()[:50]:
            stem = Stem(sp, top)
            for a in sp.fin_below(top):
                for b in stem.extensions(a):
                    assert b.length == a.length + 1
                    assert sp.restrict(b, a.length) == a
                    assert sp.fin_leq(b, top)


def test_neighborhood_nonempty_iff_fin_leq(spaces):
    for sp in spaces:
        tops = sp.stems()
        for top in tops[:30]:
            stem = Stem(sp, top)
            for a in tops[:30]:
                nbhd = Neighborhood(stem, a)
                assert nbhd.is_empty == (not sp.fin_leq(a, top))
                if nbhd.is_empty:
                    with pytest.raises(EmptyNeighborhoodError):
                        nbhd.require_nonempty()


def test_neighborhood_stems_pass_through_base(e8):
    full = e8.full_stem()
    a = e8.make((0, 1))
    members = list(Neighborhood(full, a).stems())
    assert all(s.approx(2) == a for s in members)
    # every subset of {2..7} can extend the base
    assert len(members) == 2**6


def test_closure_matches_fin_below(spaces):
    for sp in spaces:
        for top in sp.stems()[:40]:
            assert sp.closure_below(top) == sp.fin_below(top)


@given(st.sets(st.integers(min_value=0, max_value=7), max_size=8))
@settings(max_examples=60, deadline=None, derandomize=True)
def test_fin_leq_quasi_order_sampled(xs):
    e = ell_space(8)
    a = e.make(sorted(xs))
    assert e.fin_leq(a, a)
    for b in e.fin_below(a):
        for c in e.fin_below(b):
            assert e.fin_leq(c, a)


def test_is_maximal(e8):
    assert Stem(e8, e8.make((0, 7))).is_maximal
    assert not Stem(e8, e8.make((0, 3))).is_maximal
    m = matrix_space(2, 2)
    assert Stem(m, m.make_rows([(1, 0), (0, 1)], 2)).is_maximal
    assert not Stem(m, m.make_rows([(1,)], 1)).is_maximal


def test_reducts_are_exactly_fin_below(e8):
    stem = Stem(e8, e8.make((1, 4, 6)))
    reduct_tops = {s.top for s in stem.reducts()}
    assert reduct_tops == set(e8.fin_below(stem.top))
