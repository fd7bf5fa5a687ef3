import pytest

from ncgrade.field import QQ
from ncgrade.gradedmod import (
    CokerModule,
    FreeModule,
    Presentation,
    SumModule,
    WindowError,
    ext_graded,
    euler_check,
    hom_graded,
    is_isomorphic,
    mcm_check,
    minimal_free_cover,
    module_from_presentation,
    resolve,
    shift,
    syzygy,
    trivial_quotient_module,
    twist_by_auto,
    verify_mf,
)

from conftest import M_MATRIX, N_MATRIX


@pytest.fixture(scope="module")
def quadric(pipeline):
    return pipeline.a_tab, pipeline.base("A"), pipeline.base("X"), pipeline.base("Y")


# construction


def test_free_module_is_algebra(quadric):
    tab, A, X, Y = quadric
    assert [A.dim(d) for d in range(4)] == [1, 4, 9, 16]
    assert A.generators() == [(0, {0: QQ.one})]


def test_zero_presentation_gives_free(quadric):
    tab, A, X, Y = quadric
    pres = Presentation([0], [], [[]])
    M = module_from_presentation(tab, pres)
    assert [M.dim(d) for d in range(4)] == [1, 4, 9, 16]


def test_cokernel_dims(quadric):
    tab, A, X, Y = quadric
    assert [X.dim(d) for d in range(4)] == [2, 6, 12, 20]
    assert [Y.dim(d) for d in range(4)] == [2, 6, 12, 20]
    assert X.hilbert_window().coeffs == [(i + 1) * (i + 2) for i in range(9)]


def test_shift_and_twist_trivia(quadric):
    tab, A, X, Y = quadric
    assert shift(A, 0) is A
    sx = shift(X, -1)
    assert [sx.dim(d) for d in (1, 2)] == [2, 6]
    from ncgrade.algebra import DegreewiseMaps

    ident = DegreewiseMaps.identity(tab.dims, QQ)
    assert twist_by_auto(X, ident) is X


# minimal covers and generators


def test_cover_shifted_free(quadric):
    tab, A, X, Y = quadric
    f2 = FreeModule(tab, [2])
    assert [d for d, _ in f2.generators()] == [2]


def test_cover_cokernel_two_generators(quadric):
    tab, A, X, Y = quadric
    gens = minimal_free_cover(X).gens
    assert [d for d, _ in gens] == [0, 0]


def test_cover_direct_sum_additive(quadric):
    tab, A, X, Y = quadric
    m = SumModule([X, FreeModule(tab, [1])])
    assert sorted(d for d, _ in m.generators()) == [0, 0, 1]


# syzygies


def test_syzygy_of_free_is_zero(quadric):
    tab, A, X, Y = quadric
    s = syzygy(FreeModule(tab, [0, 2]))
    assert all(s.dim(d) == 0 for d in range(s.lo, s.hi + 1))


def test_syzygy_standard_swap(quadric):
    tab, A, X, Y = quadric
    assert is_isomorphic(syzygy(X), shift(Y, -1))


def test_syzygy_hilbert_identity(quadric):
    tab, A, X, Y = quadric
    s = syzygy(X)
    cover = FreeModule(tab, [0, 0])
    for d in range(0, s.hi + 1):
        assert s.dim(d) == cover.dim(d) - X.dim(d)


def test_syzygy_twisted_fixes(sigma_pipeline):
    Xs = sigma_pipeline.base("X")
    assert is_isomorphic(shift(syzygy(Xs), 1), Xs)


def test_syzygy_shift_compatible(quadric):
    tab, A, X, Y = quadric
    assert is_isomorphic(syzygy(shift(X, 2)), shift(syzygy(X), 2))


def test_two_periodicity(quadric, sigma_pipeline):
    tab, A, X, Y = quadric
    assert is_isomorphic(syzygy(syzygy(X)), shift(X, -2))
    Xs = sigma_pipeline.base("X")
    assert is_isomorphic(syzygy(syzygy(Xs)), shift(Xs, -2))


# resolutions


def test_koszul_resolution_of_k(S_pres):
    tab = S_pres.tabulate()
    res = resolve(trivial_quotient_module(tab), 5)
    assert res.betti() == [{0: 1}, {1: 4}, {2: 6}, {3: 4}, {4: 1}]
    assert res.completed
    assert euler_check(res)


def test_periodic_resolution_shape(quadric):
    tab, A, X, Y = quadric
    res = resolve(X, 4)
    assert res.betti() == [{0: 2}, {1: 2}, {2: 2}, {3: 2}, {4: 2}]
    assert euler_check(res)


def test_twisted_periodic_resolution(sigma_pipeline):
    res = resolve(sigma_pipeline.base("X"), 4)
    assert res.betti() == [{0: 2}, {1: 2}, {2: 2}, {3: 2}, {4: 2}]
    # constant matrix: consecutive maps have identical entries
    assert res.mats[1] == res.mats[2]


def test_generic_resolution_agrees_with_periodic(quadric):
    tab, A, X, Y = quadric
    generic = resolve(X, 3, pad=False)
    # strip the attached periodic resolution to force the cover machinery
    X2 = CokerModule(tab, [0, 0], [1, 1], X.entries, name="X2")
    res = resolve(X2, 3)
    assert res.betti() == generic.betti()
    assert euler_check(res)


# hom and ext tables


def test_hom_free_source(quadric):
    tab, A, X, Y = quadric
    t = hom_graded(A, X, range(0, 3))
    assert t.values == {0: 2, 1: 6, 2: 12}


def test_hom_tables_match_reference(quadric):
    tab, A, X, Y = quadric
    assert hom_graded(X, A, range(0, 3)).values == {0: 0, 1: 2, 2: 6}
    assert hom_graded(X, X, range(0, 3)).values == {0: 1, 1: 4, 2: 9}
    assert hom_graded(X, Y, range(0, 4)).values == {0: 0, 1: 3, 2: 8, 3: 15}


def test_ext_tables_match_reference(quadric):
    tab, A, X, Y = quadric
    window = range(-5, 6)
    assert ext_graded(X, A, 1, window).nonzero() == {}
    assert ext_graded(X, X, 1, window).nonzero() == {}
    assert ext_graded(X, Y, 1, window).nonzero() == {-1: 1}


def test_ext_window_certification(quadric):
    tab, A, X, Y = quadric
    t = ext_graded(X, Y, 1, range(5, 9))
    assert not t.certified[8]
    assert 8 not in t.values


def test_hom_additive_over_sums(quadric):
    tab, A, X, Y = quadric
    both = SumModule([X, A])
    t = hom_graded(both, Y, range(0, 3))
    tx = hom_graded(X, Y, range(0, 3))
    ta = hom_graded(A, Y, range(0, 3))
    for d in range(0, 3):
        assert t.values[d] == tx.values[d] + ta.values[d]


def test_ext_independent_of_padding(quadric):
    tab, A, X, Y = quadric
    padded = resolve(X, 2, pad=True)
    assert padded.betti()[0] != resolve(X, 2).betti()[0]
    t = ext_graded(X, Y, 1, range(-5, 6), res=padded)
    assert t.nonzero() == {-1: 1}


def test_hom_basis_maps_are_module_maps(quadric):
    tab, A, X, Y = quadric
    t = hom_graded(X, Y, [1], with_basis=True)
    maps = t.basis[1]
    assert len(maps) == 3
    for mp in maps:
        for d in range(0, 4):
            for i in range(X.dim(d)):
                for e in range(1, 3):
                    for j in range(tab.dim(e)):
                        left = mp.apply(d + e, X.act_basis(d, i, e, j))
                        right = Y.act_vec(d + 1, mp.apply(d, {i: QQ.one}), e, j)
                        assert left == right


# MCM checks


def test_free_is_mcm(quadric):
    tab, A, X, Y = quadric
    ok, _ = mcm_check(A)
    assert ok


def test_mf_cokernels_are_mcm(quadric):
    tab, A, X, Y = quadric
    assert mcm_check(X)[0] and mcm_check(Y)[0]


def test_trivial_module_not_mcm(quadric):
    tab, A, X, Y = quadric
    ok, offending = mcm_check(trivial_quotient_module(tab), 3)
    assert not ok
    assert offending == {3: {-2: 1}}


# isomorphism tests


def test_iso_reflexive(quadric):
    tab, A, X, Y = quadric
    assert is_isomorphic(X, X)


def test_iso_distinguishes_pair(quadric):
    tab, A, X, Y = quadric
    assert not is_isomorphic(X, Y)


def test_iso_syzygy_shift(quadric):
    tab, A, X, Y = quadric
    assert is_isomorphic(shift(syzygy(X), 1), Y)
    assert not is_isomorphic(shift(syzygy(X), 1), X)


def test_iso_window_guard(quadric):
    tab, A, X, Y = quadric
    # windows of X(20) and Y do not overlap: nothing can be certified
    with pytest.raises(WindowError):
        is_isomorphic(shift(X, 20), Y)


# matrix factorizations


def test_verify_mf_commutative(S_pres):
    ok, reason = verify_mf(S_pres, "x*w - y*z", M_MATRIX, N_MATRIX)
    assert ok, reason


def test_verify_mf_twisted_squares(Ssigma_pres):
    assert verify_mf(Ssigma_pres, "x^2 + y*z", M_MATRIX, M_MATRIX)[0]
    assert verify_mf(Ssigma_pres, "x^2 + y*z", N_MATRIX, N_MATRIX)[0]


def test_verify_mf_wrong_pair_fails(S_pres):
    ok, reason = verify_mf(S_pres, "x*w - y*z", M_MATRIX, M_MATRIX)
    assert not ok and reason


def test_verify_mf_degenerate_rejected(S_pres):
    ok, reason = verify_mf(S_pres, "x*w", [["1"]], [["1"]])
    assert not ok and "degree 1" in reason
    ok2, reason2 = verify_mf(S_pres, "x", M_MATRIX, N_MATRIX)
    assert not ok2 and "degree 2" in reason2


def test_verify_mf_shape_guard(S_pres):
    with pytest.raises(ValueError):
        verify_mf(S_pres, "x*w - y*z", [["x", "y"]], N_MATRIX)
