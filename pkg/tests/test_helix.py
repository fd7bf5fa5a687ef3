import pytest

from ncgrade.algebra import quasi_veronese
from ncgrade.gradedmod import is_isomorphic
from ncgrade.helix import (
    MissingNuError,
    MutationError,
    ObjectHandle,
    check_geometric_helix,
    check_relative_exceptional,
    classify_standard,
    left_mutation,
    regularity_evidence,
    right_mutation,
    section_algebra,
    tails_ext,
)

H = ObjectHandle.parse


def standard_rule(n):
    if n % 2 == 0:
        return ObjectHandle([("A", n // 2)])
    return ObjectHandle([("X", (n - 1) // 2)])


def blocked_rule(j):
    return ObjectHandle([("A", j), ("X", j)])


# handles


def test_handle_parse():
    h = H("A(-1)+X(2)")
    assert h.atoms == (("A", -1), ("X", 2))
    assert repr(H("A")) == "A"


# tails ext values


def test_ext2_of_line_with_itself(pipeline):
    # Serre reduction with identity twist: dual of the degree-0 endomorphisms
    d, cert = tails_ext(pipeline, H("A"), H("A"), 2, -2)
    assert (d, cert) == (1, True)


def test_ext2_vanishing_range(pipeline):
    for j in range(-2, 3):
        d, cert = tails_ext(pipeline, H("X"), H("Y"), 2, j)
        assert cert and d == 0


def test_ext_q3_is_zero(pipeline):
    for j in range(-6, 3):
        assert tails_ext(pipeline, H("X"), H("Y"), 3, j) == (0, True)
        assert tails_ext(pipeline, H("A"), H("X"), 5, j) == (0, True)


def test_hom_values_through_tails(pipeline):
    assert tails_ext(pipeline, H("A"), H("X"), 0) == (2, True)
    assert tails_ext(pipeline, H("X"), H("A"), 0) == (0, True)
    assert tails_ext(pipeline, H("X"), H("X"), 0) == (1, True)


def test_serre_symmetry_invariant(pipeline):
    # Ext^2(M(i), N(j)) agrees with the complementary-degree Hom dimension
    for b1 in ("A", "X", "Y"):
        for b2 in ("A", "X", "Y"):
            hom = pipeline.table("hom", b2, b1)
            for i in range(-1, 2):
                for j in range(-1, 2):
                    d, cert = pipeline.atom_ext((b1, i), (b2, j), 2)
                    rel = i - j - 2
                    expect = hom.values.get(rel, 0 if rel < -9 else None)
                    if cert and hom.certified.get(rel, rel < -9):
                        assert d == expect


def test_missing_nu_blocks_q2(sigma_pipeline):
    with pytest.raises(MissingNuError):
        tails_ext(sigma_pipeline, H("X"), H("X"), 2, 0)


# exceptional sequences


def test_main_sequence_passes(pipeline):
    rep = check_relative_exceptional(
        pipeline, [H("A(-1)"), H("X(-1)"), H("A"), H("X")]
    )
    assert rep["pass"], rep["failures"]
    assert rep["conditions"]["RE2"] is True
    assert rep["conditions"]["RE3"] is True


def test_repeated_object_fails_re3(pipeline):
    rep = check_relative_exceptional(pipeline, [H("A"), H("A")])
    assert not rep["pass"]
    assert any("(RE3)" in f for f in rep["failures"])


def test_backward_hom_fails_re3(pipeline):
    rep = check_relative_exceptional(pipeline, [H("X"), H("A")])
    assert not rep["pass"]
    assert any("Ext^0(A, X) = 2" in f for f in rep["failures"])


def test_blocked_object_re1_triangular(pipeline):
    rep = check_relative_exceptional(pipeline, [blocked_rule(0)])
    assert rep["conditions"]["RE1"][0]["ok"]
    assert "triangular" in rep["conditions"]["RE1"][0]["condition"]


# helices


def test_standard_helix_period4(pipeline):
    rep = check_geometric_helix(pipeline, standard_rule, 4, (-4, 8))
    assert rep["pass"], rep["failures"]
    assert rep["geometric"] is True


def test_blocked_helix_period2(pipeline):
    rep = check_geometric_helix(pipeline, blocked_rule, 2, (-2, 4))
    assert rep["pass"], rep["failures"]


def test_blocked_consistency(pipeline):
    full = check_geometric_helix(pipeline, standard_rule, 4, (-4, 8))
    blocked = check_geometric_helix(pipeline, blocked_rule, 2, (-2, 4))
    assert full["pass"] == blocked["pass"]


def test_constant_rule_fails_h2(pipeline):
    rep = check_geometric_helix(pipeline, lambda i: H("A"), 1, (0, 3))
    assert not rep["pass"]
    assert any("(H2)" in f for f in rep["failures"])


# mutations


def test_left_mutation_lemma(pipeline):
    for i in (0, 1):
        L = left_mutation(pipeline, H("A(%d)" % i), H("Y(%d)" % i))
        expect = pipeline.module_of(H("X(%d)" % (i - 1)))
        assert is_isomorphic(L, expect)


def test_left_mutation_of_identity_pair_is_zero(pipeline):
    L = left_mutation(pipeline, H("A"), H("A"))
    assert all(L.dim(d) == 0 for d in range(0, 6))


def test_right_mutation_recovers(pipeline):
    R = right_mutation(pipeline, H("A"), H("X(-1)"))
    assert is_isomorphic(R, pipeline.module_of(H("Y")))


def test_mutation_round_trip(pipeline):
    # L then R on the pair (A(i), Y(i)) returns Y(i): module-level round trip
    for i in (0, 1):
        L = left_mutation(pipeline, H("A(%d)" % i), H("Y(%d)" % i))
        # L is X(i-1); right-mutate it by A(i)
        R = right_mutation(pipeline, H("A(%d)" % i), H("X(%d)" % (i - 1)))
        assert is_isomorphic(R, pipeline.module_of(H("Y(%d)" % i)))
        assert is_isomorphic(L, pipeline.module_of(H("X(%d)" % (i - 1))))


def test_mutation_concentration_guard(pipeline):
    # Hom(X, Y) is not concentrated: Ext^1(X, Y(-1)) != 0
    with pytest.raises(MutationError):
        left_mutation(pipeline, H("X"), H("Y(-1)"))


# standardness


def test_classify_commutative_standard(pipeline):
    rep = classify_standard(pipeline)
    assert rep["classification"] == "standard"
    assert rep["witnesses"]["syzygyY(1) ~ X"] is True


def test_classify_twisted_nonstandard(sigma_pipeline):
    rep = classify_standard(sigma_pipeline)
    assert rep["classification"] == "non-standard"


def test_classify_swapped_labels(S_pres):
    from ncgrade.helix import QuadricPipeline
    from conftest import M_MATRIX, N_MATRIX

    swapped = QuadricPipeline(S_pres, "x*w - y*z", N_MATRIX, M_MATRIX, nu="identity")
    assert classify_standard(swapped)["classification"] == "standard"


# section algebra


def test_section_algebra_blocks(section_B):
    assert section_B.meta["degree0_blocks"] == [[1, 2], [0, 1]]
    assert section_B.dims[0] == 4


def test_section_algebra_dims(section_B):
    assert section_B.dims[:3] == [4, 16, 36]
    # 4 x the quotient series, every certified degree
    assert section_B.dims == [4 * (i + 1) ** 2 for i in range(7)]


def test_section_algebra_associative(section_B):
    assert section_B.check_associativity(120)


def test_section_algebra_single_part(pipeline):
    B = section_algebra([("A", pipeline.base("A"))], 5)
    assert B.dims == [1, 4, 9, 16, 25, 36]
    tab = pipeline.a_tab
    for d in range(3):
        for e in range(3 - d):
            for i in range(tab.dim(d)):
                for j in range(tab.dim(e)):
                    assert B.mult(d, e, i, j) == tab.mult(d, e, i, j)


def test_section_algebra_rejects_non_mcm(pipeline):
    from ncgrade.gradedmod import trivial_quotient_module

    k = trivial_quotient_module(pipeline.a_tab)
    with pytest.raises(ValueError):
        section_algebra([("k", k)], 3)


# regularity evidence


def test_regularity_of_polynomial_ambient(S_pres):
    rep = regularity_evidence(S_pres.tabulate(), 5)
    assert rep["evidence"]
    assert (rep["d"], rep["ell"]) == (4, 4)
    assert rep["sides"]["right"]["resolution_completed"]


def test_regularity_counterexample(poly3_pres):
    qv = quasi_veronese(poly3_pres.tabulate(), 2)
    rep = regularity_evidence(qv, 3)
    assert not rep["evidence"]
    assert rep["failures"]


def test_regularity_of_section_algebra(section_B):
    rep = regularity_evidence(section_B, 4)
    assert rep["evidence"], rep["failures"]
    assert (rep["d"], rep["ell"]) == (3, 2)
    right = rep["sides"]["right"]
    assert right["ext"][3]["nonzero"] == {-2: 4}
    assert right["ext"][4]["nonzero"] == {}
