import random

import pytest

from ncgrade.field import QQ
from ncgrade.freealg import GeneratorSet, NcPoly, parse_poly
from ncgrade.groebner import GroebnerBasis, Ideal, TruncationError, buchberger_truncated

from conftest import brute_force_quotient_dim, polys, COMMUTATORS, XYZW


def test_ideal_rejects_inhomogeneous():
    g = GeneratorSet(["x", "y"])
    with pytest.raises(ValueError):
        Ideal(g, [parse_poly("x + y*x", g)])


def test_commutators_complete_basis(S_pres):
    gb = S_pres.gb
    # all overlaps resolve; the six commutators are already the reduced basis
    assert len(gb.elements) == 6
    assert S_pres.dims() == [1, 4, 10, 20, 35, 56, 84, 120, 165]


def test_quadric_quotient_normal_words(A_pres):
    assert [A_pres.dim(d) for d in range(5)] == [1, 4, 9, 16, 25]
    assert A_pres.dim(2) == 9


def test_cubic_normal_word_counts(cubic_pres):
    assert [cubic_pres.dim(d) for d in range(6)] == [1, 2, 4, 6, 9, 12]


def test_normal_words_degree_zero(S_pres):
    assert S_pres.gb.normal_words(0) == [()]


def test_commutative_degree3_count(S_pres):
    assert len(S_pres.gb.normal_words(3)) == 20


def test_normal_form_of_generators_is_zero(S_pres):
    for rel in S_pres.relations:
        assert S_pres.nf(rel).is_zero()


def test_normal_form_fixes_normal_words(S_pres):
    p = parse_poly("x*y*z", XYZW)
    assert S_pres.nf(p) == p


def test_normal_form_straightens(S_pres):
    assert S_pres.nf(parse_poly("y*x", XYZW)) == parse_poly("x*y", XYZW)


def test_normal_form_idempotent_and_linear(S_pres):
    rng = random.Random(5)
    words4 = S_pres.gens, 4

    def rand_poly():
        t = {}
        for _ in range(rng.randint(1, 4)):
            w = tuple(rng.randrange(4) for _ in range(3))
            t[w] = QQ.of(rng.randint(-3, 3))
        return NcPoly(XYZW, t)

    for _ in range(20):
        p, q = rand_poly(), rand_poly()
        np_, nq = S_pres.nf(p), S_pres.nf(q)
        assert S_pres.nf(np_) == np_
        assert S_pres.nf(p + q) == np_ + nq


def test_truncation_guard(S_pres):
    big = NcPoly.monomial(XYZW, (0,) * 9)
    with pytest.raises(TruncationError):
        S_pres.nf(big)
    with pytest.raises(TruncationError):
        S_pres.gb.normal_words(9)


def test_reduced_basis_no_lead_divisibility(Asigma_pres):
    gb = Asigma_pres.gb
    lws = gb.leading_words()
    for i, u in enumerate(lws):
        for j, v in enumerate(lws):
            if i == j:
                continue
            # v must not occur inside u
            n, m = len(u), len(v)
            assert all(u[k : k + m] != v for k in range(n - m + 1))


def test_processing_order_independence(S_pres):
    # same reduced basis when generators arrive in a different order
    rels = list(reversed(polys(XYZW, COMMUTATORS)))
    gb2 = buchberger_truncated(Ideal(XYZW, rels), 8)
    assert [str(e) for e in gb2.elements] == [str(e) for e in S_pres.gb.elements]


@pytest.mark.parametrize("degree", [2, 3, 4, 5])
def test_brute_force_oracle_commutative(S_pres, degree):
    assert S_pres.dim(degree) == brute_force_quotient_dim(S_pres, degree)


@pytest.mark.parametrize("degree", [2, 3, 4, 5])
def test_brute_force_oracle_quadric(A_pres, degree):
    assert A_pres.dim(degree) == brute_force_quotient_dim(A_pres, degree)


@pytest.mark.parametrize("degree", [3, 4, 5, 6])
def test_brute_force_oracle_cubic(cubic_pres, degree):
    assert cubic_pres.dim(degree) == brute_force_quotient_dim(cubic_pres, degree)


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_brute_force_oracle_twisted(Asigma_pres, degree):
    assert Asigma_pres.dim(degree) == brute_force_quotient_dim(Asigma_pres, degree)


def test_empty_ideal_free_algebra():
    g = GeneratorSet(["x"], [3])
    gb = GroebnerBasis(g, [], 9)
    assert [len(gb.normal_words(d)) for d in range(10)] == [1, 0, 0, 1, 0, 0, 1, 0, 0, 1]


def test_groebner_over_prime_field(S_pres):
    from ncgrade.field import PrimeField

    f = PrimeField(101)
    g = XYZW
    rels = [parse_poly(s, g, f) for s in COMMUTATORS + ["x*w - y*z"]]
    gb = buchberger_truncated(Ideal(g, rels, f), 6)
    assert [len(gb.normal_words(d)) for d in range(5)] == [1, 4, 9, 16, 25]
