import random

import pytest

from ncgrade.field import QQ
from ncgrade.freealg import (
    GeneratorSet,
    NcPoly,
    compare_deglex,
    format_poly,
    monomials_of_degree,
    parse_poly,
)


@pytest.fixture
def xy():
    return GeneratorSet(["x", "y"])


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet(["x", "x"])
    with pytest.raises(ValueError):
        GeneratorSet(["x"], [0])
    with pytest.raises(ValueError):
        GeneratorSet(["x"], [1, 2])


def test_mul_single_words(xy):
    x = NcPoly.generator(xy, 0)
    y = NcPoly.generator(xy, 1)
    assert (x * y).terms == {(0, 1): QQ.one}


def test_mul_bilinear(xy):
    x = NcPoly.generator(xy, 0)
    y = NcPoly.generator(xy, 1)
    p = (x + y) * (x - y)
    assert p == parse_poly("x^2 - x*y + y*x - y^2", xy)


def test_mul_unit(xy):
    p = parse_poly("3*x*y - y", xy)
    assert NcPoly.one(xy) * p == p
    assert p * NcPoly.one(xy) == p


def test_compare_deglex_degree_first(xy):
    assert compare_deglex(xy, (0,), (0, 1)) == -1


def test_compare_deglex_tiebreak(xy):
    # equal degree: x*y before y*x
    assert compare_deglex(xy, (0, 1), (1, 0)) == -1
    assert compare_deglex(xy, (0, 1), (0, 1)) == 0


def test_monomials_counts():
    g4 = GeneratorSet(["x", "y", "z", "w"])
    assert len(monomials_of_degree(g4, 2)) == 16
    g3 = GeneratorSet(["x"], [3])
    assert monomials_of_degree(g3, 4) == []
    g = GeneratorSet(["x", "y"], [1, 2])
    assert monomials_of_degree(g, 3) == [(0, 0, 0), (0, 1), (1, 0)]


def test_monomial_order_admissible():
    # compatible with concatenation on both sides
    g = GeneratorSet(["x", "y", "z"])
    rng = random.Random(3)
    words = [tuple(rng.randrange(3) for _ in range(rng.randint(0, 4))) for _ in range(30)]
    for u in words:
        for v in words:
            if compare_deglex(g, u, v) >= 0:
                continue
            for w in words[:8]:
                assert compare_deglex(g, w + u, w + v) == -1
                assert compare_deglex(g, u + w, v + w) == -1


def test_mul_associative_random(xy):
    rng = random.Random(11)

    def rand_poly():
        t = {}
        for _ in range(rng.randint(0, 3)):
            w = tuple(rng.randrange(2) for _ in range(rng.randint(0, 3)))
            t[w] = QQ.of(rng.randint(-2, 2))
        return NcPoly(xy, t)

    for _ in range(30):
        p, q, r = rand_poly(), rand_poly(), rand_poly()
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r


def test_degree_and_homogeneity(xy):
    assert parse_poly("x*y + y*x", xy).degree() == 2
    assert parse_poly("x + y*x", xy).degree() is None
    assert NcPoly.zero(xy).degree() is None


def test_parse_coefficients(xy):
    p = parse_poly("3*x*y^2 - 1/2*y", xy)
    assert p.terms[(0, 1, 1)] == QQ.of(3)
    assert p.terms[(1,)] == QQ.of("-1/2")


def test_parse_rejects_unknown_generator(xy):
    with pytest.raises(KeyError):
        parse_poly("x*q", xy)


def test_parse_rejects_garbage(xy):
    with pytest.raises(ValueError):
        parse_poly("x + + y", xy)
    with pytest.raises(ValueError):
        parse_poly("", xy)


def test_format_round_trip(xy):
    for s in ["x^2*y - y*x^2", "1", "-x + 2*y", "3*x*y^2 - 1/2*y"]:
        p = parse_poly(s, xy)
        assert parse_poly(format_poly(p), xy) == p
