import pytest

from ncgrade.algebra import PresentedAlgebra, quotient_by_central
from ncgrade.freealg import GeneratorSet, parse_poly
from ncgrade.helix import QuadricPipeline
from ncgrade.linalg import sparse_rank
from ncgrade.freealg import monomials_of_degree


XYZW = GeneratorSet(["x", "y", "z", "w"])

COMMUTATORS = [
    "y*x - x*y", "z*x - x*z", "w*x - x*w",
    "z*y - y*z", "w*y - y*w", "w*z - z*w",
]

SIGMA_RELATIONS = [
    "x*y + y*w", "x*z + z*w", "x^2 - w^2",
    "y*z - z*y", "y*x + w*y", "z*x + w*z",
]

M_MATRIX = [["x", "y"], ["z", "w"]]
N_MATRIX = [["w", "-y"], ["-z", "x"]]


def polys(gens, strings):
    return [parse_poly(s, gens) for s in strings]


@pytest.fixture(scope="session")
def S_pres():
    return PresentedAlgebra(XYZW, polys(XYZW, COMMUTATORS), 8)


@pytest.fixture(scope="session")
def A_pres(S_pres):
    return quotient_by_central(S_pres, "x*w - y*z")


@pytest.fixture(scope="session")
def Ssigma_pres():
    return PresentedAlgebra(XYZW, polys(XYZW, SIGMA_RELATIONS), 8)


@pytest.fixture(scope="session")
def Asigma_pres(Ssigma_pres):
    return quotient_by_central(Ssigma_pres, "x^2 + y*z")


@pytest.fixture(scope="session")
def cubic_pres():
    g = GeneratorSet(["x", "y"])
    return PresentedAlgebra(g, polys(g, ["x^2*y - y*x^2", "x*y^2 - y^2*x"]), 8)


@pytest.fixture(scope="session")
def poly3_pres():
    g = GeneratorSet(["x"], [3])
    return PresentedAlgebra(g, [], 11)


@pytest.fixture(scope="session")
def pipeline(S_pres):
    return QuadricPipeline(S_pres, "x*w - y*z", M_MATRIX, N_MATRIX, nu="identity")


@pytest.fixture(scope="session")
def sigma_pipeline(Ssigma_pres):
    return QuadricPipeline(
        Ssigma_pres, "x^2 + y*z", M_MATRIX, N_MATRIX, nu="none", split=True
    )


@pytest.fixture(scope="session")
def section_B(pipeline):
    from ncgrade.helix import section_algebra

    return section_algebra([("A", pipeline.base("A")), ("X", pipeline.base("X"))], 6)


def brute_force_quotient_dim(pres, d):
    """Oracle: dim of the degree-d piece of T(V)/I by a pure span-rank
    computation over all words, with no Groebner machinery involved."""
    gens = pres.gens
    field = pres.field
    words = monomials_of_degree(gens, d)
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for rel in pres.relations:
        gd = rel.degree()
        if gd > d:
            continue
        for a in range(0, d - gd + 1):
            for left in monomials_of_degree(gens, a):
                for right in monomials_of_degree(gens, d - gd - a):
                    rows.append(
                        {index[left + w + right]: c for w, c in rel.terms.items()}
                    )
    return len(words) - sparse_rank(rows, len(words), field)
