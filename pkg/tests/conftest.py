import os
import random

import pytest

from lorentzlab.rat import Q


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: full acceptance-criteria checks")


@pytest.fixture
def rng():
    """Seeded RNG; LORENTZLAB_SEED overrides the default."""
    return random.Random(int(os.environ.get("LORENTZLAB_SEED", "20240809")))


def rand_q(rng, lo=-4, hi=4, den=3):
    return Q(rng.randint(lo, hi), rng.randint(1, den))


def rand_nonneg_poly(rng, n, d, terms=None):
    """Random sparse homogeneous polynomial with nonnegative coefficients."""
    from lorentzlab.polycore import HomPoly

    vars = tuple(f"t{i + 1}" for i in range(n))
    dense = {}
    for _ in range(terms if terms is not None else rng.randint(2, 6)):
        exps = [0] * n
        for _ in range(d):
            exps[rng.randrange(n)] += 1
        dense[tuple(exps)] = Q(rng.randint(1, 5), rng.randint(1, 2))
    return HomPoly.from_dense(vars, d, dense)


def rand_product_of_linears(rng, n, d):
    """A product of positive linear forms: always Lorentzian."""
    from lorentzlab.polycore import HomPoly

    vars = tuple(f"t{i + 1}" for i in range(n))
    out = HomPoly.constant(vars, 1)
    for _ in range(d):
        coeffs = {((i, 1),): Q(rng.randint(0, 3)) for i in range(n)}
        coeffs[((rng.randrange(n), 1),)] = Q(rng.randint(1, 3))
        out = out * HomPoly(vars, 1, coeffs)
    return out


def hereditary_fixture_pool(rng):
    """Strongly hereditary positive fixtures for subdivision round trips."""
    from lorentzlab.hereditary import check_hereditary, product
    from lorentzlab.lorentzian import polarize
    from lorentzlab.matroid import Matroid, flats, pol_matroid
    from lorentzlab.polycore import parse_poly
    from lorentzlab.polytope import build, volume_polynomial

    pool = [
        pol_matroid(flats(Matroid.uniform(2, 3))),
        pol_matroid(flats(Matroid.uniform(3, 4))),
        pol_matroid(flats(Matroid.uniform(3, 5))),
        check_hereditary(polarize(parse_poly("t1 t2 + t1 t3 + t2 t3"))),
        check_hereditary(polarize(parse_poly("t1^2 + 3*t1 t2 + t2^2"))),
        volume_polynomial(build([(1, 0), (0, 1), (-1, 0), (0, -1)], [1, 1, 1, 1])),
        volume_polynomial(build([(-1, 0), (0, -1), (1, 1)], [0, 0, 1])),
        product(
            check_hereditary(parse_poly("u1 + 2*u2")),
            check_hereditary(polarize(parse_poly("t1 t2"))),
        ),
    ]
    return pool


@pytest.fixture(scope="session")
def catalog():
    """All uniform matroids with at most 7 elements, plus K4 and Fano."""
    from lorentzlab.matroid import Matroid, flats

    out = {}
    for n in range(1, 8):
        for r in range(1, n + 1):
            out[f"U({r},{n})"] = flats(Matroid.uniform(r, n))
    out["K4"] = flats(Matroid.from_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]))
    out["Fano"] = flats(Matroid.fano())
    return out
