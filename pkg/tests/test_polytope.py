"""Simple polytopes: vertex enumeration, the triangulation volume oracle
against the facet-recursion volume polynomial, mixed volumes, and the
deformation-cone membership test."""

import pytest

from lorentzlab import hereditary as hered
from lorentzlab.polycore import parse_poly
from lorentzlab.polytope import (
    PolytopeError,
    SimplePolytope,
    af_check,
    build,
    in_deformation_cone,
    mixed_volume,
    volume,
    volume_polynomial,
)
from lorentzlab.rat import Q


def square(t=(1, 1, 1, 1)):
    return build([(1, 0), (0, 1), (-1, 0), (0, -1)], t)


def triangle(t=(0, 0, 1)):
    return build([(-1, 0), (0, -1), (1, 1)], t)


def pentagon(t=(1, 1, 1, 1, Q(3, 2))):
    return build([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)], t)


def cube(t=(1, 1, 1, 1, 1, 1)):
    return build([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)], t)


def simplex3(t=(0, 0, 0, 1)):
    return build([(-1, 0, 0), (0, -1, 0), (0, 0, -1), (1, 1, 1)], t)


def prism(t=(0, 0, 1, 1, 0)):
    return build([(-1, 0, 0), (0, -1, 0), (1, 1, 0), (0, 0, 1), (0, 0, -1)], t)


FIXTURES = [square, triangle, pentagon, cube, simplex3, prism]


def test_build_examples():
    sq = square()
    assert sorted(sq.vertices) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    tr = triangle()
    assert sorted(tr.vertices) == [(0, 0), (0, 1), (1, 0)]
    with pytest.raises(PolytopeError, match="empty"):
        build([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)], [1, 1, 1, 1, 10])
    with pytest.raises(PolytopeError, match="unbounded"):
        build([(1, 0), (0, 1)], [1, 1])
    with pytest.raises(PolytopeError, match="not simple"):
        build([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (1, 1, 1)], [1, 1, 1, 1, 3])


def test_volume_examples():
    assert volume(square((1, 1, 0, 0))) == 1
    assert volume(triangle()) == Q(1, 2)
    assert volume(cube((1, 1, 1, 0, 0, 0))) == 1
    assert volume(pentagon()) == 4 - Q(1, 8)
    assert volume(prism()) == Q(1, 2)
    assert volume(simplex3()) == Q(1, 6)


def test_volume_polynomial_box():
    pol = volume_polynomial(square()).f
    t1, t2, t3, t4 = (parse_poly(f"v{i}", vars=tuple(f"v{j}" for j in range(1, 5))) for i in range(1, 5))
    want = (t1 + t3) * (t2 + t4)
    assert pol.rename_vars({v: f"v{v}" for v in pol.vars}) == want
    cube_pol = volume_polynomial(cube()).f
    assert cube_pol.evaluate((1, 2, 3, 1, 0, 1)) == 2 * 2 * 4


def test_simplex_polynomial_is_power_of_linear_form():
    # coefficients proportionality with the positive kernel vector of the
    # normal matrix
    for P in (triangle(), simplex3()):
        h = volume_polynomial(P)
        d = P.dim
        grads = [h.f.coeff(tuple(d if j == i else 0 for j in range(len(P.labels))))
                 for i in range(len(P.labels))]
        # f = c (v1 t1 + ... )^d with sum v_i rho_i = 0: recover v from the
        # pure powers and verify the whole polynomial matches
        from lorentzlab import linalg
        from lorentzlab.polycore import HomPoly

        v = linalg.nullspace(linalg.transpose(P.normals), len(P.labels))
        assert len(v) == 1
        vpos = v[0] if v[0][0] > 0 else tuple(-x for x in v[0])
        assert all(x > 0 for x in vpos)
        form = HomPoly(h.f.vars, 1, {((i, 1),): c for i, c in enumerate(vpos)})
        power = form.pow(d)
        ratio = None
        for key, c in h.f.terms.items():
            ratio = c / power.terms[key]
            break
        assert power.scale(ratio) == h.f and ratio > 0


def test_oracle_agreement_random_support_vectors(rng):
    for make in FIXTURES:
        P = make()
        pol = volume_polynomial(P).f
        found = 0
        while found < 12:
            t = [x + Q(rng.randint(-2, 2), 8) for x in P.t]
            if not in_deformation_cone(P, t):
                continue
            found += 1
            Q2 = build(P.normals, t, P.labels)
            assert pol.evaluate(t) == volume(Q2)


def test_translation_invariance(rng):
    for make in (square, cube):
        P = make()
        pol = volume_polynomial(P)
        idx = {v: k for k, v in enumerate(pol.f.vars)}
        for b in P.lin.basis:
            assert pol.lin.contains([b[idx.get(v, P.labels.index(v))] for v in pol.f.vars])
        # direct check at a sample point
        y = [Q(rng.randint(-2, 2), 3) for _ in range(P.dim)]
        shift = [sum(r[k] * y[k] for k in range(P.dim)) for r in P.normals]
        t = list(P.t)
        assert pol.f.evaluate([a + s for a, s in zip(t, shift)]) == pol.f.evaluate(t)


def test_minkowski_linearity_of_support(rng):
    P = square()
    for _ in range(10):
        lam, mu = Q(rng.randint(1, 4)), Q(rng.randint(1, 4))
        tQ = [Q(rng.randint(1, 3)) for _ in range(4)]
        tR = [Q(rng.randint(1, 3)) for _ in range(4)]
        combo = [lam * a + mu * b for a, b in zip(tQ, tR)]
        # support numbers are linear under scaling and Minkowski sums, so the
        # combined vector stays in the chamber and volumes expand binomially
        assert in_deformation_cone(P, combo)
        vol = volume(build(P.normals, combo))
        polf = volume_polynomial(P).f
        assert vol == polf.evaluate(combo)


def test_mixed_volume_examples():
    K1 = build([(1, 0), (0, 1), (-1, 0), (0, -1)], [2, 3, 0, 0])
    K2 = build([(1, 0), (0, 1), (-1, 0), (0, -1)], [5, 7, 0, 0])
    assert mixed_volume([K1, K2]) == 2 * 7 + 3 * 5
    sq = square((1, 1, 0, 0))
    assert mixed_volume([sq, sq]) == 2 * volume(sq)
    s1, s2 = simplex3(), simplex3((0, 0, 0, 2))
    assert mixed_volume([s1, s1, s1]) == 6 * volume(s1)
    assert mixed_volume([s1, s1, s2]) == 2 * mixed_volume([s1, s1, s1])


def test_mixed_volume_symmetric_multilinear(rng):
    P = square()
    bodies = []
    while len(bodies) < 3:
        t = [x + Q(rng.randint(-2, 2), 8) for x in P.t]
        if in_deformation_cone(P, t):
            bodies.append(build(P.normals, t))
    A, B, C = bodies
    assert mixed_volume([A, B]) == mixed_volume([B, A])
    lam = Q(3, 2)
    scaled = build(P.normals, [lam * x for x in A.t])
    assert mixed_volume([scaled, B]) == lam * mixed_volume([A, B])


def test_af_examples(rng):
    K1 = build([(1, 0), (0, 1), (-1, 0), (0, -1)], [2, 3, 0, 0])
    K2 = build([(1, 0), (0, 1), (-1, 0), (0, -1)], [5, 7, 0, 0])
    assert af_check([K1, K2])  # (ae+bc)^2 >= 4abce
    assert af_check([K1, K1])
    P = cube()
    bodies = []
    while len(bodies) < 3:
        t = [x + Q(rng.randint(-1, 1), 6) for x in P.t]
        if in_deformation_cone(P, t):
            bodies.append(build(P.normals, t))
    assert af_check(bodies)


def test_volume_polynomial_is_hereditary_lorentzian():
    for make in FIXTURES:
        P = make()
        h = volume_polynomial(P)
        assert h.strong
        assert h.delta == P.delta  # the face complexes coincide
        assert hered.is_positive(h)
        v = hered.is_hereditary_lorentzian(h, cone_hints=[tuple(P.t)])
        assert v.value == "yes", make.__name__


def test_deformation_cone_membership():
    P = square()
    assert in_deformation_cone(P, (2, 1, 1, 1))
    assert not in_deformation_cone(P, (-1, 0, 0, 0))
    # the defining support vector of any fixture lies in its own chamber
    for make in FIXTURES:
        Q2 = make()
        assert in_deformation_cone(Q2, Q2.t)
    # the polytope cone sits inside the polynomial's cone
    h = volume_polynomial(P)
    assert hered.cone_member(h, tuple(P.t))


def test_json_round_trip():
    P = pentagon()
    again = SimplePolytope.from_json_dict(P.to_json_dict())
    assert again.vertices == P.vertices and again.delta == P.delta
