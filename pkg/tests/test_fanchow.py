"""Fans and degree functionals: construction checks, ample cones,
reconstruction, the Lorentzian certification, stellar subdivision transport,
the canonical bijection invariant, and star/dimension identities."""

import pytest

from lorentzlab import hereditary as hered
from lorentzlab.fanchow import (
    DegreeFunctional,
    Fan,
    ample_cone_member,
    build_fan,
    canonical_bijection_check,
    check_fan_lorentzian,
    fan_subdivide,
    fan_weld,
    functional_from_weights,
    locate_relative_interior,
    star,
    transport_chain,
)
from lorentzlab.hereditary import space_dimension
from lorentzlab.matroid import Matroid, bergman_fan, flats, pol_matroid
from lorentzlab.polytope import build as build_polytope, volume_polynomial
from lorentzlab.rat import Q


def square_fan():
    # normal fan of the axis square: four rays, four 2-cones
    return build_fan(
        2, ("e", "n", "w", "s"),
        [(1, 0), (0, 1), (-1, 0), (0, -1)],
        [{"e", "n"}, {"n", "w"}, {"w", "s"}, {"s", "e"}],
        full_check=True,
    )


def two_plane_fan():
    # two complete plane fans in orthogonal coordinate planes of R^4: a
    # valid fan whose cone complex is disconnected
    rays = {
        "a+": (1, 0, 0, 0), "b+": (0, 1, 0, 0), "a-": (-1, 0, 0, 0), "b-": (0, -1, 0, 0),
        "c+": (0, 0, 1, 0), "d+": (0, 0, 0, 1), "c-": (0, 0, -1, 0), "d-": (0, 0, 0, -1),
    }
    cones = [
        {"a+", "b+"}, {"b+", "a-"}, {"a-", "b-"}, {"b-", "a+"},
        {"c+", "d+"}, {"d+", "c-"}, {"c-", "d-"}, {"d-", "c+"},
    ]
    labels = tuple(rays)
    return build_fan(4, labels, [rays[k] for k in labels], cones, full_check=True)


def test_build_fan_validation():
    fan = square_fan()
    assert fan.lineality().dim == 2
    with pytest.raises(ValueError, match="dependent"):
        build_fan(2, ("a", "b"), [(1, 0), (2, 0)], [{"a", "b"}])
    with pytest.raises(ValueError, match="common face"):
        build_fan(2, ("a", "b", "c"), [(1, 0), (0, 1), (1, 1)],
                  [{"a", "b"}, {"a", "c"}], full_check=True).verify_fan_axioms()
    single = build_fan(2, ("a",), [(1, 2)], [{"a"}])
    assert single.cones.is_pure(1)


def test_bergman_fan_checks():
    for r, n in ((2, 3), (3, 4)):
        L = flats(Matroid.uniform(r, n))
        fan = bergman_fan(L)
        alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
        assert alpha.h.f == pol_matroid(L).f
        v = check_fan_lorentzian(alpha)
        assert v.value == "yes", (r, n)


def test_normal_fan_of_polytopes():
    P = build_polytope([(1, 0), (0, 1), (-1, 0), (0, -1)], [1, 1, 1, 1])
    fan = build_fan(2, P.labels, P.normals, P.delta.facets, full_check=True)
    h = volume_polynomial(P)
    alpha = DegreeFunctional(fan=fan, grade=2, h=h)
    assert check_fan_lorentzian(alpha).value == "yes"
    # support numbers of the square are ample for its normal fan
    assert ample_cone_member(fan, tuple(P.t))
    assert not ample_cone_member(fan, (-1, -1, -1, -1))


def test_ample_cone_subfan_monotonicity():
    fan = square_fan()
    sub = build_fan(2, fan.ray_labels, fan.rays, [{"e", "n"}, {"n", "w"}, {"w", "s"}])
    assert ample_cone_member(fan, (1, 1, 1, 1))
    assert ample_cone_member(sub, (1, 1, 1, 1))


def test_functional_from_weights_errors():
    fan = square_fan()
    with pytest.raises(hered.BalancingError):
        functional_from_weights(fan, {F: (2 if "e" in F else 1) for F in fan.cones.facets})
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    assert alpha.weight(frozenset({"e", "n"})) == 1
    assert alpha.grade == 2


def test_disconnected_positive_fan_fails_connectivity():
    fan = two_plane_fan()
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    v = check_fan_lorentzian(alpha)
    assert v.value == "no"
    assert v.h_connected is False and v.c_witness == frozenset()


def test_fan_subdivide_quadrant():
    fan = build_fan(2, ("x", "y"), [(1, 0), (0, 1)], [{"x", "y"}])
    S, c = locate_relative_interior(fan, (1, 1))
    assert S == frozenset({"x", "y"}) and c == (Q(1), Q(1))
    fan2, transport = fan_subdivide(fan, (1, 1))
    assert len(fan2.cones.facets) == 2
    with pytest.raises(ValueError):
        locate_relative_interior(fan, (-1, 0))


def test_subdivision_transport_and_bijection():
    fan = square_fan()
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    fan2, transport = fan_subdivide(fan, (1, 1))
    alpha2 = transport(alpha)
    # transported functional stays Lorentzian and the volume-weighted facet
    # values agree across overlapping maximal cones
    assert check_fan_lorentzian(alpha2).value == "yes"
    assert canonical_bijection_check(fan, alpha, fan2, alpha2)
    # identity pair
    assert canonical_bijection_check(fan, alpha, fan, alpha)
    # corrupted weights break the invariant
    bad = functional_from_weights(fan2, {F: alpha2.weight(F) * 2 for F in fan2.cones.facets})
    assert not canonical_bijection_check(fan, alpha, fan2, bad)


def test_bergman_subdivision_fixture():
    L = flats(Matroid.uniform(3, 4))
    fan = bergman_fan(L)
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    facet = sorted(fan.cones.facets, key=lambda f: sorted(map(repr, f)))[0]
    labels = sorted(facet, key=repr)
    rho = tuple(sum(xs) for xs in zip(*[fan.ray(v) for v in labels]))
    fan2, transport = fan_subdivide(fan, rho)
    alpha2 = transport(alpha)
    assert check_fan_lorentzian(alpha2).value == "yes"
    assert canonical_bijection_check(fan, alpha, fan2, alpha2)


def test_transport_chain_round_trip():
    fan = square_fan()
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    steps = [
        {"kind": "subdivide", "ray": (1, 1), "vertex": "ne"},
        {"kind": "weld", "vertex": "ne", "face": ["e", "n"]},
    ]
    fan2, alpha2 = transport_chain(fan, alpha, steps)
    assert fan2.cones == fan.cones
    assert alpha2.h.f == alpha.h.f
    # verdict transport along a longer chain
    steps = [
        {"kind": "subdivide", "ray": (1, 2), "vertex": "p"},
        {"kind": "subdivide", "ray": (-1, 3), "vertex": "q"},
    ]
    fan3, alpha3 = transport_chain(fan, alpha, steps)
    assert check_fan_lorentzian(alpha3).value == check_fan_lorentzian(alpha).value == "yes"


def test_fan_weld_recovers():
    fan = square_fan()
    fan2, transport = fan_subdivide(fan, (2, 3), new_label="m")
    back, transport_back = fan_weld(fan2, "m", {"e", "n"})
    assert back.cones == fan.cones and back.rays == fan.rays
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    assert transport_back(transport(alpha)).h.f == alpha.h.f


def test_star_identities():
    L = flats(Matroid.uniform(3, 4))
    fan = bergman_fan(L)
    S = sorted(fan.cones.facets, key=lambda f: sorted(map(repr, f)))[0]
    v = sorted(S, key=repr)[0]
    st = star(fan, {v})
    assert st.cones.facets == fan.cones.link({v}).facets
    assert st.lineality() == fan.lineality().vanishing_restrict(
        (v,), fan.cones.link_vertices({v})
    )


def test_top_grade_dimension_vanishes():
    # nothing above the top grade, and the top itself is one-dimensional for
    # a complete simplicial 2-fan
    fan = square_fan()
    lin = fan.lineality()
    assert space_dimension(fan.cones, lin, 3) == 0
    assert space_dimension(fan.cones, lin, 2) == 1


def test_functional_restriction_membership():
    # face restrictions of a top functional live in the link's graded piece
    fan = square_fan()
    alpha = functional_from_weights(fan, {F: 1 for F in fan.cones.facets})
    h = alpha.h
    for i in fan.ray_labels:
        fi = hered.restrict_poly(h, {i})
        st = star(fan, {i})
        lk_lin = fan.lineality().vanishing_restrict((i,), fan.cones.link_vertices({i}))
        for b in lk_lin.basis:
            idx = {v: k for k, v in enumerate(fan.cones.link_vertices({i}))}
            assert fi.lineality_space().contains([b[idx[v]] for v in fi.vars])


def test_fan_json_round_trip():
    fan = square_fan()
    again = Fan.from_json_dict(fan.to_json_dict())
    assert again.rays == fan.rays and again.cones.facets == fan.cones.facets
