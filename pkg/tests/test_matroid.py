"""Matroid pipeline: lattice axioms, the reconstruction fixtures, closed-form
evaluations, characteristic polynomial routes, Moebius sign alternation, and
agreement between the explicit polynomial path and the evaluation engine."""

from math import factorial

import pytest

from lorentzlab import hereditary as hered
from lorentzlab.matroid import (
    Matroid,
    alpha_beta,
    bergman_fan,
    char_poly,
    eval_alpha,
    eval_beta,
    flats,
    hrw_check,
    modular_interpolate,
    modular_space,
    order_complex,
    pol_matroid,
    submodular_witness,
    volume_engine,
)
from lorentzlab.polycore import parse_poly
from lorentzlab.rat import Q


def test_matroid_basics(rng):
    M = Matroid.uniform(2, 3)
    assert M.rank_total == 2 and M.rank({1}) == 1 and M.rank({1, 2}) == 2
    assert M.closure({1}) == frozenset({1})
    assert M.loops() == frozenset()
    M.spot_check_rank_axioms(rng)
    with pytest.raises(ValueError):
        Matroid((1, 2), ({1}, {1, 2}))  # not equicardinal


def test_flats_examples():
    L = flats(Matroid.uniform(2, 3))
    assert sorted(len(F) for F in L.flats) == [0, 1, 1, 1, 3]
    L1 = flats(Matroid.uniform(1, 1))
    assert [set(F) for F in L1.flats] == [set(), {1}]
    LK3 = flats(Matroid.from_graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert sorted(len(F) for F in LK3.flats) == [0, 1, 1, 1, 3]  # isomorphic to U(2,3)


def test_graphic_k4():
    L = flats(Matroid.from_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]))
    assert L.rank_total == 3
    rep = char_poly(L)
    assert [int(c) for c in rep.chi] == [-6, 11, -6, 1]
    assert [int(c) for c in rep.reduced] == [6, -5, 1]


def test_fano():
    L = flats(Matroid.fano())
    assert len(L.flats) == 16  # bottom, 7 points, 7 lines, top
    rep = char_poly(L)
    assert [int(c) for c in rep.chi] == [-8, 14, -7, 1]
    assert [int(c) for c in rep.reduced] == [8, -6, 1]
    assert rep.agree


def test_lattice_axioms_and_semimodularity(catalog):
    for name in ("U(2,3)", "U(3,5)", "K4", "Fano"):
        L = catalog[name]
        assert L.is_semimodular_spot()
        for a in L.flats:
            for b in L.flats:
                rb = L.rank[a] + L.rank[b]
                assert L.rank[a & b] + L.rank[min(
                    (F for F in L.flats if a <= F and b <= F), key=lambda F: L.rank[F]
                )] <= rb


def test_mobius_alternation(catalog):
    for name in ("U(3,5)", "K4", "Fano", "U(4,5)"):
        L = catalog[name]
        for a in L.flats:
            for b in L.flats:
                if a <= b:
                    mu = L.mobius(a, b)
                    assert (-1) ** (L.rank[b] - L.rank[a]) * mu >= 0


def test_order_complex_examples():
    L = flats(Matroid.uniform(2, 3))
    delta = order_complex(L)
    assert all(len(f) == 1 for f in delta.facets) and len(delta.facets) == 3
    L2 = flats(Matroid.uniform(2, 2))  # Boolean rank 2
    delta2 = order_complex(L2)
    assert len(delta2.facets) == 2
    L1 = flats(Matroid.uniform(1, 2))
    assert order_complex(L1).has_face(()) and not order_complex(L1).facets - {frozenset()}


def test_modular_space():
    L = flats(Matroid.uniform(2, 3))
    lin = modular_space(L)
    assert lin.dim == 2
    alpha, beta = alpha_beta(L)
    assert alpha.coords == (Q(1, 3),) * 3 and beta.coords == (Q(2, 3),) * 3
    # y values really are layered sums
    vals = modular_interpolate(L, {L.proper[0]: Q(1)})
    assert vals[L.proper[0]] == 1


def test_pol_examples():
    L = flats(Matroid.uniform(2, 3))
    h = pol_matroid(L)
    assert h.f.degree == 1 and len(h.f.terms) == 3
    assert h.strong
    # rank-3: the two-term square identity
    L34 = flats(Matroid.uniform(3, 4))
    h34 = pol_matroid(L34)
    rank1 = [F for F in L34.proper if L34.rank[F] == 1]
    rank2 = [F for F in L34.proper if L34.rank[F] == 2]
    from lorentzlab.polycore import HomPoly

    sq1 = HomPoly(h34.f.vars, 1, {((h34.f.vars.index(F), 1),): Q(1) for F in rank1})
    acc = sq1 * sq1
    for G in rank2:
        form = {((h34.f.vars.index(G), 1),): Q(1)}
        for F in rank1:
            if F < G:
                form[((h34.f.vars.index(F), 1),)] = Q(-1)
        lf = HomPoly(h34.f.vars, 1, form)
        acc = acc - lf * lf
    assert acc == h34.f.scale(2)


def test_closed_form_evaluations(catalog):
    for name in ("U(2,3)", "U(3,4)", "K4", "Fano", "U(4,6)"):
        L = catalog[name]
        d = L.rank_total - 1
        assert eval_alpha(L) == Q(1, factorial(d))
        assert eval_beta(L) == Q(abs(L.mobius(L.bottom, L.top)), factorial(d))


def test_interval_evaluations():
    # the closed forms hold on interval lattices too
    L = flats(Matroid.fano())
    lines = [F for F in L.proper if L.rank[F] == 2]
    I = L.interval(L.bottom, lines[0])
    assert eval_alpha(I) == 1 and eval_beta(I) == abs(I.mobius(I.bottom, I.top))


def test_factorization_over_chains(rng):
    # restriction at a chain face factors into interval volume polynomials
    L = flats(Matroid.uniform(4, 5))
    h = pol_matroid(L)
    chains = [S for S in h.delta.faces() if S and len(S) <= 2]
    for _ in range(6):
        S = sorted(chains[rng.randrange(len(chains))], key=lambda F: L.rank[F])
        fS = hered.restrict_poly(h, frozenset(S))
        seq = [L.bottom] + list(S) + [L.top]
        factor_vals = []
        for lo, hi in zip(seq, seq[1:]):
            I = L.interval(lo, hi)
            if I.rank_total >= 2:
                factor_vals.append(pol_matroid(I))
        # compare after matching variables through the product
        prod = None
        for piece in factor_vals:
            prod = piece if prod is None else hered.product(prod, piece)
        if prod is None:
            assert fS.degree == 0
            continue
        # same coefficients once variables are matched by flat label
        assert fS.degree == prod.f.degree
        remap = {v: v for v in prod.f.vars}
        assert {tuple(sorted(map(repr, k))): c for k, c in _dense(fS).items()} == \
               {tuple(sorted(map(repr, k))): c for k, c in _dense(prod.f).items()}


def _dense(f):
    out = {}
    for key, c in f.terms.items():
        out[tuple(f.vars[i] for i, _ in key for _ in range(dict(key)[i]))] = c
    return out


def test_modeq_membership(catalog):
    # the canonical directions differ from their 0/1 localizations by
    # modular vectors
    for name in ("U(2,3)", "U(3,4)", "K4"):
        L = catalog[name]
        lin = modular_space(L)
        alpha, beta = alpha_beta(L)
        for i in sorted(L.top - L.bottom, key=repr):
            ai = tuple(Q(1) if i in F else Q(0) for F in L.proper)
            bi = tuple(Q(0) if i in F else Q(1) for F in L.proper)
            assert lin.contains(tuple(a - x for a, x in zip(alpha.coords, ai)))
            assert lin.contains(tuple(b - x for b, x in zip(beta.coords, bi)))


def test_char_poly_routes_agree(catalog):
    for name, L in catalog.items():
        rep = char_poly(L)
        assert rep.agree, name


def test_hrw_all_small(catalog):
    for name in ("U(2,3)", "U(3,4)", "U(2,5)", "K4", "Fano"):
        hr = hrw_check(catalog[name])
        assert hr.log_concave and hr.mixed_identity, name


def test_submodular_witness_in_cone():
    for make in (lambda: flats(Matroid.uniform(2, 3)), lambda: flats(Matroid.uniform(3, 4)),
                 lambda: flats(Matroid.fano())):
        L = make()
        h = pol_matroid(L)
        v = submodular_witness(L)
        assert all(c > 0 for c in v.coords)
        assert hered.cone_member(h, v)


def test_engine_matches_explicit(catalog, rng):
    # evaluation engine vs the materialized polynomial, and both
    # certification paths, on the small catalog entries (the explicit path
    # re-derives every restriction's lineality space, so it is reserved for
    # lattices with few chains)
    for name in ("U(2,2)", "U(2,3)", "U(2,4)", "U(3,3)", "U(3,4)", "U(3,5)", "U(4,4)", "K4", "Fano"):
        L = catalog[name]
        h = pol_matroid(L)
        eng = volume_engine(L)
        for _ in range(5):
            v = {F: Q(rng.randint(-3, 5), rng.randint(1, 2)) for F in L.proper}
            assert eng.evaluate(v) == h.f.evaluate([v[F] for F in h.f.vars])
        fast = eng.hl_check()
        slow = hered.is_hereditary_lorentzian(h, cone_hints=[submodular_witness(L)])
        assert fast.value == slow.value == "yes", name
        assert {frozenset(S) for S, _ in fast.q_certificates} == \
               {frozenset(S) for S, _ in slow.q_certificates}


def test_bergman_fan_identities():
    for make in (lambda: flats(Matroid.uniform(2, 3)), lambda: flats(Matroid.uniform(3, 4))):
        L = make()
        fan = bergman_fan(L)
        assert fan.cones == order_complex(L)
        # ray lineality equals the modular space
        assert fan.lineality() == modular_space(L)
    fan23 = bergman_fan(flats(Matroid.uniform(2, 3)))
    assert fan23.dim == 2 and sorted(fan23.rays) == sorted([(Q(1), Q(0)), (Q(0), Q(1)), (Q(-1), Q(-1))])


def test_rank_one_conventions():
    L = flats(Matroid.uniform(1, 3))
    assert L.rank_total == 1
    h = pol_matroid(L)
    assert h.f.degree == 0 and h.f.terms[()] == 1
    assert eval_alpha(L) == 1 and eval_beta(L) == 1
    rep = char_poly(L)
    assert [int(c) for c in rep.chi] == [-1, 1] and [int(c) for c in rep.reduced] == [1]


def test_loops_are_quotiented_out():
    # a graph with a self-loop: the loop lands in the bottom flat and the
    # pipeline works over the loop-free part throughout
    M = Matroid.from_graph(3, [(0, 0), (0, 1), (1, 2)])
    assert M.loops() == frozenset({0})
    L = flats(M)
    assert L.bottom == frozenset({0})
    assert L.rank_total == 2
    rep = char_poly(L)
    assert rep.agree and [int(c) for c in rep.reduced] == [-1, 1]
    h = pol_matroid(L)
    assert hered.is_hereditary_lorentzian(h, cone_hints=[submodular_witness(L)]).value == "yes"
