"""Simple polytopes from facet data: exact vertex enumeration, volumes,
volume polynomials, mixed volumes and the Alexandrov-Fenchel check.

A polytope arrives as rational (not necessarily unit) outward normals plus
support numbers.  Vertices come from solving every d-subset of facet
equations; simplicity means every vertex activates exactly d facets, and
the facet-incidence sets generate the incidence complex.

The volume polynomial is assembled by the facet recursion: each facet is
rewritten in intrinsic rational coordinates of its hyperplane (an exact
basis of the normal's orthogonal complement), its support numbers become a
rational linear substitution, and the change of measure contributes the
factor |det [basis; normal]| / <normal, normal>, which is rational because
the basis is orthogonal to the normal.  Degree-1 faces are segments whose
length is a linear form.  The identity d * pol = sum_i t_i * (d/dt_i) pol
stitches the facet polynomials together, and an independent triangulation
volume oracle pins the normalization on every fixture.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from . import hereditary as hered
from . import linalg
from .cones import GT, GE, StrictSystem, strict_feasible
from .polycore import HomPoly, LinSubspace
from .rat import Q, ZERO, ONE, rat_str
from .simplicial import SimComplex


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class SimplePolytope:
    dim: int
    labels: tuple            # facet labels, one per normal
    normals: tuple           # rational outward normals (rows)
    t: tuple                 # support numbers
    vertices: tuple          # rational vertex coordinates
    active: tuple            # per-vertex frozenset of facet labels
    delta: SimComplex        # facet-incidence complex
    lin: LinSubspace         # translations, read through the normals

    def support_vector(self) -> dict:
        return dict(zip(self.labels, self.t))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "normals": [[rat_str(x) for x in r] for r in self.normals],
            "t": [rat_str(x) for x in self.t],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SimplePolytope":
        normals = [tuple(Q(str(x)) for x in r) for r in data["normals"]]
        t = [Q(str(x)) for x in data["t"]]
        return build(normals, t)


def build(normals: Sequence[Sequence], t: Sequence, labels: Sequence | None = None) -> SimplePolytope:
    """Vertex enumeration over all d-subsets of facet equations.

    Raises PolytopeError when the data is unbounded, non-simple, or leaves
    a facet empty.
    """
    normals = tuple(tuple(Q(x) for x in r) for r in normals)
    t = tuple(Q(x) for x in t)
    if not normals:
        raise PolytopeError("no facets")
    d = len(normals[0])
    n = len(normals)
    if labels is None:
        labels = tuple(range(1, n + 1))
    labels = tuple(labels)
    if len(t) != n or len(labels) != n or any(len(r) != d for r in normals):
        raise PolytopeError("inconsistent facet data")
    _require_bounded(normals)
    verts: dict[tuple, frozenset] = {}
    for combo in combinations(range(n), d):
        A = [normals[i] for i in combo]
        if linalg.rank(A) != d:
            continue
        x = linalg.solve(A, [t[i] for i in combo])
        if x is None:
            continue
        vals = [linalg.dot(normals[i], x) for i in range(n)]
        if any(vals[i] > t[i] for i in range(n)):
            continue
        act = frozenset(labels[i] for i in range(n) if vals[i] == t[i])
        if len(act) != d:
            raise PolytopeError(f"vertex {x} lies on {len(act)} facets; polytope is not simple")
        verts[x] = act
    if not verts:
        raise PolytopeError("no vertices; the data does not bound a polytope")
    covered = set().union(*verts.values())
    missing = [lab for lab in labels if lab not in covered]
    if missing:
        raise PolytopeError(f"facet(s) {missing} are empty (redundant constraints)")
    delta = SimComplex(labels, set(verts.values()))
    lin = LinSubspace(labels, [tuple(r[k] for r in normals) for k in range(d)])
    order = sorted(verts, key=repr)
    return SimplePolytope(
        dim=d, labels=labels, normals=normals, t=t,
        vertices=tuple(order), active=tuple(verts[v] for v in order),
        delta=delta, lin=lin,
    )


def _require_bounded(normals: Sequence[tuple]):
    d = len(normals[0])
    for k in range(d):
        for s in (ONE, -ONE):
            sys = StrictSystem(vars=tuple(range(d)))
            for r in normals:
                sys.add({j: -r[j] for j in range(d)}, GE)
            sys.add({k: s}, GT)
            if strict_feasible(sys) is not None:
                raise PolytopeError("unbounded: the normals do not positively span the space")


def in_deformation_cone(P: SimplePolytope, t: Sequence) -> bool:
    """Whether the support vector cuts a simple polytope with the same
    incidence complex (the chamber of P)."""
    try:
        Q2 = build(P.normals, t, P.labels)
    except PolytopeError:
        return False
    return Q2.delta == P.delta


def cone_of(P: SimplePolytope):
    """Membership predicate for the deformation cone of P."""
    return lambda t: in_deformation_cone(P, t)


def volume(P: SimplePolytope):
    """Exact Euclidean volume by a pulling triangulation of the face lattice."""
    vert_at = dict(zip(P.active, P.vertices))
    face_vertices: dict[frozenset, list] = {}
    for act, v in zip(P.active, P.vertices):
        for k in range(len(act) + 1):
            for S in combinations(sorted(act, key=repr), k):
                face_vertices.setdefault(frozenset(S), []).append(v)

    def triangulate(S: frozenset) -> list[list[tuple]]:
        verts = face_vertices[S]
        if len(S) == P.dim:
            return [[verts[0]]]
        base = min(verts, key=repr)
        simplices = []
        for j in P.delta.link_vertices(S):
            sub = S | {j}
            if base in face_vertices[sub]:
                continue
            for simplex in triangulate(sub):
                simplices.append([base] + simplex)
        return simplices

    total = ZERO
    for simplex in triangulate(frozenset()):
        M = [linalg.vec_sub(p, simplex[0]) for p in simplex[1:]]
        total += abs(linalg.det(M))
    from math import factorial

    return total / factorial(P.dim)


def volume_polynomial(P: SimplePolytope) -> hered.HereditaryPoly:
    """The unique polynomial giving the volume on the deformation cone."""
    poly = _vol_poly_rec(P.labels, {lab: r for lab, r in zip(P.labels, P.normals)}, P.delta, P.dim)
    return hered.check_hereditary(poly)


def _vol_poly_rec(labels: tuple, normals: Mapping, delta: SimComplex, k: int) -> HomPoly:
    labels = tuple(labels)
    if k == 1:
        if len(labels) != 2:
            raise PolytopeError(f"segment face with {len(labels)} facets")
        a, b = labels
        if not normals[a][0] * normals[b][0] < 0:
            raise PolytopeError("segment normals do not oppose")
        return HomPoly(labels, 1, {
            ((0, 1),): ONE / abs(normals[a][0]),
            ((1, 1),): ONE / abs(normals[b][0]),
        })
    acc = HomPoly.zero(labels, k)
    for i in labels:
        rho = normals[i]
        rr = linalg.dot(rho, rho)
        B = linalg.nullspace([rho], k)
        M = list(B) + [rho]
        scale = abs(linalg.det(M)) / rr
        link = delta.link({i})
        child_labels = delta.link_vertices({i})
        child_normals = {j: linalg.mat_vec(B, normals[j]) for j in child_labels}
        child_delta = SimComplex(child_labels, link.facets)
        q = _vol_poly_rec(child_labels, child_normals, child_delta, k - 1)
        forms = {}
        for j in child_labels:
            g = linalg.dot(normals[j], rho) / rr
            form = {j: ONE}
            if g != 0:
                form[i] = -g
            forms[j] = form
        acc = acc + HomPoly.variable(labels, i) * q.substitute(labels, forms).scale(scale)
    return acc.scale(Q(1, k))


def mixed_volume(polys: Sequence[SimplePolytope]):
    """Fully polarized mixed volume via directional derivatives of the
    volume polynomial; the diagonal gives d! times the volume."""
    P = polys[0]
    d = P.dim
    if len(polys) != d:
        raise PolytopeError(f"need exactly {d} bodies in dimension {d}")
    for Q2 in polys[1:]:
        if Q2.normals != P.normals or Q2.labels != P.labels:
            raise PolytopeError("bodies do not share the facet normal data")
    pol = _cached_volume_polynomial(P)
    g = pol.f
    for Q2 in polys:
        g = g.dir_derivative(tuple(Q2.t))
    return g.terms.get((), ZERO)


_VOLPOLY_CACHE: dict[tuple, hered.HereditaryPoly] = {}


def _cached_volume_polynomial(P: SimplePolytope) -> hered.HereditaryPoly:
    key = (P.normals, P.delta.facets)
    got = _VOLPOLY_CACHE.get(key)
    if got is None:
        got = volume_polynomial(P)
        _VOLPOLY_CACHE[key] = got
    return got


def af_check(bodies: Sequence[SimplePolytope]) -> bool:
    """V(K1, K2, rest)^2 >= V(K1, K1, rest) V(K2, K2, rest), exactly."""
    K1, K2, rest = bodies[0], bodies[1], list(bodies[2:])
    lhs = mixed_volume([K1, K2] + rest)
    a = mixed_volume([K1, K1] + rest)
    b = mixed_volume([K2, K2] + rest)
    return lhs ** 2 >= a * b
