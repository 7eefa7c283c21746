"""Simplicial fans, degree functionals on their Chow data, ample cones,
stellar subdivision of fans, and the support-invariance checks.

A fan is a ray matrix plus a simplicial complex of cones (rays of every
cone linearly independent).  The degree functionals of grade k are carried
by polynomials supported on the cone complex whose lineality space contains
the row space of the ray matrix; reconstruction from facet weights and the
Lorentzian certification delegate to :mod:`lorentzlab.hereditary`.

Relative cone volumes are irrational in general, so the canonical-bijection
comparison uses squared Gram determinants plus explicit sign tracking,
which stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import hereditary as hered
from . import linalg
from .cones import GE, GT, EQ, StrictSystem, strict_feasible, try_positive_combination
from .polycore import HomPoly, LinSubspace, direction_coords
from .rat import Q, ZERO, ONE, rat_str
from .simplicial import SimComplex, fresh_vertex


@dataclass(frozen=True)
class Fan:
    dim: int
    ray_labels: tuple
    rays: tuple          # rational vectors aligned with ray_labels
    cones: SimComplex    # complex on ray_labels; facets = maximal cones

    def __post_init__(self):
        rays = tuple(tuple(Q(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if len(rays) != len(self.ray_labels):
            raise ValueError("one ray vector per label required")
        for r in rays:
            if len(r) != self.dim:
                raise ValueError("ray has wrong ambient dimension")
            if all(x == 0 for x in r):
                raise ValueError("zero ray vector")
        if set(self.cones.vertices) != set(self.ray_labels):
            raise ValueError("cone complex vertices must match ray labels")
        idx = self._index()
        for F in self.cones.facets:
            sub = [rays[idx[v]] for v in F]
            if linalg.rank(sub) != len(sub):
                raise ValueError(f"rays of cone {set(F)} are linearly dependent")

    def _index(self) -> dict:
        return {v: i for i, v in enumerate(self.ray_labels)}

    def ray(self, label) -> tuple:
        return self.rays[self._index()[label]]

    def lineality(self) -> LinSubspace:
        """L(fan): functionals evaluated on the rays, i.e. the row space of
        the coordinate-by-ray matrix."""
        rows = [tuple(r[k] for r in self.rays) for k in range(self.dim)]
        return LinSubspace(self.ray_labels, rows)

    def gram_det_sq(self, F: Iterable):
        """Squared relative volume of a cone's ray parallelotope."""
        idx = self._index()
        R = [self.rays[idx[v]] for v in F]
        return linalg.det(linalg.mat_mul(R, linalg.transpose(R)))

    def verify_fan_axioms(self) -> None:
        """Pairwise cone intersections are common faces (exact LP check).

        Optional (quadratic in the number of maximal cones); raises on the
        first violating pair.  Simplicial cones have unique generator
        representations, so a violation is a common point using a
        generator outside the shared face on either side.
        """
        idx = self._index()
        facets = sorted(self.cones.facets, key=lambda f: sorted(map(repr, f)))
        for a in range(len(facets)):
            for b in range(a + 1, len(facets)):
                A, B = facets[a], facets[b]
                shared = A & B
                sys = StrictSystem(
                    vars=tuple(("l", v) for v in A) + tuple(("m", v) for v in B)
                )
                for v in A:
                    sys.add({("l", v): ONE}, GE)
                for v in B:
                    sys.add({("m", v): ONE}, GE)
                for k in range(self.dim):
                    row = {("l", v): self.rays[idx[v]][k] for v in A}
                    for v in B:
                        row[("m", v)] = row.get(("m", v), ZERO) - self.rays[idx[v]][k]
                    sys.add(row, EQ)
                outside = {("l", v): ONE for v in A - shared}
                for v in B - shared:
                    outside[("m", v)] = ONE
                sys.add(outside, GT)
                if strict_feasible(sys) is not None:
                    raise ValueError(f"cones {set(A)} and {set(B)} do not meet in a common face")

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [[rat_str(x) for x in r] for r in self.rays],
            "labels": [str(v) for v in self.ray_labels],
            "cones": sorted(sorted(str(v) for v in f) for f in self.cones.facets),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Fan":
        rays = [tuple(Q(str(x)) for x in r) for r in data["rays"]]
        labels = tuple(data.get("labels", range(len(rays))))
        cones = [[labels[i] for i in c] if all(isinstance(i, int) for i in c) else c
                 for c in data["cones"]]
        return build_fan(int(data["dim"]), labels, rays, cones)


def build_fan(dim: int, labels: Sequence, rays: Sequence, cones: Sequence[Iterable],
              full_check: bool = False) -> Fan:
    fan = Fan(dim=dim, ray_labels=tuple(labels), rays=tuple(map(tuple, rays)),
              cones=SimComplex(tuple(labels), cones))
    if full_check:
        fan.verify_fan_axioms()
    return fan


@dataclass(frozen=True)
class DegreeFunctional:
    """A grade-k functional carried by its polynomial representative."""

    fan: Fan
    grade: int
    h: hered.HereditaryPoly

    def __post_init__(self):
        if self.h.degree != self.grade:
            raise ValueError("polynomial degree does not match grade")
        for S in self.h.delta.facets:
            if S and not self.fan.cones.has_face(S):
                raise ValueError(f"polynomial support {set(S)} is not a cone")
        lin = self.fan.lineality()
        idx = {v: i for i, v in enumerate(lin.ambient)}
        for b in lin.basis:
            vec = [b[idx[v]] for v in self.h.vars]
            if not self.h.lin.contains(vec):
                raise ValueError("polynomial is not invariant under the fan's lineality space")

    def weight(self, F: Iterable):
        """The value on the cone monomial: the mixed derivative at the facet."""
        return self.h.f.mixed_partial(frozenset(F)).terms.get((), ZERO)

    @classmethod
    def from_poly(cls, fan: Fan, poly: HomPoly) -> "DegreeFunctional":
        return cls(fan=fan, grade=poly.degree, h=hered.check_hereditary(poly))


def functional_from_weights(fan: Fan, w: Mapping) -> DegreeFunctional:
    """The unique top-grade functional with prescribed facet values; raises
    BalancingError when the weights are not balanced."""
    weights = {frozenset(F): Q(c) for F, c in w.items()}
    h = hered.from_weights(fan.cones, fan.lineality(), weights)
    return DegreeFunctional(fan=fan, grade=h.degree, h=h)


def check_fan_lorentzian(alpha: DegreeFunctional) -> hered.HLVerdict:
    return hered.is_hereditary_lorentzian(alpha.h)


# ---------------------------------------------------------------------------
# ample cone
# ---------------------------------------------------------------------------


def ample_cone_member(fan: Fan, v) -> bool:
    """Membership in the cone of strictly convex support elements.

    Same compiled-strict-system strategy as the polynomial cone, driven by
    (cone complex, ray lineality) alone: at every face of size < d the
    projected point must be shiftable into the open orthant by a lineality
    vector vanishing on the face.
    """
    delta = fan.cones
    if delta.is_void():
        raise ValueError("fan has no cones")
    d = delta.dim + 1
    lin = fan.lineality()
    skel = delta.skeleton()
    for T in sorted(skel.facets, key=lambda f: sorted(map(repr, f))):
        if T and not lin.projects_onto(tuple(sorted(T, key=repr))):
            raise hered.NotHereditaryError(T)
    coords = dict(zip(fan.ray_labels, direction_coords(v, fan.ray_labels)))
    amb_idx = {u: i for i, u in enumerate(fan.ray_labels)}

    def project(x: dict, S: frozenset, i) -> dict:
        values = {j: ZERO for j in S}
        values[i] = ONE
        ell = lin.member_with_values(values)
        if ell is None:
            raise hered.NotHereditaryError(S | {i})
        xi = x[i]
        return {u: xu - xi * ell[amb_idx[u]] for u, xu in x.items()}

    def face_ok(S: frozenset, x: dict) -> bool:
        V_S = delta.link_vertices(S)
        LS = lin.vanishing_restrict(tuple(S), V_S)
        sys = StrictSystem(aux=tuple(("a", k) for k in range(LS.dim)))
        for r, u in enumerate(V_S):
            row = {("a", k): LS.basis[k][r] for k in range(LS.dim)}
            sys.add(row, GT, x[u])
        return strict_feasible(sys) is not None

    def descend(S: frozenset, x: dict) -> bool:
        if not face_ok(S, x):
            return False
        if len(S) == d - 1:
            return True
        return all(
            descend(S | {i}, project(x, S, i))
            for i in delta.link_vertices(S)
        )

    return descend(frozenset(), coords)


# ---------------------------------------------------------------------------
# stellar subdivision of fans
# ---------------------------------------------------------------------------


def locate_relative_interior(fan: Fan, rho: Sequence) -> tuple[frozenset, tuple]:
    """The unique cone with rho in its relative interior, with the positive
    combination coefficients (aligned with the sorted face labels)."""
    rho = tuple(Q(x) for x in rho)
    for S in sorted(fan.cones.faces(), key=lambda f: (len(f), sorted(map(repr, f)))):
        if not S:
            continue
        labels = sorted(S, key=repr)
        c = try_positive_combination(rho, [fan.ray(v) for v in labels])
        if c is not None:
            return frozenset(S), c
    raise ValueError("ray is not in the relative interior of any cone")


def fan_subdivide(fan: Fan, rho: Sequence, new_label=None):
    """Stellar subdivision at an interior ray; returns the new fan and the
    functional transport map (the polynomial-side subdivision operator)."""
    from . import subdivision as subdiv

    S, c = locate_relative_interior(fan, rho)
    labels_sorted = tuple(sorted(S, key=repr))
    if new_label is None:
        new_label = fresh_vertex(fan.ray_labels, prefix="r")
    new_cones = fan.cones.stellar_subdivide(S, new_vertex=new_label)
    new_fan = Fan(
        dim=fan.dim,
        ray_labels=fan.ray_labels + (new_label,),
        rays=fan.rays + (tuple(Q(x) for x in rho),),
        cones=new_cones,
    )

    def transport(alpha: DegreeFunctional) -> DegreeFunctional:
        g = subdiv.subdivide(alpha.h.f, labels_sorted, c, vertex=new_label)
        return DegreeFunctional(fan=new_fan, grade=alpha.grade, h=hered.check_hereditary(g))

    return new_fan, transport


def fan_weld(fan: Fan, apex, S: Iterable):
    """Inverse stellar subdivision: remove the apex ray, restoring the face S.

    The combination coefficients are recovered from the ray geometry and
    must be strictly positive.
    """
    S = frozenset(S)
    labels_sorted = tuple(sorted(S, key=repr))
    c = try_positive_combination(fan.ray(apex), [fan.ray(v) for v in labels_sorted])
    if c is None:
        raise ValueError("apex ray is not a positive combination of the face rays")
    new_cones = fan.cones.weld(apex, S)
    keep = [i for i, v in enumerate(fan.ray_labels) if v != apex]
    new_fan = Fan(
        dim=fan.dim,
        ray_labels=tuple(fan.ray_labels[i] for i in keep),
        rays=tuple(fan.rays[i] for i in keep),
        cones=new_cones,
    )

    def transport(alpha: DegreeFunctional) -> DegreeFunctional:
        from . import subdivision as subdiv

        g = subdiv.weld(alpha.h.f, labels_sorted, c, apex)
        return DegreeFunctional(fan=new_fan, grade=alpha.grade, h=hered.check_hereditary(g))

    return new_fan, transport


def transport_chain(fan: Fan, alpha: DegreeFunctional, steps: Sequence[Mapping]):
    """Apply subdivide/weld steps to a fan and its functional in lockstep."""
    for step in steps:
        kind = step["kind"]
        if kind == "subdivide":
            rho = step.get("ray")
            if rho is None:
                S = tuple(step["face"])
                c = [Q(str(x)) for x in step["c"]]
                rho = tuple(sum((ci * xi for ci, xi in zip(c, comp)), ZERO)
                            for comp in zip(*[fan.ray(v) for v in S]))
            fan, transport = fan_subdivide(fan, rho, new_label=step.get("vertex"))
        elif kind == "weld":
            fan, transport = fan_weld(fan, step["vertex"], step["face"])
        else:
            raise ValueError(f"bad step kind {kind!r}")
        alpha = transport(alpha)
    return fan, alpha


# ---------------------------------------------------------------------------
# support invariance
# ---------------------------------------------------------------------------


def overlapping_facet_pairs(fan1: Fan, fan2: Fan) -> list[tuple[frozenset, frozenset]]:
    """Maximal cone pairs whose intersection has nonempty interior, by LP."""
    out = []
    idx1, idx2 = fan1._index(), fan2._index()
    for A in sorted(fan1.cones.facets, key=lambda f: sorted(map(repr, f))):
        for B in sorted(fan2.cones.facets, key=lambda f: sorted(map(repr, f))):
            sys = StrictSystem(vars=tuple(("l", v) for v in A) + tuple(("m", v) for v in B))
            for v in A:
                sys.add({("l", v): ONE}, GT)
            for v in B:
                sys.add({("m", v): ONE}, GT)
            for k in range(fan1.dim):
                row = {("l", v): fan1.rays[idx1[v]][k] for v in A}
                for v in B:
                    row[("m", v)] = row.get(("m", v), ZERO) - fan2.rays[idx2[v]][k]
                sys.add(row, EQ)
            if strict_feasible(sys) is not None:
                out.append((A, B))
    return out


def canonical_bijection_check(
    fan1: Fan, alpha1: DegreeFunctional, fan2: Fan, alpha2: DegreeFunctional,
    pairs: Sequence[tuple] | None = None,
) -> bool:
    """Volume-weighted facet values agree on overlapping maximal cones.

    Compares squared Gram determinants times squared weights, with explicit
    sign agreement; exact despite the irrational relative volumes.
    """
    if fan1.dim != fan2.dim:
        raise ValueError("fans live in different ambient dimensions")
    if pairs is None:
        pairs = overlapping_facet_pairs(fan1, fan2)
    if not pairs:
        raise ValueError("no overlapping maximal cone pairs")
    from .rat import sign

    for A, B in pairs:
        w1, w2 = alpha1.weight(A), alpha2.weight(B)
        if sign(w1) != sign(w2):
            return False
        if fan1.gram_det_sq(A) * w1 ** 2 != fan2.gram_det_sq(B) * w2 ** 2:
            return False
    return True


def star(fan: Fan, S: Iterable) -> Fan:
    """The star fan of a cone, in canonical quotient coordinates.

    Coordinates are the non-pivot positions after eliminating the cone's
    ray span; rays of the star are the reduced adjacent rays.
    """
    S = frozenset(S)
    if not fan.cones.has_face(S):
        raise ValueError(f"{set(S)} is not a cone")
    idx = fan._index()
    span_rows = [fan.rays[idx[v]] for v in sorted(S, key=repr)]
    R, pivots = linalg.rref(span_rows)
    nonpivot = [k for k in range(fan.dim) if k not in pivots]

    def reduce(x: tuple) -> tuple:
        x = list(x)
        for row, p in zip(R, pivots):
            f = x[p]
            if f != 0:
                x = [xi - f * ri for xi, ri in zip(x, row)]
        return tuple(x[k] for k in nonpivot)

    V_S = fan.cones.link_vertices(S)
    link = fan.cones.link(S)
    link_full = SimComplex(V_S, link.facets)
    return Fan(dim=len(nonpivot), ray_labels=tuple(V_S),
               rays=tuple(reduce(fan.ray(v)) for v in V_S), cones=link_full)
