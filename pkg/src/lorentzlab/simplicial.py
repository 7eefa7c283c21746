"""Abstract simplicial complexes stored by their facets.

A face is any subset of a facet, so membership tests are subset checks and
links/joins stay cheap at desk scale.  The complex {()} consisting of only
the empty face is distinct from the void complex with no faces at all (the
latter is the face complex of the zero polynomial).  Vertices not lying in
any facet are allowed: they index ambient coordinates (e.g. polynomial
variables that happen not to occur).
"""

from __future__ import annotations

from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

Label = Hashable


class SimComplex:
    __slots__ = ("vertices", "facets")

    def __init__(self, vertices: Sequence[Label], facets: Iterable[Iterable[Label]]):
        vs = tuple(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertices")
        fs = {frozenset(f) for f in facets}
        vset = set(vs)
        for f in fs:
            if not f <= vset:
                raise ValueError(f"facet {set(f)} uses unknown vertices")
        # antichain reduction: drop any facet contained in another
        fs = {f for f in fs if not any(f < g for g in fs)}
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "facets", frozenset(fs))

    def __setattr__(self, *a):
        raise AttributeError("SimComplex is immutable")

    @classmethod
    def empty_face_only(cls, vertices: Sequence[Label] = ()) -> "SimComplex":
        return cls(vertices, [frozenset()])

    @classmethod
    def void(cls, vertices: Sequence[Label] = ()) -> "SimComplex":
        return cls(vertices, [])

    # -- basic structure -----------------------------------------------------

    def is_void(self) -> bool:
        return not self.facets

    @property
    def dim(self) -> int | None:
        """Dimension (facet size - 1); None for the void complex."""
        if self.is_void():
            return None
        return max(len(f) for f in self.facets) - 1

    def has_face(self, S: Iterable[Label]) -> bool:
        S = frozenset(S)
        return any(S <= f for f in self.facets)

    def faces(self, max_size: int | None = None) -> set[frozenset]:
        out: set[frozenset] = set()
        for f in self.facets:
            top = len(f) if max_size is None else min(max_size, len(f))
            for k in range(top + 1):
                out.update(map(frozenset, combinations(sorted(f, key=repr), k)))
        return out

    def faces_of_size(self, k: int) -> set[frozenset]:
        out: set[frozenset] = set()
        for f in self.facets:
            if len(f) >= k:
                out.update(map(frozenset, combinations(sorted(f, key=repr), k)))
        return out

    def is_pure(self, d: int) -> bool:
        """Pure with all facets of cardinality d (dimension d-1)."""
        return bool(self.facets) and all(len(f) == d for f in self.facets)

    def used_vertices(self) -> frozenset:
        out = frozenset()
        for f in self.facets:
            out |= f
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SimComplex)
            and set(self.vertices) == set(other.vertices)
            and self.facets == other.facets
        )

    def __hash__(self):
        return hash((frozenset(self.vertices), self.facets))

    def __repr__(self):
        fs = sorted(tuple(sorted(f, key=repr)) for f in self.facets)
        return f"SimComplex(vertices={list(self.vertices)!r}, facets={fs!r})"

    # -- operations -----------------------------------------------------------

    def link(self, S: Iterable[Label]) -> "SimComplex":
        S = frozenset(S)
        if not self.has_face(S):
            raise ValueError(f"{set(S)} is not a face")
        facets = [f - S for f in self.facets if S <= f]
        verts = set()
        for f in facets:
            verts |= f
        return SimComplex(sorted(verts, key=repr), facets)

    def link_vertices(self, S: Iterable[Label]) -> tuple:
        """V_S: the j with S + {j} still a face, in ambient vertex order."""
        S = frozenset(S)
        out = set()
        for f in self.facets:
            if S <= f:
                out |= f - S
        return tuple(v for v in self.vertices if v in out)

    def skeleton(self) -> "SimComplex":
        """Remove all facets (the maximal faces)."""
        cand: set[frozenset] = set()
        for f in self.facets:
            if len(f) == 0:
                continue
            for v in f:
                cand.add(f - {v})
        return SimComplex(self.vertices, cand)

    def join(self, other: "SimComplex") -> "SimComplex":
        if set(self.vertices) & set(other.vertices):
            raise ValueError("join needs disjoint vertex sets")
        facets = [f | g for f in self.facets for g in other.facets]
        return SimComplex(self.vertices + other.vertices, facets)

    def rename(self, mapping: Mapping[Label, Label]) -> "SimComplex":
        return SimComplex(
            tuple(mapping.get(v, v) for v in self.vertices),
            [{mapping.get(v, v) for v in f} for f in self.facets],
        )

    def stellar_subdivide(self, S: Iterable[Label], new_vertex: Label | None = None) -> "SimComplex":
        """Subdivide at the face S: drop faces containing S, cone the rest.

        The new faces are R + {new} for every R with S not a subset of R and
        R + S a face.  The new vertex label is generated fresh unless given.
        """
        S = frozenset(S)
        if not S or not self.has_face(S):
            raise ValueError(f"{set(S)} is not a nonempty face")
        if new_vertex is None:
            new_vertex = fresh_vertex(self.vertices)
        elif new_vertex in self.vertices:
            raise ValueError(f"new vertex {new_vertex!r} already present")
        facets: list[frozenset] = [f for f in self.facets if not S <= f]
        for f in self.facets:
            if S <= f:
                for i in S:
                    facets.append((f - {i}) | {new_vertex})
        return SimComplex(self.vertices + (new_vertex,), facets)

    def weld(self, apex: Label, S: Iterable[Label]) -> "SimComplex":
        """Inverse of stellar subdivision at S with the given apex vertex."""
        S = frozenset(S)
        faces = set()
        for f in self.facets:
            if apex in f:
                faces.add((f - {apex}) | S)
            else:
                faces.add(f)
        return SimComplex(tuple(v for v in self.vertices if v != apex), faces)

    # -- connectivity -----------------------------------------------------------

    def is_connected(self) -> bool:
        """Connectivity of the 1-skeleton; complexes of dimension <= 0 count as connected."""
        verts = self.used_vertices()
        if len(verts) <= 1:
            return True
        adj: dict = {v: set() for v in verts}
        for f in self.facets:
            fl = sorted(f, key=repr)
            for a, b in combinations(fl, 2):
                adj[a].add(b)
                adj[b].add(a)
        start = next(iter(verts))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    def is_H_connected(self) -> tuple[bool, frozenset | None]:
        """Links of all faces of size <= d-2 are connected (d = facet size).

        Zero-dimensional complexes are H-connected by convention.  Returns
        (verdict, witness face with disconnected link).
        """
        if self.is_void():
            return True, None
        d = len(next(iter(self.facets)))
        if not self.is_pure(d):
            raise ValueError("H-connectedness is defined for pure complexes")
        if d <= 1:
            return True, None
        for k in range(d - 1):
            for S in sorted(self.faces_of_size(k), key=lambda s: tuple(sorted(map(repr, s)))):
                if not self.link(S).is_connected():
                    return False, S
        return True, None

    # -- serialization ------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": [str(v) for v in self.vertices],
            "facets": sorted(sorted(str(v) for v in f) for f in self.facets),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SimComplex":
        return cls(tuple(data["vertices"]), [frozenset(f) for f in data["facets"]])


def fresh_vertex(existing: Iterable[Label], prefix: str = "w") -> str:
    taken = set(existing)
    k = 0
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"
