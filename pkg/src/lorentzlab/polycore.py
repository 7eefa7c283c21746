"""Sparse homogeneous polynomials with exact rational coefficients.

A ``HomPoly`` is a map from sparse exponent multi-indices to nonzero
rationals, over an ordered tuple of variable labels.  Labels are arbitrary
hashable values (ints, strings, frozensets of matroid flats, fan ray names);
the construction order of ``vars`` is the canonical order used everywhere.

Invariants enforced at construction: every stored coefficient is nonzero and
every stored multi-index has total degree equal to ``degree``.  The zero
polynomial is an empty term map with an explicit degree tag, so derivative
chains and face restrictions keep a well-defined grade.

Exponent keys are stored sparsely as tuples of (variable position, exponent)
pairs sorted by position, with all exponents >= 1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import linalg
from .rat import Q, ZERO, ONE, rat_str

Label = Hashable
Key = tuple  # sorted tuple of (position, exponent) pairs


def _key_degree(key: Key) -> int:
    return sum(e for _, e in key)


def _key_mul(a: Key, b: Key) -> Key:
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


class HomPoly:
    """Homogeneous polynomial over an ordered, labeled variable set."""

    __slots__ = ("vars", "degree", "terms", "_index")

    def __init__(self, vars: Sequence[Label], degree: int, terms: Mapping[Key, object]):
        vs = tuple(vars)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variable labels")
        clean: dict[Key, object] = {}
        for key, c in terms.items():
            c = Q(c)
            if c == 0:
                continue
            key = tuple(sorted(key))
            if _key_degree(key) != degree:
                raise ValueError(f"term {key} has degree {_key_degree(key)}, expected {degree}")
            if any(e < 1 for _, e in key) or any(not 0 <= i < len(vs) for i, _ in key):
                raise ValueError(f"malformed exponent key {key}")
            clean[key] = clean.get(key, ZERO) + c
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", {k: c for k, c in clean.items() if c != 0})
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(vs)})

    def __setattr__(self, *a):  # immutable after construction
        raise AttributeError("HomPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[Label], degree: int = 0) -> "HomPoly":
        return cls(vars, degree, {})

    @classmethod
    def constant(cls, vars: Sequence[Label], value) -> "HomPoly":
        return cls(vars, 0, {(): Q(value)})

    @classmethod
    def variable(cls, vars: Sequence[Label], v: Label) -> "HomPoly":
        vs = tuple(vars)
        return cls(vs, 1, {((vs.index(v), 1),): ONE})

    @classmethod
    def from_dense(cls, vars: Sequence[Label], degree: int, dense: Mapping[tuple, object]) -> "HomPoly":
        """Build from dense exponent tuples aligned with ``vars``."""
        terms = {}
        for exps, c in dense.items():
            key = tuple((i, e) for i, e in enumerate(exps) if e)
            terms[key] = terms.get(key, ZERO) + Q(c)
        return cls(vars, degree, terms)

    # -- basics --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def index_of(self, v: Label) -> int:
        return self._index[v]

    def coeff(self, exps: Sequence[int]):
        key = tuple((i, e) for i, e in enumerate(exps) if e)
        return self.terms.get(key, ZERO)

    def dense_terms(self) -> dict[tuple, object]:
        n = len(self.vars)
        out = {}
        for key, c in self.terms.items():
            exps = [0] * n
            for i, e in key:
                exps[i] = e
            out[tuple(exps)] = c
        return out

    def support(self) -> set[tuple]:
        """Multi-indices with nonzero coefficient, as dense tuples."""
        return set(self.dense_terms())

    def support_sets(self) -> set[frozenset]:
        """Variable-label support of each monomial (squarefree shadow)."""
        return {frozenset(self.vars[i] for i, _ in key) for key in self.terms}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomPoly)
            and self.vars == other.vars
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, self.degree, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"HomPoly({self.to_text()!r})"

    # -- ring operations ----------------------------------------------------

    def _require_same_space(self, other: "HomPoly"):
        if self.vars != other.vars:
            raise ValueError("polynomials live on different variable sets")

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._require_same_space(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add polynomials of different degrees")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, ZERO) + c
        return HomPoly(self.vars, self.degree, terms)

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "HomPoly":
        c = Q(c)
        return HomPoly(self.vars, self.degree, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "HomPoly") -> "HomPoly":
        self._require_same_space(other)
        deg = self.degree + other.degree
        if self.is_zero() or other.is_zero():
            return HomPoly.zero(self.vars, deg)
        terms: dict[Key, object] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = _key_mul(ka, kb)
                terms[k] = terms.get(k, ZERO) + ca * cb
        return HomPoly(self.vars, deg, terms)

    def pow(self, n: int) -> "HomPoly":
        out = HomPoly.constant(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- evaluation and derivatives ------------------------------------------

    def _coerce_point(self, point) -> tuple:
        if isinstance(point, Mapping):
            return tuple(Q(point[v]) for v in self.vars)
        pt = tuple(Q(x) for x in point)
        if len(pt) != len(self.vars):
            raise ValueError("point has wrong dimension")
        return pt

    def evaluate(self, point):
        """Exact value at a rational point (mapping by label, or aligned sequence)."""
        pt = self._coerce_point(point)
        total = ZERO
        for key, c in self.terms.items():
            v = c
            for i, e in key:
                v *= pt[i] ** e
            total += v
        return total

    def partial(self, v: Label) -> "HomPoly":
        """Single partial derivative with respect to the variable labeled v."""
        i = self._index[v]
        deg = self.degree - 1 if self.degree > 0 else 0
        terms: dict[Key, object] = {}
        for key, c in self.terms.items():
            d = dict(key)
            e = d.get(i, 0)
            if not e:
                continue
            if e == 1:
                del d[i]
            else:
                d[i] = e - 1
            k = tuple(sorted(d.items()))
            terms[k] = terms.get(k, ZERO) + c * e
        return HomPoly(self.vars, deg, terms)

    def dir_derivative(self, v) -> "HomPoly":
        """Directional derivative: sum over i of v_i * (d/dt_i)."""
        coords = direction_coords(v, self.vars)
        if self.degree == 0:
            return HomPoly.zero(self.vars, 0)
        out = HomPoly.zero(self.vars, self.degree - 1)
        for lab, c in zip(self.vars, coords):
            if c != 0:
                out = out + self.partial(lab).scale(c)
        return out

    def mixed_partial(self, alpha) -> "HomPoly":
        """Apply the mixed partial for a multi-index (mapping, sequence, or label set)."""
        out = self
        for lab, e in _coerce_multi(alpha, self.vars):
            for _ in range(e):
                out = out.partial(lab)
        return out

    def set_vars_zero(self, S: Iterable[Label]) -> "HomPoly":
        idx = {self._index[v] for v in S}
        terms = {k: c for k, c in self.terms.items() if not any(i in idx for i, _ in k)}
        return HomPoly(self.vars, self.degree, terms)

    # -- substitution ---------------------------------------------------------

    def substitute(self, new_vars: Sequence[Label], forms: Mapping[Label, Mapping[Label, object]]) -> "HomPoly":
        """Substitute a linear form (over new_vars) for each old variable.

        Missing old variables map to zero.  Exact; the result is homogeneous
        of the same degree.
        """
        new_vars = tuple(new_vars)
        nidx = {v: i for i, v in enumerate(new_vars)}
        images: list[HomPoly] = []
        for v in self.vars:
            form = forms.get(v, {})
            terms = {((nidx[w], 1),): Q(c) for w, c in form.items() if Q(c) != 0}
            images.append(HomPoly(new_vars, 1, terms))
        out = HomPoly.zero(new_vars, self.degree)
        pow_cache: dict[tuple[int, int], HomPoly] = {}
        for key, c in self.terms.items():
            term = HomPoly.constant(new_vars, c)
            for i, e in key:
                p = pow_cache.get((i, e))
                if p is None:
                    p = images[i].pow(e)
                    pow_cache[(i, e)] = p
                term = term * p
            out = out + term
        return out

    def substitute_linear(self, A: Sequence[Sequence], new_vars: Sequence[Label]) -> "HomPoly":
        """g(x) = f(Ax) where A has one row per f-variable, one column per new variable."""
        if len(A) != len(self.vars):
            raise ValueError("substitution matrix has wrong number of rows")
        new_vars = tuple(new_vars)
        forms = {}
        for v, row in zip(self.vars, A):
            if len(row) != len(new_vars):
                raise ValueError("substitution matrix has wrong number of columns")
            forms[v] = {w: c for w, c in zip(new_vars, row)}
        return self.substitute(new_vars, forms)

    def rename_vars(self, mapping: Mapping[Label, Label]) -> "HomPoly":
        return HomPoly(tuple(mapping.get(v, v) for v in self.vars), self.degree, self.terms)

    def restrict_vars(self, keep: Sequence[Label]) -> "HomPoly":
        """Project onto a variable subset; terms touching dropped variables must vanish."""
        keep = tuple(keep)
        pos = {self._index[v]: j for j, v in enumerate(keep)}
        terms = {}
        for key, c in self.terms.items():
            if any(i not in pos for i, _ in key):
                raise ValueError("polynomial involves a dropped variable")
            terms[tuple(sorted((pos[i], e) for i, e in key))] = c
        return HomPoly(keep, self.degree, terms)

    # -- structure ------------------------------------------------------------

    def lineality_space(self) -> "LinSubspace":
        """All v with D_v f identically zero, by exact linear solve."""
        n = len(self.vars)
        partials = [self.partial(v) for v in self.vars]
        rows_by_monomial: dict[Key, list] = {}
        for i, p in enumerate(partials):
            for key, c in p.terms.items():
                row = rows_by_monomial.setdefault(key, [ZERO] * n)
                row[i] = c
        A = [tuple(row) for row in rows_by_monomial.values()]
        return LinSubspace(self.vars, linalg.nullspace(A, n))

    def euler_defect(self) -> "HomPoly":
        """d*f - sum_i t_i * (d/dt_i) f; identically zero by Euler's identity."""
        out = self.scale(self.degree)
        for v in self.vars:
            out = out - HomPoly.variable(self.vars, v) * self.partial(v)
        return out

    # -- text and JSON forms ----------------------------------------------------

    def to_text(self, label_str: Callable[[Label], str] = str) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for key in sorted(self.terms):
            c = self.terms[key]
            mono = " ".join(
                label_str(self.vars[i]) + (f"^{e}" if e > 1 else "") for i, e in key
            )
            body = f"{rat_str(abs(c))}*{mono}" if mono else rat_str(abs(c))
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json_dict(self) -> dict:
        return {
            "vars": [str(v) for v in self.vars],
            "degree": self.degree,
            "terms": [
                {"exps": list(exps), "coeff": rat_str(c)}
                for exps, c in sorted(self.dense_terms().items())
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "HomPoly":
        vars = tuple(data["vars"])
        dense = {tuple(t["exps"]): Q(str(t["coeff"])) for t in data["terms"]}
        degree = data.get("degree")
        if degree is None:
            if not dense:
                raise ValueError("zero polynomial needs an explicit degree")
            degree = sum(next(iter(dense)))
        return cls.from_dense(vars, degree, dense)

    @classmethod
    def from_json(cls, text: str) -> "HomPoly":
        return cls.from_json_dict(json.loads(text))


_TERM_RE = re.compile(r"[+-]|[A-Za-z_][A-Za-z0-9_]*(?:\^\d+)?|\d+(?:/\d+)?|\*")


def parse_poly(text: str, vars: Sequence[Label] | None = None) -> HomPoly:
    """Parse the text grammar: rational coefficient, '*', space-separated powers.

    Example: ``"1*t1^2 t2 - 1/2*t2^3"``.  The coefficient and '*' may be
    omitted.  Variables default to the sorted names appearing in the text.
    """
    tokens = _TERM_RE.findall(text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        raise ValueError(f"cannot tokenize polynomial text: {text!r}")
    monomials: list[tuple[object, dict[str, int]]] = []
    sign, coeff, powers = 1, None, {}

    def flush():
        nonlocal sign, coeff, powers
        if coeff is None and not powers:
            return
        c = Q(sign) * (Q(1) if coeff is None else coeff)
        monomials.append((c, powers))
        sign, coeff, powers = 1, None, {}

    for tok in tokens:
        if tok in "+-":
            flush()
            sign = 1 if tok == "+" else -1
        elif tok == "*":
            continue
        elif tok[0].isdigit():
            coeff = Q(tok) if coeff is None else coeff * Q(tok)
        else:
            name, _, exp = tok.partition("^")
            powers = dict(powers)
            powers[name] = powers.get(name, 0) + (int(exp) if exp else 1)
    flush()
    if vars is None:
        vars = tuple(sorted({v for _, p in monomials for v in p}))
    vars = tuple(vars)
    if not monomials:
        return HomPoly.zero(vars, 0)
    degrees = {sum(p.values()) for _, p in monomials}
    if len(degrees) != 1:
        raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
    idx = {v: i for i, v in enumerate(vars)}
    terms: dict[Key, object] = {}
    for c, p in monomials:
        key = tuple(sorted((idx[v], e) for v, e in p.items()))
        terms[key] = terms.get(key, ZERO) + c
    return HomPoly(vars, degrees.pop(), terms)


def _coerce_multi(alpha, vars: Sequence[Label]) -> list[tuple[Label, int]]:
    if isinstance(alpha, Mapping):
        return [(v, int(e)) for v, e in alpha.items()]
    alpha = list(alpha)
    if alpha and all(isinstance(e, int) for e in alpha) and len(alpha) == len(vars):
        return [(v, e) for v, e in zip(vars, alpha) if e]
    # otherwise: an iterable of labels, interpreted as a 0/1 indicator
    return [(v, 1) for v in alpha]


def monomials_of_degree(n_vars: int, degree: int) -> Iterable[tuple]:
    """All dense exponent tuples of the given total degree."""
    for combo in combinations_with_replacement(range(n_vars), degree):
        exps = [0] * n_vars
        for i in combo:
            exps[i] += 1
        yield tuple(exps)


@dataclass(frozen=True)
class Direction:
    """A rational vector indexed by an ordered variable set."""

    vars: tuple
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "coords", tuple(Q(c) for c in self.coords))
        if len(self.vars) != len(self.coords):
            raise ValueError("direction has wrong dimension")

    def __getitem__(self, label):
        return self.coords[self.vars.index(label)]


def direction_coords(v, vars: Sequence[Label]) -> tuple:
    """Coerce a Direction, mapping, or aligned sequence to coordinates over vars."""
    vars = tuple(vars)
    if isinstance(v, Direction):
        if v.vars != vars:
            raise ValueError("direction indexed by a different variable set")
        return v.coords
    if isinstance(v, Mapping):
        return tuple(Q(v.get(lab, 0)) for lab in vars)
    coords = tuple(Q(x) for x in v)
    if len(coords) != len(vars):
        raise ValueError("direction has wrong dimension")
    return coords


class LinSubspace:
    """A rational subspace of R^V, stored by a canonical (rref) basis."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: Sequence[Label], basis: Iterable[Sequence]):
        object.__setattr__(self, "ambient", tuple(ambient))
        rows = [tuple(Q(x) for x in b) for b in basis]
        for r in rows:
            if len(r) != len(self.ambient):
                raise ValueError("basis vector has wrong dimension")
        object.__setattr__(self, "basis", linalg.row_space_basis(rows))

    def __setattr__(self, *a):
        raise AttributeError("LinSubspace is immutable")

    @classmethod
    def zero(cls, ambient: Sequence[Label]) -> "LinSubspace":
        return cls(ambient, [])

    @classmethod
    def full(cls, ambient: Sequence[Label]) -> "LinSubspace":
        n = len(tuple(ambient))
        return cls(ambient, [linalg.unit(n, i) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        coords = direction_coords(v, self.ambient)
        return linalg.rank(list(self.basis) + [coords]) == self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinSubspace)
            and self.ambient == other.ambient
            and self.basis == other.basis  # rref basis is canonical
        )

    def __hash__(self):
        return hash((self.ambient, tuple(self.basis)))

    def __repr__(self):
        return f"LinSubspace(dim={self.dim} in R^{len(self.ambient)})"

    def add(self, other: "LinSubspace") -> "LinSubspace":
        if self.ambient != other.ambient:
            raise ValueError("subspaces of different ambient spaces")
        return LinSubspace(self.ambient, list(self.basis) + list(other.basis))

    def _positions(self, coords: Sequence[Label]) -> list[int]:
        idx = {v: i for i, v in enumerate(self.ambient)}
        return [idx[c] for c in coords]

    def restrict(self, coords: Sequence[Label]) -> "LinSubspace":
        """Image of the subspace under coordinate projection onto ``coords``."""
        pos = self._positions(coords)
        return LinSubspace(tuple(coords), [tuple(b[p] for p in pos) for b in self.basis])

    def projects_onto(self, coords: Sequence[Label]) -> bool:
        """Whether the projection onto ``coords`` is all of R^coords."""
        return self.restrict(coords).dim == len(tuple(coords))

    def vanishing_restrict(self, zero_on: Sequence[Label], coords: Sequence[Label]) -> "LinSubspace":
        """{ l|_coords : l in L, l_j = 0 for j in zero_on }."""
        zpos = self._positions(zero_on)
        A = [tuple(b[p] for b in self.basis) for p in zpos]
        keep = linalg.nullspace(A, self.dim)
        pos = self._positions(coords)
        rows = []
        for a in keep:
            full = [ZERO] * len(self.ambient)
            for coef, b in zip(a, self.basis):
                for j, x in enumerate(b):
                    full[j] += coef * x
            rows.append(tuple(full[p] for p in pos))
        return LinSubspace(tuple(coords), rows)

    def member_with_values(self, values: Mapping[Label, object]):
        """Deterministic element of L with prescribed coordinates, or None.

        Returns the basic solution (free coefficients zero) of the linear
        system on basis coefficients, so repeated calls agree exactly.
        """
        pos = [(self.ambient.index(v), Q(c)) for v, c in values.items()]
        A = [tuple(b[p] for b in self.basis) for p, _ in pos]
        rhs = [c for _, c in pos]
        a = linalg.solve(A, rhs)
        if a is None:
            return None
        full = [ZERO] * len(self.ambient)
        for coef, b in zip(a, self.basis):
            for j, x in enumerate(b):
                full[j] += coef * x
        return tuple(full)

    def direct_sum(self, other: "LinSubspace") -> "LinSubspace":
        amb = self.ambient + other.ambient
        n1, n2 = len(self.ambient), len(other.ambient)
        rows = [b + linalg.zeros(n2) for b in self.basis]
        rows += [linalg.zeros(n1) + b for b in other.basis]
        return LinSubspace(amb, rows)
