"""Finite quivers and bound quiver algebras kQ/I.

Paths are stored in composition order: the word ``[g, a]`` means first
``a``, then ``g`` (so ``s(g) = t(a)``). Files use the same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .linalg import Field, rank, rref

DEFAULT_CAP = 64


class AlgebraError(ValueError):
    pass


class MalformedPath(AlgebraError):
    pass


class CapExceeded(AlgebraError):
    pass


class NotAdmissible(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow names")
        clash = set(names) & set(self.vertices)
        if clash:
            raise AlgebraError(f"names used for both vertices and arrows: {sorted(clash)}")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise AlgebraError(f"arrow {a.name} has an undeclared endpoint")

    @cached_property
    def _by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise MalformedPath(f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def arrows_from(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        stack = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for a in self.arrows_from(v):
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    stack.append(a.target)
        return seen == len(self.vertices)


@dataclass(frozen=True)
class Path:
    """A path in composition order, or the stationary path at ``vertex``."""

    arrows: tuple[str, ...] = ()
    vertex: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if not self.arrows and self.vertex is None:
            raise MalformedPath("a stationary path needs its vertex")
        if self.arrows and self.vertex is not None:
            object.__setattr__(self, "vertex", None)

    @classmethod
    def stationary(cls, v: str) -> "Path":
        return cls((), v)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def check(self, q: Quiver) -> "Path":
        for name in self.arrows:
            q.arrow(name)
        for left, right in zip(self.arrows, self.arrows[1:]):
            if q.arrow(left).source != q.arrow(right).target:
                raise MalformedPath(f"{left} does not compose after {right} in {self}")
        if self.vertex is not None and self.vertex not in q.vertices:
            raise MalformedPath(f"unknown vertex {self.vertex!r}")
        return self

    def source(self, q: Quiver) -> str:
        return self.vertex if not self.arrows else q.arrow(self.arrows[-1]).source

    def target(self, q: Quiver) -> str:
        return self.vertex if not self.arrows else q.arrow(self.arrows[0]).target

    def contains(self, sub: "Path") -> bool:
        n, k = len(self.arrows), len(sub.arrows)
        return any(self.arrows[i : i + k] == sub.arrows for i in range(n - k + 1))

    def sort_key(self, q: Quiver):
        if not self.arrows:
            return (0, q.vertices.index(self.vertex), ())
        return (self.length, 0, self.arrows)

    def __str__(self):
        return f"e_{self.vertex}" if not self.arrows else " ".join(self.arrows)


def compose(q: Quiver, left: Path, right: Path) -> Path | None:
    """``left * right`` (right applied first) or ``None`` if not composable."""
    if left.source(q) != right.target(q):
        return None
    if not left.arrows:
        return right
    if not right.arrows:
        return left
    return Path(left.arrows + right.arrows)


@dataclass(frozen=True)
class RelationSet:
    monomial: tuple[Path, ...] = ()
    general: tuple[tuple[tuple[Fraction, Path], ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "monomial", tuple(self.monomial))
        object.__setattr__(
            self,
            "general",
            tuple(tuple((Fraction(c), p) for c, p in rel) for rel in self.general),
        )


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    nilpotency: int


def all_paths(q: Quiver, length: int) -> list[Path]:
    if length == 0:
        return [Path.stationary(v) for v in q.vertices]
    paths = [Path((a.name,)) for a in q.arrows]
    for _ in range(length - 1):
        paths = [
            Path((a.name,) + p.arrows) for p in paths for a in q.arrows_from(p.target(q))
        ]
    return paths


def _check_relations(q: Quiver, r: RelationSet):
    for p in r.monomial:
        p.check(q)
        if p.length < 2:
            raise NotAdmissible(f"relation {p} has length < 2")
    for rel in r.general:
        if not rel:
            raise MalformedPath("empty general relation")
        ends = set()
        for _, p in rel:
            p.check(q)
            if p.length < 2:
                raise NotAdmissible(f"relation term {p} has length < 2")
            ends.add((p.source(q), p.target(q)))
        if len(ends) != 1:
            raise MalformedPath("terms of a general relation are not parallel")


def validate_admissible(q: Quiver, r: RelationSet, cap: int = DEFAULT_CAP) -> AdmissibilityReport:
    """Smallest ``n >= 2`` with every path of length ``n`` in the ideal."""
    _check_relations(q, r)
    if r.general:
        if not q.is_acyclic():
            raise AlgebraError("general (non-monomial) relations are supported on acyclic quivers only")
        ideal = _LinearIdeal(q, r, Field(None))
        n = 2
        while any(not ideal.contains_path(p) for p in all_paths(q, n)):
            n += 1
            if n > cap:
                raise CapExceeded(f"no nilpotency bound up to {cap}")
        return AdmissibilityReport(True, n)
    length, alive = 1, [Path((a.name,)) for a in q.arrows]
    while alive:
        if length >= cap:
            raise CapExceeded(f"paths of length {cap} survive the ideal")
        nxt = []
        for p in alive:
            for a in q.arrows_from(p.target(q)):
                cand = Path((a.name,) + p.arrows)
                if not any(cand.contains(g) for g in r.monomial):
                    nxt.append(cand)
        length, alive = length + 1, nxt
    return AdmissibilityReport(True, max(length, 2))


class _LinearIdeal:
    """The ideal of an acyclic kQ as a subspace of the (finite) path space."""

    def __init__(self, q: Quiver, r: RelationSet, field: Field):
        self.q, self.field = q, field
        paths = []
        length = 0
        while True:
            layer = all_paths(q, length)
            if not layer:
                break
            paths.extend(layer)
            length += 1
        # largest paths first so pivots land on leading terms
        self.paths = sorted(paths, key=lambda p: p.sort_key(q), reverse=True)
        self.index = {p: i for i, p in enumerate(self.paths)}
        gens = [[(Fraction(1), m)] for m in r.monomial] + [list(g) for g in r.general]
        rows = []
        for g in gens:
            s, t = g[0][1].source(q), g[0][1].target(q)
            lefts = [p for p in self.paths if p.source(q) == t]
            rights = [p for p in self.paths if p.target(q) == s]
            for lp in lefts:
                for rp in rights:
                    row = [0] * len(self.paths)
                    for c, term in g:
                        full = compose(q, lp, compose(q, term, rp))
                        row[self.index[full]] += c
                    rows.append(row)
        if rows:
            R, piv = rref(field, field.array(rows))
            self.basis = R[: len(piv)]
            self.pivots = piv
        else:
            self.basis = field.zeros(0, len(self.paths))
            self.pivots = []
        self.dim = len(self.pivots)

    def contains_vector(self, v) -> bool:
        if self.dim == 0:
            return self.field.is_zero(self.field.array(v))
        stacked = np.vstack([self.basis, self.field.array(v).reshape(1, -1)])
        return rank(self.field, stacked) == self.dim

    def contains_path(self, p: Path) -> bool:
        v = [0] * len(self.paths)
        v[self.index[p]] = 1
        return self.contains_vector(v)

    def standard_paths(self) -> list[Path]:
        lead = {self.paths[c] for c in self.pivots}
        return [p for p in self.paths if p not in lead]


class BoundQuiverAlgebra:
    """``kQ/I`` with ``I`` admissible. Immutable after construction."""

    def __init__(self, quiver: Quiver, relations: RelationSet | None = None, *,
                 field: Field | None = None, name: str = "", cap: int = DEFAULT_CAP):
        self.quiver = quiver
        self.relations = relations or RelationSet()
        self.field = field or Field()
        self.name = name
        self.cap = cap
        self.admissibility = validate_admissible(quiver, self.relations, cap)
        self._linear = (
            _LinearIdeal(quiver, self.relations, self.field) if self.relations.general else None
        )
        self.basis = self._compute_basis()
        self._basis_index = {p: i for i, p in enumerate(self.basis)}

    def __repr__(self):
        return f"BoundQuiverAlgebra({self.name or '?'}, dim={self.dim}, {self.field})"

    def __eq__(self, other):
        return (
            isinstance(other, BoundQuiverAlgebra)
            and self.quiver == other.quiver
            and self.relations == other.relations
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.quiver, self.relations, self.field))

    def __getstate__(self):
        state = self.__dict__.copy()
        state.pop("_linear", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._linear = (
            _LinearIdeal(self.quiver, self.relations, self.field) if self.relations.general else None
        )

    def with_field(self, field: Field) -> "BoundQuiverAlgebra":
        return BoundQuiverAlgebra(self.quiver, self.relations, field=field, name=self.name, cap=self.cap)

    @property
    def nilpotency(self) -> int:
        return self.admissibility.nilpotency

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def is_monomial(self) -> bool:
        return not self.relations.general

    def in_ideal(self, p: Path) -> bool:
        if self._linear is not None:
            return self._linear.contains_path(p)
        return any(p.contains(g) for g in self.relations.monomial)

    def _compute_basis(self) -> list[Path]:
        if self._linear is not None:
            return sorted(self._linear.standard_paths(), key=lambda p: p.sort_key(self.quiver))
        out = []
        for length in range(self.nilpotency):
            out.extend(p for p in all_paths(self.quiver, length) if not self.in_ideal(p))
        return sorted(out, key=lambda p: p.sort_key(self.quiver))

    def basis_index(self, p: Path) -> int:
        return self._basis_index[p]

    def multiply_paths(self, left: Path, right: Path) -> Path | None:
        """Product of basis paths in a monomial algebra (``None`` for zero)."""
        if not self.is_monomial:
            raise AlgebraError("path multiplication is only implemented for monomial algebras")
        prod = compose(self.quiver, left, right)
        if prod is None or self.in_ideal(prod):
            return None
        return prod

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two elements given as coefficient vectors on the basis."""
        F = self.field
        out = F.zeros(1, self.dim)[0]
        for i in np.flatnonzero(x != 0):
            for j in np.flatnonzero(y != 0):
                prod = self.multiply_paths(self.basis[i], self.basis[j])
                if prod is not None:
                    k = self._basis_index[prod]
                    out[k] = F.reduce(out[k] + x[i] * y[j])
        return out

    def element(self, terms: dict[Path, object]) -> np.ndarray:
        F = self.field
        out = F.zeros(1, self.dim)[0]
        for p, c in terms.items():
            out[self._basis_index[p]] = F.reduce(out[self._basis_index[p]] + F.scalar(c))
        return out

    def one(self) -> np.ndarray:
        return self.element({Path.stationary(v): 1 for v in self.vertices})


def is_special_biserial(a: BoundQuiverAlgebra):
    """``(True, None)`` or ``(False, witness)``.

    The witness is ``("vertex", v)`` for a vertex with too many arrows, or
    ``("arrows", beta, (x, y))`` when two arrows both compose with ``beta``
    outside the ideal.
    """
    q = a.quiver
    for v in q.vertices:
        if len(q.arrows_from(v)) > 2 or len(q.arrows_into(v)) > 2:
            return False, ("vertex", v)
    for beta in q.arrows:
        before = [al.name for al in q.arrows_into(beta.source)
                  if not a.in_ideal(Path((beta.name, al.name)))]
        if len(before) > 1:
            return False, ("arrows", beta.name, tuple(before[:2]))
        after = [g.name for g in q.arrows_from(beta.target)
                 if not a.in_ideal(Path((g.name, beta.name)))]
        if len(after) > 1:
            return False, ("arrows", beta.name, tuple(after[:2]))
    return True, None


def is_string_algebra(a: BoundQuiverAlgebra) -> bool:
    return is_special_biserial(a)[0] and a.is_monomial
