"""Finite-dimensional representations of bound quiver algebras.

A representation stores one vector space per vertex (by dimension) and one
matrix per arrow, acting on column vectors: ``maps[a]`` has shape
``(dims[t(a)], dims[s(a)])``. Homomorphisms are dicts ``vertex -> matrix``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .algebra import BoundQuiverAlgebra, Path
from .linalg import Field, column_basis, inverse, is_invertible, kernel, left_inverse, rank, solve
from .strings import StringWord, is_string, NotAString

Hom = dict  # vertex -> matrix


class AlgebraMismatch(ValueError):
    pass


class FieldTooSmall(ValueError):
    pass


class RelationViolation(ValueError):
    pass


@dataclass(frozen=True)
class StringModuleLayout:
    """Where each canonical basis vector ``z_i`` of ``M(S)`` lives.

    ``positions[i]`` is the vertex of ``z_{i+1}`` and ``local[i]`` its index
    inside that vertex space.
    """

    word: StringWord
    positions: tuple[str, ...]
    local: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.positions)

    def z(self, i: int) -> tuple[str, int]:
        """Vertex and local index of ``z_i`` (1-based)."""
        return self.positions[i - 1], self.local[i - 1]


class Representation:
    def __init__(self, algebra: BoundQuiverAlgebra, dims: dict, maps: dict | None = None, *,
                 labels: dict | None = None, layout: StringModuleLayout | None = None,
                 check: bool = True):
        self.algebra = algebra
        F = self.field
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        q = algebra.quiver
        self.maps = {}
        for a in q.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            if maps is not None and a.name in maps:
                mat = F.array(maps[a.name]).reshape(shape) if np.size(maps[a.name]) == shape[0] * shape[1] else None
                if mat is None:
                    raise ValueError(f"map for arrow {a.name} has wrong shape, expected {shape}")
                self.maps[a.name] = mat
            else:
                self.maps[a.name] = F.zeros(*shape)
        self.labels = labels
        self.layout = layout
        if check:
            bad = self.relation_failures()
            if bad:
                raise RelationViolation(f"relations not satisfied: {', '.join(bad)}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices)

    def offsets(self) -> dict:
        out, o = {}, 0
        for v in self.algebra.vertices:
            out[v] = o
            o += self.dims[v]
        return out

    def __repr__(self):
        tag = f" M({self.layout.word})" if self.layout else ""
        return f"<Representation{tag} dims={self.dim_vector()}>"

    def path_map(self, p: Path) -> np.ndarray:
        F = self.field
        if not p.arrows:
            return F.eye(self.dims[p.vertex])
        out = self.maps[p.arrows[0]]
        for name in p.arrows[1:]:
            out = F.matmul(out, self.maps[name])
        return out

    def relation_failures(self) -> list[str]:
        F = self.field
        q = self.algebra.quiver
        bad = []
        for p in self.algebra.relations.monomial:
            if not F.is_zero(self.path_map(p)):
                bad.append(str(p))
        for rel in self.algebra.relations.general:
            t, s = rel[0][1].target(q), rel[0][1].source(q)
            acc = F.zeros(self.dims[t], self.dims[s])
            for c, p in rel:
                acc = F.add(acc, F.scale(c, self.path_map(p)))
            if not F.is_zero(acc):
                bad.append(" + ".join(f"{c}*({p})" for c, p in rel))
        return bad

    def total_map(self, p: Path) -> np.ndarray:
        """Action of a path on the total space ``sum_x M_x``."""
        F = self.field
        q = self.algebra.quiver
        off = self.offsets()
        out = F.zeros(self.dim, self.dim)
        s, t = p.source(q), p.target(q)
        block = self.path_map(p)
        out[off[t] : off[t] + self.dims[t], off[s] : off[s] + self.dims[s]] = block
        return out

    def element_action(self, vec: np.ndarray) -> np.ndarray:
        """Action on the total space of an algebra element given on the path basis."""
        F = self.field
        out = F.zeros(self.dim, self.dim)
        for i in np.flatnonzero(vec != 0):
            out = F.add(out, F.reduce(self.total_map(self.algebra.basis[i]) * vec[i]))
        return out

    def to_dict(self) -> dict:
        F = self.field
        return {
            "algebra": self.algebra.name,
            "field": F.name(),
            "vertex_dims": {v: self.dims[v] for v in self.algebra.vertices},
            "arrows": {a: F.to_ints(m) for a, m in self.maps.items()},
            **({"word": str(self.layout.word)} if self.layout else {}),
        }


def zero_module(a: BoundQuiverAlgebra) -> Representation:
    return Representation(a, {})


def module_from_dict(a: BoundQuiverAlgebra, data: dict) -> Representation:
    dims = data["vertex_dims"]
    return Representation(a, dims, {k: np.asarray(v, dtype=object) if v else np.zeros((0,), dtype=np.int64)
                                    for k, v in data.get("arrows", {}).items()})


def export_module(m: Representation) -> str:
    return json.dumps(m.to_dict(), indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# constructions


def string_module(a: BoundQuiverAlgebra, w: StringWord) -> Representation:
    """``M(w)`` with canonical basis ``z_1 .. z_{n+1}``."""
    ok, why = is_string(a, w)
    if not ok:
        raise NotAString(f"{w} is not a string: {why.reason}")
    q = a.quiver
    positions = [w[0].target(q)] + [c.source(q) for c in w]
    counts = {v: 0 for v in a.vertices}
    local = []
    for v in positions:
        local.append(counts[v])
        counts[v] += 1
    F = a.field
    maps = {x.name: F.zeros(counts[x.target], counts[x.source]) for x in q.arrows}
    for i, c in enumerate(w):
        # c_{i+1} joins z_{i+1} (index i) and z_{i+2} (index i+1)
        lo, hi = i, i + 1
        if c.direct:
            maps[c.arrow][local[lo], local[hi]] = 1
        else:
            maps[c.arrow][local[hi], local[lo]] = 1
    labels = {v: [] for v in a.vertices}
    for i, v in enumerate(positions):
        labels[v].append(f"z{i + 1}")
    layout = StringModuleLayout(w, tuple(positions), tuple(local))
    return Representation(a, counts, maps, labels=labels, layout=layout)


def projective_module(a: BoundQuiverAlgebra, x: str) -> Representation:
    """``P(x) = A e_x`` with basis the nonzero paths starting at ``x``."""
    if not a.is_monomial:
        raise ValueError("projective modules are built for monomial algebras only")
    q = a.quiver
    paths = [p for p in a.basis if p.source(q) == x]
    by_vertex = {v: [p for p in paths if p.target(q) == v] for v in a.vertices}
    idx = {p: by_vertex[p.target(q)].index(p) for p in paths}
    F = a.field
    maps = {}
    for arr in q.arrows:
        mat = F.zeros(len(by_vertex[arr.target]), len(by_vertex[arr.source]))
        for p in by_vertex[arr.source]:
            prod = a.multiply_paths(Path((arr.name,)), p)
            if prod is not None:
                mat[idx[prod], idx[p]] = 1
        maps[arr.name] = mat
    labels = {v: [str(p) for p in by_vertex[v]] for v in a.vertices}
    return Representation(a, {v: len(ps) for v, ps in by_vertex.items()}, maps, labels=labels)


def simple_module(a: BoundQuiverAlgebra, x: str) -> Representation:
    return Representation(a, {x: 1}, labels={x: [f"s_{x}"]})


def direct_sum(m: Representation, n: Representation) -> Representation:
    if m.algebra != n.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    F = m.field
    dims = {v: m.dims[v] + n.dims[v] for v in m.algebra.vertices}
    maps = {}
    for arr in m.algebra.quiver.arrows:
        mat = F.zeros(dims[arr.target], dims[arr.source])
        A, B = m.maps[arr.name], n.maps[arr.name]
        mat[: A.shape[0], : A.shape[1]] = A
        mat[A.shape[0] :, A.shape[1] :] = B
        maps[arr.name] = mat
    labels = None
    if m.labels and n.labels:
        labels = {v: [f"{l}'" for l in m.labels[v]] + [f"{l}''" for l in n.labels[v]] for v in dims}
    return Representation(m.algebra, dims, maps, labels=labels, check=False)


def direct_sum_maps(m: Representation, n: Representation):
    """Inclusions and projections ``(i_m, i_n, p_m, p_n)`` of ``m (+) n``."""
    F = m.field
    i_m, i_n, p_m, p_n = {}, {}, {}, {}
    for v in m.algebra.vertices:
        a, b = m.dims[v], n.dims[v]
        I = F.eye(a + b)
        i_m[v], i_n[v] = I[:, :a].copy(), I[:, a:].copy()
        p_m[v], p_n[v] = I[:a, :].copy(), I[a:, :].copy()
    return i_m, i_n, p_m, p_n


# ---------------------------------------------------------------------------
# homomorphisms


def identity_hom(m: Representation) -> Hom:
    return {v: m.field.eye(m.dims[v]) for v in m.algebra.vertices}


def zero_hom(m: Representation, n: Representation) -> Hom:
    return {v: m.field.zeros(n.dims[v], m.dims[v]) for v in m.algebra.vertices}


def compose_homs(field: Field, g: Hom, f: Hom) -> Hom:
    """``g o f``."""
    return {v: field.matmul(g[v], f[v]) for v in f}


def add_homs(field: Field, f: Hom, g: Hom) -> Hom:
    return {v: field.add(f[v], g[v]) for v in f}


def scale_hom(field: Field, c, f: Hom) -> Hom:
    return {v: field.scale(c, f[v]) for v in f}


def is_hom(m: Representation, n: Representation, f: Hom) -> bool:
    F = m.field
    for v in m.algebra.vertices:
        if f[v].shape != (n.dims[v], m.dims[v]):
            return False
    for arr in m.algebra.quiver.arrows:
        lhs = F.matmul(f[arr.target], m.maps[arr.name])
        rhs = F.matmul(n.maps[arr.name], f[arr.source])
        if not F.equal(lhs, rhs):
            return False
    return True


def is_iso_hom(m: Representation, n: Representation, f: Hom) -> bool:
    F = m.field
    return is_hom(m, n, f) and all(
        f[v].shape[0] == f[v].shape[1] and rank(F, f[v]) == f[v].shape[0] for v in f
    )


def hom_rank(field: Field, f: Hom) -> int:
    return sum(rank(field, x) for x in f.values())


def hom_system(m: Representation, n: Representation):
    """Matrix ``A`` with ``Hom(m, n) = ker A`` on the row-major unknowns.

    Returns ``(A, offsets)`` where ``offsets[v]`` is the start of ``f_v``.
    """
    if m.algebra != n.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    F = m.field
    offsets, o = {}, 0
    for v in m.algebra.vertices:
        offsets[v] = o
        o += n.dims[v] * m.dims[v]
    total = o
    blocks = []
    for arr in m.algebra.quiver.arrows:
        x, y = arr.source, arr.target
        rows = n.dims[y] * m.dims[x]
        if rows == 0:
            continue
        block = F.zeros(rows, total)
        if n.dims[y] * m.dims[y]:
            # f_y M_a
            block[:, offsets[y] : offsets[y] + n.dims[y] * m.dims[y]] = F.kron(
                F.eye(n.dims[y]), m.maps[arr.name].T.copy())
        if n.dims[x] * m.dims[x]:
            # - N_a f_x
            sub = F.kron(n.maps[arr.name], F.eye(m.dims[x]))
            cur = block[:, offsets[x] : offsets[x] + n.dims[x] * m.dims[x]]
            block[:, offsets[x] : offsets[x] + n.dims[x] * m.dims[x]] = F.sub(cur, sub)
        blocks.append(block)
    A = np.vstack(blocks) if blocks else F.zeros(0, total)
    return A, offsets


def vector_to_hom(m: Representation, n: Representation, vec: np.ndarray, offsets: dict) -> Hom:
    out = {}
    for v in m.algebra.vertices:
        k = n.dims[v] * m.dims[v]
        out[v] = vec[offsets[v] : offsets[v] + k].reshape(n.dims[v], m.dims[v]).copy()
    return out


def hom_to_vector(field: Field, f: Hom, vertices) -> np.ndarray:
    parts = [f[v].reshape(-1) for v in vertices]
    return np.concatenate(parts) if parts else field.zeros(1, 0)[0]


def hom_space(m: Representation, n: Representation) -> list[Hom]:
    """A basis of ``Hom(m, n)``."""
    A, offsets = hom_system(m, n)
    K = kernel(m.field, A)
    return [vector_to_hom(m, n, K[:, j], offsets) for j in range(K.shape[1])]


def hom_dim(m: Representation, n: Representation) -> int:
    A, _ = hom_system(m, n)
    return A.shape[1] - rank(m.field, A) if A.size else A.shape[1]


# ---------------------------------------------------------------------------
# endomorphism algebra, radical, indecomposability


@dataclass
class IndecomposabilityResult:
    indecomposable: bool
    end_dim: int
    radical_dim: int
    idempotent: Hom | None = None
    note: str = ""

    def __bool__(self):
        return self.indecomposable


class _EndAlgebra:
    """``End(m)`` as a matrix algebra with structure constants."""

    def __init__(self, m: Representation):
        self.m = m
        F = self.F = m.field
        self.basis = hom_space(m, m)
        self.dim = len(self.basis)
        verts = m.algebra.vertices
        self.vecs = [hom_to_vector(F, b, verts) for b in self.basis]
        if self.dim:
            B = np.stack(self.vecs, axis=1)
            L = left_inverse(F, B)
            prods = np.stack(
                [hom_to_vector(F, compose_homs(F, bi, bj), verts) for bi in self.basis for bj in self.basis],
                axis=1,
            )
            coords = F.matmul(L, prods)  # dim x dim^2
            # C[i, j, :] = coordinates of b_i o b_j
            self.C = coords.T.reshape(self.dim, self.dim, self.dim)
        else:
            self.C = F.zeros(0, 0).reshape(0, 0, 0)

    def left_mult(self, i: int) -> np.ndarray:
        # column j holds coords of b_i o b_j
        return self.C[i].T.copy()

    def product(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        F = self.F
        out = F.zeros(1, self.dim)[0]
        for i in np.flatnonzero(u != 0):
            for j in np.flatnonzero(v != 0):
                out = F.add(out, F.reduce(self.C[i, j] * F.reduce(u[i] * v[j])))
        return out

    def element(self, coords: np.ndarray) -> Hom:
        F = self.F
        out = zero_hom(self.m, self.m)
        for i in np.flatnonzero(coords != 0):
            out = add_homs(F, out, scale_hom(F, coords[i], self.basis[i]))
        return out

    def radical(self) -> np.ndarray:
        """Kernel of the trace form ``(x, y) -> Tr(L_x L_y)``, as columns."""
        F = self.F
        Ls = [self.left_mult(i) for i in range(self.dim)]
        G = F.zeros(self.dim, self.dim)
        for i in range(self.dim):
            for j in range(i, self.dim):
                tr = F.reduce(np.trace(F.matmul(Ls[i], Ls[j])))
                G[i, j] = G[j, i] = tr
        return kernel(F, G)

    def is_nilpotent_ideal(self, J: np.ndarray) -> bool:
        F = self.F
        gens = [J[:, k] for k in range(J.shape[1])]
        current = gens
        for _ in range(self.dim + 1):
            if not current:
                return True
            prods = [self.product(x, y) for x in current for y in gens]
            prods = [p for p in prods if not F.is_zero(p)]
            if not prods:
                return True
            M = np.stack(prods, axis=1)
            basis = column_basis(F, M)
            if basis.shape[1] >= len(current) and len(current) == J.shape[1]:
                return False
            current = [basis[:, k] for k in range(basis.shape[1])]
        return False


def _min_poly(E: _EndAlgebra, x: np.ndarray) -> list:
    """Coefficients (low to high, monic) of the minimal polynomial of ``x`` in ``E``."""
    F = E.F
    one = hom_to_vector(F, identity_hom(E.m), E.m.algebra.vertices)
    one_coords = solve(F, np.stack(E.vecs, axis=1), one)[0]
    powers = [one_coords]
    while True:
        powers.append(E.product(powers[-1], x))
        M = np.stack(powers, axis=1)
        K = kernel(F, M)
        if K.shape[1]:
            c = K[:, 0]
            lead = c[-1]
            if lead != 0:
                return list(F.reduce(c * F.inv(lead)))


def _factor(field: Field, coeffs: list):
    t = sympy.Symbol("t")
    expr_coeffs = [int(c) if field.is_prime else sympy.Rational(c.numerator, c.denominator)
                   for c in reversed(coeffs)]
    if field.is_prime:
        poly = sympy.Poly(expr_coeffs, t, modulus=field.p)
    else:
        poly = sympy.Poly(expr_coeffs, t, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        cs = [field.scalar(int(c) if field.is_prime else Fraction(int(c.p), int(c.q)))
              for c in reversed(f.all_coeffs())]
        out.append((cs, mult))
    return out


def _poly_of_hom(field: Field, m: Representation, coeffs: list, f: Hom) -> Hom:
    out = zero_hom(m, m)
    power = identity_hom(m)
    for c in coeffs:
        out = add_homs(field, out, scale_hom(field, c, power))
        power = compose_homs(field, f, power)
    return out


def fitting_idempotent(m: Representation, phi: Hom) -> Hom | None:
    """Projection onto ``im phi^N`` along ``ker phi^N`` (``N = dim m``).

    It is a polynomial in ``phi`` hence an endomorphism; it is a nontrivial
    idempotent exactly when ``phi`` is neither nilpotent nor invertible.
    """
    F = m.field
    N = max(m.dim, 1)
    power = identity_hom(m)
    base = phi
    e = N
    while e:
        if e & 1:
            power = compose_homs(F, base, power)
        base = compose_homs(F, base, base)
        e >>= 1
    out = {}
    nontrivial_im = nontrivial_ker = False
    for v in m.algebra.vertices:
        d = m.dims[v]
        if d == 0:
            out[v] = F.zeros(0, 0)
            continue
        im = column_basis(F, power[v])
        ker = kernel(F, power[v])
        nontrivial_im |= im.shape[1] > 0
        nontrivial_ker |= ker.shape[1] > 0
        P = np.concatenate([im, ker], axis=1)
        D = F.zeros(d, d)
        for k in range(im.shape[1]):
            D[k, k] = 1
        out[v] = F.mul(P, D, inverse(F, P))
    if not (nontrivial_im and nontrivial_ker):
        return None
    return out


def is_idempotent_certificate(m: Representation, e: Hom) -> bool:
    F = m.field
    if not is_hom(m, m, e):
        return False
    if not all(F.equal(F.matmul(e[v], e[v]), e[v]) for v in e):
        return False
    r = hom_rank(F, e)
    return 0 < r < m.dim


def is_indecomposable(m: Representation, *, seed: int = 0, trials: int = 40) -> IndecomposabilityResult:
    """Decide whether ``End(m)`` is local via the trace-form radical.

    Indecomposable means ``dim End/rad = 1``. When that fails, a nontrivial
    idempotent endomorphism is searched for as a certificate.
    """
    F = m.field
    if m.dim == 0:
        return IndecomposabilityResult(False, 0, 0, None, "zero module")
    E = _EndAlgebra(m)
    if F.is_prime and F.p <= E.dim:
        raise FieldTooSmall(f"p={F.p} must exceed dim End = {E.dim}")
    J = E.radical()
    if not E.is_nilpotent_ideal(J):
        raise ArithmeticError("trace-form radical is not nilpotent")
    rad = J.shape[1]
    if E.dim - rad == 1:
        return IndecomposabilityResult(True, E.dim, rad)
    rng = np.random.default_rng(seed)
    candidates = [np.eye(E.dim, dtype=np.int64)[i] for i in range(E.dim)]
    for i in range(trials):
        candidates.append(F.random(E.dim, rng))
    for coords in candidates:
        coords = F.array(coords)
        mu = _min_poly(E, coords)
        factors = _factor(F, mu)
        if len(factors) < 2:
            continue
        f, mult = factors[0]
        x = E.element(coords)
        g = _poly_of_hom(F, m, f, x)
        phi = g
        for _ in range(mult - 1):
            phi = compose_homs(F, g, phi)
        e = fitting_idempotent(m, phi)
        if e is not None and is_idempotent_certificate(m, e):
            return IndecomposabilityResult(False, E.dim, rad, e)
    return IndecomposabilityResult(False, E.dim, rad, None,
                                   "End/rad has dimension > 1 but no split idempotent was found")


# ---------------------------------------------------------------------------
# isomorphism


@dataclass
class IsoVerdict:
    # yes | yes-by-word | no-by-word | no-by-dimension | no-by-hom-dimension
    # | no-by-local-endomorphisms | no-probabilistic
    status: str
    certificate: Hom | None = None
    trials: int = 0
    seed: int | None = None
    failure_bound: float | None = None

    @property
    def isomorphic(self) -> bool:
        return self.status.startswith("yes")

    @property
    def exact(self) -> bool:
        return self.status != "no-probabilistic"


def reversal_map(m: Representation, n: Representation) -> Hom:
    """Basis reversal ``z_i -> z_{n+2-i}`` from ``M(S)`` to ``M(S^-1)``."""
    out = zero_hom(m, n)
    d = m.layout.dim
    for i in range(1, d + 1):
        v, li = m.layout.z(i)
        w, lj = n.layout.z(d + 1 - i)
        assert v == w
        out[v][lj, li] = 1
    return out


def random_hom(m: Representation, n: Representation, basis: list[Hom], rng) -> Hom:
    F = m.field
    out = zero_hom(m, n)
    coeffs = F.random(len(basis), rng)
    for c, b in zip(coeffs, basis):
        out = add_homs(F, out, scale_hom(F, c, b))
    return out


def is_isomorphic(m: Representation, n: Representation, *, trials: int = 20, seed: int = 0,
                  m_local: bool | None = None) -> IsoVerdict:
    """Decide ``m ≅ n``.

    String modules are compared by their words. Otherwise exact separators
    run first (dimension vectors, Hom dimensions). If ``m`` is
    indecomposable the answer is exact: ``m ≅ n`` iff some product
    ``g_i f_j`` of basis homs ``f_j: m -> n``, ``g_i: n -> m`` is invertible,
    since non-invertible endomorphisms of ``m`` form an ideal. Only for
    decomposable ``m`` does the test fall back to random sampling.
    """
    if m.algebra != n.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    F = m.field
    if m.layout is not None and n.layout is not None:
        s, t = m.layout.word, n.layout.word
        if s == t:
            return IsoVerdict("yes-by-word", identity_hom(m))
        if s == t.inverse():
            f = reversal_map(m, n)
            if not is_iso_hom(m, n, f):
                raise ArithmeticError("basis reversal is not an isomorphism")
            return IsoVerdict("yes-by-word", f)
        return IsoVerdict("no-by-word")
    if m.dim_vector() != n.dim_vector():
        return IsoVerdict("no-by-dimension")
    mn = hom_space(m, n)
    nm = hom_space(n, m)
    dims = (len(mn), len(nm), hom_dim(m, m), hom_dim(n, n))
    if len(set(dims)) != 1:
        return IsoVerdict("no-by-hom-dimension")
    if m_local is None:
        m_local = bool(is_indecomposable(m, seed=seed))
    if m_local:
        for f in mn:
            for g in nm:
                gf = compose_homs(F, g, f)
                if all(is_invertible(F, gf[v]) for v in gf):
                    if not is_iso_hom(m, n, f):
                        raise ArithmeticError("split mono of equal dimension is not invertible")
                    return IsoVerdict("yes", f)
        return IsoVerdict("no-by-local-endomorphisms")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        f = random_hom(m, n, mn, rng)
        if is_iso_hom(m, n, f):
            return IsoVerdict("yes", f, trials, seed)
    bound = (m.dim / F.sample_size) ** trials
    return IsoVerdict("no-probabilistic", None, trials, seed, bound)


# ---------------------------------------------------------------------------
# export


def string_module_dot(m: Representation) -> str:
    """Graphviz rendering of the zigzag diagram of a string module."""
    if m.layout is None:
        raise ValueError("not a string module")
    lay = m.layout
    lines = ["digraph string_module {", "  rankdir=LR;", f'  label="M({lay.word})";']
    for i, v in enumerate(lay.positions, start=1):
        lines.append(f'  z{i} [label="z{i} @ {v}"];')
    for i, c in enumerate(lay.word, start=1):
        if c.direct:
            lines.append(f'  z{i + 1} -> z{i} [label="{c.arrow}"];')
        else:
            lines.append(f'  z{i} -> z{i + 1} [label="{c.arrow}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def hom_from_projective(p: Representation, x: str, m: Representation, vec: np.ndarray) -> Hom:
    """The map ``P(x) -> m`` sending ``e_x`` to ``vec`` (a vector of ``m_x``).

    ``p`` must come from :func:`projective_module` so its labels name paths.
    """
    F = m.field
    a = m.algebra
    out = {}
    paths = {str(q): q for q in a.basis}
    for v in a.vertices:
        cols = [F.matmul(m.path_map(paths[lab]), vec.reshape(-1, 1))[:, 0] for lab in p.labels[v]]
        out[v] = np.stack(cols, axis=1) if cols else F.zeros(m.dims[v], 0)
    return out


def basis_vector(m: Representation, vertex: str, index: int) -> np.ndarray:
    vec = m.field.zeros(m.dims[vertex], 1)[:, 0]
    vec[index] = 1
    return vec
