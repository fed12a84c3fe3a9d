"""Theta-pointed modules: pointed homs, sum and pushout, the preorder, and
finite fragments of the lattice they generate.

Order convention: ``p <= q`` iff a pointed homomorphism ``q -> p`` exists.
Direct sum is the supremum and pushout the infimum.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .linalg import NoSolution, quotient_basis, rank, solve
from .rep import (
    Hom,
    Representation,
    compose_homs,
    direct_sum,
    direct_sum_maps,
    hom_space,
    hom_system,
    is_hom,
    is_iso_hom,
    vector_to_hom,
)


class ThetaMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def same_representation(m: Representation, n: Representation) -> bool:
    if m is n:
        return True
    if m.algebra != n.algebra or m.dims != n.dims:
        return False
    F = m.field
    return all(F.equal(m.maps[a], n.maps[a]) for a in m.maps)


@dataclass
class PointedModule:
    theta: Representation
    module: Representation
    chi: Hom
    label: str = ""

    def __post_init__(self):
        if self.theta.algebra != self.module.algebra:
            raise ThetaMismatch("pointing source and module live over different algebras")
        if not is_hom(self.theta, self.module, self.chi):
            raise ValueError("chi is not a homomorphism")

    @property
    def field(self):
        return self.module.field

    @property
    def dim(self) -> int:
        return self.module.dim

    def chi_rank(self) -> int:
        return sum(rank(self.field, c) for c in self.chi.values())

    def chi_injective(self) -> bool:
        return self.chi_rank() == self.theta.dim

    def __repr__(self):
        return f"<PointedModule {self.label or ''} dims={self.module.dim_vector()}>"


def _check_theta(p: PointedModule, q: PointedModule):
    if not same_representation(p.theta, q.theta):
        raise ThetaMismatch("pointed modules use different pointing sources")


def zero_pointed(theta: Representation) -> PointedModule:
    z = Representation(theta.algebra, {})
    F = theta.field
    return PointedModule(theta, z, {v: F.zeros(0, theta.dims[v]) for v in theta.algebra.vertices}, "0")


def identity_pointed(theta: Representation) -> PointedModule:
    F = theta.field
    return PointedModule(theta, theta, {v: F.eye(theta.dims[v]) for v in theta.algebra.vertices}, "theta")


# ---------------------------------------------------------------------------
# pointed homomorphisms


def pointed_hom_system(src: PointedModule, dst: PointedModule):
    """``(A, b, offsets)`` with pointed homs ``src -> dst`` = solutions of ``A f = b``."""
    _check_theta(src, dst)
    m, n = src.module, dst.module
    F = m.field
    A, offsets = hom_system(m, n)
    rows, rhs = [A], [F.zeros(A.shape[0], 1)]
    for v in m.algebra.vertices:
        t = src.theta.dims[v]
        if t == 0 or n.dims[v] == 0:
            continue
        block = F.zeros(n.dims[v] * t, A.shape[1])
        if m.dims[v]:
            block[:, offsets[v] : offsets[v] + n.dims[v] * m.dims[v]] = F.kron(
                F.eye(n.dims[v]), src.chi[v].T.copy())
        rows.append(block)
        rhs.append(dst.chi[v].reshape(-1, 1))
    return np.vstack(rows), np.vstack(rhs)[:, 0], offsets


def pointed_hom_space(src: PointedModule, dst: PointedModule):
    """``(f0, K)``: one pointed hom and a basis of the homs killing chi, or ``None``."""
    A, b, offsets = pointed_hom_system(src, dst)
    try:
        x, K = solve(src.field, A, b)
    except NoSolution:
        return None
    m, n = src.module, dst.module
    return vector_to_hom(m, n, x, offsets), [vector_to_hom(m, n, K[:, j], offsets) for j in range(K.shape[1])]


def pointed_hom_exists(src: PointedModule, dst: PointedModule) -> Hom | None:
    """An explicit pointed homomorphism ``src -> dst`` or ``None``."""
    sol = pointed_hom_space(src, dst)
    return None if sol is None else sol[0]


def is_pointed_hom(src: PointedModule, dst: PointedModule, f: Hom) -> bool:
    F = src.field
    if not is_hom(src.module, dst.module, f):
        return False
    return all(F.equal(F.matmul(f[v], src.chi[v]), dst.chi[v]) for v in f)


def find_pointed_isomorphism(p: PointedModule, q: PointedModule, *, trials: int = 20,
                             seed: int = 0) -> Hom | None:
    """A verified pointed isomorphism ``p -> q`` or ``None``.

    ``None`` is exact when dimensions differ or no pointed hom exists;
    otherwise it means ``trials`` random pointed homs were all singular.
    """
    if p.module.dim_vector() != q.module.dim_vector():
        return None
    sol = pointed_hom_space(p, q)
    if sol is None:
        return None
    f0, K = sol
    F = p.field
    rng = np.random.default_rng(seed)
    cand = f0
    for i in range(trials + 1):
        if i:
            coeffs = F.random(len(K), rng)
            cand = f0
            for c, k in zip(coeffs, K):
                cand = {v: F.add(cand[v], F.scale(c, k[v])) for v in cand}
        if is_iso_hom(p.module, q.module, cand) and is_pointed_hom(p, q, cand):
            return cand
    return None


# ---------------------------------------------------------------------------
# sum and pushout


def pointed_direct_sum(p: PointedModule, q: PointedModule) -> PointedModule:
    _check_theta(p, q)
    m = direct_sum(p.module, q.module)
    chi = {v: np.vstack([p.chi[v], q.chi[v]]) for v in m.algebra.vertices}
    return PointedModule(p.theta, m, chi, f"({p.label} + {q.label})")


@dataclass
class Pushout:
    pointed: PointedModule
    eps_m: Hom
    eps_n: Hom


class NotWellDefined(ArithmeticError):
    pass


def pointed_pushout(p: PointedModule, q: PointedModule) -> Pushout:
    """``M * N``: the quotient of ``M (+) N`` by ``{(chi_M(l), -chi_N(l))}``."""
    _check_theta(p, q)
    M, N = p.module, q.module
    F = M.field
    S = direct_sum(M, N)
    i_m, i_n, _, _ = direct_sum_maps(M, N)
    pis, sigmas, subs = {}, {}, {}
    for v in M.algebra.vertices:
        sub = np.vstack([p.chi[v], F.sub(F.zeros(*q.chi[v].shape), q.chi[v])])
        subs[v] = sub
        pis[v], sigmas[v] = quotient_basis(F, S.dims[v], sub)
    dims = {v: pis[v].shape[0] for v in M.algebra.vertices}
    maps = {}
    for arr in M.algebra.quiver.arrows:
        x, y = arr.source, arr.target
        act = S.maps[arr.name]
        if subs[x].shape[1] and not F.is_zero(F.mul(pis[y], act, subs[x])):
            raise NotWellDefined(f"arrow {arr.name} does not preserve the glued subspace")
        maps[arr.name] = F.mul(pis[y], act, sigmas[x])
    Q = Representation(M.algebra, dims, maps)
    eps_m = {v: F.matmul(pis[v], i_m[v]) for v in dims}
    eps_n = {v: F.matmul(pis[v], i_n[v]) for v in dims}
    chi = compose_homs(F, eps_m, p.chi)
    other = compose_homs(F, eps_n, q.chi)
    if not all(F.equal(chi[v], other[v]) for v in dims):
        raise NotWellDefined("the two pointings disagree on the pushout")
    return Pushout(PointedModule(p.theta, Q, chi, f"({p.label} * {q.label})"), eps_m, eps_n)


def pushout_universal_check(po: Pushout, p: PointedModule, q: PointedModule, seed: int = 0) -> str | None:
    """Spot check of the universal property; ``None`` or a reason.

    The maps ``eps_m``, ``eps_n`` must jointly span the pushout (so factorings
    are unique), and a random endomorphism ``r`` must be recovered from
    ``(r eps_m, r eps_n)`` by factoring through the pushout.
    """
    Q = po.pointed.module
    F = Q.field
    for v in Q.algebra.vertices:
        if rank(F, np.hstack([po.eps_m[v], po.eps_n[v]])) != Q.dims[v]:
            return f"pushout maps do not span the space at {v}"
    if not (is_hom(p.module, Q, po.eps_m) and is_hom(q.module, Q, po.eps_n)):
        return "pushout maps are not homomorphisms"
    basis = hom_space(Q, Q)
    rng = np.random.default_rng(seed)
    r = {v: F.zeros(Q.dims[v], Q.dims[v]) for v in Q.algebra.vertices}
    for b in basis:
        c = F.scalar(int(rng.integers(F.sample_size)))
        r = {v: F.add(r[v], F.scale(c, b[v])) for v in r}
    f, g = compose_homs(F, r, po.eps_m), compose_homs(F, r, po.eps_n)
    for v in Q.algebra.vertices:
        # solve h [eps_m eps_n] = [f g] for h
        E = np.hstack([po.eps_m[v], po.eps_n[v]])
        rhs = np.hstack([f[v], g[v]])
        if Q.dims[v] == 0:
            continue
        try:
            h, _ = solve(F, E.T.copy(), rhs.T.copy())
        except NoSolution:
            return f"induced map does not exist at {v}"
        if not F.equal(h.T, r[v]):
            return f"induced map is not the original one at {v}"
    return None


# ---------------------------------------------------------------------------
# order


class Relation(enum.Enum):
    EQUIVALENT = "equivalent"
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass
class Classification:
    relation: Relation
    down: Hom | None  # witness q -> p (so p <= q)
    up: Hom | None  # witness p -> q (so q <= p)


def classify(p: PointedModule, q: PointedModule) -> Classification:
    """Compare classes: LESS means ``p < q``, i.e. only ``q -> p`` exists."""
    down = pointed_hom_exists(q, p)
    up = pointed_hom_exists(p, q)
    if down is not None and up is not None:
        rel = Relation.EQUIVALENT
    elif down is not None:
        rel = Relation.LESS
    elif up is not None:
        rel = Relation.GREATER
    else:
        rel = Relation.INCOMPARABLE
    return Classification(rel, down, up)


def leq(p: PointedModule, q: PointedModule) -> bool:
    return pointed_hom_exists(q, p) is not None


# ---------------------------------------------------------------------------
# fragments


@dataclass
class Fragment:
    """Finitely many classes with the full order matrix.

    ``le[i][j]`` is true iff ``nodes[i] <= nodes[j]``. ``joins``/``meets``
    record the node index of ``i (+) j`` and ``i * j`` when computed.
    """

    nodes: list[PointedModule]
    le: list[list[bool]]
    joins: dict = dc_field(default_factory=dict)
    meets: dict = dc_field(default_factory=dict)
    depth: int = 0
    closed: bool = False
    seeds: int = 0

    def __len__(self):
        return len(self.nodes)

    def less(self, i: int, j: int) -> bool:
        return self.le[i][j] and not self.le[j][i]

    def comparable_pairs(self) -> list[tuple[int, int]]:
        n = len(self.nodes)
        return [(i, j) for i in range(n) for j in range(n) if self.less(i, j)]

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {"index": i, "label": p.label, "dims": list(p.module.dim_vector())}
                for i, p in enumerate(self.nodes)
            ],
            "depth": self.depth,
            "closed": self.closed,
            "order": [[j for j in range(len(self)) if self.less(i, j)] for i in range(len(self))],
        }

    def to_dot(self) -> str:
        n = len(self.nodes)
        lines = ["digraph fragment {", "  rankdir=BT;"]
        for i, p in enumerate(self.nodes):
            dims = ",".join(str(d) for d in p.module.dim_vector())
            lines.append(f'  n{i} [label="{i}: ({dims})"];')
        for i in range(n):
            for j in range(n):
                if self.less(i, j) and not any(self.less(i, k) and self.less(k, j) for k in range(n)):
                    lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class _FragmentBuilder:
    def __init__(self, cap: int):
        self.cap = cap
        self.nodes: list[PointedModule] = []
        self.le: list[list[bool]] = []
        self.probes: list[PointedModule] = []

    def _signature(self, c: PointedModule) -> tuple:
        # pointed homs to and from fixed probes are constant on classes
        return tuple((pointed_hom_exists(c, t) is not None, pointed_hom_exists(t, c) is not None)
                     for t in self.probes)

    def add(self, c: PointedModule, sigs: list) -> int:
        sig = self._signature(c)
        for i, node in enumerate(self.nodes):
            if sigs[i] != sig:
                continue
            if leq(c, node) and leq(node, c):
                if c.dim < node.dim:
                    self.nodes[i] = c  # keep the smallest representative
                return i
        if len(self.nodes) >= self.cap:
            raise BudgetExceeded(f"fragment exceeds {self.cap} classes")
        row = [leq(c, node) for node in self.nodes]
        col = [leq(node, c) for node in self.nodes]
        for k, r in enumerate(self.le):
            r.append(col[k])
        self.le.append(row + [True])
        self.nodes.append(c)
        sigs.append(sig)
        return len(self.nodes) - 1


def generate_fragment(seeds: list[PointedModule], depth: int, *, cap: int = 200) -> Fragment:
    """Close ``seeds`` under sum and pushout ``depth`` times, up to ``≡``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    for s in seeds[1:]:
        _check_theta(seeds[0], s)
    b = _FragmentBuilder(cap)
    b.probes = list(seeds)
    sigs: list = []
    for s in seeds:
        b.add(s, sigs)
    joins, meets = {}, {}
    done = set()
    closed = False
    for level in range(depth):
        n = len(b.nodes)
        pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if (i, j) not in done]
        new = False
        for i, j in pairs:
            done.add((i, j))
            # comparable pairs need no new node
            if b.le[i][j]:
                joins[(i, j)], meets[(i, j)] = j, i
                continue
            if b.le[j][i]:
                joins[(i, j)], meets[(i, j)] = i, j
                continue
            before = len(b.nodes)
            joins[(i, j)] = b.add(pointed_direct_sum(b.nodes[i], b.nodes[j]), sigs)
            meets[(i, j)] = b.add(pointed_pushout(b.nodes[i], b.nodes[j]).pointed, sigs)
            new |= len(b.nodes) > before
        if not new and len(b.nodes) == n:
            closed = True
            break
    for k, node in enumerate(b.nodes):
        if not node.label:
            node.label = f"n{k}"
    return Fragment(b.nodes, b.le, joins, meets, depth, closed, len(seeds))


@dataclass
class WideWitness:
    low: int
    high: int
    m: int | None = None
    n: int | None = None
    status: str = "found"  # found | insufficient fragment | absent at this depth

    def to_dict(self) -> dict:
        out = {"low": self.low, "high": self.high, "status": self.status}
        if self.m is not None:
            out["m"], out["n"] = self.m, self.n
        return out


@dataclass
class WideReport:
    results: list[WideWitness]
    samples: int
    seed: int
    population: int

    @property
    def successes(self) -> int:
        return sum(r.status == "found" for r in self.results)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "comparable_pairs": self.population,
            "successes": self.successes,
            "results": [r.to_dict() for r in self.results],
        }


def verify_wide_witness(frag: Fragment, low: int, high: int, i: int, j: int) -> bool:
    """Check the witness conditions with freshly built sum and pushout."""
    P, Q = frag.nodes[low], frag.nodes[high]
    M, N = frag.nodes[i], frag.nodes[j]
    if not (frag.less(low, i) and frag.less(low, j) and frag.less(i, high) and frag.less(j, high)):
        return False
    if frag.le[i][j] or frag.le[j][i]:
        return False
    meet = pointed_pushout(M, N).pointed
    join = pointed_direct_sum(M, N)
    return (leq(P, meet) and leq(meet, join) and not leq(join, meet) and leq(join, Q))


def check_wide_on_sample(frag: Fragment, samples: int, seed: int = 0) -> WideReport:
    """For sampled ``p < q`` search the fragment for an incomparable ``M, N``
    strictly between them with ``p <= M*N < M(+)N <= q``.

    A pair with nothing incomparable strictly inside is reported as
    ``insufficient fragment``; a pair with candidates none of which pass is
    ``absent at this depth``. Neither refutes wideness of the full lattice.
    """
    pairs = frag.comparable_pairs()
    rng = np.random.default_rng(seed)
    if samples >= len(pairs):
        chosen = pairs
    else:
        idx = sorted(rng.choice(len(pairs), size=samples, replace=False).tolist())
        chosen = [pairs[k] for k in idx]
    out = []
    n = len(frag)
    for low, high in chosen:
        inside = [k for k in range(n) if frag.less(low, k) and frag.less(k, high)]
        cands = [(i, j) for i, j in itertools.combinations(inside, 2)
                 if not frag.le[i][j] and not frag.le[j][i]]
        if not cands:
            out.append(WideWitness(low, high, status="insufficient fragment"))
            continue
        found = None
        for i, j in cands:
            jn, mt = frag.joins.get((i, j)), frag.meets.get((i, j))
            if jn is not None and mt is not None:
                ok = frag.le[low][mt] and frag.less(mt, jn) and frag.le[jn][high]
                if ok and verify_wide_witness(frag, low, high, i, j):
                    found = (i, j)
                    break
            elif verify_wide_witness(frag, low, high, i, j):
                found = (i, j)
                break
        if found:
            out.append(WideWitness(low, high, found[0], found[1]))
        else:
            out.append(WideWitness(low, high, status="absent at this depth"))
    return WideReport(out, samples, seed, len(pairs))
