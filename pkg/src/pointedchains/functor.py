"""Tensor functors ``F = B (x)_L -`` for a bimodule ``B`` that is free of rank
``r`` as a right ``L``-module.

A target generator ``a`` (arrow or stationary path) acts on the free basis
by ``a b_i = sum_j b_j lam_ji(a)`` with ``lam_ji(a)`` in the source algebra.
So ``F(M)`` is ``M^r`` with block ``(j, i)`` of ``a`` acting as ``lam_ji(a)``;
the vertex space at ``y`` is the image of ``lam(e_y)``.
"""

from __future__ import annotations

import itertools
import re
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .algebra import BoundQuiverAlgebra, Path
from .files import Reader, load_algebra, resolve_data_path
from .linalg import Field, column_basis, left_inverse
from .pointed import PointedModule, find_pointed_isomorphism, pointed_pushout
from .rep import (
    AlgebraMismatch,
    Hom,
    RelationViolation,
    Representation,
    hom_rank,
    is_hom,
    is_indecomposable,
    is_isomorphic,
)
from .verify import (
    AxiomResult,
    ChainPoint,
    ChainSpec,
    PairVerdict,
    _cmd,
    _result,
    _run,
    build_pointed_chain,
    verify_dense_chain,
    verify_independent_pair,
)


class HypothesisUnmet(ValueError):
    pass


@dataclass
class TensorFunctor:
    """``images[g]`` is an ``r x r x dim(source)`` array of source-algebra elements."""

    source: BoundQuiverAlgebra
    target: BoundQuiverAlgebra
    rank: int
    images: dict
    name: str = ""

    def image(self, p: Path) -> np.ndarray:
        """``lam(p)`` for a target path, multiplied out in the source algebra."""
        if not p.arrows:
            return self.images[f"e_{p.vertex}"]
        out = self.images[p.arrows[0]]
        for a in p.arrows[1:]:
            out = lam_product(self.source, out, self.images[a])
        return out


def lam_product(a: BoundQuiverAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of matrices over the algebra ``a``."""
    F = a.field
    r = x.shape[0]
    out = F.zeros(r * r, a.dim).reshape(r, r, a.dim)
    for j in range(r):
        for i in range(r):
            acc = F.zeros(1, a.dim)[0]
            for k in range(r):
                if np.any(x[j, k] != 0) and np.any(y[k, i] != 0):
                    acc = F.add(acc, a.multiply(x[j, k], y[k, i]))
            out[j, i] = acc
    return out


def lam_identity(a: BoundQuiverAlgebra, r: int) -> np.ndarray:
    out = a.field.zeros(r * r, a.dim).reshape(r, r, a.dim)
    for i in range(r):
        out[i, i] = a.one()
    return out


# ---------------------------------------------------------------------------
# reading functor files

_TERM = re.compile(r"^(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?(?P<path>[A-Za-z_][\w\s^]*)?$")


def parse_element(a: BoundQuiverAlgebra, text: str) -> np.ndarray:
    """Parse ``"2 e_x1 + b - 3*d b"`` (or ``0``, ``1``) into a basis vector."""
    F = a.field
    out = F.zeros(1, a.dim)[0]
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    pieces = re.split(r"\s*([+-])\s*", text)
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    for sign, term in zip(pieces[::2], pieces[1::2]):
        m = _TERM.match(term.strip())
        if not m or (m.group("coef") is None and m.group("path") is None):
            raise ValueError(f"cannot read term {term!r}")
        c = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if sign == "-":
            c = -c
        ptext = (m.group("path") or "").strip()
        if not ptext:
            vec = a.one()
        elif ptext.startswith("e_"):
            v = ptext[2:]
            if v not in a.vertices:
                raise ValueError(f"unknown vertex {v!r}")
            vec = a.element({Path.stationary(v): 1})
        else:
            names = ptext.split()
            for n in names:
                if not a.quiver.has_arrow(n):
                    raise ValueError(f"unknown arrow {n!r}")
            p = Path(tuple(names))
            try:
                p.check(a.quiver)
            except Exception as exc:  # noqa: BLE001 - reported with position by the caller
                raise ValueError(str(exc)) from None
            if a.in_ideal(p):
                vec = F.zeros(1, a.dim)[0]
            else:
                vec = a.element({p: 1})
        out = F.add(out, F.scale(c, vec))
    return out


def parse_functor(text: str, *, field: Field | None = None, source: str | None = None) -> TensorFunctor:
    r = Reader(text, source)
    root = r.root
    r.mapping(root)

    def algebra(key):
        node = r.key(root, key)
        try:
            return load_algebra(r.text(node), field=field)
        except FileNotFoundError as exc:
            r.fail(node, str(exc))

    src, tgt = algebra("source"), algebra("target")
    rnode = r.key(root, "rank")
    rank = r.integer(rnode)
    if rank < 1:
        r.fail(rnode, "rank must be positive")
    inode = r.key(root, "images")
    given = r.mapping(inode)
    wanted = [f"e_{v}" for v in tgt.vertices] + [a.name for a in tgt.quiver.arrows]
    for k in given:
        if k not in wanted:
            r.fail(given[k], f"{k!r} is not a vertex idempotent or arrow of the target")
    images = {}
    F = src.field
    for g in wanted:
        if g not in given:
            r.fail(inode, f"missing image for {g!r}")
        node = given[g]
        rows = r.seq(node)
        if len(rows) != rank:
            r.fail(node, f"expected {rank} rows, got {len(rows)}")
        mat = F.zeros(rank * rank, src.dim).reshape(rank, rank, src.dim)
        for j, rn in enumerate(rows):
            entries = r.seq(rn)
            if len(entries) != rank:
                r.fail(rn, f"expected {rank} entries in row {j + 1}, got {len(entries)}")
            for i, en in enumerate(entries):
                if isinstance(en.value, list):
                    coeffs = [r.number(c) for c in en.value]
                    if len(coeffs) != src.dim:
                        r.fail(en, f"expected {src.dim} coefficients, got {len(coeffs)}")
                    mat[j, i] = F.array([F.scalar(c) for c in coeffs])
                else:
                    try:
                        mat[j, i] = parse_element(src, r.text(en))
                    except ValueError as exc:
                        r.fail(en, str(exc))
        images[g] = mat
    name = r.text(r.key(root, "name")) if "name" in r.mapping(root) else ""
    return TensorFunctor(src, tgt, rank, images, name)


def load_functor(ref: str, *, field: Field | None = None) -> TensorFunctor:
    path = resolve_data_path(ref)
    return parse_functor(path.read_text(), field=field, source=str(path))


# ---------------------------------------------------------------------------
# validation


@dataclass
class FunctorReport:
    checks: list = dc_field(default_factory=list)  # (name, ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def _rel_text(rel) -> str:
    return " + ".join(f"{c}*({p})" for c, p in rel)


def validate_functor(f: TensorFunctor) -> FunctorReport:
    """Idempotent system, arrow compatibility and target relations.

    Exactness needs no check: the bimodule is free on the right by
    construction. Raises :class:`RelationViolation` on the first failure.
    """
    A, L = f.target, f.source
    F = L.field
    if A.field != L.field:
        raise AlgebraMismatch("source and target algebras use different fields")
    rep = FunctorReport()
    eq = lambda x, y: F.equal(x, y)
    idem = {v: f.images[f"e_{v}"] for v in A.vertices}
    total = F.zeros(f.rank * f.rank, L.dim).reshape(f.rank, f.rank, L.dim)
    for v in A.vertices:
        ok = eq(lam_product(L, idem[v], idem[v]), idem[v])
        rep.checks.append((f"e_{v} is idempotent", ok))
        if not ok:
            raise RelationViolation(f"image of e_{v} is not idempotent")
        total = F.add(total, idem[v])
    for v, w in itertools.permutations(A.vertices, 2):
        ok = F.is_zero(lam_product(L, idem[v], idem[w]))
        rep.checks.append((f"e_{v} e_{w} = 0", ok))
        if not ok:
            raise RelationViolation(f"images of e_{v} and e_{w} are not orthogonal")
    ok = eq(total, lam_identity(L, f.rank))
    rep.checks.append(("idempotents sum to 1", ok))
    if not ok:
        raise RelationViolation("images of the vertex idempotents do not sum to the identity")
    for arr in A.quiver.arrows:
        lam = f.images[arr.name]
        ok = eq(lam_product(L, lam_product(L, idem[arr.target], lam), idem[arr.source]), lam)
        rep.checks.append((f"{arr.name} runs from e_{arr.source} to e_{arr.target}", ok))
        if not ok:
            raise RelationViolation(f"image of {arr.name} is not supported between its end points")
    for p in A.relations.monomial:
        ok = F.is_zero(f.image(p))
        rep.checks.append((f"relation {p}", ok))
        if not ok:
            raise RelationViolation(f"relation {p} does not vanish")
    for rel in A.relations.general:
        acc = F.zeros(f.rank * f.rank, L.dim).reshape(f.rank, f.rank, L.dim)
        for c, p in rel:
            acc = F.add(acc, F.scale(c, f.image(p)))
        ok = F.is_zero(acc)
        rep.checks.append((f"relation {_rel_text(rel)}", ok))
        if not ok:
            raise RelationViolation(f"relation {_rel_text(rel)} does not vanish")
    return rep


# ---------------------------------------------------------------------------
# application


def raw_action(f: TensorFunctor, m: Representation, g: str) -> np.ndarray:
    """Action of a target generator on ``M^r`` (total spaces stacked)."""
    F = m.field
    D = m.dim
    lam = f.images[g]
    out = F.zeros(f.rank * D, f.rank * D)
    for j in range(f.rank):
        for i in range(f.rank):
            if np.any(lam[j, i] != 0):
                out[j * D : (j + 1) * D, i * D : (i + 1) * D] = m.element_action(lam[j, i])
    return out


def _frames(f: TensorFunctor, m: Representation):
    F = m.field
    out = {}
    for v in f.target.vertices:
        B = column_basis(F, raw_action(f, m, f"e_{v}"))
        out[v] = (B, left_inverse(F, B))
    return out


def apply_to_module(f: TensorFunctor, m: Representation) -> Representation:
    if m.algebra != f.source:
        raise AlgebraMismatch("module is not over the source algebra")
    F = m.field
    fr = _frames(f, m)
    dims = {v: fr[v][0].shape[1] for v in f.target.vertices}
    maps = {}
    for arr in f.target.quiver.arrows:
        act = raw_action(f, m, arr.name)
        Bs = fr[arr.source][0]
        Bt, Lt = fr[arr.target]
        img = F.matmul(act, Bs)
        if not F.equal(F.matmul(Bt, F.matmul(Lt, img)), img):
            raise ArithmeticError(f"arrow {arr.name} leaves its target vertex space")
        maps[arr.name] = F.matmul(Lt, img)
    return Representation(f.target, dims, maps)


def total_hom(m: Representation, n: Representation, h: Hom) -> np.ndarray:
    F = m.field
    out = F.zeros(n.dim, m.dim)
    om, on = m.offsets(), n.offsets()
    for v in m.algebra.vertices:
        out[on[v] : on[v] + n.dims[v], om[v] : om[v] + m.dims[v]] = h[v]
    return out


def apply_to_hom(f: TensorFunctor, h: Hom, m: Representation, n: Representation) -> Hom:
    """``F(h): F(m) -> F(n)``, the restriction of ``h^(+r)`` to vertex spaces."""
    if m.algebra != f.source or n.algebra != f.source:
        raise AlgebraMismatch("homomorphism is not between source modules")
    if not is_hom(m, n, h):
        raise ValueError("not a homomorphism")
    F = m.field
    H = total_hom(m, n, h)
    Hr = F.kron(F.eye(f.rank), H)
    fm, fn = _frames(f, m), _frames(f, n)
    return {v: F.mul(fn[v][1], Hr, fm[v][0]) for v in f.target.vertices}


def apply_to_pointed(f: TensorFunctor, p: PointedModule, ftheta: Representation | None = None) -> PointedModule:
    ftheta = ftheta if ftheta is not None else apply_to_module(f, p.theta)
    fm = apply_to_module(f, p.module)
    chi = apply_to_hom(f, p.chi, p.theta, p.module)
    return PointedModule(ftheta, fm, chi, f"F{p.label}")


# ---------------------------------------------------------------------------
# sampled embedding checks


@dataclass
class EmbeddingCheck:
    kind: str  # indecomposable | non_isomorphic
    subjects: tuple
    ok: bool
    method: str
    certificate_rank: int | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "subjects": list(self.subjects), "ok": self.ok, "method": self.method}
        if self.certificate_rank is not None:
            out["idempotent_rank"] = self.certificate_rank
        return out


@dataclass
class EmbeddingReport:
    checks: list[EmbeddingCheck]
    seed: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self, kind: str | None = None) -> list[EmbeddingCheck]:
        return [c for c in self.checks if not c.ok and (kind is None or c.kind == kind)]


def verify_embedding_on_sample(f: TensorFunctor, modules: list, seed: int = 0, *,
                               labels: list[str] | None = None, max_pairs: int = 40) -> EmbeddingReport:
    """Images of indecomposables stay indecomposable; images of
    non-isomorphic modules stay non-isomorphic (on the given sample)."""
    labels = labels or [str(m.layout.word) if m.layout else f"m{i}" for i, m in enumerate(modules)]
    images = [apply_to_module(f, m) for m in modules]
    checks = []
    local = []
    for m, fm, lab in zip(modules, images, labels):
        src = is_indecomposable(m, seed=seed)
        if not src.indecomposable:
            local.append(None)
            continue
        r = is_indecomposable(fm, seed=seed)
        local.append(bool(r.indecomposable))
        rank = hom_rank(fm.field, r.idempotent) if r.idempotent is not None else None
        method = "radical of End" if r.indecomposable else (
            "idempotent found" if rank is not None else "End/rad has dimension > 1")
        checks.append(EmbeddingCheck("indecomposable", (lab,), bool(r.indecomposable), method, rank))
    pairs = list(itertools.combinations(range(len(modules)), 2))
    if len(pairs) > max_pairs:
        rng = np.random.default_rng(seed)
        pairs = sorted(pairs[k] for k in rng.choice(len(pairs), size=max_pairs, replace=False).tolist())
    for i, j in pairs:
        src = is_isomorphic(modules[i], modules[j], seed=seed)
        if src.isomorphic:
            continue
        tgt = is_isomorphic(images[i], images[j], seed=seed, m_local=local[i])
        checks.append(EmbeddingCheck("non_isomorphic", (labels[i], labels[j]), not tgt.isomorphic, tgt.status))
    return EmbeddingReport(checks, seed)


# ---------------------------------------------------------------------------
# transferring an independent pair


def _commute_task(args):
    i, j, f, p, q, fp, fq, seed = args
    src = pointed_pushout(p, q).pointed
    left = apply_to_pointed(f, src, fp.theta)
    right = pointed_pushout(fp, fq).pointed
    iso = find_pointed_isomorphism(left, right, seed=seed)
    return i, j, iso is not None


def verify_embedding_transfer(f: TensorFunctor, spec1: ChainSpec, spec2: ChainSpec, seed: int = 0, *,
                              jobs: int = 1, functor_ref: str = "") -> PairVerdict:
    """Push both chains through ``f`` and check the image pair.

    Hypotheses on the source side (local pointing source, injective
    pointings) raise :class:`HypothesisUnmet`. The embedding property of
    ``f`` is sampled on the chain modules; if it fails, the image checks are
    skipped and the verdict names the offending image.
    """
    start = time.perf_counter()
    opts = ["--prime", f.source.field.p] if f.source.field.is_prime else ["--rationals"]
    top = _cmd("pointedchains", "verify-thm41", *opts, "--functor", functor_ref or f.name, "--truncation",
               spec1.truncation, "--seed", seed)
    v = PairVerdict("embedding-transfer", params={
        "functor": f.name or functor_ref, "source": f.source.name, "target": f.target.name,
        "rank": f.rank, "truncation": spec1.truncation, "seed": seed}, replay=top)
    if spec1.algebra != f.source:
        raise AlgebraMismatch("chains do not live over the functor's source algebra")
    theta = spec1.theta()
    if not is_indecomposable(theta, seed=seed).indecomposable:
        raise HypothesisUnmet("the pointing source is not indecomposable")
    c1 = build_pointed_chain(spec1, theta)
    c2 = build_pointed_chain(spec2, theta)
    for c in c1 + c2:
        if not c.pointed.chi_injective():
            raise HypothesisUnmet(f"pointing of M({c.word}) is not injective")
    v.params["chain1"] = [str(c.x) for c in c1]
    v.params["chain2"] = [str(c.x) for c in c2]

    try:
        validate_functor(f)
        v.axioms.append(AxiomResult("functor.valid", "pass", 1))
    except RelationViolation as exc:
        v.axioms.append(AxiomResult("functor.valid", "fail", 1, {"reason": str(exc)}))
        v.elapsed = time.perf_counter() - start
        return v

    mods = [c.pointed.module for c in c1 + c2]
    labs = [f"chain1:{c.x}" for c in c1] + [f"chain2:{c.x}" for c in c2]
    rep = verify_embedding_on_sample(f, mods, seed, labels=labs)
    fails = [{"module": c.subjects[0], "word": str(mods[labs.index(c.subjects[0])].layout.word),
              "image": "decomposes", "method": c.method, "idempotent_rank": c.certificate_rank,
              "size": labs.index(c.subjects[0])}
             for c in rep.failures("indecomposable")]
    n_ind = sum(c.kind == "indecomposable" for c in rep.checks)
    v.axioms.append(_result("functor.preserves_indecomposables", fails, n_ind,
                            "sampled on the chain modules"))
    fails = [{"modules": list(c.subjects), "method": c.method, "size": 0} for c in rep.failures("non_isomorphic")]
    n_iso = sum(c.kind == "non_isomorphic" for c in rep.checks)
    v.axioms.append(_result("functor.reflects_isomorphism", fails, n_iso, "sampled on the chain modules"))
    if not rep.ok:
        v.axioms.append(AxiomResult("image", "skipped", 0,
                                    note="the functor is not a representation embedding on this sample"))
        v.elapsed = time.perf_counter() - start
        return v

    ftheta = apply_to_module(f, theta)
    v.axioms.append(AxiomResult("image.theta_nonzero", "pass" if ftheta.dim else "fail", 1))
    i1 = [ChainPoint(c.x, c.word, apply_to_pointed(f, c.pointed, ftheta)) for c in c1]
    i2 = [ChainPoint(c.x, c.word, apply_to_pointed(f, c.pointed, ftheta)) for c in c2]
    v.extend(verify_dense_chain(i1, name="image_chain1", seed=seed, jobs=jobs))
    v.extend(verify_dense_chain(i2, name="image_chain2", seed=seed, jobs=jobs))
    pv = verify_independent_pair(i1, i2, seed=seed, jobs=jobs, name="image_pair")
    v.extend(pv)
    grid = [(i, j) for i in range(len(c1)) for j in range(len(c2))]
    if len(grid) > 100:
        rng = np.random.default_rng(seed)
        grid = sorted(grid[k] for k in rng.choice(len(grid), size=100, replace=False).tolist())
    tasks = [(i, j, f, c1[i].pointed, c2[j].pointed, i1[i].pointed, i2[j].pointed, seed) for i, j in grid]
    fails = [{"left": str(c1[i].word), "right": str(c2[j].word), "size": len(c1[i].word) + len(c2[j].word)}
             for i, j, ok in _run(_commute_task, tasks, jobs) if not ok]
    v.axioms.append(_result("image_pair.functor_commutes_with_pushout", fails, len(tasks),
                            "explicit pointed isomorphism F(M*N) -> F(M)*F(N)"))
    v.elapsed = time.perf_counter() - start
    return v
