"""Checking dense chains of pointed string modules and their independence,
over finite truncations of the chains ``S X T U``.

Every check returns a :class:`PairVerdict` made of tagged axiom results.
Chains are listed in ascending string order; pointed maps then run from
later elements to earlier ones.
"""

from __future__ import annotations

import shlex
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import BoundQuiverAlgebra, is_special_biserial, is_string_algebra
from .pointed import (
    PointedModule,
    ThetaMismatch,
    find_pointed_isomorphism,
    is_pointed_hom,
    pointed_hom_exists,
    pointed_pushout,
    pushout_universal_check,
    same_representation,
)
from .rep import (
    Representation,
    basis_vector,
    hom_from_projective,
    is_indecomposable,
    is_isomorphic,
    projective_module,
    string_module,
)
from .strings import (
    BandWord,
    QGenPair,
    StringError,
    StringWord,
    enumerate_chain,
    is_qgen_pair,
    is_string,
)

GRID_BUDGET = 100  # full grid up to 10 x 10


class PointingVertexMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class AxiomResult:
    tag: str
    status: str  # pass | fail | skipped
    checked: int = 0
    counterexample: dict | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        out = {"tag": self.tag, "status": self.status, "checked": self.checked}
        if self.note:
            out["note"] = self.note
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class PairVerdict:
    name: str
    axioms: list[AxiomResult] = dc_field(default_factory=list)
    params: dict = dc_field(default_factory=dict)
    elapsed: float | None = None
    replay: str = ""

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.axioms)

    def axiom(self, tag: str) -> AxiomResult:
        for a in self.axioms:
            if a.tag == tag:
                return a
        raise KeyError(tag)

    def extend(self, other: "PairVerdict"):
        self.axioms.extend(other.axioms)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "verdict": self.name,
            "result": "pass" if self.passed else "fail",
            "scope": "finite truncation only; no statement about the untruncated chains",
            "params": self.params,
            "axioms": [a.to_dict() for a in self.axioms],
        }
        if not self.passed and self.replay:
            out["replay"] = self.replay
        if timing and self.elapsed is not None:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def to_text(self, timing: bool = False) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'} (finite truncation only)"]
        for k, v in self.params.items():
            lines.append(f"  {k}: {v}")
        for a in self.axioms:
            extra = f" ({a.note})" if a.note else ""
            lines.append(f"  [{a.status.upper():7}] {a.tag}: {a.checked} checked{extra}")
            if a.counterexample:
                for k, v in a.counterexample.items():
                    lines.append(f"      {k}: {v}")
        if not self.passed and self.replay:
            lines.append(f"  replay: {self.replay}")
        if timing and self.elapsed is not None:
            lines.append(f"  elapsed: {self.elapsed:.2f}s")
        return "\n".join(lines) + "\n"


def _result(tag: str, failures: list[dict], checked: int, note: str = "") -> AxiomResult:
    if not failures:
        return AxiomResult(tag, "pass", checked, None, note)
    worst = min(failures, key=lambda f: (f.get("size", 0), str(f)))
    worst = {k: v for k, v in worst.items() if k != "size"}
    return AxiomResult(tag, "fail", checked, worst, note)


def _cmd(*parts) -> str:
    return " ".join(shlex.quote(str(p)) for p in parts)


# ---------------------------------------------------------------------------
# chains


@dataclass
class ChainSpec:
    pair: QGenPair
    s: BandWord
    t: BandWord
    truncation: int
    theta_vertex: str
    name: str = "chain"
    algebra_ref: str = "lambda"

    @property
    def algebra(self) -> BoundQuiverAlgebra:
        return self.pair.algebra

    def theta(self) -> Representation:
        return projective_module(self.algebra, self.theta_vertex)


@dataclass
class ChainPoint:
    x: BandWord
    word: StringWord
    pointed: PointedModule


def pointed_string_module(theta: Representation, x: str, w: StringWord, k: int = 1) -> PointedModule:
    """``(M(w), z_k)`` pointed by ``P(x) -> M(w)``, generator to ``z_k``."""
    m = string_module(theta.algebra, w)
    v, idx = m.layout.z(k)
    if v != x:
        raise PointingVertexMismatch(f"z{k} of M({w}) lies at {v}, not at {x}")
    chi = hom_from_projective(theta, x, m, basis_vector(m, v, idx))
    return PointedModule(theta, m, chi, str(w))


def build_pointed_chain(spec: ChainSpec, theta: Representation | None = None) -> list[ChainPoint]:
    theta = theta if theta is not None else spec.theta()
    out = []
    for e in enumerate_chain(spec.pair, spec.s, spec.t, spec.truncation):
        out.append(ChainPoint(e.x, e.word, pointed_string_module(theta, spec.theta_vertex, e.word)))
    return out


def _run(fn, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _element_task(args):
    i, p, seed = args
    r = is_indecomposable(p.module, seed=seed)
    return i, bool(r.indecomposable), r.end_dim, r.radical_dim, p.chi_rank()


def _map_task(args):
    i, j, lo, hi = args
    f = pointed_hom_exists(hi, lo)
    return i, j, f is not None and is_pointed_hom(hi, lo, f)


def _word(p: ChainPoint | PointedModule) -> StringWord | None:
    mod = p.pointed.module if isinstance(p, ChainPoint) else p.module
    return mod.layout.word if mod.layout is not None else None


def verify_dense_chain(chain: list[ChainPoint], *, name: str = "chain", seed: int = 0, jobs: int = 1,
                       replay: dict | None = None) -> PairVerdict:
    """Local endomorphism rings with nonzero pointing, pointed maps between
    every ordered pair, and pairwise non-isomorphism (module level, which
    implies the pointed level)."""
    replay = replay or {}
    v = PairVerdict(name, params={"elements": len(chain), "seed": seed})
    res = _run(_element_task, [(i, c.pointed, seed) for i, c in enumerate(chain)], jobs)
    fails = []
    for i, local, e, r, chi_rank in res:
        if not local or chi_rank == 0:
            w = str(chain[i].word)
            fails.append({"index": i, "word": w, "local": local, "end_dim": e, "radical_dim": r,
                          "chi_rank": chi_rank, "size": len(chain[i].word),
                          "replay": _cmd(*replay.get("indec", ["pointedchains", "indec"]), "--word", w)})
    v.axioms.append(_result(f"{name}.local_and_pointed", fails, len(chain)))

    tasks = [(i, j, chain[i].pointed, chain[j].pointed) for i in range(len(chain)) for j in range(i + 1, len(chain))]
    fails = []
    for i, j, ok in _run(_map_task, tasks, jobs):
        if not ok:
            lo, hi = str(chain[i].word), str(chain[j].word)
            fails.append({"lower": lo, "upper": hi, "size": len(chain[i].word) + len(chain[j].word),
                          "reason": "no pointed map from the upper element to the lower one",
                          "replay": _cmd(*replay.get("hom", ["pointedchains", "hom"]), "--pointed",
                                         "--left", hi, "--right", lo)})
    v.axioms.append(_result(f"{name}.pointed_maps", fails, len(tasks),
                            "maps go from the larger string to the smaller"))

    fails, checked, probabilistic = [], 0, 0
    local = {i: ok for i, ok, *_ in res}
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            checked += 1
            iso = is_isomorphic(chain[i].pointed.module, chain[j].pointed.module, seed=seed,
                                m_local=local[i])
            probabilistic += not iso.exact
            if iso.isomorphic:
                a, b = str(chain[i].word), str(chain[j].word)
                fails.append({"first": a, "second": b, "iso_status": iso.status,
                              "size": len(chain[i].word) + len(chain[j].word),
                              "replay": _cmd(*replay.get("iso", ["pointedchains", "iso"]),
                                             "--left", a, "--right", b)})
    strong = _result(f"{name}.modules_non_isomorphic", fails, checked,
                     f"{probabilistic} decided probabilistically" if probabilistic else "")
    pointed = _result(f"{name}.not_pointed_isomorphic", fails, checked,
                      "implied by module non-isomorphism")
    v.axioms.extend([pointed, strong])
    return v


# ---------------------------------------------------------------------------
# pairs


def _cell_task(args):
    i, j, p, q, x, y, seed = args
    full = pointed_pushout(p, q)
    po = full.pointed
    r = is_indecomposable(po.module, seed=seed)
    cell = {"i": i, "j": j, "local": bool(r.indecomposable), "end_dim": r.end_dim,
            "dims": list(po.module.dim_vector()), "word": None, "matches": None, "why": "",
            "universal": pushout_universal_check(full, p, q, seed), "pushout": po}
    if x is not None and y is not None:
        w = x.inverse() + y
        ok, why = is_string(p.module.algebra, w)
        if not ok:
            cell["matches"] = False
            cell["why"] = f"{w} is not a string: {why.reason}"
        else:
            cell["word"] = str(w)
            try:
                target = pointed_string_module(p.theta, _theta_vertex(p), w, len(x) + 1)
            except PointingVertexMismatch as exc:
                cell["matches"], cell["why"] = False, str(exc)
            else:
                f = find_pointed_isomorphism(po, target, seed=seed)
                cell["matches"] = f is not None
                if f is None:
                    cell["why"] = "no pointed isomorphism found"
    return cell


def _theta_vertex(p: PointedModule) -> str:
    for v in p.theta.algebra.vertices:
        if p.theta.dims[v]:
            for lab in (p.theta.labels or {}).get(v, []):
                if lab == f"e_{v}":
                    return v
    raise ValueError("pointing source is not a projective module")


def verify_independent_pair(chain1: list[ChainPoint], chain2: list[ChainPoint], *, sample: int = GRID_BUDGET,
                            seed: int = 0, jobs: int = 1, name: str = "pair",
                            replay: dict | None = None) -> PairVerdict:
    """Pushouts ``M_q * N_t``: local endomorphism rings, pairwise
    non-isomorphism along rows and columns, and agreement with the string
    module on ``X^-1 Y`` pointed at the junction."""
    replay = replay or {}
    if chain1 and chain2 and not same_representation(chain1[0].pointed.theta, chain2[0].pointed.theta):
        raise ThetaMismatch("chains are pointed by different modules")
    grid = [(i, j) for i in range(len(chain1)) for j in range(len(chain2))]
    sampled = len(grid) > GRID_BUDGET
    if sampled:
        rng = np.random.default_rng(seed)
        k = min(sample, len(grid))
        grid = sorted(grid[n] for n in rng.choice(len(grid), size=k, replace=False).tolist())
    v = PairVerdict(name, params={"grid": f"{len(chain1)}x{len(chain2)}", "cells": len(grid),
                                  "sampled": sampled, "seed": seed})
    if sample == 0 or not grid:
        return v
    tasks = [(i, j, chain1[i].pointed, chain2[j].pointed, _word(chain1[i]), _word(chain2[j]), seed)
             for i, j in grid]
    cells = _run(_cell_task, tasks, jobs)

    def cx(c, **extra):
        x, y = str(chain1[c["i"]].word), str(chain2[c["j"]].word)
        return {"left": x, "right": y, "size": len(chain1[c["i"]].word) + len(chain2[c["j"]].word),
                "replay": _cmd(*replay.get("pushout", ["pointedchains", "pushout"]), "--left", x, "--right", y),
                **extra}

    fails = [cx(c, end_dim=c["end_dim"], dims=c["dims"]) for c in cells if not c["local"]]
    v.axioms.append(_result(f"{name}.pushout_local", fails, len(cells)))

    fails = [cx(c, reason=c["universal"]) for c in cells if c["universal"]]
    v.axioms.append(_result(f"{name}.pushout_universal_property", fails, len(cells), "spot check"))

    fails = [cx(c, reason=c["why"]) for c in cells if c["matches"] is False]
    known = [c for c in cells if c["matches"] is not None]
    if known:
        v.axioms.append(_result(f"{name}.pushout_is_string_module", fails, len(known),
                                "pointed isomorphism to M(X^-1 Y) at the junction, certified"))

    # rows and columns: same t with q != q', same q with t != t'
    by_cell = {(c["i"], c["j"]): c for c in cells}
    fails, checked, probabilistic = [], 0, 0
    keys = sorted(by_cell)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            (i1, j1), (i2, j2) = keys[a], keys[b]
            if i1 != i2 and j1 != j2:
                continue
            checked += 1
            c1, c2 = by_cell[keys[a]], by_cell[keys[b]]
            if c1["matches"] and c2["matches"]:
                w1, w2 = StringWord.parse(c1["word"]), StringWord.parse(c2["word"])
                same = w1 == w2 or w1 == w2.inverse()
                how = "word criterion"
            else:
                iso = is_isomorphic(c1["pushout"].module, c2["pushout"].module, seed=seed,
                                    m_local=c1["local"])
                same = iso.isomorphic or not iso.exact
                how = iso.status
                if not iso.exact:
                    probabilistic += 1
            if same:
                fails.append({"first": [str(chain1[i1].word), str(chain2[j1].word)],
                              "second": [str(chain1[i2].word), str(chain2[j2].word)],
                              "decided_by": how,
                              "size": len(chain1[i1].word) + len(chain2[j1].word)
                              + len(chain1[i2].word) + len(chain2[j2].word)})
    note = f"{probabilistic} decided probabilistically" if probabilistic else ""
    v.axioms.append(_result(f"{name}.pushouts_not_pointed_isomorphic", fails, checked,
                            "implied by module non-isomorphism"))
    v.axioms.append(_result(f"{name}.pushout_modules_non_isomorphic", fails, checked, note))
    return v


# ---------------------------------------------------------------------------
# the canonical instance


def canonical_specs(pair: QGenPair, s: BandWord, t: BandWord, truncation: int, theta_vertex: str,
                    algebra_ref: str = "lambda"):
    inv = pair.inverse_pair()
    return (ChainSpec(pair, s, t, truncation, theta_vertex, "chain1", algebra_ref),
            ChainSpec(inv, s, t, truncation, theta_vertex, "chain2", algebra_ref))


def verify_canonical_instance(truncation: int, seed: int = 0, *, jobs: int = 1, pair_ref: str = "lambda_pair",
                              algebra: BoundQuiverAlgebra | None = None, algebra_ref: str | None = None,
                              field=None) -> PairVerdict:
    """Full pipeline on the bundled string algebra and band pair.

    Checks the string-algebra axioms, both band pairs, both chains, the
    pointing source and pointings, and independence of the pair.
    """
    from .files import load_pair

    start = time.perf_counter()
    pf = load_pair(pair_ref, field=field)
    a = algebra if algebra is not None else pf.algebra
    ref = algebra_ref or "lambda"
    opts = ["--prime", a.field.p] if a.field.is_prime else ["--rationals"]
    alg_args = ["--algebra", ref]
    replay = {k: ["pointedchains", k, *opts, *alg_args] for k in ("indec", "hom", "iso", "pushout")}
    top = _cmd("pointedchains", "verify-thm34", *opts, *alg_args, "--pair", pair_ref,
               "--truncation", truncation, "--seed", seed)
    v = PairVerdict("canonical-instance", params={
        "algebra": ref, "field": a.field.name(), "u": str(pf.u), "v": str(pf.v),
        "s": str(pf.s), "t": str(pf.t), "truncation": truncation, "seed": seed,
        "theta": f"P({pf.theta_vertex})"}, replay=top)

    sb, witness = is_special_biserial(a)
    ok = is_string_algebra(a)
    v.axioms.append(AxiomResult("algebra.string_algebra", "pass" if ok else "fail", 1,
                                None if ok else {"witness": str(witness) if witness else "non-monomial relations",
                                                 "replay": _cmd("pointedchains", "check-algebra", *opts, ref)}))
    pair = None
    for tag, (u, w) in (("bands.pair", (pf.u, pf.v)), ("bands.inverse_pair", (pf.u.inverse(), pf.v.inverse()))):
        try:
            good, why = is_qgen_pair(a, u, w)
        except StringError as exc:
            good, why = False, str(exc)
        v.axioms.append(AxiomResult(tag, "pass" if good else "fail", 1, None if good else {
            "u": str(u), "v": str(w), "reason": why,
            "replay": _cmd("pointedchains", "qgen", *opts, *alg_args, "--u", str(u), "--v", str(w))}))
        if tag == "bands.pair" and good:
            pair = QGenPair(a, u, w)
    if pair is None or not v.axioms[-1].passed:
        for tag in ("theta.local", "chain1", "chain2", "pointings.injective", "pair"):
            v.axioms.append(AxiomResult(tag, "skipped", 0, note="band pair checks failed"))
        v.elapsed = time.perf_counter() - start
        return v

    spec1, spec2 = canonical_specs(pair, pf.s, pf.t, truncation, pf.theta_vertex, ref)
    theta = spec1.theta()
    r = is_indecomposable(theta, seed=seed)
    v.axioms.append(AxiomResult("theta.local", "pass" if r.indecomposable else "fail", 1))
    try:
        c1 = build_pointed_chain(spec1, theta)
        c2 = build_pointed_chain(spec2, theta)
    except (PointingVertexMismatch, StringError) as exc:
        v.axioms.append(AxiomResult("chains.build", "fail", 0, {"reason": str(exc)}))
        v.elapsed = time.perf_counter() - start
        return v
    v.params["chain1"] = [str(c.x) for c in c1]
    v.params["chain2"] = [str(c.x) for c in c2]
    v.extend(verify_dense_chain(c1, name="chain1", seed=seed, jobs=jobs, replay=replay))
    v.extend(verify_dense_chain(c2, name="chain2", seed=seed, jobs=jobs, replay=replay))
    fails = [{"word": str(c.word), "chi_rank": c.pointed.chi_rank(), "size": len(c.word)}
             for c in c1 + c2 if not c.pointed.chi_injective()]
    v.axioms.append(_result("pointings.injective", fails, len(c1) + len(c2)))
    v.extend(verify_independent_pair(c1, c2, seed=seed, jobs=jobs, name="pair", replay=replay))
    v.elapsed = time.perf_counter() - start
    return v


def canonical_fragment(truncation: int, depth: int, *, pair_ref: str = "lambda_pair", field=None,
                       cap: int = 200):
    """Lattice fragment generated by both truncated chains of the bundled pair."""
    from .files import load_pair
    from .pointed import generate_fragment

    pf = load_pair(pair_ref, field=field)
    pair = QGenPair(pf.algebra, pf.u, pf.v)
    s1, s2 = canonical_specs(pair, pf.s, pf.t, truncation, pf.theta_vertex)
    theta = s1.theta()
    seeds = []
    for name, spec in (("C1", s1), ("C2", s2)):
        for c in build_pointed_chain(spec, theta):
            c.pointed.label = f"{name}:{c.x}"
            seeds.append(c.pointed)
    return generate_fragment(seeds, depth, cap=cap)
