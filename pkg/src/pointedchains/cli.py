"""Command-line driver.

Exit codes: 0 when the check passes, 1 when it fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys

from . import __version__
from .algebra import AlgebraError, is_special_biserial, is_string_algebra
from .files import SpecFileError, load_algebra, load_pair
from .functor import (
    HypothesisUnmet,
    apply_to_module,
    load_functor,
    validate_functor,
    verify_embedding_transfer,
)
from .linalg import Field
from .pointed import (
    BudgetExceeded,
    check_wide_on_sample,
    find_pointed_isomorphism,
    pointed_hom_exists,
    pointed_pushout,
)
from .rep import (
    RelationViolation,
    direct_sum,
    hom_dim,
    hom_rank,
    is_indecomposable,
    is_isomorphic,
    projective_module,
    string_module,
    string_module_dot,
)
from .strings import (
    QGenPair,
    StringError,
    StringWord,
    band_failure,
    density_witness,
    enumerate_chain,
    is_qgen_pair,
    is_string,
)
from .verify import (
    PointingVertexMismatch,
    build_pointed_chain,
    canonical_fragment,
    canonical_specs,
    pointed_string_module,
    verify_canonical_instance,
    verify_dense_chain,
    verify_independent_pair,
)

PASS, FAIL, BAD_INPUT = 0, 1, 2


class Report:
    """Collects one result and renders it as text or JSON."""

    def __init__(self, command: str, args):
        self.data = {"command": command, "seed": args.seed, "field": args.field.name()}
        self.lines: list[str] = []
        self.dot: str | None = None

    def put(self, key, value, text: str | None = None):
        self.data[key] = value
        self.lines.append(text if text is not None else f"{key}: {value}")

    def text(self, line: str):
        self.lines.append(line)

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return json.dumps(self.data, indent=2) + "\n"
        if fmt == "dot":
            if self.dot is None:
                raise UsageError("this command has no DOT rendering")
            return self.dot
        return "\n".join(self.lines) + "\n"


class UsageError(ValueError):
    pass


def _word(text: str) -> StringWord:
    return StringWord.parse(text)


def _theta_vertex(args) -> str:
    return load_pair(args.pair, field=args.field).theta_vertex


# ---------------------------------------------------------------------------
# subcommands


def cmd_check_algebra(args, rep: Report) -> int:
    a = load_algebra(args.file, field=args.field, cap=args.cap)
    sb, witness = is_special_biserial(a)
    rep.put("name", a.name)
    rep.put("vertices", list(a.vertices))
    rep.put("dimension", a.dim)
    rep.put("nilpotency", a.nilpotency)
    rep.put("basis", [str(p) for p in a.basis], "basis: " + ", ".join(str(p) for p in a.basis))
    rep.put("special_biserial", sb)
    if not sb:
        rep.put("witness", list(map(str, witness)) if isinstance(witness, tuple) else str(witness))
    rep.put("string_algebra", is_string_algebra(a))
    return PASS


def cmd_string(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    w = _word(args.word)
    ok, why = is_string(a, w)
    rep.put("word", str(w))
    rep.put("is_string", ok)
    if not ok:
        rep.put("violation", {"span": list(why.span), "reason": why.reason},
                f"violation: letters {why.span[0]}..{why.span[1]}: {why.reason}")
    return PASS if ok else FAIL


def cmd_band(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    w = _word(args.word)
    why = band_failure(a, w)
    rep.put("word", str(w))
    rep.put("is_band", why is None)
    if why:
        rep.put("reason", why)
    return PASS if why is None else FAIL


def cmd_qgen(args, rep: Report) -> int:
    pf = load_pair(args.pair, field=args.field)
    a = load_algebra(args.algebra, field=args.field) if args.algebra else pf.algebra
    u = _word(args.u) if args.u else pf.u
    v = _word(args.v) if args.v else pf.v
    results = []
    for name, (x, y) in (("pair", (u, v)), ("inverse_pair", (u.inverse(), v.inverse()))):
        ok, why = is_qgen_pair(a, x, y)
        results.append(ok)
        rep.put(name, {"u": str(x), "v": str(y), "qgen": ok, **({"reason": why} if why else {})},
                f"{name}: U = {x}, V = {y}: {'q-generating' if ok else 'not q-generating: ' + why}")
    return PASS if all(results) else FAIL


def cmd_chain(args, rep: Report) -> int:
    pf = load_pair(args.pair, field=args.field)
    pair = QGenPair(pf.algebra, pf.u, pf.v)
    if args.inverse:
        pair = pair.inverse_pair()
    elems = enumerate_chain(pair, pf.s, pf.t, args.truncation)
    rep.put("truncation", args.truncation)
    rep.put("elements", [{"x": str(e.x), "word": str(e.word), "length": len(e.word)} for e in elems],
            "elements (ascending):\n" + "\n".join(f"  {e.x}: {e.word}" for e in elems))
    status = PASS
    if args.density is not None:
        wit = []
        for lo, hi in zip(elems, elems[1:]):
            x = density_witness(pair, pf.s, pf.t, lo.x, hi.x, args.density)
            wit.append({"low": str(lo.x), "high": str(hi.x), "between": None if x is None else str(x)})
            if x is None:
                status = FAIL
        rep.put("density", wit, "density witnesses:\n" + "\n".join(
            f"  {d['low']} < {d['between'] or 'NONE'} < {d['high']}" for d in wit))
    return status


def cmd_module(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    m = string_module(a, _word(args.word))
    d = m.to_dict()
    rep.data.update(d)
    rep.text(f"M({m.layout.word}) over {a.name}, dims {m.dim_vector()}")
    for name, mat in d["arrows"].items():
        rep.text(f"  {name}: {mat}")
    rep.dot = string_module_dot(m)
    return PASS


def cmd_hom(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    left, right = _word(args.left), _word(args.right)
    if args.pointed:
        theta = projective_module(a, _theta_vertex(args))
        x = _theta_vertex(args)
        p = pointed_string_module(theta, x, left)
        q = pointed_string_module(theta, x, right)
        f = pointed_hom_exists(p, q)
        rep.put("pointed_hom_exists", f is not None)
        return PASS if f is not None else FAIL
    rep.put("hom_dimension", hom_dim(string_module(a, left), string_module(a, right)))
    return PASS


def cmd_indec(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    mods = [string_module(a, _word(w)) for w in args.word]
    m = mods[0]
    for n in mods[1:]:
        m = direct_sum(m, n)
    r = is_indecomposable(m, seed=args.seed)
    rep.put("dims", list(m.dim_vector()))
    rep.put("end_dimension", r.end_dim)
    rep.put("radical_dimension", r.radical_dim)
    rep.put("indecomposable", r.indecomposable)
    if r.idempotent is not None:
        rep.put("idempotent_rank", hom_rank(m.field, r.idempotent))
    if r.note:
        rep.put("note", r.note)
    return PASS if r.indecomposable else FAIL


def cmd_iso(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    r = is_isomorphic(string_module(a, _word(args.left)), string_module(a, _word(args.right)),
                      seed=args.seed, trials=args.trials)
    rep.put("status", r.status)
    if r.failure_bound is not None:
        rep.put("failure_bound", r.failure_bound)
    return PASS if r.isomorphic else FAIL


def cmd_pushout(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field)
    x = _theta_vertex(args)
    theta = projective_module(a, x)
    left, right = _word(args.left), _word(args.right)
    p = pointed_string_module(theta, x, left)
    q = pointed_string_module(theta, x, right)
    po = pointed_pushout(p, q).pointed
    r = is_indecomposable(po.module, seed=args.seed)
    rep.put("dims", list(po.module.dim_vector()))
    rep.put("indecomposable", r.indecomposable)
    ok = True
    w = left.inverse() + right
    good, why = is_string(a, w)
    if good:
        target = pointed_string_module(theta, x, w, len(left) + 1)
        f = find_pointed_isomorphism(po, target, seed=args.seed)
        rep.put("string_word", str(w))
        rep.put("pointed_isomorphic_to_string_module", f is not None)
        ok = f is not None
    else:
        rep.put("string_word", None, f"string_word: {w} is not a string ({why.reason})")
    return PASS if ok else FAIL


def _verdict(rep: Report, v, args) -> int:
    rep.data.update(v.to_dict(timing=args.timing))
    rep.lines.append(v.to_text(timing=args.timing).rstrip("\n"))
    return PASS if v.passed else FAIL


def cmd_verify_pair(args, rep: Report) -> int:
    pf = load_pair(args.pair, field=args.field)
    pair = QGenPair(pf.algebra, pf.u, pf.v)
    s1, s2 = canonical_specs(pair, pf.s, pf.t, args.truncation, pf.theta_vertex)
    theta = s1.theta()
    c1 = build_pointed_chain(s1, theta)
    if args.truncation2 is not None:
        s2.truncation = args.truncation2
    c2 = build_pointed_chain(s2, theta)
    v = verify_dense_chain(c1, name="chain1", seed=args.seed, jobs=args.jobs)
    v.name = "independent-pair"
    v.params = {"truncation": args.truncation, "truncation2": s2.truncation, "seed": args.seed}
    v.extend(verify_dense_chain(c2, name="chain2", seed=args.seed, jobs=args.jobs))
    v.extend(verify_independent_pair(c1, c2, sample=args.sample, seed=args.seed, jobs=args.jobs))
    v.replay = f"pointedchains verify-pair --truncation {args.truncation} --seed {args.seed}"
    return _verdict(rep, v, args)


def cmd_verify_thm34(args, rep: Report) -> int:
    a = load_algebra(args.algebra, field=args.field) if args.algebra else None
    v = verify_canonical_instance(args.truncation, args.seed, jobs=args.jobs, pair_ref=args.pair,
                                  algebra=a, algebra_ref=args.algebra, field=args.field)
    return _verdict(rep, v, args)


def cmd_functor_validate(args, rep: Report) -> int:
    f = load_functor(args.file, field=args.field)
    rep.put("functor", f.name)
    rep.put("rank", f.rank)
    try:
        r = validate_functor(f)
    except RelationViolation as exc:
        rep.put("valid", False)
        rep.put("violation", str(exc))
        return FAIL
    rep.put("valid", r.ok)
    rep.put("checks", [name for name, _ in r.checks], "checks: " + "; ".join(n for n, _ in r.checks))
    return PASS


def cmd_functor_apply(args, rep: Report) -> int:
    f = load_functor(args.file, field=args.field)
    validate_functor(f)
    m = string_module(f.source, _word(args.word))
    fm = apply_to_module(f, m)
    rep.put("raw_dimension", f.rank * m.dim)
    d = fm.to_dict()
    rep.data.update(d)
    rep.text(f"F(M({m.layout.word})) over {f.target.name}, dims {fm.dim_vector()}")
    for name, mat in d["arrows"].items():
        rep.text(f"  {name}: {mat}")
    return PASS


def cmd_verify_thm41(args, rep: Report) -> int:
    f = load_functor(args.functor, field=args.field)
    pf = load_pair(args.pair, field=args.field)
    pair = QGenPair(pf.algebra, pf.u, pf.v)
    s1, s2 = canonical_specs(pair, pf.s, pf.t, args.truncation, pf.theta_vertex)
    try:
        v = verify_embedding_transfer(f, s1, s2, args.seed, jobs=args.jobs, functor_ref=args.functor)
    except HypothesisUnmet as exc:
        rep.put("result", "fail")
        rep.put("hypothesis_unmet", str(exc))
        return FAIL
    return _verdict(rep, v, args)


def cmd_fragment(args, rep: Report) -> int:
    frag = canonical_fragment(args.truncation, args.depth, pair_ref=args.pair, field=args.field, cap=args.cap)
    w = check_wide_on_sample(frag, args.samples, args.seed)
    rep.put("scope", "finite fragment only; says nothing about width of the full lattice")
    rep.put("fragment", frag.to_dict(), f"fragment: {len(frag)} classes, depth {frag.depth}, "
            f"closed: {frag.closed}")
    rep.put("wideness", w.to_dict(), f"wideness: {w.successes} of {len(w.results)} sampled pairs have "
            f"witnesses ({w.population} comparable pairs)")
    for r in w.results:
        name = lambda i: frag.nodes[i].label or f"#{i}"
        tail = f" M={name(r.m)} N={name(r.n)}" if r.m is not None else ""
        rep.text(f"  {name(r.low)} < {name(r.high)}: {r.status}{tail}")
    rep.dot = frag.to_dot()
    return PASS if w.successes >= args.require else FAIL


def cmd_export_dot(args, rep: Report) -> int:
    if args.word:
        a = load_algebra(args.algebra, field=args.field)
        rep.dot = string_module_dot(string_module(a, _word(args.word)))
    else:
        frag = canonical_fragment(args.truncation, args.depth, pair_ref=args.pair, field=args.field,
                                  cap=args.cap)
        rep.dot = frag.to_dot()
    args.format = "dot"
    return PASS


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--prime", type=int, default=32003, help="field modulus (default 32003)")
    g.add_argument("--rationals", action="store_true", help="work over the rationals")
    g.add_argument("--format", choices=("text", "structured", "dot"), default="text")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--jobs", type=int, default=1, help="worker processes for verification grids")
    g.add_argument("--timing", action="store_true", help="include wall-clock time in reports")
    g.add_argument("--algebra", default=None, help="algebra file or bundled name (default lambda)")
    g.add_argument("--pair", default="lambda_pair", help="band pair file or bundled name")

    p = argparse.ArgumentParser(prog="pointedchains", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("check-algebra", cmd_check_algebra, "validate an algebra file")
    sp.add_argument("file", nargs="?", default="lambda")
    sp.add_argument("--cap", type=int, default=64)
    add("string", cmd_string, "is a word a string").add_argument("--word", required=True)
    add("band", cmd_band, "is a word a band").add_argument("--word", required=True)
    sp = add("qgen", cmd_qgen, "check a pair of bands and its inverse pair")
    sp.add_argument("--u")
    sp.add_argument("--v")
    sp = add("chain", cmd_chain, "list a truncated chain S X T U")
    sp.add_argument("--truncation", type=int, default=2)
    sp.add_argument("--inverse", action="store_true", help="use the inverse band pair")
    sp.add_argument("--density", type=int, metavar="MAX_LEN", help="search density witnesses")
    add("module", cmd_module, "export a string module").add_argument("--word", required=True)
    sp = add("hom", cmd_hom, "Hom dimension between string modules")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--pointed", action="store_true", help="pointed hom from left to right at z1")
    add("indec", cmd_indec, "indecomposability of a string module or a sum").add_argument(
        "--word", action="append", required=True, help="repeat to form a direct sum")
    sp = add("iso", cmd_iso, "isomorphism of two string modules")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--trials", type=int, default=20)
    sp = add("pushout", cmd_pushout, "pointed pushout of two pointed string modules")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp = add("verify-pair", cmd_verify_pair, "dense chains and independence of the bundled pair")
    sp.add_argument("--truncation", type=int, default=2)
    sp.add_argument("--truncation2", type=int)
    sp.add_argument("--sample", type=int, default=100)
    add("verify-thm34", cmd_verify_thm34, "full pipeline on the canonical string algebra").add_argument(
        "--truncation", type=int, default=2)
    add("functor-validate", cmd_functor_validate, "validate a tensor functor file").add_argument("file")
    sp = add("functor-apply", cmd_functor_apply, "apply a tensor functor to a string module")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)
    sp = add("verify-thm41", cmd_verify_thm41, "transfer the independent pair through a functor")
    sp.add_argument("--functor", default="identity")
    sp.add_argument("--truncation", type=int, default=2)
    sp = add("fragment", cmd_fragment, "generate a lattice fragment and sample wideness")
    sp.add_argument("--truncation", type=int, default=1)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--samples", type=int, default=40)
    sp.add_argument("--require", type=int, default=0, help="fail below this many witnesses")
    sp.add_argument("--cap", type=int, default=200)
    sp = add("export-dot", cmd_export_dot, "DOT for a string module or a fragment")
    sp.add_argument("--word")
    sp.add_argument("--truncation", type=int, default=1)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--cap", type=int, default=200)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    if args.algebra is None and args.command not in ("qgen", "verify-thm34"):
        args.algebra = "lambda"
    try:
        args.field = Field.rationals() if args.rationals else Field(args.prime)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    rep = Report(args.command, args)
    try:
        code = args.fn(args, rep)
        if code == FAIL and "replay" not in rep.data:
            rep.put("replay", "pointedchains " + shlex.join(argv))
        out = rep.render(args.format)
    except (SpecFileError, FileNotFoundError, AlgebraError, StringError, PointingVertexMismatch,
            UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (RelationViolation, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
