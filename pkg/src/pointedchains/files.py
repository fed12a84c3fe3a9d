"""Reading and writing algebra files.

Algebra files are YAML documents::

    name: lambda
    vertices: [x1, x2, x3]
    arrows:
      - {name: a, source: x1, target: x2}
    relations:
      monomial:
        - [d, a]          # composition order: first a, then d
      general:
        - [{coeff: 1, path: [c, a]}, {coeff: -1, path: [d, b]}]

Every validation error carries the line and column (1-based) of the
offending node.
"""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path as FsPath

import yaml

from .algebra import (
    AlgebraError,
    Arrow,
    BoundQuiverAlgebra,
    Path,
    Quiver,
    RelationSet,
)
from .linalg import Field

DATA_ENV = "POINTEDCHAINS_DATA"
BUNDLED_DATA = FsPath(__file__).parent / "data"


class SpecFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.message, self.line, self.column, self.source = message, line, column, source
        where = ""
        if line is not None:
            where = f"{source or '<input>'}:{line}:{column}: "
        super().__init__(f"{where}{message}")


class _Node:
    """A parsed YAML value together with its position."""

    __slots__ = ("value", "line", "column")

    def __init__(self, value, line, column):
        self.value, self.line, self.column = value, line, column


def _wrap(node: yaml.Node) -> _Node:
    line, col = node.start_mark.line + 1, node.start_mark.column + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            out[k.value] = _wrap(v)
        return _Node(out, line, col)
    if isinstance(node, yaml.SequenceNode):
        return _Node([_wrap(v) for v in node.value], line, col)
    scalar = node.value
    if node.tag == "tag:yaml.org,2002:int":
        scalar = int(scalar)
    elif node.tag == "tag:yaml.org,2002:null":
        scalar = None
    return _Node(scalar, line, col)


class Reader:
    """Typed accessors over a located YAML tree."""

    def __init__(self, text: str, source: str | None = None):
        self.source = source
        try:
            loader = yaml.SafeLoader(text)
            try:
                root = loader.get_single_node()
            finally:
                loader.dispose()
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark
            raise SpecFileError(str(exc.problem), mark.line + 1, mark.column + 1, source) from None
        if root is None:
            raise SpecFileError("empty document", 1, 1, source)
        self.root = _wrap(root)

    def fail(self, node: _Node, message: str):
        raise SpecFileError(message, node.line, node.column, self.source)

    def mapping(self, node: _Node) -> dict:
        if not isinstance(node.value, dict):
            self.fail(node, "expected a mapping")
        return node.value

    def seq(self, node: _Node) -> list:
        if not isinstance(node.value, list):
            self.fail(node, "expected a list")
        return node.value

    def text(self, node: _Node) -> str:
        if isinstance(node.value, (dict, list)) or node.value is None:
            self.fail(node, "expected a scalar")
        return str(node.value)

    def integer(self, node: _Node) -> int:
        if not isinstance(node.value, int):
            self.fail(node, "expected an integer")
        return node.value

    def number(self, node: _Node) -> Fraction:
        try:
            return Fraction(str(node.value))
        except (ValueError, ZeroDivisionError):
            self.fail(node, f"expected a number, got {node.value!r}")

    def key(self, node: _Node, name: str, default=...) -> _Node:
        m = self.mapping(node)
        if name not in m:
            if default is ...:
                self.fail(node, f"missing field {name!r}")
            return _Node(default, node.line, node.column)
        return m[name]


def resolve_data_path(ref: str, suffix: str = ".yaml") -> FsPath:
    """Map a file path or a bundled name (``lambda``) to a file."""
    p = FsPath(ref)
    if p.exists():
        return p
    roots = []
    if os.environ.get(DATA_ENV):
        roots.append(FsPath(os.environ[DATA_ENV]))
    roots.append(BUNDLED_DATA)
    for root in roots:
        for cand in (root / ref, root / f"{ref}{suffix}"):
            if cand.exists():
                return cand
    raise FileNotFoundError(f"no such file or bundled data: {ref}")


def _path_from(reader: Reader, node: _Node, quiver: Quiver) -> Path:
    if isinstance(node.value, str) and node.value.startswith("e_"):
        v = node.value[2:]
        if v not in quiver.vertices:
            reader.fail(node, f"unknown vertex {v!r}")
        return Path.stationary(v)
    letters = [reader.text(n) for n in reader.seq(node)]
    if not letters:
        reader.fail(node, "empty path")
    for n, name in zip(node.value, letters):
        if not quiver.has_arrow(name):
            reader.fail(n, f"unknown arrow {name!r}")
    try:
        return Path(tuple(letters)).check(quiver)
    except AlgebraError as exc:
        reader.fail(node, str(exc))


def parse_algebra(text: str, *, field: Field | None = None, source: str | None = None,
                  cap: int | None = None) -> BoundQuiverAlgebra:
    r = Reader(text, source)
    root = r.root
    r.mapping(root)
    vnode = r.key(root, "vertices")
    vertices = [r.text(v) for v in r.seq(vnode)]
    if len(set(vertices)) != len(vertices):
        r.fail(vnode, "duplicate vertex names")
    arrows = []
    seen = set(vertices)
    for an in r.seq(r.key(root, "arrows", [])):
        name = r.text(r.key(an, "name"))
        src_node, tgt_node = r.key(an, "source"), r.key(an, "target")
        src, tgt = r.text(src_node), r.text(tgt_node)
        if name in seen:
            r.fail(an, f"name {name!r} already used")
        seen.add(name)
        if src not in vertices:
            r.fail(src_node, f"unknown vertex {src!r} in arrow {name!r}")
        if tgt not in vertices:
            r.fail(tgt_node, f"unknown vertex {tgt!r} in arrow {name!r}")
        arrows.append(Arrow(name, src, tgt))
    quiver = Quiver(tuple(vertices), tuple(arrows))
    rels = r.key(root, "relations", {})
    monomial, general = [], []
    if rels.value:
        for pn in r.seq(r.key(rels, "monomial", [])):
            monomial.append(_path_from(r, pn, quiver))
        for gn in r.seq(r.key(rels, "general", [])):
            terms = []
            for tn in r.seq(gn):
                terms.append((r.number(r.key(tn, "coeff")), _path_from(r, r.key(tn, "path"), quiver)))
            if not terms:
                r.fail(gn, "empty relation")
            general.append(tuple(terms))
    name = r.text(r.key(root, "name")) if "name" in r.mapping(root) else ""
    kwargs = {} if cap is None else {"cap": cap}
    try:
        return BoundQuiverAlgebra(quiver, RelationSet(tuple(monomial), tuple(general)),
                                  field=field, name=name, **kwargs)
    except AlgebraError as exc:
        r.fail(rels if rels.value else root, str(exc))


def load_algebra(ref: str, *, field: Field | None = None, cap: int | None = None) -> BoundQuiverAlgebra:
    path = resolve_data_path(ref)
    return parse_algebra(path.read_text(), field=field, source=str(path), cap=cap)


def _path_out(p: Path):
    return f"e_{p.vertex}" if not p.arrows else list(p.arrows)


def _coeff_out(c: Fraction):
    return int(c) if c.denominator == 1 else str(c)


def dump_algebra(a: BoundQuiverAlgebra) -> str:
    doc = {
        "name": a.name,
        "vertices": list(a.vertices),
        "arrows": [{"name": x.name, "source": x.source, "target": x.target} for x in a.quiver.arrows],
        "relations": {
            "monomial": [_path_out(p) for p in a.relations.monomial],
            "general": [
                [{"coeff": _coeff_out(c), "path": _path_out(p)} for c, p in rel]
                for rel in a.relations.general
            ],
        },
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


class PairFile:
    """Contents of a band-pair file: algebra, bands, decorations, pointing vertex."""

    def __init__(self, algebra, u, v, s, t, theta_vertex, source=None):
        self.algebra, self.u, self.v, self.s, self.t = algebra, u, v, s, t
        self.theta_vertex, self.source = theta_vertex, source


def parse_pair(text: str, *, field: Field | None = None, source: str | None = None) -> PairFile:
    from .strings import BandWord, StringError, StringWord

    r = Reader(text, source)
    root = r.root
    r.mapping(root)
    anode = r.key(root, "algebra")
    ref = r.text(anode)
    try:
        algebra = load_algebra(ref, field=field)
    except FileNotFoundError as exc:
        r.fail(anode, str(exc))

    def word(name):
        node = r.key(root, name)
        try:
            w = StringWord.parse(r.text(node))
        except StringError as exc:
            r.fail(node, str(exc))
        for c in w:
            if not algebra.quiver.has_arrow(c.arrow):
                r.fail(node, f"unknown arrow {c.arrow!r}")
        return w

    def band_word(name):
        node = r.key(root, name, "phi")
        try:
            return BandWord.parse(r.text(node))
        except StringError as exc:
            r.fail(node, str(exc))

    tnode = r.key(r.key(root, "theta"), "projective")
    x = r.text(tnode)
    if x not in algebra.vertices:
        r.fail(tnode, f"unknown vertex {x!r}")
    return PairFile(algebra, word("u"), word("v"), band_word("s"), band_word("t"), x, source)


def load_pair(ref: str, *, field: Field | None = None) -> PairFile:
    path = resolve_data_path(ref)
    return parse_pair(path.read_text(), field=field, source=str(path))
