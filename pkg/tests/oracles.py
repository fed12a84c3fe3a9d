"""Brute-force reference computations used by the tests.

Nothing here calls the package's linear solvers: homs are counted by listing
every tuple of matrices and testing the commuting squares directly.
"""

from __future__ import annotations

import itertools

import numpy as np

from pointedchains.rep import Representation
from pointedchains.strings import Letter, StringWord, is_string


def all_matrices(p: int, rows: int, cols: int):
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def all_representations(a, p: int, max_dim: int = 1):
    """Every representation of ``a`` over GF(p) with vertex dims <= max_dim."""
    q = a.quiver
    for dims in itertools.product(range(max_dim + 1), repeat=len(a.vertices)):
        d = dict(zip(a.vertices, dims))
        choices = [list(all_matrices(p, d[x.target], d[x.source])) for x in q.arrows]
        for mats in itertools.product(*choices):
            maps = {x.name: m for x, m in zip(q.arrows, mats)}
            if relations_hold(a, d, maps, p):
                yield Representation(a, d, maps, check=False)


def relations_hold(a, dims, maps, p) -> bool:
    for path in a.relations.monomial:
        out = None
        for name in path.arrows:
            out = maps[name] if out is None else (out @ maps[name]) % p
        if np.any(out % p):
            return False
    return True


def random_representation(a, p: int, dims: dict, rng: np.random.Generator) -> Representation:
    """Rejection sampling of a representation with the given dims."""
    q = a.quiver
    for _ in range(1000):
        maps = {x.name: rng.integers(0, p, size=(dims[x.target], dims[x.source])) for x in q.arrows}
        if relations_hold(a, dims, maps, p):
            return Representation(a, dims, maps, check=False)
    raise RuntimeError("no representation found")


def brute_hom_count(m: Representation, n: Representation, p: int) -> int:
    """Number of homs m -> n, found by testing every family of linear maps."""
    a = m.algebra
    verts = a.vertices
    shapes = [(n.dims[v], m.dims[v]) for v in verts]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    if total == 0:
        return 1
    grid = np.array(list(itertools.product(range(p), repeat=total)), dtype=np.int64)
    blocks, o = {}, 0
    for v, (r, c), s in zip(verts, shapes, sizes):
        blocks[v] = grid[:, o : o + s].reshape(len(grid), r, c)
        o += s
    ok = np.ones(len(grid), dtype=bool)
    for x in a.quiver.arrows:
        s, t = x.source, x.target
        lhs = np.einsum("kij,jl->kil", blocks[t], m.maps[x.name].astype(np.int64)) % p
        rhs = np.einsum("ij,kjl->kil", n.maps[x.name].astype(np.int64), blocks[s]) % p
        ok &= np.all((lhs - rhs) % p == 0, axis=(1, 2))
    return int(ok.sum())


def random_string(a, rng: np.random.Generator, max_len: int = 10, first: Letter | None = None) -> StringWord:
    """Random walk that stays a string; stops early when stuck."""
    q = a.quiver
    letters = [Letter(x.name, False) for x in q.arrows] + [Letter(x.name, True) for x in q.arrows]
    word = [first or letters[rng.integers(len(letters))]]
    target = rng.integers(1, max_len + 1)
    while len(word) < target:
        options = []
        for c in letters:
            w = StringWord(tuple(word) + (c,))
            if is_string(a, w)[0]:
                options.append(c)
        if not options:
            break
        word.append(options[rng.integers(len(options))])
    return StringWord(tuple(word))


# lines printed at the end of the run by the terminal-summary hook in conftest
ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str):
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[criterion])
    assert ok, detail
