from pathlib import Path

import pytest

from pointedchains.algebra import Path as QPath, is_special_biserial, is_string_algebra
from pointedchains.files import SpecFileError, dump_algebra, load_algebra, parse_algebra

DATA = Path(__file__).parent / "data"


def test_basis_of_lambda(lam):
    assert lam.dim == 9
    assert lam.nilpotency == 3
    assert [str(p) for p in lam.basis] == ["e_x1", "e_x2", "e_x3", "a", "b", "d", "g", "d b", "g a"]


def test_lambda_is_string_algebra(lam):
    assert is_special_biserial(lam) == (True, None)
    assert is_string_algebra(lam)


def test_relations_vanish(lam):
    assert lam.multiply_paths(QPath(("d",)), QPath(("a",))) is None
    assert lam.multiply_paths(QPath(("g",)), QPath(("a",))) == QPath(("g", "a"))


def test_multiplication_is_associative(lam):
    import itertools
    F = lam.field
    n = lam.dim
    units = [F.eye(n)[i] for i in range(n)]
    for x, y, z in itertools.product(units, repeat=3):
        assert F.equal(lam.multiply(lam.multiply(x, y), z), lam.multiply(x, lam.multiply(y, z)))
    one = lam.one()
    for x in units:
        assert F.equal(lam.multiply(one, x), x)


def test_dropping_a_relation_breaks_special_biserial():
    a = load_algebra(str(DATA / "lambda_without_da.yaml"))
    ok, witness = is_special_biserial(a)
    assert not ok
    assert witness == ("arrows", "a", ("g", "d"))


def test_round_trip(lam):
    again = parse_algebra(dump_algebra(lam))
    assert [str(p) for p in again.basis] == [str(p) for p in lam.basis]


def test_unknown_vertex_is_located():
    text = "vertices: [x1, x2]\narrows:\n  - {name: a, source: x1, target: x9}\n"
    with pytest.raises(SpecFileError) as err:
        parse_algebra(text, source="bad.yaml")
    msg = str(err.value)
    assert "bad.yaml:3:" in msg and "x9" in msg


def test_non_admissible_is_rejected():
    text = "vertices: [x]\narrows:\n  - {name: l, source: x, target: x}\n"
    with pytest.raises(SpecFileError):
        parse_algebra(text, cap=10)
