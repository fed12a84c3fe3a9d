import pytest

from pointedchains.files import SpecFileError, load_pair
from pointedchains.functor import (
    apply_to_hom,
    apply_to_module,
    apply_to_pointed,
    load_functor,
    parse_element,
    parse_functor,
    validate_functor,
    verify_embedding_on_sample,
    verify_embedding_transfer,
)
from pointedchains.rep import (
    RelationViolation,
    compose_homs,
    hom_space,
    is_hom,
    is_idempotent_certificate,
    is_indecomposable,
    is_isomorphic,
    string_module,
)
from pointedchains.strings import QGenPair, StringWord
from pointedchains.verify import canonical_specs

W = StringWord.parse


def test_parse_element(lam):
    v = parse_element(lam, "2 e_x1 + b - 3*d b")
    assert v.tolist()[:5] == [2, 0, 0, 0, 1]
    assert v[7] == lam.field.scalar(-3)
    assert lam.field.equal(parse_element(lam, "1"), lam.one())


@pytest.mark.parametrize("name", ["identity", "duplication", "lambda_to_kronecker3"])
def test_bundled_functors_validate(name):
    assert validate_functor(load_functor(name)).ok


def test_identity_functor_is_identity(lam, pair_file):
    f = load_functor("identity")
    m = string_module(lam, pair_file.u)
    fm = apply_to_module(f, m)
    assert fm.dim_vector() == m.dim_vector()
    assert is_isomorphic(m, fm).isomorphic


def test_functoriality(lam, pair_file):
    f = load_functor("duplication")
    a, b, c = (string_module(lam, w) for w in (pair_file.u, pair_file.v, W("g")))
    F = lam.field
    for h1 in hom_space(a, b):
        for h2 in hom_space(b, c):
            lhs = apply_to_hom(f, compose_homs(F, h2, h1), a, c)
            rhs = compose_homs(F, apply_to_hom(f, h2, b, c), apply_to_hom(f, h1, a, b))
            assert all(F.equal(lhs[v], rhs[v]) for v in lhs)
            assert is_hom(apply_to_module(f, a), apply_to_module(f, c), lhs)


def test_duplication_splits_images(lam, pair_file):
    f = load_functor("duplication")
    fm = apply_to_module(f, string_module(lam, pair_file.u))
    r = is_indecomposable(fm)
    assert not r.indecomposable
    assert is_idempotent_certificate(fm, r.idempotent)


def test_kronecker_embedding_on_sample(lam, pair_file):
    f = load_functor("lambda_to_kronecker3")
    mods = [string_module(lam, w) for w in (pair_file.u, pair_file.v, W("g a"), W("d b a^-1"))]
    rep = verify_embedding_on_sample(f, mods)
    assert rep.ok
    assert len(rep.failures()) == 0


def test_pointed_images_keep_pointing(lam, pair_file):
    from pointedchains.rep import projective_module
    from pointedchains.verify import pointed_string_module
    f = load_functor("identity")
    theta = projective_module(lam, "x3")
    p = pointed_string_module(theta, "x3", pair_file.v)
    fp = apply_to_pointed(f, p)
    assert fp.chi_injective


def test_broken_functor_is_rejected():
    text = """
name: broken
source: lambda
target: lambda
rank: 1
images:
  e_x1: [[e_x1]]
  e_x2: [[e_x2]]
  e_x3: [[e_x3]]
  a: [[a]]
  b: [[b]]
  g: [[g]]
  d: [[g]]
"""
    f = parse_functor(text)
    with pytest.raises(RelationViolation) as err:
        validate_functor(f)
    assert "d a" in str(err.value)


def test_functor_file_errors_are_located():
    text = "name: x\nsource: lambda\ntarget: lambda\nrank: 1\nimages:\n  e_x1: [[zz]]\n"
    with pytest.raises(SpecFileError) as err:
        parse_functor(text, source="f.yaml")
    assert "f.yaml:6" in str(err.value)


def test_identity_transfer_small():
    pf = load_pair("lambda_pair")
    s1, s2 = canonical_specs(QGenPair(pf.algebra, pf.u, pf.v), pf.s, pf.t, 1, pf.theta_vertex)
    v = verify_embedding_transfer(load_functor("identity"), s1, s2)
    assert v.passed
    assert v.axiom("image_pair.functor_commutes_with_pushout").checked == 9


def test_duplication_transfer_names_the_failure():
    pf = load_pair("lambda_pair")
    s1, s2 = canonical_specs(QGenPair(pf.algebra, pf.u, pf.v), pf.s, pf.t, 1, pf.theta_vertex)
    v = verify_embedding_transfer(load_functor("duplication"), s1, s2)
    assert not v.passed
    a = v.axiom("functor.preserves_indecomposables")
    assert a.status == "fail"
    assert a.counterexample["image"] == "decomposes"
    assert a.counterexample["idempotent_rank"] > 0


def test_kronecker_transfer():
    pf = load_pair("lambda_pair")
    s1, s2 = canonical_specs(QGenPair(pf.algebra, pf.u, pf.v), pf.s, pf.t, 1, pf.theta_vertex)
    v = verify_embedding_transfer(load_functor("lambda_to_kronecker3"), s1, s2)
    assert v.passed, v.to_text()
