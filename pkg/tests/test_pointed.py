import pytest

from pointedchains.pointed import (
    PointedModule,
    Relation,
    ThetaMismatch,
    classify,
    find_pointed_isomorphism,
    generate_fragment,
    is_pointed_hom,
    leq,
    pointed_direct_sum,
    pointed_hom_exists,
    pointed_pushout,
)
from pointedchains.rep import hom_space, is_indecomposable, is_iso_hom, projective_module, string_module
from pointedchains.strings import StringWord, compare
from pointedchains.verify import PointingVertexMismatch, pointed_string_module

W = StringWord.parse


@pytest.fixture(scope="module")
def theta(lam):
    return projective_module(lam, "x3")


def pm(theta, text, k=1):
    return pointed_string_module(theta, "x3", W(text), k)


def test_hom_direction_matches_string_order(lam, theta, pair_file):
    # S < T: a pointed map goes from M(T) to M(S) and not back
    u = pair_file.u
    s, t = u + u, u
    assert compare(lam, s, t) == -1
    ps, pt = pointed_string_module(theta, "x3", s), pointed_string_module(theta, "x3", t)
    f = pointed_hom_exists(pt, ps)
    assert f is not None and is_pointed_hom(pt, ps, f)
    assert pointed_hom_exists(ps, pt) is None
    assert leq(ps, pt) and not leq(pt, ps)
    assert classify(ps, pt).relation is Relation.LESS
    assert classify(pt, ps).relation is Relation.GREATER


def test_equivalent_and_incomparable(theta):
    p = pm(theta, "g d^-1")
    assert classify(p, pm(theta, "g d^-1")).relation is Relation.EQUIVALENT
    q = pm(theta, "d g^-1")
    assert classify(p, q).relation is Relation.INCOMPARABLE


def test_pointing_must_sit_at_theta_vertex(theta):
    with pytest.raises(PointingVertexMismatch):
        pm(theta, "g d^-1", 2)


def test_pushout_matches_string_module(theta):
    x, y = W("g d^-1"), W("d b a^-1 g^-1")
    po = pointed_pushout(pm(theta, str(x)), pm(theta, str(y)))
    target = pointed_string_module(theta, "x3", x.inverse() + y, len(x) + 1)
    f = find_pointed_isomorphism(po.pointed, target)
    assert f is not None
    assert is_pointed_hom(po.pointed, target, f)
    assert is_iso_hom(po.pointed.module, target.module, f)


def test_pushout_is_meet_and_sum_is_join(theta):
    p, q = pm(theta, "g d^-1"), pm(theta, "d g^-1")
    meet = pointed_pushout(p, q).pointed
    join = pointed_direct_sum(p, q)
    for r in (p, q):
        assert leq(meet, r) and leq(r, join)
    assert leq(meet, join)


def test_self_pushout_of_a_string_decomposes(theta):
    p = pm(theta, "g d^-1")
    po = pointed_pushout(p, p).pointed
    assert not is_indecomposable(po.module).indecomposable


def test_theta_mismatch(lam, theta):
    other = projective_module(lam, "x2")
    p = pm(theta, "g d^-1")
    m = string_module(lam, W("g a"))
    chi = hom_space(other, m)[0]
    q = PointedModule(other, m, chi)
    with pytest.raises(ThetaMismatch):
        pointed_pushout(p, q)


def test_small_fragment_is_consistent(theta):
    seeds = [pm(theta, "g d^-1"), pm(theta, "d g^-1")]
    frag = generate_fragment(seeds, 1)
    n = len(frag)
    assert n >= 3
    for i in range(n):
        assert frag.le[i][i]
        for j in range(n):
            for k in range(n):
                if frag.le[i][j] and frag.le[j][k]:
                    assert frag.le[i][k]
            if i != j:
                assert not (frag.le[i][j] and frag.le[j][i])
    assert "digraph" in frag.to_dot()


def test_pushout_universal_property(theta):
    from pointedchains.pointed import Pushout, pushout_universal_check
    p, q = pm(theta, "g d^-1"), pm(theta, "d b a^-1 g^-1")
    po = pointed_pushout(p, q)
    assert pushout_universal_check(po, p, q) is None
    F = p.module.field
    broken = Pushout(po.pointed, po.eps_m, {v: F.scale(0, m) for v, m in po.eps_n.items()})
    assert "span" in pushout_universal_check(broken, p, q)
