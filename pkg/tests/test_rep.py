import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_representations, brute_hom_count, random_representation, random_string
from pointedchains.rep import (
    FieldTooSmall,
    RelationViolation,
    Representation,
    compose_homs,
    direct_sum,
    export_module,
    hom_dim,
    hom_space,
    is_hom,
    is_idempotent_certificate,
    is_indecomposable,
    is_isomorphic,
    module_from_dict,
    projective_module,
    simple_module,
    string_module,
)
from pointedchains.strings import StringWord

W = StringWord.parse


def test_string_module_dimension_vectors(lam, pair_file):
    assert string_module(lam, pair_file.v).dim_vector() == (0, 1, 2)
    assert string_module(lam, pair_file.u).dim_vector() == (1, 2, 2)
    assert string_module(lam, W("g")).dim_vector() == (0, 1, 1)


def test_string_module_basis_convention(lam):
    # z_i sits at t(c_i); a direct letter maps z_{i+1} to z_i
    m = string_module(lam, W("g d^-1"))
    assert m.layout.positions == ("x3", "x2", "x3")
    assert m.maps["g"].tolist() == [[1], [0]]
    assert m.maps["d"].tolist() == [[0], [1]]


def test_projectives(lam):
    assert projective_module(lam, "x3").dim_vector() == (0, 0, 1)
    assert projective_module(lam, "x1").dim_vector() == (1, 2, 2)
    assert hom_dim(projective_module(lam, "x3"), projective_module(lam, "x3")) == 1


def test_relation_violation(lam):
    with pytest.raises(RelationViolation):
        Representation(lam, {"x1": 1, "x2": 1, "x3": 1}, {"a": [[1]], "d": [[1]]})


def test_export_round_trip(lam, pair_file):
    m = string_module(lam, pair_file.u)
    again = module_from_dict(lam, json.loads(export_module(m)))
    assert again.dim_vector() == m.dim_vector()
    assert all(lam.field.equal(again.maps[k], m.maps[k]) for k in m.maps)


def test_hom_basis_elements_are_homs(lam, pair_file):
    m, n = string_module(lam, pair_file.u), string_module(lam, pair_file.v)
    for f in hom_space(m, n):
        assert is_hom(m, n, f)


@pytest.mark.parametrize("p", [2, 3])
def test_hom_dimension_matches_enumeration_small(p, lam_f2, lam_f3):
    a = lam_f2 if p == 2 else lam_f3
    reps = list(all_representations(a, p, 1))
    for m, n in itertools.product(reps, repeat=2):
        assert brute_hom_count(m, n, p) == p ** hom_dim(m, n)


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_hom_composition_closes(lam, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (string_module(lam, random_string(lam, rng, 5)) for _ in range(3))
    F = lam.field
    for f in hom_space(a, b)[:3]:
        for g in hom_space(b, c)[:3]:
            assert is_hom(a, c, compose_homs(F, g, f))


def test_sum_is_decomposable_with_certificate(lam, pair_file):
    m = string_module(lam, pair_file.v)
    s = direct_sum(m, m)
    r = is_indecomposable(s)
    assert not r.indecomposable
    assert is_idempotent_certificate(s, r.idempotent)


def test_simple_is_indecomposable(lam):
    assert is_indecomposable(simple_module(lam, "x2")).indecomposable


def test_field_too_small(lam_f3):
    m = string_module(lam_f3, W("g d^-1"))
    with pytest.raises(FieldTooSmall):
        is_indecomposable(direct_sum(m, m))


def test_isomorphism_verdicts(lam, pair_file):
    u, v = pair_file.u, pair_file.v
    mv, mu = string_module(lam, v), string_module(lam, u)
    assert is_isomorphic(mv, string_module(lam, v.inverse())).status == "yes-by-word"
    assert is_isomorphic(mu, mv).status == "no-by-word"
    bare = Representation(lam, mv.dims, mv.maps)  # no word attached
    r = is_isomorphic(bare, mv)
    assert r.isomorphic and r.exact
    r = is_isomorphic(direct_sum(mv, mv), Representation(lam, direct_sum(mv, mv).dims,
                                                         direct_sum(mv, mv).maps))
    assert r.isomorphic


@pytest.mark.parametrize("seed", range(5))
def test_random_representations_respect_relations(lam_f3, seed):
    rng = np.random.default_rng(seed)
    m = random_representation(lam_f3, 3, {"x1": 2, "x2": 2, "x3": 2}, rng)
    assert m.relation_failures() == []
