import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_string
from pointedchains.strings import (
    BandWord,
    Letter,
    NotQGenerating,
    QGenPair,
    StringWord,
    UnknownArrow,
    band_failure,
    chain_element,
    compare,
    density_witness,
    enumerate_chain,
    is_qgen_pair,
    is_string,
)

W = StringWord.parse
seeds = st.integers(0, 2**32 - 1)


def rand(lam, seed, n=8, first=None):
    return random_string(lam, np.random.default_rng(seed), n, first)


def rand_g(lam, seed):
    return rand(lam, seed, 8, Letter("g"))


@pytest.mark.parametrize("text", ["a", "g a", "g a b^-1 d^-1", "d b a^-1 g^-1", "g d^-1 g a"])
def test_strings(lam, text):
    assert is_string(lam, W(text)) == (True, None)


@pytest.mark.parametrize("text,span", [("d a", (1, 2)), ("g a a^-1", (2, 3)), ("a^-1 d^-1", (1, 2)),
                                       ("g a b^-1 g^-1", (3, 4)), ("a g", (1, 2))])
def test_non_strings_point_at_the_problem(lam, text, span):
    ok, why = is_string(lam, W(text))
    assert not ok and why.span == span


def test_unknown_arrow(lam):
    with pytest.raises(UnknownArrow):
        is_string(lam, W("q"))


@given(seed=seeds)
@settings(max_examples=80, deadline=None)
def test_inverse_is_a_string_and_an_involution(lam, seed):
    w = rand(lam, seed)
    assert is_string(lam, w.inverse())[0]
    assert w.inverse().inverse() == w


@given(s1=seeds, s2=seeds)
@settings(max_examples=80, deadline=None)
def test_compare_is_antisymmetric(lam, s1, s2):
    s, t = rand_g(lam, s1), rand_g(lam, s2)
    assert compare(lam, s, t) == -compare(lam, t, s)
    assert (compare(lam, s, t) == 0) == (s == t)


@given(s1=seeds, s2=seeds, s3=seeds)
@settings(max_examples=80, deadline=None)
def test_compare_is_transitive(lam, s1, s2, s3):
    ws = [rand_g(lam, s) for s in (s1, s2, s3)]
    for x in ws:
        for y in ws:
            for z in ws:
                if compare(lam, x, y) < 0 and compare(lam, y, z) < 0:
                    assert compare(lam, x, z) < 0


def test_direct_letter_is_below_end_below_inverse(lam):
    u = W("g a b^-1 d^-1")
    assert compare(lam, u + u, u) == -1
    assert compare(lam, W("g a"), W("g d^-1")) == -1


def test_bands(lam, pair_file):
    assert band_failure(lam, pair_file.u) is None
    assert band_failure(lam, pair_file.v) is None
    assert band_failure(lam, W("g a")) is not None
    assert band_failure(lam, W("g a b^-1")) == "powers undefined: t(c1) != s(cn)"


def test_qgen_pairs(lam, pair_file):
    u, v = pair_file.u, pair_file.v
    assert is_qgen_pair(lam, u, v) == (True, None)
    assert is_qgen_pair(lam, u.inverse(), v.inverse()) == (True, None)
    ok, why = is_qgen_pair(lam, v, u)
    assert not ok and "below" in why
    assert not is_qgen_pair(lam, u, u)[0]


def test_truncated_chain_order(lam, pair_file):
    pair = QGenPair(lam, pair_file.u, pair_file.v)
    elems = enumerate_chain(pair, pair_file.s, pair_file.t, 2)
    assert [str(e.x) for e in elems] == ["U U", "U", "U V", "phi", "V U", "V", "V V"]
    for e, f in zip(elems, elems[1:]):
        assert compare(lam, e.word, f.word) == -1


def test_density_at_truncation(lam, pair_file):
    pair = QGenPair(lam, pair_file.u, pair_file.v)
    elems = enumerate_chain(pair, pair_file.s, pair_file.t, 2)
    for lo, hi in zip(elems, elems[1:]):
        x = density_witness(pair, pair_file.s, pair_file.t, lo.x, hi.x, 4)
        assert x is not None
        w = chain_element(pair, pair_file.s, pair_file.t, x)
        assert compare(lam, lo.word, w) == -1 == compare(lam, w, hi.word)


def test_band_word_parsing():
    assert str(BandWord.parse("UV")) == "U V" == str(BandWord.parse("U V"))
    assert str(BandWord.parse("phi")) == "phi"


def test_pair_construction_checks_the_pair(lam):
    with pytest.raises(NotQGenerating):
        QGenPair(lam, W("g a"), W("g d^-1"))
