"""Walks, strings and bands over a string algebra, the order on strings
sharing a first letter, Q-generating pairs and the chains ``S X T U``.

Words are written left to right as ``c1 c2 ... cn`` where ``c1`` is applied
last, matching path composition order. In text, ``b^-1`` is the formal
inverse of the arrow ``b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cmp_to_key

from .algebra import BoundQuiverAlgebra, Path, Quiver


class StringError(ValueError):
    pass


class UnknownArrow(StringError):
    pass


class NotAString(StringError):
    pass


class IncomparableFamilies(StringError):
    pass


class OrderViolation(StringError):
    pass


class NotQGenerating(StringError):
    pass


@dataclass(frozen=True)
class Letter:
    arrow: str
    inverse: bool = False

    def inv(self) -> "Letter":
        return Letter(self.arrow, not self.inverse)

    @property
    def direct(self) -> bool:
        return not self.inverse

    def source(self, q: Quiver) -> str:
        a = q.arrow(self.arrow)
        return a.target if self.inverse else a.source

    def target(self, q: Quiver) -> str:
        a = q.arrow(self.arrow)
        return a.source if self.inverse else a.target

    def __str__(self):
        return f"{self.arrow}^-1" if self.inverse else self.arrow

    @classmethod
    def parse(cls, token: str) -> "Letter":
        if token.endswith("^-1"):
            return cls(token[:-3], True)
        if not token or "^" in token:
            raise StringError(f"bad letter {token!r}")
        return cls(token, False)


@dataclass(frozen=True)
class StringWord:
    """A sequence of letters; the empty word is allowed only as a marker."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def parse(cls, text: str) -> "StringWord":
        return cls(tuple(Letter.parse(tok) for tok in text.split()))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __add__(self, other: "StringWord") -> "StringWord":
        return StringWord(self.letters + other.letters)

    def __mul__(self, m: int) -> "StringWord":
        return StringWord(self.letters * m)

    def __str__(self):
        return " ".join(str(c) for c in self.letters)

    def inverse(self) -> "StringWord":
        return StringWord(tuple(c.inv() for c in reversed(self.letters)))

    def source(self, q: Quiver) -> str:
        return self.letters[-1].source(q)

    def target(self, q: Quiver) -> str:
        return self.letters[0].target(q)

    def startswith(self, other: "StringWord") -> bool:
        return self.letters[: len(other)] == other.letters


def invert(w: StringWord) -> StringWord:
    return w.inverse()


@dataclass(frozen=True)
class Violation:
    span: tuple[int, int]  # 1-based, inclusive
    reason: str


def _find(run: tuple[str, ...], pattern: tuple[str, ...]) -> int:
    k = len(pattern)
    for i in range(len(run) - k + 1):
        if run[i : i + k] == pattern:
            return i
    return -1


def is_string(a: BoundQuiverAlgebra, w: StringWord):
    """``(True, None)`` or ``(False, Violation)`` for the walk and string conditions."""
    if not a.is_monomial:
        raise StringError("strings are defined over string algebras (monomial relations)")
    q = a.quiver
    for c in w:
        if not q.has_arrow(c.arrow):
            raise UnknownArrow(f"unknown arrow {c.arrow!r}")
    if len(w) == 0:
        return False, Violation((0, 0), "empty word")
    for i in range(len(w) - 1):
        c, d = w[i], w[i + 1]
        if c.source(q) != d.target(q):
            return False, Violation((i + 1, i + 2), f"{c} cannot follow {d}: not a walk")
        if c.inv() == d:
            return False, Violation((i + 1, i + 2), f"{c} {d} backtracks")
    gens = [g.arrows for g in a.relations.monomial]
    i = 0
    while i < len(w):
        j = i
        while j + 1 < len(w) and w[j + 1].inverse == w[i].inverse:
            j += 1
        run = tuple(c.arrow for c in w.letters[i : j + 1])
        for g in gens:
            pattern = g if w[i].direct else tuple(reversed(g))
            pos = _find(run, pattern)
            if pos >= 0:
                lo = i + pos + 1
                hi = lo + len(g) - 1
                sub = StringWord(w.letters[lo - 1 : hi])
                return False, Violation((lo, hi), f"{sub} meets the relation {Path(g)}")
        i = j + 1
    return True, None


def band_failure(a: BoundQuiverAlgebra, w: StringWord, powers: int = 3) -> str | None:
    """Reason ``w`` is not a band, or ``None``.

    Powers are checked up to ``powers``; with monomial relations a failing
    power shows up within two consecutive copies.
    """
    ok, why = is_string(a, w)
    if not ok:
        return f"not a string: {why.reason}"
    q = a.quiver
    if w.target(q) != w.source(q):
        return "powers undefined: t(c1) != s(cn)"
    if not w[0].direct:
        return "first letter is not direct"
    if w[-1].direct:
        return "last letter is not inverse"
    for m in range(2, powers + 1):
        ok, why = is_string(a, w * m)
        if not ok:
            return f"power {m} is not a string: {why.reason}"
    return None


def is_band(a: BoundQuiverAlgebra, w: StringWord, powers: int = 3) -> bool:
    return band_failure(a, w, powers) is None


# rank at a divergence: a direct continuation sorts below the end of the
# word, an inverse continuation above it
_DIRECT, _END, _INVERSE = 0, 1, 2


def _rank(w: StringWord, i: int) -> int:
    if i >= len(w):
        return _END
    return _DIRECT if w[i].direct else _INVERSE


def compare(a: BoundQuiverAlgebra | None, s: StringWord, t: StringWord) -> int:
    """Order on strings with a common first letter: -1, 0 or 1.

    At the first position where the words differ, a direct letter sorts
    below the end of a word, which sorts below an inverse letter.
    """
    if not len(s) or not len(t) or s[0] != t[0]:
        raise IncomparableFamilies(f"{s} and {t} do not start with the same letter")
    n = min(len(s), len(t))
    i = 0
    while i < n and s[i] == t[i]:
        i += 1
    if i == len(s) and i == len(t):
        return 0
    rs, rt = _rank(s, i), _rank(t, i)
    if rs == rt:
        raise StringError(
            f"{s} and {t} diverge at position {i + 1} with letters of the same direction; "
            "the algebra is not special biserial"
        )
    return -1 if rs < rt else 1


def string_key(a: BoundQuiverAlgebra | None = None):
    return cmp_to_key(lambda s, t: compare(a, s, t))


def is_qgen_pair(a: BoundQuiverAlgebra, u: StringWord, v: StringWord):
    """``(True, None)`` or ``(False, reason)``."""
    if u == v:
        return False, "not distinct"
    for name, w in (("U", u), ("V", v)):
        why = band_failure(a, w)
        if why:
            return False, f"{name} is not a band: {why}"
    if u[0] != v[0]:
        return False, "bands start with different arrows"
    if u[-1] != v[-1]:
        return False, "bands end with different inverse letters"
    if compare(a, u, v) != -1:
        return False, "U is not below V"
    if u.startswith(v) or v.startswith(u):
        return False, "one band is a prolongation of the other"
    return True, None


@dataclass(frozen=True)
class QGenPair:
    algebra: BoundQuiverAlgebra
    u: StringWord
    v: StringWord

    def __post_init__(self):
        ok, why = is_qgen_pair(self.algebra, self.u, self.v)
        if not ok:
            raise NotQGenerating(why)

    @property
    def first_arrow(self) -> Letter:
        return self.u[0]

    @property
    def last_letter(self) -> Letter:
        return self.u[-1]

    def inverse_pair(self) -> "QGenPair":
        return QGenPair(self.algebra, self.u.inverse(), self.v.inverse())

    def band(self, symbol: str) -> StringWord:
        if symbol == "U":
            return self.u
        if symbol == "V":
            return self.v
        raise StringError(f"unknown band symbol {symbol!r}")


@dataclass(frozen=True)
class BandWord:
    """A word over the symbols ``U`` and ``V``; the empty word is phi."""

    symbols: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        bad = [s for s in self.symbols if s not in ("U", "V")]
        if bad:
            raise StringError(f"band words use only U and V, got {bad[0]!r}")

    @classmethod
    def parse(cls, text: str) -> "BandWord":
        text = text.strip()
        if text in ("", "phi"):
            return cls(())
        toks = text.split()
        if len(toks) == 1 and len(toks[0]) > 1:
            toks = list(toks[0])
        return cls(tuple(toks))

    def __len__(self):
        return len(self.symbols)

    def __add__(self, other: "BandWord") -> "BandWord":
        return BandWord(self.symbols + other.symbols)

    def __str__(self):
        return " ".join(self.symbols) if self.symbols else "phi"

    def expand(self, pair: QGenPair) -> StringWord:
        out = StringWord()
        for s in self.symbols:
            out = out + pair.band(s)
        return out


PHI = BandWord(())


def band_words(max_len: int):
    """All band words of length <= max_len, shortest first, then U before V."""
    for n in range(max_len + 1):
        for syms in itertools.product("UV", repeat=n):
            yield BandWord(syms)


@dataclass(frozen=True)
class ChainElement:
    x: BandWord
    word: StringWord


def chain_element(pair: QGenPair, s: BandWord, t: BandWord, x: BandWord) -> StringWord:
    """The string ``S X T U``, validated."""
    w = (s + x + t + BandWord(("U",))).expand(pair)
    ok, why = is_string(pair.algebra, w)
    if not ok:
        raise NotAString(f"S X T U = {w} is not a string: {why.reason}")
    return w


def enumerate_chain(pair: QGenPair, s: BandWord, t: BandWord, max_symbols: int) -> list[ChainElement]:
    """All ``S X T U`` with ``|X| <= max_symbols``, ascending."""
    elems = [ChainElement(x, chain_element(pair, s, t, x)) for x in band_words(max_symbols)]
    key = string_key(pair.algebra)
    elems.sort(key=lambda e: key(e.word))
    for e, f in zip(elems, elems[1:]):
        if compare(pair.algebra, e.word, f.word) != -1:
            raise OrderViolation(f"chain elements {e.word} and {f.word} are not strictly ordered")
    return elems


def density_witness(pair: QGenPair, s: BandWord, t: BandWord, x1: BandWord, x2: BandWord,
                    max_len: int) -> BandWord | None:
    """Some ``X3`` with ``S X1 T U < S X3 T U < S X2 T U``, or ``None``."""
    a = pair.algebra
    lo, hi = chain_element(pair, s, t, x1), chain_element(pair, s, t, x2)
    if compare(a, lo, hi) != -1:
        raise OrderViolation(f"{x1} is not below {x2}")
    for x in band_words(max_len):
        w = chain_element(pair, s, t, x)
        if compare(a, lo, w) == -1 and compare(a, w, hi) == -1:
            return x
    return None
