"""Exact dense linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays. Over GF(p) they hold int64 entries in
``[0, p)``; over QQ they are object arrays of :class:`fractions.Fraction`.
All elimination pivots on the first nonzero entry so results are
reproducible bit-for-bit.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import isprime

DEFAULT_PRIME = 32003
DEFAULT_MIN_PRIME = 32003


class NoSolution(ValueError):
    """Raised when a linear system is inconsistent."""


class Field:
    """An exact field: GF(p) when ``p`` is given, otherwise QQ.

    ``minimum`` guards the prime from below; the radical computation in
    :mod:`pointedchains.rep` needs ``p`` larger than the algebras it meets.
    Pass ``minimum=2`` for brute-force oracles over tiny fields.
    """

    def __init__(self, p: int | None = DEFAULT_PRIME, *, minimum: int = DEFAULT_MIN_PRIME):
        if p is not None:
            p = int(p)
            if not isprime(p):
                raise ValueError(f"modulus {p} is not prime")
            if p < minimum:
                raise ValueError(f"modulus {p} is below the configured minimum {minimum}")
            if p >= 2**31:
                raise ValueError("modulus must be below 2**31")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def sample_size(self) -> int:
        # size of the set random scalars are drawn from
        return self.p if self.p is not None else 2**16

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def name(self) -> str:
        return f"GF({self.p})" if self.p else "QQ"

    # -- element level -------------------------------------------------
    def scalar(self, x):
        if self.p is not None:
            if isinstance(x, Fraction):
                return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if self.p is not None:
            return pow(int(x), -1, self.p)
        return 1 / Fraction(x)

    # -- array level ---------------------------------------------------
    def array(self, data) -> np.ndarray:
        if self.p is not None:
            arr = np.asarray(data)
            if arr.dtype == object:
                arr = np.vectorize(self.scalar, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
            return np.asarray(arr, dtype=np.int64) % self.p
        arr = np.asarray(data, dtype=object)
        if arr.size:
            arr = np.vectorize(Fraction, otypes=[object])(arr)
        return arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.p is not None:
            return arr % self.p
        return arr

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.p is not None:
            return np.zeros((rows, cols), dtype=np.int64)
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = 1 if self.p is not None else Fraction(1)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p is None:
            if a.shape[1] == 0:
                return self.zeros(a.shape[0], b.shape[1])
            return a.dot(b)
        inner = a.shape[1]
        if inner and self.p * self.p * inner >= 2**62:
            return np.asarray((a.astype(object) @ b.astype(object)) % self.p, dtype=np.int64)
        return (a @ b) % self.p

    def mul(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(a * self.scalar(c))

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p is None:
            return np.kron(a, b) if a.size and b.size else self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        return np.kron(a, b) % self.p

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and self.is_zero(self.reduce(a - b))

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        if self.p is not None:
            return rng.integers(0, self.p, size=shape, dtype=np.int64)
        vals = rng.integers(-(2**15), 2**15, size=shape)
        return self.array(vals)

    def to_ints(self, a: np.ndarray) -> list:
        """Plain nested lists for serialization (strings for non-integral rationals)."""
        if self.p is not None:
            return a.astype(int).tolist()
        return [[str(x) if x.denominator != 1 else int(x) for x in row] for row in a]


# ---------------------------------------------------------------------------
# elimination


def rref(field: Field, a: np.ndarray, ncols: int | None = None):
    """Reduced row echelon form.

    Pivots are searched only in the first ``ncols`` columns (all by default);
    row operations still act on the full width. Returns ``(R, pivots)``
    where only the first ``len(pivots)`` rows of ``R`` are nonzero.
    """
    R = field.array(a).copy()
    m, n = R.shape
    if ncols is None:
        ncols = n
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        nz = np.flatnonzero(R[row:, col] != 0)
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        inv = field.inv(R[row, col])
        R[row, col:] = field.reduce(R[row, col:] * inv)
        others = np.flatnonzero(R[:, col] != 0)
        others = others[others != row]
        if others.size:
            R[others, col:] = field.reduce(R[others, col:] - np.outer(R[others, col], R[row, col:]))
        pivots.append(col)
        row += 1
    return R, pivots


def rank(field: Field, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(field, a)[1])


def _kernel_from_rref(field: Field, R: np.ndarray, pivots: list[int], n: int) -> np.ndarray:
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    K = field.zeros(n, len(free))
    if free:
        K[free, list(range(len(free)))] = 1 if field.is_prime else Fraction(1)
        if pivots:
            K[np.ix_(pivots, list(range(len(free))))] = -R[: len(pivots)][:, free]
    return field.reduce(K)


def kernel(field: Field, a: np.ndarray) -> np.ndarray:
    """Basis of the right null space, as columns."""
    n = a.shape[1]
    if a.shape[0] == 0:
        return field.eye(n)
    R, pivots = rref(field, a)
    return _kernel_from_rref(field, R, pivots, n)


def solve(field: Field, a: np.ndarray, b: np.ndarray):
    """Solve ``a @ x = b`` exactly.

    ``b`` may be a vector or a matrix. Returns ``(x, K)`` with ``x`` a
    particular solution (shaped like ``b``) and ``K`` a kernel basis of
    ``a`` as columns. Raises :class:`NoSolution` when inconsistent.
    """
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    m, n = a.shape
    if B.shape[0] != m:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    k = B.shape[1]
    if m == 0:
        x = field.zeros(n, k)
        return (x[:, 0] if vector else x), field.eye(n)
    aug = np.concatenate([field.array(a), field.array(B)], axis=1)
    R, pivots = rref(field, aug, ncols=n)
    r = len(pivots)
    if not field.is_zero(R[r:, n:]):
        raise NoSolution("inconsistent linear system")
    x = field.zeros(n, k)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n:]
    K = _kernel_from_rref(field, R[:, :n], pivots, n)
    return (x[:, 0] if vector else x), K


def column_basis(field: Field, a: np.ndarray) -> np.ndarray:
    """Columns of ``a`` forming a basis of its column space."""
    if a.size == 0:
        return field.zeros(a.shape[0], 0)
    _, pivots = rref(field, a)
    return a[:, pivots]


def left_inverse(field: Field, b: np.ndarray) -> np.ndarray:
    """Some ``L`` with ``L @ b = I`` for ``b`` of full column rank."""
    d, k = b.shape
    if k == 0:
        return field.zeros(0, d)
    x, _ = solve(field, b.T.copy(), field.eye(k))
    return x.T.copy()


def inverse(field: Field, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    x, K = solve(field, a, field.eye(n))
    if K.shape[1]:
        raise NoSolution("matrix is singular")
    return x


def is_invertible(field: Field, a: np.ndarray) -> bool:
    return a.shape[0] == a.shape[1] and rank(field, a) == a.shape[0]


def quotient_basis(field: Field, ambient_dim: int, subspace: np.ndarray):
    """Projection onto a complement of ``span(subspace)`` and its section.

    ``subspace`` holds spanning vectors as columns (``ambient_dim x k``).
    Returns ``(pi, sigma)`` with ``pi`` of shape ``q x ambient_dim``,
    ``sigma`` of shape ``ambient_dim x q``, ``pi @ sigma = I_q`` and
    ``ker(pi) = span(subspace)``. The complement is spanned by the standard
    basis vectors at the non-pivot coordinates.
    """
    d = ambient_dim
    if subspace.size == 0 or subspace.shape[1] == 0:
        return field.eye(d), field.eye(d)
    R, pivots = rref(field, subspace.T.copy())
    R = R[: len(pivots)]
    free = [c for c in range(d) if c not in set(pivots)]
    q = len(free)
    I = field.eye(d)
    sigma = I[:, free].copy()
    pi = field.reduce(I[free, :] - field.matmul(R[:, free].T.copy(), I[pivots, :]))
    return pi, sigma.reshape(d, q)
