"""Exact arithmetic in F_{p^m} and dense linear algebra over it.

Field elements are stored as Python/numpy integers in ``range(q)``. For
``m == 1`` an element is its residue mod p. For ``m > 1`` the integer
``sum(c_i * p**i)`` encodes the coefficient vector ``(c_0, ..., c_{m-1})``
against the power basis of the minimal polynomial, and arithmetic goes
through precomputed addition/multiplication tables.

Matrices are 2-d ``numpy.int64`` arrays; every function takes the field
explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists (low degree first) mod (modulus, p)."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for t in range(m + 1):
                prod[k - m + t] = (prod[k - m + t] - c * modulus[t]) % p
    out = prod[:m] + [0] * max(0, m - len(prod))
    return out


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    # Brute force: no monic factor of degree <= m/2. Fine for desk-scale fields.
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for code in range(p ** d):
            cand = [(code // p ** i) % p for i in range(d)] + [1]
            # polynomial long division of poly by cand
            rem = list(poly)
            for k in range(m, d - 1, -1):
                c = rem[k]
                if c:
                    for t in range(d + 1):
                        rem[k - d + t] = (rem[k - d + t] - c * cand[t]) % p
            if not any(rem[:d]):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_{p^m}.

    ``min_poly`` lists coefficients low degree first and must be monic of
    degree m; it is ignored (and may be omitted) when m == 1.
    """

    p: int
    m: int = 1
    min_poly: Optional[tuple] = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.m < 1:
            raise ValueError("extension degree must be >= 1")
        if self.m == 1:
            object.__setattr__(self, "min_poly", None)
            return
        if self.min_poly is None or len(self.min_poly) != self.m + 1:
            raise ValueError("min_poly of degree m required when m > 1")
        poly = tuple(int(c) % self.p for c in self.min_poly)
        if poly[-1] != 1:
            raise ValueError("min_poly must be monic")
        if not _is_irreducible(poly, self.p):
            raise ValueError(f"min_poly {poly} is reducible over F_{self.p}")
        object.__setattr__(self, "min_poly", poly)

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def char(self) -> int:
        return self.p

    def to_json(self) -> dict:
        out = {"p": self.p, "m": self.m}
        if self.m > 1:
            out["min_poly"] = list(self.min_poly)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        mp = obj.get("min_poly")
        return cls(int(obj["p"]), int(obj.get("m", 1)), tuple(mp) if mp else None)

    # element codec for m > 1 -------------------------------------------------

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def decode(self, x: int) -> list:
        return [(int(x) // self.p ** i) % self.p for i in range(self.m)]

    def element(self, value) -> int:
        """Parse an integer or a length-m coefficient list into an element."""
        if isinstance(value, (list, tuple)):
            if self.m == 1:
                raise ValueError("coefficient lists only allowed when m > 1")
            return self.encode(value)
        if self.m == 1:
            return int(value) % self.p
        return self.encode([int(value)])

    def to_plain(self, x):
        """Inverse of :meth:`element`, for serialization."""
        return int(x) if self.m == 1 else self.decode(x)

    @cached_property
    def _add(self) -> np.ndarray:
        q = self.q
        codes = np.array([self.decode(x) for x in range(q)], dtype=np.int64)
        s = (codes[:, None, :] + codes[None, :, :]) % self.p
        weights = self.p ** np.arange(self.m, dtype=np.int64)
        return (s * weights).sum(axis=2)

    @cached_property
    def _mul(self) -> np.ndarray:
        q = self.q
        tab = np.zeros((q, q), dtype=np.int64)
        codes = [self.decode(x) for x in range(q)]
        for a in range(q):
            for b in range(a, q):
                v = self.encode(_poly_mulmod(codes[a], codes[b], self.min_poly, self.p))
                tab[a, b] = tab[b, a] = v
        return tab

    @cached_property
    def _neg(self) -> np.ndarray:
        return np.array([self.encode([-c for c in self.decode(x)]) for x in range(self.q)],
                        dtype=np.int64)

    @cached_property
    def _inv(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        mul = self._mul
        for a in range(1, self.q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return inv

    # vectorized arithmetic -----------------------------------------------------

    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self._add[a, b]

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self._neg[a]

    def sub(self, a, b):
        if self.m == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        return self._add[a, self._neg[b]]

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        return self._mul[a, b]

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._inv[a])

    def scalar(self, n: int) -> int:
        """Image of the integer n in the field."""
        return self.element(n)

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.m == 1:
            if A.shape[1] == 0:
                return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
            # chunk the inner dimension to stay well inside int64
            if A.shape[1] * (self.p - 1) ** 2 < 2 ** 62:
                return (A @ B) % self.p
            out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
            step = max(1, (2 ** 62) // ((self.p - 1) ** 2))
            for s in range(0, A.shape[1], step):
                out = (out + A[:, s:s + step] @ B[s:s + step]) % self.p
            return out
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = self._add[out, self._mul[A[:, k][:, None], B[k][None, :]]]
        return out

    def elements(self) -> range:
        return range(self.q)

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def as_matrix(entries, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    M = np.asarray(entries, dtype=np.int64)
    if rows is not None:
        M = M.reshape(rows, cols)
    if M.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    return M


def rref(M, F: FieldSpec):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns ``(R, rank, pivots)``.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = F.mul(F.inv(piv), R[r])
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            R[hit] = F.sub(R[hit], F.mul(col[hit][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(M, F: FieldSpec) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return rref(M, F)[1]


def kernel_basis(M, F: FieldSpec) -> np.ndarray:
    """Rows form a basis of the right null space ``{v : M v = 0}``."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return identity(cols)
    R, rk, pivots = rref(M, F)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = zeros(len(free), cols)
    for t, fc in enumerate(free):
        K[t, fc] = 1
        for i, pc in enumerate(pivots):
            K[t, pc] = F.neg(R[i, fc])
    return K


def row_basis(M, F: FieldSpec) -> np.ndarray:
    """Canonical (reduced) basis of the row space."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1])
    R, rk, _ = rref(M, F)
    return R[:rk]


def column_basis(M, F: FieldSpec) -> np.ndarray:
    """Columns of the result form a canonical basis of the column space."""
    return row_basis(np.asarray(M).T, F).T


class Solver:
    """Precomputed elimination for repeated solves ``A X = B``."""

    def __init__(self, A, F: FieldSpec):
        A = np.asarray(A, dtype=np.int64)
        self.F = F
        self.shape = A.shape
        n = A.shape[0]
        aug = np.concatenate([A, identity(n)], axis=1)
        R, _, pivots = rref(aug, F)
        self.pivots = [c for c in pivots if c < A.shape[1]]
        self.rank = len(self.pivots)
        # T @ A == R[:, :cols]
        self.T = R[:, A.shape[1]:]

    def solve(self, B) -> Optional[np.ndarray]:
        B = np.asarray(B, dtype=np.int64)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        TB = self.F.matmul(self.T, B)
        if np.any(TB[self.rank:]):
            return None
        X = zeros(self.shape[1], B.shape[1])
        X[self.pivots] = TB[: self.rank]
        return X[:, 0] if vec else X


def solve(A, B, F: FieldSpec) -> Optional[np.ndarray]:
    """Some X with A X = B, or ``None`` when B leaves the column space of A."""
    return Solver(A, F).solve(B)


def inverse(A, F: FieldSpec) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.shape[0] != A.shape[1]:
        raise ValueError("inverse of non-square matrix")
    s = Solver(A, F)
    if s.rank != A.shape[0]:
        raise ZeroDivisionError("singular matrix")
    return s.solve(identity(A.shape[0]))


def kron(A, B, F: FieldSpec) -> np.ndarray:
    """Kronecker product; ``kron(A,B)(u (x) v) = (Au) (x) (Bv)``, u-index major."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = F.mul(A[:, None, :, None], B[None, :, None, :])
    return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def lin_comb(coeffs, mats, F: FieldSpec, shape=None) -> np.ndarray:
    """sum_i coeffs[i] * mats[i]."""
    if len(mats) == 0:
        return zeros(*shape)
    out = zeros(*np.asarray(mats[0]).shape)
    for c, M in zip(coeffs, mats):
        c = int(c)
        if c:
            out = F.add(out, F.mul(c, np.asarray(M)))
    return out


def complement_rows(sub, ambient, F: FieldSpec) -> np.ndarray:
    """Rows of ``ambient`` extending ``rowspace(sub)`` to ``rowspace(sub) + rowspace(ambient)``.

    Deterministic: greedily keeps ambient rows in order.
    """
    ambient = np.asarray(ambient, dtype=np.int64)
    n = ambient.shape[1]
    sub = np.asarray(sub, dtype=np.int64).reshape(-1, n)
    k = sub.shape[0]
    stacked = np.concatenate([sub, ambient], axis=0).T
    if stacked.size == 0:
        return ambient[:0]
    _, _, pivots = rref(stacked, F)
    chosen = [c - k for c in pivots if c >= k]
    return ambient[chosen]
