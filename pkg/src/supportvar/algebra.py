"""Finite-dimensional Hopf algebras given by structure constants, and their modules.

Conventions: algebra elements are coefficient vectors against the basis
``b_0..b_{d-1}``; module elements are column vectors and ``action[i]`` is
the matrix of ``b_i``. A homomorphism ``M -> N`` is a ``dim N x dim M``
matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import exactfield as ef
from .errors import (Inconclusive, MissingHopf, NonSplitEnd, NonSplitSimple,
                     RadicalFailure)
from .exactfield import FieldSpec


# ---------------------------------------------------------------------------
# radical of an algebra given by structure constants


def _regular_matrices(F: FieldSpec, mult: np.ndarray) -> np.ndarray:
    # L[i][k, j] = coefficient of b_k in b_i b_j
    return np.transpose(mult, (0, 2, 1)).copy()


def _restrict_scalars(F: FieldSpec, mult: np.ndarray) -> np.ndarray:
    """Structure constants over F_p of an F_{p^m}-algebra (basis w^s b_i)."""
    d = mult.shape[0]
    m = F.m
    w = F.encode([0, 1] + [0] * (m - 2))
    powers = [F.element(1)]
    for _ in range(2 * m):
        powers.append(int(F.mul(powers[-1], w)))
    out = np.zeros((d * m, d * m, d * m), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                c = int(mult[i, j, k])
                if not c:
                    continue
                for s in range(m):
                    for t in range(m):
                        coeffs = F.decode(int(F.mul(powers[s + t], c)))
                        for u, val in enumerate(coeffs):
                            if val:
                                out[s * d + i, t * d + j, u * d + k] = val
    return out


def _g_value(L: np.ndarray, p: int, i: int) -> int:
    """(Tr(L~^(p^i)) / p^i) mod p for the integer lift L~ of L."""
    mod = p ** (i + 1)
    X = L.astype(object) % mod if mod > 2 ** 20 else L % mod
    for _ in range(i):
        Y = X
        for _ in range(p - 1):
            Y = (Y @ X) % mod
        X = Y
    tr = int(np.trace(X)) % mod
    if tr % (p ** i):
        raise RadicalFailure(f"trace not divisible by p^{i}")
    return (tr // p ** i) % p


def _radical_prime_field(p: int, mult: np.ndarray) -> np.ndarray:
    F = FieldSpec(p)
    n = mult.shape[0]
    if n == 0:
        return ef.zeros(0, 0)
    L = _regular_matrices(F, mult)
    stack = L.reshape(n, n * n)

    def left(a):
        return F.matmul(a[None, :], stack).reshape(n, n)

    basis_left = [L[s] for s in range(n)]
    ideal = ef.identity(n)
    levels = int(math.floor(math.log(n, p))) if n > 1 else 0
    for i in range(levels + 1):
        if ideal.shape[0] == 0:
            break
        G = np.zeros((ideal.shape[0], n), dtype=np.int64)
        for r, v in enumerate(ideal):
            Lv = left(v)
            for s in range(n):
                G[r, s] = _g_value(F.matmul(Lv, basis_left[s]), p, i)
        coeffs = ef.kernel_basis(G.T, F)
        ideal = ef.row_basis(F.matmul(coeffs, ideal), F) if coeffs.shape[0] else ideal[:0]
    return ideal


def radical_of_structure(F: FieldSpec, mult: np.ndarray) -> np.ndarray:
    """Basis rows of the Jacobson radical of the algebra with constants ``mult``."""
    d = mult.shape[0]
    if F.m == 1:
        return _radical_prime_field(F.p, mult)
    rad_p = _radical_prime_field(F.p, _restrict_scalars(F, mult))
    rows = []
    for v in rad_p:
        rows.append([F.encode([v[s * d + k] for s in range(F.m)]) for k in range(d)])
    return ef.row_basis(np.array(rows, dtype=np.int64).reshape(-1, d), F)


def _check_nilpotent_ideal(F, mult, rad) -> bool:
    d = mult.shape[0]
    if rad.shape[0] == 0:
        return True
    L = _regular_matrices(F, mult)
    flat = L.reshape(d, d * d)
    r0 = rad.shape[0]
    for r in rad:
        Lr = F.matmul(r[None, :], flat).reshape(d, d)  # column j = r b_j
        imgs = np.concatenate([np.stack([F.matmul(L[i], r[:, None])[:, 0] for i in range(d)]), Lr.T])
        if ef.rank(np.concatenate([rad, imgs]), F) > r0:
            return False
    power = rad
    for _ in range(d + 1):
        if power.shape[0] == 0:
            return True
        prods = [F.matmul(F.matmul(a[None, :], flat).reshape(d, d), rad.T).T for a in power]
        power = ef.row_basis(np.concatenate(prods, axis=0), F)
    return power.shape[0] == 0


# ---------------------------------------------------------------------------


@dataclass(eq=False)
class AlgebraPresentation:
    """A finite-dimensional (Hopf) algebra over a finite field.

    ``mult[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j`` and
    ``comul[i, j, k]`` the coefficient of ``b_j (x) b_k`` in ``Delta(b_i)``.
    """

    name: str
    field: FieldSpec
    mult: np.ndarray
    unit: np.ndarray
    comul: Optional[np.ndarray] = None
    counit: Optional[np.ndarray] = None
    antipode: Optional[np.ndarray] = None
    radical_basis: Optional[np.ndarray] = None
    braided: bool = False

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=np.int64)
        self.unit = np.asarray(self.unit, dtype=np.int64)
        if self.comul is not None:
            self.comul = np.asarray(self.comul, dtype=np.int64)
            self.counit = np.asarray(self.counit, dtype=np.int64)
        if self.antipode is not None:
            self.antipode = np.asarray(self.antipode, dtype=np.int64)
        if self.radical_basis is not None:
            self.radical_basis = np.asarray(self.radical_basis, dtype=np.int64).reshape(-1, self.dim)

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    @property
    def is_hopf(self) -> bool:
        return self.comul is not None and self.counit is not None

    @cached_property
    def left_matrices(self) -> np.ndarray:
        return _regular_matrices(self.field, self.mult)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def multiply(self, a, b) -> np.ndarray:
        F = self.field
        La = F.matmul(np.asarray(a)[None, :], self.left_matrices.reshape(self.dim, -1))
        return F.matmul(La.reshape(self.dim, self.dim), np.asarray(b)[:, None])[:, 0]

    def left_mult(self, a) -> np.ndarray:
        d = self.dim
        return self.field.matmul(np.asarray(a)[None, :], self.left_matrices.reshape(d, d * d)).reshape(d, d)

    def right_mult(self, a) -> np.ndarray:
        # column j = b_j a
        d = self.dim
        R = np.transpose(self.mult, (1, 0, 2)).reshape(d, d * d)  # [j', (i, k)] -> c[i, j', k]
        prod = self.field.matmul(np.asarray(a)[None, :], R).reshape(d, d)  # [i, k]
        return prod.T

    def content_hash(self) -> str:
        import hashlib
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()[:16]

    # structure ---------------------------------------------------------------

    @cached_property
    def generators(self) -> list:
        """Indices of basis elements generating the algebra (unit implied)."""
        F = self.field
        d = self.dim
        span = ef.row_basis(self.unit[None, :], F)
        gens = []

        def closure(span, gens):
            while True:
                prods = [span]
                for g in gens:
                    Lg = self.left_matrices[g]
                    prods.append(F.matmul(Lg, span.T).T)
                new = ef.row_basis(np.concatenate(prods, axis=0), F)
                if new.shape[0] == span.shape[0]:
                    return new
                span = new

        for i in range(d):
            if span.shape[0] == d:
                break
            e = self.basis_vector(i)
            if ef.rank(np.concatenate([span, e[None, :]]), F) > span.shape[0]:
                gens.append(i)
                span = closure(ef.row_basis(np.concatenate([span, e[None, :]]), F), gens)
        return gens

    @cached_property
    def radical(self) -> np.ndarray:
        F = self.field
        if self.radical_basis is not None:
            rad = ef.row_basis(self.radical_basis, F) if self.radical_basis.shape[0] else self.radical_basis
            if not _check_nilpotent_ideal(F, self.mult, rad):
                raise RadicalFailure("supplied radical basis is not a nilpotent two-sided ideal")
            return rad
        rad = radical_of_structure(F, self.mult)
        if not _check_nilpotent_ideal(F, self.mult, rad):
            raise RadicalFailure("computed radical failed the nilpotent-ideal check")
        return rad

    @cached_property
    def _semisimple_split(self):
        """Characters and primitive idempotents of A/rad(A) (all simples 1-dim)."""
        F = self.field
        d = self.dim
        rad = self.radical
        comp = ef.complement_rows(rad, ef.identity(d), F)
        r = comp.shape[0]
        coord = ef.Solver(np.concatenate([comp, rad], axis=0).T, F)

        def q_coords(v):
            return coord.solve(v)[:r]

        # L_Q(b_i) on the quotient, in the comp basis
        LQ = []
        for i in range(d):
            imgs = F.matmul(self.left_matrices[i], comp.T)
            LQ.append(coord.solve(imgs)[:r])
        for i in range(d):
            for j in range(i + 1, d):
                if np.any(F.matmul(LQ[i], LQ[j]) != F.matmul(LQ[j], LQ[i])):
                    raise NonSplitSimple(
                        f"{self.name}: A/rad(A) is not commutative; simples of dimension > 1 "
                        "are not supported (extend the field or supply a basic algebra)")
        spaces = [ef.identity(r)]
        for i in range(d):
            new_spaces = []
            for W in spaces:
                # matrix of LQ[i] on W (rows basis)
                img = F.matmul(LQ[i], W.T)
                Lw = ef.solve(W.T, img, F)
                pieces = []
                total = 0
                for lam in F.elements():
                    K = ef.kernel_basis(F.sub(Lw, F.mul(lam, ef.identity(W.shape[0]))), F)
                    if K.shape[0]:
                        pieces.append(F.matmul(K, W))
                        total += K.shape[0]
                if total < W.shape[0]:
                    raise NonSplitSimple(
                        f"{self.name}: some simple module is not split over F_{F.q}; "
                        "extend the field")
                new_spaces.extend(pieces)
            spaces = new_spaces
        if any(W.shape[0] != 1 for W in spaces):
            raise NonSplitSimple(f"{self.name}: endomorphism ring of a simple exceeds dimension 1")
        chars = []
        idems = []
        for W in spaces:
            e_q = W[0]
            e_a = F.matmul(e_q[None, :], comp)[0]
            chi = []
            for i in range(d):
                img = F.matmul(LQ[i], e_q[:, None])[:, 0]
                nz = int(np.nonzero(e_q)[0][0])
                chi.append(int(F.mul(img[nz], F.inv(e_q[nz]))))
            # normalize so that e is idempotent in Q: chi(e) * e = e^2
            scale = int(F.matmul(np.array(chi)[None, :], e_a[:, None])[0, 0])
            if scale == 0:
                raise NonSplitSimple("degenerate eigenvector in A/rad(A)")
            e_a = F.mul(F.inv(scale), e_a)
            chars.append(tuple(chi))
            idems.append(e_a)
        order = sorted(range(len(chars)), key=lambda t: (not self._is_counit(chars[t]), chars[t]))
        return [chars[t] for t in order], [idems[t] for t in order], q_coords

    def _is_counit(self, chi) -> bool:
        return self.counit is not None and tuple(int(x) for x in self.counit) == tuple(chi)

    @cached_property
    def simples(self) -> list:
        chars, _, _ = self._semisimple_split
        return [AModule(self, np.array(chi, dtype=np.int64).reshape(self.dim, 1, 1)) for chi in chars]

    @cached_property
    def principal(self) -> list:
        """Orthogonal primitive idempotents lifted from A/rad(A), with P(X_i) = A f_i."""
        F = self.field
        d = self.dim
        _, idems, _ = self._semisimple_split
        one = self.unit
        lifted = []
        remaining = one.copy()
        s = max(1, d)
        iterations = max(1, math.ceil(math.log2(s))) + 2
        three, two = F.scalar(3), F.scalar(2)
        for t, e in enumerate(idems):
            if t == len(idems) - 1:
                f = remaining
            else:
                a = self.multiply(self.multiply(remaining, e), remaining)
                for _ in range(iterations + d):
                    a2 = self.multiply(a, a)
                    if np.array_equal(a2, a):
                        break
                    a3 = self.multiply(a2, a)
                    a = F.sub(F.mul(three, a2), F.mul(two, a3))
                f = a
                if not np.array_equal(self.multiply(f, f), f):
                    raise RadicalFailure("idempotent lifting did not converge")
            lifted.append(f)
            remaining = F.sub(remaining, f)
        out = []
        for f in lifted:
            V = ef.row_basis(self.right_mult(f).T, F)
            act = np.stack([ef.solve(V.T, F.matmul(self.left_matrices[i], V.T), F) for i in range(d)])
            gen = ef.solve(V.T, f, F)
            out.append(PrincipalIndecomposable(AModule(self, act), f, V, gen))
        return out

    def to_json(self) -> dict:
        F = self.field

        def table(T):
            out = []
            for idx in zip(*np.nonzero(T)):
                out.append([int(idx[0]), int(idx[1]), int(idx[2]), F.to_plain(T[idx])])
            return out

        obj = {
            "name": self.name,
            "field": F.to_json(),
            "dim": self.dim,
            "mult": table(self.mult),
            "unit": [F.to_plain(x) for x in self.unit],
        }
        if self.is_hopf:
            hopf = {"comul": table(self.comul), "counit": [F.to_plain(x) for x in self.counit]}
            if self.antipode is not None:
                hopf["antipode"] = [[F.to_plain(x) for x in row] for row in self.antipode]
            obj["hopf"] = hopf
        if self.radical_basis is not None:
            obj["radical_basis"] = [[F.to_plain(x) for x in row] for row in self.radical_basis]
        if self.braided:
            obj["braided"] = True
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraPresentation":
        F = FieldSpec.from_json(obj["field"])
        d = int(obj["dim"])

        def table(entries):
            T = np.zeros((d, d, d), dtype=np.int64)
            for i, j, k, c in entries:
                T[i, j, k] = F.add(T[i, j, k], F.element(c))
            return T

        hopf = obj.get("hopf")
        rad = obj.get("radical_basis")
        return cls(
            name=obj["name"],
            field=F,
            mult=table(obj["mult"]),
            unit=np.array([F.element(x) for x in obj["unit"]], dtype=np.int64),
            comul=table(hopf["comul"]) if hopf else None,
            counit=np.array([F.element(x) for x in hopf["counit"]], dtype=np.int64) if hopf else None,
            antipode=(np.array([[F.element(x) for x in row] for row in hopf["antipode"]], dtype=np.int64)
                      if hopf and hopf.get("antipode") is not None else None),
            radical_basis=(np.array([[F.element(x) for x in row] for row in rad], dtype=np.int64).reshape(-1, d)
                           if rad is not None else None),
            braided=bool(obj.get("braided", False)),
        )


@dataclass
class PrincipalIndecomposable:
    module: "AModule"
    idempotent: np.ndarray
    basis: np.ndarray  # rows: basis of A f inside A
    generator: np.ndarray  # coordinates of f in ``basis``


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def _tensor_product_in_AA(A: AlgebraPresentation, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """(sum X[a,b] b_a (x) b_b)(sum Y[c,e] b_c (x) b_e) as a d x d coefficient matrix."""
    F = A.field
    d = A.dim
    c = A.mult
    out = ef.zeros(d, d)
    for a, b in zip(*np.nonzero(X)):
        for cc, e in zip(*np.nonzero(Y)):
            coef = F.mul(X[a, b], Y[cc, e])
            out = F.add(out, F.mul(coef, F.mul(c[a, cc][:, None], c[b, e][None, :])))
    return out


def validate(A: AlgebraPresentation) -> ValidationReport:
    """Check every (bi)algebra axiom by exact linear algebra."""
    F = A.field
    d = A.dim
    rep = ValidationReport()
    c = A.mult
    # associativity: (b_i b_j) b_k == b_i (b_j b_k)
    for i in range(d):
        for j in range(d):
            lhs = F.matmul(c[i, j][None, :], c.reshape(d, d * d)).reshape(d, d)  # [k, m]
            rhs = F.matmul(c[j], c[i])  # [k, l] @ [l, m]
            for k in np.nonzero(np.any(lhs != rhs, axis=1))[0]:
                rep.failures.append(("associativity", i, j, int(k)))
    # unit
    U = A.left_mult(A.unit)
    if not np.array_equal(U, ef.identity(d)):
        rep.failures.append(("left unit",))
    if not np.array_equal(A.right_mult(A.unit), ef.identity(d)):
        rep.failures.append(("right unit",))
    if not A.is_hopf:
        return rep
    D = A.comul
    eps = A.counit
    # coassociativity: (Delta (x) id) Delta == (id (x) Delta) Delta
    flatD = D.reshape(d, d * d)
    for i in range(d):
        lhs = F.matmul(flatD.T, D[i]).reshape(-1)
        rhs = F.matmul(D[i], flatD).reshape(-1)
        if np.any(lhs != rhs):
            rep.failures.append(("coassociativity", i))
    # counit: (eps (x) id) Delta = id = (id (x) eps) Delta
    for i in range(d):
        left = F.matmul(eps[None, :], D[i])[0]
        right = F.matmul(D[i], eps[:, None])[:, 0]
        e_i = A.basis_vector(i)
        if not np.array_equal(left, e_i) or not np.array_equal(right, e_i):
            rep.failures.append(("counit", i))
    # Delta and eps are algebra maps
    one = A.unit
    D1 = ef.lin_comb(one, list(D), F)
    if not np.array_equal(D1, F.mul(one[:, None], one[None, :])):
        rep.failures.append(("comultiplication unital",))
    if int(F.matmul(eps[None, :], one[:, None])[0, 0]) != 1:
        rep.failures.append(("counit unital",))
    for i in range(d):
        for j in range(d):
            lhs = ef.lin_comb(c[i, j], list(D), F)
            rhs = _tensor_product_in_AA(A, D[i], D[j])
            if not np.array_equal(lhs, rhs):
                rep.failures.append(("comultiplicative", i, j))
            e_ij = int(F.matmul(eps[None, :], c[i, j][:, None])[0, 0])
            if e_ij != int(F.mul(eps[i], eps[j])):
                rep.failures.append(("counit multiplicative", i, j))
    if A.antipode is not None:
        S = A.antipode  # column i = S(b_i)
        for i in range(d):
            lhs = np.zeros(d, dtype=np.int64)
            rhs = np.zeros(d, dtype=np.int64)
            for j, k in zip(*np.nonzero(D[i])):
                lhs = F.add(lhs, F.mul(D[i, j, k], A.multiply(S[:, j], A.basis_vector(k))))
                rhs = F.add(rhs, F.mul(D[i, j, k], A.multiply(A.basis_vector(j), S[:, k])))
            target = F.mul(eps[i], one)
            if not np.array_equal(lhs, target) or not np.array_equal(rhs, target):
                rep.failures.append(("antipode", i))
    return rep


# ---------------------------------------------------------------------------
# modules


class AModule:
    """A finite-dimensional left module given by one action matrix per basis element."""

    def __init__(self, algebra: AlgebraPresentation, action):
        self.algebra = algebra
        action = np.asarray(action, dtype=np.int64)
        if action.ndim != 3 or action.shape[0] != algebra.dim or action.shape[1] != action.shape[2]:
            raise ValueError(f"action must have shape ({algebra.dim}, n, n), got {action.shape}")
        self.action = action
        self.action.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def __repr__(self):
        return f"AModule({self.algebra.name}, dim={self.dim})"

    def act(self, a) -> np.ndarray:
        """Matrix of the algebra element with coefficient vector ``a``."""
        F = self.field
        n = self.dim
        if n == 0:
            return ef.zeros(0, 0)
        return F.matmul(np.asarray(a)[None, :], self.action.reshape(self.algebra.dim, n * n)).reshape(n, n)

    def is_valid(self) -> bool:
        A = self.algebra
        F = self.field
        if not np.array_equal(self.act(A.unit), ef.identity(self.dim)):
            return False
        for i in range(A.dim):
            for j in range(A.dim):
                if not np.array_equal(F.matmul(self.action[i], self.action[j]), self.act(A.mult[i, j])):
                    return False
        return True

    def to_json(self) -> dict:
        F = self.field
        return {
            "algebra": self.algebra.name,
            "dim": self.dim,
            "action": [[[F.to_plain(x) for x in row] for row in M] for M in self.action],
        }

    @classmethod
    def from_json(cls, obj: dict, algebra: AlgebraPresentation) -> "AModule":
        if obj.get("algebra") not in (None, algebra.name):
            raise ValueError(f"module belongs to {obj['algebra']!r}, not {algebra.name!r}")
        F = algebra.field
        n = int(obj["dim"])
        act = np.array([[[F.element(x) for x in row] for row in M] for M in obj["action"]],
                       dtype=np.int64).reshape(algebra.dim, n, n)
        return cls(algebra, act)

    def content_hash(self) -> str:
        import hashlib
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()[:16]


def zero_module(A: AlgebraPresentation) -> AModule:
    return AModule(A, np.zeros((A.dim, 0, 0), dtype=np.int64))


def regular_module(A: AlgebraPresentation) -> AModule:
    return AModule(A, A.left_matrices)


def unit_module(A: AlgebraPresentation) -> AModule:
    """The unit object; one shared instance per algebra so cached resolutions are reused."""
    if not A.is_hopf:
        raise MissingHopf(f"{A.name} has no counit")
    if "_unit" not in A.__dict__:
        A.__dict__["_unit"] = AModule(A, A.counit.reshape(A.dim, 1, 1))
    return A.__dict__["_unit"]


def direct_sum(*mods: AModule) -> AModule:
    A = mods[0].algebra
    n = sum(M.dim for M in mods)
    act = np.zeros((A.dim, n, n), dtype=np.int64)
    off = 0
    for M in mods:
        act[:, off:off + M.dim, off:off + M.dim] = M.action
        off += M.dim
    return AModule(A, act)


def submodule(M: AModule, basis_cols) -> AModule:
    """Module structure on the invariant subspace spanned by the columns given."""
    F = M.field
    B = np.asarray(basis_cols, dtype=np.int64).reshape(M.dim, -1)
    k = B.shape[1]
    if k == 0:
        return zero_module(M.algebra)
    solver = ef.Solver(B, F)
    act = []
    for X in M.action:
        Y = solver.solve(F.matmul(X, B))
        if Y is None:
            raise ValueError("subspace is not invariant")
        act.append(Y)
    return AModule(M.algebra, np.stack(act))


def quotient_module(M: AModule, sub_cols):
    """``(M / W, projection)`` for the invariant subspace W spanned by ``sub_cols``."""
    F = M.field
    n = M.dim
    W = np.asarray(sub_cols, dtype=np.int64).reshape(n, -1)
    comp = ef.complement_rows(W.T, ef.identity(n), F).T  # columns
    k = comp.shape[1]
    solver = ef.Solver(np.concatenate([comp, W], axis=1), F)
    proj = solver.solve(ef.identity(n))[:k]
    act = [F.matmul(proj, F.matmul(X, comp)) for X in M.action]
    Q = AModule(M.algebra, np.stack(act) if k else np.zeros((M.algebra.dim, 0, 0), dtype=np.int64))
    return Q, proj


def tensor_module(M: AModule, N: AModule) -> AModule:
    """M (x) N with b_i acting through the comultiplication."""
    A = M.algebra
    if not A.is_hopf:
        raise MissingHopf(f"{A.name} has no comultiplication")
    F = A.field
    n = M.dim * N.dim
    act = []
    for i in range(A.dim):
        X = ef.zeros(n, n)
        for j, k in zip(*np.nonzero(A.comul[i])):
            X = F.add(X, F.mul(A.comul[i, j, k], ef.kron(M.action[j], N.action[k], F)))
        act.append(X)
    return AModule(A, np.stack(act) if n else np.zeros((A.dim, 0, 0), dtype=np.int64))


def module_radical(M: AModule) -> np.ndarray:
    """Columns spanning rad(A) M."""
    F = M.field
    rad = M.algebra.radical
    if M.dim == 0 or rad.shape[0] == 0:
        return ef.zeros(M.dim, 0)
    imgs = np.concatenate([M.act(r) for r in rad], axis=1)
    return ef.column_basis(imgs, F)


def simples(A: AlgebraPresentation) -> list:
    return A.simples


def radical(A: AlgebraPresentation) -> np.ndarray:
    return A.radical


def principal_decomposition(A: AlgebraPresentation) -> list:
    """``[(P(X_i), f_i)]`` with f_i orthogonal primitive idempotents summing to 1."""
    return [(pi.module, pi.idempotent) for pi in A.principal]


def composition_multiplicities(Y: AModule) -> np.ndarray:
    """``[Y : X_i] = dim Hom(P(X_i), Y) = rank of f_i on Y``."""
    A = Y.algebra
    if Y.dim == 0:
        return np.zeros(len(A.principal), dtype=np.int64)
    return np.array([ef.rank(Y.act(pi.idempotent), Y.field) for pi in A.principal], dtype=np.int64)


def top_multiplicities(M: AModule) -> np.ndarray:
    """Multiplicities of the simples in M / rad(A) M."""
    A = M.algebra
    F = M.field
    if M.dim == 0:
        return np.zeros(len(A.principal), dtype=np.int64)
    R = module_radical(M)
    out = []
    for pi in A.principal:
        E = M.act(pi.idempotent)
        out.append(ef.rank(E, F) - (ef.rank(F.matmul(E, R), F) if R.shape[1] else 0))
    return np.array(out, dtype=np.int64)


def radical_filtration_multiplicities(Y: AModule) -> np.ndarray:
    """Composition multiplicities counted layer by layer along Y > rad Y > rad^2 Y > ..."""
    A = Y.algebra
    total = np.zeros(len(A.principal), dtype=np.int64)
    cur = Y
    while cur.dim:
        total += top_multiplicities(cur)
        R = module_radical(cur)
        if R.shape[1] == cur.dim:
            raise RadicalFailure("module radical does not shrink")
        cur = submodule(cur, R)
    return total


def hom_space(M: AModule, N: AModule) -> list:
    """Basis of Hom_A(M, N) as ``dim N x dim M`` matrices."""
    A = M.algebra
    F = A.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    eqs = []
    Im, In = ef.identity(m), ef.identity(n)
    for g in A.generators:
        # row-major vec(f): (f rho_M)[a,c] and (rho_N f)[a,c]
        eqs.append(F.sub(ef.kron(In, M.action[g].T, F), ef.kron(N.action[g], Im, F)))
    if not eqs:
        return [row.reshape(n, m) for row in ef.identity(n * m)]
    K = ef.kernel_basis(np.concatenate(eqs, axis=0), F)
    return [row.reshape(n, m) for row in K]


def is_homomorphism(f, M: AModule, N: AModule) -> bool:
    F = M.field
    return all(np.array_equal(F.matmul(f, M.action[i]), F.matmul(N.action[i], f))
               for i in range(M.algebra.dim))


def projective_cover_dim(M: AModule) -> int:
    tops = top_multiplicities(M)
    return int(sum(int(a) * pi.module.dim for a, pi in zip(tops, M.algebra.principal)))


def is_projective(M: AModule) -> bool:
    """True iff the projective cover of M has the same dimension as M."""
    return projective_cover_dim(M) == M.dim


# ---------------------------------------------------------------------------
# decomposition and isomorphism


def _end_structure(M: AModule, E: list) -> np.ndarray:
    F = M.field
    r = len(E)
    vecs = np.stack([e.reshape(-1) for e in E]).T
    solver = ef.Solver(vecs, F)
    mult = np.zeros((r, r, r), dtype=np.int64)
    for a in range(r):
        prods = np.stack([F.matmul(E[a], E[b]).reshape(-1) for b in range(r)]).T
        mult[a] = solver.solve(prods).T
    return mult


def _end_radical(M: AModule, E: list) -> np.ndarray:
    """Coordinates (rows, in the basis E) of rad End_A(M), verified as a nilpotent ideal.

    Over prime fields the trace test runs in the natural representation on M,
    which is far smaller than the regular representation of End(M).
    """
    F = M.field
    r = len(E)
    if F.m > 1:
        return radical_of_structure(F, _end_structure(M, E))
    p, n = F.p, M.dim
    ideal = ef.identity(r)
    levels = int(math.floor(math.log(n, p))) if n > 1 else 0
    for i in range(levels + 1):
        if ideal.shape[0] == 0:
            break
        elems = [ef.lin_comb(v, E, F) for v in ideal]
        G = np.zeros((ideal.shape[0], r), dtype=np.int64)
        for a, x in enumerate(elems):
            for b in range(r):
                G[a, b] = _g_value(F.matmul(x, E[b]), p, i)
        coeffs = ef.kernel_basis(G.T, F)
        ideal = ef.row_basis(F.matmul(coeffs, ideal), F) if coeffs.shape[0] else ideal[:0]
    if not _check_nilpotent_ideal(F, _end_structure(M, E), ideal):
        raise RadicalFailure("trace radical of End(M) is not a nilpotent ideal")
    return ideal


def is_indecomposable(M: AModule) -> bool:
    """End_A(M) is local with residue field k, i.e. codim rad(End) = 1."""
    if M.dim == 0:
        return False
    E = hom_space(M, M)
    return len(E) - _end_radical(M, E).shape[0] == 1


def _matrix_power(F, X, e):
    result = ef.identity(X.shape[0])
    base = X
    while e:
        if e & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        e >>= 1
    return result


def _fitting_split(F, E, n, rng, trials):
    for _ in range(trials):
        coeffs = F.random_matrix(rng, 1, len(E))[0]
        psi = _matrix_power(F, ef.lin_comb(coeffs, E, F), n)
        rk = ef.rank(psi, F)
        if 0 < rk < n:
            return ef.column_basis(psi, F), ef.kernel_basis(psi, F).T
    return None


def _split_once(M: AModule, rng, trials: int):
    """Columns spanning a nontrivial Fitting decomposition, or None if M is indecomposable."""
    F = M.field
    n = M.dim
    E = hom_space(M, M)
    if len(E) == 1:
        return None
    quick = _fitting_split(F, E, n, rng, min(8, trials))
    if quick is not None:
        return quick
    codim = len(E) - _end_radical(M, E).shape[0]
    if codim == 1:
        return None
    found = _fitting_split(F, E, n, rng, trials)
    if found is not None:
        return found
    raise NonSplitEnd(
        f"module of dim {n}: End/rad has dimension {codim} but no splitting "
        "endomorphism was found; the endomorphism ring of a summand is not split over the field")


def _decompose_cols(M: AModule, rng, trials: int):
    if M.dim == 0:
        return []
    parts = _split_once(M, rng, trials)
    if parts is None:
        return [(M, ef.identity(M.dim))]
    F = M.field
    out = []
    for cols in parts:
        S = submodule(M, cols)
        for T, inner in _decompose_cols(S, rng, trials):
            out.append((T, F.matmul(cols, inner)))
    return out


@dataclass
class DecompositionReport:
    summands: list
    embeddings: list  # columns of each summand inside the input module
    multiplicities: list
    iso_classes: list  # indices into ``summands`` grouped by isomorphism
    seed: int

    @property
    def dims(self) -> list:
        return sorted(S.dim for S in self.summands)

    def change_of_basis(self, F: FieldSpec) -> np.ndarray:
        if not self.embeddings:
            return ef.zeros(0, 0)
        return np.concatenate(self.embeddings, axis=1)


def decompose(M: AModule, seed: int = 0, trials: int = 200) -> DecompositionReport:
    """Krull-Schmidt decomposition into indecomposable summands."""
    rng = np.random.default_rng(seed)
    pieces = _decompose_cols(M, rng, trials)
    pieces.sort(key=lambda t: (t[0].dim, tuple(composition_multiplicities(t[0]))))
    summands = [S for S, _ in pieces]
    classes = []
    for idx, S in enumerate(summands):
        for cls in classes:
            if _indecomposables_isomorphic(summands[cls[0]], S) is not None:
                cls.append(idx)
                break
        else:
            classes.append([idx])
    return DecompositionReport(
        summands=summands,
        embeddings=[B for _, B in pieces],
        multiplicities=[len(c) for c in classes],
        iso_classes=classes,
        seed=seed,
    )


def _indecomposables_isomorphic(M: AModule, N: AModule):
    """Isomorphism M -> N between indecomposables, or None when none exists.

    With End(M) local, some g o f (f: M->N, g: N->M) is invertible iff M ~ N,
    and it suffices to test basis pairs since non-units form an ideal.
    """
    F = M.field
    if M.dim != N.dim:
        return None
    if not np.array_equal(composition_multiplicities(M), composition_multiplicities(N)):
        return None
    H = hom_space(M, N)
    G = hom_space(N, M)
    for f in H:
        if ef.rank(f, F) == M.dim:
            return f
        for g in G:
            if ef.rank(F.matmul(g, f), F) == M.dim:
                return f
    return None


@dataclass
class IsoResult:
    isomorphic: bool
    certificate: Optional[np.ndarray] = None
    reason: str = ""
    seed: int = 0

    def __bool__(self) -> bool:
        return self.isomorphic


def _match_summands(A_list, B_list):
    """Pair up indecomposables; returns list of (i, j, iso) or None."""
    used = set()
    pairs = []
    for i, S in enumerate(A_list):
        for j, T in enumerate(B_list):
            if j in used:
                continue
            f = _indecomposables_isomorphic(S, T)
            if f is not None:
                used.add(j)
                pairs.append((i, j, f))
                break
        else:
            return None
    if len(used) != len(B_list):
        return None
    return pairs


def module_isomorphic(M: AModule, N: AModule, seed: int = 0, trials: int = 24) -> IsoResult:
    """Decide M ~ N; a positive answer carries an invertible intertwiner ``N <- M``."""
    F = M.field
    if M.dim != N.dim:
        return IsoResult(False, reason="dimension mismatch", seed=seed)
    if M.dim == 0:
        return IsoResult(True, ef.zeros(0, 0), "zero modules", seed)
    if not np.array_equal(composition_multiplicities(M), composition_multiplicities(N)):
        return IsoResult(False, reason="composition multiplicity mismatch", seed=seed)
    H = hom_space(M, N)
    if not H:
        return IsoResult(False, reason="Hom(M, N) = 0", seed=seed)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        f = ef.lin_comb(F.random_matrix(rng, 1, len(H))[0], H, F)
        if ef.rank(f, F) == M.dim:
            return IsoResult(True, f, "random intertwiner", seed)
    dM = decompose(M, seed)
    dN = decompose(N, seed)
    if len(dM.summands) != len(dN.summands):
        return IsoResult(False, reason="different number of indecomposable summands", seed=seed)
    pairs = _match_summands(dM.summands, dN.summands)
    if pairs is None:
        return IsoResult(False, reason="indecomposable summands do not match", seed=seed)
    BM = dM.change_of_basis(F)
    BN = dN.change_of_basis(F)
    n = M.dim
    block = ef.zeros(n, n)
    offM = np.cumsum([0] + [S.dim for S in dM.summands])
    offN = np.cumsum([0] + [S.dim for S in dN.summands])
    for i, j, f in pairs:
        block[offN[j]:offN[j + 1], offM[i]:offM[i + 1]] = f
    cert = F.matmul(BN, F.matmul(block, ef.inverse(BM, F)))
    if ef.rank(cert, F) != n or not is_homomorphism(cert, M, N):
        raise Inconclusive("assembled certificate failed verification")
    return IsoResult(True, cert, "matched indecomposable summands", seed)


def projective_free_part(M: AModule, seed: int = 0) -> AModule:
    """Direct sum of the non-projective indecomposable summands of M."""
    rep = decompose(M, seed)
    keep = [S for S in rep.summands if not is_projective(S)]
    return direct_sum(*keep) if keep else zero_module(M.algebra)


def stably_isomorphic(M: AModule, N: AModule, seed: int = 0) -> IsoResult:
    """Isomorphism after discarding projective summands on both sides."""
    sM = [S for S in decompose(M, seed).summands if not is_projective(S)]
    sN = [S for S in decompose(N, seed).summands if not is_projective(S)]
    if sorted(S.dim for S in sM) != sorted(S.dim for S in sN):
        return IsoResult(False, reason="projective-free parts differ in summand dimensions", seed=seed)
    pairs = _match_summands(sM, sN)
    if pairs is None:
        return IsoResult(False, reason="projective-free summands do not match", seed=seed)
    return IsoResult(True, None, "projective-free parts match summand by summand", seed)
