"""Rates of growth, Frobenius-Perron dimensions, complexity and variety dimension."""

from __future__ import annotations

import json
import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np
import sympy

from .algebra import AModule, AlgebraPresentation, composition_multiplicities, tensor_module
from .errors import SequenceTooShort

MIN_LENGTH = 8


def _squarefree_split(n: int):
    """n = s^2 * r with r squarefree; returns (s, r)."""
    s, r, f = 1, 1, 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            s *= f
        f += 1
    return s, n * r


class Surd:
    """Exact element a + b*sqrt(n) of a real quadratic field (n squarefree)."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a=0, b=0, n: int = 1):
        a, b = Fraction(a), Fraction(b)
        n = int(n)
        if n < 1:
            raise ValueError("only real quadratic fields are supported")
        s, r = _squarefree_split(n)
        b *= s
        if r == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            r = 1
        self.a, self.b, self.n = a, b, r

    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, dict):
            return cls(Fraction(str(x.get("a", 0))), Fraction(str(x.get("b", 0))), x.get("n", 1))
        if isinstance(x, float):
            raise TypeError("floats are not exact")
        return cls(Fraction(x))

    def _common(self, other):
        other = Surd.coerce(other)
        if self.n != other.n and self.b and other.b:
            raise ValueError(f"mixing sqrt({self.n}) and sqrt({other.n})")
        return other, max(self.n, other.n)

    def __add__(self, other):
        other, n = self._common(other)
        return Surd(self.a + other.a, self.b + other.b, n)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.n)

    def __sub__(self, other):
        return self + (-Surd.coerce(other))

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        other, n = self._common(other)
        return Surd(self.a * other.a + self.b * other.b * n,
                    self.a * other.b + self.b * other.a, n)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.n)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.n

    def __truediv__(self, other):
        other = Surd.coerce(other)
        nrm = other.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero surd")
        num = self * other.conjugate()
        return Surd(num.a / nrm, num.b / nrm, num.n)

    def __rtruediv__(self, other):
        return Surd.coerce(other) / self

    def __eq__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b and (self.n == other.n or not self.b)

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.n)

    def is_rational(self) -> bool:
        return self.b == 0

    def to_json(self):
        if self.is_rational():
            return int(self.a) if self.a.denominator == 1 else str(self.a)
        return {"a": str(self.a), "b": str(self.b), "n": self.n}

    def __repr__(self):
        if self.is_rational():
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.n})"


# ---------------------------------------------------------------------------
# exact sequences


def berlekamp_massey(seq):
    """Shortest connection polynomial C (low degree first, C[0] = 1) over a field."""
    one = Surd(1)
    C, B = [one], [one]
    L, m, b = 0, 1, one
    for n, s in enumerate(seq):
        d = s
        for i in range(1, L + 1):
            d = d + C[i] * seq[n - i]
        if not d:
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [Surd(0)] * (need - len(C))
        for i, bi in enumerate(B):
            C[i + m] = C[i + m] - coef * bi
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    while len(C) > 1 and not C[-1]:
        C.pop()
    return C, L


def _satisfies(seq, C, L) -> bool:
    for n in range(L, len(seq)):
        acc = seq[n]
        for i in range(1, len(C)):
            acc = acc + C[i] * seq[n - i]
        if acc:
            return False
    return True


def _strip_one(poly):
    """(k, q) with poly = (t - 1)^k q and q(1) != 0 (low degree first)."""
    p = list(poly)
    if not any(p):
        return 0, p
    k = 0
    while True:
        total = Surd(0)
        for c in p:
            total = total + c
        if total:
            return k, p
        # synthetic division by (t - 1), high degree first
        q = []
        acc = Surd(0)
        for c in reversed(p):
            acc = acc + c
            q.append(acc)
        p = list(reversed(q[:-1]))
        k += 1


def _order_at_one(poly) -> int:
    return _strip_one(poly)[0]


@dataclass
class GrowthSequence:
    values: list
    source: str = "external"

    def __post_init__(self):
        for v in self.values:
            if float(v) < -1e-12:
                raise ValueError("growth sequences must be nonnegative")


@dataclass
class GammaVerdict:
    gamma: Optional[int]
    method: str
    recurrence: Optional[list] = None
    pole_order: Optional[int] = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        rec = None
        if self.recurrence is not None:
            rec = [c.to_json() if isinstance(c, Surd) else c for c in self.recurrence]
        return {"gamma": self.gamma, "method": self.method, "recurrence": rec,
                "pole_order": self.pole_order, "diagnostics": self.diagnostics}


def _exact_values(values):
    try:
        return [Surd.coerce(v) for v in values]
    except (TypeError, ValueError):
        return None


def _exact_gamma(vals) -> Optional[GammaVerdict]:
    n = len(vals)
    hold = max(2, n // 4)
    prefix = vals[:n - hold]
    C, L = berlekamp_massey(prefix)
    if 2 * L > len(prefix) or not _satisfies(vals, C, L):
        return None
    if L == 0:
        return GammaVerdict(0, "recurrence-exact", [Surd(1)], 0,
                            {"window": [0, n], "held_out": hold, "order": 0})
    _, rest = _strip_one(C)
    roots = np.roots([float(c) for c in reversed(rest)]) if len(rest) > 1 else np.array([])
    if np.any(np.abs(roots) < 1 - 1e-6):
        # exponential growth, no finite rate
        return GammaVerdict(None, "recurrence-exact", C, None,
                            {"window": [0, n], "held_out": hold, "order": L, "exponential": True})
    num = []
    for k in range(L):
        acc = Surd(0)
        for i in range(0, min(k, len(C) - 1) + 1):
            acc = acc + C[i] * vals[k - i]
        num.append(acc)
    pole = max(0, _order_at_one(C) - _order_at_one(num)) if any(num) else 0
    return GammaVerdict(pole, "recurrence-exact", C, pole,
                        {"window": [0, n], "held_out": hold, "order": L})


def _slope_gamma(values) -> GammaVerdict:
    xs = np.array([float(v) for v in values])
    n = len(xs)
    idx = np.arange(max(1, n // 2), n)
    tail = xs[idx]
    if np.all(tail <= 1e-12):
        return GammaVerdict(0, "slope-estimate", diagnostics={"window": [int(idx[0]), n], "slope": None})
    keep = tail > 1e-12
    lx, ly = np.log(idx[keep].astype(float)), np.log(tail[keep])
    if len(lx) < 2:
        slope = 0.0
        resid = 0.0
    else:
        slope, icpt = np.polyfit(lx, ly, 1)
        resid = float(np.max(np.abs(ly - (slope * lx + icpt))))
    r = int(round(slope))
    return GammaVerdict(max(0, r + 1), "slope-estimate", diagnostics={
        "window": [int(idx[0]), n], "slope": float(slope), "residual": resid,
        "flagged": bool(abs(slope - r) > 0.25)})


def gamma_estimate(seq) -> GammaVerdict:
    """Rate of growth of a nonnegative sequence (exact when it satisfies a recurrence)."""
    if isinstance(seq, GrowthSequence):
        seq = seq.values
    seq = list(seq)
    if len(seq) < MIN_LENGTH:
        raise SequenceTooShort(f"need at least {MIN_LENGTH} terms, got {len(seq)}")
    exact = _exact_values(seq)
    if exact is not None:
        try:
            verdict = _exact_gamma(exact)
        except ValueError:
            verdict = None
        if verdict is not None:
            return verdict
    return _slope_gamma(seq)


def load_sequences(path) -> dict:
    """Read a fixture file: a list of entries or a dict of labelled lists."""
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(obj, list):
        obj = {"sequence": obj}
    out = {}
    for label, vals in obj.items():
        if isinstance(vals, dict):
            vals = vals["values"]
        out[label] = GrowthSequence([Surd.coerce(v) for v in vals], source=f"fixture:{label}")
    return out


# ---------------------------------------------------------------------------
# Perron roots


@dataclass
class PerronRoot:
    value: float
    interval: tuple
    minpoly: list
    surd: Optional[Surd] = None

    @property
    def exact(self):
        return self.surd

    def __float__(self):
        return self.value

    def to_json(self) -> dict:
        return {"value": self.value, "interval": [str(x) for x in self.interval],
                "minpoly": [str(c) for c in self.minpoly],
                "surd": self.surd.to_json() if self.surd is not None else None}


def _surd_root(poly: sympy.Poly, lo: Fraction, hi: Fraction) -> Optional[Surd]:
    coeffs = [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]
    if len(coeffs) == 2:
        return Surd(-coeffs[1] / coeffs[0])
    if len(coeffs) != 3:
        return None
    a, b, c = coeffs
    disc = b * b - 4 * a * c
    # sqrt(p/q) = sqrt(p*q)/q
    rad = disc.numerator * disc.denominator
    for sign in (1, -1):
        cand = Surd(-b / (2 * a), Fraction(sign, 2 * a * disc.denominator), rad)
        if float(lo) - 1e-12 <= float(cand) <= float(hi) + 1e-12:
            return cand
    return None


def perron_root(N) -> PerronRoot:
    """Largest real eigenvalue of a nonnegative integer matrix, certified by root isolation."""
    N = np.asarray(N, dtype=np.int64)
    if N.ndim != 2 or N.shape[0] != N.shape[1]:
        raise ValueError("matrix must be square")
    if np.any(N < 0):
        raise ValueError("matrix must be nonnegative")
    lam = sympy.Symbol("lam")
    charpoly = sympy.Matrix(N.tolist()).charpoly(lam)
    intervals = charpoly.intervals(eps=Fraction(1, 10 ** 13))
    lo, hi = max(((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
                  for (a, b), _ in intervals), key=lambda t: t[1])
    value = float((lo + hi) / 2)
    rows = N.sum(axis=1)
    assert rows.min() - 1e-9 <= value <= rows.max() + 1e-9, "Perron root outside row-sum bounds"
    minpoly = None
    for fac, _ in charpoly.factor_list()[1]:
        if fac.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                           sympy.Rational(hi.numerator, hi.denominator)) > 0:
            minpoly = fac
            break
    surd = _surd_root(minpoly, lo, hi) if minpoly is not None and minpoly.degree() <= 2 else None
    if surd is not None:
        value = float(surd)
    coeffs = [str(c) for c in minpoly.all_coeffs()] if minpoly is not None else []
    return PerronRoot(value, (lo, hi), coeffs, surd)


# ---------------------------------------------------------------------------
# FP dimensions of modules

_FP_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def fusion_matrices(A: AlgebraPresentation) -> list:
    """N_{X_i} with (N_{X_i})[j, k] = [X_i (x) X_j : X_k]."""
    S = A.simples
    mats = []
    for Xi in S:
        N = np.zeros((len(S), len(S)), dtype=np.int64)
        for j, Xj in enumerate(S):
            N[j] = composition_multiplicities(tensor_module(Xi, Xj))
        mats.append(N)
    return mats


def _fp_data(A: AlgebraPresentation) -> dict:
    if A not in _FP_CACHE:
        roots = [perron_root(N) for N in fusion_matrices(A)]
        simple_fp = [r.surd if r.surd is not None else r.value for r in roots]
        for v in simple_fp:
            assert float(v) >= 1 - 1e-9, "FP dimension of a simple below 1"
        principal = []
        for pi in A.principal:
            principal.append(_combine(composition_multiplicities(pi.module), simple_fp))
        _FP_CACHE[A] = {"roots": roots, "simples": simple_fp, "principal": principal}
    return _FP_CACHE[A]


def _combine(mults, fps):
    if all(isinstance(f, Surd) for f in fps):
        total = Surd(0)
        for m, f in zip(mults, fps):
            total = total + f * int(m)
        return total
    return float(sum(int(m) * float(f) for m, f in zip(mults, fps)))


def fpdims_of_simples(A: AlgebraPresentation) -> list:
    return list(_fp_data(A)["simples"])


def fpdims_of_principal(A: AlgebraPresentation) -> list:
    return list(_fp_data(A)["principal"])


def fpdim_module(X: AModule):
    return _combine(composition_multiplicities(X), fpdims_of_simples(X.algebra))


def complexity(X: AModule, D: int = 12, resolution=None) -> GammaVerdict:
    """Growth rate of FP dimensions along the minimal resolution of X."""
    from .resolve import minimal_resolution
    if D + 1 < MIN_LENGTH:
        raise SequenceTooShort(f"depth {D} gives fewer than {MIN_LENGTH} terms")
    res = resolution if resolution is not None else minimal_resolution(X, D)
    res.extend(D)
    verdict = gamma_estimate(GrowthSequence(res.fpdims()[:D + 1], "resolution fpdims"))
    verdict.diagnostics["depth"] = D
    return verdict


def variety_dim(X: AModule, D: int = 12, resolution=None) -> GammaVerdict:
    """Support variety dimension read off the growth of dim Ext^n(X, X)."""
    from .cohomology import ext_dims
    if D + 1 < MIN_LENGTH:
        raise SequenceTooShort(f"depth {D} gives fewer than {MIN_LENGTH} terms")
    dims = ext_dims(X, X, D, resolution=resolution)
    verdict = gamma_estimate(GrowthSequence(dims, "ext dims"))
    verdict.diagnostics["depth"] = D
    return verdict
