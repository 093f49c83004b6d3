"""Generators for the bundled example algebras."""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import AlgebraPresentation, validate
from .errors import InvalidParams
from .exactfield import FieldSpec, is_prime


def group_algebra(p: int, orders, name: str | None = None) -> AlgebraPresentation:
    """F_p[Z/n_1 x ... x Z/n_r] with Delta(g) = g (x) g.

    Basis element i corresponds to the group element with mixed-radix digits
    of i (first factor fastest); index 0 is the identity.
    """
    if not is_prime(p):
        raise InvalidParams(f"p={p} is not prime")
    orders = [int(n) for n in orders]
    if not orders or any(n < 1 for n in orders):
        raise InvalidParams("group type must be a nonempty list of positive orders")
    elems = [tuple(reversed(t)) for t in itertools.product(*[range(n) for n in reversed(orders)])]
    index = {g: i for i, g in enumerate(elems)}
    d = len(elems)
    F = FieldSpec(p)
    mult = np.zeros((d, d, d), dtype=np.int64)
    comul = np.zeros((d, d, d), dtype=np.int64)
    antipode = np.zeros((d, d), dtype=np.int64)
    for i, g in enumerate(elems):
        comul[i, i, i] = 1
        inv = tuple((-a) % n for a, n in zip(g, orders))
        antipode[index[inv], i] = 1
        for j, h in enumerate(elems):
            s = tuple((a + b) % n for a, b, n in zip(g, h, orders))
            mult[i, j, index[s]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    label = "x".join(f"Z{n}" for n in orders)
    return AlgebraPresentation(
        name=name or f"F{p}[{label}]",
        field=F,
        mult=mult,
        unit=unit,
        comul=comul,
        counit=np.ones(d, dtype=np.int64),
        antipode=antipode,
    )


def sweedler(p: int) -> AlgebraPresentation:
    """Sweedler's 4-dimensional Hopf algebra over F_p, basis (1, g, x, gx).

    g^2 = 1, x^2 = 0, xg = -gx, Delta(g) = g(x)g, Delta(x) = x(x)1 + g(x)x.
    """
    if not is_prime(p) or p == 2:
        raise InvalidParams("Sweedler algebra needs an odd prime")
    F = FieldSpec(p)
    # basis index = a + 2b for g^a x^b
    def idx(a, b):
        return a + 2 * b

    mult = np.zeros((4, 4, 4), dtype=np.int64)
    for a, b, c, e in itertools.product(range(2), repeat=4):
        if b + e >= 2:
            continue
        sign = -1 if (b and c) else 1
        mult[idx(a, b), idx(c, e), idx((a + c) % 2, b + e)] = sign % p
    comul = np.zeros((4, 4, 4), dtype=np.int64)
    one, g, x, gx = 0, 1, 2, 3
    comul[one, one, one] = 1
    comul[g, g, g] = 1
    comul[x, x, one] = 1
    comul[x, g, x] = 1
    comul[gx, gx, g] = 1
    comul[gx, one, gx] = 1
    antipode = np.zeros((4, 4), dtype=np.int64)
    antipode[one, one] = 1
    antipode[g, g] = 1
    antipode[gx, x] = (-1) % p
    antipode[x, gx] = 1
    return AlgebraPresentation(
        name=f"Sweedler/F{p}",
        field=F,
        mult=mult,
        unit=np.array([1, 0, 0, 0], dtype=np.int64),
        comul=comul,
        counit=np.array([1, 1, 0, 0], dtype=np.int64),
        antipode=antipode,
    )


def base_field_algebra(p: int) -> AlgebraPresentation:
    """The field itself, with its trivial Hopf structure."""
    F = FieldSpec(p)
    one = np.ones((1, 1, 1), dtype=np.int64)
    return AlgebraPresentation(f"F{p}", F, one, np.array([1]), comul=one.copy(),
                               counit=np.array([1]), antipode=np.ones((1, 1), dtype=np.int64))


def split_semisimple(p: int, copies: int = 2) -> AlgebraPresentation:
    """k x ... x k with orthogonal idempotent basis; no Hopf structure."""
    F = FieldSpec(p)
    mult = np.zeros((copies, copies, copies), dtype=np.int64)
    for i in range(copies):
        mult[i, i, i] = 1
    return AlgebraPresentation(f"F{p}^{copies}", F, mult, np.ones(copies, dtype=np.int64))


def build(kind: str, p: int, orders=None) -> AlgebraPresentation:
    if kind in ("group-algebra", "group"):
        A = group_algebra(p, orders or [p])
    elif kind == "sweedler":
        A = sweedler(p)
    else:
        raise InvalidParams(f"unknown algebra kind {kind!r}")
    report = validate(A)
    if not report.ok:
        raise InvalidParams(f"generated algebra fails axioms: {report.failures[:3]}")
    return A
