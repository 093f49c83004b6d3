"""Ext groups, chain-map lifting, Yoneda products and the cohomology ring action.

Cocycles are stored as maps P_n(X) -> Y against the minimal resolution of X.
A map out of a projective summand P(X_i) is pinned down by the image of its
idempotent generator, which lives in f_i Y; all Hom spaces are coordinatized
that way.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import exactfield as ef
from .algebra import AModule, hom_space, tensor_module, unit_module
from .errors import LiftFailure
from .resolve import MinimalResolution, ProjectiveModule, hom_from_generators, resolution_of


class _HomCoords:
    """Coordinates on Hom_A(P, Y) via images of the generators of P."""

    def __init__(self, P: ProjectiveModule, Y: AModule):
        F = Y.field
        self.P, self.Y, self.F = P, Y, F
        per_type = {}
        for i, pi in enumerate(P.algebra.principal):
            B = ef.column_basis(Y.act(pi.idempotent), F) if Y.dim else ef.zeros(0, 0)
            per_type[i] = (B, ef.Solver(B, F) if B.size else None)
        self.gens = P.generators()
        self.bases = [per_type[i] for i, _ in self.gens]
        self.sizes = [b[0].shape[1] if b[0].size else 0 for b in self.bases]
        self.offsets = np.concatenate([[0], np.cumsum(self.sizes)]).astype(int)
        self.dim = int(self.offsets[-1])

    def to_map(self, c) -> np.ndarray:
        if self.Y.dim == 0 or self.P.dim == 0:
            return ef.zeros(self.Y.dim, self.P.dim)
        imgs = []
        for t, (B, _) in enumerate(self.bases):
            blk = np.asarray(c)[self.offsets[t]:self.offsets[t + 1]]
            imgs.append(self.F.matmul(B, blk[:, None])[:, 0] if B.size else np.zeros(self.Y.dim, np.int64))
        return hom_from_generators(self.P, self.Y, imgs)

    def from_map(self, f) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        if self.dim == 0:
            return out
        for t, ((_, g), (B, S)) in enumerate(zip(self.gens, self.bases)):
            if S is None:
                continue
            x = S.solve(self.F.matmul(f, g[:, None])[:, 0])
            if x is None:
                raise ValueError("map does not send generators into the idempotent component")
            out[self.offsets[t]:self.offsets[t + 1]] = x
        return out

    def basis_maps(self) -> list:
        return [self.to_map(e) for e in ef.identity(self.dim)]


class HomComplex:
    """Hom_A(P_*(X), Y) for the minimal resolution P_*(X), built lazily."""

    def __init__(self, res: MinimalResolution, Y: AModule):
        self.res, self.Y, self.F = res, Y, res.field
        self._coords: dict = {}
        self._delta: dict = {}
        self._spaces: dict = {}

    def coords(self, n: int) -> _HomCoords:
        if n not in self._coords:
            self.res.extend(n)
            self._coords[n] = _HomCoords(self.res.projectives[n], self.Y)
        return self._coords[n]

    def delta(self, n: int) -> np.ndarray:
        """delta_n: Hom(P_{n-1}, Y) -> Hom(P_n, Y), f -> f d_n (delta_0 = 0)."""
        if n not in self._delta:
            tgt = self.coords(n)
            if n == 0:
                self._delta[n] = ef.zeros(tgt.dim, 0)
            else:
                src = self.coords(n - 1)
                d = self.res.differentials[n]
                cols = [tgt.from_map(self.F.matmul(f, d)) for f in src.basis_maps()]
                self._delta[n] = np.stack(cols, axis=1) if cols else ef.zeros(tgt.dim, 0)
        return self._delta[n]

    def ext_dim(self, n: int) -> int:
        h = self.coords(n).dim
        return h - ef.rank(self.delta(n + 1), self.F) - ef.rank(self.delta(n), self.F)

    def space(self, n: int) -> "ExtSpace":
        if n not in self._spaces:
            self._spaces[n] = ExtSpace(self, n)
        return self._spaces[n]


_COMPLEXES: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def hom_complex(X: AModule, Y: AModule, depth: int = 0) -> HomComplex:
    res = resolution_of(X, depth)
    per = _COMPLEXES.setdefault(res, {})
    key = id(Y)
    if key not in per or per[key][0]() is not Y:
        per[key] = (weakref.ref(Y), HomComplex(res, Y))
    return per[key][1]


class ExtSpace:
    """Ext^n(X, Y) with a deterministic basis of cocycle representatives."""

    def __init__(self, hc: HomComplex, n: int):
        F = hc.F
        self.hc, self.n, self.F = hc, n, F
        self.X, self.Y = hc.res.module, hc.Y
        self.coords = hc.coords(n)
        Z = ef.kernel_basis(hc.delta(n + 1), F)
        self.boundaries = ef.column_basis(hc.delta(n), F)
        if Z.shape[0] == 0:
            self.reps = ef.zeros(0, self.coords.dim)
        else:
            self.reps = ef.complement_rows(self.boundaries.T, Z, F)
        self.dim = self.reps.shape[0]
        self._solver = ef.Solver(np.concatenate([self.reps.T, self.boundaries], axis=1), F) \
            if self.coords.dim else None
        self._maps = None

    @property
    def rep_maps(self) -> list:
        if self._maps is None:
            self._maps = [self.coords.to_map(r) for r in self.reps]
        return self._maps

    def element(self, coords) -> "ExtClass":
        return ExtClass(self, np.asarray(coords, dtype=np.int64) % self.F.q if self.F.m == 1
                        else np.asarray(coords, dtype=np.int64))

    def basis(self) -> list:
        return [self.element(e) for e in ef.identity(self.dim)]

    def classify(self, f) -> np.ndarray:
        """Class coordinates of a cocycle P_n(X) -> Y."""
        if self.dim == 0:
            return np.zeros(0, dtype=np.int64)
        c = self.coords.from_map(f)
        if np.any(self.F.matmul(self.hc.delta(self.n + 1), c[:, None])):
            raise ValueError("map is not a cocycle")
        x = self._solver.solve(c)
        return x[:self.dim]


@dataclass
class ExtClass:
    space: ExtSpace
    coords: np.ndarray

    @property
    def degree(self) -> int:
        return self.space.n

    @property
    def map(self) -> np.ndarray:
        F = self.space.F
        return ef.lin_comb(self.coords, self.space.rep_maps, F,
                           shape=(self.space.Y.dim, self.space.coords.P.dim))

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        return ExtClass(self.space, self.space.F.add(self.coords, other.coords))

    def scale(self, c) -> "ExtClass":
        return ExtClass(self.space, self.space.F.mul(c, self.coords))

    def __repr__(self):
        return f"ExtClass(deg={self.degree}, coords={self.coords.tolist()})"


def ext_space(X: AModule, Y: AModule, n: int) -> ExtSpace:
    return hom_complex(X, Y, n + 1).space(n)


def ext_dims(X: AModule, Y: AModule, D: int, resolution: Optional[MinimalResolution] = None) -> list:
    """(dim Ext^n(X, Y))_{n <= D}."""
    if resolution is not None and resolution.module is X:
        resolution.extend(D + 1)
        hc = HomComplex(resolution, Y)
    else:
        hc = hom_complex(X, Y, D + 1)
    return [hc.ext_dim(n) for n in range(D + 1)]


def cocycle_representatives(X: AModule, Y: AModule, n: int) -> list:
    return ext_space(X, Y, n).rep_maps


# ---------------------------------------------------------------------------
# chain maps


class _ResolutionTarget:
    def __init__(self, res: MinimalResolution):
        self.res = res
        self._idem: dict = {}

    def module(self, j):
        return self.res.projectives[j].module

    def diff(self, j):
        return self.res.differentials[j]

    def solver(self, j):
        return self.res.solver(j)

    def idempotent(self, j, i):
        key = (j, i)
        if key not in self._idem:
            self._idem[key] = self.module(j).act(self.res.algebra.principal[i].idempotent)
        return self._idem[key]

    def extend(self, j):
        self.res.extend(j)


class _TensorTarget(_ResolutionTarget):
    """P_*(1) (x) X, a projective resolution of X."""

    def __init__(self, res_unit: MinimalResolution, X: AModule):
        super().__init__(res_unit)
        self.X = X
        self._mods: dict = {}
        self._diffs: dict = {}
        self._solvers: dict = {}

    def module(self, j):
        if j not in self._mods:
            self._mods[j] = tensor_module(self.res.projectives[j].module, self.X)
        return self._mods[j]

    def diff(self, j):
        if j not in self._diffs:
            self._diffs[j] = ef.kron(self.res.differentials[j], ef.identity(self.X.dim), self.X.field)
        return self._diffs[j]

    def solver(self, j):
        if j not in self._solvers:
            self._solvers[j] = ef.Solver(self.diff(j), self.X.field)
        return self._solvers[j]


def _lift(P: ProjectiveModule, target, C, j: int) -> np.ndarray:
    """A map P -> C_j whose composite with C's j-th differential is ``target``."""
    F = P.module.field
    T = C.module(j)
    if P.dim == 0:
        return ef.zeros(T.dim, 0)
    S = C.solver(j)
    imgs = []
    for i, g in P.generators():
        y = F.matmul(target, g[:, None])[:, 0]
        q = S.solve(y) if T.dim else np.zeros(0, dtype=np.int64)
        if q is None:
            raise LiftFailure(f"no lift at level {j}")
        imgs.append(F.matmul(C.idempotent(j, i), q[:, None])[:, 0] if T.dim else q)
    return hom_from_generators(P, T, imgs)


def lift_chain_map(zeta, n: int, src: MinimalResolution, dst, levels: int) -> list:
    """[zeta_0, ..., zeta_L] with zeta_j: P_{n+j}(X) -> Q_j lifting the cocycle ``zeta``.

    ``dst`` is a MinimalResolution of the target (or a tensor-resolution wrapper).
    """
    if isinstance(dst, MinimalResolution):
        dst = _ResolutionTarget(dst)
    F = src.field
    src.extend(n + levels)
    dst.extend(levels)
    out = [_lift(src.projectives[n], zeta, dst, 0)]
    for j in range(1, levels + 1):
        prev = F.matmul(out[-1], src.differentials[n + j])
        out.append(_lift(src.projectives[n + j], prev, dst, j))
    return out


def check_chain_map(chain, n: int, src: MinimalResolution, dst, zeta) -> bool:
    if isinstance(dst, MinimalResolution):
        dst = _ResolutionTarget(dst)
    F = src.field
    if not np.array_equal(F.matmul(dst.diff(0), chain[0]), np.asarray(zeta) % F.q if F.m == 1 else zeta):
        return False
    for j in range(1, len(chain)):
        if not np.array_equal(F.matmul(dst.diff(j), chain[j]),
                              F.matmul(chain[j - 1], src.differentials[n + j])):
            return False
    return True


def _same_module(A: AModule, B: AModule) -> bool:
    return A is B or (A.dim == B.dim and np.array_equal(A.action, B.action))


def yoneda_product(zeta: ExtClass, theta: ExtClass) -> ExtClass:
    """zeta . theta for zeta in Ext^m(Y, Z), theta in Ext^n(X, Y)."""
    if not _same_module(zeta.space.X, theta.space.Y):
        raise ValueError("classes are not composable")
    m, n = zeta.degree, theta.degree
    X = theta.space.X
    resX = theta.space.hc.res
    resY = zeta.space.hc.res
    chain = lift_chain_map(theta.map, n, resX, resY, m)
    target = hom_complex(X, zeta.space.Y, m + n + 1)
    if target.res is not resX:
        target = HomComplex(resX, zeta.space.Y)
    space = target.space(m + n)
    prod = zeta.space.F.matmul(zeta.map, chain[m])
    return space.element(space.classify(prod))


# ---------------------------------------------------------------------------
# the cohomology ring H(C) and its action


def in_ring(A, n: int) -> bool:
    """Degree n belongs to H(C): every degree in characteristic 2, even ones otherwise."""
    return A.field.char == 2 or n % 2 == 0


@dataclass
class CohomologyTable:
    algebra: object
    depth: int
    parity_mode: str
    spaces: dict
    ring_constants: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)

    @property
    def hilbert(self) -> list:
        return [self.spaces[n].dim if n in self.spaces else 0 for n in range(self.depth + 1)]

    def generators_by_degree(self) -> dict:
        return {n: [self.labels[(n, a)] for a in range(self.spaces[n].dim)]
                for n in sorted(self.spaces)}

    def basis_class(self, n: int, a: int) -> ExtClass:
        return self.spaces[n].basis()[a]

    def by_label(self, label: str) -> ExtClass:
        for (n, a), lab in self.labels.items():
            if lab == label:
                return self.basis_class(n, a)
        raise KeyError(label)

    def product(self, zeta: ExtClass, theta: ExtClass) -> ExtClass:
        return yoneda_product(zeta, theta)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "algebra_hash": self.algebra.content_hash(),
            "depth": self.depth,
            "parity_mode": self.parity_mode,
            "hilbert": self.hilbert,
            "generators": self.generators_by_degree(),
            "ring_constants": {f"{self.labels[a]}*{self.labels[b]}": [int(x) for x in v]
                               for (a, b), v in sorted(self.ring_constants.items())},
        }


def ring_table(A, D: int = 12, products: bool = True) -> CohomologyTable:
    """Truncation of H(C) = Ext(1, 1) (even part off characteristic 2) up to degree D."""
    one = unit_module(A)
    hc = hom_complex(one, one, D + 1)
    mode = "full" if A.field.char == 2 else "even"
    spaces = {n: hc.space(n) for n in range(D + 1) if in_ring(A, n)}
    labels = {(n, a): f"h{n}_{a}" for n, sp in spaces.items() for a in range(sp.dim)}
    table = CohomologyTable(A, D, mode, spaces, labels=labels)
    if products:
        for (n, b) in labels:
            theta = spaces[n].basis()[b]
            levels = D - n
            chain = lift_chain_map(theta.map, n, hc.res, hc.res, levels)
            for (m, a) in labels:
                if m + n > D:
                    continue
                zeta = spaces[m].basis()[a]
                prod = A.field.matmul(zeta.map, chain[m])
                table.ring_constants[((m, a), (n, b))] = spaces[m + n].classify(prod)
    return table


def check_graded_commutativity(table: CohomologyTable) -> list:
    """Basis pairs violating zeta theta = (-1)^{mn} theta zeta."""
    F = table.algebra.field
    bad = []
    for (a, b), v in table.ring_constants.items():
        w = table.ring_constants.get((b, a))
        if w is None:
            continue
        sign = (-1) ** (a[0] * b[0])
        if not np.array_equal(v, F.mul(sign % F.char, w) if F.m == 1 else w):
            bad.append((table.labels[a], table.labels[b]))
    return bad


_COMPARISON: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def comparison_map(X: AModule, levels: int) -> tuple:
    """Chain map P_*(X) -> P_*(1) (x) X lifting the identity of X, with its target complex."""
    entry = _COMPARISON.get(X)
    A = X.algebra
    if entry is None:
        res_unit = resolution_of(unit_module(A), levels)
        entry = {"target": _TensorTarget(res_unit, X), "maps": []}
        _COMPARISON[X] = entry
    resX = resolution_of(X, levels)
    T, maps = entry["target"], entry["maps"]
    T.extend(levels)
    F = X.field
    while len(maps) <= levels:
        j = len(maps)
        if j == 0:
            maps.append(_lift(resX.projectives[0], resX.augmentation, T, 0))
        else:
            prev = F.matmul(maps[-1], resX.differentials[j])
            maps.append(_lift(resX.projectives[j], prev, T, j))
    return maps[:levels + 1], T


def phi(zeta: ExtClass, X: AModule) -> ExtClass:
    """phi_X(zeta) = (zeta (x) id_X) composed with the comparison map, in Ext^n(X, X)."""
    n = zeta.degree
    F = X.field
    alpha, _ = comparison_map(X, n)
    cocycle = F.matmul(ef.kron(zeta.map, ef.identity(X.dim), F), alpha[n])
    space = ext_space(X, X, n)
    return space.element(space.classify(cocycle))


def act(zeta: ExtClass, X: AModule, Y: AModule, D: int, via: str = "X") -> dict:
    """Matrices of theta -> theta . phi_X(zeta) (or phi_Y(zeta) . theta) on Ext^m(X, Y), m <= D - n.

    Entry m maps class coordinates in degree m to coordinates in degree m + n.
    """
    n = zeta.degree
    F = X.field
    out = {}
    if D - n < 0:
        return out
    hc = hom_complex(X, Y, D + 1)
    resX = hc.res
    if via == "X":
        p = phi(zeta, X)
        chain = lift_chain_map(p.map, n, resX, resX, D - n)
        for m in range(D - n + 1):
            src, dst = hc.space(m), hc.space(m + n)
            cols = [dst.classify(F.matmul(th, chain[m])) for th in src.rep_maps]
            out[m] = np.stack(cols, axis=1) if cols else ef.zeros(dst.dim, 0)
    elif via == "Y":
        p = phi(zeta, Y)
        resY = resolution_of(Y, n)
        for m in range(D - n + 1):
            src, dst = hc.space(m), hc.space(m + n)
            cols = []
            for th in src.rep_maps:
                chain = lift_chain_map(th, m, resX, resY, n)
                cols.append(dst.classify(F.matmul(p.map, chain[n])))
            out[m] = np.stack(cols, axis=1) if cols else ef.zeros(dst.dim, 0)
    else:
        raise ValueError("via must be 'X' or 'Y'")
    return out


def check_action_signs(zeta: ExtClass, X: AModule, Y: AModule, D: int) -> list:
    """Degrees m where phi_Y(zeta) theta != (-1)^{mn} theta phi_X(zeta)."""
    n = zeta.degree
    F = X.field
    left = act(zeta, X, Y, D, via="Y")
    right = act(zeta, X, Y, D, via="X")
    bad = []
    for m in right:
        sign = ((-1) ** (m * n)) % F.char
        if not np.array_equal(left[m], F.mul(sign, right[m])):
            bad.append(m)
    return bad


def annihilates(zeta: ExtClass, X: AModule, D: int) -> bool:
    """zeta . Ext^{<= D - |zeta|}(X, X) = 0 (a statement about the window only)."""
    if X.dim == 0:
        return True
    return all(not np.any(M) for M in act(zeta, X, X, D).values())


def annihilator_truncation(X: AModule, D: int, table: Optional[CohomologyTable] = None) -> list:
    """Labels of H(C) basis classes of degree <= D/2 annihilating Ext(X, X) up to degree D."""
    A = X.algebra
    table = table or ring_table(A, D, products=False)
    out = []
    for (n, a), label in sorted(table.labels.items()):
        if n == 0 or 2 * n > D:
            continue
        if annihilates(table.basis_class(n, a), X, D):
            out.append(label)
    return out


def ext_vanishes(X: AModule, Y: AModule, D: int) -> dict:
    """Which of 'Ext^n = 0 for all n >= 1' and 'Ext^n = 0 for n >> 0' hold in the window."""
    dims = ext_dims(X, Y, D)
    tail = max(2, D // 4)
    if all(d == 0 for d in dims[1:]):
        verdict = "vanishes-from-1"
    elif all(d == 0 for d in dims[-tail:]):
        verdict = "vanishes-eventually-only"
    else:
        verdict = "nonvanishing"
    return {"verdict": verdict, "dims": dims, "depth": D,
            "red_flag": verdict == "vanishes-eventually-only"}


def multiplicity_check(M: AModule, D: int) -> list:
    """Per degree: (resolution multiplicities, ext dims against simples, dim Hom(Omega^n M, X_i))."""
    A = M.algebra
    res = resolution_of(M, D + 1)
    rows = []
    simples = A.simples
    ext = [ext_dims(M, S, D) for S in simples]
    for n in range(D + 1):
        a = [int(x) for x in res.terms[n]]
        e = [ext[i][n] for i in range(len(simples))]
        h = [len(hom_space(res.syzygies[n], S)) for S in simples]
        rows.append((a, e, h))
    return rows
