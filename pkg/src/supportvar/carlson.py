"""Carlson modules L_zeta and the variety-splitting machinery built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import exactfield as ef
from .algebra import (AModule, composition_multiplicities, decompose, direct_sum, is_projective,
                      module_isomorphic, projective_free_part, quotient_module, stably_isomorphic,
                      submodule, tensor_module, unit_module, zero_module)
from .cohomology import (ExtClass, act, annihilates, ext_space, ext_vanishes, in_ring,
                         ring_table, yoneda_product)
from .errors import (CannotSplit, Disagreement, NotFound, OddDegree, PreconditionError,
                     ZeroClass, ZeroProduct)
from .growth import complexity, variety_dim
from .resolve import resolution_of


@dataclass
class LZetaRecord:
    zeta: ExtClass
    module: AModule
    embedding: np.ndarray  # columns: basis of L_zeta inside Omega^n(1)
    omega: AModule
    zeta_hat: np.ndarray

    @property
    def degree(self) -> int:
        return self.zeta.degree


def _check_ring_class(zeta: ExtClass):
    A = zeta.space.X.algebra
    if zeta.degree < 1:
        raise ValueError("classes must have positive degree")
    if not in_ring(A, zeta.degree):
        raise OddDegree(f"degree {zeta.degree} is odd in characteristic {A.field.char}")
    if zeta.is_zero():
        raise ZeroClass("zero class")


def build_L_zeta(zeta: ExtClass) -> LZetaRecord:
    """Kernel of the epimorphism Omega^n(1) -> 1 representing zeta."""
    _check_ring_class(zeta)
    F = zeta.space.F
    n = zeta.degree
    res = zeta.space.hc.res
    res.extend(n)
    omega = res.syzygies[n]
    cover = res.covers[n]
    sol = ef.solve(cover.T, zeta.map.T, F)
    if sol is None:
        raise ZeroClass("cocycle does not factor through the syzygy")
    zeta_hat = sol.T
    if not np.any(zeta_hat):
        raise ZeroClass("representing map is zero")
    K = ef.kernel_basis(zeta_hat, F).T
    L = submodule(omega, K) if K.shape[1] else zero_module(omega.algebra)
    return LZetaRecord(zeta, L, K, omega, zeta_hat)


def realize(zetas, algebra=None) -> AModule:
    """L_{zeta_1} (x) ... (x) L_{zeta_t}; the empty product is the unit object."""
    zetas = list(zetas)
    if not zetas:
        if algebra is None:
            raise ValueError("an empty product needs the algebra")
        return unit_module(algebra)
    X = build_L_zeta(zetas[0]).module
    for z in zetas[1:]:
        X = tensor_module(X, build_L_zeta(z).module)
    return X


def ring_power(zeta: ExtClass, s: int) -> ExtClass:
    out = zeta
    for _ in range(s - 1):
        out = yoneda_product(out, zeta)
    return out


def _tail_injective(zeta: ExtClass, X: AModule, D: int) -> bool:
    mats = act(zeta, X, X, D)
    lo = D // 2
    window = [m for m in mats if m >= lo] or list(mats)
    if not window:
        return False
    F = X.field
    return all(ef.rank(mats[m], F) == mats[m].shape[1] for m in window)


def check_tensor_variety(zeta: ExtClass, X: AModule, D: int = 12, predicted: Optional[int] = None) -> dict:
    L = build_L_zeta(zeta).module
    Y = tensor_module(L, X)
    vY = variety_dim(Y, D)
    vX = variety_dim(X, D)
    injective = _tail_injective(zeta, X, D) if X.dim else False
    drop_ok = (not injective) or (vY.gamma == vX.gamma - 1)
    pred_ok = predicted is None or vY.gamma == predicted
    return {"variety_dim": vY.gamma, "variety_dim_X": vX.gamma, "predicted": predicted,
            "injective_tail": injective, "projective": is_projective(Y), "depth": D,
            "ok": bool(drop_ok and pred_ok)}


def _cartan(A) -> np.ndarray:
    return np.array([composition_multiplicities(pi.module) for pi in A.principal], dtype=np.int64)


def _projective_multiplicities(A, comp) -> Optional[list]:
    """Nonnegative integer p with sum_i p_i [P_i] = comp, or None."""
    C = _cartan(A).astype(float)
    p, *_ = np.linalg.lstsq(C.T, np.asarray(comp, dtype=float), rcond=None)
    q = np.rint(p).astype(np.int64)
    if np.any(q < 0) or not np.array_equal(q @ _cartan(A), np.asarray(comp, dtype=np.int64)):
        return None
    return [int(x) for x in q]


def check_product_ses(z1: ExtClass, z2: ExtClass, D: int = 12) -> dict:
    """Bookkeeping for 0 -> Omega^{|z1|}(L_z2) -> L_{z1 z2} (+) P -> L_z1 -> 0."""
    prod = yoneda_product(z1, z2)
    if prod.is_zero():
        raise ZeroProduct("product vanishes in the truncation")
    A = z1.space.X.algebra
    L1 = build_L_zeta(z1).module
    L2 = build_L_zeta(z2).module
    L12 = build_L_zeta(prod).module
    r = z1.degree
    om = resolution_of(L2, r).syzygies[r] if L2.dim else zero_module(A)
    diff = (composition_multiplicities(om) + composition_multiplicities(L1)
            - composition_multiplicities(L12))
    P = _projective_multiplicities(A, diff) if np.all(diff >= 0) else None
    dimP = sum(p * pi.module.dim for p, pi in zip(P, A.principal)) if P is not None else None
    ok = P is not None and om.dim + L1.dim == L12.dim + dimP
    return {"dims": {"omega_L2": om.dim, "L1": L1.dim, "L12": L12.dim, "P": dimP},
            "projective_multiplicities": P, "degree": r, "depth": D, "ok": bool(ok)}


@dataclass
class PhiVerdict:
    zero: bool
    by_action: bool
    by_stable_iso: bool
    depth: int
    seed: int

    def __bool__(self):
        return self.zero


def phi_is_zero(zeta: ExtClass, X: AModule, D: int = 12, seed: int = 0) -> PhiVerdict:
    """phi_X(zeta) = 0, decided from the action and from L_zeta (x) X ~ Omega^1 X (+) Omega^n X."""
    _check_ring_class(zeta)
    n = zeta.degree
    m1 = annihilates(zeta, X, D)
    L = build_L_zeta(zeta).module
    res = resolution_of(X, n)
    rhs = direct_sum(res.syzygies[1], res.syzygies[n])
    lhs = tensor_module(L, X) if L.dim and X.dim else zero_module(X.algebra)
    m2 = bool(stably_isomorphic(lhs, rhs, seed))
    if m1 != m2:
        raise Disagreement("action and stable-isomorphism verdicts differ",
                           {"by_action": m1, "by_stable_iso": m2, "degree": n,
                            "dims": [lhs.dim, rhs.dim], "depth": D, "seed": seed})
    return PhiVerdict(m1, m1, m2, D, seed)


def pushout_K(record: LZetaRecord) -> AModule:
    """K_zeta: pushout of 1 <- Omega^n(1) -> P_{n-1}."""
    zeta = record.zeta
    n = zeta.degree
    res = zeta.space.hc.res
    F = zeta.space.F
    A = res.algebra
    one = unit_module(A)
    P = res.projectives[n - 1].module
    S = direct_sum(one, P)
    emb = res.embeddings[n]
    W = np.concatenate([record.zeta_hat, F.neg(emb)], axis=0)
    K, _ = quotient_module(S, W)
    return K


@dataclass
class Reduction:
    zeta_label: str
    zeta: ExtClass
    reduced: AModule
    variety_dim_before: int
    variety_dim_after: int
    depth: int


def find_reducing_element(X: AModule, D: int = 12, seed: int = 0) -> Reduction:
    """Search H(C) basis classes by degree for one acting injectively on the Ext tail of X."""
    before = variety_dim(X, D)
    if not before.gamma:
        raise PreconditionError("needs variety dimension at least 1")
    table = ring_table(X.algebra, D, products=False)
    for (n, a), label in sorted(table.labels.items()):
        if n == 0 or 2 * n > D:
            continue
        zeta = table.basis_class(n, a)
        if not _tail_injective(zeta, X, D):
            continue
        rec = build_L_zeta(zeta)
        K = projective_free_part(tensor_module(pushout_K(rec), X), seed)
        after = variety_dim(K, D)
        return Reduction(label, zeta, K, before.gamma, after.gamma, D)
    raise NotFound(f"no reducing class of degree <= {D // 2}")


# ---------------------------------------------------------------------------
# splitting by variety


@dataclass
class SplitReport:
    X: AModule
    witnesses: tuple
    exponents: tuple
    X1: AModule
    X2: AModule
    certificate: np.ndarray
    complexities: tuple
    evidence: dict = field(default_factory=dict)
    seed: int = 0
    depth: int = 12

    def to_json(self) -> dict:
        return {"dims": [self.X.dim, self.X1.dim, self.X2.dim],
                "exponents": list(self.exponents),
                "complexities": list(self.complexities),
                "evidence": self.evidence, "seed": self.seed, "depth": self.depth}


def _annihilating_power(zeta: ExtClass, X: AModule, D: int, smax: int):
    p = zeta
    for s in range(1, smax + 1):
        if p.degree > D:
            break
        if annihilates(p, X, D):
            return s, p
        p = yoneda_product(p, zeta)
    return None, None


def split_by_variety(X: AModule, z1: ExtClass, z2: ExtClass, D: int = 12, seed: int = 0) -> SplitReport:
    """Split X as X1 (+) X2 with varieties inside Z(z1) and Z(z2)."""
    _check_ring_class(z1)
    _check_ring_class(z2)
    smax = max(1, D // (2 * (z1.degree + z2.degree)))
    evidence: dict = {}

    # powers of z1 z2 annihilating Ext(X, X)
    base = yoneda_product(z1, z2)
    if base.is_zero():
        raise CannotSplit("annihilation", "z1 z2 vanishes in the truncation")
    s, prod = _annihilating_power(base, X, D, smax)
    if s is None:
        raise CannotSplit("annihilation", f"no power <= {smax} of z1 z2 annihilates Ext(X, X) to degree {D}",
                          {"depth": D, "max_exponent": smax})
    w1, w2 = ring_power(z1, s), ring_power(z2, s)
    evidence["exponent"] = s
    evidence["product_degree"] = prod.degree

    # auxiliary objects L_{w1} (x) X and Omega^r(L_{w2}) (x) X
    L1 = build_L_zeta(w1).module
    L2 = build_L_zeta(w2).module
    r = w1.degree
    Om = resolution_of(L2, r).syzygies[r] if L2.dim else zero_module(X.algebra)
    Y1 = projective_free_part(tensor_module(L1, X), seed) if L1.dim else zero_module(X.algebra)
    Y2 = projective_free_part(tensor_module(Om, X), seed) if Om.dim else zero_module(X.algebra)
    evidence["auxiliary_dims"] = [Y1.dim, Y2.dim]
    if Y1.dim and Y2.dim:
        van = ext_vanishes(Y1, Y2, min(D, 6))
        evidence["ext1_aux"] = van["verdict"]
        if van["dims"][1] != 0:
            raise CannotSplit("ext-obstruction", "Ext^1 between the auxiliary objects is nonzero", van)

    # group the indecomposable summands of X by which power annihilates them
    try:
        dec = decompose(X, seed)
    except Exception as exc:
        raise CannotSplit("decomposition", str(exc)) from exc
    g1, g2, labels = [], [], []
    F = X.field
    for S, B in zip(dec.summands, dec.embeddings):
        if is_projective(S):
            g1.append((S, B))
            labels.append("projective")
        elif annihilates(w1, S, D):
            g1.append((S, B))
            labels.append("z1")
        elif annihilates(w2, S, D):
            g2.append((S, B))
            labels.append("z2")
        else:
            raise CannotSplit("grouping", f"summand of dim {S.dim} is annihilated by neither power",
                              {"summand_dims": dec.dims})
    evidence["summand_groups"] = labels

    def assemble(group):
        if not group:
            return zero_module(X.algebra), ef.zeros(X.dim, 0)
        return direct_sum(*[S for S, _ in group]), np.concatenate([B for _, B in group], axis=1)

    X1, B1 = assemble(g1)
    X2, B2 = assemble(g2)
    iso = module_isomorphic(direct_sum(X1, X2), X, seed)
    if not iso:
        raise CannotSplit("certification", f"X is not isomorphic to X1 + X2 ({iso.reason})")
    cx = []
    for Xi in (X1, X2):
        cx.append(complexity(Xi, D).gamma if Xi.dim else 0)
    return SplitReport(X, (z1, z2), (s, s), X1, X2, iso.certificate, tuple(cx), evidence, seed, D)


def probe_pairs(A, D: int = 12, max_degree: int = 2) -> list:
    """Pairs of distinct H(C) basis classes of degree <= max_degree, with labels."""
    table = ring_table(A, max(max_degree, 1), products=False)
    classes = [(lab, table.basis_class(n, a)) for (n, a), lab in sorted(table.labels.items())
               if 1 <= n <= max_degree]
    return list(combinations(classes, 2))


def connectedness_report(X: AModule, D: int = 12, seed: int = 0) -> dict:
    """Try to split every non-projective indecomposable summand of X along probe pairs."""
    dec = decompose(X, seed)
    pairs = probe_pairs(X.algebra, D)
    rows = []
    violations = []
    for idx, S in enumerate(dec.summands):
        row = {"summand": idx, "dim": S.dim, "projective": is_projective(S), "probes": []}
        if not row["projective"]:
            for (la, a), (lb, b) in pairs:
                try:
                    rep = split_by_variety(S, a, b, D, seed)
                except CannotSplit as exc:
                    row["probes"].append({"pair": [la, lb], "result": "cannot-split", "stage": exc.stage})
                    continue
                nontrivial = rep.X1.dim > 0 and rep.X2.dim > 0
                row["probes"].append({"pair": [la, lb], "result": "split" if nontrivial else "one-sided",
                                      "dims": [rep.X1.dim, rep.X2.dim]})
                if nontrivial:
                    violations.append((idx, la, lb))
        rows.append(row)
    return {"summand_dims": dec.dims, "summands": rows, "violations": violations,
            "connected": not violations, "depth": D, "seed": seed}
