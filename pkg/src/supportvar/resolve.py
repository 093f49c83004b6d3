"""Projective covers, syzygies and minimal projective resolutions."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import weakref
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import exactfield as ef
from .algebra import (AModule, AlgebraPresentation, direct_sum, module_radical,
                      submodule, top_multiplicities, zero_module)
from .errors import CacheCorrupt

DEFAULT_DEPTH = 12


@dataclass
class ProjectiveModule:
    """``P = (+)_i P(X_i)^{a_i}`` with its block layout.

    ``blocks`` lists ``(i, start)`` for every summand copy in order.
    """

    algebra: AlgebraPresentation
    multiplicities: np.ndarray
    module: AModule
    blocks: list

    @property
    def dim(self) -> int:
        return self.module.dim

    def generators(self) -> list:
        """``(i, vector)`` for the idempotent generator of each summand copy."""
        out = []
        for i, start in self.blocks:
            pi = self.algebra.principal[i]
            v = np.zeros(self.dim, dtype=np.int64)
            v[start:start + pi.module.dim] = pi.generator
            out.append((i, v))
        return out


def free_projective(A: AlgebraPresentation, mults) -> ProjectiveModule:
    mults = np.asarray(mults, dtype=np.int64)
    parts = []
    blocks = []
    off = 0
    for i, a in enumerate(mults):
        P = A.principal[i].module
        for _ in range(int(a)):
            parts.append(P)
            blocks.append((i, off))
            off += P.dim
    module = direct_sum(*parts) if parts else zero_module(A)
    return ProjectiveModule(A, mults, module, blocks)


def hom_from_generators(P: ProjectiveModule, target: AModule, images) -> np.ndarray:
    """The homomorphism P -> target sending the t-th generator to ``images[t]``.

    Each image must lie in ``f_i * target`` for the generator's idempotent f_i.
    """
    F = target.field
    A = P.algebra
    out = ef.zeros(target.dim, P.dim)
    for (i, start), y in zip(P.blocks, images):
        V = A.principal[i].basis
        cols = [F.matmul(target.act(v), np.asarray(y)[:, None])[:, 0] for v in V]
        out[:, start:start + V.shape[0]] = np.stack(cols, axis=1)
    return out


def projective_cover(M: AModule):
    """``(P, epi, multiplicities)`` with epi: P -> M restricting to an iso on tops."""
    A = M.algebra
    F = M.field
    tops = top_multiplicities(M)
    P = free_projective(A, tops)
    if M.dim == 0:
        return P, ef.zeros(0, 0), tops
    R = module_radical(M)
    images = []
    for i, pi in enumerate(A.principal):
        if not tops[i]:
            continue
        E = ef.column_basis(M.act(pi.idempotent), F)
        chosen = ef.complement_rows(R.T, E.T, F)
        if chosen.shape[0] != tops[i]:
            raise AssertionError("top multiplicity mismatch while building cover")
        images.extend(list(chosen))
    epi = hom_from_generators(P, M, images)
    if ef.rank(epi, F) != M.dim:
        raise AssertionError("projective cover map is not surjective")
    return P, epi, tops


def syzygy(M: AModule) -> AModule:
    """Kernel of the projective cover, Omega^1(M)."""
    P, epi, _ = projective_cover(M)
    if P.dim == 0:
        return zero_module(M.algebra)
    K = ef.kernel_basis(epi, M.field).T
    return submodule(P.module, K)


def syzygy_along(P: AModule, epi) -> AModule:
    """Kernel of an arbitrary epimorphism from a projective (possibly non-minimal)."""
    K = ef.kernel_basis(epi, P.field).T
    return submodule(P, K)


class MinimalResolution:
    """Lazily extended prefix of the minimal projective resolution of a module.

    ``projectives[n]`` is P_n, ``differentials[n]`` is d_n: P_n -> P_{n-1}
    (``differentials[0]`` is the augmentation P_0 -> M), ``syzygies[n]`` is
    Omega^n(M) and ``embeddings[n]`` its inclusion into P_{n-1}.
    """

    def __init__(self, module: AModule, depth: int = 0):
        self.module = module
        self.algebra = module.algebra
        self.field = module.field
        self.projectives: list = []
        self.differentials: list = []
        self.covers: list = []  # P_n -> Omega^n
        self.syzygies: list = [module]
        self.embeddings: list = [ef.identity(module.dim)]
        self.extend(depth)

    @property
    def depth(self) -> int:
        return len(self.projectives) - 1

    def extend(self, depth: int) -> "MinimalResolution":
        while self.depth < depth:
            n = self.depth + 1
            omega = self.syzygies[n]
            P, epi, _ = projective_cover(omega)
            self.projectives.append(P)
            self.covers.append(epi)
            self.differentials.append(self.field.matmul(self.embeddings[n], epi))
            if P.dim:
                K = ef.kernel_basis(epi, self.field).T
            else:
                K = ef.zeros(0, 0)
            self.embeddings.append(K)
            self.syzygies.append(submodule(P.module, K) if P.dim else zero_module(self.algebra))
        return self

    def solver(self, n: int) -> ef.Solver:
        """Cached elimination for solving ``d_n x = y``."""
        cache = self.__dict__.setdefault("_solvers", {})
        if n not in cache:
            self.extend(n)
            cache[n] = ef.Solver(self.differentials[n], self.field)
        return cache[n]

    @property
    def augmentation(self) -> np.ndarray:
        return self.differentials[0]

    @property
    def terms(self) -> list:
        return [P.multiplicities for P in self.projectives]

    @property
    def dims(self) -> list:
        return [P.dim for P in self.projectives]

    def fpdims(self) -> list:
        from .growth import fpdims_of_principal
        fp = fpdims_of_principal(self.algebra)
        out = []
        for a in self.terms:
            total = fp[0] * 0
            for ai, f in zip(a, fp):
                total = total + f * int(ai)
            out.append(total)
        return out

    def check_exact(self) -> list:
        """Degrees where exactness fails (empty when exact)."""
        F = self.field
        bad = []
        aug = self.augmentation
        if ef.rank(aug, F) != self.module.dim:
            bad.append(0)
        for n in range(1, self.depth + 1):
            d_prev = self.differentials[n - 1]
            d_n = self.differentials[n]
            if np.any(F.matmul(d_prev, d_n)):
                bad.append(n)
                continue
            kernel_dim = d_prev.shape[1] - ef.rank(d_prev, F)
            if ef.rank(d_n, F) != kernel_dim:
                bad.append(n)
        return bad

    def check_minimal(self) -> list:
        """Degrees n >= 1 where im d_n is not inside rad(P_{n-1})."""
        F = self.field
        bad = []
        for n in range(1, self.depth + 1):
            d = self.differentials[n]
            if d.size == 0 or not np.any(d):
                continue
            R = module_radical(self.projectives[n - 1].module)
            r = R.shape[1]
            if ef.rank(np.concatenate([R, d], axis=1), F) != r:
                bad.append(n)
        return bad

    # serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        F = self.field

        def mat(M):
            return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
                    "entries": [F.to_plain(x) for x in np.asarray(M).reshape(-1)]}

        return {
            "manifest": {
                "algebra": self.algebra.content_hash(),
                "module": self.module.content_hash(),
                "depth": self.depth,
            },
            "terms": [[int(x) for x in a] for a in self.terms],
            "differentials": [mat(d) for d in self.differentials],
            "embeddings": [mat(K) for K in self.embeddings[1:]],
        }

    @classmethod
    def from_json(cls, obj: dict, module: AModule) -> "MinimalResolution":
        A = module.algebra
        F = module.field
        man = obj["manifest"]
        if man["algebra"] != A.content_hash() or man["module"] != module.content_hash():
            raise CacheCorrupt("manifest hashes do not match the inputs")

        def mat(o):
            vals = [F.element(x) for x in o["entries"]]
            if len(vals) != o["rows"] * o["cols"]:
                raise CacheCorrupt("matrix entry count mismatch")
            return np.array(vals, dtype=np.int64).reshape(o["rows"], o["cols"])

        res = cls.__new__(cls)
        res.module = module
        res.algebra = A
        res.field = F
        res.projectives = [free_projective(A, a) for a in obj["terms"]]
        res.differentials = [mat(d) for d in obj["differentials"]]
        res.embeddings = [ef.identity(module.dim)] + [mat(K) for K in obj["embeddings"]]
        depth = int(man["depth"])
        if not (len(res.projectives) == len(res.differentials) == depth + 1 == len(res.embeddings) - 1):
            raise CacheCorrupt("inconsistent degree counts")
        res.covers = []
        res.syzygies = [module]
        for n in range(depth + 1):
            K = res.embeddings[n]
            d = res.differentials[n]
            P = res.projectives[n]
            if d.shape != (K.shape[0], P.dim):
                raise CacheCorrupt(f"differential {n} has wrong shape")
            pi = ef.solve(K, d, F) if K.size else ef.zeros(0, P.dim)
            if pi is None:
                raise CacheCorrupt(f"differential {n} does not factor through the syzygy")
            res.covers.append(pi)
            Knext = res.embeddings[n + 1]
            try:
                res.syzygies.append(submodule(P.module, Knext) if P.dim else zero_module(A))
            except ValueError as exc:
                raise CacheCorrupt(f"syzygy {n + 1} is not a submodule") from exc
        if res.check_exact() or res.check_minimal():
            raise CacheCorrupt("cached resolution fails exactness or minimality")
        for n in range(depth + 1):
            if ef.rank(res.covers[n], F) != res.covers[n].shape[0] or \
                    (res.embeddings[n + 1].shape[1] != res.projectives[n].dim - ef.rank(res.covers[n], F)):
                raise CacheCorrupt(f"degree {n} cover/kernel inconsistent")
        return res


def minimal_resolution(M: AModule, depth: int = DEFAULT_DEPTH) -> MinimalResolution:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return MinimalResolution(M, depth)


_SHARED: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def resolution_of(M: AModule, depth: int = DEFAULT_DEPTH) -> MinimalResolution:
    """Process-wide resolution of M, extended on demand and reused."""
    res = _SHARED.get(M)
    if res is None:
        res = _SHARED[M] = MinimalResolution(M, depth)
    return res.extend(depth)


# ---------------------------------------------------------------------------
# cache


def cache_key(M: AModule) -> str:
    h = hashlib.sha256(f"{M.algebra.content_hash()}:{M.content_hash()}".encode()).hexdigest()
    return h[:24]


def store(cache_dir, res: MinimalResolution) -> Path:
    """Atomically write a resolution to ``cache_dir``."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{cache_key(res.module)}.json"
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        json.dump(res.to_json(), fh)
    os.replace(tmp, path)
    return path


def load(cache_dir, M: AModule) -> Optional[MinimalResolution]:
    """Load and verify a cached resolution; ``None`` when absent."""
    path = Path(cache_dir) / f"{cache_key(M)}.json"
    if not path.exists():
        return None
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CacheCorrupt(f"{path.name}: unreadable JSON") from exc
    try:
        return MinimalResolution.from_json(obj, M)
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheCorrupt(f"{path.name}: {exc}") from exc


def cached_resolution(M: AModule, depth: int, cache_dir=None) -> MinimalResolution:
    """Resolution to ``depth``, reusing and extending a cached prefix when available."""
    if cache_dir is None:
        return minimal_resolution(M, depth)
    res = load(cache_dir, M)
    if res is None:
        res = minimal_resolution(M, depth)
        store(cache_dir, res)
    elif res.depth < depth:
        res.extend(depth)
        store(cache_dir, res)
    return res


def padded_cover_kernel(M: AModule, extra, seed: int = 0) -> AModule:
    """Kernel of a deliberately non-minimal cover P(M) (+) Q -> M.

    Q is the projective with multiplicity vector ``extra``; it maps to M by a
    random homomorphism so the cover stays surjective but not minimal.
    """
    A = M.algebra
    F = M.field
    P, epi, tops = projective_cover(M)
    Q = free_projective(A, extra)
    rng = np.random.default_rng(seed)
    imgs = []
    for i, _ in Q.generators():
        if M.dim == 0:
            imgs.append(np.zeros(0, dtype=np.int64))
            continue
        v = F.random_matrix(rng, M.dim, 1)[:, 0]
        imgs.append(F.matmul(M.act(A.principal[i].idempotent), v[:, None])[:, 0])
    qmap = hom_from_generators(Q, M, imgs) if Q.dim else ef.zeros(M.dim, 0)
    total = direct_sum(P.module, Q.module)
    big = np.concatenate([epi.reshape(M.dim, P.dim), qmap], axis=1)
    return syzygy_along(total, big)
