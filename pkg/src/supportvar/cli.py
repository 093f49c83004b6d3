"""Command-line driver.

Modules are named either by a JSON file or by a short description:

    unit | regular | simple:I | projective:I | omega:N:DESC | L:EXPR[,EXPR...]

where EXPR is a product of ring labels such as ``h1_0*h1_1`` and a comma
list tensors the corresponding Carlson modules together.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import run_all
from .algebra import (AlgebraPresentation, AModule, composition_multiplicities, decompose,
                      is_projective, regular_module, unit_module, validate)
from .builders import build
from .carlson import build_L_zeta, connectedness_report, realize, split_by_variety
from .cohomology import ext_dims, ring_table, yoneda_product
from .errors import (CacheCorrupt, CannotSplit, Disagreement, InvalidParams, RadicalFailure,
                     SupportVarError)
from .growth import (complexity, fpdim_module, fpdims_of_simples, gamma_estimate, load_sequences,
                     variety_dim)
from .resolve import cached_resolution

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.floating):
        return float(x)
    if hasattr(x, "to_json"):
        return _plain(x.to_json())
    return x


def load_algebra(path) -> AlgebraPresentation:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise UsageError(f"no such algebra file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc
    try:
        A = AlgebraPresentation.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: malformed algebra ({exc})") from exc
    report = validate(A)
    if not report.ok:
        raise UsageError(f"{path}: algebra fails axioms: {report.failures[:3]}")
    return A


def ring_class(A, expr: str, depth: int):
    labels = [s.strip() for s in expr.split("*") if s.strip()]
    if not labels:
        raise UsageError(f"empty class expression {expr!r}")
    degrees = []
    for lab in labels:
        try:
            degrees.append(int(lab[1:].split("_")[0]))
        except ValueError as exc:
            raise UsageError(f"bad class label {lab!r}; expected hN_I") from exc
    table = ring_table(A, max(max(degrees), 1), products=False)
    try:
        classes = [table.by_label(lab) for lab in labels]
    except KeyError as exc:
        raise UsageError(f"unknown class {exc.args[0]!r}") from exc
    out = classes[0]
    for c in classes[1:]:
        out = yoneda_product(out, c)
    return out


def resolve_module(A, desc: str, depth: int) -> AModule:
    if desc is None or desc == "unit":
        return unit_module(A)
    if desc == "regular":
        return regular_module(A)
    path = Path(desc)
    if desc.endswith(".json") or path.exists():
        try:
            return AModule.from_json(json.loads(path.read_text(encoding="utf-8")), A)
        except FileNotFoundError as exc:
            raise UsageError(f"no such module file: {desc}") from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{desc}: malformed module ({exc})") from exc
    head, _, rest = desc.partition(":")
    try:
        if head == "simple":
            return A.simples[int(rest)]
        if head == "projective":
            return A.principal[int(rest)].module
        if head == "omega":
            n, _, inner = rest.partition(":")
            from .resolve import resolution_of
            return resolution_of(resolve_module(A, inner or "unit", depth), int(n)).syzygies[int(n)]
        if head == "L":
            return realize([ring_class(A, e, depth) for e in rest.split(",")], A)
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad module description {desc!r}: {exc}") from exc
    raise UsageError(f"bad module description {desc!r}")


def _stamp(args, A=None, X=None) -> dict:
    out = {"command": args.command, "depth": args.depth, "seed": args.seed}
    if A is not None:
        out["algebra"] = A.name
        out["algebra_hash"] = A.content_hash()
    if X is not None:
        out["module_hash"] = X.content_hash()
        out["module_dim"] = X.dim
    return out


# ---------------------------------------------------------------------------
# commands; each returns (report, exit code)


def cmd_gen(args):
    orders = [int(t) for t in args.type.split(",")] if args.type else None
    A = build(args.kind, args.p, orders)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    files = {"algebra": out / "algebra.json"}
    files["algebra"].write_text(json.dumps(A.to_json(), indent=1), encoding="utf-8")
    mods = {"unit": unit_module(A)}
    for i, S in enumerate(A.simples):
        mods[f"simple_{i}"] = S
    for name, M in mods.items():
        files[name] = out / f"{name}.json"
        files[name].write_text(json.dumps(M.to_json()), encoding="utf-8")
    rep = _stamp(args, A)
    rep.update({"dim": A.dim, "validated": True, "files": {k: str(v) for k, v in files.items()}})
    return rep, EXIT_OK


def cmd_resolve(args):
    A = load_algebra(args.algebra)
    X = resolve_module(A, args.module, args.depth)
    res = cached_resolution(X, args.depth, args.cache_dir)
    exact, minimal = res.check_exact(), res.check_minimal()
    rep = _stamp(args, A, X)
    rep.update({"dims": res.dims[:args.depth + 1], "terms": [list(map(int, a)) for a in res.terms[:args.depth + 1]],
                "fpdims": res.fpdims()[:args.depth + 1],
                "exactness_failures": exact, "minimality_failures": minimal})
    return rep, EXIT_OK if not exact and not minimal else EXIT_INVARIANT


def cmd_ext(args):
    A = load_algebra(args.algebra)
    X = resolve_module(A, args.module, args.depth)
    Y = resolve_module(A, args.target, args.depth)
    rep = _stamp(args, A, X)
    rep.update({"target_hash": Y.content_hash(), "ext_dims": ext_dims(X, Y, args.depth)})
    return rep, EXIT_OK


def cmd_ring(args):
    A = load_algebra(args.algebra)
    table = ring_table(A, args.depth)
    rep = _stamp(args, A)
    rep.update(table.to_json())
    return rep, EXIT_OK


def cmd_fpdim(args):
    if args.fixture:
        rep = _stamp(args)
        seqs = load_sequences(args.fixture)
        rep["fixture"] = str(args.fixture)
        rep["gamma"] = {label: gamma_estimate(s).to_json() for label, s in seqs.items()}
        return rep, EXIT_OK
    if not args.algebra:
        raise UsageError("fpdim needs an algebra file or --fixture")
    A = load_algebra(args.algebra)
    rep = _stamp(args, A)
    rep["simples"] = fpdims_of_simples(A)
    if args.module:
        X = resolve_module(A, args.module, args.depth)
        rep.update(_stamp(args, A, X))
        rep["fpdim"] = fpdim_module(X)
    return rep, EXIT_OK


def cmd_complexity(args):
    A = load_algebra(args.algebra)
    X = resolve_module(A, args.module, args.depth)
    res = cached_resolution(X, args.depth, args.cache_dir)
    c = complexity(X, args.depth, resolution=res)
    v = variety_dim(X, args.depth)
    rep = _stamp(args, A, X)
    agree = c.gamma == v.gamma
    rep.update({"complexity": c, "variety_dim": v, "agree": agree, "projective": is_projective(X)})
    return rep, EXIT_OK if agree else EXIT_INVARIANT


def cmd_lzeta(args):
    A = load_algebra(args.algebra)
    zeta = ring_class(A, args.cls, args.depth)
    rec = build_L_zeta(zeta)
    rep = _stamp(args, A, rec.module)
    rep.update({"class": args.cls, "degree": zeta.degree, "omega_dim": rec.omega.dim,
                "composition": composition_multiplicities(rec.module)})
    if args.out:
        Path(args.out).write_text(json.dumps(rec.module.to_json()), encoding="utf-8")
        rep["module_file"] = args.out
        args.out = None
    return rep, EXIT_OK if rec.module.dim == rec.omega.dim - 1 else EXIT_INVARIANT


def cmd_split(args):
    A = load_algebra(args.algebra)
    X = resolve_module(A, args.module, args.depth)
    z1 = ring_class(A, args.z1, args.depth)
    z2 = ring_class(A, args.z2, args.depth)
    rep = _stamp(args, A, X)
    rep.update({"z1": args.z1, "z2": args.z2})
    try:
        sr = split_by_variety(X, z1, z2, args.depth, args.seed)
    except CannotSplit as exc:
        rep.update({"status": "cannot-split", "stage": exc.stage, "reason": str(exc),
                    "diagnostics": exc.diagnostics})
        return rep, EXIT_OK
    rep.update({"status": "split", "summand_dims": [sr.X1.dim, sr.X2.dim],
                "oracle_dims": decompose(X, args.seed).dims})
    rep.update(sr.to_json())
    return rep, EXIT_OK


def cmd_connectedness(args):
    A = load_algebra(args.algebra)
    X = resolve_module(A, args.module, args.depth)
    rep = _stamp(args, A, X)
    rep.update(connectedness_report(X, args.depth, args.seed))
    return rep, EXIT_OK if rep["connected"] else EXIT_INVARIANT


def cmd_corpus(args):
    rep = _stamp(args)
    results = run_all(args.seed)
    rep["criteria"] = results
    rep["passed"] = sum(r["ok"] for r in results)
    rep["total"] = len(results)
    return rep, EXIT_OK if rep["passed"] == rep["total"] else EXIT_INVARIANT


COMMANDS = {
    "gen": cmd_gen, "resolve": cmd_resolve, "ext": cmd_ext, "ring": cmd_ring,
    "fpdim": cmd_fpdim, "complexity": cmd_complexity, "lzeta": cmd_lzeta,
    "split": cmd_split, "connectedness": cmd_connectedness, "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=12, help="resolution depth D (default 12)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None, help="directory for cached resolutions")
    common.add_argument("--out", default=None, help="output file (directory for gen)")
    common.add_argument("--format", choices=["json", "text"], default="json")

    p = argparse.ArgumentParser(prog="supportvar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a bundled example algebra and its simples")
    g.add_argument("kind", choices=["group-algebra", "sweedler"])
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--type", default=None, help="comma-separated cyclic orders, e.g. 2,2")

    def with_algebra(name, help_, module=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("algebra", help="algebra JSON file")
        if module:
            sp.add_argument("--module", default="unit", help="module file or description (default unit)")
        return sp

    with_algebra("resolve", "minimal projective resolution")
    e = with_algebra("ext", "dimensions of Ext^n(X, Y)")
    e.add_argument("--target", default="unit")
    with_algebra("ring", "truncated cohomology ring", module=False)
    f = sub.add_parser("fpdim", parents=[common], help="FP dimensions, or growth of a fixture file")
    f.add_argument("algebra", nargs="?")
    f.add_argument("--module", default=None)
    f.add_argument("--fixture", default=None)
    with_algebra("complexity", "complexity and support variety dimension")
    lz = with_algebra("lzeta", "Carlson module of a cohomology class", module=False)
    lz.add_argument("--class", dest="cls", required=True, help="e.g. h1_0 or h1_0*h1_1")
    s = with_algebra("split", "split a module along two cohomology classes")
    s.add_argument("--z1", required=True)
    s.add_argument("--z2", required=True)
    with_algebra("connectedness", "probe indecomposable summands for splittings")
    sub.add_parser("corpus", parents=[common], help="run the acceptance checks over the corpus")
    return p


def _emit(report: dict, args) -> None:
    report = _plain(report)
    if args.format == "json":
        text = json.dumps(report, indent=1, sort_keys=True)
    else:
        lines = []
        for k in sorted(report):
            v = report[k]
            lines.append(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)}")
        text = "\n".join(lines)
    if args.out and args.command != "gen":
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _error(kind: str, exc: Exception, code: int) -> int:
    payload = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    diag = getattr(exc, "diagnostics", None)
    if diag:
        payload["diagnostics"] = _plain(diag)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.depth < 0 or (args.command in ("complexity", "corpus") and args.depth < 8):
        return _error("usage", UsageError(f"depth {args.depth} too small for {args.command}"), EXIT_USAGE)
    try:
        report, code = COMMANDS[args.command](args)
    except (UsageError, InvalidParams, CacheCorrupt) as exc:
        return _error("input", exc, EXIT_USAGE)
    except (Disagreement, RadicalFailure) as exc:
        return _error("invariant", exc, EXIT_INVARIANT)
    except SupportVarError as exc:
        return _error("invariant", exc, EXIT_INVARIANT)
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
