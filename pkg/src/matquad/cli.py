"""Command-line front end.

Every command writes one JSON document (floats at 17 significant digits)
to stdout or ``--out``.  Exit status: 0 success, 1 numerical failure,
2 usage error.

Function documents (``--F``/``--G``) are either a matrix polynomial
``{"p": 2, "coeffs": [[A_0 row-major], [A_1 row-major], ...]}`` or
entrywise expressions in ``x``
``{"p": 2, "entries": [["exp(x)", "0"], ["0", "abs(x)"]]}``.
Expressions may use numpy's elementary functions and ``pi``; they are
evaluated with Python's ``eval`` so only pass trusted files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import interp, oracle, orthopoly, quad, rootfind
from .errors import MatquadError
from .matpoly import MatrixPolynomial, distance

_EXPR_NAMES = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "exp", "log", "sqrt", "abs", "sinh", "cosh",
                 "tanh", "arctan", "arcsin", "arccos", "sign", "minimum", "maximum")
}
_EXPR_NAMES.update(pi=math.pi, e=math.e)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# documents


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise FloatingPointError(f"non-finite value {x!r} in output")
    s = "%.17g" % x
    # keep floats recognizable as floats
    if all(ch not in s for ch in ".eEn"):
        s += ".0"
    return s


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float printed at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + "  " + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_weight(arg: str) -> orthopoly.WeightSpec:
    if arg in orthopoly.BUILTIN_WEIGHTS:
        return orthopoly.builtin_weight(arg)
    if not Path(arg).exists():
        raise UsageError(
            f"--weight {arg!r} is neither a built-in name "
            f"({', '.join(sorted(orthopoly.BUILTIN_WEIGHTS))}) nor a file"
        )
    try:
        return orthopoly.WeightSpec.from_dict(_read_json(arg))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad weight document {arg}: {exc}") from exc


def function_from_doc(doc: dict):
    """Matrix polynomial or entrywise-expression function from a document."""
    try:
        p = int(doc["p"])
        if "coeffs" in doc:
            return MatrixPolynomial.from_dict(doc)
        entries = doc["entries"]
        if len(entries) != p or any(len(row) != p for row in entries):
            raise ValueError(f"entries must be a {p}x{p} array of strings")
        code = [[compile(str(e), "<entry>", "eval") for e in row] for row in entries]
    except (KeyError, TypeError, ValueError, SyntaxError) as exc:
        raise UsageError(f"bad function document: {exc}") from exc

    def F(x):
        env = dict(_EXPR_NAMES, x=float(x))
        # non-finite values are reported when the output is written
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.array([[float(eval(c, {"__builtins__": {}}, env)) for c in row] for row in code])

    return F


def load_function(path: str | None, p: int):
    if path is None:
        return None
    doc = _read_json(path)
    F = function_from_doc(doc)
    size = F.p if isinstance(F, MatrixPolynomial) else int(doc["p"])
    if size != p:
        raise UsageError(f"{path} has size {size}, weight has p = {p}")
    return F


# ---------------------------------------------------------------------------
# commands


def _spectral(w, n):
    rec = orthopoly.stieltjes_recurrence(w, n)
    return rec, rootfind.zeros_and_rootvectors(rec, n)


def cmd_recurrence(args, w):
    rec = orthopoly.stieltjes_recurrence(w, args.n)
    return rec.to_dict()


def cmd_rule(args, w):
    rec, spec = _spectral(w, args.n)
    rule = quad.gauss_rule(rec, spec)
    doc = rule.to_dict()
    doc["mults"] = list(spec.mults)
    doc["rootvecs"] = [V.tolist() for V in spec.rootvecs]
    return doc


def cmd_interpolate(args, w):
    if args.F is None:
        raise UsageError("interpolate needs --F")
    F = load_function(args.F, w.p)
    rec, spec = _spectral(w, args.n)
    pair = spec.pair
    general = interp.interpolate_general(interp.InterpolationProblem.from_function(pair, F))
    via_v = interp.lagrange_via_V(pair, F)
    ortho = interp.lagrange_orthonormal(spec, rec, F)
    cards = interp.combine(interp.lagrange_cardinals(pair), [F(x) for x in spec.nodes])
    return {
        "n": args.n,
        "nodes": list(spec.nodes),
        "interpolant": general.to_dict(),
        "agreement": {
            "via_V": distance(general, via_v),
            "cardinals": distance(general, cards),
            "orthonormal": distance(general, ortho),
        },
    }


def cmd_integrate(args, w):
    if args.F is None:
        raise UsageError("integrate needs --F")
    F = load_function(args.F, w.p)
    G = load_function(args.G, w.p) if args.G else F
    rec, spec = _spectral(w, args.n)
    rule = quad.gauss_rule(rec, spec)
    value = quad.apply(rule, F, G)
    doc = {"n": args.n, "value": value.tolist()}
    if args.check:
        ref = oracle.integrate_weighted(F, G, w)
        doc["oracle"] = ref.tolist()
        doc["error"] = float(np.linalg.norm(value - ref, 2))
    return doc


def cmd_precision(args, w):
    lmax = args.lmax if args.lmax is not None else 2 * args.n
    if lmax < 2 * args.n:
        raise UsageError(f"--lmax must be at least 2n = {2 * args.n}")
    rec, spec = _spectral(w, args.n)
    rule = quad.gauss_rule(rec, spec)
    tol = args.tol if args.tol is not None else 1e-8
    res = quad.precision_residuals(rule, w, lmax)
    m = quad.degree_of_precision(rule, w, lmax, tol)
    return {"n": args.n, "m": m, "tol": tol, "residuals": res}


def cmd_converge(args, w):
    if args.F is None:
        raise UsageError("converge needs --F")
    F = load_function(args.F, w.p)
    G = load_function(args.G, w.p) if args.G else F
    ns = args.n
    table = quad.convergence_scan(w, F, G, ns)
    return {"table": [{"n": n, "error": e} for n, e in table]}


COMMANDS = {
    "recurrence": cmd_recurrence,
    "rule": cmd_rule,
    "interpolate": cmd_interpolate,
    "integrate": cmd_integrate,
    "precision": cmd_precision,
    "converge": cmd_converge,
}


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matquad", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--weight", required=True, help="built-in name or weight document path")
        if name == "converge":
            sp.add_argument("--n", type=_positive, nargs="+", required=True)
        else:
            sp.add_argument("--n", type=_positive, required=True)
        if name in ("interpolate", "integrate", "converge"):
            sp.add_argument("--F")
        if name in ("integrate", "converge"):
            sp.add_argument("--G")
        if name == "precision":
            sp.add_argument("--lmax", type=_positive)
            sp.add_argument("--tol", type=float)
        if name == "integrate":
            sp.add_argument("--check", action="store_true", help="compare with the oracle")
        sp.add_argument("--out", help="output path (default stdout)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        w = load_weight(args.weight)
        doc = {"command": args.command, **COMMANDS[args.command](args, w)}
        text = dumps(doc) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"matquad: error: {exc}", file=sys.stderr)
        return 2
    except (MatquadError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"matquad: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
