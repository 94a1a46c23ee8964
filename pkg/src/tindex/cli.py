"""Command-line front end.

Exit codes: 0 success, 1 internal error or failed verification, 2 divergent
lattice sum (a ray certificate is printed), 3 infeasible input or schema error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import identities as ids
from .lattice import DivergentError, TruncationPolicy, index_sum_detailed, manifold_input
from .moves import PatternError, three_two, two_three
from .nzdata import FIXTURES, GluingData, IndexInput, RankError, SchemaError, index_input, load, serialize
from .qseries import TruncatedQSeries, half2
from .structures import (generalized_angle_structure, index_structure, semi_angle_structure,
                         strict_angle_structure)
from .tetindex import tet_index, verify_pentagon

EXIT_OK, EXIT_INTERNAL, EXIT_DIVERGENT, EXIT_INFEASIBLE = 0, 1, 2, 3


class Infeasible(Exception):
    pass


def order_arg(text: str) -> str:
    """Orders are given as "n" or "n/2"."""
    try:
        half2(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"order must be an integer or half-integer, got {text!r}")
    return text


def series_json(s: TruncatedQSeries) -> dict:
    return {"offset2": s.offset2, "coeffs": list(s.coeffs), "order2": s.order2, "text": str(s)}


def emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _locate(path: str, fixtures: Optional[str]) -> Path:
    p = Path(path)
    if not p.exists():
        alt = Path(fixtures or FIXTURES) / path
        if alt.exists():
            p = alt
        elif alt.with_suffix(".json").exists():
            p = alt.with_suffix(".json")
    if not p.exists():
        raise Infeasible(f"no such file: {path}")
    return p


def resolve(path: str, fixtures: Optional[str]) -> GluingData:
    return load(_locate(path, fixtures))


def resolve_input(path: str, fixtures: Optional[str]):
    """Gluing data, or a bare {"A", "B", "nu"} index input."""
    p = _locate(path, fixtures)
    try:
        d = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(d, dict) and {"A", "B", "nu"} <= set(d):
        return IndexInput.make(d["A"], d["B"], d["nu"])
    return load(p)


# --- subcommands ----------------------------------------------------------------

def cmd_tet_index(args) -> int:
    s = tet_index(args.m, args.e, args.order)
    emit(args, {"m": args.m, "e": args.e, "series": series_json(s)}, str(s))
    return EXIT_OK


def cmd_index(args) -> int:
    src = resolve_input(args.file, args.fixtures)
    if isinstance(src, IndexInput):
        # charges are per tetrahedron here
        M = src
        mt = args.m if args.m is not None else [0] * M.s
        et = args.e if args.e is not None else [0] * M.s
    else:
        r = src.num_cusps
        m = args.m if args.m is not None else [0] * r
        e = args.e if args.e is not None else [0] * r
        M, mt, et = manifold_input(src, args.quad, m, e, args.rows)
    policy = TruncationPolicy(args.order, args.mode, args.window, args.radius)
    res = index_sum_detailed(M, mt, et, policy)
    payload = {"series": series_json(res.series), "mode": res.mode, "heuristic": res.heuristic,
               "radius": res.radius, "terms": len(res.terms)}
    text = str(res.series)
    if res.heuristic:
        text += f"\n(shell mode, radius {res.radius}: truncation is heuristic)"
    emit(args, payload, text)
    return EXIT_OK


def _witness(w):
    return None if w is None else w.to_json()


def cmd_structures(args) -> int:
    g = resolve(args.file, args.fixtures)
    gen = generalized_angle_structure(g)
    semi = semi_angle_structure(g)
    strict = strict_angle_structure(g)
    M = index_input(g)
    rep = index_structure(M, full=args.full)
    payload = {
        "name": g.name,
        "generalized_angle": gen is not None,
        "semi_angle": semi is not None,
        "strict_angle": strict is not None,
        "index_structure": rep.exists,
        "quads_checked": rep.checked,
        "lp_solved": len(rep.witnesses) + len(rep.failures),
        "witnesses": {"generalized": _witness(gen), "semi": _witness(semi), "strict": _witness(strict)},
        "failures": [c.to_json() for _, c in sorted(rep.failures.items())],
    }
    lines = [f"{k}: {str(payload[k]).lower()}" for k in
             ("generalized_angle", "semi_angle", "strict_angle", "index_structure")]
    if rep.failures:
        lines.append(f"failing quads: {len(rep.failures)}; first ray: {rep.ray.to_json()}")
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _grid(lo: int, hi: int, n: int):
    return itertools.product(range(lo, hi + 1), repeat=n)


def cmd_verify(args) -> int:
    lo, hi = args.range
    first = None
    checked = 0
    if args.identity == "pentagon":
        for m1, m2, e1, e2 in _grid(lo, hi, 4):
            checked += 1
            if not verify_pentagon(m1, m2, e1, e2, args.order).ok:
                first = {"m1": m1, "m2": m2, "e1": e1, "e2": e2}
                break
    elif args.identity == "triality":
        for m, e in _grid(lo, hi, 2):
            checked += 1
            r1, r2 = ids.triality_residuals(m, e, args.order)
            if not (r1.is_zero() and r2.is_zero() and ids.parity_ok(m, e, args.order)):
                first = {"m": m, "e": e}
                break
    elif args.identity == "recursions":
        for m, e in _grid(lo, hi, 2):
            checked += 1
            bad = next((n for n in ("rec1", "rec2", "rec1a", "rec2a")
                        if not ids.recursion_residual(n, m, e, args.order).is_zero()), None)
            if bad:
                first = {"relation": bad, "m": m, "e": e}
                break
        if first is None:
            for e in range(lo, hi + 1):
                checked += 1
                if not ids.recursion_residual("recI2", 0, e, args.order).is_zero():
                    first = {"relation": "recI2", "e": e}
                    break
    elif args.identity == "dilog":
        window = (-args.x_window, args.x_window)
        for m in range(lo, hi + 1):
            checked += 1
            bad = [x for x, r in ids.dilog_coefficients_residual(m, window, args.order) if not r.is_zero()]
            if bad:
                first = {"m": m, "e": bad[0]}
                break
        if first is None:
            for name, ok in ids.five_identities(args.x_window, args.order):
                checked += 1
                if not ok:
                    first = {"identity": name}
                    break
    ok = first is None
    payload = {"identity": args.identity, "ok": ok, "checked": checked, "first_failure": first}
    text = f"{args.identity}: ok ({checked} cases)" if ok else f"{args.identity}: FAILED at {first}"
    emit(args, payload, text)
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_move(args) -> int:
    g = resolve(args.file, args.fixtures)
    fn = two_three if args.kind == "two-three" else three_two
    out = fn(g, tuple(args.site), tuple(args.align) if args.align else None)
    sys.stdout.write(serialize(out).decode())    # gluing data JSON in both modes
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tindex", description="3D index toolkit")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--fixtures", help="directory searched for --file names")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tet-index", help="tetrahedron index I(m, e)")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--e", type=int, required=True)
    t.add_argument("--order", type=order_arg, required=True)
    t.set_defaults(func=cmd_tet_index)

    i = sub.add_parser("index", help="3D index of a triangulation")
    i.add_argument("--file", required=True)
    i.add_argument("--m", type=int, nargs="*", help="meridian charges, one per cusp")
    i.add_argument("--e", type=int, nargs="*", help="longitude charges, one per cusp")
    i.add_argument("--order", type=order_arg, required=True)
    i.add_argument("--quad", type=int, nargs="*", help="S-rotation count per tetrahedron")
    i.add_argument("--rows", type=int, nargs="*", help="edge rows to keep")
    i.add_argument("--mode", choices=("auto", "certified", "shell"), default="auto")
    i.add_argument("--window", type=int, default=4, help="empty shells before stopping")
    i.add_argument("--radius", type=int, help="shell mode: fixed box radius")
    i.set_defaults(func=cmd_index)

    s = sub.add_parser("structures", help="angle and index structure report")
    s.add_argument("--file", required=True)
    s.add_argument("--full", action="store_true", help="certificates for every failing quad")
    s.set_defaults(func=cmd_structures)

    v = sub.add_parser("verify", help="check identities of the tetrahedron index")
    v.add_argument("identity", choices=("pentagon", "triality", "recursions", "dilog"))
    v.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), default=(-2, 2))
    v.add_argument("--order", type=order_arg, default="10")
    v.add_argument("--x-window", type=int, default=8)
    v.set_defaults(func=cmd_verify)

    mv = sub.add_parser("move", help="2-3 or 3-2 move; prints the new gluing data")
    mv.add_argument("kind", choices=("two-three", "three-two"))
    mv.add_argument("--file", required=True)
    mv.add_argument("--site", type=int, nargs="+", required=True)
    mv.add_argument("--align", type=int, nargs="*")
    mv.set_defaults(func=cmd_move)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DivergentError as exc:
        payload = {"error": "divergent", "quad": list(exc.quad),
                   "ray": exc.ray.to_json() if exc.ray else None}
        emit(args, payload, f"divergent: {exc}")
        return EXIT_DIVERGENT
    except (Infeasible, SchemaError, RankError, PatternError, ValueError, IndexError) as exc:
        emit(args, {"error": type(exc).__name__, "message": str(exc)}, f"error: {exc}")
        return EXIT_INFEASIBLE
    except Exception as exc:   # pragma: no cover
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
