"""Command line: basis / tree / polygon / verify.

Polynomials are given as comma-separated integer coefficients in ascending
order (constant first), as a file containing the same, or as `-` for stdin.
All JSON output serializes big integers as decimal strings.  Exit codes:
0 success, 2 malformed input, 3 input detected reducible over Z.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import basis as bs
from . import intarith as ia
from .sfom import sfom as run_tree
from . import sftypes as st
from . import validate as vd
from .intarith import IntPoly


def _read_poly(source: str) -> IntPoly:
    text = source
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source) as handle:
                text = handle.read()
        except OSError:
            text = source
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        coeffs = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise SystemExit(2) from exc
    f = ia.ptrim(coeffs)
    if ia.pdeg(f) < 2 or f[-1] != 1:
        print("error: need a monic polynomial of degree > 1 "
              "(ascending coefficients)", file=sys.stderr)
        raise SystemExit(2)
    return f


def detect_reducible(f: IntPoly) -> bool:
    """Best-effort reducibility flags: repeated factors and rational roots."""
    if ia.discriminant(f) == 0:
        return True
    c0 = abs(f[0])
    candidates = set(range(-50, 51))
    if 0 < c0 <= 10 ** 6:
        d = 1
        while d * d <= c0:
            if c0 % d == 0:
                candidates.update((d, -d, c0 // d, -(c0 // d)))
            d += 1
    if c0 == 0:
        return True
    for k in candidates:
        if k and ia.peval(f, k) == 0:
            return True
    return False


def cmd_basis(args) -> int:
    f = _read_poly(args.poly)
    if detect_reducible(f):
        print("error: polynomial is reducible over Z", file=sys.stderr)
        return 3
    result = bs.global_basis(f, args.disc, seed=args.seed)
    obj = result.to_obj()
    if args.merged_only:
        obj = {"f": obj["f"], "global": obj["global"]}
    print(json.dumps(obj))
    return 0


def cmd_tree(args) -> int:
    f = _read_poly(args.poly)
    out = run_tree(f, args.modulus)
    if out.n_factor is not None:
        print(json.dumps({"n_factor": str(out.n_factor)}))
        return 0
    print(json.dumps(out.rep.to_obj()))
    return 0


def cmd_polygon(args) -> int:
    f = _read_poly(args.poly)
    out = run_tree(f, args.modulus)
    if out.n_factor is not None:
        print(json.dumps({"n_factor": str(out.n_factor)}))
        return 0
    leaves = out.rep.leaves
    if not (0 <= args.leaf < len(leaves)):
        print("error: no such leaf", file=sys.stderr)
        return 2
    leaf = leaves[args.leaf]
    if not (1 <= args.level <= leaf.order):
        print("error: no such level", file=sys.stderr)
        return 2
    node = leaf.trunc(args.level)
    polygon = st.analyze(node, f).polygon
    print(st.polygon_dump(polygon))
    if args.svg:
        with open(args.svg, "w") as handle:
            handle.write(st.polygon_svg(polygon))
    return 0


def cmd_verify(args) -> int:
    f = _read_poly(args.poly)
    primes = []
    if args.known_primes:
        primes = [int(p) for p in args.known_primes.split(",") if p]
    checks = vd.verify_report(f, args.disc, primes, seed=args.seed)
    print(json.dumps(checks))
    return 0 if all(c["status"] == "pass" for c in checks) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sfom",
        description="integral bases of number fields modulo composite integers")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--poly", required=True,
                       help="ascending integer coefficients, a file, or -")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true",
                       help="accepted for compatibility; output is JSON")

    p = sub.add_parser("basis", help="global integral basis")
    common(p)
    p.add_argument("--disc", type=int, default=None,
                   help="work with this integer instead of disc(f)")
    p.add_argument("--merged-only", action="store_true")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted; moduli are processed sequentially")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("tree", help="serialized tree for one modulus")
    common(p)
    p.add_argument("--modulus", type=int, required=True)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("polygon", help="polygon dump for a leaf level")
    common(p)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--leaf", type=int, default=0)
    p.add_argument("--svg", default=None, help="also write an SVG file here")
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("verify", help="run the oracle suite")
    common(p)
    p.add_argument("--disc", type=int, default=None)
    p.add_argument("--known-primes", default="",
                   help="comma-separated primes for maximality checks")
    p.set_defaults(func=cmd_verify)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
