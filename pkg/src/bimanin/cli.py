"""Command-line surface: tables, bases, verification suites, sections, cusps.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .groupalgebra import ga2, ideal_generators, thm3_identity_suite
from .homology import (
    order1_b0_check, theta1, theta2_decompose, theta2_vanishes,
    triangle36_kernel,
)
from .linalg import row_space, span_equal
from .polyaction import (
    PolyError, act_poly, format_poly, haberland_pairing, parse_poly,
)
from .psl2 import (
    ID, INF, S, T, U, U2, ZERO,
    Cusp, CuspError, cusp_distance, cusp_height, cusp_path, format_cusp,
    parse_cusp, word,
)
from .spaces import CSV_HEADER, SpaceComputer, SpaceError

HEAVY_WEIGHT = 24


def _computer(args) -> SpaceComputer:
    return SpaceComputer(cache_dir=getattr(args, "cache_dir", None))


def _emit(text: str, args):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _print_stats(sc: SpaceComputer, args):
    if getattr(args, "stats", False):
        print("cache_hits=%d cache_misses=%d" % (
            sc.stats["cache_hits"], sc.stats["cache_misses"]), file=sys.stderr)


# -------------------------------------------------------------------- table

def _parse_pairs(args):
    pairs = []
    if args.pairs:
        for chunk in args.pairs:
            for item in chunk.split(";"):
                try:
                    w1, w2 = (int(v) for v in item.split(","))
                except ValueError:
                    raise SpaceError(f"cannot parse pair {item!r}")
                pairs.append((w1, w2))
    elif args.w_max is not None:
        if args.w_max % 2 or args.w_max < 2:
            raise SpaceError("--w-max must be an even integer >= 2")
        for w1 in range(2, args.w_max + 1, 2):
            for w2 in range(w1, args.w_max + 1, 2):
                pairs.append((w1, w2))
    else:
        raise SpaceError("one of --pairs or --w-max is required")
    for w1, w2 in pairs:
        if w1 % 2 or w2 % 2 or w1 < 2 or w2 < 2:
            raise SpaceError(f"weights ({w1}, {w2}) must be even and >= 2")
        if max(w1, w2) > HEAVY_WEIGHT and not args.allow_heavy:
            raise SpaceError(
                f"pair ({w1}, {w2}) exceeds weight {HEAVY_WEIGHT}; "
                "pass --allow-heavy to compute it")
    return pairs


def cmd_table(args) -> int:
    sc = _computer(args)
    pairs = _parse_pairs(args)
    workers = args.threads if args.threads and args.threads > 1 else 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: sc.table_row(*p), pairs))
    else:
        rows = [sc.table_row(*p) for p in pairs]
    if args.format == "json":
        payload = [dict(zip(CSV_HEADER.split(","), (
            r.w1, r.w2, r.dim_w_pair, r.dim_e_pair, r.gap_pair,
            r.dim_w_imp, r.dim_e_imp, r.gap_imp))) for r in rows]
        _emit(json.dumps(payload, indent=2), args)
    elif args.format == "text":
        header = CSV_HEADER.split(",")
        widths = [max(len(h), 4) for h in header]
        lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
        for r in rows:
            vals = r.csv().split(",")
            lines.append("  ".join(v.rjust(w) for v, w in zip(vals, widths)))
        _emit("\n".join(lines), args)
    else:
        _emit("\n".join([CSV_HEADER] + [r.csv() for r in rows]), args)
    _print_stats(sc, args)
    return 0


# -------------------------------------------------------------------- basis

def cmd_basis(args) -> int:
    sc = _computer(args)
    w1 = args.w1
    w2 = args.w2 if args.w2 is not None else 0
    parity = {"even": "+", "odd": "-", "both": None}[args.parity]
    if max(w1, w2) > HEAVY_WEIGHT + 10 and not args.allow_heavy:
        raise SpaceError("weights this large need --allow-heavy")
    if args.space == "W1":
        basis = sc.w_space(w1)
        w2_out = 0
    else:
        if args.w2 is None:
            raise SpaceError(f"--space {args.space} needs --w2")
        if args.space == "W2":
            basis = sc.annihilator(w1, w2, "I2", parity)
        elif args.space == "ID":
            basis = sc.annihilator(w1, w2, "ID", parity)
        elif args.space == "E":
            basis = sc.e_space(w1, w2, parity)
        elif args.space == "Wminus":
            basis = sc.w_minus(w1, w2)
        else:
            raise SpaceError(f"unknown space {args.space!r}")
        w2_out = w2
    from .polyaction import PolyVec
    from .spaces import basis_to_json
    if args.format == "json":
        _emit(json.dumps(basis_to_json(
            basis, w1, w2_out,
            {"W1": "I1", "W2": "I2", "ID": "ID", "E": "E",
             "Wminus": "I2minus"}[args.space],
            args.parity), indent=2), args)
    else:
        lines = [format_poly(PolyVec.from_flat(w1, w2_out, row))
                 for row in basis.rows]
        _emit("\n".join(lines) if lines else "(empty basis)", args)
    _print_stats(sc, args)
    return 0


# ------------------------------------------------------------------- verify

def _suite_identities(corrupt: bool):
    return thm3_identity_suite(corrupt=corrupt)


def _suite_theta2(corrupt: bool):
    report = []
    gens = ideal_generators("I2")
    if corrupt:
        bad = gens[1] + ga2((2, ID, ID))
        gens = [gens[0], bad, gens[2], gens[3]]
    for i, gen in enumerate(gens, 1):
        ok = theta2_vanishes(gen)
        report.append({"check": f"theta2/I2-generator-{i}",
                       "status": "pass" if ok else "fail",
                       "witness": "vanishes in H1(P2)" if ok
                       else "open class boundary"})
    rng = random.Random(2024)
    for n in range(3):
        g1 = T ** rng.randrange(-2, 3) * (S if n % 2 else U)
        g2 = U2 if n == 2 else S * T ** rng.randrange(-2, 3)
        shift = ga2((g1, g2))
        ok = all(theta2_vanishes(shift * gen) for gen in gens)
        report.append({"check": f"theta2/left-translate-{n + 1}",
                       "status": "pass" if ok else "fail",
                       "witness": f"shift ({word(g1)}, {word(g2)})"})
    single = ga2((T, S))
    report.append({"check": "theta2/single-pair-is-open",
                   "status": "pass" if not theta2_vanishes(single) else "fail",
                   "witness": "(T, S) alone must not vanish"})
    return report


def _suite_triangles36(corrupt: bool):
    result = triangle36_kernel()
    report = [
        {"check": "triangles36/kernel-rank",
         "status": "pass" if result["kernel_rank"] > 0 else "fail",
         "witness": f"rank {result['kernel_rank']} on {result['support']} triangles"},
        {"check": "triangles36/generators-in-kernel",
         "status": "pass" if result["generator_members"] else "fail",
         "witness": "all four published generators vanish"},
        {"check": "triangles36/lattice-equal",
         "status": "pass" if result["lattice_equal"] and not corrupt else "fail",
         "witness": f"{result['translates_used']} translates"
                    f"{' (widened)' if result['widened'] else ''}"},
    ]
    order1 = order1_b0_check()
    report.append({
        "check": "triangles36/order1-B0-lattice",
        "status": "pass" if order1["lattice_equal"] else "fail",
        "witness": f"{order1['edges']} edges, kernel rank {order1['kernel_rank']}"})
    return report


def _suite_properties(corrupt: bool):
    from fractions import Fraction
    from .polyaction import PolyVec, act1_matrix, mat_mul
    report = []
    rng = random.Random(99)

    ok = True
    for w in (2, 4, 6, 8):
        ident = act1_matrix(ID, w)
        if mat_mul(act1_matrix(S, w), act1_matrix(S, w)) != ident:
            ok = False
        mu = act1_matrix(U, w)
        if mat_mul(mu, mat_mul(mu, mu)) != ident:
            ok = False
    report.append({"check": "properties/torsion-S2-U3",
                   "status": "pass" if ok else "fail",
                   "witness": "weights 2..8"})

    ok = True
    for _ in range(20):
        w = rng.choice([2, 4, 6])
        p = PolyVec.from_flat(w, 0, [rng.randrange(-5, 6) for _ in range(w + 1)])
        q = PolyVec.from_flat(w, 0, [rng.randrange(-5, 6) for _ in range(w + 1)])
        for g in (S, U, T):
            if haberland_pairing(act_poly(g, p), act_poly(g, q)) != \
                    haberland_pairing(p, q):
                ok = False
    report.append({"check": "properties/pairing-invariance",
                   "status": "pass" if ok else "fail",
                   "witness": "gamma in {S, U, T}, 20 random pairs"})

    ok = True
    cusps = [Cusp(p, q) for p in range(-4, 5) for q in range(0, 5)
             if (p, q) != (0, 0)]
    for a in cusps:
        for b in cusps:
            d = cusp_distance(a, b)
            if d != cusp_distance(b, a) or (d == 0) != (a == b):
                ok = False
            if cusp_distance(S.act(a), S.act(b)) != d:
                ok = False
    report.append({"check": "properties/metric-axioms",
                   "status": "pass" if ok else "fail",
                   "witness": "symmetry, separation, S-invariance on |p|,|q|<=4"})

    ok = True
    for n in range(10):
        a = cusps[rng.randrange(len(cusps))]
        b = cusps[rng.randrange(len(cusps))]
        g = T ** rng.randrange(-2, 3) * (U if n % 2 else S)
        try:
            theta2_decompose(a, b, g)
        except Exception:
            ok = False
    report.append({"check": "properties/theta2-decompose-selfcheck",
                   "status": "pass" if ok else "fail",
                   "witness": "10 random diagonal triangles"})

    sc = SpaceComputer()
    try:
        sc.w_minus(4, 4)
        ok = True
    except SpaceError:
        ok = False
    report.append({"check": "properties/Wminus-is-eps-image",
                   "status": "pass" if ok and not corrupt else "fail",
                   "witness": "(4,4)"})

    basis = sc.annihilator(2, 4, "I2")
    flip_ok = all(
        basis.contains([x if (i // 5 + i % 5) % 2 == 0 else -x
                        for i, x in enumerate(row)])
        for row in basis.rows)
    report.append({"check": "properties/W-eps-eps-stable",
                   "status": "pass" if flip_ok else "fail",
                   "witness": "(2,4) basis sign-flip stays in span"})

    chain = theta1(ga2 if False else __import__(
        "bimanin.groupalgebra", fromlist=["ga1"]).ga1(ID, S))
    report.append({"check": "properties/theta1-manin-relations",
                   "status": "pass" if chain == {} else "fail",
                   "witness": "theta1(1+S) = 0"})
    return report


SUITES = {
    "identities": _suite_identities,
    "theta2": _suite_theta2,
    "triangles36": _suite_triangles36,
    "properties": _suite_properties,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    report = []
    for name in names:
        report.extend(SUITES[name](args.corrupt_generator))
    failed = [e for e in report if e["status"] != "pass"]
    if args.format == "json":
        _emit(json.dumps(report, indent=2), args)
    else:
        lines = [f"{e['status'].upper():4s} {e['check']} - {e['witness']}"
                 for e in report]
        lines.append(f"{len(report) - len(failed)}/{len(report)} checks passed")
        _emit("\n".join(lines), args)
    if failed:
        print(f"first failure: {failed[0]['check']} ({failed[0]['witness']})",
              file=sys.stderr)
        return 1
    return 0


# ------------------------------------------------------------------ section

def cmd_section(args) -> int:
    sc = _computer(args)
    w = args.w1 + args.w2
    poly = parse_poly(args.poly, w, 0)
    if not sc.w_space(w).contains(poly.flatten()):
        print("not a period-relation polynomial", file=sys.stderr)
        return 1
    q = sc.section_id(poly, args.w1, args.w2)
    _emit(format_poly(q), args)
    return 0


# --------------------------------------------------------------------- cusp

def cmd_cusp(args) -> int:
    if args.path:
        a, b = (parse_cusp(t) for t in args.path)
        chain = cusp_path(a, b)
        lines = []
        for g in chain:
            lines.append(f"[{g.a} {g.b}; {g.c} {g.d}]  {word(g)}  : "
                         f"{format_cusp(g.act(INF))} -> {format_cusp(g.act(ZERO))}")
        _emit("\n".join(lines) if lines else "(empty chain)", args)
    elif args.distance:
        a, b = (parse_cusp(t) for t in args.distance)
        _emit(str(cusp_distance(a, b)), args)
    elif args.height is not None:
        _emit(str(cusp_height(parse_cusp(args.height))), args)
    else:
        raise CuspError("one of --path, --distance, --height is required")
    return 0


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bimanin",
        description="Exact spaces cut out by order-1 and order-2 Manin "
                    "relations on polynomial modules over PSL2(Z).")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cache=True):
        if cache:
            p.add_argument("--cache-dir", help="basis cache directory "
                           "(default: $BIMANIN_CACHE)")
            p.add_argument("--stats", action="store_true",
                           help="print cache counters to stderr")
        p.add_argument("--out", help="write output to a file")

    p = sub.add_parser("table", help="dimension/gap table rows")
    p.add_argument("--pairs", action="append",
                   help="weight pair 'w1,w2'; repeat or join with ';'")
    p.add_argument("--w-max", type=int, help="all even pairs up to this weight")
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--allow-heavy", action="store_true",
                   help="allow weights above 24 (minutes of work)")
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("basis", help="print a canonical space basis")
    p.add_argument("--space", required=True,
                   choices=("W1", "W2", "ID", "E", "Wminus"))
    p.add_argument("--w1", type=int, required=True)
    p.add_argument("--w2", type=int)
    p.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--allow-heavy", action="store_true")
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", required=True,
                   choices=("identities", "theta2", "triangles36",
                            "properties", "all"))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--corrupt-generator", action="store_true",
                   help=argparse.SUPPRESS)
    common(p, cache=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("section", help="rational section into V[I_D]")
    p.add_argument("--w1", type=int, required=True)
    p.add_argument("--w2", type=int, required=True)
    p.add_argument("--poly", required=True,
                   help="order-1 polynomial of weight w1+w2 (in Z or X)")
    common(p)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("cusp", help="cusp graph queries")
    p.add_argument("--path", nargs=2, metavar=("A", "B"))
    p.add_argument("--distance", nargs=2, metavar=("A", "B"))
    p.add_argument("--height", metavar="A")
    common(p, cache=False)
    p.set_defaults(func=cmd_cusp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CuspError, PolyError, SpaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
