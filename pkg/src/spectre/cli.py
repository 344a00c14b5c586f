"""Batch command-line front end.

Subcommands mirror the library modules and emit deterministic JSON (or
CSV where a table is the natural shape).  Exit codes: 0 success, 1 check
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from fractions import Fraction

import numpy as np


def _threads_cap():
    """SPECTRE_THREADS caps internal parallelism (the numeric kernels are
    single-threaded; the cap is forwarded to BLAS-style pools)."""
    raw = os.environ.get("SPECTRE_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise SystemExit(2)
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    return n


def _emit(payload, fmt="json"):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif fmt == "csv":
        rows = payload.get("csv_rows")
        if rows is None:
            raise SystemExit(2)
        w = csv.writer(sys.stdout, lineterminator="\n")
        for row in rows:
            w.writerow(row)
    else:
        raise SystemExit(2)


# ----------------------------------------------------------------------
# subcommands

def cmd_clifford_table(args):
    from .clifford import find_real_structure
    rows = []
    for p in range(1, 9):
        rs = find_real_structure(p)
        rows.append({"p": p, "eps": rs.eps, "eps_prime": rs.eps_prime,
                     "eps_double_prime": rs.eps_double_prime})
    _emit({"table": rows}, args.format)
    return 0


def cmd_hochschild(args):
    from . import univdiff as ud
    rng = random.Random(args.seed)
    results = {}
    for model in (ud.CircleModel(), ud.DiagonalModel()):
        checks = {"b_squared": True, "homotopy": True, "cycles": True,
                  "leibniz": True, "pi_b_zero": True}
        for deg in (1, 2, 3):
            for _ in range(args.chains):
                c = ud.random_chain(model, deg, rng)
                if deg >= 2 and not ud.hochschild_b(
                        ud.hochschild_b(c)).is_zero():
                    checks["b_squared"] = False
                lhs = ud.hochschild_b(ud.delta(c)) + \
                    ud.delta(ud.hochschild_b(c))
                if not (lhs == c - ud.sigma_op(c)):
                    checks["homotopy"] = False
                if deg >= 2:
                    cyc = ud.hochschild_b(ud.random_chain(model, deg, rng))
                    if not (cyc - ud.sigma_op(cyc)
                            == ud.hochschild_b(ud.delta(cyc))):
                        checks["cycles"] = False
                if not ud.window_is_zero(
                        ud.represent(ud.hochschild_b(c)), model):
                    checks["pi_b_zero"] = False
        for _ in range(args.chains):
            w = ud.random_chain(model, 1, rng, nterms=2)
            r = ud.random_chain(model, 1, rng, nterms=2)
            lhs = ud.delta(ud.chain_mul(w, r))
            rhs = ud.chain_mul(ud.delta(w), r) + \
                ud.chain_mul(w, ud.delta(r)).scale(Fraction(-1))
            if not (lhs == rhs):
                checks["leibniz"] = False
        results[model.name()] = checks
    ok = all(v for checks in results.values() for v in checks.values())
    _emit({"models": results, "pass": ok, "seed": args.seed}, args.format)
    return 0 if ok else 1


def cmd_dixmier(args):
    from . import dixmier as dx
    if args.csv:
        runs = []
        with open(args.csv, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if row and not row[0].startswith("#"):
                    runs.append((float(row[0]), int(row[1])))
        values = np.array([v for v, _ in runs])
        counts = np.array([c for _, c in runs], dtype=np.int64)

        def fn(n):
            if counts.sum() < n:
                raise ValueError("CSV runs shorter than the schedule")
            return values, counts
        seq = dx.SingularValueSeq(fn, name=args.csv)
    elif args.seq:
        if args.seq not in dx.BUILTINS:
            print(f"unknown sequence {args.seq!r}; known: "
                  f"{sorted(dx.BUILTINS)}", file=sys.stderr)
            return 2
        seq = dx.BUILTINS[args.seq]()
    else:
        print("dixmier needs --seq or --csv", file=sys.stderr)
        return 2
    schedule = [int(x) for x in args.schedule.split(",")]
    est = dx.dixmier_estimate(seq, schedule)
    payload = est.as_dict()
    payload["sequence"] = seq.name
    payload["csv_rows"] = [["N", "partial_ratio"]] + [
        [n, r] for n, r in zip(est.schedule, est.ratios)]
    if args.format == "json":
        payload.pop("csv_rows")
    _emit(payload, args.format)
    return 0


def cmd_volume(args):
    from . import model_triples as mt
    schedule = [int(x) for x in args.schedule.split(",")]
    est, expected = mt.volume_check(args.model, p=args.p, schedule=schedule)
    ratio = est.value / expected
    payload = {"model": args.model, "p": args.p or
               (1 if args.model == "circle" else 2),
               "estimate": est.value, "error_bar": est.error_bar,
               "c_p_vol": expected, "ratio": ratio,
               "schedule": schedule}
    payload["csv_rows"] = [["key", "value"]] + \
        [[k, v] for k, v in payload.items() if k != "csv_rows"]
    if args.format == "json":
        payload.pop("csv_rows")
    _emit(payload, args.format)
    return 0 if abs(ratio - 1) < 0.02 else 1


def cmd_distance(args):
    from . import model_triples as mt
    verts = set()
    edges = []
    with open(args.graph, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["u", "v", "length"]:
            print("graph CSV needs header u,v,length", file=sys.stderr)
            return 2
        for row in reader:
            if not row:
                continue
            u, v, l = row[0].strip(), row[1].strip(), float(row[2])
            verts.add(u)
            verts.add(v)
            edges.append((u, v, l))
    g = mt.MetricGraph(sorted(verts), edges)
    try:
        d = mt.connes_distance(g, args.src, args.dst, cross_validate=True)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    _emit({"from": args.src, "to": args.dst, "distance": d}, args.format)
    return 0


def cmd_wres(args):
    from . import wodzicki as w
    from .model_triples import c_p
    p = args.p
    parity = args.parity or ("even" if p % 2 == 0 else "odd")
    torsion = args.torsion == "on"
    raw = w.integrand(p, parity=parity)
    inv = w.cosphere_integrate(raw, p)
    action = w.gravity_action(p, torsion=torsion,
                              path=parity if p > 2 else None)
    integrand_terms = [
        {"spow": str(spow), "tens": _fmt_factors(tens),
         "mat": _fmt_factors(mat),
         "coeff": {"re": str(c.re), "im": str(c.im)}}
        for (spow, tens, mat), c in sorted(
            raw.terms.items(), key=lambda kv: str(kv[0]))]
    payload = {
        "p": p, "parity": parity, "torsion": torsion,
        "integrand": integrand_terms,
        "cosphere_invariant": {k: str(v) for k, v in
                               inv.as_dict().items()},
        "coeff_R": {"rational_of_c_p": str(action.coeff_R),
                    "decimal": float(action.coeff_R) * c_p(p)},
        "coeff_t2": {"rational_of_c_p": str(action.coeff_t2),
                     "decimal": float(action.coeff_t2) * c_p(p)},
    }
    _emit(payload, args.format)
    return 0


def _fmt_factors(factors):
    return ["{}({})".format(f[0], ",".join(map(str, f[1:])))
            for f in factors]


# ----------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="spectre",
        description="numeric and symbolic checks for commutative "
                    "spectral geometry")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    sub = ap.add_subparsers(dest="command")

    sub.add_parser("clifford-table", help="mod-8 real structure signs")

    hp = sub.add_parser("hochschild", help="differential identity suite")
    hp.add_argument("--seed", type=int, default=0)
    hp.add_argument("--chains", type=int, default=20)

    dp = sub.add_parser("dixmier", help="trace estimate of a sequence")
    dp.add_argument("--seq")
    dp.add_argument("--csv")
    dp.add_argument("--schedule", default="10000,100000,1000000,10000000")

    vp = sub.add_parser("volume", help="trace-versus-volume check")
    vp.add_argument("--model", choices=("circle", "torus"), required=True)
    vp.add_argument("--p", type=int)
    vp.add_argument("--schedule", default="10000,100000,1000000,10000000")

    gp = sub.add_parser("distance", help="spectral distance on a graph")
    gp.add_argument("--graph", required=True)
    gp.add_argument("--from", dest="src", required=True)
    gp.add_argument("--to", dest="dst", required=True)

    wp = sub.add_parser("wres", help="residue gravity-action coefficients")
    wp.add_argument("--p", type=int, required=True)
    wp.add_argument("--parity", choices=("even", "odd"))
    wp.add_argument("--torsion", choices=("on", "off"), default="on")
    return ap


_DISPATCH = {
    "clifford-table": cmd_clifford_table,
    "hochschild": cmd_hochschild,
    "dixmier": cmd_dixmier,
    "volume": cmd_volume,
    "distance": cmd_distance,
    "wres": cmd_wres,
}


def main(argv=None):
    _threads_cap()
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    if not args.command:
        ap.print_usage(sys.stderr)
        return 2
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
