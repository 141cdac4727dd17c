"""Command-line interface.

Subcommands cover the pipeline end to end: `factor` (cyclotomic
factorization counts and factors), `decompose`/`lift` (CRT constituents
of a quasi-cyclic code and the inverse trace construction), `hull`,
`conx` (stabilizer parameters via the hull construction), `distance`,
`verify-tables` (re-derive and check the shipped published-table
fixture), `search` (seeded random or exhaustive constituent search) and
`registry` (list/diff stored results).

Exit codes: 0 success, 1 verification mismatch, 2 usage or parse error.
All subcommands accept --json for machine output (stable key order);
timestamps are suppressed under --deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import tables
from .gf import field_of_order
from .linalg import dual, subspace_sum
from .mindist import min_weight_auto, min_weight_bruteforce, min_weight_infoset
from .qc import (
    decompose,
    format_constituents,
    hull,
    lift,
    parse_constituents,
    parse_qc,
    pattern_for,
    so_check,
)
from .quantum import construction_x
from .search import SearchConfig, parse_config, search_run

DEFAULT_WORK_LIMIT = int(os.environ.get("QCX_WORK_LIMIT", tables.DEFAULT_WORK_LIMIT))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(args, payload) -> None:
    if args.json:
        if isinstance(payload, list):
            for item in payload:
                print(json.dumps(item, sort_keys=True, separators=(",", ":")))
        else:
            print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def cmd_factor(args) -> int:
    pat = pattern_for(args.q2, args.m)
    if args.json:
        payload = {
            "q2": args.q2,
            "m": args.m,
            "s": pat.s,
            "r": pat.r,
            "selfrec": [
                {"poly": str(f.poly), "exponent": f.exponent, "degree": f.degree}
                for f in pat.selfrec
            ],
            "pairs": [
                {
                    "poly": str(p.poly),
                    "reciprocal": str(p.reciprocal),
                    "exponent": p.exponent,
                    "degree": p.degree,
                }
                for p in pat.pairs
            ],
        }
        _emit(args, payload)
        return 0
    print(f"x^{args.m} - 1 over GF({args.q2}): s = {pat.s} self-reciprocal, r = {pat.r} pairs")
    for f in pat.selfrec:
        print(f"  self   u={f.exponent:<3d} deg={f.degree}  {f.poly}")
    for p in pat.pairs:
        print(f"  pair   v={p.exponent:<3d} deg={p.degree}  {p.poly}  /  {p.reciprocal}")
    return 0


def cmd_decompose(args) -> int:
    C = parse_qc(_read(args.file))
    S = decompose(C)
    sc = so_check(S)
    if args.json:
        mats = [
            {
                "kind": slot.kind,
                "exponent": slot.exponent,
                "dim": M.nrows,
                "rows": [" ".join(M.field.format_code(int(c)) for c in row) for row in M.a],
                "so_ok": ok,
            }
            for slot, M, ok in zip(S.pattern.slots(), S.slot_mats(), sc.slot_ok)
        ]
        _emit(args, {"q2": C.field.order, "m": C.m, "ell": C.ell, "k": C.dim, "slots": mats})
        return 0
    print(format_constituents(S), end="")
    print(f"# dims: {S.dims()}  k = {C.dim}  so outside x-+1 slot: {sc.ok_outside_first()}")
    return 0


def cmd_lift(args) -> int:
    S = parse_constituents(_read(args.file))
    C = lift(S)
    if args.json:
        _emit(args, {
            "q2": C.field.order, "m": C.m, "ell": C.ell, "k": C.dim,
            "generators": ["(" + ", ".join(str(f) for f in g) + ")" for g in C.module_gens],
        })
        return 0
    print(C.serialize(), end="")
    print(f"# [{C.n},{C.dim}]_{C.field.order}")
    return 0


def cmd_hull(args) -> int:
    C = parse_qc(_read(args.file))
    h = hull(C)
    if args.json:
        _emit(args, {"n": C.n, "k": C.dim, "q2": C.field.order,
                     "hull_dim": h.dim, "e": h.e})
        return 0
    print(f"[{C.n},{C.dim}]_{C.field.order}: hull dimension {h.dim}, defect e = {h.e}")
    return 0


def cmd_conx(args) -> int:
    C = parse_qc(_read(args.file))
    res = construction_x(C, work_limit=args.work_limit, certify_d=args.certify)
    if args.json:
        rec = tables.RegistryRecord(
            id=args.file if args.file != "-" else "stdin",
            q2=res.q2, m=C.m, ell=C.ell,
            generators=tuple("(" + ", ".join(str(f) for f in g) + ")" for g in C.module_gens),
            k=res.source_k, hull_dim=res.hull_dim, e=res.e,
            d_dual=res.d_dual.lower, d_dual_exact=res.d_dual.exact,
            d_sum=res.d_sum.lower if res.d_sum else None,
            d_sum_exact=res.d_sum.exact if res.d_sum else None,
            n_q=res.params.n, k_q=res.params.k, d_lower=res.params.d_lower,
            timestamp=None if args.deterministic else _now(),
        )
        _emit(args, rec.to_dict())
        return 0
    print(f"source: [{res.source_n},{res.source_k}]_{res.q2}, hull {res.hull_dim}, e = {res.e}")
    d1 = res.d_dual
    print(f"d(dual): {'exact ' + str(d1.d) if d1.exact else 'bracket ' + str(d1.bracket)} (work {d1.work})")
    if res.d_sum is not None:
        d2 = res.d_sum
        print(f"d(code+dual): {'exact ' + str(d2.d) if d2.exact else 'bracket ' + str(d2.bracket)} (work {d2.work})")
    print(str(res.params))
    return 0


def cmd_distance(args) -> int:
    C = parse_qc(_read(args.file))
    G = C.expanded
    if args.method == "brute":
        res = min_weight_bruteforce(G)
    elif args.method == "infoset":
        res = min_weight_infoset(G, work_limit=args.work_limit)
    else:
        res = min_weight_auto(G, work_limit=args.work_limit)
    if args.json:
        _emit(args, {
            "n": C.n, "k": C.dim, "q2": C.field.order, "method": res.method,
            "exact": res.exact, "lower": res.lower, "upper": res.upper,
            "work": res.work,
            "witness": list(res.witness) if res.witness else None,
        })
        return 0
    if res.exact:
        print(f"d = {res.d} ({res.method}, work {res.work})")
    else:
        print(f"d in {res.bracket} — work limit reached ({res.method}, work {res.work})")
    if res.witness is not None:
        F = C.field
        print("witness:", " ".join(F.format_code(c) for c in res.witness))
    return 0


def _parse_rows(spec: str) -> list[int]:
    out = []
    for part in spec.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_verify_tables(args) -> int:
    entries = tables.load_table_fixture(args.fixture)
    rows = _parse_rows(args.rows) if args.rows else None
    exact_rows = set(_parse_rows(args.exact_rows)) if args.exact_rows else set()
    reps = tables.verify_entries(
        entries, rows,
        work_limit=args.work_limit, exact_rows=exact_rows, workers=args.workers,
    )
    if args.json:
        _emit(args, [r.to_dict() for r in reps])
    else:
        for r in reps:
            mark = "ok" if r.ok else ("BRACKET" if not r.hard_fail else "FAIL")
            extra = f" prim=w^{r.prim_exp}" if r.prim_exp != 1 else ""
            print(
                f"row {r.row_no:2d} {r.claimed:16s} {mark:7s} "
                f"sr={int(r.sr_ok)} e={int(r.e_ok)} nk={int(r.nk_ok)} "
                f"dist={r.dist_status} bound={r.d_bound}{extra}"
            )
        n_ok = sum(1 for r in reps if r.ok)
        n_hard = sum(1 for r in reps if r.hard_fail)
        n_bracket = sum(1 for r in reps if not r.ok and not r.hard_fail)
        print(f"verified {n_ok}/{len(reps)} rows; {n_bracket} budget-bracketed; {n_hard} failed")
    hard = any(r.hard_fail for r in reps)
    if args.strict:
        return 1 if any(not r.ok for r in reps) else 0
    return 1 if hard else 0


def _now() -> str:
    from datetime import datetime, timezone

    return datetime.now(timezone.utc).isoformat()


def cmd_search(args) -> int:
    cfg = parse_config(_read(args.config))
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    if args.work_limit is not None:
        cfg.work_limit = args.work_limit
    cfg.timestamps = not args.deterministic
    records = search_run(cfg)
    if args.registry:
        tables.registry_save(args.registry, records, validate=not args.no_validate, append=True)
    if args.json:
        _emit(args, [r.to_dict() for r in records])
    else:
        print(f"{cfg.mode} search: {len(records)} records "
              f"(q2={cfg.q2}, m={cfg.m}, ell={cfg.ell}, trials={cfg.trials}, seed={cfg.seed})")
        for r in records:
            print(f"  {r.params_str}  e={r.e} d_dual>={r.d_dual} trial={r.trial} id={r.id}")
    return 0


def cmd_registry(args) -> int:
    records = tables.registry_load(args.path, strict=args.strict)
    if args.op == "list":
        if args.json:
            _emit(args, [r.to_dict() for r in records])
        else:
            for r in records:
                print(f"{r.id}: {r.params_str} (m={r.m}, ell={r.ell}, e={r.e})")
        return 0
    baseline = tables.registry_load(args.baseline, strict=args.strict)
    diffs = tables.registry_diff(records, baseline)
    if args.json:
        _emit(args, [
            {"id": d.record.id, "params": d.record.params_str, "verdict": d.verdict,
             "baseline": d.baseline.params_str if d.baseline else None}
            for d in diffs
        ])
    else:
        for d in diffs:
            base = f" (baseline {d.baseline.params_str})" if d.baseline else ""
            print(f"{d.verdict:12s} {d.record.params_str}{base}")
    worse = any(d.verdict == "worse" for d in diffs)
    return 1 if (args.strict and worse) else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcx", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, work_limit=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--deterministic", action="store_true",
                        help="suppress timestamps for byte-identical output")
        if work_limit:
            sp.add_argument("--work-limit", type=int, default=DEFAULT_WORK_LIMIT,
                            help="distance enumeration budget (messages)")

    sp = sub.add_parser("factor", help="factor x^m - 1 over GF(q2)")
    sp.add_argument("--q2", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    common(sp, work_limit=False)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("decompose", help="CRT constituents of a quasi-cyclic code")
    sp.add_argument("file")
    common(sp, work_limit=False)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("lift", help="rebuild a quasi-cyclic code from constituents")
    sp.add_argument("file")
    common(sp, work_limit=False)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("hull", help="Hermitian hull dimension and defect")
    sp.add_argument("file")
    common(sp, work_limit=False)
    sp.set_defaults(func=cmd_hull)

    sp = sub.add_parser("conx", help="stabilizer parameters from a quasi-cyclic code")
    sp.add_argument("file")
    sp.add_argument("--certify", type=int, default=None,
                    help="stop distance scans once this bound is certified")
    common(sp)
    sp.set_defaults(func=cmd_conx)

    sp = sub.add_parser("distance", help="minimum distance of the expanded code")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("auto", "brute", "infoset"), default="auto")
    common(sp)
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("verify-tables", help="verify the published-table fixture")
    sp.add_argument("fixture", nargs="?", default=None,
                    help="fixture path (default: shipped table)")
    sp.add_argument("--rows", default=None, help="row selection, e.g. 1,3,10-12")
    sp.add_argument("--exact-rows", default=None, help="rows to certify exactly")
    sp.add_argument("--strict", action="store_true",
                    help="budget brackets also fail the run")
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_verify_tables)

    sp = sub.add_parser("search", help="seeded constituent search")
    sp.add_argument("config", help="flat key=value config file")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--registry", default=None, help="append results to this registry")
    sp.add_argument("--no-validate", action="store_true",
                    help="skip recomputation check before saving")
    sp.add_argument("--work-limit", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--deterministic", action="store_true")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("registry", help="list or diff stored results")
    sp.add_argument("op", choices=("list", "diff"))
    sp.add_argument("path")
    sp.add_argument("--baseline", default=None, help="baseline registry for diff")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_registry)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "registry" and args.op == "diff" and not args.baseline:
        print("error: registry diff requires --baseline", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
