"""Command-line frontend: Smith groups, diagonal forms, verification sweeps,
and plain-text matrix import/export.

Exit codes: 0 on success, 1 when a mathematical precondition or internal
invariant is violated (the message says which), 2 for malformed arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .exact import ConstructionError, ExactError, IntMatrix, smith_normal_form
from .oracle import (DEFAULT_CAP, THEOREMS, bench, brute_force_group,
                     verify_closed_form)
from .scheme import (RECURSIVE, SUPERSTANDARD, SchemeParams, degree,
                     diagonal_form_entries, e_matrices, eigenvalues,
                     intersection_matrix, ms_matrices, bier_p, smith_group,
                     unit_coeffs, w_matrix)
from .superstandard import check_conjecture, p_tilde


def _resolve_inputs(args, parser) -> tuple[SchemeParams, tuple[int, ...], int]:
    """Turn --ell/--coeffs/--lambda flags into (params, coeffs, lam)."""
    n, k = args.n, args.k
    if args.coeffs is not None and args.ell is not None:
        parser.error("--ell and --coeffs are mutually exclusive")
    if args.coeffs is None and args.ell is None:
        parser.error("one of --ell or --coeffs is required")
    lam_text = getattr(args, "lam", "0")
    if lam_text == "degree":
        if args.ell is None:
            parser.error("--lambda degree requires --ell")
        lam = degree(n, k, args.ell)
    else:
        try:
            lam = int(lam_text)
        except ValueError:
            parser.error("--lambda takes an integer or 'degree'")
    if args.ell is not None:
        p = SchemeParams(n, k, k, args.ell)
        coeffs = unit_coeffs(p)
    else:
        try:
            coeffs = tuple(int(tok) for tok in args.coeffs.split(","))
        except ValueError:
            parser.error("--coeffs takes comma-separated integers")
        if len(coeffs) != k + 1:
            parser.error(f"--coeffs needs {k + 1} entries b0..b{k}")
        p = SchemeParams(n, k, k, k)
    return p, coeffs, lam


def _group_json(result) -> dict:
    return {
        "params": {"n": result.params.n, "kr": result.params.kr,
                   "kc": result.params.kc, "ell": result.params.ell},
        "coeffs": list(result.coeffs),
        "lambda": result.lam,
        "group": result.group.to_json_dict(),
        "blocks": [{"s": b.s, "multiplicity": b.multiplicity,
                    "delta": list(b.delta), "rank": b.rank}
                   for b in result.blocks],
    }


def _print_blocks(result) -> None:
    for b in result.blocks:
        delta = ", ".join(str(d) for d in b.delta)
        print(f"block s={b.s}: size {b.matrix.rows}x{b.matrix.cols}, "
              f"multiplicity {b.multiplicity}, diagonal form [{delta}]")


def cmd_smith_group(args, parser) -> int:
    p, coeffs, lam = _resolve_inputs(args, parser)
    family = args.e_family
    result = smith_group(p, coeffs, lam, e_family=family)
    if args.json:
        print(json.dumps(_group_json(result)))
    else:
        print(f"n={p.n} k={p.kr} coeffs={list(coeffs)} lambda={lam}")
        _print_blocks(result)
        print(f"smith group: {result.group}")
    return 0


def cmd_diagonal_form(args, parser) -> int:
    p = SchemeParams(args.n, args.kr, args.kc, args.ell)
    result = smith_group(p)
    entries = diagonal_form_entries(result)
    if args.json:
        out = _group_json(result)
        out["diagonal_entries"] = [{"entry": e, "multiplicity": m}
                                   for e, m in entries if m]
        print(json.dumps(out))
    else:
        print(f"n={p.n} kr={p.kr} kc={p.kc} ell={p.ell}")
        print("diagonal form entries (entry x multiplicity):")
        for e, m in entries:
            if m:
                print(f"  {e} x {m}")
        print(f"smith group: {result.group}")
    return 0


def cmd_ms(args, parser) -> int:
    p, coeffs, lam = _resolve_inputs(args, parser)
    for m in ms_matrices(p, coeffs, lam):
        print(f"M_{m.s} (multiplicity {m.multiplicity}):")
        print(m.entries.pretty())
    return 0


def cmd_eigenvalues(args, parser) -> int:
    lam_text = args.lam
    lam = degree(args.n, args.k, args.ell) if lam_text == "degree" else int(lam_text)
    p = SchemeParams(args.n, args.k, args.k, args.ell)
    spec = eigenvalues(p, lam=lam)
    if args.json:
        print(json.dumps([{"eigenvalue": s.eigenvalue,
                           "multiplicity": s.multiplicity} for s in spec]))
    else:
        print(f"spectrum of A - lambda*I for n={args.n} k={args.k} "
              f"ell={args.ell} lambda={lam}")
        for s in spec:
            print(f"  {s.eigenvalue} with multiplicity {s.multiplicity}")
        print(f"total multiplicity: {sum(s.multiplicity for s in spec)}")
    return 0


def cmd_oracle(args, parser) -> int:
    p, coeffs, lam = _resolve_inputs(args, parser)
    group = brute_force_group(p, coeffs, lam, cap=args.cap)
    structured = None
    agree = None
    if p.n >= 3 * p.kc - 1:
        structured = smith_group(p, coeffs, lam).group
        agree = structured == group
    if args.json:
        print(json.dumps({
            "params": {"n": p.n, "kr": p.kr, "kc": p.kc, "ell": p.ell},
            "coeffs": list(coeffs), "lambda": lam,
            "oracle": group.to_json_dict(),
            "structured": structured.to_json_dict() if structured else None,
            "agree": agree}))
    else:
        print(f"brute-force group: {group}")
        if structured is None:
            print("structured pipeline skipped: n < 3*kc - 1")
        else:
            print(f"structured group:  {structured}")
            print(f"agreement: {agree}")
    return 0 if agree in (True, None) else 1


def cmd_verify(args, parser) -> int:
    cf = THEOREMS.get(args.theorem)
    if cf is None:
        parser.error(f"unknown theorem {args.theorem!r}; "
                     f"known: {', '.join(sorted(THEOREMS))}")
    if args.n_from < cf.min_n:
        parser.error(f"{args.theorem} requires n >= {cf.min_n}")
    if args.n_to < args.n_from:
        parser.error("--n-to must be >= --n-from")
    ns = range(args.n_from, args.n_to + 1)

    def work(n):
        return verify_closed_form(args.theorem, n, cap=args.cap)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(work, ns))
    else:
        reports = [work(n) for n in ns]
    ok = True
    for rep in reports:
        ok = ok and rep.all_agree
        if args.json:
            print(json.dumps(rep.to_json_dict()))
        else:
            status = "ok" if rep.all_agree else "MISMATCH"
            notes = []
            if rep.structured is None:
                notes.append("oracle-only")
            if rep.oracle is None:
                notes.append("oracle skipped")
            note = f" ({', '.join(notes)})" if notes else ""
            group = rep.structured if rep.structured is not None else rep.closed_form
            print(f"{args.theorem} n={rep.n}: {status}{note} group {group}")
    if not ok:
        print("closed-form verification failed", file=sys.stderr)
        return 1
    return 0


def cmd_conjecture(args, parser) -> int:
    triples = [(n, i, j)
               for n in range(args.n_min, args.n_max + 1)
               for j in range(0, args.k_max + 1) if 3 * j <= n + 1
               for i in range(0, j + 1) if 3 * i <= n + 1]

    def work(t):
        return check_conjecture(*t)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(work, triples))
    else:
        reports = [work(t) for t in triples]
    log_lines = []
    all_hold = True
    for rep in reports:
        all_hold = all_hold and rep.holds
        line = json.dumps(rep.to_json_dict())
        log_lines.append(line)
        if args.json:
            print(line)
        else:
            print(f"n={rep.n} i={rep.i} j={rep.j}: "
                  f"{'holds' if rep.holds else 'FAILS'} "
                  f"(rank {rep.rank}, index {rep.index})")
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            fh.write("\n".join(log_lines) + "\n")
    print(f"checked {len(reports)} cases; "
          f"{'all hold' if all_hold else 'FAILURES found'}")
    return 0 if all_hold else 1


def cmd_export_matrix(args, parser) -> int:
    which = args.which
    need = {"A": ("n", "kr", "kc", "ell"), "P": ("n", "k"),
            "W": ("n", "i", "j"), "E": ("n", "s"), "Ptilde": ("n", "i", "j")}
    for flag in need[which]:
        if getattr(args, flag) is None:
            parser.error(f"export-matrix --which {which} requires --{flag}")
    if which == "A":
        m = intersection_matrix(SchemeParams(args.n, args.kr, args.kc, args.ell))
    elif which == "P":
        m = bier_p(args.n, args.k)
    elif which == "W":
        m = w_matrix(args.n, args.i, args.j)
    elif which == "E":
        family = args.e_family or RECURSIVE
        m = e_matrices(args.n, args.s, family)[args.s]
    else:
        m = p_tilde(args.n, args.i, args.j)
    text = m.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {m.rows}x{m.cols} matrix to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_snf(args, parser) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        m = IntMatrix.from_text(fh.read())
    snf = smith_normal_form(m)
    if args.json:
        print(json.dumps({"rows": m.rows, "cols": m.cols,
                          "invariant_factors": list(snf.invariant_factors),
                          "rank": snf.rank}))
    else:
        factors = ",".join(str(d) for d in snf.invariant_factors)
        print(f"{m.rows}x{m.cols} matrix: rank {snf.rank}, "
              f"invariant factors {factors if factors else '(none)'}")
    return 0


def cmd_bench(args, parser) -> int:
    p, coeffs, lam = _resolve_inputs(args, parser)
    report = bench(p, coeffs, lam, repeats=args.repeats, cap=args.cap)
    print(json.dumps(report.to_json_dict()))
    return 0


def _add_common_element_flags(sp, with_json=True):
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--coeffs", type=str, default=None,
                    help="comma-separated b0,..,bk")
    sp.add_argument("--lambda", dest="lam", default="0",
                    help="integer shift, or 'degree'")
    if with_json:
        sp.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setsmith",
        description="Smith groups and diagonal forms of subset intersection "
                    "matrices, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("smith-group",
                        help="Smith group via the small-block reduction")
    _add_common_element_flags(sp)
    sp.add_argument("--e-family", choices=[RECURSIVE, SUPERSTANDARD],
                    default=None,
                    help="also build and validate this unimodular family")
    sp.set_defaults(func=cmd_smith_group)

    sp = sub.add_parser("diagonal-form",
                        help="diagonal form of a (possibly non-square) "
                             "intersection matrix")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kr", type=int, required=True)
    sp.add_argument("--kc", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_diagonal_form)

    sp = sub.add_parser("ms", help="print the reduced blocks M_s")
    _add_common_element_flags(sp, with_json=False)
    sp.set_defaults(func=cmd_ms)

    sp = sub.add_parser("eigenvalues", help="spectrum with multiplicities")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", default="0",
                    help="integer shift, or 'degree'")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_eigenvalues)

    sp = sub.add_parser("oracle", help="brute-force group and agreement flag")
    _add_common_element_flags(sp)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="closed-form verification sweep")
    sp.add_argument("--theorem", required=True)
    sp.add_argument("--n-from", type=int, required=True)
    sp.add_argument("--n-to", type=int, required=True)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("conjecture",
                        help="sweep the stacked-matrix unimodularity conjecture")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--log", type=str, default=None,
                    help="write machine-readable JSONL to this file")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("export-matrix", help="write a matrix as plain text")
    sp.add_argument("--which", required=True,
                    choices=["A", "P", "W", "E", "Ptilde"])
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--kr", type=int, default=None)
    sp.add_argument("--kc", type=int, default=None)
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--i", type=int, default=None)
    sp.add_argument("--j", type=int, default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--e-family", choices=[RECURSIVE, SUPERSTANDARD],
                    default=None)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_export_matrix)

    sp = sub.add_parser("snf", help="Smith normal form of a plain-text matrix")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_snf)

    sp = sub.add_parser("bench",
                        help="time the block reduction against the dense SNF")
    _add_common_element_flags(sp, with_json=False)
    sp.add_argument("--repeats", type=int, default=1)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ExactError, ConstructionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
