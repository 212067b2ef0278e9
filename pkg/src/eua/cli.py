"""Command-line driver emitting machine-readable JSON reports.

Exit codes: 0 all checks passed; 1 some check failed; 2 input or usage
error (including typecheck failures); 3 a declared budget was exceeded.
The EUA_BUDGET_MS environment variable caps wall clock per check.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .construct import (
    closure_audit,
    models_equal_up_to,
    transform_eliminate_powers,
    transform_output_arities,
)
from .freeterms import enumerate_terms, hom_table
from .multifun import is_mmodel
from .semantics import interpret, is_model
from .syntax import EatError, parse, workspace_to_json
from .values import show_dist
from .vbase import (
    BaseTag,
    BudgetExceeded,
    adjunction_audit,
    classify,
    hom_element_images,
    unit,
    verify_unit_generator,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3


def _budget_ms():
    raw = os.environ.get("EUA_BUDGET_MS")
    return int(raw) if raw else None


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse(fh.read())
    except FileNotFoundError:
        print(json.dumps({"error": f"no such file: {path}"}), file=sys.stderr)
        raise SystemExit(EXIT_ERROR)
    except EatError as exc:
        print(
            json.dumps(
                {"error": exc.message, "line": exc.line, "col": exc.col}
            ),
            file=sys.stderr,
        )
        raise SystemExit(EXIT_ERROR)


def _emit(report: dict, failed: bool):
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_check(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    checks = []
    failed = False
    theories = (
        [args.theory] if args.theory else sorted(ws.theories)
    )
    structures = (
        [args.structure] if args.structure else sorted(ws.structures)
    )
    for tn in theories:
        if tn not in ws.theories:
            print(json.dumps({"error": f"unknown theory {tn}"}), file=sys.stderr)
            return EXIT_ERROR
        T = ws.theories[tn]
        for sn in structures:
            if sn not in ws.structures:
                print(
                    json.dumps({"error": f"unknown structure {sn}"}),
                    file=sys.stderr,
                )
                return EXIT_ERROR
            S = ws.structures[sn]
            if S.language != T.language:
                continue
            rep = is_model(S, T, args.mode)
            checks.append(
                {
                    "check": "is_model",
                    "theory": tn,
                    "structure": sn,
                    "model": rep.ok,
                    "failures": [
                        {
                            "axiom": name,
                            "status": v.status,
                            "witness": v.witness,
                            "witness_sort": v.witness_sort,
                        }
                        for (name, v) in rep.failures
                    ],
                }
            )
            if args.expect_model and not rep.ok:
                failed = True
            if not args.expect_model and args.expect_non_model and rep.ok:
                failed = True
    report = {
        "command": "check",
        "file": args.file,
        "base": ws.base.value,
        "mode": args.mode,
        "checks": checks,
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    if args.expect_model or args.expect_non_model:
        return _emit(report, failed)
    return _emit(report, any(not c["model"] for c in checks))


def cmd_typecheck(args) -> int:
    t0 = time.monotonic()
    ws = _load(args.file)
    report = {
        "command": "typecheck",
        "file": args.file,
        "workspace": workspace_to_json(ws),
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    return _emit(report, False)


def cmd_eval(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    if args.term not in ws.terms:
        print(json.dumps({"error": f"unknown term {args.term}"}), file=sys.stderr)
        return EXIT_ERROR
    if args.structure not in ws.structures:
        print(
            json.dumps({"error": f"unknown structure {args.structure}"}),
            file=sys.stderr,
        )
        return EXIT_ERROR
    term, _ = ws.terms[args.term]
    S = ws.structures[args.structure]
    m = interpret(term, S)
    table = {
        m.dom.carrier[i]: m.cod.carrier[m.vmap[i]]
        for i in range(m.dom.size)
    }
    report = {
        "command": "eval",
        "file": args.file,
        "base": ws.base.value,
        "term": args.term,
        "structure": args.structure,
        "table": table,
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    if m.emap is not None:
        report["edge_table"] = {
            m.dom.qedges[k][0]: m.cod.qedges[m.emap[k]][0]
            for k in range(len(m.dom.qedges))
        }
    return _emit(report, False)


def cmd_closure_audit(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    if args.theory not in ws.theories:
        print(json.dumps({"error": f"unknown theory {args.theory}"}), file=sys.stderr)
        return EXIT_ERROR
    T = ws.theories[args.theory]
    instances = [
        S for S in ws.structures.values() if S.language == T.language
    ]
    try:
        rep = closure_audit(
            T,
            instances,
            power_bound=args.bound,
            mode=args.mode,
            budget_ms=_budget_ms(),
        )
    except BudgetExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    report = {
        "command": "closure-audit",
        "file": args.file,
        "theory": args.theory,
        "mode": args.mode,
        "bound": args.bound,
        "products_ok": rep.products_ok,
        "powers_ok": rep.powers_ok,
        "substructures_ok": rep.substructures_ok,
        "v_split_ok": rep.v_split_ok,
        "violations": [list(v) for v in rep.violations],
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    return _emit(report, not rep.ok)


def cmd_transform(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    T = ws.theories.get(args.theory)
    if T is None:
        print(json.dumps({"error": f"unknown theory {args.theory}"}), file=sys.stderr)
        return EXIT_ERROR
    gens = []
    for g in args.gens:
        if g == "unit":
            gens.append(unit(ws.base))
        elif g in ws.objects:
            gens.append(ws.objects[g])
        else:
            print(json.dumps({"error": f"unknown object {g}"}), file=sys.stderr)
            return EXIT_ERROR
    try:
        if args.eliminate_powers:
            T2 = transform_eliminate_powers(T, gens)
        else:
            T2 = transform_output_arities(T, gens)
        verdict = None
        if args.verify_bound:
            verdict = models_equal_up_to(
                T, T2, args.verify_bound, budget_ms=_budget_ms()
            )
    except BudgetExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    report = {
        "command": "transform",
        "file": args.file,
        "theory": args.theory,
        "kind": "eliminate-powers" if args.eliminate_powers else "restrict-outputs",
        "axioms": [eq.name for eq in T2.equations],
        "verified_equal_up_to": (
            None if verdict is None else bool(verdict.ok)
        ),
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    failed = verdict is not None and not verdict.ok
    return _emit(report, failed)


def cmd_enumerate_terms(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    L = ws.languages.get(args.language)
    if L is None:
        print(json.dumps({"error": f"unknown language {args.language}"}), file=sys.stderr)
        return EXIT_ERROR
    X = ws.objects.get(args.arity[0])
    Y = ws.objects.get(args.arity[1])
    if X is None or Y is None:
        print(json.dumps({"error": "unknown arity object"}), file=sys.stderr)
        return EXIT_ERROR
    try:
        terms = enumerate_terms(L, X, Y, args.depth)
    except BudgetExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    report = {
        "command": "enumerate-terms",
        "file": args.file,
        "language": args.language,
        "arity": args.arity,
        "depth": args.depth,
        "count": len(terms),
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    return _emit(report, False)


def cmd_hom_table(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    L = ws.languages.get(args.language)
    if L is None:
        print(json.dumps({"error": f"unknown language {args.language}"}), file=sys.stderr)
        return EXIT_ERROR
    objects = [ws.objects[n] for n in args.objects if n in ws.objects]
    try:
        tables = hom_table(
            L, objects, args.depth, args.probe, budget_ms=_budget_ms()
        )
    except BudgetExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    report = {
        "command": "hom-table",
        "file": args.file,
        "language": args.language,
        "depth": args.depth,
        "probe": args.probe,
        "tables": {
            f"({','.join(k[0].carrier)})->({','.join(k[1].carrier)})": {
                "terms": len(v.terms),
                "classes": len(v.classes),
                "statuses": list(v.statuses),
            }
            for k, v in tables.items()
        },
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    return _emit(report, False)


def cmd_classify(args) -> int:
    ws = _load(args.file)
    t0 = time.monotonic()
    m = ws.morphisms.get(args.morphism)
    if m is None:
        print(json.dumps({"error": f"unknown morphism {args.morphism}"}), file=sys.stderr)
        return EXIT_ERROR
    rep = classify(m)
    report = {
        "command": "classify",
        "file": args.file,
        "morphism": args.morphism,
        "mono": rep.mono,
        "epi": rep.epi,
        "split_epi": rep.split_epi,
        "section": rep.section.as_dict() if rep.section else None,
        "surjection": rep.surjection,
        "regular_epi": rep.regular_epi,
        "strong_epi": rep.strong_epi,
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    return _emit(report, False)


def cmd_selftest(args) -> int:
    t0 = time.monotonic()
    checks = []
    failed = False
    for base in BaseTag:
        r = adjunction_audit(
            base,
            args.bound,
            naturality_bound=min(2, args.bound),
            map_level_cap=200,
            budget_ms=_budget_ms(),
        )
        checks.append(
            {
                "check": "adjunction",
                "base": base.value,
                "ok": r.ok,
                "triples": r.checked,
                "failure": r.failure,
            }
        )
        failed = failed or not r.ok
        ok, ce = verify_unit_generator(base, min(2, args.bound))
        checks.append(
            {
                "check": "unit_generator",
                "base": base.value,
                "ok": ok,
                "matches_flag": ok == base.unit_is_generator,
            }
        )
        failed = failed or (ok != base.unit_is_generator)
    report = {
        "command": "selftest",
        "bound": args.bound,
        "checks": checks,
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    return _emit(report, failed)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="eua",
        description="equational algebra workbench over finite enrichment bases",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="check structures against theories")
    p.add_argument("file")
    p.add_argument("--theory")
    p.add_argument("--structure")
    p.add_argument("--mode", choices=["enriched", "unenriched"], default="enriched")
    p.add_argument("--expect-model", action="store_true")
    p.add_argument("--expect-non-model", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("typecheck", help="parse and validate a theory file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_typecheck)

    p = sub.add_parser("eval", help="print a term's interpretation table")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--structure", required=True)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("closure-audit", help="audit Birkhoff closure properties")
    p.add_argument("file")
    p.add_argument("--theory", required=True)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--mode", choices=["enriched", "unenriched"], default="enriched")
    p.set_defaults(fn=cmd_closure_audit)

    p = sub.add_parser("transform", help="rewrite a theory over generators")
    p.add_argument("file")
    p.add_argument("--theory", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--eliminate-powers", action="store_true")
    g.add_argument("--restrict-outputs", action="store_true")
    p.add_argument("--gens", nargs="+", default=["unit"])
    p.add_argument("--verify-bound", type=int, default=0)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("enumerate-terms", help="count bounded terms of an arity")
    p.add_argument("file")
    p.add_argument("--language", required=True)
    p.add_argument("--arity", nargs=2, required=True, metavar=("X", "Y"))
    p.add_argument("--depth", type=int, default=2)
    p.set_defaults(fn=cmd_enumerate_terms)

    p = sub.add_parser("hom-table", help="bounded extended-term tables")
    p.add_argument("file")
    p.add_argument("--language", required=True)
    p.add_argument("--objects", nargs="+", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--probe", type=int, default=2)
    p.set_defaults(fn=cmd_hom_table)

    p = sub.add_parser("classify", help="classify a declared morphism")
    p.add_argument("file")
    p.add_argument("--morphism", required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("selftest", help="run the base-kernel oracles")
    p.add_argument("--bound", type=int, default=2)
    p.set_defaults(fn=cmd_selftest)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
