"""Command-line front end: ``dkm check | analyze | translate | report``.

Exit codes: 0 success, 1 a domain failure (type error, proof outside S,
...), 2 a usage or I/O error.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from . import errors as E
from .analysis import analyze_file, ingredient_report, translate_file
from .catalog import THEORY_IDS, coc_theory, golden_corpus, load_theory
from .errors import DkmError
from .kernel import Theory, elaborate
from .syntax import Rule, parse, print_decls


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from err


def _load_theory(selector: str, fuel: Optional[int]) -> Theory:
    if selector in THEORY_IDS:
        th = load_theory(selector)
    elif os.path.exists(selector):
        th = elaborate(parse(_read(selector), selector),
                       theory_id=os.path.splitext(os.path.basename(selector))[0])
    else:
        raise UsageError(f"unknown theory {selector!r} (expected stt, coc or a file)")
    return th.with_fuel(fuel) if fuel is not None else th


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _report_error(err: DkmError) -> None:
    print(err.diagnostic.format(), file=sys.stderr)


def _parse_inputs(th: Theory, paths: Sequence[str]):
    """Parse and elaborate the inputs as one unit; return (theory, decls)."""
    decls = []
    for p in paths:
        ds = parse(_read(p), p, th.names)
        th = elaborate(ds, base=th)
        decls.extend(ds)
    return th, decls


# ---------------------------------------------------------------------------
# check

def _check_unit(th: Theory, paths: Sequence[str]) -> list[dict]:
    results = []
    for p in paths:
        try:
            decls = parse(_read(p), p, th.names)
        except DkmError as err:
            results.append({"file": p, "declaration": None, "status": "error",
                            "diagnostic": err.diagnostic.to_json()})
            return results
        for d in decls:
            try:
                th = elaborate([d], base=th)
            except DkmError as err:
                results.append({"file": p, "declaration": d.name, "status": "error",
                                "diagnostic": err.diagnostic.to_json()})
                return results
            results.append({"file": p, "declaration": d.name, "status": "ok",
                            "diagnostic": None})
    return results


def _check_corpus(th: Theory) -> list[dict]:
    results = []
    for g in golden_corpus(th.id):
        try:
            g.verify(th)
            results.append({"file": g.file or "<corpus>", "declaration": g.name,
                            "status": "ok", "diagnostic": None})
        except (DkmError, AssertionError) as err:
            diag = (err.diagnostic.to_json() if isinstance(err, DkmError)
                    else E.Diagnostic(E.CONV_FAIL, str(err)).to_json())
            results.append({"file": g.file or "<corpus>", "declaration": g.name,
                            "status": "error", "diagnostic": diag})
    return results


def cmd_check(args) -> int:
    th = _load_theory(args.theory, args.fuel)
    if args.corpus:
        if th.id not in THEORY_IDS:
            raise UsageError("--corpus needs a built-in theory")
        results = _check_corpus(th)
    elif args.jobs > 1 and len(args.inputs) > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            parts = list(pool.map(lambda p: _check_unit(th, [p]), args.inputs))
        results = [r for part in parts for r in part]
    else:
        results = _check_unit(th, args.inputs)
    failed = False
    for r in results:
        if r["status"] == "ok":
            if not args.json:
                print(f"OK {r['declaration']}")
        else:
            failed = True
            d = r["diagnostic"]
            print(E.Diagnostic(d["code"], d["message"],
                               _span_from_json(d["span"])).format(), file=sys.stderr)
    if args.json:
        _emit_json(results)
    return 1 if failed else 0


def _span_from_json(s) -> Optional[E.SourceSpan]:
    if s is None:
        return None
    return E.SourceSpan(s["file"], s["startLine"], s["startCol"], s["endLine"], s["endCol"])


# ---------------------------------------------------------------------------
# analyze / translate / report

def _human_report(r) -> str:
    if r.in_s and not r.tainted_by:
        line = f"{r.subject}: in S"
    elif r.in_s:
        line = f"{r.subject}: in S, but uses {', '.join(r.tainted_by)} (not in S)"
    else:
        vs = ", ".join(f"{v.kind.value} at {'/'.join(v.position)}" for v in r.violations)
        line = f"{r.subject}: not in S: {vs}"
    if r.nf_in_s is not None and r.nf_in_s != r.in_s:
        line += f" (normal form: {'in S' if r.nf_in_s else 'not in S'})"
    return line


def cmd_analyze(args) -> int:
    th = _load_theory(args.theory, args.fuel)
    decls = []
    for p in args.inputs:
        ds = parse(_read(p), p, th.names + [d.name for d in decls if not isinstance(d, Rule)])
        decls.extend(ds)
    _, reports = analyze_file(th, decls)
    if args.json:
        _emit_json([r.to_json() for r in reports])
    else:
        for r in reports:
            print(_human_report(r))
    return 0 if all(r.in_s for r in reports) else 1


def _coc_compatible(th: Theory) -> bool:
    coc = coc_theory()
    return all(th.constants.get(n) == ty for n, ty in coc.constants.items())


def cmd_translate(args) -> int:
    th = _load_theory(args.theory, args.fuel)
    if not _coc_compatible(th):
        raise UsageError("translate needs --theory coc (or a file extending it)")
    decls = []
    for p in args.inputs:
        decls.extend(parse(_read(p), p, th.names + [d.name for d in decls
                                                     if not isinstance(d, Rule)]))
    try:
        result = translate_file(decls, source=th)
    except DkmError as err:
        _report_error(err)
        if err.code == E.NOT_IN_S and err.payload:
            reports = err.payload
            if args.json:
                _emit_json([r.to_json() for r in reports])
            else:
                for r in reports:
                    if not r.in_s:
                        print(_human_report(r), file=sys.stderr)
        return 1
    text = print_decls(result.declarations)
    if args.output and args.output != "-":
        try:
            with open(args.output, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as err:
            raise UsageError(f"cannot write {args.output}: {err.strerror}") from err
        if args.json:
            _emit_json([r.to_json() for r in result.reports])
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    th = _load_theory(args.theory, args.fuel)
    decls = []
    for p in args.inputs:
        decls.extend(parse(_read(p), p, th.names + [d.name for d in decls
                                                     if not isinstance(d, Rule)]))
    report = ingredient_report(th, decls)
    if args.json:
        _emit_json({name: ing.to_json() for name, ing in report.items()})
    else:
        for name, ing in report.items():
            parts = [f"{k}: {', '.join(v) if v else '-'}" for k, v in ing.to_json().items()]
            print(f"{name}: " + "; ".join(parts))
    return 0


# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dkm", description="Check, analyze and translate lambda-Pi modulo proofs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_theory="stt"):
        p.add_argument("--theory", default=default_theory,
                       help="stt, coc, or a .dkm theory file (default: %(default)s)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--fuel", type=_positive, default=None,
                       help="reduction step budget (default: $DKM_FUEL or 1000000)")
        p.add_argument("inputs", nargs="*", help=".dkm files, concatenated in order")

    p = sub.add_parser("check", help="type-check declarations")
    common(p)
    p.add_argument("--corpus", action="store_true", help="check the built-in golden corpus")
    p.add_argument("--jobs", type=_positive, default=1,
                   help="check input files independently, in parallel")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="decide membership in the translatable subset S")
    common(p, "coc")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("translate", help="translate CoC proofs to simple type theory")
    common(p, "coc")
    p.add_argument("-o", "--output", help="output .dkm file (default: stdout)")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("report", help="list the constants each declaration depends on")
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.fuel is None and os.environ.get("DKM_FUEL"):
        try:
            args.fuel = _positive(os.environ["DKM_FUEL"])
        except (ValueError, argparse.ArgumentTypeError):
            print("dkm: DKM_FUEL must be a positive integer", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except UsageError as err:
        print(f"dkm: {err}", file=sys.stderr)
        return 2
    except DkmError as err:
        _report_error(err)
        if args.json:
            _emit_json({"error": err.diagnostic.to_json()})
        return 1


if __name__ == "__main__":
    sys.exit(main())
