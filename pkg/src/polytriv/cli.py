"""Command-line interface.

Exit codes: 0 affirmative, 1 negative with a witness, 2 bad input,
3 budget or capability limit. Every option with a default can also be set
through an environment variable ``POLYTRIV_<OPTION>``, e.g.
``POLYTRIV_BUDGET=100000``.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .engine import (
    DEFAULT_BUDGET,
    PolymorphismTuple,
    classify_polymorphism,
    enumerate_raw,
    find_violation,
    scan_polymorphisms,
)
from .errors import ArgumentError, BudgetExceededError, CapabilityError, PolytrivError
from .functions import DEFAULT_LATIN_K_MAX
from .impossibility import (
    DEFAULT_WITNESS_TABLE_LIMIT,
    check_impossibility_unanimity,
    construct_witness_case1,
    decide_impossibility,
)
from .phi import PHI_BUILDERS, PhiFamily, build_phi
from .predicate import Predicate, symmetric_predicate
from .symmetric import atlas
from .triviality import DEFAULT_ANDOR_LIMIT, check_trivial_for_n, decide_trivial, reduction_report

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3
ENV_PREFIX = "POLYTRIV_"
DEFAULT_ARITY_CAP = 3


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in {"1", "true", "yes", "on"}
    try:
        return cast(raw)
    except ValueError:
        raise ArgumentError(f"{ENV_PREFIX}{name.upper()}={raw!r} is not a valid {cast.__name__}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common(parser: argparse.ArgumentParser, predicate: bool = True) -> None:
    if predicate:
        src = parser.add_mutually_exclusive_group(required=True)
        src.add_argument("--predicate", type=Path, help="predicate JSON file")
        src.add_argument("--symmetric", metavar="M:W", help="symmetric binary predicate, e.g. 3:1,2")
    parser.add_argument("--budget", type=_positive, default=_env("budget", DEFAULT_BUDGET, int),
                        help="table-entry assignments allowed per enumeration")
    parser.add_argument("--workers", type=_positive, default=_env("workers", 1, int))
    parser.add_argument("--json", action="store_true", default=_env("json", False, bool),
                        help="structured output")


def _phi_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phi", default=_env("phi", "neg"),
                        help=f"one of {', '.join(PHI_BUILDERS)} or a Phi JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polytriv", description="Polymorphism triviality toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="is a function tuple a polymorphism?")
    _common(p)
    p.add_argument("--tuple", dest="tuple_file", type=Path, required=True, help="tuple JSON file")

    p = sub.add_parser("enumerate", help="list every polymorphism of a given arity")
    _common(p)
    p.add_argument("--arity", type=int, default=_env("arity", 1, int))
    p.add_argument("--arity-cap", type=int, default=_env("arity_cap", DEFAULT_ARITY_CAP, int))
    p.add_argument("--count", action="store_true", help="print only the number of polymorphisms")
    p.add_argument("--scan", action="store_true", help="use the unpruned full scan instead of backtracking")
    p.add_argument("--classify", action="store_true", help="attach a type verdict against --phi")
    _phi_option(p)

    p = sub.add_parser("trivial", help="decide Phi-triviality (arity 2 unless --arity is given)")
    _common(p)
    _phi_option(p)
    p.add_argument("--arity", type=int, default=None)
    p.add_argument("--arity-cap", type=int, default=_env("arity_cap", DEFAULT_ARITY_CAP, int))
    p.add_argument("--census", action="store_true", help="count verdict kinds when trivial")

    p = sub.add_parser("reduce", help="arity-1 triviality plus the exceptional-case detectors")
    _common(p)
    _phi_option(p)
    p.add_argument("--latin-k-max", type=int, default=_env("latin_k_max", DEFAULT_LATIN_K_MAX, int))
    p.add_argument("--andor-limit", type=int, default=_env("andor_limit", DEFAULT_ANDOR_LIMIT, int))
    p.add_argument("--check-n2", action="store_true", help="also run the direct arity-2 check")

    p = sub.add_parser("atlas", help="sweep symmetric binary predicates")
    _common(p, predicate=False)
    p.add_argument("--m", type=int, nargs="+", default=None, help="values of m (default 1..--m-max)")
    p.add_argument("--m-max", type=int, default=_env("m_max", 4, int))
    p.add_argument("--scan-max-m", type=int, default=_env("scan_max_m", 4, int),
                   help="largest m cross-checked against the unpruned scan")
    p.add_argument("--format", choices=("csv", "tsv"), default=_env("format", "csv"))
    p.add_argument("--figures", type=Path, default=_env("figures", None, Path),
                   help="directory for atlas figures")
    p.add_argument("--figure-format", choices=("png", "svg", "pdf"), default=_env("figure_format", "png"))

    p = sub.add_parser("impossibility", help="impossibility domain with respect to unanimity")
    _common(p)
    p.add_argument("--arity", type=int, default=None, help="only search this arity")
    p.add_argument("--arity-cap", type=int, default=_env("arity_cap", DEFAULT_ARITY_CAP, int))
    p.add_argument("--latin-k-max", type=int, default=_env("latin_k_max", DEFAULT_LATIN_K_MAX, int))
    p.add_argument("--tight-exponent", action="store_true", default=_env("tight_exponent", False, bool),
                   help="fold by the lcm of the row-permutation orders instead of prod k_i!")
    p.add_argument("--witness-table-limit", type=int,
                   default=_env("witness_table_limit", DEFAULT_WITNESS_TABLE_LIMIT, int))
    p.add_argument("--case1", nargs=2, type=int, metavar=("I", "SIGMA"),
                   help="build the closure-under-setting witness for coordinate I and value SIGMA")
    return parser


# -- helpers -----------------------------------------------------------------

def _predicate(args) -> Predicate:
    if args.symmetric is not None:
        m, W = io.parse_weights(args.symmetric)
        return symmetric_predicate(m, W)
    return io.load_predicate(args.predicate)


def _phi(args, P: Predicate) -> PhiFamily:
    if args.phi in PHI_BUILDERS:
        return build_phi(args.phi, P.sizes)
    path = Path(args.phi)
    if not path.exists():
        raise ArgumentError(f"--phi {args.phi!r} is neither a known family nor a file")
    phi = io.load_phi(path)
    if phi.sizes != P.sizes:
        raise ArgumentError(f"Phi family has sizes {phi.sizes}, predicate has {P.sizes}")
    return phi


def _cap(arity: int, cap: int) -> None:
    if arity < 0:
        raise ArgumentError("arity must be >= 0")
    if arity > cap:
        raise CapabilityError(f"arity {arity} exceeds the cap {cap} (raise --arity-cap to allow it)")


def _tables_text(fs: PolymorphismTuple, width: int = 64) -> str:
    if any(len(t.table) > width for t in fs.tables):
        return f"{fs.m} tables of {len(fs.tables[0].table)} entries (use --json for the full tables)"
    return "  ".join("".join(str(v) for v in t.table) for t in fs.tables)


def _emit(out, args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        out.write(io.dumps(payload))
    else:
        out.write("\n".join(lines) + "\n")


# -- subcommands -------------------------------------------------------------

def cmd_check(args, out) -> int:
    P = _predicate(args)
    fs = io.load_tuple(args.tuple_file, P.sizes)
    bad = find_violation(P, fs)
    payload = {"polymorphism": bad is None, "violation": None}
    lines = ["polymorphism: yes" if bad is None else "polymorphism: no"]
    if bad is not None:
        output = bad.output(fs)
        payload["violation"] = {**bad.to_dict(), "output": list(output)}
        lines.append("violating matrix (row i feeds f_i):")
        lines += ["  " + " ".join(str(v) for v in row) for row in bad.rows]
        lines.append("output: " + " ".join(str(v) for v in output) + "  (not in P)")
    _emit(out, args, payload, lines)
    return EXIT_OK if bad is None else EXIT_NEGATIVE


def cmd_enumerate(args, out) -> int:
    P = _predicate(args)
    _cap(args.arity, args.arity_cap)
    if args.scan:
        raws = sorted(scan_polymorphisms(P, args.arity))
    else:
        raws = list(enumerate_raw(P, args.arity, args.budget, workers=args.workers))
    if args.count:
        _emit(out, args, {"n": args.arity, "count": len(raws)}, [str(len(raws))])
        return EXIT_OK
    Phi = _phi(args, P) if args.classify else None
    for raw in raws:
        fs = PolymorphismTuple._raw(P.sizes, args.arity, raw)
        if args.json:
            record = fs.to_dict()
            if Phi is not None:
                record["verdict"] = classify_polymorphism(P, Phi, fs).to_dict()
            out.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            suffix = f"  [{classify_polymorphism(P, Phi, fs).kind}]" if Phi is not None else ""
            out.write(_tables_text(fs) + suffix + "\n")
    return EXIT_OK


def cmd_trivial(args, out) -> int:
    P = _predicate(args)
    Phi = _phi(args, P)
    if args.arity is None:
        report = decide_trivial(P, Phi, args.budget, census=args.census, workers=args.workers)
    else:
        _cap(args.arity, args.arity_cap)
        report = check_trivial_for_n(P, Phi, args.arity, args.budget, census=args.census, workers=args.workers)
    lines = [f"Phi: {report.phi}", f"arity checked: {report.checked_arity}",
             f"trivial: {'yes' if report.trivial else 'no'}"]
    for w in report.witnesses:
        lines.append("witness (neither type): " + _tables_text(w))
    if report.census:
        lines += [f"  {kind}: {count}" for kind, count in sorted(report.census.items())]
    _emit(out, args, report.to_dict(), lines)
    return EXIT_OK if report.trivial else EXIT_NEGATIVE


def cmd_reduce(args, out) -> int:
    P = _predicate(args)
    Phi = _phi(args, P)
    rep = reduction_report(P, Phi, args.budget, args.latin_k_max, args.andor_limit, args.check_n2)
    lines = [f"Phi: {rep.phi}", f"trivial at arity 1: {'yes' if rep.trivial_at_1 else 'no'}"]
    if rep.trivial_at_1:
        settings = ", ".join(f"({i},{s})" for i, s in rep.closed_settings) or "none"
        lines.append(f"closed under setting (i, sigma): {settings}")
        lines.append("AND/OR polymorphism: " + (_tables_text(rep.and_or) if rep.and_or else "none"))
        lines.append("Latin-square polymorphism: " + (_tables_text(rep.latin_square) if rep.latin_square else "none"))
    else:
        lines.append("arity-1 witness: " + _tables_text(rep.witness_at_1))
        if rep.furthermore_witness is not None:
            lines.append(f"special-shape witness ({rep.furthermore_shape}): " + _tables_text(rep.furthermore_witness))
    if rep.trivial_at_2 is not None:
        lines.append(f"trivial at arity 2: {'yes' if rep.trivial_at_2 else 'no'}")
    _emit(out, args, rep.to_dict(), lines)
    return EXIT_OK if rep.trivial_at_1 else EXIT_NEGATIVE


def cmd_atlas(args, out) -> int:
    ms = args.m if args.m is not None else list(range(1, args.m_max + 1))
    if any(m < 1 for m in ms):
        raise ArgumentError("m must be >= 1")
    rows = atlas(sorted(set(ms)), args.budget, scan_max_m=args.scan_max_m)
    records = [r.record() for r in rows]
    figures = []
    if args.figures:
        # matplotlib is only imported when figures are requested
        from .plotting import write_atlas_figures
        figures = write_atlas_figures(rows, args.figures, args.figure_format)
    if args.json:
        out.write(io.dumps({"rows": records, "figures": [str(p) for p in figures]}))
    else:
        fields = list(records[0]) if records else ["m", "W_mask", "W", "tags", "item", "neg_trivial",
                                                   "id_trivial", "brute_neg_trivial", "brute_id_trivial",
                                                   "count_n0", "count_n1", "count_n2", "scan", "agree"]
        buf = _stdio.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, delimiter="," if args.format == "csv" else "\t",
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        out.write(buf.getvalue())
        for p in figures:
            print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK if all(r.agrees for r in rows) else EXIT_NEGATIVE


def cmd_impossibility(args, out) -> int:
    P = _predicate(args)
    if args.case1 is not None:
        P.require_non_degenerate()
        fs = construct_witness_case1(P, *args.case1)
        payload = {"construction": "closed-under-setting", "witness": fs.to_dict()}
        _emit(out, args, payload, ["witness: " + _tables_text(fs)])
        return EXIT_NEGATIVE
    if args.arity is not None:
        _cap(args.arity, args.arity_cap)
        verdict = check_impossibility_unanimity(P, args.arity, args.budget, args.workers)
    else:
        verdict = decide_impossibility(P, args.budget, args.latin_k_max, args.tight_exponent,
                                       args.witness_table_limit, args.workers)
    lines = [f"impossibility domain: {'yes' if verdict.is_impossibility_domain else 'no'}",
             f"decided by: {verdict.source}"]
    if verdict.certified is not None:
        lines.append(f"complete (trivial at arity 1): {'yes' if verdict.certified else 'no'}")
    if verdict.witness is not None:
        lines.append(f"unanimous witness of arity {verdict.witness.n}: " + _tables_text(verdict.witness))
    _emit(out, args, verdict.to_dict(), lines)
    return EXIT_OK if verdict.is_impossibility_domain else EXIT_NEGATIVE


COMMANDS = {
    "check": cmd_check,
    "enumerate": cmd_enumerate,
    "trivial": cmd_trivial,
    "reduce": cmd_reduce,
    "atlas": cmd_atlas,
    "impossibility": cmd_impossibility,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0) and EXIT_INPUT
    except (BudgetExceededError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ArgumentError, PolytrivError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
