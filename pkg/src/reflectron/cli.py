"""Batch driver: tabulate, verify, predict, and reconcile from a shell.

Exit codes are CI-friendly.  0 means every check passed, 1 means the
invocation or its IO was bad, and 2 means a verified identity failed,
which for a proved identity doubles as an implementation-bug alarm.
Reports are deterministic: fixed row order, and worker count never
changes the bytes emitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .arith import fundamental_discriminants_in
from .cubicforms import enumerate_cubic_fields
from .fieldtables import compare_with_table, parse_field_table
from .quadforms import class_group
from .reflection import corollary5_predict, predict, verify_on3

_COMMANDS = ("classgroup", "cubic-tab", "verify-on", "predict", "corollary5", "check-table")

_DEFAULT_FORMAT = {
    "classgroup": "csv",
    "cubic-tab": "csv",
    "verify-on": "csv",
    "predict": "json",
    "corollary5": "json",
    "check-table": "json",
}


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: a command plus its bounds and IO options."""

    command: str
    dmax: int | None = None
    xmax: int | None = None
    ell: int | None = None
    d: int | None = None
    corollary5: bool = False
    table: str | None = None
    assume_complete_below: int | None = None
    out: str | None = None
    format: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.command not in _COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        for name in ("dmax", "xmax", "assume_complete_below"):
            bound = getattr(self, name)
            if bound is not None and bound < 1:
                raise ValueError(f"{name} must be positive")
        if self.format not in (None, "json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for
    # identity violations here, so surface usage problems as exceptions
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="reflectron", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, scope=False, workers=False):
        if scope:
            grp = p.add_mutually_exclusive_group(required=True)
            grp.add_argument("--d", type=int, help="single fundamental discriminant")
            grp.add_argument("--dmax", type=int, help="all fundamental 1 < |D| <= dmax")
        if workers:
            p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=None)

    p = sub.add_parser("classgroup", help="class group structures")
    common(p, scope=True)

    p = sub.add_parser("cubic-tab", help="tabulate cubic fields by discriminant")
    p.add_argument("--xmax", type=int, required=True, help="tabulate |disc| <= xmax")
    common(p, workers=True)

    p = sub.add_parser("verify-on", help="verify the cubic identity over a range")
    p.add_argument("--dmax", type=int, required=True)
    common(p, workers=True)

    p = sub.add_parser("predict", help="evaluate the identity's left side and targets")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--corollary5", action="store_true", help="ell = 5 aggregate form")
    common(p, scope=True)

    p = sub.add_parser("corollary5", help="the ell = 5 aggregate predictions")
    common(p, scope=True)

    p = sub.add_parser("check-table", help="reconcile predictions with a field table")
    p.add_argument("--table", required=True, help="CSV field table path")
    p.add_argument("--ell", type=int)
    p.add_argument("--corollary5", action="store_true")
    p.add_argument("--assume-complete-below", type=int, default=None)
    common(p, scope=True)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    workers = getattr(args, "workers", None)
    if workers is None:
        workers = int(os.environ.get("REFLECTRON_WORKERS", "1"))
    if args.command == "check-table" and not args.corollary5 and args.ell is None:
        raise _UsageError("check-table needs --ell (or --corollary5)")
    if getattr(args, "corollary5", False):
        ell = getattr(args, "ell", None)
        if ell is not None and ell != 5:
            raise _UsageError("--corollary5 requires --ell 5")
    return RunConfig(
        command=args.command,
        dmax=getattr(args, "dmax", None),
        xmax=getattr(args, "xmax", None),
        ell=getattr(args, "ell", 5 if args.command == "corollary5" else None),
        d=getattr(args, "d", None),
        corollary5=getattr(args, "corollary5", False) or args.command == "corollary5",
        table=getattr(args, "table", None),
        assume_complete_below=getattr(args, "assume_complete_below", None),
        out=args.out,
        format=args.format,
        workers=workers,
    )


def emit_report(results, format: str, columns: list[str] | None = None) -> str:
    """Serialize result rows with a stable field order.

    JSON keeps rows as given; CSV needs flat rows and emits the listed
    columns (defaulting to the first row's keys).
    """
    rows = list(results)
    if format == "json":
        return json.dumps(rows, indent=2) + "\n"
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    text = str(value)
    if "," in text or '"' in text:
        return '"' + text.replace('"', '""') + '"'
    return text


def _scope(config: RunConfig, *exclude: int):
    if config.d is not None:
        return [config.d]
    out = [
        d
        for d in fundamental_discriminants_in(-config.dmax, config.dmax)
        if abs(d) > 1 and d not in exclude
    ]
    return sorted(out, key=lambda d: (abs(d), d))


def _signed(fd) -> int:
    return fd.signed_value()


def _run_classgroup(config: RunConfig):
    rows = []
    for d in _scope(config):
        grp = class_group(d)
        divisors = "x".join(str(n) for n in grp.elementary_divisors) or "1"
        rows.append({"D": d, "h": grp.order, "divisors": divisors, "narrow": grp.narrow})
    return rows, ["D", "h", "divisors", "narrow"], 0


def _run_cubic_tab(config: RunConfig):
    tab = enumerate_cubic_fields(config.xmax, 0, workers=config.workers)
    rows = [
        {"disc": disc, "count": tab.counts[disc]}
        for disc in sorted(tab.counts, key=lambda t: (abs(t), t))
    ]
    return rows, ["disc", "count"], 0


def _run_verify_on(config: RunConfig):
    tab = enumerate_cubic_fields(27 * config.dmax, 0, workers=config.workers)
    rows = []
    failed = False
    for d in _scope(config, -3):
        report = verify_on3(d, tab)
        failed = failed or not report.holds
        rows.append(
            {
                "ell": 3,
                "D": d,
                "N3_Dstar": report.lhs_terms[0],
                "N3_27D": report.lhs_terms[1],
                "rhs": report.rhs,
                "verdict": "pass" if report.holds else "fail",
            }
        )
    columns = ["ell", "D", "N3_Dstar", "N3_27D", "rhs", "verdict"]
    return rows, columns, 2 if failed else 0


def _predictions(config: RunConfig):
    if config.corollary5:
        for d in _scope(config, 5, -5):
            if config.d is None and d % 5 == 0:
                continue
            yield corollary5_predict(d)
    else:
        for d in _scope(config, config.ell, -config.ell):
            yield predict(config.ell, d)


def _prediction_row(pred, format: str) -> dict:
    targets = [{"r2": fd.r2, "disc": _signed(fd)} for fd in pred.targets]
    if hasattr(pred, "d"):
        row = {"ell": 5, "D": pred.d, "lhs": pred.lhs_value, "targets": targets}
    else:
        row = {
            "ell": pred.ell,
            "D": pred.D,
            "g": pred.g,
            "dl_count": pred.dl_count,
            "lhs": pred.lhs_value,
            "targets": targets,
            "star_required": pred.star_required,
        }
    if format == "csv":
        row = {k: v for k, v in row.items() if k != "targets"}
        for i, fd in enumerate(pred.targets, start=1):
            row[f"target{i}"] = _signed(fd)
    return row


def _run_predict(config: RunConfig):
    format = config.format or _DEFAULT_FORMAT[config.command]
    rows = [_prediction_row(p, format) for p in _predictions(config)]
    if config.corollary5:
        columns = ["ell", "D", "lhs", "target1", "target2", "target3"]
    else:
        columns = ["ell", "D", "g", "dl_count", "lhs", "target1", "target2", "star_required"]
    return rows, columns, 0


def _run_check_table(config: RunConfig):
    with open(config.table, newline="") as handle:
        entries = parse_field_table(handle)
    rows = []
    failed = False
    for pred in _predictions(config):
        result = compare_with_table(
            pred, entries, assume_complete_below=config.assume_complete_below
        )
        failed = failed or result.verdict == "fail"
        rows.append(
            {
                "mode": result.mode,
                "ell": result.ell,
                "D": result.D,
                "expected": result.expected,
                "observed": result.observed,
                "missing": list(result.missing),
                "surplus": list(result.surplus),
                "verdict": result.verdict,
                "note": result.note,
            }
        )
    columns = ["mode", "ell", "D", "expected", "observed", "verdict"]
    return rows, columns, 2 if failed else 0


_RUNNERS = {
    "classgroup": _run_classgroup,
    "cubic-tab": _run_cubic_tab,
    "verify-on": _run_verify_on,
    "predict": _run_predict,
    "corollary5": _run_predict,
    "check-table": _run_check_table,
}


def run(config: RunConfig) -> int:
    """Execute one command and write its report; returns the exit code."""
    rows, columns, code = _RUNNERS[config.command](config)
    format = config.format or _DEFAULT_FORMAT[config.command]
    if format == "csv":
        rows = [{k: row[k] for k in columns} for row in rows]
    text = emit_report(rows, format, columns)
    if config.out:
        with open(config.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        config = _config_from_args(args)
        return run(config)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
