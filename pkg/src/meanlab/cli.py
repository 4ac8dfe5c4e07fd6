"""Command-line front end.

Exit status: 0 when the check passes (or the classification finds a
quasi-arithmetic mean), 1 when it fails, 2 on any error.
"""

from __future__ import annotations

import argparse
import math
import shlex
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .characterize import (Tolerances, Verdict, classify_symmetric, classify_weighted,
                           construct_from_kernel, construct_from_polynomial, fe_residual,
                           FEInstance)
from .characterize.fe import SCHEMA_VERSION
from .errors import ConfigError, MeanlabError
from .exprlang import as_generator
from .means import (GeneratorPair, Interval, WeightedSample, bajraktarevic_mean,
                    quasi_arithmetic_mean)
from .report import emit_report
from .wronskians import QuadraticPolynomial, wronskian_profile

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
COMMANDS = ("eval-mean", "check-fe", "construct", "classify", "report")


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so config-file errors can carry line numbers
    def error(self, message):
        raise _ArgumentError(message)


def _add_common(p: argparse.ArgumentParser, *, fmt_default: str = "json") -> None:
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
    p.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                   help="override one tolerance (fe, identity, derivative, equivalence, "
                        "root, quadrature); repeatable")
    p.add_argument("--seed", type=int, default=42)


def _domain(p, required=True):
    p.add_argument("--domain", nargs=2, type=float, metavar=("LO", "HI"), required=required)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meanlab",
                     description="Quasi-arithmetic and Bajraktarevic means: evaluation, "
                                 "functional-equation checks and classification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("eval-mean", help="evaluate a weighted mean")
    p.add_argument("--kind", choices=("quasi", "bajraktarevic"), default="quasi")
    p.add_argument("--phi", help="generator of the quasi-arithmetic mean")
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--points", nargs="+", type=float, required=True)
    p.add_argument("--weights", nargs="+", type=float)
    _domain(p, required=False)
    _add_common(p)

    p = sub.add_parser("check-fe", help="residual of the functional equation on a grid")
    p.add_argument("--phi", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--grid", type=int, default=64)
    _domain(p)
    _add_common(p)

    p = sub.add_parser("construct", help="build a solution and check it")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--kernel", nargs=5, type=float, metavar=("P", "A", "B", "C", "D"))
    src.add_argument("--poly", nargs=3, type=float, metavar=("ALPHA", "BETA", "GAMMA"))
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--grid", type=int, default=64)
    _domain(p)
    _add_common(p)

    p = sub.add_parser("classify", help="decide equality with a quasi-arithmetic mean")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--level", choices=("symmetric", "weighted"), default="weighted")
    _domain(p)
    _add_common(p)

    p = sub.add_parser("report", help="tabulate W10, W20, W21, Phi and Psi")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--grid", type=int, default=257)
    _domain(p)
    _add_common(p, fmt_default="csv")

    p = sub.add_parser("run", help="run a job described by a config file")
    p.add_argument("config", help="key-value config file")
    return parser


# -- config files -------------------------------------------------------------

def config_to_argv(path: str | Path, parser: argparse.ArgumentParser | None = None
                   ) -> tuple[list[str], dict[str, int]]:
    """Translate a config file into argv.

    Each non-blank line is ``key value ...`` (or ``key = value``); ``#``
    starts a comment. A ``command`` directive selects the subcommand and
    every other key names a flag of that subcommand.
    Returns the argv and a map from flag name to source line.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    command = None
    directives: list[tuple[int, str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
        if not tokens:
            continue
        key, values = tokens[0], tokens[1:]
        if "=" in key and key != "=":
            key, _, first = key.partition("=")
            values = ([first] if first else []) + values
        if values and values[0] == "=":
            values = values[1:]
        key = key.strip().replace("_", "-")
        if key == "command":
            if len(values) != 1 or values[0] not in COMMANDS:
                raise ConfigError(f"{path}:{lineno}: command must be one of {', '.join(COMMANDS)}")
            if command is not None:
                raise ConfigError(f"{path}:{lineno}: duplicate command directive")
            command = values[0]
            continue
        directives.append((lineno, key, values))
    if command is None:
        raise ConfigError(f"{path}: missing 'command' directive")

    parser = parser or build_parser()
    sub = _subparser(parser, command)
    known = {opt[2:] for action in sub._actions for opt in action.option_strings
             if opt.startswith("--")}
    argv = [command]
    lines: dict[str, int] = {}
    for lineno, key, values in directives:
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown directive {key!r} for {command}")
        if key in lines and key != "tolerance":
            raise ConfigError(f"{path}:{lineno}: {key!r} already set on line {lines[key]}")
        lines.setdefault(key, lineno)
        argv.append(f"--{key}")
        argv.extend(values)
    return argv, lines


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


# -- commands ------------------------------------------------------------------

def _tolerances(overrides: Sequence[str]) -> Tolerances:
    values = {}
    for item in overrides:
        name, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"--tolerance expects NAME=VALUE, got {item!r}")
        try:
            values[name.strip()] = float(raw)
        except ValueError:
            raise ConfigError(f"tolerance {name!r} must be a number, got {raw!r}") from None
    return Tolerances.from_env(overrides=values)


def _check_t(t: float) -> float:
    if not (math.isfinite(t) and 0.0 < t < 1.0):
        raise ConfigError(f"--t must lie strictly between 0 and 1, got {t!r}")
    return t


def _interval(args) -> Interval:
    lo, hi = args.domain
    return Interval(lo, hi)


def _emit(args, report) -> None:
    if args.output:
        emit_report(report, args.format, args.output)
    else:
        emit_report(report, args.format, sys.stdout)


def _cmd_eval_mean(args, tol: Tolerances) -> int:
    sample = WeightedSample(args.points, args.weights)
    if args.kind == "quasi":
        if not args.phi:
            raise ConfigError("eval-mean --kind quasi needs --phi")
        value = quasi_arithmetic_mean(as_generator(args.phi), sample, tol.root)
    else:
        if not (args.f and args.g):
            raise ConfigError("eval-mean --kind bajraktarevic needs --f and --g")
        if args.domain:
            domain = _interval(args)
        else:
            lo, hi = min(sample.points), max(sample.points)
            domain = Interval(lo, hi, 0.0) if lo < hi else Interval(lo - 1.0, lo + 1.0)
        value = bajraktarevic_mean(GeneratorPair(as_generator(args.f), as_generator(args.g), domain),
                                   sample, tol.root)
    _emit(args, {"schema_version": SCHEMA_VERSION, "kind": args.kind, "mean": float(value)})
    return EXIT_OK


def _cmd_check_fe(args, tol: Tolerances) -> int:
    instance = FEInstance(as_generator(args.phi), as_generator(args.f), _check_t(args.t),
                          _interval(args))
    instance.check_monotone()
    report = fe_residual(instance, args.grid)
    _emit(args, report)
    return EXIT_OK if report.max_residual <= tol.fe else EXIT_FAIL


def _cmd_construct(args, tol: Tolerances) -> int:
    domain = _interval(args)
    t = _check_t(args.t)
    if args.kernel:
        instance = construct_from_kernel(*args.kernel, domain, t=t)
    else:
        instance = construct_from_polynomial(QuadraticPolynomial(*args.poly), domain, t)
    report = fe_residual(instance, args.grid)
    _emit(args, report)
    return EXIT_OK if report.max_residual <= tol.fe else EXIT_FAIL


def _cmd_classify(args, tol: Tolerances) -> int:
    pair = GeneratorPair(as_generator(args.f), as_generator(args.g), _interval(args))
    if args.level == "symmetric":
        report = classify_symmetric(pair, tol)
    else:
        report = classify_weighted(pair, tol, seed=args.seed)
    _emit(args, report)
    ok = report.verdict in (Verdict.SYMMETRIC_QA, Verdict.WEIGHTED_QA)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_report(args, tol: Tolerances) -> int:
    profile = wronskian_profile(as_generator(args.f), as_generator(args.g), _interval(args),
                                args.grid)
    _emit(args, profile)
    return EXIT_OK


_COMMANDS = {
    "eval-mean": _cmd_eval_mean,
    "check-fe": _cmd_check_fe,
    "construct": _cmd_construct,
    "classify": _cmd_classify,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    lines: dict[str, int] = {}
    source = None
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            source = args.config
            argv, lines = config_to_argv(args.config, parser)
            args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_ERROR
        return _COMMANDS[args.command](args, _tolerances(args.tolerance))
    except _ArgumentError as exc:
        print(f"meanlab: error: {_locate(str(exc), source, lines)}", file=sys.stderr)
        return EXIT_ERROR
    except (MeanlabError, ValueError) as exc:
        print(f"meanlab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _locate(message: str, source, lines: dict[str, int]) -> str:
    if source is None:
        return message
    for key, lineno in lines.items():
        if f"--{key}" in message:
            return f"{source}:{lineno}: {message}"
    return f"{source}: {message}"


if __name__ == "__main__":
    sys.exit(main())
