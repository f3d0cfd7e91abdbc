"""Command-line interface for the CCSG / cellular automata toolkit."""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from math import gcd
from typing import Any, NoReturn, TypeVar

import pydantic

from ccsg_automata.attack import reconstruct
from ccsg_automata.automata import ca_char_poly, ca_run, ca_solve_initial_state, cell_sequence
from ccsg_automata.config import get_settings
from ccsg_automata.exceptions import CcsgError, InconsistencyError, ParseError
from ccsg_automata.gf2poly import BinaryPolynomial, format_power, linear_complexity
from ccsg_automata.keystream import (
    b_advance_per_control_period,
    ccsg_decimate,
    ccsg_keystream,
    decimation_values,
    measure_period,
)
from ccsg_automata.lfsr import lfsr_sequence, parse_seed
from ccsg_automata.linearize import linearize_generator, linearize_spec, reverse_report
from ccsg_automata.log_config import setup_logging
from ccsg_automata.metrics import VERIFY_RUNS, dump_metrics
from ccsg_automata.models import (
    CaState,
    CcsgSpec,
    InterceptedWindow,
    LfsrSpec,
    LinearizationReport,
    RuleString,
)
from ccsg_automata.phaseshift import phase_shift_table
from ccsg_automata.utils import format_bits, parse_bits, parse_taps

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_INCONSISTENT = 3

T = TypeVar("T")


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with the usage code instead of argparse's 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_poly(text: str) -> BinaryPolynomial:
    """Accept ``"x^5 + x^2 + 1"`` or an ascending 0/1 coefficient string."""
    return BinaryPolynomial.parse(text)


def _flag(flag: str, parse: Callable[[str], T], text: str) -> T:
    """Run ``parse`` on a flag value, naming the flag in any error."""
    try:
        return parse(text)
    except ParseError as e:
        raise ParseError(f"{flag}: {e.message}", e.text, e.position) from e
    except pydantic.ValidationError as e:
        raise ParseError(f"{flag}: {e.errors()[0]['msg']}", text) from e


# ---------- Argument helpers


def _register(args: argparse.Namespace, n: int) -> LfsrSpec:
    poly = _flag(f"--p{n}", parse_poly, getattr(args, f"p{n}"))
    seed = _flag(f"--seed{n}", parse_seed, getattr(args, f"seed{n}"))
    try:
        return LfsrSpec(char_poly=poly, seed=seed)
    except pydantic.ValidationError as e:
        raise ParseError(f"--seed{n}: {e.errors()[0]['msg']}", getattr(args, f"seed{n}")) from e


def _generator(args: argparse.Namespace) -> CcsgSpec:
    taps = () if args.sg or args.taps is None else _flag("--taps", parse_taps, args.taps)
    r1 = _register(args, 1)
    r2 = _register(args, 2)
    try:
        return CcsgSpec(r1=r1, r2=r2, taps=taps)
    except pydantic.ValidationError as e:
        raise ParseError(f"--taps: {e.errors()[0]['msg']}", args.taps or "") from e


def _taps_width(args: argparse.Namespace) -> int | None:
    if args.sg or args.taps is None:
        return None
    return len(_flag("--taps", parse_taps, args.taps)) or None


def _rules(args: argparse.Namespace) -> RuleString:
    return _flag("--rules", lambda s: RuleString(rules=s.strip()), args.rules)


def _count(flag: str, value: int) -> int:
    if value < 0:
        raise ParseError(f"{flag}: must be non-negative, got {value}", str(value))
    return value


def _emit(args: argparse.Namespace, text_lines: Sequence[str], document: Any) -> None:
    if args.format == "structured":
        print(json.dumps(document, indent=2, default=str))
    else:
        for line in text_lines:
            print(line)


def _report_lines(report: LinearizationReport) -> list[str]:
    return [
        f"l1: {report.l1}",
        f"l2: {report.l2}",
        f"taps_width: {report.taps_width if report.taps_width is not None else 'none'}",
        f"exponent: {report.exponent}",
        f"reduced_exponent: {report.reduced_exponent}",
        f"coset_leader: {report.coset_leader}",
        f"coset_poly: {report.coset_poly}",
        f"coset_degenerate: {str(report.coset_degenerate).lower()}",
        f"full_width_taps: {str(report.full_width_taps).lower()}",
        f"base_pair: {report.base_pair[0]} {report.base_pair[1]}",
        f"final_pair: {report.final_pair[0]} {report.final_pair[1]}",
        f"doublings: {report.doublings}",
        f"final_char_poly: {format_power(report.final_char_poly)}",
    ]


def _report_document(report: LinearizationReport) -> dict:
    document = report.model_dump(mode="json")
    document["coset_poly"] = str(report.coset_poly)
    document["final_char_poly"] = str(report.final_char_poly)
    document["base_pair"] = [str(r) for r in report.base_pair]
    document["final_pair"] = [str(r) for r in report.final_pair]
    return document


# ---------- Commands


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = _generator(args)
    _count("--n", args.n)
    if args.stream == "a":
        bits = lfsr_sequence(spec.r1, args.n)
    elif args.stream == "b":
        bits = lfsr_sequence(spec.r2, args.n)
    elif args.stream == "bprime":
        bits = ccsg_decimate(spec, args.n)
    elif args.stream == "x":
        values = decimation_values(spec, args.n)
        _emit(args, [",".join(map(str, values))], {"stream": "x", "values": values})
        return EXIT_OK
    else:
        bits = ccsg_keystream(spec, args.n)
    text = format_bits(bits)
    _emit(args, [format_bits(bits, args.width)], {"stream": args.stream, "bits": text})
    return EXIT_OK


def _cmd_linearize(args: argparse.Namespace) -> int:
    p2 = _flag("--p2", parse_poly, args.p2)
    w = _taps_width(args)
    report = linearize_generator(args.l1, p2, w)
    lines = _report_lines(report)
    document = _report_document(report)
    if args.reverse:
        rev = reverse_report(args.l1, p2, w)
        lines += ["reverse:", *("  " + line for line in _report_lines(rev))]
        document["reverse"] = _report_document(rev)
    _emit(args, lines, document)
    return EXIT_OK


def _cmd_ca_run(args: argparse.Namespace) -> int:
    rules = _rules(args)
    state = _flag("--state", lambda s: CaState(cells=parse_bits(s)), args.state)
    _count("--n", args.n)
    if args.cell is not None:
        bits = cell_sequence(rules, state, args.cell, args.n)
        document = {"rules": str(rules), "cell": args.cell, "bits": format_bits(bits)}
        _emit(args, [format_bits(bits, args.width)], document)
        return EXIT_OK
    history = ca_run(rules, state, max(args.n - 1, 0))
    rows = [format_bits(row.tolist()) for row in history[: args.n]]
    _emit(args, rows, {"rules": str(rules), "rows": rows})
    return EXIT_OK


def _cmd_char_poly(args: argparse.Namespace) -> int:
    rules = _rules(args)
    poly = ca_char_poly(rules)
    _emit(args, [format_power(poly)], {"rules": str(rules), "char_poly": str(poly), "display": format_power(poly)})
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    spec = _generator(args)
    report = linearize_spec(spec)
    rules = report.final_pair[0]
    period = measure_period(spec)
    keystream = ccsg_keystream(spec, max(period, rules.n))
    solution = ca_solve_initial_state(rules, 1, keystream[: rules.n])
    replay = cell_sequence(rules, solution.state, 1, period)
    passed = replay == keystream[:period]
    lc = linear_complexity(ccsg_keystream(spec, 2 * period))
    advance = b_advance_per_control_period(spec)
    coprime = gcd(spec.r1.length, spec.r2.length) == 1
    outcome = "pass" if passed else "fail"
    VERIFY_RUNS.labels(outcome=outcome).inc()
    _emit(
        args,
        [
            outcome.upper(),
            f"automaton: {rules}",
            f"period: {period}",
            f"linear_complexity: {lc}",
            f"b_advance: {advance}",
            f"exponent: {report.exponent}",
            f"coprime_lengths: {str(coprime).lower()}",
        ],
        {
            "outcome": outcome,
            "automaton": str(rules),
            "initial_state": str(solution.state),
            "period": period,
            "linear_complexity": lc,
            "b_advance": advance,
            "exponent": report.exponent,
            "coprime_lengths": coprime,
        },
    )
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _cmd_phase_shifts(args: argparse.Namespace) -> int:
    table = phase_shift_table(_rules(args))
    lines = [f"{e.cell}, {e.reference}, {e.shift}" for e in table.entries]
    unrelated = " ".join(f"{cell}/{ref}" for cell, ref in table.unrelated)
    lines.append(f"unrelated: {unrelated or 'none'}")
    lines.append(f"order: {table.order if table.order is not None else 'none'}")
    _emit(args, lines, table.model_dump(mode="json"))
    return EXIT_OK


def _cmd_attack(args: argparse.Namespace) -> int:
    p2 = _flag("--p2", parse_poly, args.p2)
    w = _taps_width(args)
    bits = _flag("--window", parse_bits, args.window)
    window = InterceptedWindow(bits=bits, offset=_count("--offset", args.offset))
    report = linearize_generator(args.l1, p2, w)
    reverse_pair = reverse_report(args.l1, p2, w).final_pair if args.reverse else None
    result = reconstruct(
        report.final_pair, window, report.coset_poly, args.l1, reverse_pair=reverse_pair
    )
    counts = result.counts()
    lines = [
        f"known: {len(result)}",
        f"intercepted: {counts['intercepted']}",
        f"phase_shift: {counts['phase-shift']}",
        f"interleave_completion: {counts['interleave-completion']}",
        f"nt_estimate: {result.nt_estimate}",
        f"horizon: {result.horizon}",
        f"passes: {result.passes}",
    ]
    lines += [f"repetition_rate {rules}: {rate:.3f}" for rules, rate in result.repetition_rates.items()]
    document = result.model_dump(mode="json")
    document["counts"] = counts
    limit = get_settings().report_listing_limit
    if len(result) > limit:
        lines.append(f"listing suppressed ({len(result)} > REPORT_LISTING_LIMIT={limit})")
        document.pop("known")
        document.pop("sources")
    else:
        lines += [f"{p} {b} {result.sources[p]}" for p, b in result.known.items()]
    _emit(args, lines, document)
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "gen": _cmd_gen,
    "linearize": _cmd_linearize,
    "ca-run": _cmd_ca_run,
    "char-poly": _cmd_char_poly,
    "verify": _cmd_verify,
    "phase-shifts": _cmd_phase_shifts,
    "attack": _cmd_attack,
}


def run_command(args: argparse.Namespace) -> int:
    """Execute one parsed command and return its exit code."""
    try:
        return _COMMANDS[args.command](args)
    except InconsistencyError as e:
        logger.error(f"Inconsistency: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (CcsgError, pydantic.ValidationError) as e:
        logger.error(f"Error: {e}")
        print(f"error: {e}", file=sys.stderr)
        if args.verbose:
            raise
        return EXIT_USAGE


# ---------- Parser


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p1", type=str, required=True, help="Control register polynomial")
    parser.add_argument("--seed1", type=str, required=True, help="Control register seed, a_0 first")
    parser.add_argument("--p2", type=str, required=True, help="Generating register polynomial")
    parser.add_argument("--seed2", type=str, required=True, help="Generating register seed, b_0 first")
    _add_tap_flags(parser)


def _add_tap_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--taps", type=str, help="CCSG control stages, e.g. 0,1,2")
    group.add_argument("--sg", action="store_true", help="Plain shrinking generator (no taps)")


def _global_flags(with_defaults: bool) -> argparse.ArgumentParser:
    """Flags accepted both before and after the command name.

    Sub-command copies default to SUPPRESS so they never overwrite a value
    given before the command.
    """
    common = argparse.ArgumentParser(add_help=False)
    verbose_default: Any = False if with_defaults else argparse.SUPPRESS
    value_default: Any = None if with_defaults else argparse.SUPPRESS
    common.add_argument(
        "--verbose", "-v", action="store_true", default=verbose_default, help="Enable verbose logging"
    )
    common.add_argument(
        "--format",
        choices=["text", "structured"],
        default=value_default,
        help="Report format (default: DEFAULT_OUTPUT_FORMAT)",
    )
    common.add_argument(
        "--width", type=int, default=value_default, help="Fold bit strings every N characters"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ccsg-cli",
        description="Shrinking generator / CCSG linear cellular automata toolkit",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        parents=[_global_flags(with_defaults=True)],
    )
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to run")
    shared = [_global_flags(with_defaults=False)]

    # --- Command: gen ---
    gen = subparsers.add_parser(
        "gen", help="Generate keystream or intermediate sequences", parents=shared
    )
    _add_generator_flags(gen)
    gen.add_argument("--n", type=int, required=True, help="Number of symbols")
    gen.add_argument(
        "--stream",
        choices=["a", "b", "bprime", "x", "keystream"],
        default="keystream",
        help="Sequence to emit",
    )

    # --- Command: linearize ---
    lin = subparsers.add_parser("linearize", help="Build the 90/150 CA pair for (L1, P2, taps)", parents=shared)
    lin.add_argument("--l1", type=int, required=True, help="Control register length")
    lin.add_argument("--p2", type=str, required=True, help="Generating register polynomial")
    _add_tap_flags(lin)
    lin.add_argument("--reverse", action="store_true", help="Also report the reciprocal model")

    # --- Command: ca-run ---
    run = subparsers.add_parser("ca-run", help="Print successive CA states", parents=shared)
    run.add_argument("--rules", type=str, required=True, help="Rule string, 0 = 90, 1 = 150")
    run.add_argument("--state", type=str, required=True, help="Initial cell contents")
    run.add_argument("--n", type=int, required=True, help="Number of rows to print")
    run.add_argument("--cell", type=int, default=None, help="Print only this cell's output sequence")

    # --- Command: char-poly ---
    cp = subparsers.add_parser("char-poly", help="Characteristic polynomial of a CA", parents=shared)
    cp.add_argument("--rules", type=str, required=True, help="Rule string, 0 = 90, 1 = 150")

    # --- Command: verify ---
    ver = subparsers.add_parser("verify", help="Replay the keystream on its linear CA model", parents=shared)
    _add_generator_flags(ver)

    # --- Command: phase-shifts ---
    ps = subparsers.add_parser("phase-shifts", help="Phase shifts relative to the extreme cells", parents=shared)
    ps.add_argument("--rules", type=str, required=True, help="Rule string, 0 = 90, 1 = 150")

    # --- Command: attack ---
    att = subparsers.add_parser("attack", help="Reconstruct keystream from an intercepted window", parents=shared)
    att.add_argument("--l1", type=int, required=True, help="Control register length")
    att.add_argument("--p2", type=str, required=True, help="Generating register polynomial")
    _add_tap_flags(att)
    att.add_argument("--window", type=str, required=True, help="Intercepted bits")
    att.add_argument("--offset", type=int, default=0, help="Keystream index of the first bit")
    att.add_argument("--reverse", action="store_true", help="Add the reciprocal model")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Main CLI entry point."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    if args.format is None:
        args.format = settings.default_output_format
    setup_logging("DEBUG" if args.verbose else settings.log_level, settings.log_json)

    code = run_command(args)
    if settings.metrics_textfile:
        dump_metrics(settings.metrics_textfile)
    return code


if __name__ == "__main__":
    sys.exit(main())
