#!/usr/bin/env python3
"""Command-line front end for Shell Averages."""
import argparse
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from shell_averages import __version__
from shell_averages.angular.wigner import Parity, set_factorial_cap, sum_rule_lhs, sum_rule_rhs
from shell_averages.counting.core import h_count, mean_s_squared_closed, total_states
from shell_averages.counting.generating import ShellConfig, expand_generating
from shell_averages.energy.averages import (
    average_energy, average_energy_sd, spin_average, spin_average_sd, two_electron_term_table
)
from shell_averages.energy.forms import E_BASIS, F_BASIS, EnergyForm
from shell_averages.energy.parametrization import (
    AomParams, ShellPair, SlaterParams, convert_form, e_to_f, f_to_e, params_from_json
)
from shell_averages.oracle.core import determinant_matrix
from shell_averages.shared.config import (
    DECIMAL_DIGITS, DEFAULT_MAX_ELL, GENERATING_ELL_CAP, MATRIX_DIMENSION_CAP, OUTPUT_FORMATS, SHELL_LETTERS
)
from shell_averages.shared.errors import ShellAveragesError
from shell_averages.shared.numerics import parse_rational
from shell_averages.shared.report import dump_json, exact_string, save_report, value_record, write_csv
from shell_averages.shared.settings import load_settings
from shell_averages.verification import run_verification

logger = logging.getLogger("shell_averages.launcher")

BASES = [E_BASIS, F_BASIS]
COUNT_VIEWS = ["spin", "ms", "msml"]

DEFAULTS = {
    "format": "json",
    "decimal": False,
    "digits": DECIMAL_DIGITS,
    "max_ell": DEFAULT_MAX_ELL,
    "max_n": None,
    "generating_cap": GENERATING_ELL_CAP,
    "matrix_cap": MATRIX_DIMENSION_CAP,
    "factorial_cap": None,
    "verbose": False,
    "quiet": False,
}


@dataclass
class Output:
    """What a command produces: a JSON payload, the same data as CSV rows, and an exit code."""
    payload: dict
    rows: list[list] = field(default_factory=list)
    code: int = 0


# --- argument types ---------------------------------------------------------

def parse_shell(text: str) -> int:
    """Shell given as a spectroscopic letter (s, p, d, ...) or a non-negative integer."""
    key = text.strip().lower()
    if key in SHELL_LETTERS:
        return SHELL_LETTERS[key]
    try:
        ell = int(key)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid shell {text!r}: use s, p, d, f, g, h, i or an integer") from None
    if ell < 0:
        raise argparse.ArgumentTypeError(f"invalid shell {text!r}: l must be non-negative")
    return ell


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_rational_list(text: str) -> list[Fraction]:
    try:
        return [parse_rational(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def parse_assignments(text: str) -> dict[str, Fraction]:
    """'sigma=1,pi=1/2' -> {'sigma': 1, 'pi': 1/2}."""
    result = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=value, got {part!r}")
        try:
            result[key.strip()] = parse_rational(value)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from None
    return result


def parse_max_n(text: str) -> int | None:
    if text.strip().lower() == "all":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'all', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("--max-n must be non-negative")
    return value


# --- helpers ----------------------------------------------------------------

def _form_payload(form: EnergyForm) -> dict:
    return {**form.to_json(), "text": str(form)}


def _form_rows(form: EnergyForm, prefix: list | None = None) -> list[list]:
    prefix = prefix or []
    return [prefix + [form.basis.key(label), str(value)] for label, value in form.coefficients.items()]


def _spin_text(twice: int) -> str:
    return str(Fraction(twice, 2))


# --- commands ---------------------------------------------------------------

def cmd_count(args, options) -> Output:
    table = expand_generating(args.ell, options["generating_cap"])
    electrons = [args.n] if args.n is not None else list(range(table.capacity + 1))
    for n in electrons:
        ShellConfig(args.ell, n)
    records, rows = [], []
    if args.by == "spin":
        rows.append(["N", "2S", "count"])
        for n in electrons:
            for twice_s in (ts for ts in reversed(table.twice_ms_values(n)) if ts >= 0):
                count = h_count(args.ell, n, twice_s)
                records.append({"n": n, "twice_s": twice_s, "S": _spin_text(twice_s), "count": count})
                rows.append([n, twice_s, count])
    elif args.by == "ms":
        rows.append(["N", "2MS", "count"])
        for n in electrons:
            for twice_ms in reversed(table.twice_ms_values(n)):
                count = table.g(n, twice_ms)
                records.append({"n": n, "twice_ms": twice_ms, "MS": _spin_text(twice_ms), "count": count})
                rows.append([n, twice_ms, count])
    else:
        rows.append(["N", "2MS", "ML", "count"])
        for n in electrons:
            for (twice_ms, ml), count in sorted(table.f_counts(n).items(), reverse=True):
                records.append({"n": n, "twice_ms": twice_ms, "ML": ml, "count": count})
                rows.append([n, twice_ms, ml, count])
    payload = {"ell": args.ell, "by": args.by, "rows": records}
    if args.n is not None:
        payload["total_states"] = total_states(args.ell, args.n)
        payload["mean_s_squared"] = value_record(mean_s_squared_closed(args.ell, args.n),
                                                 options["decimal"], options["digits"])
    return Output(payload, rows)


def _read_params(args) -> SlaterParams | AomParams:
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as f:
                return params_from_json(json.load(f))
        except json.JSONDecodeError as e:
            raise ShellAveragesError(f"Cannot read {args.input}: {e}") from e
    if args.ell is None:
        raise ShellAveragesError("transform needs --ell unless --input is given")
    if args.source is None or args.values is None:
        raise ShellAveragesError("transform needs --from and --values, or --input")
    pair = ShellPair(args.ell, args.ell if args.ell_prime is None else args.ell_prime)
    labels = pair.basis(args.source).labels()
    if len(args.values) != len(labels):
        raise ShellAveragesError(
            f"{pair.basis(args.source)} has {len(labels)} parameters, got {len(args.values)} values"
        )
    cls = SlaterParams if args.source == F_BASIS else AomParams
    return cls(pair, dict(zip(labels, args.values)))


def cmd_transform(args, options) -> Output:
    params = _read_params(args)
    result = f_to_e(params) if isinstance(params, SlaterParams) else e_to_f(params)
    payload = {"input": params.to_json(), "output": result.to_json()}
    if options["decimal"]:
        payload["output"]["decimal"] = {
            result.basis.key(label): value.to_decimal(options["digits"]) for label, value in result.values.items()
        }
    rows = [["parameter", "value"]] + [[result.basis.key(label), str(value)] for label, value in result.values.items()]
    return Output(payload, rows)


def cmd_avg(args, options) -> Output:
    ShellConfig(args.ell, args.n)
    if args.spin is None:
        form = average_energy(args.ell, args.n)
        sd = average_energy_sd(args.ell, args.n) if args.ell >= 1 else None
    else:
        form = spin_average(args.ell, args.n, args.spin)
        sd = spin_average_sd(args.ell, args.n, args.spin) if args.ell >= 1 else None
    form = convert_form(form, args.basis)
    payload = {"ell": args.ell, "n": args.n, "form": _form_payload(form)}
    if args.spin is not None:
        payload["twice_s"] = args.spin
        payload["S"] = _spin_text(args.spin)
        payload["states"] = h_count(args.ell, args.n, args.spin) * (args.spin + 1)
    if sd is not None:
        payload["sd"] = sd.to_json()
    if args.eval is not None:
        values = {form.basis.parse_key(key): value for key, value in args.eval.items()}
        payload["value"] = value_record(form.evaluate(values), True, options["digits"])
    return Output(payload, [["parameter", "coefficient"]] + _form_rows(form))


def cmd_terms(args, options) -> Output:
    records, rows = [], [["term", "parameter", "coefficient"]]
    for term, form in two_electron_term_table(args.ell):
        form = convert_form(form, args.basis)
        records.append({"term": str(term), "twice_s": term.twice_s, "L": term.big_l, "form": _form_payload(form)})
        rows.extend(_form_rows(form, [str(term)]))
    return Output({"ell": args.ell, "basis": args.basis, "terms": records}, rows)


def cmd_sumrule(args, options) -> Output:
    if len(args.args) != 4:
        raise ShellAveragesError(f"--args needs four projections m,m',mu,mu'; got {len(args.args)}")
    lhs = sum_rule_lhs(args.ell, args.parity, *args.args)
    rhs = sum_rule_rhs(args.parity, *args.args)
    passed = lhs == rhs
    payload = {
        "ell": args.ell,
        "parity": args.parity.name.lower(),
        "args": args.args,
        "lhs": exact_string(lhs),
        "rhs": exact_string(rhs),
        "result": "PASS" if passed else "FAIL",
    }
    rows = [["lhs", "rhs", "result"], [exact_string(lhs), exact_string(rhs), payload["result"]]]
    return Output(payload, rows, 0 if passed else 1)


def cmd_verify(args, options) -> Output:
    report = run_verification(
        options["max_ell"], options["max_n"], progress=not options["quiet"],
        generating_cap=options["generating_cap"], matrix_cap=options["matrix_cap"],
    )
    if args.report:
        save_report(report.to_json(with_timing=True), Path(args.report))
    payload = report.to_json()
    rows = [["check", "passed", "cases", "failures"]]
    rows += [[c.name, c.passed, c.cases, c.failure_count] for c in report.checks]
    logger.info(f"verify: {payload['summary']['passed_checks']}/{payload['summary']['total_checks']} checks passed")
    return Output(payload, rows, 0 if report.passed else 1)


def cmd_emit_matrix(args, options) -> Output:
    matrix = determinant_matrix(args.ell, args.n, args.basis, options["matrix_cap"])
    if args.out is None:
        return Output(matrix.to_json(), matrix.csv_rows())
    out = Path(args.out)
    fmt = "csv" if out.suffix.lower() == ".csv" else options["format"]
    with open(out, "w", encoding="utf-8", newline="") as f:
        if fmt == "csv":
            write_csv(matrix.csv_rows(), f)
        else:
            dump_json(matrix.to_json(), f)
    logger.info(f"Wrote {matrix.dimension}x{matrix.dimension} matrix to {out}")
    summary = {"ell": args.ell, "n": args.n, "basis": args.basis, "dimension": matrix.dimension,
               "nonzero_elements": len(matrix.elements), "out": str(out)}
    return Output(summary, [list(summary), list(summary.values())])


COMMANDS: list[dict] = [
    {"name": "count", "desc": "State counts F, G and H of an nl^N shell", "handler": cmd_count},
    {"name": "transform", "desc": "Convert F^(k) <-> E^lambda parameters", "handler": cmd_transform},
    {"name": "avg", "desc": "Configuration or spin-resolved average energy", "handler": cmd_avg},
    {"name": "terms", "desc": "Two-electron term energies of an l^2 shell", "handler": cmd_terms},
    {"name": "sumrule", "desc": "Check one symmetrized/antisymmetrized sum rule", "handler": cmd_sumrule},
    {"name": "verify", "desc": "Run the invariant and oracle suite", "handler": cmd_verify},
    {"name": "emit-matrix", "desc": "Write the determinant-basis Coulomb matrix", "handler": cmd_emit_matrix},
]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_const", const=True, default=None, help="debug logging")
    common.add_argument("-q", "--quiet", action="store_const", const=True, default=None,
                        help="warnings only, no progress bars")
    common.add_argument("--config", metavar="PATH", help="key = value settings file")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="output format (default json)")
    common.add_argument("--decimal", action=argparse.BooleanOptionalAction, default=None,
                        help="add lossy decimal renderings of exact values")
    common.add_argument("--digits", type=int, default=None, help="significant digits for --decimal")

    parser = argparse.ArgumentParser(prog="shell-averages", description="Exact averages for nl^N configurations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    parsers = {}
    for command in COMMANDS:
        p = sub.add_parser(command["name"], help=command["desc"], description=command["desc"], parents=[common])
        p.set_defaults(handler=command["handler"])
        parsers[command["name"]] = p

    p = parsers["count"]
    p.add_argument("--ell", type=parse_shell, required=True, help="shell: s, p, d, f, ... or l")
    p.add_argument("--n", type=int, help="number of electrons (default: every N)")
    p.add_argument("--by", choices=COUNT_VIEWS, default="spin", help="H by S, G by M_S, or F by (M_S, M_L)")

    p = parsers["transform"]
    p.add_argument("--ell", type=parse_shell, default=None, help="l of the shell pair")
    p.add_argument("--ell-prime", type=parse_shell, default=None, help="l' of the shell pair (default l)")
    p.add_argument("--from", dest="source", choices=BASES, help="basis of the given values")
    p.add_argument("--values", type=parse_rational_list, help="comma-separated values in label order")
    p.add_argument("--input", metavar="PATH", help="JSON parameter record instead of --from/--values")

    p = parsers["avg"]
    p.add_argument("--ell", type=parse_shell, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--spin", type=int, default=None, metavar="2S", help="total spin, doubled")
    p.add_argument("--basis", choices=BASES, default=E_BASIS)
    p.add_argument("--eval", type=parse_assignments, default=None, metavar="NAME=VALUE,...",
                   help="evaluate the form, e.g. sigma=1,pi=1/2")

    p = parsers["terms"]
    p.add_argument("--ell", type=parse_shell, required=True)
    p.add_argument("--basis", choices=BASES, default=E_BASIS)

    p = parsers["sumrule"]
    p.add_argument("--ell", type=parse_shell, required=True)
    p.add_argument("--parity", type=Parity.parse, required=True, help="even or odd")
    p.add_argument("--args", type=parse_int_list, required=True, metavar="m,m',mu,mu'")

    p = parsers["verify"]
    p.add_argument("--max-ell", type=int, default=None, help=f"full suites up to this l (default {DEFAULT_MAX_ELL})")
    p.add_argument("--max-n", type=parse_max_n, default=None, help="largest N, or 'all'")
    p.add_argument("--report", metavar="PATH", help="also write a timestamped JSON report")

    p = parsers["emit-matrix"]
    p.add_argument("--ell", type=parse_shell, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", choices=BASES, default=F_BASIS)
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    return parser


def resolve_options(args, settings: dict) -> dict:
    """Explicit flags, then settings file values, then built-in defaults."""
    options = dict(DEFAULTS)
    options.update(settings)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return options


def _log_level(options: dict) -> int:
    if options["verbose"]:
        return logging.DEBUG
    return logging.WARNING if options["quiet"] else logging.INFO


def emit(output: Output, fmt: str, stream) -> None:
    if fmt == "csv":
        write_csv(output.rows, stream)
    else:
        dump_json(output.payload, stream)


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format='%(message)s', force=True)

    try:
        settings = load_settings(Path(args.config) if args.config else None)
        options = resolve_options(args, settings)
        logging.getLogger().setLevel(_log_level(options))
        if options["factorial_cap"] is not None:
            set_factorial_cap(options["factorial_cap"])
        output = args.handler(args, options)
    except ShellAveragesError as e:
        logger.error(f"error: {e}")
        return 2
    except OSError as e:
        logger.error(f"error: {e}")
        return 2

    buffer = io.StringIO()
    emit(output, options["format"], buffer)
    stdout.write(buffer.getvalue())
    return output.code


if __name__ == "__main__":
    sys.exit(main())
