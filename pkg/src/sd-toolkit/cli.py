"""
Command-line interface for sd-toolkit.

This file focuses on parsing arguments and dispatching to the math modules.
Each command handler returns (payload, human lines, ok); `main` turns that
into a result record, console output and an exit code:

- 0: success, or every verification held
- 1: a mathematical check failed
- 2: usage error (bad flag, out-of-range value, malformed input file)
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from . import __version__
from .cache import SweepCache
from .config import (
    CONFIG_KEYS,
    build_effective_config,
    dump_default_config_yaml,
    resolve_cache_dir,
)
from .finite_field import FieldSpec, field_of_order, is_prime
from .padic import (
    ZpPoly,
    format_digits,
    from_rational,
    hensel_lift,
    residual_valuation,
    unit_characterization_check,
)
from .records import STATUS_CHECK_FAILED, STATUS_OK, RunRecorder, render_json
from .sd_classify import (
    FieldDescriptor,
    classify_fields,
    classify_power,
    compute_sd_group,
    cube_map_char2,
    cube_map_outside_aut,
    descriptor_from_dict,
    f5_characterizations,
    finite,
    odd_prime_powers,
    root_of_unity_equivalences,
    sweep_summary,
)
from .sd_maps import (
    ORACLE_MODES,
    MapTable,
    brute_force_sd_maps,
    image_is_subfield,
    is_sd_map,
    power_exponent_of,
    power_map,
    structural_report,
)
from .symbolic import (
    alt_char_constraint,
    check_small_values,
    coefficient_strings,
    format_poly,
    sd_value,
    tchar_constraint,
    tiff5_identity,
    verify_closed_forms,
)
from .utils import (
    MathCheckFailure,
    UserError,
    ensure_file_exists,
    normalize_path,
    parse_int_list,
    parse_rational,
    validate_int_range,
    validate_positive_int,
)


# Exhaustive scans build q-element tables or walk q^2 pairs.
MAX_EXHAUSTIVE_Q = 8192
# (q-1)! must still print as a JSON integer.
MAX_CENSUS_Q = 1024
MAX_SWEEP_Q = 20000
MAX_ORACLE_Q = 64
MAX_RECURRENCE_N = 2000
DIRECT_CHECK_LIMIT = 1024
MAX_LISTED_MAPS = 100
# Field orders are factored by trial division.
MAX_DESCRIPTOR_Q = 10**12

TOP_LEVEL_EXAMPLES = """Examples:
  python -m sd-toolkit group --q 5
  python -m sd-toolkit --json sweep --max-q 2000 --jobs 4
  python -m sd-toolkit power --m 3 --q 5
  python -m sd-toolkit power --m 6 --descriptor '{"kind": "algebraic_closure", "p": 2}'
  python -m sd-toolkit check-map map.json
  python -m sd-toolkit verify-identities --kmax 100
  python -m sd-toolkit hensel --p 7 --poly=-2,0,1 --x0 3 --prec 3
  python -m sd-toolkit padic-unit-check --p 5 --value 1/2 --count 5
  python -m sd-toolkit oracle --domain 5 --codomain 13 --mode pruned
  python -m sd-toolkit --dump-default-config

Global options (--json, --quiet, --config, ...) go before the command.
"""

GROUP_EXAMPLES = """Examples:
  python -m sd-toolkit group --q 5
  python -m sd-toolkit --json group --q 8
"""

SWEEP_EXAMPLES = """Examples:
  python -m sd-toolkit sweep --max-q 30
  python -m sd-toolkit --json sweep --max-q 2000 --jobs 4
  python -m sd-toolkit --cache-dir .cache sweep --max-q 500 --no-cache
"""

POWER_EXAMPLES = """Examples:
  python -m sd-toolkit power --m 3 --q 5
  python -m sd-toolkit power --m 9 --descriptor '{"kind": "rational_function_field", "p": 3}'
  python -m sd-toolkit power --m 6 --descriptor '{"kind": "custom", "p": 2, "root_orders": [5]}'

Descriptor kinds: finite (q), algebraic_closure (p), rational_function_field (p),
rationals, custom (p, root_orders), opaque (p).
"""

CHECK_MAP_EXAMPLES = """Examples:
  python -m sd-toolkit check-map cube_f5.json

Map file format:
  {"domain": {"p": 5, "ell": 1, "modulus": [0, 1]},
   "codomain": {"p": 5, "ell": 1, "modulus": [0, 1]},
   "images": [[0], [1], [3], [2], [4]]}
Images are listed in canonical element order; bare integers are accepted for prime fields.
"""

F5_EXAMPLES = """Examples:
  python -m sd-toolkit f5 --q 5
  python -m sd-toolkit f5 --q 25
"""

RECURRENCE_EXAMPLES = """Examples:
  python -m sd-toolkit recurrence --n 6
"""

VERIFY_EXAMPLES = """Examples:
  python -m sd-toolkit verify-identities
  python -m sd-toolkit verify-identities --kmax 20
"""

HENSEL_EXAMPLES = """Examples:
  python -m sd-toolkit hensel --p 7 --poly=-2,0,1 --x0 3 --prec 3
  python -m sd-toolkit hensel --p 5 --poly "1,0,1" --x0 2

Coefficients are low-to-high: -2,0,1 is x^2 - 2. Write --poly=... when the first
coefficient is negative. Digits print little-endian in p.
"""

UNIT_CHECK_EXAMPLES = """Examples:
  python -m sd-toolkit padic-unit-check --p 5 --value 2
  python -m sd-toolkit padic-unit-check --p 5 --value 1/5 --count 3
"""

ORACLE_EXAMPLES = """Examples:
  python -m sd-toolkit oracle --domain 5
  python -m sd-toolkit oracle --domain 8
  python -m sd-toolkit oracle --domain 7 --codomain 13 --mode pruned
"""

ROOTS_EXAMPLES = """Examples:
  python -m sd-toolkit roots --m 3 --q 16
  python -m sd-toolkit roots --m 15 --q 49
"""

CUBE_EXAMPLES = """Examples:
  python -m sd-toolkit cube --q 5
  python -m sd-toolkit cube --q 32
  python -m sd-toolkit cube --descriptor '{"kind": "algebraic_closure", "p": 2}'
"""

# Options that never change a command's result; kept out of the input echo.
_GLOBAL_DESTS = {
    "command",
    "quiet",
    "verbose",
    "json",
    "record",
    "config",
    "dump_default_config",
}

# Config keys that feed a command's result and so belong in its input echo.
_COMMAND_CONFIG_KEYS: Dict[str, Tuple[str, ...]] = {
    "verify-identities": ("kmax",),
    "hensel": ("precision",),
    "padic-unit-check": ("precision", "count"),
    "oracle": ("oracle_budget",),
}

Handler = Callable[[argparse.Namespace, Dict[str, Any], RunRecorder], Tuple[Dict[str, Any], List[str], bool]]


def _verbosity_from_args(args: argparse.Namespace) -> str:
    """Resolve global verbosity mode from top-level flags."""

    if getattr(args, "quiet", False):
        return "quiet"
    if getattr(args, "verbose", False):
        return "verbose"
    return "normal"


def _field(q: int, flag: str, limit: Optional[int] = MAX_EXHAUSTIVE_Q) -> FieldSpec:
    """Build F_q from a flag value, naming the flag on failure."""

    validate_int_range(q, flag, 2, limit)
    try:
        return field_of_order(q)
    except UserError as exc:
        raise UserError(f"{flag} {q}: {exc}") from exc


def _prime(p: int, flag: str) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise UserError(f"{flag} must be a prime (got {p!r}).")
    return p


def _descriptor(args: argparse.Namespace) -> FieldDescriptor:
    if args.q is not None:
        validate_int_range(args.q, "--q", 2, MAX_DESCRIPTOR_Q)
        try:
            return finite(args.q)
        except UserError as exc:
            raise UserError(f"--q {args.q}: {exc}") from exc
    try:
        raw = json.loads(args.descriptor)
    except json.JSONDecodeError as exc:
        raise UserError(f"--descriptor is not valid JSON: {exc}") from exc
    return descriptor_from_dict(raw)


def _yes(flag: Optional[bool]) -> str:
    if flag is None:
        return "-"
    return "yes" if flag else "no"


def _kv_lines(pairs: List[Tuple[str, Any]]) -> List[str]:
    width = max(len(key) for key, _ in pairs)
    return [f"{key.ljust(width)}  {value}" for key, value in pairs]


def _join(values: Any) -> str:
    values = list(values)
    return ", ".join(str(v) for v in values) if values else "-"


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------


def _cmd_group(args, cfg, recorder):
    spec = _field(args.q, "--q")
    if spec.p == 2 and spec.q > MAX_CENSUS_Q:
        raise UserError(
            f"--q must be <= {MAX_CENSUS_Q} in characteristic 2 (the census is (q-1)!)."
        )
    recorder.log(f"Scanning exponents of {spec.name}", level="debug")
    result = compute_sd_group(spec)

    pairs: List[Tuple[str, Any]] = [("field", f"{spec.name} (p={spec.p}, ell={spec.ell})")]
    if result.power_map_regime:
        pairs.append(("exponents", _join(result.exponents)))
    else:
        census = str(result.census)
        shown = census if len(census) <= 60 else f"{len(census)} digits"
        pairs.append(("census", f"(q-1)! = {shown}"))
    pairs.append(("aut", _join(result.aut_exponents)))
    pairs.append(("exceptional", _yes(result.is_exceptional)))
    return result.to_dict(), _kv_lines(pairs), True


def _cmd_sweep(args, cfg, recorder):
    max_q = validate_int_range(args.max_q, "--max-q", 3, MAX_SWEEP_Q)
    jobs = cfg["jobs"]
    orders = odd_prime_powers(max_q)

    cache: Optional[SweepCache] = None
    cached: Dict[int, Any] = {}
    if cfg["use_cache"]:
        cache = SweepCache.in_dir(resolve_cache_dir(cfg), __version__, recorder.log)
        cached = cache.load()

    missing = [q for q in orders if q not in cached]
    recorder.log(
        f"{len(orders) - len(missing)} of {len(orders)} fields cached; "
        f"classifying {len(missing)} with {jobs} worker(s)",
        level="debug" if not missing else "info",
    )
    computed = {row.q: row for row in classify_fields(missing, jobs)}
    if cache is not None and computed:
        written = cache.store(computed.values())
        recorder.log(f"Cached {written} entries in {cache.path}", level="debug")

    rows = [cached[q] if q in cached else computed[q] for q in orders]
    summary = sweep_summary(rows)

    lines = [f"{'q':>6}  {'exceptional':<11}  {'aut':<24}  exponents"]
    for row in rows:
        lines.append(
            f"{row.q:>6}  {_yes(row.is_exceptional):<11}  "
            f"{_join(row.aut_exponents):<24}  {_join(row.exponents)}"
        )
    lines.append(
        f"{summary['count']} fields; exceptional: {_join(summary['exceptional_qs'])}; "
        f"{'ok' if summary['ok'] else 'CHECK FAILED'}"
    )
    payload = {"rows": [row.to_dict() for row in rows], "summary": summary}
    return payload, lines, summary["ok"]


def _cmd_power(args, cfg, recorder):
    m = validate_positive_int(args.m, "--m")
    descriptor = _descriptor(args)
    result = classify_power(m, descriptor)

    direct: Optional[bool] = None
    if descriptor.order is not None and descriptor.order <= DIRECT_CHECK_LIMIT:
        recorder.log(f"Cross-checking w^{m} on {descriptor.name} directly", level="debug")
        direct = is_sd_map(power_map(field_of_order(descriptor.order), m)).holds

    payload = result.to_dict()
    payload["descriptor"] = descriptor.to_dict()
    payload["direct_check"] = direct
    ok = direct is None or direct == result.is_sd

    lines = _kv_lines(
        [
            ("map", f"w -> w^{m}"),
            ("field", descriptor.name),
            ("sd-map", _yes(result.is_sd)),
            ("case", result.case_label if result.case_label is not None else "-"),
            ("direct check", _yes(direct)),
        ]
    )
    return payload, lines, ok


def _cmd_check_map(args, cfg, recorder):
    path = ensure_file_exists(normalize_path(args.map_file), "Map file")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UserError(f"Map file {path} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise UserError(f"Failed to read map file {path}: {exc}") from exc

    table = MapTable.from_dict(raw)
    if table.domain.q > MAX_EXHAUSTIVE_Q:
        raise UserError(f"Map domains are limited to {MAX_EXHAUSTIVE_Q} elements.")
    verdict = is_sd_map(table)
    report = structural_report(table)

    witness = "-"
    if verdict.witness is not None:
        witness = f"x={verdict.witness[0]}, y={verdict.witness[1]} ({verdict.reason})"
    lines = _kv_lines(
        [
            ("map", f"{table.domain.name} -> {table.codomain.name}"),
            ("sd-map", _yes(verdict.holds)),
            ("witness", witness),
            ("injective", _yes(report.injective)),
            ("fixes 0", _yes(report.fixes_zero)),
            ("fixes 1", _yes(report.fixes_one)),
            ("odd", _yes(report.odd)),
            ("multiplicative", _yes(report.multiplicative)),
            ("additive", _yes(report.additive)),
        ]
    )
    payload = {
        "map": {"domain": table.domain.to_dict(), "codomain": table.codomain.to_dict()},
        "verdict": verdict.to_dict(),
        "structure": report.to_dict(),
    }
    return payload, lines, verdict.holds


def _cmd_f5(args, cfg, recorder):
    spec = _field(args.q, "--q")
    result = f5_characterizations(spec)
    lines = _kv_lines(
        [
            ("field", spec.name),
            ("Aut < SD", _yes(result.aut_strictly_smaller)),
            ("squares map is SD", _yes(result.squares_map_is_sd)),
            ("sqrt(-1) generates", _yes(result.sqrt_minus1_generates)),
            ("agrees with q == 5", _yes(result.agrees)),
        ]
    )
    return result.to_dict(), lines, result.agrees


def _cmd_recurrence(args, cfg, recorder):
    n = validate_int_range(args.n, "--n", 0, MAX_RECURRENCE_N)
    value = sd_value(n)
    rendered = value.format("u")
    payload = {
        "n": n,
        "value": rendered,
        "numerator": coefficient_strings(value.num),
        "denominator": coefficient_strings(value.den),
    }
    return payload, [f"f({n}) = {rendered}"], True


def _cmd_verify_identities(args, cfg, recorder):
    kmax = cfg["kmax"]
    recorder.log(f"Checking closed forms up to k = {kmax}", level="debug")
    closed = verify_closed_forms(kmax)
    small = check_small_values()
    tchar = tchar_constraint()
    alt = alt_char_constraint()
    tiff5 = tiff5_identity()

    ok = closed.ok and small
    payload = {
        "closed_forms": closed.to_dict(),
        "small_values": small,
        "tchar_constraint": format_poly(tchar, "u"),
        "alt_char_constraint": format_poly(alt, "u"),
        "tiff5_identity": format_poly(tiff5, "x"),
        "ok": ok,
    }
    closed_text = "ok" if closed.ok else f"FAILED at k={closed.first_failure} ({closed.failed_check})"
    lines = _kv_lines(
        [
            (f"closed forms (k <= {kmax})", closed_text),
            ("f(0)..f(6)", "ok" if small else "FAILED"),
            ("f(2)f(3) - f(6)", format_poly(tchar, "u")),
            ("f(8) - f(2)f(4)", format_poly(alt, "u")),
            ("cube identity", format_poly(tiff5, "x")),
        ]
    )
    return payload, lines, ok


def _cmd_hensel(args, cfg, recorder):
    p = _prime(args.p, "--p")
    precision = cfg["precision"]
    coeffs = parse_int_list(args.poly, "--poly")
    if len(coeffs) < 2:
        raise UserError("--poly needs at least a linear polynomial (two coefficients).")
    f = ZpPoly.from_ints(coeffs, p, precision)
    root = hensel_lift(f, args.x0, precision)
    residual = residual_valuation(f, root)
    ok = residual >= precision

    payload = {
        "root": root.to_dict(),
        "digits_text": format_digits(root),
        "residual_valuation": None if residual == float("inf") else int(residual),
        "ok": ok,
    }
    lines = _kv_lines(
        [
            ("root", format_digits(root)),
            ("residual valuation", "inf" if residual == float("inf") else int(residual)),
        ]
    )
    return payload, lines, ok


def _cmd_padic_unit_check(args, cfg, recorder):
    p = _prime(args.p, "--p")
    value = parse_rational(args.value, "--value")
    if value == 0:
        raise UserError("--value must be nonzero.")
    u = from_rational(value, p, cfg["precision"])
    report = unit_characterization_check(u, cfg["count"])

    lines = _kv_lines(
        [
            ("value", f"{value} in Q_{p} ({format_digits(u)})"),
            ("unit", _yes(report.is_unit)),
            ("exponents", _join(report.exponents)),
            ("roots found", _join(_yes(found) for found in report.roots_found)),
            ("check", "ok" if report.ok else "FAILED"),
        ]
    )
    return report.to_dict(), lines, report.ok


def _cmd_oracle(args, cfg, recorder):
    domain = _field(args.domain, "--domain", MAX_ORACLE_Q)
    codomain_q = args.domain if args.codomain is None else args.codomain
    codomain = _field(codomain_q, "--codomain")
    recorder.log(
        f"Enumerating SD-maps {domain.name} -> {codomain.name} ({args.mode} mode)",
        level="debug",
    )
    maps = brute_force_sd_maps(domain, codomain, args.mode, cfg["oracle_budget"])

    exponents: Optional[List[Optional[int]]] = None
    if domain == codomain:
        exponents = [power_exponent_of(table) for table in maps]
    subfield_images: Optional[bool] = None
    if domain.p == codomain.p and domain.p != 2:
        subfield_images = all(image_is_subfield(table, require_sd=False) for table in maps)

    listed = maps[:MAX_LISTED_MAPS]
    payload = {
        "domain": domain.to_dict(),
        "codomain": codomain.to_dict(),
        "mode": args.mode,
        "count": len(maps),
        "maps": [table.to_dict()["images"] for table in listed],
        "truncated": len(maps) > len(listed),
        "power_exponents": exponents,
        "images_are_subfields": subfield_images,
    }
    pairs: List[Tuple[str, Any]] = [
        ("maps", f"{domain.name} -> {codomain.name}"),
        ("mode", args.mode),
        ("sd-maps found", len(maps)),
    ]
    if exponents is not None and len(maps) <= MAX_LISTED_MAPS:
        pairs.append(("power exponents", _join("-" if k is None else k for k in exponents)))
    if subfield_images is not None:
        pairs.append(("images are subfields", _yes(subfield_images)))
    return payload, _kv_lines(pairs), True


def _cmd_roots(args, cfg, recorder):
    m = validate_int_range(args.m, "--m", 2)
    spec = _field(args.q, "--q")
    record = root_of_unity_equivalences(m, spec)
    lines = _kv_lines(
        [
            ("field", spec.name),
            ("m", f"{m} = {spec.p}^{record.a} * {record.m_prime}"),
            ("w^m not injective", _yes(record.non_injective)),
            ("nontrivial m-th root", _yes(record.has_mth_root)),
            ("nontrivial m'-th root", _yes(record.has_m_prime_th_root)),
            ("contains subfield", _yes(record.contains_subfield)),
            ("subfield degree", record.subfield_degree if record.subfield_degree else "-"),
            ("equivalent", _yes(record.equivalent)),
        ]
    )
    return record.to_dict(), lines, record.equivalent


def _cmd_cube(args, cfg, recorder):
    descriptor = _descriptor(args)
    cube = classify_power(3, descriptor)

    spec: Optional[FieldSpec] = None
    if descriptor.order is not None and descriptor.order <= MAX_EXHAUSTIVE_Q:
        spec = field_of_order(descriptor.order)
    direct: Optional[bool] = None
    outside_aut: Optional[bool] = None
    char2_rule: Optional[bool] = None
    if spec is not None:
        outside_aut = cube_map_outside_aut(spec)
        if spec.q <= DIRECT_CHECK_LIMIT:
            direct = is_sd_map(power_map(spec, 3)).holds
        if spec.p == 2:
            char2_rule = cube_map_char2(spec)

    ok = all(flag is None or flag == cube.is_sd for flag in (direct, char2_rule))
    payload = {
        "field": descriptor.name,
        "descriptor": descriptor.to_dict(),
        "cube_is_sd": cube.is_sd,
        "case_label": cube.case_label,
        "outside_aut": outside_aut,
        "direct_check": direct,
        "char2_rule": char2_rule,
        "ok": ok,
    }
    lines = _kv_lines(
        [
            ("field", descriptor.name),
            ("w^3 is SD", _yes(cube.is_sd)),
            ("outside Aut", _yes(outside_aut)),
            ("direct check", _yes(direct)),
            ("odd-degree rule", _yes(char2_rule)),
        ]
    )
    return payload, lines, ok


COMMANDS: Dict[str, Handler] = {
    "group": _cmd_group,
    "sweep": _cmd_sweep,
    "power": _cmd_power,
    "check-map": _cmd_check_map,
    "f5": _cmd_f5,
    "recurrence": _cmd_recurrence,
    "verify-identities": _cmd_verify_identities,
    "hensel": _cmd_hensel,
    "padic-unit-check": _cmd_padic_unit_check,
    "oracle": _cmd_oracle,
    "roots": _cmd_roots,
    "cube": _cmd_cube,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_subparser(subparsers, name: str, help_text: str, epilog: str) -> argparse.ArgumentParser:
    return subparsers.add_parser(
        name,
        help=help_text,
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )


def _add_field_choice(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--q", type=int, default=None, help="Finite field order (a prime power).")
    group.add_argument(
        "--descriptor",
        help="JSON field descriptor, e.g. '{\"kind\": \"algebraic_closure\", \"p\": 2}'.",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sd-toolkit",
        description="SD-maps over finite fields: classification, oracles, identities and p-adic lifting.",
        epilog=TOP_LEVEL_EXAMPLES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    verbosity_group = parser.add_mutually_exclusive_group()
    verbosity_group.add_argument(
        "--quiet",
        action="store_true",
        help="Suppress non-error console logs.",
    )
    verbosity_group.add_argument(
        "--verbose",
        action="store_true",
        help="Show debug-level console logs.",
    )
    parser.add_argument("--json", action="store_true", help="Print the result record as JSON.")
    parser.add_argument(
        "--timing",
        action="store_true",
        default=argparse.SUPPRESS,
        help="Include wall time and the log timeline in the output.",
    )
    parser.add_argument("--record", help="Also write the full result record (with timing) to this path.")
    parser.add_argument("--config", help="Optional YAML config (root keys or an sd_toolkit: wrapper).")
    parser.add_argument(
        "--cache-dir",
        dest="cache_dir",
        default=argparse.SUPPRESS,
        help="Sweep cache directory (default: ~/.cache/sd-toolkit or $SD_TOOLKIT_CACHE_DIR).",
    )
    parser.add_argument(
        "--dump-default-config",
        action="store_true",
        help="Print the default YAML config and exit.",
    )

    subparsers = parser.add_subparsers(dest="command", required=False)

    group = _add_subparser(subparsers, "group", "Compute SD(F_q) by exponent scan.", GROUP_EXAMPLES)
    group.add_argument("--q", type=int, required=True, help="Field order (a prime power).")

    sweep = _add_subparser(
        subparsers, "sweep", "Classify every odd prime power up to --max-q.", SWEEP_EXAMPLES
    )
    sweep.add_argument("--max-q", dest="max_q", type=int, required=True, help="Largest q to classify.")
    sweep.add_argument(
        "--jobs",
        type=int,
        default=argparse.SUPPRESS,
        help="Worker processes (default: 1). Output does not depend on it.",
    )
    sweep.add_argument(
        "--no-cache",
        dest="use_cache",
        action="store_false",
        default=argparse.SUPPRESS,
        help="Neither read nor write the sweep cache.",
    )

    power = _add_subparser(
        subparsers, "power", "Classify the power map w -> w^m on a field.", POWER_EXAMPLES
    )
    power.add_argument("--m", type=int, required=True, help="Exponent m >= 1.")
    _add_field_choice(power)

    check_map = _add_subparser(
        subparsers, "check-map", "Check a tabulated map from a JSON file.", CHECK_MAP_EXAMPLES
    )
    check_map.add_argument("map_file", help="Path to the map JSON.")

    f5 = _add_subparser(subparsers, "f5", "Evaluate the three F_5 characterizations.", F5_EXAMPLES)
    f5.add_argument("--q", type=int, required=True, help="Odd field order.")

    recurrence = _add_subparser(
        subparsers, "recurrence", "Print f(n) as a rational function of u.", RECURRENCE_EXAMPLES
    )
    recurrence.add_argument("--n", type=int, required=True, help="Index n >= 0.")

    verify = _add_subparser(
        subparsers, "verify-identities", "Run the symbolic identity suite.", VERIFY_EXAMPLES
    )
    verify.add_argument(
        "--kmax",
        type=int,
        default=argparse.SUPPRESS,
        help="Check closed forms for k <= kmax (default: 100).",
    )

    hensel = _add_subparser(
        subparsers, "hensel", "Lift a simple root mod p to Z_p.", HENSEL_EXAMPLES
    )
    hensel.add_argument("--p", type=int, required=True, help="Prime p.")
    hensel.add_argument("--poly", required=True, help="Integer coefficients, low-to-high.")
    hensel.add_argument("--x0", type=int, required=True, help="Simple root modulo p.")
    hensel.add_argument(
        "--prec",
        dest="precision",
        type=int,
        default=argparse.SUPPRESS,
        help="Digits to compute (default: 32).",
    )

    unit_check = _add_subparser(
        subparsers,
        "padic-unit-check",
        "Check the n-th-root characterization of p-adic units.",
        UNIT_CHECK_EXAMPLES,
    )
    unit_check.add_argument("--p", type=int, required=True, help="Prime p.")
    unit_check.add_argument("--value", required=True, help="Nonzero rational m or m/n.")
    unit_check.add_argument(
        "--count",
        type=int,
        default=argparse.SUPPRESS,
        help="Number of exponents 1 + k p (p-1) to test (default: 5).",
    )
    unit_check.add_argument(
        "--prec",
        dest="precision",
        type=int,
        default=argparse.SUPPRESS,
        help="Digits of precision (default: 32).",
    )

    oracle = _add_subparser(
        subparsers, "oracle", "Enumerate SD-maps between two small fields.", ORACLE_EXAMPLES
    )
    oracle.add_argument("--domain", type=int, required=True, help="Domain field order.")
    oracle.add_argument("--codomain", type=int, default=None, help="Codomain order (default: domain).")
    oracle.add_argument(
        "--mode",
        choices=list(ORACLE_MODES),
        default="oracle",
        help="oracle=all injections with pruning, pruned=multiplicative candidates only.",
    )
    oracle.add_argument(
        "--budget",
        dest="oracle_budget",
        type=int,
        default=argparse.SUPPRESS,
        help="Maximum search nodes before giving up (default: 100000000).",
    )

    roots = _add_subparser(
        subparsers, "roots", "Root-of-unity equivalences for w -> w^m.", ROOTS_EXAMPLES
    )
    roots.add_argument("--m", type=int, required=True, help="Exponent m >= 2.")
    roots.add_argument("--q", type=int, required=True, help="Field order (a prime power).")

    cube = _add_subparser(subparsers, "cube", "Facts about the cube map w -> w^3.", CUBE_EXAMPLES)
    _add_field_choice(cube)

    return parser


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    raw_args = vars(args)
    return {key: raw_args[key] for key in CONFIG_KEYS if key in raw_args}


def _inputs_for_record(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    """Command inputs plus the config values that feed the result."""

    inputs = {
        key: value
        for key, value in vars(args).items()
        if key not in _GLOBAL_DESTS and key not in CONFIG_KEYS
    }
    for key in _COMMAND_CONFIG_KEYS.get(args.command, ()):
        inputs[key] = cfg[key]
    return inputs


def _attach_debug_logging(verbosity: str) -> Optional[logging.Handler]:
    """Route package debug logs (Hensel steps) to stderr in verbose mode."""

    if verbosity != "verbose":
        return None
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[debug] %(name)s: %(message)s"))
    package_logger = logging.getLogger(__package__)
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG)
    return handler


def _detach_debug_logging(handler: Optional[logging.Handler]) -> None:
    if handler is None:
        return
    package_logger = logging.getLogger(__package__)
    package_logger.removeHandler(handler)
    package_logger.setLevel(logging.NOTSET)


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.dump_default_config:
        try:
            print(dump_default_config_yaml())
        except UserError as exc:
            print(f"Error: {exc}", file=sys.stderr)
            return 2
        return 0
    if args.command is None:
        parser.error("a command is required (see --help)")

    verbosity = _verbosity_from_args(args)
    handler = _attach_debug_logging(verbosity)
    try:
        config_path = normalize_path(args.config) if args.config else None
        cfg = build_effective_config(config_path, _config_overrides(args))
        recorder = RunRecorder(
            tool_name="sd-toolkit",
            tool_version=__version__,
            command=args.command,
            inputs=_inputs_for_record(args, cfg),
            verbosity=verbosity,
        )

        payload, lines, ok = COMMANDS[args.command](args, cfg, recorder)
        status = STATUS_OK if ok else STATUS_CHECK_FAILED
        if not ok:
            recorder.log(f"{args.command}: mathematical check failed", level="error")

        if args.json:
            print(render_json(recorder.build_record(payload, status, cfg["timing"])))
        else:
            print("\n".join(lines))
            if cfg["timing"]:
                print(f"wall time: {recorder.elapsed():.3f}s")

        if args.record:
            record_path: Path = normalize_path(args.record)
            recorder.write_record(record_path, recorder.build_record(payload, status, True))
        return 0 if ok else 1
    except MathCheckFailure as exc:
        print(f"Check failed: {exc}", file=sys.stderr)
        return 1
    except UserError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2
    finally:
        _detach_debug_logging(handler)
