"""Command-line front end.

Every analysis is a subcommand with deterministic, timestamp-free output in
table, CSV (';'-separated), or JSON form; JSON numbers are emitted as
strings so no digit is lost in transit.  Working precision stays at
``--precision`` digits (default 40) while printed values are cut to
``--decimals`` fixed decimals (default 15, the usual comparison scale).

    zexpand sum --coeffs FILE --Z 2 --order 401
    zexpand report --coeffs FILE [--refs FILE] [--order N]
    zexpand round-experiment --coeffs FILE --round-to 12 [--order N]
    zexpand ratios --coeffs FILE [--n-min A] [--n-max B]
    zexpand fit --nodes FILE [--constants FILE] [--ladder 3/2,2,5/2] [--save-model OUT]
    zexpand eval (--preset critical-fit | --model FILE) --Z 1
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from decimal import Decimal

from . import analysis, coeffs, critical, series
from .errors import ZexpandError
from .numerics import (
    HALF_AWAY_FROM_ZERO,
    ROUNDED,
    TRUNCATE,
    TRUNCATED,
    PrecisionContext,
    format_fixed,
    format_half_exponent,
    parse_decimal,
    parse_half_exponent,
)

_MODE_TO_ARITHMETIC = {ROUNDED: HALF_AWAY_FROM_ZERO, TRUNCATED: TRUNCATE}


@dataclass(frozen=True)
class RunConfig:
    """Resolved run options shared by all subcommands."""

    precision: int
    rounding_mode: str
    output_format: str
    decimals: int

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.precision, _MODE_TO_ARITHMETIC[self.rounding_mode])


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        precision=args.precision,
        rounding_mode=args.mode,
        output_format=args.format,
        decimals=args.decimals,
    )


def _fix(x: Decimal, cfg: RunConfig) -> str:
    return format_fixed(x, cfg.decimals, cfg.rounding_mode, cfg.ctx)


def _sci(x: Decimal, cfg: RunConfig) -> str:
    return format(x, f".{cfg.decimals}E")


def _render(blocks: list[tuple[str, list[str], list[list[str]]]], fmt: str, command: str) -> str:
    """Render named blocks of string cells as an aligned table, CSV, or JSON."""
    if fmt == "json":
        payload: dict = {"command": command}
        for name, columns, rows in blocks:
            payload[name] = [dict(zip(columns, row)) for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    chunks = []
    for name, columns, rows in blocks:
        if fmt == "csv":
            lines = [f"# {name}", ";".join(columns)]
            lines.extend(";".join(row) for row in rows)
        else:
            widths = [max(len(col), *(len(row[i]) for row in rows)) if rows else len(col) for i, col in enumerate(columns)]
            lines = [f"[{name}]"]
            lines.append("  ".join(col.ljust(widths[i]) for i, col in enumerate(columns)).rstrip())
            for row in rows:
                lines.append("  ".join(row[i].ljust(widths[i]) for i in range(len(columns))).rstrip())
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


def _emit(args: argparse.Namespace, blocks, command: str) -> None:
    sys.stdout.write(_render(blocks, args.format, command))


def _load_refs(args: argparse.Namespace) -> list[analysis.ReferenceEnergy]:
    if args.refs:
        return analysis.load_references(args.refs)
    return analysis.bundled_references()


def cmd_sum(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = coeffs.load_table(args.coeffs)
    z = parse_decimal(args.Z, cfg.ctx)
    ev = series.weighted_sum(table, z, args.order, cfg.ctx, order=args.summation)
    blocks = [
        (
            "evaluation",
            ["Z", "lambda", "order", "scaled_sum", "energy", "remainder", "summation"],
            [[
                _fix(ev.Z, cfg),
                _fix(ev.lam, cfg),
                str(ev.order),
                _fix(ev.scaled_sum, cfg),
                _fix(ev.energy, cfg),
                _sci(ev.remainder, cfg),
                ev.summation_order,
            ]],
        )
    ]
    _emit(args, blocks, "sum")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = coeffs.load_table(args.coeffs)
    refs = _load_refs(args)
    order = args.order if args.order is not None else table.max_order
    rows: list[list[str]] = []
    failures: list[list[str]] = []
    for ref in refs:
        try:
            row = analysis.consistency_report(table, [ref], order, cfg.ctx)[0]
        except ZexpandError as exc:
            failures.append([ref.label, str(exc)])
            continue
        rows.append(
            [
                row.label,
                _fix(row.energy_pt, cfg),
                _fix(row.energy_ref, cfg),
                str(row.agreement_rounded),
                str(row.agreement_truncated),
            ]
        )
    blocks = [("report", ["label", "energy_pt", "energy_ref", "agree_rounded", "agree_truncated"], rows)]
    if failures:
        blocks.append(("errors", ["label", "message"], failures))
    _emit(args, blocks, "report")
    return 1 if failures else 0


def cmd_round_experiment(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = coeffs.load_table(args.coeffs)
    rounded_table = coeffs.round_decimals(table, args.round_to, cfg.rounding_mode)
    refs = _load_refs(args)
    order = args.order if args.order is not None else table.max_order
    rows: list[list[str]] = []
    failures: list[list[str]] = []
    for ref in refs:
        try:
            before = analysis.consistency_report(table, [ref], order, cfg.ctx)[0]
            after = analysis.consistency_report(rounded_table, [ref], order, cfg.ctx)[0]
        except ZexpandError as exc:
            failures.append([ref.label, str(exc)])
            continue
        stable = analysis.digit_agreement(before.energy_pt, after.energy_pt, cfg.rounding_mode, ctx=cfg.ctx)
        rows.append(
            [
                ref.label,
                _fix(before.energy_pt, cfg),
                _fix(after.energy_pt, cfg),
                str(stable),
                str(before.agreement_rounded),
                str(before.agreement_truncated),
                str(after.agreement_rounded),
                str(after.agreement_truncated),
                str(after.agreement_rounded - before.agreement_rounded),
                str(after.agreement_truncated - before.agreement_truncated),
            ]
        )
    columns = [
        "label",
        "energy_original",
        "energy_rounded_table",
        "stable_digits",
        "agree_rounded",
        "agree_truncated",
        "agree_rounded_after",
        "agree_truncated_after",
        "delta_rounded",
        "delta_truncated",
    ]
    blocks = [("round-experiment", columns, rows)]
    if failures:
        blocks.append(("errors", ["label", "message"], failures))
    _emit(args, blocks, "round-experiment")
    return 1 if failures else 0


def cmd_ratios(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = coeffs.load_table(args.coeffs)
    ratios, omitted = analysis.ratio_sequence(table, cfg.ctx)
    n_min = args.n_min if args.n_min is not None else 2
    n_max = args.n_max if args.n_max is not None else table.max_order
    estimate = analysis.estimate_radius(ratios, n_min, n_max, cfg.ctx)
    blocks = [
        ("ratios", ["n", "r_n"], [[str(n), _fix(r, cfg)] for n, r in ratios]),
    ]
    if omitted:
        blocks.append(("omitted", ["n", "reason"], [[str(n), "zero denominator"] for n in omitted]))
    blocks.append(
        (
            "estimate",
            ["lambda_star", "n_min", "n_max", "method"],
            [[_fix(estimate.lambda_star, cfg), str(estimate.window[0]), str(estimate.window[1]), estimate.method]],
        )
    )
    _emit(args, blocks, "ratios")
    return 0


def _default_ladder(nodes, constants, ctx) -> list[int]:
    lam_cr = parse_decimal(constants.lambda_cr, ctx)
    free = sum(1 for node in nodes if series.lambda_of(node.Z, ctx) < lam_cr)
    return [3 + i for i in range(free)]


def cmd_fit(args: argparse.Namespace) -> int:
    cfg = _config(args)
    nodes = critical.load_nodes(args.nodes, cfg.ctx)
    constants = critical.load_constants(args.constants) if args.constants else critical.bundled_constants()
    if args.ladder:
        ladder = [parse_half_exponent(token) for token in args.ladder.split(",")]
    else:
        ladder = _default_ladder(nodes, constants, cfg.ctx)
    result = critical.fit_puiseux(nodes, constants, ladder, cfg.ctx)
    model = result.model
    term_rows = [
        [format_half_exponent(two_k), _fix(coeff, cfg), "fixed" if i < model.fixed_count else "fitted"]
        for i, (two_k, coeff) in enumerate(model.terms)
    ]
    blocks = [
        ("model", ["exponent", "coefficient", "kind"], term_rows),
        (
            "diagnostics",
            ["lambda_cr", "condition", "nodes"],
            [[_fix(model.lambda_cr, cfg), _sci(result.condition, cfg), str(len(nodes))]],
        ),
    ]
    if args.save_model:
        critical.save_model(model, args.save_model)
    _emit(args, blocks, "fit")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if args.preset:
        model = critical.preset_model(args.preset, cfg.ctx)
    else:
        model = critical.load_model(args.model, cfg.ctx)
    z = parse_decimal(args.Z, cfg.ctx)
    lam = series.lambda_of(z, cfg.ctx)
    lt = critical.tilde_lambda(lam, model.lambda_cr, cfg.ctx)
    scaled = critical.eval_scaled(model, lam, cfg.ctx)
    energy = critical.eval_energy(model, z, cfg.ctx)
    blocks = [
        (
            "evaluation",
            ["Z", "lambda", "lambda_tilde", "scaled", "energy"],
            [[_fix(z, cfg), _fix(lam, cfg), _fix(lt, cfg), _fix(scaled, cfg), _fix(energy, cfg)]],
        )
    ]
    _emit(args, blocks, "eval")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--precision", type=int, default=40, help="working precision in significant digits (>= 30)")
    parser.add_argument("--mode", choices=[ROUNDED, TRUNCATED], default=ROUNDED, help="rounding mode for arithmetic and display")
    parser.add_argument("--format", choices=["table", "csv", "json"], default="table", help="output format")
    parser.add_argument("--decimals", type=int, default=15, help="displayed fixed decimals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zexpand", description="1/Z-expansion analysis toolkit for two-electron ions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="weighted partial sum at a given charge and order")
    _add_common(p)
    p.add_argument("--coeffs", required=True, help="coefficient file (n value lines)")
    p.add_argument("--Z", required=True, help="nuclear charge (decimal string)")
    p.add_argument("--order", type=int, required=True, help="highest series order N")
    p.add_argument("--summation", choices=[series.ASCENDING, series.DESCENDING], default=series.ASCENDING)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("report", help="digit agreement of weighted sums against reference energies")
    _add_common(p)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--refs", help="reference registry override (default: bundled)")
    p.add_argument("--order", type=int, help="series order (default: table maximum)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("round-experiment", help="re-run the report with coefficients rounded to d decimals")
    _add_common(p)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--refs", help="reference registry override (default: bundled)")
    p.add_argument("--round-to", type=int, required=True, help="decimals to keep in each coefficient")
    p.add_argument("--order", type=int, help="series order (default: table maximum)")
    p.set_defaults(func=cmd_round_experiment)

    p = sub.add_parser("ratios", help="coefficient ratios and the Domb-Sykes radius estimate")
    _add_common(p)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--n-min", type=int, help="window lower bound (default 2)")
    p.add_argument("--n-max", type=int, help="window upper bound (default: table maximum)")
    p.set_defaults(func=cmd_ratios)

    p = sub.add_parser("fit", help="interpolate a constrained half-integer-power model through energy nodes")
    _add_common(p)
    p.add_argument("--nodes", required=True, help="node file ('Z; E' lines)")
    p.add_argument("--constants", help="critical constants file (default: bundled)")
    p.add_argument("--ladder", help="comma-separated free exponents, e.g. 3/2,2,5/2 (default: consecutive from 3/2)")
    p.add_argument("--save-model", help="write the fitted model to this JSON file")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a stored or preset model at a charge")
    _add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=sorted(critical.PRESET_MODELS), help="bundled model name")
    group.add_argument("--model", help="model JSON file")
    p.add_argument("--Z", required=True, help="nuclear charge (decimal string)")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ZexpandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
