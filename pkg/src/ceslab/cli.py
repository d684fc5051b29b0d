"""Command-line front end.

Subcommands: eval, sweep, classify, optimize, figures.  Data goes to stdout
or to files under --out; diagnostics go to stderr.  Exit codes: 0 on
success, 1 for scenario or usage problems, 2 when a numeric error stops a
computation.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .asymptotics import AsymptoticQuantity, SweepGrid, classify_regime, tfp
from .errors import CesLabError, InvalidScenarioError
from .marginal import marginal_products
from .policy import policy_outcome
from .production import elasticity_of_substitution, output
from .scenario import (
    load_scenario,
    reproduce_figures,
    run_scenario,
    scenario_chart,
    write_atomic_text,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; we reserve 2 for numeric
    # failures, so route usage problems to exit code 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _print_pairs(pairs) -> None:
    width = max(len(name) for name, _ in pairs)
    for name, value in pairs:
        if isinstance(value, float):
            value = f"{value:.12g}"
        print(f"{name:<{width}}  {value}")


def _cmd_eval(args) -> int:
    scn = load_scenario(args.scenario)
    tech, bundle = scn.technology, scn.bundle
    report = marginal_products(tech, bundle)
    pairs = [
        ("Y", output(tech, bundle)),
        ("sigma", elasticity_of_substitution(tech)),
        ("MP_K", report.mp_K),
        ("MP_KAGI", report.mp_K_agi),
        ("MP_Lh", report.mp_L_h),
        ("MP_LAGI", report.mp_L_agi),
        ("wage_ratio", report.wage_ratio),
        ("share_K", report.share_K),
        ("share_KAGI", report.share_K_agi),
        ("share_Lh", report.share_L_h),
        ("share_LAGI", report.share_L_agi),
        ("TFP", tfp(tech, bundle)),
    ]
    _print_pairs(pairs)
    return 0


def _cmd_sweep(args) -> int:
    scn = load_scenario(args.scenario)
    table = run_scenario(scn)
    stem = args.scenario.rsplit("/", 1)[-1]
    stem = stem[:-5] if stem.endswith(".json") else stem
    written = []
    if args.format in ("csv", "both"):
        path = f"{args.out}/{stem}.csv"
        write_atomic_text(path, table.to_csv_text())
        written.append(path)
    if args.format in ("svg", "both"):
        path = f"{args.out}/{stem}.svg"
        write_atomic_text(path, scenario_chart(table, scn))
        written.append(path)
    for path in written:
        print(path)
    return 0


def _cmd_classify(args) -> int:
    scn = load_scenario(args.scenario)
    if scn.sweep is None or scn.sweep.grid != "geometric" \
            or scn.sweep.parameter != "K_agi":
        raise InvalidScenarioError(
            "classify needs a geometric sweep over K_agi"
        )
    grid = SweepGrid(scn.sweep.values(), scn.bundle)
    verdict = classify_regime(scn.technology, grid,
                              AsymptoticQuantity(args.quantity))
    limit = "-" if verdict.limit_value is None else f"{verdict.limit_value:.12g}"
    _print_pairs([
        ("quantity", verdict.quantity.value),
        ("fitted_exponent", verdict.fitted_exponent),
        ("limit_class", verdict.limit_class.value),
        ("limit_value", limit),
        ("claim", verdict.claim),
        ("matches_claim", "yes" if verdict.matches_claim else "no"),
    ])
    return 0


def _cmd_optimize(args) -> int:
    scn = load_scenario(args.scenario)
    if scn.policy is None:
        raise InvalidScenarioError("optimize needs a policy section")
    bracket = tuple(args.bracket) if args.bracket else scn.bracket
    if bracket is None:
        raise InvalidScenarioError(
            "optimize needs a bracket, either in the scenario's optimize "
            "section or via --bracket"
        )
    outcome = policy_outcome(scn.policy, scn.technology, scn.bundle,
                             bracket=bracket)
    _print_pairs([
        ("k_star", outcome.k_star),
        ("welfare", outcome.welfare),
        ("foc_residual", outcome.foc_residual),
        ("at_boundary", "yes" if outcome.at_boundary else "no"),
        ("ubi", outcome.ubi),
        ("tax_revenue", outcome.tax_revenue),
        ("consumption", outcome.consumption),
    ])
    return 0


def _cmd_figures(args) -> int:
    formats = ("csv", "svg") if args.format == "both" else (args.format,)
    tables = reproduce_figures(args.out, formats=formats)
    for stem in tables:
        for fmt in formats:
            print(f"{args.out}/{stem}.{fmt}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ceslab",
        description="Numerical laboratory for a four-factor CES production "
                    "economy with AGI capital and AGI labor.",
    )
    parser.add_argument("--version", action="version",
                        version=f"ceslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one bundle: output, marginal "
                                    "products, shares, TFP")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("sweep", help="run the scenario sweep and write CSV/SVG")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("classify", help="classify limiting behavior along "
                                        "the scenario's K_agi sweep")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--quantity", required=True,
                   choices=[q.value for q in AsymptoticQuantity])
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("optimize", help="solve the public AGI-capital "
                                        "welfare problem")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"),
                   help="override the scenario's optimize bracket")
    p.set_defaults(handler=_cmd_optimize)

    p = sub.add_parser("figures", help="regenerate the four standard figure "
                                       "panels")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    p.set_defaults(handler=_cmd_figures)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_:  # --help exits 0, usage errors exit 1
        return int(exit_.code or 0)
    try:
        return args.handler(args)
    except InvalidScenarioError as err:
        print(f"ceslab: scenario error: {err}", file=sys.stderr)
        return 1
    except CesLabError as err:
        print(f"ceslab: numeric error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
