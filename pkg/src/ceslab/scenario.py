"""Scenario engine: declarative sweeps over the economy, tabulated.

A scenario pins a technology and a base bundle, sweeps one factor quantity
over a grid, optionally fans that sweep out over a family of parameter
values (a policy knob or rho itself), and evaluates named quantities at
every point.  Results land in a long-format ``ResultTable``: one row per
(family member, grid point), family values in the outer loop.

Quantity names come from a fixed registry; each maps to exactly one
function elsewhere in the package, so the engine never re-derives any
economics.  A point where a quantity raises one of our errors gets an
empty cell and a machine-readable code in the ``error`` column while the
rest of the row proceeds: one bad point should not kill a 10^8-wide sweep.

Scenario files are strict JSON: unknown keys anywhere are an error (a
typoed optional key would otherwise silently change meaning).  CSV output
is deterministic byte for byte: ``repr`` floats, a single provenance
comment carrying the package version and a scenario digest, no timestamps.
Files are written to a temp name and atomically renamed.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .asymptotics import tfp
from .charts import svg_line_chart
from .errors import CesLabError, InvalidScenarioError
from .marginal import labor_income_share, marginal_products
from .policy import (
    CrraUtility,
    LinearCost,
    LogUtility,
    PolicyConfig,
    QuadraticCost,
    agi_capital_tax,
    agi_output_share,
    consumption_support,
    ubi,
)
from .production import FACTOR_NAMES, CesTechnology, FactorBundle, output


def _mp_field(name: str) -> Callable[..., float]:
    def evaluate(tech: CesTechnology, bundle: FactorBundle, policy) -> float:
        return getattr(marginal_products(tech, bundle), name)

    return evaluate


#: quantity name -> evaluator(tech, bundle, policy).
REGISTRY: dict[str, Callable[..., float]] = {
    "Y": lambda tech, bundle, policy: output(tech, bundle),
    "Y_AGI": lambda tech, bundle, policy: agi_output_share(tech, bundle),
    "MP_K": _mp_field("mp_K"),
    "MP_KAGI": _mp_field("mp_K_agi"),
    "MP_Lh": _mp_field("mp_L_h"),
    "MP_LAGI": _mp_field("mp_L_agi"),
    "wage_ratio": _mp_field("wage_ratio"),
    "labor_share": lambda tech, bundle, policy: labor_income_share(tech, bundle),
    "TFP": lambda tech, bundle, policy: tfp(tech, bundle),
    "UBI": lambda tech, bundle, policy: ubi(policy, agi_output_share(tech, bundle)),
    "T_AGI": lambda tech, bundle, policy: agi_capital_tax(policy, bundle.K_agi),
    "C_h": lambda tech, bundle, policy: consumption_support(policy, tech, bundle),
}

#: quantities that cannot be evaluated without a policy section.
POLICY_QUANTITIES = frozenset({"UBI", "T_AGI", "C_h"})

#: policy fields a family axis may vary.
FAMILY_POLICY_PARAMETERS = (
    "redistribution_fraction",
    "ubi_admin_cost",
    "tax_rate",
    "tax_progressivity",
    "transfer",
)


@dataclass(frozen=True)
class SweepAxis:
    """The inner loop: one factor quantity over a linear or geometric grid."""

    parameter: str
    grid: str
    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.parameter not in FACTOR_NAMES:
            raise InvalidScenarioError(
                f"sweep parameter must be one of {FACTOR_NAMES}, "
                f"got {self.parameter!r}"
            )
        if self.grid not in ("geometric", "linear"):
            raise InvalidScenarioError(
                f"sweep grid must be 'geometric' or 'linear', got {self.grid!r}"
            )
        if not isinstance(self.points, int) or self.points < 1:
            raise InvalidScenarioError(
                f"sweep points must be a positive integer, got {self.points!r}"
            )
        for name, v in (("start", self.start), ("stop", self.stop)):
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise InvalidScenarioError(f"sweep {name} must be finite, got {v!r}")
        if self.points > 1 and not self.stop > self.start:
            raise InvalidScenarioError(
                f"sweep needs stop > start, got [{self.start!r}, {self.stop!r}]"
            )
        low = min(self.start, self.stop)
        if self.grid == "geometric" and low <= 0.0:
            raise InvalidScenarioError("a geometric grid needs positive bounds")
        if low < 0.0:
            raise InvalidScenarioError("factor quantities cannot go negative")

    def values(self) -> tuple[float, ...]:
        if self.points == 1:
            return (float(self.start),)
        if self.grid == "geometric":
            arr = np.geomspace(self.start, self.stop, self.points)
        else:
            arr = np.linspace(self.start, self.stop, self.points)
        return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class FamilyAxis:
    """The outer loop: a policy field or rho taking a handful of values."""

    parameter: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        allowed = FAMILY_POLICY_PARAMETERS + ("rho",)
        if self.parameter not in allowed:
            raise InvalidScenarioError(
                f"family parameter must be one of {allowed}, got {self.parameter!r}"
            )
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise InvalidScenarioError("a family needs at least one value")
        for v in values:
            if not math.isfinite(v):
                raise InvalidScenarioError(f"family values must be finite, got {v!r}")


@dataclass(frozen=True)
class Scenario:
    technology: CesTechnology
    bundle: FactorBundle
    outputs: tuple[str, ...] = ()
    sweep: SweepAxis | None = None
    family: FamilyAxis | None = None
    policy: PolicyConfig | None = None
    bracket: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        outputs = tuple(self.outputs)
        object.__setattr__(self, "outputs", outputs)
        for name in outputs:
            if name not in REGISTRY:
                raise InvalidScenarioError(
                    f"unknown output quantity {name!r}; known quantities: "
                    f"{', '.join(sorted(REGISTRY))}"
                )
        if self.policy is None:
            wanted = sorted(POLICY_QUANTITIES.intersection(outputs))
            if wanted:
                raise InvalidScenarioError(
                    f"outputs {', '.join(wanted)} need a policy section"
                )
            if self.family is not None and self.family.parameter != "rho":
                raise InvalidScenarioError(
                    f"family over {self.family.parameter!r} needs a policy section"
                )
        if self.bracket is not None:
            lo, hi = (float(self.bracket[0]), float(self.bracket[1]))
            object.__setattr__(self, "bracket", (lo, hi))
            if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 <= lo < hi):
                raise InvalidScenarioError(
                    f"optimize bracket needs 0 <= lo < hi, got {self.bracket!r}"
                )


@dataclass
class ResultTable:
    """Long-format results: named columns, one row per evaluated point, and
    a provenance string reproduced as the leading CSV comment."""

    columns: list[str]
    rows: list[list[Any]]
    provenance: str

    def column(self, name: str) -> list[Any]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv_text(self) -> str:
        lines = [f"# {self.provenance}", ",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_csv_cell(cell) for cell in row))
        return "\n".join(lines) + "\n"


def _csv_cell(cell: Any) -> str:
    if cell is None:
        return ""
    if isinstance(cell, str):
        return cell
    return repr(float(cell))


def _describe_utility(u) -> dict[str, Any]:
    if isinstance(u, LogUtility):
        return {"form": "log"}
    return {"form": "crra", "gamma": u.gamma}


def _describe_cost(c) -> dict[str, Any]:
    if isinstance(c, QuadraticCost):
        return {"form": "quadratic", "coefficient": c.coefficient}
    return {"form": "linear", "coefficient": c.coefficient}


def describe_scenario(scenario: Scenario) -> dict[str, Any]:
    """Canonical plain-dict form of a scenario, used for digests and
    provenance headers.  Round-trips through ``scenario_from_dict``."""
    tech = scenario.technology
    desc: dict[str, Any] = {
        "technology": {
            "A": tech.A,
            "rho": tech.rho,
            "shares": dict(zip(FACTOR_NAMES, tech.deltas)),
        },
        "bundle": dict(zip(FACTOR_NAMES, scenario.bundle.quantities)),
        "outputs": list(scenario.outputs),
    }
    if scenario.sweep is not None:
        s = scenario.sweep
        desc["sweep"] = {
            "parameter": s.parameter,
            "grid": s.grid,
            "start": s.start,
            "stop": s.stop,
            "points": s.points,
        }
    if scenario.family is not None:
        desc["family"] = {
            "parameter": scenario.family.parameter,
            "values": list(scenario.family.values),
        }
    if scenario.policy is not None:
        p = scenario.policy
        desc["policy"] = {
            "redistribution_fraction": p.redistribution_fraction,
            "ubi_admin_cost": p.ubi_admin_cost,
            "tax_rate": p.tax_rate,
            "tax_progressivity": p.tax_progressivity,
            "transfer": p.transfer,
            "utility": _describe_utility(p.utility),
            "cost": _describe_cost(p.cost),
        }
    if scenario.bracket is not None:
        desc["optimize"] = {"bracket": list(scenario.bracket)}
    return desc


def scenario_digest(scenario: Scenario) -> str:
    payload = json.dumps(describe_scenario(scenario), sort_keys=True,
                         separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


def _provenance(scenario: Scenario) -> str:
    payload = json.dumps(describe_scenario(scenario), sort_keys=True,
                         separators=(",", ":"))
    return f"ceslab {__version__} scenario={scenario_digest(scenario)} {payload}"


def _apply_family(scenario: Scenario, member: float | None):
    if member is None:
        return scenario.technology, scenario.policy
    param = scenario.family.parameter
    if param == "rho":
        return replace(scenario.technology, rho=member), scenario.policy
    return scenario.technology, replace(scenario.policy, **{param: member})


def run_scenario(scenario: Scenario) -> ResultTable:
    """Evaluate the scenario into a ResultTable.

    Family members form the outer loop, grid points the inner one.  Cells
    where a quantity raised a laboratory error are empty, with the error
    codes (sorted, semicolon-joined) in the last column.
    """
    if scenario.sweep is None:
        raise InvalidScenarioError("running a scenario requires a sweep section")
    if not scenario.outputs:
        raise InvalidScenarioError("running a scenario requires at least one output")
    sweep = scenario.sweep
    grid = sweep.values()
    members: tuple[float | None, ...]
    if scenario.family is not None:
        members = scenario.family.values
        columns = [scenario.family.parameter, sweep.parameter]
    else:
        members = (None,)
        columns = [sweep.parameter]
    columns += list(scenario.outputs) + ["error"]

    rows: list[list[Any]] = []
    for member in members:
        tech, policy = _apply_family(scenario, member)
        for v in grid:
            bundle = replace(scenario.bundle, **{sweep.parameter: v})
            cells: list[Any] = []
            codes: set[str] = set()
            for name in scenario.outputs:
                try:
                    cells.append(REGISTRY[name](tech, bundle, policy))
                except CesLabError as err:
                    cells.append(None)
                    codes.add(err.code)
            prefix: list[Any] = [] if member is None else [member]
            rows.append(prefix + [v] + cells + [";".join(sorted(codes))])
    return ResultTable(columns, rows, _provenance(scenario))


# ---------------------------------------------------------------------------
# strict JSON loading

_TOP_KEYS = {"technology", "bundle", "sweep", "family", "policy", "optimize",
             "outputs"}
_TECH_KEYS = {"A", "rho", "shares"}
_SWEEP_KEYS = {"parameter", "grid", "start", "stop", "points"}
_FAMILY_KEYS = {"parameter", "values"}
_POLICY_KEYS = {"redistribution_fraction", "ubi_admin_cost", "tax_rate",
                "tax_progressivity", "transfer", "utility", "cost"}
_UTILITY_KEYS = {"form", "gamma"}
_COST_KEYS = {"form", "coefficient"}
_OPTIMIZE_KEYS = {"bracket"}


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise InvalidScenarioError(
            f"unknown key(s) in {where}: {', '.join(unknown)}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )


def _section(raw: dict, key: str, required: bool = False) -> dict | None:
    if key not in raw:
        if required:
            raise InvalidScenarioError(f"scenario is missing the {key!r} section")
        return None
    section = raw[key]
    if not isinstance(section, dict):
        raise InvalidScenarioError(f"{key!r} must be a JSON object")
    return section


def _number(section: dict, key: str, where: str, default=None) -> float:
    if key not in section:
        if default is not None:
            return default
        raise InvalidScenarioError(f"{where} is missing {key!r}")
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidScenarioError(f"{where}.{key} must be a number, got {v!r}")
    return float(v)


def _integer(section: dict, key: str, where: str) -> int:
    if key not in section:
        raise InvalidScenarioError(f"{where} is missing {key!r}")
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidScenarioError(f"{where}.{key} must be an integer, got {v!r}")
    return v


def _utility_from_dict(section: dict) -> LogUtility | CrraUtility:
    _check_keys(section, _UTILITY_KEYS, "policy.utility")
    form = section.get("form")
    if form == "log":
        if "gamma" in section:
            raise InvalidScenarioError("log utility takes no gamma")
        return LogUtility()
    if form == "crra":
        return CrraUtility(gamma=_number(section, "gamma", "policy.utility"))
    raise InvalidScenarioError(
        f"policy.utility.form must be 'log' or 'crra', got {form!r}"
    )


def _cost_from_dict(section: dict) -> QuadraticCost | LinearCost:
    _check_keys(section, _COST_KEYS, "policy.cost")
    form = section.get("form")
    coefficient = _number(section, "coefficient", "policy.cost")
    if form == "quadratic":
        return QuadraticCost(coefficient)
    if form == "linear":
        return LinearCost(coefficient)
    raise InvalidScenarioError(
        f"policy.cost.form must be 'quadratic' or 'linear', got {form!r}"
    )


def scenario_from_dict(raw: Any) -> Scenario:
    """Build a Scenario from parsed JSON, rejecting unknown keys anywhere."""
    if not isinstance(raw, dict):
        raise InvalidScenarioError("a scenario must be a JSON object")
    _check_keys(raw, _TOP_KEYS, "scenario")

    tech_d = _section(raw, "technology", required=True)
    _check_keys(tech_d, _TECH_KEYS, "technology")
    shares = tech_d.get("shares")
    if not isinstance(shares, dict):
        raise InvalidScenarioError("technology.shares must be a JSON object")
    _check_keys(shares, set(FACTOR_NAMES), "technology.shares")
    try:
        tech = CesTechnology(
            A=_number(tech_d, "A", "technology"),
            rho=_number(tech_d, "rho", "technology"),
            delta_K=_number(shares, "K", "technology.shares"),
            delta_K_agi=_number(shares, "K_agi", "technology.shares"),
            delta_L_h=_number(shares, "L_h", "technology.shares"),
            delta_L_agi=_number(shares, "L_agi", "technology.shares"),
        )
    except ValueError as err:
        raise InvalidScenarioError(f"technology: {err}") from None

    bundle_d = _section(raw, "bundle", required=True)
    _check_keys(bundle_d, set(FACTOR_NAMES), "bundle")
    try:
        bundle = FactorBundle(
            **{name: _number(bundle_d, name, "bundle") for name in FACTOR_NAMES}
        )
    except ValueError as err:
        raise InvalidScenarioError(f"bundle: {err}") from None

    sweep = None
    sweep_d = _section(raw, "sweep")
    if sweep_d is not None:
        _check_keys(sweep_d, _SWEEP_KEYS, "sweep")
        sweep = SweepAxis(
            parameter=sweep_d.get("parameter"),
            grid=sweep_d.get("grid", "geometric"),
            start=_number(sweep_d, "start", "sweep"),
            stop=_number(sweep_d, "stop", "sweep"),
            points=_integer(sweep_d, "points", "sweep"),
        )

    family = None
    family_d = _section(raw, "family")
    if family_d is not None:
        _check_keys(family_d, _FAMILY_KEYS, "family")
        values = family_d.get("values")
        if not isinstance(values, list):
            raise InvalidScenarioError("family.values must be a JSON array")
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InvalidScenarioError(
                    f"family.values must be numbers, got {v!r}"
                )
        family = FamilyAxis(parameter=family_d.get("parameter"),
                            values=tuple(float(v) for v in values))

    policy = None
    policy_d = _section(raw, "policy")
    if policy_d is not None:
        _check_keys(policy_d, _POLICY_KEYS, "policy")
        kwargs: dict[str, Any] = {}
        for name in FAMILY_POLICY_PARAMETERS:
            if name in policy_d:
                kwargs[name] = _number(policy_d, name, "policy")
        if "utility" in policy_d:
            u = policy_d["utility"]
            if not isinstance(u, dict):
                raise InvalidScenarioError("policy.utility must be a JSON object")
            kwargs["utility"] = _utility_from_dict(u)
        if "cost" in policy_d:
            c = policy_d["cost"]
            if not isinstance(c, dict):
                raise InvalidScenarioError("policy.cost must be a JSON object")
            kwargs["cost"] = _cost_from_dict(c)
        try:
            policy = PolicyConfig(**kwargs)
        except ValueError as err:
            raise InvalidScenarioError(f"policy: {err}") from None

    bracket = None
    optimize_d = _section(raw, "optimize")
    if optimize_d is not None:
        _check_keys(optimize_d, _OPTIMIZE_KEYS, "optimize")
        b = optimize_d.get("bracket")
        if (not isinstance(b, list) or len(b) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float))
                       for v in b)):
            raise InvalidScenarioError(
                "optimize.bracket must be a two-number JSON array"
            )
        bracket = (float(b[0]), float(b[1]))

    outputs = raw.get("outputs", [])
    if not isinstance(outputs, list) or any(not isinstance(o, str) for o in outputs):
        raise InvalidScenarioError("outputs must be a JSON array of quantity names")

    return Scenario(
        technology=tech,
        bundle=bundle,
        outputs=tuple(outputs),
        sweep=sweep,
        family=family,
        policy=policy,
        bracket=bracket,
    )


def load_scenario(path) -> Scenario:
    """Read and validate one scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise InvalidScenarioError(f"cannot read {path}: {err}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidScenarioError(f"{path} is not valid JSON: {err}") from None
    return scenario_from_dict(raw)


# ---------------------------------------------------------------------------
# output files

def write_atomic_text(path, text: str) -> None:
    """Write text to a temp file next to the target, then rename over it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def scenario_chart(
    table: ResultTable,
    scenario: Scenario,
    title: str | None = None,
    y_label: str | None = None,
    log_x: bool | None = None,
    log_y: bool = False,
) -> str:
    """SVG for a swept scenario: one line per family member when a family
    axis is present, else one line per output quantity.  The x axis is
    log-scaled by default when the sweep grid is geometric."""
    if scenario.sweep is None:
        raise InvalidScenarioError("charts need a swept scenario")
    sweep = scenario.sweep
    x = list(sweep.values())
    if log_x is None:
        log_x = sweep.grid == "geometric"
    if scenario.family is not None:
        quantity = scenario.outputs[0]
        col = table.column(quantity)
        n = len(x)
        series = [
            (f"{scenario.family.parameter}={member:g}", col[j * n:(j + 1) * n])
            for j, member in enumerate(scenario.family.values)
        ]
        y_label = y_label or quantity
    else:
        series = [(name, table.column(name)) for name in scenario.outputs]
        y_label = y_label or (
            scenario.outputs[0] if len(scenario.outputs) == 1 else "value"
        )
    title = title or f"{y_label} vs {sweep.parameter}"
    return svg_line_chart(title, sweep.parameter, y_label, x, series,
                          log_x=log_x, log_y=log_y)


def _figure_specs() -> dict[str, tuple[Scenario, str, str, bool, bool]]:
    shares = dict(delta_K=0.25, delta_K_agi=0.25, delta_L_h=0.25,
                  delta_L_agi=0.25)
    unit = FactorBundle(1.0, 1.0, 1.0, 1.0)
    policy = PolicyConfig(redistribution_fraction=0.1, ubi_admin_cost=2.0,
                          tax_rate=0.1, tax_progressivity=1.3)
    specs: dict[str, tuple[Scenario, str, str, bool, bool]] = {}
    specs["fig1_left"] = (
        Scenario(
            technology=CesTechnology(A=1.0, rho=1.5, **shares),
            bundle=unit,
            outputs=("MP_Lh",),
            sweep=SweepAxis("K_agi", "geometric", 1.0, 1e8, 65),
        ),
        "Human labor marginal product as AGI capital grows",
        "MP_Lh",
        True,
        True,
    )
    specs["fig1_right"] = (
        Scenario(
            technology=CesTechnology(A=1.0, rho=0.5, **shares),
            bundle=unit,
            outputs=("TFP",),
            sweep=SweepAxis("K_agi", "geometric", 1.0, 1e8, 65),
        ),
        "TFP plateau as AGI capital grows",
        "TFP",
        True,
        False,
    )
    specs["fig2_left"] = (
        Scenario(
            technology=CesTechnology(A=1.0, rho=0.5, **shares),
            bundle=unit,
            outputs=("UBI",),
            sweep=SweepAxis("K_agi", "geometric", 1.0, 1e6, 49),
            family=FamilyAxis("redistribution_fraction", (0.1, 0.3, 0.5)),
            policy=policy,
        ),
        "UBI payout by redistribution fraction",
        "UBI",
        True,
        False,
    )
    specs["fig2_right"] = (
        Scenario(
            technology=CesTechnology(A=1.0, rho=0.5, **shares),
            bundle=unit,
            outputs=("T_AGI",),
            sweep=SweepAxis("K_agi", "geometric", 1.0, 1e4, 33),
            family=FamilyAxis("tax_progressivity", (1.0, 1.3, 1.6)),
            policy=policy,
        ),
        "AGI capital tax revenue by progressivity",
        "T_AGI",
        True,
        True,
    )
    return specs


def reproduce_figures(out_dir, formats=("csv", "svg")) -> dict[str, ResultTable]:
    """Regenerate the four standard figure panels into ``out_dir``.

    Emits ``<stem>.csv`` and/or ``<stem>.svg`` per panel according to
    ``formats`` and returns the tables keyed by stem.
    """
    out = Path(out_dir)
    tables: dict[str, ResultTable] = {}
    for stem, (scn, title, y_label, log_x, log_y) in _figure_specs().items():
        table = run_scenario(scn)
        tables[stem] = table
        if "csv" in formats:
            write_atomic_text(out / f"{stem}.csv", table.to_csv_text())
        if "svg" in formats:
            svg = scenario_chart(table, scn, title=title, y_label=y_label,
                                 log_x=log_x, log_y=log_y)
            write_atomic_text(out / f"{stem}.svg", svg)
    return tables
