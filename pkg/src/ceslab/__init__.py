"""ceslab: a numerical laboratory for a four-factor CES production economy.

The technology combines traditional capital, AGI capital, human labor, and
AGI labor.  The package evaluates output and its first-order quantities
stably in every substitution regime, classifies limiting behavior as AGI
capital grows without bound, models redistribution instruments, and runs
declarative scenario sweeps into deterministic CSV and SVG files.
"""

__version__ = "0.1.0"

from .asymptotics import (
    CLAIMED_LIMITS,
    AsymptoticQuantity,
    LimitClass,
    RegimeVerdict,
    SweepGrid,
    classify_regime,
    dominance_approximation_error,
    tfp,
    tfp_plateau,
)
from .errors import (
    BoundaryPointError,
    CesLabError,
    DegenerateInputError,
    GridMismatchError,
    InvalidScenarioError,
    RegimeMismatchError,
)
from .marginal import (
    MarginalReport,
    finite_difference_marginal,
    labor_income_share,
    marginal_products,
    wage_ratio_closed_form,
)
from .policy import (
    CrraUtility,
    LinearCost,
    LogUtility,
    PolicyConfig,
    PolicyOutcome,
    QuadraticCost,
    WelfareOptimum,
    agi_capital_tax,
    agi_output_share,
    consumption_support,
    optimal_public_capital,
    path_budget_balance,
    policy_outcome,
    ubi,
)
from .production import (
    FACTOR_NAMES,
    RHO_EPS,
    CesTechnology,
    FactorBundle,
    ces_aggregate,
    elasticity_of_substitution,
    log_ces_aggregate,
    output,
)
from .scenario import (
    REGISTRY,
    FamilyAxis,
    ResultTable,
    Scenario,
    SweepAxis,
    load_scenario,
    reproduce_figures,
    run_scenario,
    scenario_chart,
    scenario_from_dict,
)

__all__ = [
    "__version__",
    "AsymptoticQuantity",
    "BoundaryPointError",
    "CLAIMED_LIMITS",
    "CesLabError",
    "CesTechnology",
    "CrraUtility",
    "DegenerateInputError",
    "FACTOR_NAMES",
    "FactorBundle",
    "FamilyAxis",
    "GridMismatchError",
    "InvalidScenarioError",
    "LimitClass",
    "LinearCost",
    "LogUtility",
    "MarginalReport",
    "PolicyConfig",
    "PolicyOutcome",
    "QuadraticCost",
    "REGISTRY",
    "RHO_EPS",
    "RegimeMismatchError",
    "RegimeVerdict",
    "ResultTable",
    "Scenario",
    "SweepAxis",
    "SweepGrid",
    "WelfareOptimum",
    "agi_capital_tax",
    "agi_output_share",
    "ces_aggregate",
    "classify_regime",
    "consumption_support",
    "dominance_approximation_error",
    "elasticity_of_substitution",
    "finite_difference_marginal",
    "labor_income_share",
    "load_scenario",
    "log_ces_aggregate",
    "marginal_products",
    "optimal_public_capital",
    "output",
    "path_budget_balance",
    "policy_outcome",
    "reproduce_figures",
    "run_scenario",
    "scenario_chart",
    "scenario_from_dict",
    "tfp",
    "tfp_plateau",
    "ubi",
    "wage_ratio_closed_form",
]
