"""Limiting behavior along AGI-capital sweeps.

The questions here all have the same shape: hold the other three factors
fixed, push K_agi through decades, and ask what a quantity does.  The
classifier fits a log-log slope over the top decade of the sweep and sorts
the result into one of three limit classes.  Fixed claims about those limits
(the motivating story: human labor's marginal product and income share
vanish while TFP settles at a positive plateau) live in ``CLAIMED_LIMITS``;
a verdict records whether the computed class agrees, and disagreement is
data, not an error.

The slope fit is an ordinary least-squares line hand-rolled on ``math.fsum``
so repeated runs are bit-for-bit identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from math import fsum, log

from .errors import DegenerateInputError, RegimeMismatchError
from .marginal import _require_interior, labor_income_share, marginal_products
from .production import CesTechnology, FactorBundle, output

#: |fitted slope| at or below this counts as flat.
SLOPE_TOLERANCE = 0.02


class LimitClass(str, Enum):
    CONVERGES_TO_ZERO = "converges_to_zero"
    CONVERGES_TO_POSITIVE = "converges_to_positive"
    DIVERGES = "diverges"


class AsymptoticQuantity(str, Enum):
    """Quantities the classifier knows how to sweep."""

    MP_LH = "MP_Lh"
    LABOR_SHARE = "labor_share"
    TFP = "TFP"
    MP_RATIO = "MP_ratio"  # MP_Lh / MP_Kagi


#: claimed limiting behavior as K_agi grows without bound, keyed by quantity.
CLAIMED_LIMITS: dict[AsymptoticQuantity, tuple[LimitClass, str]] = {
    AsymptoticQuantity.MP_LH: (
        LimitClass.CONVERGES_TO_ZERO,
        "human labor's marginal product falls to zero",
    ),
    AsymptoticQuantity.LABOR_SHARE: (
        LimitClass.CONVERGES_TO_ZERO,
        "human labor's income share falls to zero",
    ),
    AsymptoticQuantity.TFP: (
        LimitClass.CONVERGES_TO_POSITIVE,
        "TFP settles at a positive constant",
    ),
    AsymptoticQuantity.MP_RATIO: (
        LimitClass.CONVERGES_TO_ZERO,
        "the MP_Lh / MP_Kagi ratio falls to zero",
    ),
}


@dataclass(frozen=True)
class SweepGrid:
    """A strictly increasing positive grid of K_agi values plus the bundle
    whose other three factors stay fixed during the sweep."""

    k_agi_values: tuple[float, ...]
    base_bundle: FactorBundle

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.k_agi_values)
        object.__setattr__(self, "k_agi_values", values)
        if len(values) < 2:
            raise ValueError("a sweep grid needs at least two points")
        for v in values:
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"grid values must be positive and finite, got {v!r}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("grid values must be strictly increasing")

    @classmethod
    def geometric(
        cls,
        base_bundle: FactorBundle,
        start: float = 1.0,
        stop: float = 1e8,
        points_per_decade: int = 8,
    ) -> SweepGrid:
        """Evenly log-spaced grid; the default covers 1 to 1e8 with eight
        points per decade."""
        if not (0.0 < start < stop):
            raise ValueError("need 0 < start < stop")
        if points_per_decade < 1:
            raise ValueError("points_per_decade must be at least 1")
        decades = math.log10(stop / start)
        n = round(decades * points_per_decade) + 1
        if n < 2:
            raise ValueError("grid spans less than one step; widen the range")
        log_start, log_stop = log(start), log(stop)
        values = tuple(
            math.exp(log_start + (log_stop - log_start) * i / (n - 1))
            for i in range(n)
        )
        # pin the endpoints so rounding in exp/log cannot move them
        values = (start,) + values[1:-1] + (stop,)
        return cls(values, base_bundle)


@dataclass(frozen=True)
class RegimeVerdict:
    """Outcome of one classification sweep.

    ``limit_value`` is the last sweep value when the class is
    converges_to_positive, 0.0 for converges_to_zero, and None for
    diverges.  ``claim`` restates the claimed behavior this quantity is
    checked against and ``matches_claim`` records the comparison.
    """

    quantity: AsymptoticQuantity
    fitted_exponent: float
    limit_class: LimitClass
    limit_value: float | None
    claim: str
    matches_claim: bool


def tfp(tech: CesTechnology, x: FactorBundle) -> float:
    """Output per unit of raw input, Y / (K + K_agi + L_h + L_agi).

    Raises ``DegenerateInputError`` when every factor is zero.
    """
    total = fsum(x.quantities)
    if total == 0.0:
        raise DegenerateInputError("TFP is undefined with every input zero")
    return output(tech, x) / total


def tfp_plateau(tech: CesTechnology) -> float:
    """The K_agi -> infinity limit of TFP for rho > 0: A * d_Kagi^(1/rho).

    Raises ``RegimeMismatchError`` for rho <= 0, where TFP does not
    plateau at a positive constant.
    """
    if tech.rho <= 0.0:
        raise RegimeMismatchError("the TFP plateau exists only for rho > 0")
    return tech.A * tech.delta_K_agi ** (1.0 / tech.rho)


def dominance_approximation_error(tech: CesTechnology, x: FactorBundle) -> float:
    """Relative error of the AGI-dominance approximation of MP_Lh.

    Once the AGI-capital term dominates the aggregate (rho > 0, K_agi
    large), MP_Lh is approximately
    ``A * d_Lh * L_h^(rho-1) * (d_Kagi * K_agi^rho)^(1/rho - 1)``.
    Returns |exact - approx| / exact.

    Raises ``RegimeMismatchError`` for rho <= 0 (no single term dominates
    there) and ``DegenerateInputError`` when the human-labor or AGI-capital
    share is zero.
    """
    if tech.rho <= 0.0:
        raise RegimeMismatchError(
            "the dominance approximation needs rho > 0 so the AGI-capital "
            "term can dominate the aggregate"
        )
    _require_interior(x)
    if tech.delta_L_h == 0.0 or tech.delta_K_agi == 0.0:
        raise DegenerateInputError(
            "the dominance approximation needs positive shares on human "
            "labor and AGI capital"
        )
    rho = tech.rho
    exact = marginal_products(tech, x).mp_L_h
    approx = (
        tech.A
        * tech.delta_L_h
        * x.L_h ** (rho - 1.0)
        * (tech.delta_K_agi * x.K_agi ** rho) ** (1.0 / rho - 1.0)
    )
    return abs(exact - approx) / exact


def _sweep_values(
    tech: CesTechnology, grid: SweepGrid, quantity: AsymptoticQuantity
) -> list[float]:
    out = []
    for k in grid.k_agi_values:
        bundle = replace(grid.base_bundle, K_agi=k)
        if quantity is AsymptoticQuantity.MP_LH:
            out.append(marginal_products(tech, bundle).mp_L_h)
        elif quantity is AsymptoticQuantity.LABOR_SHARE:
            out.append(labor_income_share(tech, bundle))
        elif quantity is AsymptoticQuantity.TFP:
            out.append(tfp(tech, bundle))
        else:
            report = marginal_products(tech, bundle)
            out.append(report.mp_L_h / report.mp_K_agi)
    return out


def _slope(points: list[tuple[float, float]]) -> float:
    """OLS slope through (u, v) points, accumulated with fsum."""
    n = len(points)
    mean_u = fsum(u for u, _ in points) / n
    mean_v = fsum(v for _, v in points) / n
    num = fsum((u - mean_u) * (v - mean_v) for u, v in points)
    den = fsum((u - mean_u) ** 2 for u, _ in points)
    return num / den


def classify_regime(
    tech: CesTechnology, grid: SweepGrid, quantity: AsymptoticQuantity
) -> RegimeVerdict:
    """Sweep K_agi over the grid and classify the limiting behavior.

    The log-log slope is fitted over the top decade of the grid.  Slope
    below ``-SLOPE_TOLERANCE`` classifies as converges_to_zero, above
    ``+SLOPE_TOLERANCE`` as diverges, and flat in between as
    converges_to_positive with the last sweep value reported as the limit.
    """
    _require_interior(replace(grid.base_bundle, K_agi=grid.k_agi_values[0]))
    quantity = AsymptoticQuantity(quantity)
    values = _sweep_values(tech, grid, quantity)
    cutoff = grid.k_agi_values[-1] / 10.0
    # a hair of slack so the nominal decade edge is not lost to rounding
    top = [
        (log(k), v)
        for k, v in zip(grid.k_agi_values, values)
        if k >= cutoff * (1.0 - 1e-9)
    ]
    if len(top) < 2:
        raise DegenerateInputError(
            "the top decade of the grid holds fewer than two points"
        )
    if any(v <= 0.0 for _, v in top):
        raise DegenerateInputError(
            f"{quantity.value} is not positive over the top decade; "
            "a log-log fit is meaningless"
        )
    slope = _slope([(lk, log(v)) for lk, v in top])
    if slope < -SLOPE_TOLERANCE:
        limit_class = LimitClass.CONVERGES_TO_ZERO
        limit_value: float | None = 0.0
    elif slope > SLOPE_TOLERANCE:
        limit_class = LimitClass.DIVERGES
        limit_value = None
    else:
        limit_class = LimitClass.CONVERGES_TO_POSITIVE
        limit_value = values[-1]
    claimed_class, claim = CLAIMED_LIMITS[quantity]
    return RegimeVerdict(
        quantity=quantity,
        fitted_exponent=slope,
        limit_class=limit_class,
        limit_value=limit_value,
        claim=claim,
        matches_claim=limit_class is claimed_class,
    )
