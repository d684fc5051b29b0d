"""Marginal products, the wage ratio, and factor income shares.

Closed forms only; the finite-difference helper at the bottom exists so
tests (and suspicious users) can check the algebra against the production
function itself.  Everything requires an interior bundle: marginal products
on the boundary either diverge or stop being two-sided, so we raise
``BoundaryPointError`` instead of returning something half-defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from math import exp, log

from .errors import BoundaryPointError
from .production import (
    _LOG_GUARD,
    _aggregate_paths,
    FACTOR_NAMES,
    CesTechnology,
    FactorBundle,
    log_ces_aggregate,
    output,
)

#: default relative step of the central difference check.
DEFAULT_FD_STEP = 1e-6


@dataclass(frozen=True)
class MarginalReport:
    """Everything first-order at one interior bundle.

    ``wage_ratio`` is mp_L_agi / mp_L_h, the relative wage of AGI labor.
    Shares are mp_i * x_i / Y and sum to one by Euler's theorem (the
    technology is homogeneous of degree one).
    """

    mp_K: float
    mp_K_agi: float
    mp_L_h: float
    mp_L_agi: float
    wage_ratio: float
    share_K: float
    share_K_agi: float
    share_L_h: float
    share_L_agi: float

    @property
    def marginals(self) -> tuple[float, float, float, float]:
        return (self.mp_K, self.mp_K_agi, self.mp_L_h, self.mp_L_agi)

    @property
    def shares(self) -> tuple[float, float, float, float]:
        return (self.share_K, self.share_K_agi, self.share_L_h, self.share_L_agi)


def _require_interior(x: FactorBundle) -> None:
    if not x.is_interior:
        zeros = [n for n, q in zip(FACTOR_NAMES, x.quantities) if q == 0.0]
        raise BoundaryPointError(
            f"marginal quantities need strictly positive inputs; zero at: "
            f"{', '.join(zeros)}"
        )


def _mp_one(A: float, rho: float, d: float, q: float, log_s: float) -> float:
    """One marginal product A * d * q^(rho-1) * S^(1/rho - 1), given log S."""
    if d == 0.0:
        return 0.0
    outer = (1.0 / rho - 1.0) * log_s
    inner = (rho - 1.0) * log(q)
    if abs(outer) > _LOG_GUARD or abs(inner) > _LOG_GUARD:
        return exp(log(A) + log(d) + inner + outer)
    return A * d * q ** (rho - 1.0) * exp(outer)


def marginal_products(tech: CesTechnology, x: FactorBundle) -> MarginalReport:
    """Closed-form marginal products, wage ratio, and income shares at x.

    Raises ``BoundaryPointError`` off the interior.
    """
    _require_interior(x)
    A, rho = tech.A, tech.rho
    y = output(tech, x)
    if tech.is_cobb_douglas:
        mps = tuple(d * y / q for d, q in zip(tech.deltas, x.quantities))
    else:
        log_s = log_ces_aggregate(tech, x)
        mps = tuple(
            _mp_one(A, rho, d, q, log_s)
            for d, q in zip(tech.deltas, x.quantities)
        )
    mp_lh, mp_lagi = mps[2], mps[3]
    if mp_lh > 0.0:
        wage_ratio = mp_lagi / mp_lh
    elif mp_lagi == 0.0:
        wage_ratio = math.nan  # neither kind of labor is productive
    else:
        wage_ratio = math.inf
    shares = tuple(m * q / y for m, q in zip(mps, x.quantities))
    return MarginalReport(*mps, wage_ratio, *shares)


def wage_ratio_closed_form(tech: CesTechnology, x: FactorBundle) -> float:
    """(d_Lagi / d_Lh) * (L_agi / L_h)^(rho - 1).

    The aggregate cancels out of the wage ratio, so this is the cheap way
    to get it; ``marginal_products`` reports the same number from the mp
    quotient.
    """
    _require_interior(x)
    if tech.delta_L_h == 0.0:
        return math.nan if tech.delta_L_agi == 0.0 else math.inf
    ratio = tech.delta_L_agi / tech.delta_L_h
    if tech.is_cobb_douglas:
        return ratio * (x.L_h / x.L_agi)
    return ratio * (x.L_agi / x.L_h) ** (tech.rho - 1.0)


def labor_income_share(tech: CesTechnology, x: FactorBundle) -> float:
    """Human labor's income share, d_Lh * L_h^rho / S.

    On the Cobb-Douglas path the share is the share parameter itself.
    Agrees with ``marginal_products(...).share_L_h`` to rounding.
    """
    _require_interior(x)
    if tech.is_cobb_douglas:
        return tech.delta_L_h
    if tech.delta_L_h == 0.0:
        return 0.0
    rho = tech.rho
    kind, value = _aggregate_paths(tech, x)
    if kind == "direct":
        return tech.delta_L_h * x.L_h ** rho / value
    return exp(log(tech.delta_L_h) + rho * log(x.L_h) - value)


def finite_difference_marginal(
    tech: CesTechnology,
    x: FactorBundle,
    factor: str,
    h: float | None = None,
) -> float:
    """Central-difference estimate of one marginal product.

    Args:
        factor: one of ``FACTOR_NAMES``.
        h: absolute step; defaults to ``DEFAULT_FD_STEP`` times the factor
            quantity.  Must satisfy 0 < h < quantity so both sides stay
            interior.
    """
    _require_interior(x)
    if factor not in FACTOR_NAMES:
        raise ValueError(f"unknown factor {factor!r}, expected one of {FACTOR_NAMES}")
    q = getattr(x, factor)
    if h is None:
        h = DEFAULT_FD_STEP * q
    if not (0.0 < h < q):
        raise ValueError(f"step must satisfy 0 < h < {q!r}, got {h!r}")
    up = replace(x, **{factor: q + h})
    down = replace(x, **{factor: q - h})
    return (output(tech, up) - output(tech, down)) / (2.0 * h)
