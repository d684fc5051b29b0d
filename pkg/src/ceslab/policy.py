"""Redistribution instruments and the public AGI-capital welfare problem.

Three instruments route AGI-generated income back to households:

* a universal basic income financed by a fraction of AGI output, net of a
  flat administrative cost (negative values are reported as-is: a thin UBI
  can fail to cover its own bureaucracy, and hiding that would defeat the
  point of modeling it);
* a tax ``tau * K_agi^eta`` on the AGI-capital stock, progressive for
  eta > 1;
* a lump-sum transfer.

Household consumption support is their sum.  ``path_budget_balance``
integrates support and consumption along a time path with the trapezoid
rule and reports the residual, positive when consumption overruns funding.

The public-investment problem chooses k >= 0 of publicly funded AGI capital
to maximize W(k) = U(Y(K_agi + k)) - D(k).  Utility and cost forms are
small frozen classes with ``value`` and ``derivative``; the optimizer
combines SciPy's bounded scalar minimizer with a hand-rolled bisection on
the first-order condition so the reported residual is as tight as the
float grid allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from math import exp, fsum, log

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import GridMismatchError
from .marginal import _require_interior, marginal_products
from .production import CesTechnology, FactorBundle, _aggregate_paths, output


@dataclass(frozen=True)
class LogUtility:
    """U(c) = log c."""

    def value(self, c: float) -> float:
        if c <= 0.0:
            raise ValueError("log utility needs positive consumption")
        return log(c)

    def derivative(self, c: float) -> float:
        if c <= 0.0:
            raise ValueError("log utility needs positive consumption")
        return 1.0 / c


@dataclass(frozen=True)
class CrraUtility:
    """U(c) = c^(1-gamma) / (1-gamma) with gamma > 0, gamma != 1.

    gamma = 1 is the log case; use LogUtility for it.
    """

    gamma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma) and self.gamma > 0.0):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma!r}")
        if self.gamma == 1.0:
            raise ValueError("gamma = 1 is log utility; use LogUtility")

    def value(self, c: float) -> float:
        if c <= 0.0:
            raise ValueError("CRRA utility needs positive consumption")
        return c ** (1.0 - self.gamma) / (1.0 - self.gamma)

    def derivative(self, c: float) -> float:
        if c <= 0.0:
            raise ValueError("CRRA utility needs positive consumption")
        return c ** (-self.gamma)


@dataclass(frozen=True)
class QuadraticCost:
    """D(k) = 0.5 * coefficient * k^2."""

    coefficient: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.coefficient) and self.coefficient >= 0.0):
            raise ValueError(
                f"cost coefficient must be nonnegative, got {self.coefficient!r}"
            )

    def value(self, k: float) -> float:
        return 0.5 * self.coefficient * k * k

    def derivative(self, k: float) -> float:
        return self.coefficient * k


@dataclass(frozen=True)
class LinearCost:
    """D(k) = coefficient * k."""

    coefficient: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.coefficient) and self.coefficient >= 0.0):
            raise ValueError(
                f"cost coefficient must be nonnegative, got {self.coefficient!r}"
            )

    def value(self, k: float) -> float:
        return self.coefficient * k

    def derivative(self, k: float) -> float:
        return self.coefficient


UtilityForm = LogUtility | CrraUtility
CostForm = QuadraticCost | LinearCost


@dataclass(frozen=True)
class PolicyConfig:
    """Instrument parameters plus the welfare-problem primitives.

    ``redistribution_fraction`` is the share of AGI output routed to the
    UBI, in [0, 1].  ``ubi_admin_cost`` is the flat cost netted out of it.
    ``tax_rate`` and ``tax_progressivity`` parameterize the AGI-capital tax
    ``tax_rate * K_agi^tax_progressivity`` (progressivity of 1 is a flat
    proportional tax; below 1 is rejected).  ``transfer`` is the lump sum.
    """

    redistribution_fraction: float = 0.0
    ubi_admin_cost: float = 0.0
    tax_rate: float = 0.0
    tax_progressivity: float = 1.0
    transfer: float = 0.0
    utility: UtilityForm = LogUtility()
    cost: CostForm = QuadraticCost(1.0)

    def __post_init__(self) -> None:
        lam = self.redistribution_fraction
        if not (math.isfinite(lam) and 0.0 <= lam <= 1.0):
            raise ValueError(
                f"redistribution_fraction must lie in [0, 1], got {lam!r}"
            )
        for name in ("ubi_admin_cost", "tax_rate", "transfer"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be nonnegative and finite, got {v!r}")
        eta = self.tax_progressivity
        if not (math.isfinite(eta) and eta >= 1.0):
            raise ValueError(
                f"tax_progressivity must be at least 1, got {eta!r}"
            )


def agi_output_share(tech: CesTechnology, x: FactorBundle) -> float:
    """Output attributable to AGI factors:
    Y * (d_Kagi K_agi^rho + d_Lagi L_agi^rho) / S.

    By Euler's theorem this equals mp_Kagi * K_agi + mp_Lagi * L_agi, so
    either decomposition of Y gives the same tax base.  Zero quantities are
    fine here; if Y itself is zero so is the AGI slice.
    """
    y = output(tech, x)
    if y == 0.0:
        return 0.0
    if tech.is_cobb_douglas:
        return y * (tech.delta_K_agi + tech.delta_L_agi)
    rho = tech.rho
    pairs = [
        (d, q)
        for d, q in ((tech.delta_K_agi, x.K_agi), (tech.delta_L_agi, x.L_agi))
        if d > 0.0 and q > 0.0
    ]
    if not pairs:
        return 0.0
    kind, value = _aggregate_paths(tech, x)
    if kind == "direct":
        return y * fsum(d * q ** rho for d, q in pairs) / value
    # log-space aggregate: evaluate the fraction through shifted exponentials
    shifted = [log(d) + rho * log(q) - value for d, q in pairs]
    top = max(shifted)
    return y * exp(top) * fsum(exp(s - top) for s in shifted)


def ubi(config: PolicyConfig, y_agi: float) -> float:
    """UBI payout: redistribution_fraction * y_agi - ubi_admin_cost.

    Affine in the AGI output slice by construction.  The result may be
    negative; that is reported, not clipped.
    """
    if not (math.isfinite(y_agi) and y_agi >= 0.0):
        raise ValueError(f"AGI output must be nonnegative and finite, got {y_agi!r}")
    return config.redistribution_fraction * y_agi - config.ubi_admin_cost


def agi_capital_tax(config: PolicyConfig, k_agi: float) -> float:
    """Tax revenue tax_rate * k_agi^tax_progressivity."""
    if not (math.isfinite(k_agi) and k_agi >= 0.0):
        raise ValueError(f"K_agi must be nonnegative and finite, got {k_agi!r}")
    return config.tax_rate * k_agi ** config.tax_progressivity


def consumption_support(
    config: PolicyConfig, tech: CesTechnology, x: FactorBundle
) -> float:
    """Total household support: transfer + capital tax + UBI."""
    return (
        config.transfer
        + agi_capital_tax(config, x.K_agi)
        + ubi(config, agi_output_share(tech, x))
    )


def path_budget_balance(
    config: PolicyConfig,
    tech: CesTechnology,
    times,
    bundles,
    consumption,
) -> float:
    """Trapezoid-rule budget residual along a time path.

    Integrates household consumption and the support the instruments can
    fund over ``times`` and returns (consumption integral - support
    integral).  Positive means consumption outruns what the policy raises.

    Raises ``GridMismatchError`` when the arrays disagree in length, the
    grid has fewer than two points, or times are not strictly increasing.
    """
    t = np.asarray(times, dtype=float)
    c = np.asarray(consumption, dtype=float)
    bundles = list(bundles)
    if t.ndim != 1 or t.size < 2:
        raise GridMismatchError("the time grid needs at least two points")
    if len(bundles) != t.size or c.shape != t.shape:
        raise GridMismatchError(
            f"path lengths disagree: {t.size} times, {len(bundles)} bundles, "
            f"{c.size} consumption values"
        )
    if np.any(np.diff(t) <= 0.0):
        raise GridMismatchError("times must be strictly increasing")
    support = np.array(
        [consumption_support(config, tech, b) for b in bundles], dtype=float
    )
    return float(np.trapezoid(c, t) - np.trapezoid(support, t))


@dataclass(frozen=True)
class WelfareOptimum:
    """Solution of the public AGI-capital problem.

    ``foc_residual`` is |U'(Y) * mp_Kagi - D'(k)| at the reported optimum.
    When ``at_boundary`` is true the maximum sits on an edge of the bracket
    and the residual is whatever the gradient happens to be there.
    """

    k_star: float
    welfare: float
    output: float
    foc_residual: float
    at_boundary: bool


def _bisect_root(f, a: float, b: float, fa: float, fb: float) -> float:
    """Plain bisection to float collapse.  fa and fb must differ in sign."""
    for _ in range(200):
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def optimal_public_capital(
    config: PolicyConfig,
    tech: CesTechnology,
    x: FactorBundle,
    bracket: tuple[float, float],
) -> WelfareOptimum:
    """Maximize W(k) = U(Y(K_agi + k)) - D(k) over k in the bracket.

    With the welfare gradient changing sign downward across the bracket,
    the interior optimum is found by bisection on the first-order
    condition.  Otherwise the maximum is located by a bounded scalar
    minimization plus an endpoint comparison and flagged ``at_boundary``
    if it lands on an edge.
    """
    _require_interior(x)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 <= lo < hi):
        raise ValueError(f"need a finite bracket with 0 <= lo < hi, got {bracket!r}")

    def bundle_at(k: float) -> FactorBundle:
        return replace(x, K_agi=x.K_agi + k)

    def welfare(k: float) -> float:
        return config.utility.value(output(tech, bundle_at(k))) - config.cost.value(k)

    def gradient(k: float) -> float:
        b = bundle_at(k)
        marginal = marginal_products(tech, b).mp_K_agi
        return (
            config.utility.derivative(output(tech, b)) * marginal
            - config.cost.derivative(k)
        )

    g_lo, g_hi = gradient(lo), gradient(hi)
    if g_lo > 0.0 > g_hi:
        k_star = _bisect_root(gradient, lo, hi, g_lo, g_hi)
        at_boundary = False
    else:
        result = minimize_scalar(
            lambda k: -welfare(k),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12 * max(1.0, hi - lo)},
        )
        inner = min(max(float(result.x), lo), hi)
        candidates = [(welfare(lo), lo), (welfare(hi), hi), (welfare(inner), inner)]
        _, k_star = max(candidates, key=lambda pair: pair[0])
        edge = 1e-9 * (hi - lo)
        at_boundary = not (lo + edge < k_star < hi - edge)
        if not at_boundary:
            # an interior maximum the endpoint gradients did not advertise;
            # polish it with a local sign change if one can be found
            width = max((hi - lo) * 1e-6, 1e-12)
            while width < (hi - lo):
                a = max(lo, k_star - width)
                b = min(hi, k_star + width)
                ga, gb = gradient(a), gradient(b)
                if ga > 0.0 > gb:
                    k_star = _bisect_root(gradient, a, b, ga, gb)
                    break
                width *= 8.0
    return WelfareOptimum(
        k_star=k_star,
        welfare=welfare(k_star),
        output=output(tech, bundle_at(k_star)),
        foc_residual=abs(gradient(k_star)),
        at_boundary=at_boundary,
    )


@dataclass(frozen=True)
class PolicyOutcome:
    """Instrument payouts at one bundle, plus the welfare solution when a
    bracket was supplied."""

    ubi: float
    tax_revenue: float
    consumption: float
    k_star: float | None = None
    welfare: float | None = None
    foc_residual: float | None = None
    at_boundary: bool = False


def policy_outcome(
    config: PolicyConfig,
    tech: CesTechnology,
    x: FactorBundle,
    bracket: tuple[float, float] | None = None,
) -> PolicyOutcome:
    """Evaluate every instrument at x; optionally solve the welfare problem."""
    ubi_value = ubi(config, agi_output_share(tech, x))
    tax_value = agi_capital_tax(config, x.K_agi)
    consumption = consumption_support(config, tech, x)
    if bracket is None:
        return PolicyOutcome(ubi_value, tax_value, consumption)
    opt = optimal_public_capital(config, tech, x, bracket)
    return PolicyOutcome(
        ubi_value,
        tax_value,
        consumption,
        k_star=opt.k_star,
        welfare=opt.welfare,
        foc_residual=opt.foc_residual,
        at_boundary=opt.at_boundary,
    )
