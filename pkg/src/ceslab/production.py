"""Four-factor CES technology: parameter types and stable evaluation.

Output is

    Y = A * (d_K K^rho + d_Kagi K_agi^rho + d_Lh L_h^rho + d_Lagi L_agi^rho)^(1/rho)

with share weights summing to one.  The interesting numerics live in the
exponent rho.  Three evaluation paths keep every regime accurate:

* ``|rho| < RHO_EPS``: the technology is treated as Cobb-Douglas and output
  is the weighted geometric mean, evaluated in log space.
* ``RHO_EPS <= |rho| < 1e-3``: the aggregate is within rounding distance of
  one, and the 1/rho outer exponent multiplies any error in ``log(S)`` by up
  to 1e8.  ``log(S)`` is therefore accumulated cancellation-free as
  ``log1p(sum_i d_i * expm1(rho * log(x_i)))``.
* otherwise: a direct power sum, switching to log-sum-exp whenever some
  ``|rho * log(x_i)|`` is large enough to overflow or underflow a float.

All aggregate sums go through ``math.fsum``, which is exact for the values
involved here, so permuting the (share, quantity) pairs reproduces output
bit for bit.

Everything in this module is pure and the dataclasses are frozen, so values
can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import exp, expm1, fsum, log, log1p

#: |rho| below this evaluates on the Cobb-Douglas path.
RHO_EPS = 1e-8

#: |rho| below this (but >= RHO_EPS) uses the compensated expm1/log1p form.
_NEAR_ZERO_RHO = 1e-3

#: |rho * log(x)| beyond this switches the power sum to log-sum-exp.
_LOG_GUARD = 500.0

#: allowed departure of the share sum from one at construction time.
SHARE_TOLERANCE = 1e-12

#: canonical factor order used everywhere: traditional capital, AGI capital,
#: human labor, AGI labor.
FACTOR_NAMES = ("K", "K_agi", "L_h", "L_agi")


@dataclass(frozen=True)
class CesTechnology:
    """Parameter block of the four-factor CES technology.

    Args:
        A: Hicks-neutral productivity scale, strictly positive.
        rho: substitution exponent.  Any finite value is accepted; rho > 1
            gives a negative elasticity of substitution and is flagged by
            ``is_nonstandard`` rather than rejected.
        delta_K, delta_K_agi, delta_L_h, delta_L_agi: nonnegative share
            weights for traditional capital, AGI capital, human labor and
            AGI labor.  They must sum to one within ``SHARE_TOLERANCE``
            (no silent rescaling) and at least two must be positive, so
            the technology actually combines factors.
    """

    A: float
    rho: float
    delta_K: float
    delta_K_agi: float
    delta_L_h: float
    delta_L_agi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.A) and self.A > 0.0):
            raise ValueError(f"A must be positive and finite, got {self.A!r}")
        if not math.isfinite(self.rho):
            raise ValueError(f"rho must be finite, got {self.rho!r}")
        for name, d in zip(FACTOR_NAMES, self.deltas):
            if not (math.isfinite(d) and d >= 0.0):
                raise ValueError(
                    f"share for {name} must be nonnegative and finite, got {d!r}"
                )
        if sum(1 for d in self.deltas if d > 0.0) < 2:
            raise ValueError("at least two share parameters must be positive")
        total = fsum(self.deltas)
        if abs(total - 1.0) > SHARE_TOLERANCE:
            raise ValueError(
                f"share parameters must sum to 1 within {SHARE_TOLERANCE:g}, "
                f"got {total!r}; rescale them explicitly"
            )

    @property
    def deltas(self) -> tuple[float, float, float, float]:
        """Share weights in canonical factor order."""
        return (self.delta_K, self.delta_K_agi, self.delta_L_h, self.delta_L_agi)

    @property
    def is_cobb_douglas(self) -> bool:
        """True when |rho| is small enough for the geometric-mean path."""
        return abs(self.rho) < RHO_EPS

    @property
    def is_nonstandard(self) -> bool:
        """True in the rho > 1 regime, where the elasticity of
        substitution is negative and isoquants are concave."""
        return self.rho > 1.0


@dataclass(frozen=True)
class FactorBundle:
    """One point of input space, in canonical factor order.

    Quantities must be nonnegative and finite.  Zeros are legal; functions
    that cannot handle them raise ``BoundaryPointError`` instead of
    guessing.
    """

    K: float
    K_agi: float
    L_h: float
    L_agi: float

    def __post_init__(self) -> None:
        for name, q in zip(FACTOR_NAMES, self.quantities):
            # q >= 0 is False for NaN, so this also rejects NaN
            if not (math.isfinite(q) and q >= 0.0):
                raise ValueError(
                    f"{name} must be nonnegative and finite, got {q!r}"
                )

    @property
    def quantities(self) -> tuple[float, float, float, float]:
        return (self.K, self.K_agi, self.L_h, self.L_agi)

    @property
    def is_interior(self) -> bool:
        """True when every factor quantity is strictly positive."""
        return all(q > 0.0 for q in self.quantities)

    def scaled(self, t: float) -> FactorBundle:
        """The bundle with every quantity multiplied by t > 0."""
        if not (math.isfinite(t) and t > 0.0):
            raise ValueError(f"scale factor must be positive and finite, got {t!r}")
        return FactorBundle(t * self.K, t * self.K_agi, t * self.L_h, t * self.L_agi)


def elasticity_of_substitution(tech: CesTechnology) -> float:
    """sigma = 1 / (1 - rho).

    Returns ``math.inf`` at rho = 1 (perfect substitutes).  For rho > 1 the
    value is negative; that is reported as-is and flagged by
    ``CesTechnology.is_nonstandard``.
    """
    if tech.rho == 1.0:
        return math.inf
    return 1.0 / (1.0 - tech.rho)


def _active_terms(
    tech: CesTechnology, x: FactorBundle
) -> list[tuple[float, float]]:
    """(share, quantity) pairs with positive share; zero-share factors never
    participate, whatever their quantity."""
    return [(d, q) for d, q in zip(tech.deltas, x.quantities) if d > 0.0]


def _aggregate_paths(
    tech: CesTechnology, x: FactorBundle
) -> tuple[str, float]:
    """Evaluate the weighted power sum, choosing the numerically safe path.

    Returns one of

    * ``("degenerate", inf)``: rho < 0 with a positively weighted zero
      input, the aggregate diverges;
    * ``("empty", 0.0)``: every positively weighted input is zero with
      rho >= 0;
    * ``("log", log_S)``: log-space result, used in the near-zero-rho band
      and at magnitudes past the overflow guard;
    * ``("direct", S)``: plain compensated power sum.
    """
    rho = tech.rho
    terms = _active_terms(tech, x)
    if rho < 0.0 and any(q == 0.0 for _, q in terms):
        return "degenerate", math.inf
    terms = [(d, q) for d, q in terms if q > 0.0]
    if not terms:
        return "empty", 0.0
    if abs(rho) < _NEAR_ZERO_RHO:
        # S = 1 + (sum of shares - 1) + sum_i d_i * expm1(rho * log(x_i)).
        # The share-sum defect looks ignorable (the constructor allows 1e-12,
        # and floats like 0.4 + 0.3 + 0.2 + 0.1 carry ~3e-17) but 1/rho
        # amplifies it six to eight orders of magnitude, so it goes into the
        # same exact accumulation as the increments.
        pieces = [d * expm1(rho * log(q)) for d, q in terms]
        pieces.extend(d for d, _ in terms)
        pieces.append(-1.0)
        return "log", log1p(fsum(pieces))
    logs = [(d, log(q)) for d, q in terms]
    if any(abs(rho * lq) > _LOG_GUARD for _, lq in logs):
        shifted = [log(d) + rho * lq for d, lq in logs]
        top = max(shifted)
        return "log", top + log(fsum(exp(s - top) for s in shifted))
    return "direct", fsum(d * q ** rho for d, q in terms)


def ces_aggregate(tech: CesTechnology, x: FactorBundle) -> float:
    """The inner weighted power sum S = sum_i d_i * x_i^rho.

    For rho < 0 with a zero quantity on a positive share this returns
    ``math.inf`` as a degenerate marker rather than raising; ``output``
    maps that marker to Y = 0.
    """
    kind, value = _aggregate_paths(tech, x)
    if kind == "degenerate":
        return math.inf
    if kind == "log":
        return exp(value)  # saturates to 0.0 or inf at the float range edges
    return value


def log_ces_aggregate(tech: CesTechnology, x: FactorBundle) -> float:
    """log S, finite wherever S is positive and finite.

    Returns ``inf`` for the degenerate rho < 0 marker and ``-inf`` when
    every weighted input is zero with rho >= 0.
    """
    kind, value = _aggregate_paths(tech, x)
    if kind == "degenerate":
        return math.inf
    if kind == "empty":
        return -math.inf
    if kind == "direct":
        return log(value)
    return value


def output(tech: CesTechnology, x: FactorBundle) -> float:
    """Production output Y at the bundle x.

    On the Cobb-Douglas path this is the weighted geometric mean
    ``A * prod x_i^{d_i}``; a zero quantity on a positive share gives
    Y = 0.  Otherwise Y = A * S^(1/rho), with the degenerate rho < 0
    marker mapped to Y = 0 (an essential input is missing) and log-space
    evaluation wherever direct powers would overflow.
    """
    A, rho = tech.A, tech.rho
    if tech.is_cobb_douglas:
        terms = _active_terms(tech, x)
        if any(q == 0.0 for _, q in terms):
            return 0.0
        return A * exp(fsum(d * log(q) for d, q in terms))
    kind, value = _aggregate_paths(tech, x)
    if kind == "degenerate" or kind == "empty":
        return 0.0
    if kind == "log":
        return A * exp(value / rho)
    return A * value ** (1.0 / rho)
