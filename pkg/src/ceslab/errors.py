"""Exception hierarchy for the laboratory.

Everything raised on purpose derives from CesLabError so callers (the CLI in
particular) can distinguish our diagnostics from genuine bugs.  Constructor
argument checking still uses plain ValueError: a bad parameter is a caller
mistake, not a numeric event.
"""

from __future__ import annotations


class CesLabError(Exception):
    """Base class for all laboratory errors."""

    #: short machine-readable code, used in result-table error columns
    code = "error"


class BoundaryPointError(CesLabError):
    """A quantity that needs strictly positive inputs was asked for on the
    boundary of input space (some factor is exactly zero)."""

    code = "boundary_point"


class DegenerateInputError(CesLabError):
    """The requested quantity is undefined for this input, e.g. TFP with
    every factor equal to zero."""

    code = "degenerate_input"


class RegimeMismatchError(CesLabError):
    """A formula only valid in one substitution regime was applied in
    another (the dominance approximation needs rho > 0)."""

    code = "regime_mismatch"


class InvalidScenarioError(CesLabError):
    """A scenario file or scenario object failed validation."""

    code = "invalid_scenario"


class GridMismatchError(CesLabError):
    """Paired path arrays disagree in length, or a time grid is not
    strictly increasing."""

    code = "grid_mismatch"
