"""Exact evaluation of the canonical reciprocal cost and its companion forms.

The canonical cost of a positive ratio x is

    J(x) = (x + 1/x)/2 - 1 = (x - 1)^2 / (2x),

nonnegative with its unique zero at the equilibrium x = 1.  In logarithmic
coordinates t = ln x it reads J(e^t) = cosh(t) - 1.  The second form above
is the one evaluated here: it avoids the catastrophic cancellation of
(x + 1/x)/2 - 1 near x = 1.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import ConvergenceError, DomainError, ParameterError, RangeOverflowError

# cosh(t) stays inside double range for |t| <= 700
COSH_T_MAX = 700.0


def validate_positive_ratio(x: float) -> float:
    """Return x as a float after checking it is finite and strictly positive."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"positive ratio must be finite, got {x}")
    if x <= 0.0:
        raise DomainError(f"positive ratio must satisfy x > 0, got {x}")
    return x


def validate_log_coord(t: float) -> float:
    """Return t as a float after checking finiteness."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"log coordinate must be finite, got {t}")
    return t


def _cosh_minus_1(t: float) -> float:
    # cosh(t) - 1 = 2 sinh(t/2)^2, stable near t = 0
    s = math.sinh(0.5 * t)
    return 2.0 * s * s


class LogForms(NamedTuple):
    G: float
    H: float


class AmGmDecomposition(NamedTuple):
    am: float
    gm: float
    diff: float


class GoldenResult(NamedTuple):
    phi: float
    iterations: int
    cost_at_phi: float


def canonical_cost(x: float) -> float:
    """J(x) = (x-1)^2/(2x); equals (x + 1/x)/2 - 1 to within one ulp."""
    x = validate_positive_ratio(x)
    u = x - 1.0
    return (u * u) / (2.0 * x)


def log_forms(t: float) -> LogForms:
    """The log-coordinate pair (G, H) = (cosh t - 1, cosh t) of the canonical cost."""
    t = validate_log_coord(t)
    if abs(t) > COSH_T_MAX:
        raise RangeOverflowError(
            f"|t| = {abs(t):g} exceeds {COSH_T_MAX:g}; cosh would overflow double precision"
        )
    g = _cosh_minus_1(t)
    return LogForms(G=g, H=g + 1.0)


def am_gm_decomposition(x: float) -> AmGmDecomposition:
    """Arithmetic and geometric means of (x, 1/x); their gap is the canonical cost."""
    x = validate_positive_ratio(x)
    am = 0.5 * (x + 1.0 / x)
    return AmGmDecomposition(am=am, gm=1.0, diff=canonical_cost(x))


def bregman_divergence(t: float) -> float:
    """Bregman divergence of the generator cosh at reference point 0.

    cosh(t) - cosh(0) - sinh(0) * t = cosh(t) - 1, identical to log_forms(t).G
    by construction (same code path).
    """
    return log_forms(t).G


def golden_fixed_point(x0: float, tol: float, max_iter: int) -> GoldenResult:
    """Iterate x -> 1 + 1/x to the unique positive fixed point (1 + sqrt 5)/2.

    Plain fixed-point iteration; converges from every x0 > 0.  Stops when
    consecutive iterates differ by at most tol, else raises ConvergenceError
    (tol too tight for double precision or max_iter too small).
    """
    x = validate_positive_ratio(x0)
    tol = float(tol)
    if not (tol > 0.0 and math.isfinite(tol)):
        raise ParameterError(f"tol must be positive and finite, got {tol}")
    max_iter = int(max_iter)
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")
    for n in range(1, max_iter + 1):
        x_next = 1.0 + 1.0 / x
        if abs(x_next - x) <= tol:
            return GoldenResult(phi=x_next, iterations=n, cost_at_phi=canonical_cost(x_next))
        x = x_next
    raise ConvergenceError(
        f"fixed-point iteration did not reach tol={tol:g} in {max_iter} steps"
    )
