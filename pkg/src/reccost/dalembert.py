"""Defect computation for the d'Alembert equation and its ratio-domain form.

The log-coordinate equation is H(t+u) + H(t-u) = 2 H(t) H(u); its defect is

    Delta_H(t, u) = H(t+u) + H(t-u) - 2 H(t) H(u),

zero exactly for solutions.  On positive ratios the equivalent composition
law reads F(xy) + F(x/y) = 2 F(x) F(y) + 2 F(x) + 2 F(y), and the lift
H(t) = F(e^t) + 1 maps one defect onto the other.

Suprema are reported over explicit uniform grids, never over the continuum;
every report carries the grid spec so certificates are explicit about the
discretization.  Max reductions are order-independent, so grid sweeps are
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import validate_log_coord, validate_positive_ratio
from .errors import DomainError
from .grids import symmetric_grid
from .handles import LOG_LINE, POSITIVE_RATIOS, FunctionHandle
from .handles import lift_to_log as _lift

__all__ = [
    "DefectSample",
    "DefectReport",
    "IdentityViolations",
    "defect_log",
    "defect_ratio",
    "lift_to_log",
    "sup_defect",
    "identity_report",
    "ode_residual",
]


@dataclass(frozen=True)
class DefectSample:
    """One evaluation of the defect: the point (t, u) and the signed value."""

    t: float
    u: float
    delta: float


@dataclass(frozen=True)
class DefectReport:
    """Grid supremum of |Delta_H| with the attaining sample and the grid spec."""

    epsilon: float
    argmax: DefectSample
    T: float
    step: float
    count: int


@dataclass(frozen=True)
class IdentityViolations:
    """Grid suprema of the absolute violation of four solution identities.

    product_identity:  H(t+u) H(t-u) = H(t)^2 + H(u)^2 - 1
    difference_square: (H(t+u) - H(t-u))^2 = 4 (H(t)^2 - 1)(H(u)^2 - 1)
    double_angle:      H(2t) = 2 H(t)^2 - 1
    evenness:          H(-t) = H(t)

    All four hold for every solution normalized by H(0) = 1; the trivial
    solution H = 0 satisfies the equation but not these identities.
    """

    product_identity: float
    difference_square: float
    double_angle: float
    evenness: float


def _require_log(h: FunctionHandle, op: str) -> None:
    if h.domain != LOG_LINE:
        raise DomainError(f"{op} needs a log-line handle, got {h.domain}")


def _require_ratio(f: FunctionHandle, op: str) -> None:
    if f.domain != POSITIVE_RATIOS:
        raise DomainError(f"{op} needs a positive-ratio handle, got {f.domain}")


def lift_to_log(f: FunctionHandle) -> FunctionHandle:
    """Lift a positive-ratio handle to log coordinates: H(t) = f(e^t) + 1."""
    return _lift(f)


def defect_log(h: FunctionHandle, t: float, u: float) -> float:
    """Delta_H(t, u) = H(t+u) + H(t-u) - 2 H(t) H(u)."""
    _require_log(h, "defect_log")
    t = validate_log_coord(t)
    u = validate_log_coord(u)
    vals = h(np.array([t + u, t - u, t, u]))
    return float(vals[0] + vals[1] - 2.0 * vals[2] * vals[3])


def defect_ratio(f: FunctionHandle, x: float, y: float) -> float:
    """Composition-law defect F(xy) + F(x/y) - 2 F(x) F(y) - 2 F(x) - 2 F(y)."""
    _require_ratio(f, "defect_ratio")
    x = validate_positive_ratio(x)
    y = validate_positive_ratio(y)
    vals = f(np.array([x * y, x / y, x, y]))
    return float(vals[0] + vals[1] - 2.0 * vals[2] * vals[3] - 2.0 * vals[2] - 2.0 * vals[3])


def sup_defect(h: FunctionHandle, T: float, step: float) -> DefectReport:
    """Max of |Delta_H| over the inclusive uniform grid {-T, ..., T}^2.

    Requires h evaluable on [-2T, 2T] since t + u reaches 2T at the corners.
    Ties at the max resolve to the first point in row-major order, so the
    report is deterministic.
    """
    _require_log(h, "sup_defect")
    actual_step, axis = symmetric_grid(T, step)
    if not h.evaluable_on(-2.0 * T, 2.0 * T):
        raise DomainError(f"{h.name}: sup_defect needs evaluability on [-2T, 2T] = [{-2*T:g}, {2*T:g}]")
    vals = h(axis)
    sums = h(np.add.outer(axis, axis))
    diffs = h(np.subtract.outer(axis, axis))
    delta = sums + diffs - 2.0 * np.outer(vals, vals)
    flat = int(np.argmax(np.abs(delta)))
    i, j = divmod(flat, axis.size)
    worst = DefectSample(t=float(axis[i]), u=float(axis[j]), delta=float(delta[i, j]))
    return DefectReport(
        epsilon=abs(worst.delta),
        argmax=worst,
        T=float(T),
        step=actual_step,
        count=axis.size**2,
    )


def identity_report(h: FunctionHandle, T: float, step: float) -> IdentityViolations:
    """Grid suprema of the four identity violations; see IdentityViolations."""
    _require_log(h, "identity_report")
    _, axis = symmetric_grid(T, step)
    if not h.evaluable_on(-2.0 * T, 2.0 * T):
        raise DomainError(f"{h.name}: identity_report needs evaluability on [-2T, 2T]")
    vals = h(axis)
    sums = h(np.add.outer(axis, axis))
    diffs = h(np.subtract.outer(axis, axis))
    sq = vals * vals
    product = np.abs(sums * diffs - (sq[:, None] + sq[None, :] - 1.0))
    diff_sq = np.abs((sums - diffs) ** 2 - 4.0 * np.outer(sq - 1.0, sq - 1.0))
    double = np.abs(h(2.0 * axis) - (2.0 * sq - 1.0))
    even = np.abs(h(-axis) - vals)
    return IdentityViolations(
        product_identity=float(product.max()),
        difference_square=float(diff_sq.max()),
        double_angle=float(double.max()),
        evenness=float(even.max()),
    )


def ode_residual(h: FunctionHandle, a: float, T: float, step: float, fd_h: float) -> float:
    """Grid supremum of |D_fd(t) - a h(t)| with D the central second difference.

    D_fd(t) = (h(t + fd_h) - 2 h(t) + h(t - fd_h)) / fd_h^2.  Small when h
    solves h'' = a h with a the log-curvature; needs h evaluable on
    [-T - fd_h, T + fd_h].
    """
    _require_log(h, "ode_residual")
    a = float(a)
    if not math.isfinite(a):
        raise DomainError(f"curvature coefficient must be finite, got {a}")
    fd_h = float(fd_h)
    if not (fd_h > 0.0 and math.isfinite(fd_h)):
        raise DomainError(f"fd_h must be positive and finite, got {fd_h}")
    _, axis = symmetric_grid(T, step)
    center = h(axis)
    second = (h(axis + fd_h) - 2.0 * center + h(axis - fd_h)) / (fd_h * fd_h)
    return float(np.max(np.abs(second - a * center)))
