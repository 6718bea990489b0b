"""Evaluable function handles: analytic families and interpolated sample tables.

A handle couples a real function of one real variable with the coordinate
domain it lives on (the log line t, or positive ratios x), the interval on
which it may be evaluated, and as many analytic derivatives as the
construction provides (0 for sample tables).  Handles are immutable after
construction and safe to share across concurrent callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError

LOG_LINE = "log-line"
POSITIVE_RATIOS = "positive-ratios"
BUILTIN_FAMILY = "builtin-family"
SAMPLE_TABLE = "sample-table"

# exp() overflows just above 709.78; lifted handles stay clear of it
_EXP_MAX = 709.0


@dataclass(frozen=True, eq=False)
class FunctionHandle:
    """An evaluable function plus its domain tag, support and derivative stack.

    ``fns[0]`` is the value, ``fns[k]`` the k-th derivative; all accept and
    return numpy arrays.  ``support`` is the closed interval of evaluable
    abscissas (in t for log-line handles, in x for positive-ratio handles).
    """

    kind: str
    domain: str
    name: str
    deriv_order: int
    support: tuple[float, float]
    fns: tuple[Callable, ...]
    params: Mapping[str, float] = field(default_factory=dict)
    table: tuple[np.ndarray, np.ndarray] | None = None

    def _check(self, arr: np.ndarray) -> None:
        if arr.size == 0:
            return
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"{self.name}: non-finite abscissa")
        if self.domain == POSITIVE_RATIOS and float(np.min(arr)) <= 0.0:
            raise DomainError(f"{self.name}: positive-ratio handles require x > 0")
        lo, hi = self.support
        if float(np.min(arr)) < lo or float(np.max(arr)) > hi:
            raise DomainError(
                f"{self.name}: abscissa outside evaluable range [{lo:.6g}, {hi:.6g}]"
            )

    def __call__(self, z):
        arr = np.asarray(z, dtype=float)
        self._check(arr)
        out = np.asarray(self.fns[0](arr), dtype=float)
        return float(out) if arr.ndim == 0 else out

    def derivative(self, z, order: int):
        if not 1 <= order <= self.deriv_order:
            raise DomainError(
                f"{self.name}: derivative of order {order} unavailable "
                f"(capability {self.deriv_order})"
            )
        arr = np.asarray(z, dtype=float)
        self._check(arr)
        out = np.asarray(self.fns[order](arr), dtype=float)
        return float(out) if arr.ndim == 0 else out

    def evaluable_on(self, lo: float, hi: float) -> bool:
        return self.support[0] <= lo and hi <= self.support[1]


def analytic(
    domain: str,
    name: str,
    fns,
    support=(-math.inf, math.inf),
    params: Mapping[str, float] | None = None,
) -> FunctionHandle:
    """Wrap a value callable plus optional derivative callables as a builtin handle."""
    if domain not in (LOG_LINE, POSITIVE_RATIOS):
        raise DomainError(f"unknown domain tag {domain!r}")
    lo, hi = float(support[0]), float(support[1])
    if domain == POSITIVE_RATIOS and not lo > 0.0:
        raise DomainError("positive-ratio support must have a positive lower edge")
    return FunctionHandle(
        kind=BUILTIN_FAMILY,
        domain=domain,
        name=name,
        deriv_order=len(fns) - 1,
        support=(lo, hi),
        fns=tuple(fns),
        params=dict(params or {}),
    )


def sample_table(domain: str, xs, ys, name: str = "table") -> FunctionHandle:
    """Cubic interpolant over strictly increasing abscissas.

    Queries outside [xs[0], xs[-1]] are a domain error, never extrapolated.
    Derivative capability is 0: consumers fall back to finite differences.
    """
    if domain not in (LOG_LINE, POSITIVE_RATIOS):
        raise DomainError(f"unknown domain tag {domain!r}")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise DomainError("table needs two equal-length 1-D columns with >= 2 rows")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise DomainError("table contains non-finite entries")
    if np.any(np.diff(xs) <= 0):
        raise DomainError("table abscissas must be strictly increasing")
    if domain == POSITIVE_RATIOS and xs[0] <= 0.0:
        raise DomainError("positive-ratio table needs abscissas > 0")
    xs = xs.copy()
    ys = ys.copy()
    xs.setflags(write=False)
    ys.setflags(write=False)
    spline = CubicSpline(xs, ys)
    return FunctionHandle(
        kind=SAMPLE_TABLE,
        domain=domain,
        name=name,
        deriv_order=0,
        support=(float(xs[0]), float(xs[-1])),
        fns=(lambda a: spline(a),),
        table=(xs, ys),
    )


def lift_to_log(f: FunctionHandle) -> FunctionHandle:
    """Log-coordinate lift H(t) = f(e^t) + 1 of a positive-ratio handle.

    Carries analytic derivatives through the chain rule when the source has
    them; a lifted table keeps derivative capability 0.
    """
    if f.domain != POSITIVE_RATIOS:
        raise DomainError(f"lift_to_log needs a positive-ratio handle, got {f.domain}")
    lo, hi = f.support
    t_lo = max(math.log(lo), -_EXP_MAX)
    t_hi = _EXP_MAX if math.isinf(hi) else min(math.log(hi), _EXP_MAX)
    v = f.fns[0]

    def h0(t):
        return np.asarray(v(np.exp(t)), dtype=float) + 1.0

    fns = [h0]
    order = min(f.deriv_order, 3)
    if order >= 1:
        d1 = f.fns[1]

        def h1(t):
            x = np.exp(t)
            return d1(x) * x

        fns.append(h1)
    if order >= 2:
        d1, d2 = f.fns[1], f.fns[2]

        def h2(t):
            x = np.exp(t)
            return d2(x) * x * x + d1(x) * x

        fns.append(h2)
    if order >= 3:
        d1, d2, d3 = f.fns[1], f.fns[2], f.fns[3]

        def h3(t):
            x = np.exp(t)
            return d3(x) * x**3 + 3.0 * d2(x) * x * x + d1(x) * x

        fns.append(h3)
    return FunctionHandle(
        kind=f.kind,
        domain=LOG_LINE,
        name=f"lift({f.name})",
        deriv_order=order,
        support=(t_lo, t_hi),
        fns=tuple(fns),
        params=dict(f.params),
        table=f.table,
    )


def to_ratio(h: FunctionHandle) -> FunctionHandle:
    """Positive-ratio projection F(x) = h(ln x) - 1 of a log-line handle."""
    if h.domain != LOG_LINE:
        raise DomainError(f"to_ratio needs a log-line handle, got {h.domain}")
    t_lo, t_hi = h.support
    x_lo = math.exp(max(t_lo, -_EXP_MAX + 1.0))
    x_hi = math.exp(min(t_hi, _EXP_MAX - 1.0))
    v = h.fns[0]

    def f0(x):
        return np.asarray(v(np.log(x)), dtype=float) - 1.0

    fns = [f0]
    order = min(h.deriv_order, 3)
    if order >= 1:
        d1 = h.fns[1]

        def f1(x):
            return d1(np.log(x)) / x

        fns.append(f1)
    if order >= 2:
        d1, d2 = h.fns[1], h.fns[2]

        def f2(x):
            u = np.log(x)
            return (d2(u) - d1(u)) / (x * x)

        fns.append(f2)
    if order >= 3:
        d1, d2, d3 = h.fns[1], h.fns[2], h.fns[3]

        def f3(x):
            u = np.log(x)
            return (d3(u) - 3.0 * d2(u) + 2.0 * d1(u)) / x**3

        fns.append(f3)
    return FunctionHandle(
        kind=h.kind,
        domain=POSITIVE_RATIOS,
        name=f"ratio({h.name})",
        deriv_order=order,
        support=(x_lo, x_hi),
        fns=tuple(fns),
        params=dict(h.params),
        table=h.table,
    )
