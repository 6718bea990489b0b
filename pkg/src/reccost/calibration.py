"""Log-curvature estimation and classification of calibrated solution branches.

The log-curvature of a handle H with H(0) = 1 is kappa = lim_{t->0} 2(H(t)-1)/t^2.
A continuous d'Alembert solution with that limit is exactly one of

    Zero          H = 0                      (only when H(0) = 0)
    ConstantOne   H = 1                      (kappa = 0)
    Cos           H(t) = cos(k t),  kappa = -k^2
    Cosh          H(t) = cosh(k t), kappa = +k^2

From finite data we report an extrapolated kappa plus an uncertainty and
never claim the limit exists; existence is the caller's modeling assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ClassificationError, DomainError, ParameterError, PrecisionError
from .grids import symmetric_grid
from .handles import LOG_LINE, FunctionHandle

BRANCH_ZERO = "Zero"
BRANCH_CONSTANT_ONE = "ConstantOne"
BRANCH_COS = "Cos"
BRANCH_COSH = "Cosh"


@dataclass(frozen=True)
class CurvatureEstimate:
    """Extrapolated log-curvature with its uncertainty and the raw ratio table.

    ratio_table holds (h, q(h)) pairs on a decreasing geometric sequence of
    steps; levels is the extrapolation depth actually used; noise_limited is
    set when the extrapolants stopped improving before the requested depth
    (round-off dominated), in which case the best stable level is returned.
    """

    kappa: float
    uncertainty: float
    ratio_table: tuple[tuple[float, float], ...]
    levels: int
    noise_limited: bool = False


@dataclass(frozen=True)
class BranchClassification:
    """The fitted branch, its scale k (None for Zero/ConstantOne), and diagnostics.

    residual is the sup deviation from the fitted branch on the classification
    window; kappa_used is the curvature estimate that selected the branch.
    """

    branch: str
    k: float | None
    residual: float
    kappa_used: float


def quad_ratio(h: FunctionHandle, step: float) -> float:
    """q(step) = 2 (H(step) - 1) / step^2 with the symmetrized value
    (H(step) + H(-step))/2, which cancels odd components exactly."""
    if h.domain != LOG_LINE:
        raise DomainError(f"quad_ratio needs a log-line handle, got {h.domain}")
    s = float(step)
    if s == 0.0 or not math.isfinite(s):
        raise DomainError(f"step must be nonzero and finite, got {step}")
    s = abs(s)
    sym = 0.5 * (h(s) + h(-s))
    return 2.0 * (sym - 1.0) / (s * s)


def estimate_kappa(h: FunctionHandle, h0: float = 0.25, levels: int = 6) -> CurvatureEstimate:
    """Richardson-extrapolated log-curvature from the ratio table q(h0 * 2^-k).

    q(h) has an even-power error expansion q = kappa + c2 h^2 + c4 h^4 + ...
    for smooth handles, so Neville elimination with factors 4^j applies.  The
    defaults h0 = 0.25, levels = 6 balance the h^2 truncation of q against
    its round-off amplification: forming 2(H(h)-1)/h^2 loses about
    eps * |H| / h^2 absolutely, which is ~1e-11 at the deepest default level,
    far below the 1e-8 scale the toolkit certifies.  The uncertainty is the
    change between the last two extrapolants.
    """
    if not (h0 > 0.0 and math.isfinite(h0)):
        raise ParameterError(f"h0 must be positive and finite, got {h0}")
    levels = int(levels)
    if levels < 2:
        raise ParameterError(f"levels must be >= 2, got {levels}")
    steps = [h0 * 2.0 ** (-k) for k in range(levels)]
    qs = [quad_ratio(h, s) for s in steps]

    diag: list[float] = []
    prev: list[float] = []
    for k, q in enumerate(qs):
        cur = [q]
        for j in range(1, k + 1):
            f = 4.0**j
            cur.append((f * cur[j - 1] - prev[j - 1]) / (f - 1.0))
        diag.append(cur[-1])
        prev = cur

    unc = [abs(diag[k] - diag[k - 1]) for k in range(1, len(diag))]
    table = tuple((float(s), float(q)) for s, q in zip(steps, qs))
    floor = 1e-14 * (1.0 + max(abs(d) for d in diag))
    for i in range(1, len(unc)):
        if unc[i] > unc[i - 1] and unc[i] > floor:
            # extrapolants started diverging: noise-dominated beyond level i
            return CurvatureEstimate(
                kappa=diag[i],
                uncertainty=unc[i - 1],
                ratio_table=table,
                levels=i + 1,
                noise_limited=True,
            )
    return CurvatureEstimate(
        kappa=diag[-1],
        uncertainty=unc[-1],
        ratio_table=table,
        levels=levels,
        noise_limited=False,
    )


def classify(
    h: FunctionHandle,
    window_T: float,
    const_tol: float = 1e-8,
    residual_grid_step: float | None = None,
    residual_tol: float | None = None,
    h0: float = 0.25,
    levels: int = 6,
) -> BranchClassification:
    """Classify a normalized handle into its unique solution branch.

    Requires h(0) within const_tol of 0 or of 1.  The branch is selected by
    the sign of the extrapolated curvature; for the parametric branches k is
    refined by a one-dimensional least-squares fit on the window, initialized
    at sqrt(|kappa|), because sampled data make the purely local limit noisy
    while the global fit is well conditioned.  Raises ClassificationError
    when the final sup residual exceeds residual_tol (the handle is not near
    any branch); the default threshold is 1e-6 * cosh(window_T).
    """
    if h.domain != LOG_LINE:
        raise DomainError(f"classify needs a log-line handle, got {h.domain}")
    if not (window_T > 0 and math.isfinite(window_T)):
        raise DomainError(f"window_T must be positive and finite, got {window_T}")
    step = residual_grid_step if residual_grid_step is not None else window_T / 100.0
    accept = residual_tol if residual_tol is not None else 1e-6 * math.cosh(window_T)
    _, grid = symmetric_grid(window_T, step)
    vals = h(grid)
    h_at_0 = h(0.0)

    if abs(h_at_0) <= const_tol:
        residual = float(np.max(np.abs(vals)))
        if residual > const_tol:
            raise ClassificationError(
                f"H(0) ~ 0 but sup|H| = {residual:.3e} on the window; not the zero branch"
            )
        return BranchClassification(BRANCH_ZERO, None, residual, 0.0)

    if abs(h_at_0 - 1.0) > const_tol:
        raise ClassificationError(
            f"H(0) = {h_at_0!r} is near neither 0 nor 1 (tolerance {const_tol:g}); "
            "only normalized handles are classified"
        )

    est = estimate_kappa(h, h0=min(h0, 0.5 * window_T), levels=levels)
    kappa = est.kappa
    if est.noise_limited and est.uncertainty > max(abs(kappa), const_tol):
        raise PrecisionError(
            f"curvature estimate {kappa:.3e} +- {est.uncertainty:.3e} is round-off "
            "dominated; cannot pick a branch"
        )

    if abs(kappa) <= const_tol:
        residual = float(np.max(np.abs(vals - 1.0)))
        if residual > accept:
            raise ClassificationError(
                f"curvature ~ 0 but sup|H - 1| = {residual:.3e} exceeds {accept:.3e}"
            )
        return BranchClassification(BRANCH_CONSTANT_ONE, None, residual, kappa)

    if kappa > 0:
        branch, ref, k0 = BRANCH_COSH, np.cosh, math.sqrt(kappa)
    else:
        branch, ref, k0 = BRANCH_COS, np.cos, math.sqrt(-kappa)

    def sq_residual(k: float) -> float:
        r = vals - ref(k * grid)
        return float(np.dot(r, r))

    fit = minimize_scalar(
        sq_residual,
        bounds=(0.7 * k0, 1.3 * k0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    k = float(fit.x) if fit.fun <= sq_residual(k0) else k0
    residual = float(np.max(np.abs(vals - ref(k * grid))))
    if residual > accept:
        raise ClassificationError(
            f"not near any branch: sup residual {residual:.3e} vs {branch}(k={k:.6g}) "
            f"exceeds the acceptance threshold {accept:.3e}"
        )
    return BranchClassification(branch, k, residual, kappa)
