"""Quantitative stability certificates for approximate d'Alembert solutions.

For an even, three-times differentiable H on [-T, T] with H(0) = 1 and
a = H''(0) > 0, a bounded defect forces H close to the cosh branch:

    |H(t) - cosh(sqrt(a) t)| <= (delta(h)/a) (cosh(sqrt(a)|t|) - 1)

for every 0 < h <= T and |t| <= T - h, with

    delta(h) = eps/h^2 + (1 + B) K h / 3,
    eps = sup |Delta_H| on [-T, T]^2,  B = sup |H|,  K = sup |H'''|.

certify() estimates every ingredient on explicit grids, picks h (or takes a
user choice), sweeps the window and reports a verified/failed verdict with
margins.  Hypothesis violations (not even, H(0) != 1, a <= 0) are errors,
not warnings, to keep certificates sound.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .calibration import estimate_kappa
from .dalembert import sup_defect
from .errors import DomainError, PreconditionError
from .grids import symmetric_grid
from .handles import LOG_LINE, POSITIVE_RATIOS, FunctionHandle, lift_to_log

_HYPOTHESIS_TOL = 1e-6
_SIMPLIFIED_A_TOL = 1e-10

ENVELOPE_COSH_BRANCH = "cosh-branch"
ENVELOPE_DELTA_TIMES_J = "delta-times-J"


@dataclass(frozen=True)
class StabilityInputs:
    """The certificate ingredients: window, step h, and the bounds eps, B, K, a."""

    T: float
    h: float
    epsilon: float
    B: float
    K: float
    a: float


@dataclass(frozen=True)
class EnvelopeSpec:
    """The error envelope t -> scale * (cosh(rate |t|) - 1).

    form is "cosh-branch" in general; "delta-times-J" marks the ratio-domain
    case a = 1 where the bound reads |F(x) - J(x)| <= delta * J(x).
    """

    scale: float
    rate: float
    form: str = ENVELOPE_COSH_BRANCH

    def value(self, t):
        return self.scale * (np.cosh(self.rate * np.abs(t)) - 1.0)


@dataclass(frozen=True)
class StabilityCertificate:
    inputs: StabilityInputs
    delta: float
    envelope: EnvelopeSpec
    max_observed_error: float
    max_envelope_margin: float  # min over the grid of envelope - |error|
    verified: bool


def estimate_bounds(h: FunctionHandle, T: float) -> tuple[float, float]:
    """(B, K) = (grid sup |H|, sup |H'''|) on [-T, T].

    K uses the analytic third derivative when the handle provides one; for
    sample tables it falls back to third central differences with step four
    times the table spacing, an ill-conditioned estimate flagged by callers.
    """
    if h.domain != LOG_LINE:
        raise DomainError(f"estimate_bounds needs a log-line handle, got {h.domain}")
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"T must be positive and finite, got {T}")
    _, grid = symmetric_grid(T, T / 1000.0)
    vals = h(grid)
    B = float(np.max(np.abs(vals)))
    if h.deriv_order >= 3:
        K = float(np.max(np.abs(h.derivative(grid, 3))))
        return B, K
    if h.table is not None:
        spacing = float(np.median(np.diff(h.table[0])))
    else:
        spacing = float(grid[1] - grid[0])
    d = 4.0 * spacing
    if d > T / 10.0:
        warnings.warn(
            f"{h.name}: table spacing {spacing:g} is coarse for third differences on "
            f"[-{T:g}, {T:g}]; K is ill-conditioned",
            stacklevel=2,
        )
    lo, hi = h.support
    inner = grid[(grid - 2.0 * d >= lo) & (grid + 2.0 * d <= hi)]
    if inner.size == 0:
        raise DomainError(f"{h.name}: no room for third central differences inside the support")
    num = h(inner + 2.0 * d) - 2.0 * h(inner + d) + 2.0 * h(inner - d) - h(inner - 2.0 * d)
    K = float(np.max(np.abs(num)) / (2.0 * d**3))
    return B, K


def delta_of_h(epsilon: float, B: float, K: float, h: float) -> float:
    """delta(h) = eps/h^2 + (1 + B) K h / 3."""
    h = float(h)
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"h must be positive and finite, got {h}")
    for nm, v in (("epsilon", epsilon), ("B", B), ("K", K)):
        if not (float(v) >= 0.0 and math.isfinite(float(v))):
            raise DomainError(f"{nm} must be >= 0 and finite, got {v}")
    return float(epsilon) / (h * h) + (1.0 + float(B)) * float(K) * h / 3.0


def optimal_h(epsilon: float, B: float, K: float, T: float) -> float:
    """The h minimizing delta over (0, T].

    delta'(h) = -2 eps/h^3 + (1+B)K/3 vanishes at h = (6 eps / ((1+B)K))^(1/3),
    clamped to T.  With eps = 0 the infimum is at h -> 0; the policy floor
    h = T/100 keeps eps/h^2 below round-off noise.  With (1+B)K = 0 delta is
    decreasing, so h = T.
    """
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"T must be positive and finite, got {T}")
    for nm, v in (("epsilon", epsilon), ("B", B), ("K", K)):
        if not (float(v) >= 0.0 and math.isfinite(float(v))):
            raise DomainError(f"{nm} must be >= 0 and finite, got {v}")
    epsilon = float(epsilon)
    if epsilon == 0.0:
        return T / 100.0
    c = (1.0 + float(B)) * float(K)
    if c == 0.0:
        return float(T)
    return min(float(T), (6.0 * epsilon / c) ** (1.0 / 3.0))


def _sweep_grid(half_width: float, step: float) -> np.ndarray:
    # symmetric grid with exact 0; empty window degenerates to the single point 0
    if half_width < step:
        return np.array([0.0])
    m = int(math.floor(half_width / step + 1e-12))
    right = step * np.arange(1, m + 1)
    if right[-1] > half_width:
        right = right[:-1]
    return np.concatenate([-right[::-1], [0.0], right])


def certify(
    h: FunctionHandle,
    T: float,
    step: float,
    h_choice: float | None = None,
    a: float | None = None,
    kappa_h0: float = 0.25,
    kappa_levels: int = 6,
) -> StabilityCertificate:
    """Build a stability certificate for a log-line handle on [-T, T].

    Checks the hypotheses (even, H(0) = 1 within 1e-6, a > 0), measures
    eps, B, K on grids, picks h (optimal_h unless h_choice is given), and
    sweeps |t| <= T - h comparing |H(t) - cosh(sqrt(a) t)| against the
    envelope.  a defaults to the extrapolated log-curvature; callers may
    override it, at the price of certifying against a different branch.
    """
    if h.domain != LOG_LINE:
        raise DomainError(f"certify needs a log-line handle, got {h.domain}")
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"T must be positive and finite, got {T}")
    if not h.evaluable_on(-2.0 * T, 2.0 * T):
        raise DomainError(f"{h.name}: certify needs evaluability on [-2T, 2T]")

    _, axis = symmetric_grid(T, step)
    vals = h(axis)
    h_at_0 = h(0.0)
    if abs(h_at_0 - 1.0) > _HYPOTHESIS_TOL:
        raise PreconditionError(
            f"H(0) = {h_at_0!r} violates the normalization H(0) = 1 (tolerance {_HYPOTHESIS_TOL:g})"
        )
    even_dev = float(np.max(np.abs(vals - vals[::-1])))
    if even_dev > _HYPOTHESIS_TOL * max(1.0, float(np.max(np.abs(vals)))):
        raise PreconditionError(
            f"handle is not even: sup|H(-t) - H(t)| = {even_dev:.3e} on the grid"
        )

    if a is None:
        a = estimate_kappa(h, h0=min(kappa_h0, 0.5 * T), levels=kappa_levels).kappa
    a = float(a)
    if not (a > 0.0 and math.isfinite(a)):
        raise PreconditionError(f"curvature a = {a!r} violates the hypothesis a > 0")

    report = sup_defect(h, T, step)
    epsilon = report.epsilon
    B, K = estimate_bounds(h, T)
    if h_choice is None:
        h_used = optimal_h(epsilon, B, K, T)
    else:
        h_used = float(h_choice)
        if not (0.0 < h_used <= T):
            raise DomainError(f"h_choice must satisfy 0 < h <= T, got {h_choice}")
    delta = delta_of_h(epsilon, B, K, h_used)

    sqrt_a = math.sqrt(a)
    ts = _sweep_grid(T - h_used, report.step)
    branch = np.cosh(sqrt_a * ts)
    err = np.abs(h(ts) - branch)
    envelope = EnvelopeSpec(scale=delta / a, rate=sqrt_a)
    env = envelope.value(ts)
    margin = env - err
    min_margin = float(np.min(margin))
    return StabilityCertificate(
        inputs=StabilityInputs(T=float(T), h=h_used, epsilon=epsilon, B=B, K=K, a=a),
        delta=delta,
        envelope=envelope,
        max_observed_error=float(np.max(err)),
        max_envelope_margin=min_margin,
        verified=bool(min_margin >= 0.0),
    )


def certificate_sweep(handle: FunctionHandle, cert: StabilityCertificate, step: float):
    """(t, H, branch, envelope, |error|) columns of a certificate's sweep grid."""
    ts = _sweep_grid(cert.inputs.T - cert.inputs.h, float(step))
    branch = np.cosh(math.sqrt(cert.inputs.a) * ts)
    vals = handle(ts)
    err = np.abs(vals - branch)
    return ts, vals, branch, cert.envelope.value(ts), err


def certify_ratio(
    f: FunctionHandle,
    T: float,
    step: float,
    h_choice: float | None = None,
    a: float | None = None,
    kappa_h0: float = 0.25,
    kappa_levels: int = 6,
) -> StabilityCertificate:
    """Certificate for a positive-ratio handle over x in (e^-(T-h), e^(T-h)).

    Lifts to log coordinates and certifies there; the envelope in x reads
    (delta/a)(cosh(sqrt(a) |ln x|) - 1).  When a is within 1e-10 of 1 the
    envelope is reported in the simplified form delta * J(x).
    """
    if f.domain != POSITIVE_RATIOS:
        raise DomainError(f"certify_ratio needs a positive-ratio handle, got {f.domain}")
    cert = certify(
        lift_to_log(f), T, step, h_choice=h_choice, a=a,
        kappa_h0=kappa_h0, kappa_levels=kappa_levels,
    )
    if abs(cert.inputs.a - 1.0) <= _SIMPLIFIED_A_TOL:
        cert = replace(cert, envelope=replace(cert.envelope, form=ENVELOPE_DELTA_TIMES_J))
    return cert
