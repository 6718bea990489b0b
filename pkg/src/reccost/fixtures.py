"""Built-in analytic families, counterexample profiles and smooth perturbations.

Families (log-line profile h(t) / positive-ratio profile F(x) = h(ln x) - 1):

    cosh-lambda   h(t) = cosh(lambda t)            exact solution branch
    cos-k         h(t) = cos(k t)                  oscillatory solution branch
    constant-one  h(t) = 1                         degenerate solution
    zero          h(t) = 0                         trivial solution (F = -1)
    quadlog       h(t) = 1 + t^2/2                 calibrated non-solution
    noisy-cosh    cosh(lambda t) + smooth even perturbation
    powerlaw-w    F(x) = (W + 1/W)/2 - 1 with W = x^lambda, evaluated via W

cosh-lambda and powerlaw-w are the same function computed along different
routes; agreement between them is asserted by the test suite.  All handles
expose analytic derivatives to order 3 and are immutable; noisy-cosh noise
coefficients are materialized at construction from the seed, so evaluation
order cannot change values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError, ParameterError
from .handles import LOG_LINE, POSITIVE_RATIOS, FunctionHandle, analytic

FAMILY_COSH_LAMBDA = "cosh-lambda"
FAMILY_COS_K = "cos-k"
FAMILY_CONSTANT_ONE = "constant-one"
FAMILY_ZERO = "zero"
FAMILY_QUADLOG = "quadlog"
FAMILY_NOISY_COSH = "noisy-cosh"
FAMILY_POWERLAW_W = "powerlaw-w"

FAMILIES = (
    FAMILY_COSH_LAMBDA,
    FAMILY_COS_K,
    FAMILY_CONSTANT_ONE,
    FAMILY_ZERO,
    FAMILY_QUADLOG,
    FAMILY_NOISY_COSH,
    FAMILY_POWERLAW_W,
)

_ALIASES = {"cosh": FAMILY_COSH_LAMBDA, "cos": FAMILY_COS_K}

NATURAL_DOMAIN = {
    FAMILY_COSH_LAMBDA: POSITIVE_RATIOS,
    FAMILY_COS_K: LOG_LINE,
    FAMILY_CONSTANT_ONE: LOG_LINE,
    FAMILY_ZERO: LOG_LINE,
    FAMILY_QUADLOG: POSITIVE_RATIOS,
    FAMILY_NOISY_COSH: LOG_LINE,
    FAMILY_POWERLAW_W: POSITIVE_RATIOS,
}

PERTURB_MODES = ("poly4", "sine")
_NOISY_MODES = ("poly4", "sine", "trig")

_COSH_T_MAX = 700.0
_LOG_SUPPORT_HUGE = 1e150
_RATIO_SUPPORT = (math.exp(-708.0), math.exp(708.0))


@dataclass(frozen=True)
class FamilySpec:
    """A family name plus its validated parameters."""

    family: str
    params: Mapping[str, float] = field(default_factory=dict)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterError(msg)


def _float_param(params, key, default):
    v = float(params.get(key, default))
    if not math.isfinite(v):
        raise ParameterError(f"parameter {key} must be finite, got {v}")
    return v


def _cosh_log_fns(lam: float):
    return (
        lambda t: np.cosh(lam * t),
        lambda t: lam * np.sinh(lam * t),
        lambda t: lam * lam * np.cosh(lam * t),
        lambda t: lam**3 * np.sinh(lam * t),
    )


def _cosh_ratio_fns(lam: float):
    # value via 2 sinh^2(lam ln(x) / 2): stable where cosh(lam ln x) - 1 cancels
    def v(x):
        return 2.0 * np.sinh(0.5 * lam * np.log(x)) ** 2

    def d1(x):
        return lam * np.sinh(lam * np.log(x)) / x

    def d2(x):
        u = lam * np.log(x)
        return (lam * lam * np.cosh(u) - lam * np.sinh(u)) / (x * x)

    def d3(x):
        u = lam * np.log(x)
        return ((lam**3 + 2.0 * lam) * np.sinh(u) - 3.0 * lam * lam * np.cosh(u)) / x**3

    return (v, d1, d2, d3)


def _cos_log_fns(k: float):
    return (
        lambda t: np.cos(k * t),
        lambda t: -k * np.sin(k * t),
        lambda t: -k * k * np.cos(k * t),
        lambda t: k**3 * np.sin(k * t),
    )


def _cos_ratio_fns(k: float):
    def v(x):
        return -2.0 * np.sin(0.5 * k * np.log(x)) ** 2

    def d1(x):
        return -k * np.sin(k * np.log(x)) / x

    def d2(x):
        u = k * np.log(x)
        return (-k * k * np.cos(u) + k * np.sin(u)) / (x * x)

    def d3(x):
        u = k * np.log(x)
        return ((k**3 - 2.0 * k) * np.sin(u) + 3.0 * k * k * np.cos(u)) / x**3

    return (v, d1, d2, d3)


def _quadlog_log_fns():
    return (
        lambda t: 1.0 + 0.5 * t * t,
        lambda t: t,
        lambda t: np.ones_like(t),
        lambda t: np.zeros_like(t),
    )


def _quadlog_ratio_fns():
    def v(x):
        u = np.log(x)
        return 0.5 * u * u

    def d1(x):
        return np.log(x) / x

    def d2(x):
        return (1.0 - np.log(x)) / (x * x)

    def d3(x):
        return (2.0 * np.log(x) - 3.0) / x**3

    return (v, d1, d2, d3)


def _powerlaw_ratio_fns(lam: float):
    # honest "via W" route: F = J(W(x)) with W(x) = x^lambda
    def v(x):
        w = np.power(x, lam)
        return (w - 1.0) ** 2 / (2.0 * w)

    def d1(x):
        w = np.power(x, lam)
        return lam * (w - 1.0 / w) / (2.0 * x)

    def d2(x):
        w = np.power(x, lam)
        return (lam * lam * (w + 1.0 / w) - lam * (w - 1.0 / w)) / (2.0 * x * x)

    def d3(x):
        w = np.power(x, lam)
        return (
            (lam**3 + 2.0 * lam) * (w - 1.0 / w) - 3.0 * lam * lam * (w + 1.0 / w)
        ) / (2.0 * x**3)

    return (v, d1, d2, d3)


def _powerlaw_log_fns(lam: float):
    def v(t):
        w = np.exp(lam * t)
        return 0.5 * (w + 1.0 / w)

    def d1(t):
        w = np.exp(lam * t)
        return 0.5 * lam * (w - 1.0 / w)

    def d2(t):
        w = np.exp(lam * t)
        return 0.5 * lam * lam * (w + 1.0 / w)

    def d3(t):
        w = np.exp(lam * t)
        return 0.5 * lam**3 * (w - 1.0 / w)

    return (v, d1, d2, d3)


def _perturbation_fns(mode: str, amplitude: float, freq: float, seed: int):
    """Even, smooth perturbation p with p(0) = 0 and analytic derivatives to order 3."""
    a = amplitude
    if mode == "poly4":
        return (
            lambda t: a * t**4,
            lambda t: 4.0 * a * t**3,
            lambda t: 12.0 * a * t * t,
            lambda t: 24.0 * a * t,
        )
    if mode == "sine":
        f = freq
        return (
            lambda t: a * (1.0 - np.cos(f * t)),
            lambda t: a * f * np.sin(f * t),
            lambda t: a * f * f * np.cos(f * t),
            lambda t: -a * f**3 * np.sin(f * t),
        )
    if mode == "trig":
        # seeded random even trig sum, coefficients fixed at construction
        rng = np.random.default_rng(seed)
        raw = rng.random(5)
        c = raw / raw.sum()
        js = freq * np.arange(1, 6)

        def p0(t):
            tt = np.asarray(t, dtype=float)
            return a * np.sum(c[:, None] * (1.0 - np.cos(np.outer(js, tt.ravel()))), axis=0).reshape(tt.shape)

        def p1(t):
            tt = np.asarray(t, dtype=float)
            return a * np.sum((c * js)[:, None] * np.sin(np.outer(js, tt.ravel())), axis=0).reshape(tt.shape)

        def p2(t):
            tt = np.asarray(t, dtype=float)
            return a * np.sum((c * js**2)[:, None] * np.cos(np.outer(js, tt.ravel())), axis=0).reshape(tt.shape)

        def p3(t):
            tt = np.asarray(t, dtype=float)
            return -a * np.sum((c * js**3)[:, None] * np.sin(np.outer(js, tt.ravel())), axis=0).reshape(tt.shape)

        return (p0, p1, p2, p3)
    raise ParameterError(f"unknown perturbation mode {mode!r}")


def _sum_fns(base_fns, pert_fns, order: int):
    def make(k):
        b, p = base_fns[k], pert_fns[k]
        return lambda t: b(t) + p(t)

    return tuple(make(k) for k in range(order + 1))


def make_family(spec: FamilySpec, domain: str | None = None) -> FunctionHandle:
    """Construct a handle for a builtin family in the requested domain.

    With domain None the family's natural domain is used.  Every family is
    constructible on both the log line and positive ratios; the two forms are
    consistent under t = ln x.
    """
    fam = _ALIASES.get(spec.family, spec.family)
    if fam not in FAMILIES:
        raise ParameterError(f"unknown family {spec.family!r}; known: {', '.join(FAMILIES)}")
    domain = domain or NATURAL_DOMAIN[fam]
    if domain not in (LOG_LINE, POSITIVE_RATIOS):
        raise ParameterError(f"unknown domain {domain!r}")
    p = spec.params

    if fam == FAMILY_COSH_LAMBDA:
        lam = _float_param(p, "lambda", 1.0)
        _require(lam > 0, f"cosh-lambda needs lambda > 0, got {lam}")
        t_max = _COSH_T_MAX / lam
        if domain == LOG_LINE:
            return analytic(domain, f"cosh-lambda({lam:g})", _cosh_log_fns(lam),
                            support=(-t_max, t_max), params={"lambda": lam})
        x_hi = math.exp(min(t_max, 708.0))
        return analytic(domain, f"cosh-lambda({lam:g})", _cosh_ratio_fns(lam),
                        support=(1.0 / x_hi, x_hi), params={"lambda": lam})

    if fam == FAMILY_COS_K:
        k = _float_param(p, "k", 1.0)
        _require(k > 0, f"cos-k needs k > 0, got {k}")
        if domain == LOG_LINE:
            return analytic(domain, f"cos-k({k:g})", _cos_log_fns(k),
                            support=(-_LOG_SUPPORT_HUGE, _LOG_SUPPORT_HUGE), params={"k": k})
        return analytic(domain, f"cos-k({k:g})", _cos_ratio_fns(k),
                        support=_RATIO_SUPPORT, params={"k": k})

    if fam == FAMILY_CONSTANT_ONE:
        if domain == LOG_LINE:
            fns = (lambda t: np.ones_like(t),) + (lambda t: np.zeros_like(t),) * 3
            return analytic(domain, "constant-one", fns,
                            support=(-_LOG_SUPPORT_HUGE, _LOG_SUPPORT_HUGE))
        fns = (lambda x: np.zeros_like(x),) + (lambda x: np.zeros_like(x),) * 3
        return analytic(domain, "constant-one", fns, support=_RATIO_SUPPORT)

    if fam == FAMILY_ZERO:
        if domain == LOG_LINE:
            fns = (lambda t: np.zeros_like(t),) + (lambda t: np.zeros_like(t),) * 3
            return analytic(domain, "zero", fns,
                            support=(-_LOG_SUPPORT_HUGE, _LOG_SUPPORT_HUGE))
        fns = (lambda x: np.full_like(x, -1.0),) + (lambda x: np.zeros_like(x),) * 3
        return analytic(domain, "zero", fns, support=_RATIO_SUPPORT)

    if fam == FAMILY_QUADLOG:
        if domain == LOG_LINE:
            return analytic(domain, "quadlog", _quadlog_log_fns(),
                            support=(-_LOG_SUPPORT_HUGE, _LOG_SUPPORT_HUGE))
        return analytic(domain, "quadlog", _quadlog_ratio_fns(), support=_RATIO_SUPPORT)

    if fam == FAMILY_NOISY_COSH:
        lam = _float_param(p, "lambda", 1.0)
        amp = _float_param(p, "amplitude", 1e-3)
        freq = _float_param(p, "freq", 5.0)
        mode = str(p.get("mode", "sine"))
        seed = int(p.get("seed", 0))
        _require(lam > 0, f"noisy-cosh needs lambda > 0, got {lam}")
        _require(amp >= 0, f"noisy-cosh needs amplitude >= 0, got {amp}")
        _require(freq > 0, f"noisy-cosh needs freq > 0, got {freq}")
        _require(mode in _NOISY_MODES, f"noisy-cosh mode must be one of {_NOISY_MODES}")
        _require(seed >= 0, f"noisy-cosh needs seed >= 0, got {seed}")
        base = make_family(FamilySpec(FAMILY_COSH_LAMBDA, {"lambda": lam}), LOG_LINE)
        pert = _perturbation_fns(mode, amp, freq, seed)
        name = f"noisy-cosh({lam:g},{mode},{amp:g})"
        params = {"lambda": lam, "amplitude": amp, "freq": freq, "seed": float(seed)}
        log_fns = _sum_fns(base.fns, pert, 3)
        if domain == LOG_LINE:
            return analytic(domain, name, log_fns, support=base.support, params=params)
        # F(x) = h(ln x) - 1 with the stable cosh part kept separate
        stable = _cosh_ratio_fns(lam)

        def v(x):
            return stable[0](x) + pert[0](np.log(x))

        def d1(x):
            return stable[1](x) + pert[1](np.log(x)) / x

        def d2(x):
            u = np.log(x)
            return stable[2](x) + (pert[2](u) - pert[1](u)) / (x * x)

        def d3(x):
            u = np.log(x)
            return stable[3](x) + (pert[3](u) - 3.0 * pert[2](u) + 2.0 * pert[1](u)) / x**3

        x_hi = math.exp(min(_COSH_T_MAX / lam, 708.0))
        return analytic(domain, name, (v, d1, d2, d3),
                        support=(1.0 / x_hi, x_hi), params=params)

    # powerlaw-w
    lam = _float_param(p, "lambda", 1.0)
    _require(lam > 0, f"powerlaw-w needs lambda > 0, got {lam}")
    t_max = _COSH_T_MAX / lam
    if domain == LOG_LINE:
        return analytic(domain, f"powerlaw-w({lam:g})", _powerlaw_log_fns(lam),
                        support=(-t_max, t_max), params={"lambda": lam})
    x_hi = math.exp(min(t_max, 708.0))
    return analytic(domain, f"powerlaw-w({lam:g})", _powerlaw_ratio_fns(lam),
                    support=(1.0 / x_hi, x_hi), params={"lambda": lam})


_SPEC_FLOAT_KEYS = ("lambda", "k", "amplitude", "freq")
_SPEC_KEYS = ("family",) + _SPEC_FLOAT_KEYS + ("mode", "seed")


def parse_family_spec(text: str) -> FamilySpec:
    """Parse the textual family form used by the CLI.

    Accepted shapes: a bare name ("cosh", "quadlog"), or comma-separated
    key=value pairs ("family=cosh-lambda,lambda=2"); a bare leading token is
    shorthand for family=<token>.
    """
    family = None
    params: dict[str, float | str] = {}
    for token in str(text).split(","):
        token = token.strip()
        if not token:
            continue
        if "=" not in token:
            if family is not None:
                raise ParameterError(f"family spec {text!r} names two families")
            family = token
            continue
        key, _, value = token.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SPEC_KEYS:
            raise ParameterError(f"unknown family-spec key {key!r}; known: {', '.join(_SPEC_KEYS)}")
        if key == "family":
            family = value
        elif key == "mode":
            params["mode"] = value
        elif key == "seed":
            try:
                params["seed"] = int(value)
            except ValueError:
                raise ParameterError(f"seed must be an integer, got {value!r}") from None
        else:
            try:
                params[key] = float(value)
            except ValueError:
                raise ParameterError(f"{key} must be a number, got {value!r}") from None
    if family is None:
        raise ParameterError(f"family spec {text!r} does not name a family")
    family = _ALIASES.get(family, family)
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    return FamilySpec(family, params)


def family_spec_text(spec: FamilySpec) -> str:
    """Canonical textual form of a family spec (inverse of parse_family_spec)."""
    parts = [f"family={spec.family}"]
    for key in sorted(spec.params):
        parts.append(f"{key}={spec.params[key]}")
    return ",".join(parts)


def quadlog_defect_oracle(t, u):
    """Closed-form d'Alembert defect of h(t) = 1 + t^2/2, namely -t^2 u^2 / 2."""
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    out = -0.5 * (t * t) * (u * u)
    return float(out) if out.ndim == 0 else out


def perturb(
    base: FunctionHandle,
    mode: str,
    amplitude: float,
    seed: int = 0,
    freq: float = 1.0,
) -> FunctionHandle:
    """Add a smooth even perturbation vanishing at t = 0 to a log-line handle.

    poly4 adds amplitude * t^4; sine adds amplitude * (1 - cos(freq t)); both
    preserve H(0) = 1 and evenness exactly.  The seed is accepted for
    interface stability but unused by these deterministic modes.
    """
    if base.domain != LOG_LINE:
        raise DomainError("perturb operates on log-line handles")
    if mode not in PERTURB_MODES:
        raise ParameterError(f"perturb mode must be one of {PERTURB_MODES}, got {mode!r}")
    amplitude = float(amplitude)
    if not (amplitude >= 0.0 and math.isfinite(amplitude)):
        raise ParameterError(f"amplitude must be >= 0 and finite, got {amplitude}")
    freq = float(freq)
    if mode == "sine" and not (freq > 0.0 and math.isfinite(freq)):
        raise ParameterError(f"sine mode needs freq > 0, got {freq}")
    pert = _perturbation_fns(mode, amplitude, freq, int(seed))
    order = min(base.deriv_order, 3)
    fns = _sum_fns(base.fns, pert, order)
    tag = f"{mode}({freq:g})" if mode == "sine" else mode
    return analytic(
        LOG_LINE,
        f"{base.name}+{tag}*{amplitude:g}",
        fns,
        support=base.support,
        params=dict(base.params),
    )
