"""Command-line front end.

Subcommands map one-to-one onto library operations; each invocation prints a
human-readable summary, optionally writes the full report as JSON
(--json PATH) and plot-ready CSV (--plot-csv PATH, certify/classify only).

Exit codes: 0 = ok, 1 = verification-failed (a negative mathematical verdict
from certify/classify), 2 = input-error.

Function sources: --family SPEC (e.g. "cosh", "cosh-lambda,lambda=2",
"family=noisy-cosh,amplitude=1e-3,mode=sine,freq=5") or --input PATH with an
optional --domain.  Input CSV format: UTF-8, header exactly "t,H" (log line)
or "x,F" (positive ratios), one comma-separated pair per line, strictly
increasing abscissas.

All numeric output is printed with 17 significant digits so reports can be
replayed bit-for-bit.  The environment variable RECCOST_EVAL_BUDGET
overrides the quadrature evaluation budget of the distance command.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import calibration, core, dalembert, geometry, stability
from .errors import (
    ClassificationError,
    ConvergenceError,
    DomainError,
    InputError,
    ParameterError,
    PrecisionError,
    PreconditionError,
)
from .fixtures import NATURAL_DOMAIN, make_family, parse_family_spec
from .handles import LOG_LINE, POSITIVE_RATIOS, FunctionHandle, lift_to_log, sample_table, to_ratio

STATUS_OK = "ok"
STATUS_FAILED = "verification-failed"
STATUS_INPUT_ERROR = "input-error"

_EXIT = {STATUS_OK: 0, STATUS_FAILED: 1, STATUS_INPUT_ERROR: 2}

_INPUT_ERRORS = (
    InputError,
    ParameterError,
    DomainError,
    PreconditionError,
    ConvergenceError,
    PrecisionError,
)


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict | None
    diagnostics: dict
    status: str


def _py(obj):
    """Coerce numpy scalars/arrays and dataclasses into plain JSON-able Python."""
    if isinstance(obj, dict):
        return {k: _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _py(dataclasses.asdict(obj))
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _print_results(results: dict, prefix: str = "") -> None:
    for key, value in results.items():
        label = f"{prefix}{key}"
        if isinstance(value, dict):
            _print_results(value, prefix=f"{label}.")
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], (list, tuple)):
            for row in value:
                print(f"  {label}: " + ", ".join(_fmt(v) for v in row))
        elif isinstance(value, (list, tuple)):
            print(f"  {label} = [" + ", ".join(_fmt(v) for v in value) + "]")
        else:
            print(f"  {label} = {_fmt(value)}")


# --------------------------------------------------------------------------
# input handling


def _sniff_domain(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if header == "t,H":
        return LOG_LINE
    if header == "x,F":
        return POSITIVE_RATIOS
    raise InputError(f"header must be exactly 't,H' or 'x,F', got {header!r}", line=1)


def load_samples(path: str, domain: str) -> FunctionHandle:
    """Parse a sample CSV into a table handle; report the first bad line."""
    expected = "t,H" if domain == LOG_LINE else "x,F"
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    lines = text.splitlines()
    if not lines:
        raise InputError("empty file", line=1)
    if lines[0].strip() != expected:
        raise InputError(f"expected header {expected!r}, got {lines[0].strip()!r}", line=1)
    xs: list[float] = []
    ys: list[float] = []
    prev = None
    for lineno, raw in enumerate(lines[1:], start=2):
        row = raw.strip()
        if not row:
            if lineno == len(lines):  # trailing newline only
                continue
            raise InputError("blank line inside the table", line=lineno)
        parts = row.split(",")
        if len(parts) != 2:
            raise InputError(f"expected two comma-separated values, got {row!r}", line=lineno)
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError:
            raise InputError(f"non-numeric entry in {row!r}", line=lineno) from None
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InputError(f"non-finite entry in {row!r}", line=lineno)
        if domain == POSITIVE_RATIOS and a <= 0.0:
            raise InputError(f"ratio abscissa must be > 0, got {a!r}", line=lineno)
        if prev is not None and a <= prev:
            raise InputError(f"abscissas must increase strictly ({a!r} after {prev!r})", line=lineno)
        prev = a
        xs.append(a)
        ys.append(b)
    if len(xs) < 2:
        raise InputError("table needs at least two rows")
    return sample_table(domain, xs, ys, name=Path(path).name)


def _load_handle(ns, target: str | None):
    """Resolve --family/--input into a handle in the target domain (if any)."""
    family = getattr(ns, "family", None)
    path = getattr(ns, "input", None)
    if (family is None) == (path is None):
        raise InputError("exactly one function source is required: --family SPEC or --input PATH")
    echo: dict = {}
    notes: list[str] = []
    if family is not None:
        spec = parse_family_spec(family)
        domain = getattr(ns, "domain", None) or target or NATURAL_DOMAIN[spec.family]
        handle = make_family(spec, domain=domain)
        echo["family"] = family
        if getattr(ns, "domain", None):
            echo["domain"] = ns.domain
    else:
        domain = getattr(ns, "domain", None) or _sniff_domain(path)
        handle = load_samples(path, domain)
        echo["input"] = path
        echo["domain"] = domain
    if target is not None and handle.domain != target:
        if target == LOG_LINE:
            handle = lift_to_log(handle)
            notes.append("source lifted to log coordinates (H = F(e^t) + 1)")
        else:
            handle = to_ratio(handle)
            notes.append("source projected to ratio coordinates (F = H(ln x) - 1)")
    return handle, echo, notes


# --------------------------------------------------------------------------
# subcommand handlers: each returns (inputs, results, diagnostics, status, plot_rows)


def _cmd_eval(ns):
    x = float(ns.x)
    j = core.canonical_cost(x)
    t = math.log(x)
    g, h = core.log_forms(t)
    am, gm, _ = core.am_gm_decomposition(x)
    results = {"J": j, "t": t, "G": g, "H": h, "am": am, "gm": gm}
    return {"x": x}, results, {}, STATUS_OK, None


def _cmd_defect(ns):
    handle, echo, notes = _load_handle(ns, target=None)
    diag = {"notes": notes} if notes else {}
    if handle.domain == LOG_LINE:
        if ns.t is None or ns.u is None:
            raise InputError("log-line defect needs --t and --u")
        value = dalembert.defect_log(handle, ns.t, ns.u)
        echo.update({"t": float(ns.t), "u": float(ns.u)})
    else:
        if ns.x is None or ns.y is None:
            raise InputError("ratio-domain defect needs --x and --y")
        value = dalembert.defect_ratio(handle, ns.x, ns.y)
        echo.update({"x": float(ns.x), "y": float(ns.y)})
    return echo, {"delta": value}, diag, STATUS_OK, None


def _cmd_sup_defect(ns):
    handle, echo, notes = _load_handle(ns, target=LOG_LINE)
    report = dalembert.sup_defect(handle, ns.T, ns.step)
    echo.update({"T": float(ns.T), "step": float(ns.step)})
    results = {
        "epsilon": report.epsilon,
        "argmax": {"t": report.argmax.t, "u": report.argmax.u, "delta": report.argmax.delta},
        "count": report.count,
    }
    diag = {"grid": {"T": report.T, "step": report.step}}
    if notes:
        diag["notes"] = notes
    return echo, results, diag, STATUS_OK, None


def _cmd_identities(ns):
    handle, echo, notes = _load_handle(ns, target=LOG_LINE)
    report = dalembert.identity_report(handle, ns.T, ns.step)
    echo.update({"T": float(ns.T), "step": float(ns.step)})
    diag = {"grid": {"T": float(ns.T), "step": float(ns.step)}}
    if notes:
        diag["notes"] = notes
    return echo, dataclasses.asdict(report), diag, STATUS_OK, None


def _cmd_calibrate(ns):
    handle, echo, notes = _load_handle(ns, target=LOG_LINE)
    est = calibration.estimate_kappa(handle, h0=ns.h0, levels=ns.levels)
    echo.update({"h0": float(ns.h0), "levels": int(ns.levels)})
    results = {
        "kappa": est.kappa,
        "uncertainty": est.uncertainty,
        "levels": est.levels,
        "noise_limited": est.noise_limited,
        "ratio_table": [list(row) for row in est.ratio_table],
    }
    diag = {"notes": notes} if notes else {}
    if est.noise_limited:
        diag.setdefault("warnings", []).append(
            "ratio table became round-off dominated before the requested depth"
        )
    return echo, results, diag, STATUS_OK, None


def _cmd_classify(ns):
    handle, echo, notes = _load_handle(ns, target=LOG_LINE)
    echo.update({"window-T": float(ns.window_T), "const-tol": float(ns.const_tol)})
    if ns.residual_step is not None:
        echo["residual-step"] = float(ns.residual_step)
    if ns.residual_tol is not None:
        echo["residual-tol"] = float(ns.residual_tol)
    diag = {"notes": notes} if notes else {}
    plot = None
    try:
        result = calibration.classify(
            handle,
            window_T=ns.window_T,
            const_tol=ns.const_tol,
            residual_grid_step=ns.residual_step,
            residual_tol=ns.residual_tol,
        )
    except ClassificationError as exc:
        results = {"classified": False, "reason": str(exc)}
        return echo, results, diag, STATUS_FAILED, None
    results = {
        "classified": True,
        "branch": result.branch,
        "k": result.k,
        "residual": result.residual,
        "kappa_used": result.kappa_used,
    }
    if ns.plot_csv:
        step = ns.residual_step if ns.residual_step is not None else ns.window_T / 100.0
        from .grids import symmetric_grid

        _, ts = symmetric_grid(ns.window_T, step)
        vals = handle(ts)
        if result.branch == calibration.BRANCH_COSH:
            fit = np.cosh(result.k * ts)
        elif result.branch == calibration.BRANCH_COS:
            fit = np.cos(result.k * ts)
        elif result.branch == calibration.BRANCH_CONSTANT_ONE:
            fit = np.ones_like(ts)
        else:
            fit = np.zeros_like(ts)
        plot = [(t, v, f, "", abs(v - f)) for t, v, f in zip(ts, vals, fit)]
    return echo, results, diag, STATUS_OK, plot


def _certify_common(ns, ratio: bool):
    target = POSITIVE_RATIOS if ratio else LOG_LINE
    handle, echo, notes = _load_handle(ns, target=target)
    echo.update({"T": float(ns.T), "step": float(ns.step)})
    if ns.h is not None:
        echo["h"] = float(ns.h)
    if ns.a is not None:
        echo["a"] = float(ns.a)
    fn = stability.certify_ratio if ratio else stability.certify
    cert = fn(handle, ns.T, ns.step, h_choice=ns.h, a=ns.a)
    results = {
        "verified": cert.verified,
        "delta": cert.delta,
        "max_observed_error": cert.max_observed_error,
        "max_envelope_margin": cert.max_envelope_margin,
        "inputs": dataclasses.asdict(cert.inputs),
        "envelope": dataclasses.asdict(cert.envelope),
    }
    diag: dict = {"grid": {"T": float(ns.T), "step": float(ns.step)}}
    if notes:
        diag["notes"] = notes
    sweep_handle = lift_to_log(handle) if ratio else handle
    if sweep_handle.deriv_order < 3:
        diag.setdefault("warnings", []).append(
            "K estimated by third central differences (sample table); treat as approximate"
        )
    if ratio:
        half = cert.inputs.T - cert.inputs.h
        diag["x_window"] = [math.exp(-half), math.exp(half)]
    plot = None
    if ns.plot_csv:
        ts, vals, branch, env, err = stability.certificate_sweep(sweep_handle, cert, ns.step)
        plot = list(zip(ts, vals, branch, env, err))
    status = STATUS_OK if cert.verified else STATUS_FAILED
    return echo, results, diag, status, plot


def _cmd_certify(ns):
    return _certify_common(ns, ratio=False)


def _cmd_certify_ratio(ns):
    return _certify_common(ns, ratio=True)


def _cmd_distance(ns):
    budget_env = os.environ.get("RECCOST_EVAL_BUDGET")
    if budget_env is None:
        budget = geometry.DEFAULT_EVAL_BUDGET
    else:
        try:
            budget = int(budget_env)
        except ValueError:
            raise InputError(f"RECCOST_EVAL_BUDGET must be an integer, got {budget_env!r}") from None
    result = geometry.distance(ns.x, ns.y, ns.tol, budget=budget)
    echo = {"x": float(ns.x), "y": float(ns.y), "tol": float(ns.tol)}
    results = {
        "value": result.value,
        "abs_error_estimate": result.abs_error_estimate,
        "endpoints": list(result.endpoints),
        "evaluations": result.evaluations,
    }
    return echo, results, {"budget": budget}, STATUS_OK, None


def _cmd_chebyshev(ns):
    check = geometry.chebyshev_cost(ns.x, ns.n)
    seq = geometry.chebyshev_sequence(core.canonical_cost(ns.x) + 1.0, max(ns.n, 1))
    echo = {"x": float(ns.x), "n": int(ns.n)}
    results = {
        "via_identity": check.via_identity,
        "direct": check.direct,
        "rel_discrepancy": check.rel_discrepancy,
        "sequence": seq[: ns.n + 1],
    }
    return echo, results, {}, STATUS_OK, None


def _cmd_golden(ns):
    result = core.golden_fixed_point(ns.x0, ns.tol, ns.max_iter)
    echo = {"x0": float(ns.x0), "tol": float(ns.tol), "max-iter": int(ns.max_iter)}
    results = {
        "phi": result.phi,
        "iterations": result.iterations,
        "cost_at_phi": result.cost_at_phi,
    }
    return echo, results, {}, STATUS_OK, None


def _cmd_report(ns):
    handle, echo, notes = _load_handle(ns, target=LOG_LINE)
    echo.update({"T": float(ns.T), "step": float(ns.step)})
    diag: dict = {"grid": {"T": float(ns.T), "step": float(ns.step)}}
    if notes:
        diag["notes"] = notes
    failed = False
    sections: dict = {}

    rep = dalembert.sup_defect(handle, ns.T, ns.step)
    sections["sup_defect"] = {
        "epsilon": rep.epsilon,
        "argmax": {"t": rep.argmax.t, "u": rep.argmax.u, "delta": rep.argmax.delta},
        "count": rep.count,
    }
    sections["identities"] = dataclasses.asdict(dalembert.identity_report(handle, ns.T, ns.step))
    est = calibration.estimate_kappa(handle)
    sections["curvature"] = {
        "kappa": est.kappa,
        "uncertainty": est.uncertainty,
        "levels": est.levels,
        "noise_limited": est.noise_limited,
    }
    try:
        cls = calibration.classify(handle, window_T=ns.T)
        sections["classification"] = {
            "classified": True,
            "branch": cls.branch,
            "k": cls.k,
            "residual": cls.residual,
            "kappa_used": cls.kappa_used,
        }
    except (ClassificationError, PrecisionError) as exc:
        sections["classification"] = {"classified": False, "reason": str(exc)}
        if isinstance(exc, ClassificationError):
            failed = True
    try:
        cert = stability.certify(handle, ns.T, ns.step)
        sections["certificate"] = {
            "verified": cert.verified,
            "delta": cert.delta,
            "max_observed_error": cert.max_observed_error,
            "max_envelope_margin": cert.max_envelope_margin,
            "inputs": dataclasses.asdict(cert.inputs),
        }
        failed = failed or not cert.verified
    except PreconditionError as exc:
        sections["certificate"] = {"error": str(exc)}
    status = STATUS_FAILED if failed else STATUS_OK
    return echo, sections, diag, status, None


_HANDLERS = {
    "eval": _cmd_eval,
    "defect": _cmd_defect,
    "sup-defect": _cmd_sup_defect,
    "identities": _cmd_identities,
    "calibrate": _cmd_calibrate,
    "classify": _cmd_classify,
    "certify": _cmd_certify,
    "certify-ratio": _cmd_certify_ratio,
    "distance": _cmd_distance,
    "chebyshev": _cmd_chebyshev,
    "golden": _cmd_golden,
    "report": _cmd_report,
}


# --------------------------------------------------------------------------
# parser


def _add_source(sp, with_domain: bool = True):
    sp.add_argument("--family", help="builtin family spec, e.g. cosh-lambda,lambda=2")
    sp.add_argument("--input", help="CSV sample table (header 't,H' or 'x,F')")
    if with_domain:
        sp.add_argument("--domain", choices=[LOG_LINE, POSITIVE_RATIOS],
                        help="domain of the source (default: inferred)")


def _add_json(sp):
    sp.add_argument("--json", help="write the run report as JSON to this path")


def _add_plot(sp):
    sp.add_argument("--plot-csv", help="write (t,H,branch,envelope,error) rows to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reccost",
        description="Verification toolkit for the canonical reciprocal cost "
        "J(x) = (x + 1/x)/2 - 1 and d'Alembert-type functional equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate J and its log forms at a point")
    sp.add_argument("--x", type=float, required=True)
    _add_json(sp)

    sp = sub.add_parser("defect", help="pointwise defect of the functional equation")
    _add_source(sp)
    sp.add_argument("--t", type=float)
    sp.add_argument("--u", type=float)
    sp.add_argument("--x", type=float)
    sp.add_argument("--y", type=float)
    _add_json(sp)

    sp = sub.add_parser("sup-defect", help="grid supremum of the defect")
    _add_source(sp)
    sp.add_argument("--T", type=float, default=2.0)
    sp.add_argument("--step", type=float, default=0.05)
    _add_json(sp)

    sp = sub.add_parser("identities", help="violations of the solution identities")
    _add_source(sp)
    sp.add_argument("--T", type=float, default=2.0)
    sp.add_argument("--step", type=float, default=0.05)
    _add_json(sp)

    sp = sub.add_parser("calibrate", help="extrapolated log-curvature estimate")
    _add_source(sp)
    sp.add_argument("--h0", type=float, default=0.25)
    sp.add_argument("--levels", type=int, default=6)
    _add_json(sp)

    sp = sub.add_parser("classify", help="classify into the solution branch")
    _add_source(sp)
    sp.add_argument("--window-T", dest="window_T", type=float, default=2.0)
    sp.add_argument("--const-tol", dest="const_tol", type=float, default=1e-8)
    sp.add_argument("--residual-step", dest="residual_step", type=float, default=None)
    sp.add_argument("--residual-tol", dest="residual_tol", type=float, default=None)
    _add_json(sp)
    _add_plot(sp)

    for name, help_text in (
        ("certify", "stability certificate in log coordinates"),
        ("certify-ratio", "stability certificate on positive ratios"),
    ):
        sp = sub.add_parser(name, help=help_text)
        _add_source(sp)
        sp.add_argument("--T", type=float, default=2.0)
        sp.add_argument("--step", type=float, default=0.05)
        sp.add_argument("--h", type=float, default=None, help="step h (default: optimal)")
        sp.add_argument("--a", type=float, default=None, help="curvature override")
        _add_json(sp)
        _add_plot(sp)

    sp = sub.add_parser("distance", help="geodesic distance of the Hessian metric")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    _add_json(sp)

    sp = sub.add_parser("chebyshev", help="Chebyshev identity check for J(x^n)")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    _add_json(sp)

    sp = sub.add_parser("golden", help="golden-ratio fixed point of x -> 1 + 1/x")
    sp.add_argument("--x0", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--max-iter", dest="max_iter", type=int, default=200)
    _add_json(sp)

    sp = sub.add_parser("report", help="full verification suite on one input")
    _add_source(sp)
    sp.add_argument("--T", type=float, default=2.0)
    sp.add_argument("--step", type=float, default=0.05)
    _add_json(sp)

    return parser


# --------------------------------------------------------------------------
# driver


def _write_json(path: str, report: RunReport) -> None:
    payload = json.dumps(dataclasses.asdict(report), indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def _write_plot_csv(path: str, rows) -> None:
    lines = ["t,H,branch,envelope,error"]
    for row in rows:
        lines.append(",".join("" if v == "" else f"{float(v):.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(argv) -> tuple[int, RunReport]:
    """Execute one CLI invocation; returns (exit_code, report)."""
    parser = build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        if code == 0:
            report = RunReport("help", {}, None, {}, STATUS_OK)
            return 0, report
        report = RunReport("", {}, None, {"error": "unrecognized arguments"}, STATUS_INPUT_ERROR)
        return 2, report

    command = ns.command
    try:
        inputs, results, diagnostics, status, plot_rows = _HANDLERS[command](ns)
    except _INPUT_ERRORS as exc:
        diagnostics = {"error": f"{type(exc).__name__}: {exc}"}
        report = RunReport(command, {}, None, _py(diagnostics), STATUS_INPUT_ERROR)
        print(f"reccost {command}: {STATUS_INPUT_ERROR}")
        print(f"  {diagnostics['error']}")
        if getattr(ns, "json", None):
            _write_json(ns.json, report)
        return 2, report

    report = RunReport(command, _py(inputs), _py(results), _py(diagnostics), status)
    print(f"reccost {command}: {status}")
    if command == "classify" and not results.get("classified", True):
        print("  not near any branch")
    _print_results(report.results)
    if getattr(ns, "json", None):
        _write_json(ns.json, report)
    if getattr(ns, "plot_csv", None) and plot_rows is not None:
        _write_plot_csv(ns.plot_csv, plot_rows)
    return _EXIT[status], report


def main(argv=None) -> None:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    raise SystemExit(code)


if __name__ == "__main__":
    main()
