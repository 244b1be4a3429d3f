"""Command-line front end: scans, validation suite, mean-field tables, line extraction.

Subcommands:
  scan <config>       sweep a model over a lam-T grid, write CSV fields and lines
  validate            run the dense-oracle consistency suite, JSON verdicts
  meanfield --lambda  critical temperatures and order-parameter curves
  boundary <config>   minima/jump extraction on a precomputed field file

Exit codes: 0 success, 2 configuration error, 3 evaluation failure beyond the
cell budget, 4 validation failure. The environment variable
THERMOFID_OUTPUT_DIR overrides any configured output directory.
"""

import argparse
import dataclasses
import json
import math
import os
import sys
import time

import numpy as np

from . import core, exact, lmg, models, scan
from .errors import (
    ConfigError,
    DomainError,
    EmptyLine,
    EvaluationError,
    ThermofidError,
)

OUTPUT_DIR_ENV = "THERMOFID_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EVALUATION = 3
EXIT_VALIDATION = 4

MODEL_CLASSES = {
    "ising2d": models.Ising2D,
    "tim1d": models.Tim1D,
    "dicke": models.Dicke,
    "lmg": lmg.Lmg,
    "two_level": models.TwoLevel,
    "two_level_field": models.TwoLevelField,
}

_DEFAULT_FAILURE_BUDGET = 0.01


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(path, f"cannot read config: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(path, f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(cfg, key, kind, path):
    full = f"{path}.{key}" if path else key
    if key not in cfg:
        raise ConfigError(full, "missing required key")
    value = cfg[key]
    if kind is float and isinstance(value, bool):
        raise ConfigError(full, "must be a number")
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ConfigError(full, f"must be of type {names}")
    return value


def build_model(cfg, path="model"):
    if not isinstance(cfg, dict):
        raise ConfigError(path, "must be an object")
    name = _require(cfg, "name", str, path)
    cls = MODEL_CLASSES.get(name)
    if cls is None:
        raise ConfigError(f"{path}.name",
                          f"unknown model {name!r}; choose from {sorted(MODEL_CLASSES)}")
    valid = {f.name: f.type for f in dataclasses.fields(cls)}
    params = {}
    for key, value in cfg.items():
        if key == "name":
            continue
        if key not in valid:
            raise ConfigError(f"{path}.{key}", f"unknown parameter for model {name!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}.{key}", "must be a number")
        wants_int = valid[key] is int or valid[key] == "int"
        if wants_int and value != int(value):
            raise ConfigError(f"{path}.{key}", f"must be an integer, got {value}")
        params[key] = int(value) if wants_int else float(value)
    try:
        return cls(**params)
    except (DomainError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from exc


def build_axis(spec, path):
    if isinstance(spec, list):
        if not spec or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in spec):
            raise ConfigError(path, "must be a non-empty list of numbers")
        values = np.asarray(spec, dtype=float)
    elif isinstance(spec, dict):
        start = _require(spec, "start", float, path)
        stop = _require(spec, "stop", float, path)
        if stop < start:
            raise ConfigError(f"{path}.stop", "must be >= start")
        if "step" in spec:
            step = _require(spec, "step", float, path)
            if step <= 0.0:
                raise ConfigError(f"{path}.step", "must be positive")
            num = int(round((stop - start) / step)) + 1
            if abs((num - 1) * step - (stop - start)) > 1e-6 * step:
                raise ConfigError(f"{path}.step", "does not evenly tile [start, stop]")
        elif "num" in spec:
            num = _require(spec, "num", int, path)
            if num < 1:
                raise ConfigError(f"{path}.num", "must be >= 1")
        else:
            raise ConfigError(path, "needs either 'step' or 'num'")
        values = np.linspace(start, stop, num)
    else:
        raise ConfigError(path, "must be a list or a range object")
    if values.size > 1 and not np.all(np.diff(values) > 0.0):
        raise ConfigError(path, "must be strictly increasing")
    return values


def build_grid(cfg, path="grid"):
    if not isinstance(cfg.get("grid"), dict):
        raise ConfigError(path, "missing or not an object")
    grid_cfg = cfg["grid"]
    lam_axis = build_axis(_require(grid_cfg, "lambda", (list, dict), path), f"{path}.lambda")
    t_axis = build_axis(_require(grid_cfg, "t", (list, dict), path), f"{path}.t")
    delta_t = _require(cfg, "delta_t", float, "")
    if delta_t <= 0.0:
        raise ConfigError("delta_t", "must be positive")
    delta_lambda = cfg.get("delta_lambda")
    if delta_lambda is not None:
        if isinstance(delta_lambda, bool) or not isinstance(delta_lambda, (int, float)):
            raise ConfigError("delta_lambda", "must be a number")
        delta_lambda = float(delta_lambda)
        if delta_lambda <= 0.0:
            raise ConfigError("delta_lambda", "must be positive")
    if t_axis[0] <= 0.0:
        raise ConfigError(f"{path}.t", f"temperatures must be positive, got {t_axis[0]}")
    if t_axis[0] <= 0.5 * delta_t:
        raise ConfigError(f"{path}.t", f"every T must exceed delta_t/2 = {0.5 * delta_t}")
    try:
        return scan.ScanGrid(lam_axis, t_axis, delta_t, delta_lambda)
    except DomainError as exc:
        raise ConfigError(path, str(exc)) from exc


def resolve_scan_config(cfg):
    """Fill defaults and validate; the result re-resolves to itself (round trip)."""
    if not isinstance(cfg, dict):
        raise ConfigError("config", "top level must be an object")
    known = {"model", "grid", "delta_t", "delta_lambda", "fields", "detect",
             "classify", "output_dir", "threads", "failure_budget"}
    for key in cfg:
        if key not in known:
            raise ConfigError(key, "unknown configuration key")
    model = build_model(cfg.get("model", {}))
    grid = build_grid(cfg)

    fields = cfg.get("fields", ["F_beta", "Cv"])
    if (not isinstance(fields, list) or not fields
            or not all(isinstance(f, str) for f in fields)):
        raise ConfigError("fields", "must be a non-empty list of field names")
    for f in fields:
        if f not in scan.FIELD_NAMES:
            raise ConfigError("fields", f"unknown field {f!r}; choose from {scan.FIELD_NAMES}")
    if grid.delta_lambda is None and any(f in ("chi", "chi_lambda") for f in fields):
        raise ConfigError("delta_lambda", "required when chi or chi_lambda is requested")

    detect = cfg.get("detect")
    if detect is None:
        detect = {}
        if "F_beta" in fields:
            detect["minima"] = "F_beta"
        if "Cv" in fields:
            detect["jumps"] = "Cv"
    elif not isinstance(detect, dict):
        raise ConfigError("detect", "must be an object")
    else:
        detect = dict(detect)
    for mode in ("minima", "jumps"):
        target = detect.get(mode)
        if target is not None and target not in fields:
            raise ConfigError(f"detect.{mode}", f"field {target!r} is not being computed")
    threshold = detect.get("jump_threshold", 20.0)
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)) or threshold <= 0:
        raise ConfigError("detect.jump_threshold", "must be a positive number")
    detect["jump_threshold"] = float(threshold)

    classify = cfg.get("classify")
    if classify is not None:
        if not isinstance(classify, dict):
            raise ConfigError("classify", "must be an object")
        classify = dict(classify)
        sizes = classify.get("sizes")
        if (not isinstance(sizes, list) or len(sizes) < 3
                or not all(isinstance(n, int) and not isinstance(n, bool) and n > 0
                           for n in sizes)):
            raise ConfigError("classify.sizes", "must be a list of >= 3 positive integers")
        lambdas = classify.get("lambdas")
        if (not isinstance(lambdas, list) or not lambdas
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           for v in lambdas)):
            raise ConfigError("classify.lambdas", "must be a non-empty list of numbers")
        classify["lambdas"] = [float(v) for v in lambdas]
        if type(model).size_field is None:
            raise ConfigError("classify", f"model {model.name!r} has no size parameter")

    budget = cfg.get("failure_budget", _DEFAULT_FAILURE_BUDGET)
    if isinstance(budget, bool) or not isinstance(budget, (int, float)) or not 0 <= budget <= 1:
        raise ConfigError("failure_budget", "must be a number in [0, 1]")

    threads = cfg.get("threads")
    if threads is not None and (isinstance(threads, bool)
                                or not isinstance(threads, int) or threads < 1):
        raise ConfigError("threads", "must be a positive integer")

    output_dir = cfg.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("output_dir", "must be a non-empty string")

    resolved = {
        "model": dict(cfg["model"]),
        "grid": {"lambda": [float(v) for v in grid.lambda_axis],
                 "t": [float(v) for v in grid.t_axis]},
        "delta_t": grid.delta_t,
        "fields": list(fields),
        "detect": detect,
        "output_dir": output_dir,
        "failure_budget": float(budget),
    }
    if grid.delta_lambda is not None:
        resolved["delta_lambda"] = grid.delta_lambda
    if classify is not None:
        resolved["classify"] = classify
    if threads is not None:
        resolved["threads"] = threads
    return resolved, model, grid


# ---------------------------------------------------------------------------
# output formats
# ---------------------------------------------------------------------------

def _fmt(x):
    return f"{x:.17g}"


def write_field_csv(path, field):
    with open(path, "w") as fh:
        fh.write("lambda,T,value\n")
        for i, lam in enumerate(field.grid.lambda_axis):
            for j, t in enumerate(field.grid.t_axis):
                fh.write(f"{_fmt(lam)},{_fmt(t)},{_fmt(field.values[i, j])}\n")


def write_line_csv(path, line):
    with open(path, "w") as fh:
        fh.write("lambda,T_c,detection,classification\n")
        for lam, tc in line.points:
            fh.write(f"{_fmt(lam)},{_fmt(tc)},{line.detection},{line.classification}\n")


def read_field_csv(path):
    """Rebuild a ScanField from a lambda,T,value file written by this tool."""
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "lambda,T,value":
                raise ConfigError(path, f"unexpected header {header!r}")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise ConfigError(path, f"cannot read field file: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(path, f"malformed field file: {exc}") from exc
    if data.shape[1] != 3:
        raise ConfigError(path, f"expected 3 columns, got {data.shape[1]}")
    lam_axis = np.unique(data[:, 0])
    t_axis = np.unique(data[:, 1])
    if lam_axis.size * t_axis.size != data.shape[0]:
        raise ConfigError(path, "rows do not form a complete lambda x T grid")
    order = np.lexsort((data[:, 1], data[:, 0]))
    values = data[order, 2].reshape(lam_axis.size, t_axis.size)
    grid = scan.ScanGrid(lam_axis, t_axis, delta_t=None)
    return scan.ScanField("loaded", grid, values)


# ---------------------------------------------------------------------------
# scan subcommand
# ---------------------------------------------------------------------------

def cmd_scan(config_path, threads=None):
    resolved, model, grid = resolve_scan_config(load_config(config_path))
    if threads is None:
        threads = resolved.get("threads") or os.cpu_count() or 1

    # warn (never fail) when the perturbations are not small for this grid
    corner = core.ThermoPoint(1.0 / grid.t_axis[0], float(grid.lambda_axis[-1]))
    spec = core.PerturbationSpec(
        grid.delta_t,
        grid.delta_lambda
        if grid.delta_lambda is not None
        else core.DEFAULT_STEP_FRACTION * max(abs(corner.lam), 1.0),
    )
    spec.warn_if_large(corner)

    out_dir = os.environ.get(OUTPUT_DIR_ENV) or resolved["output_dir"]
    os.makedirs(out_dir, exist_ok=True)

    started = time.perf_counter()
    fields = scan.sweep(model, grid, resolved["fields"], threads=threads)

    outputs = {"fields": {}}
    for field in fields:
        path = os.path.join(out_dir, f"{field.name}.csv")
        write_field_csv(path, field)
        outputs["fields"][field.name] = path

    by_name = {f.name: f for f in fields}
    lines = []
    detect = resolved["detect"]
    if detect.get("minima"):
        try:
            line = scan.locate_minima(by_name[detect["minima"]])
        except EmptyLine:
            line = scan.CriticalLine((), "minimum")
        path = os.path.join(out_dir, "minima.csv")
        write_line_csv(path, line)
        outputs["minima"] = path
        lines.append({"detection": "minimum", "field": detect["minima"],
                      "points": [[lam, tc] for lam, tc in line.points]})
    if detect.get("jumps"):
        line = scan.locate_jumps(by_name[detect["jumps"]], detect["jump_threshold"])
        path = os.path.join(out_dir, "jumps.csv")
        write_line_csv(path, line)
        outputs["jumps"] = path
        lines.append({"detection": "jump", "field": detect["jumps"],
                      "points": [[lam, tc] for lam, tc in line.points]})

    classifications = []
    classify_cfg = resolved.get("classify")
    if classify_cfg:
        family = _size_family(model)
        for lam in classify_cfg["lambdas"]:
            verdict = scan.classify_transition(
                family, lam, classify_cfg["sizes"], grid.t_axis, grid.delta_t,
                growth_factor=float(classify_cfg.get("growth_factor", 3.0)),
            )
            classifications.append({"lambda": lam, "sizes": classify_cfg["sizes"],
                                    "classification": verdict})

    elapsed = time.perf_counter() - started
    entries = int(grid.shape[0] * grid.shape[1] * len(fields))
    failures = int(sum(f.missing_cells() for f in fields))

    report = {
        "config": resolved,
        "outputs": outputs,
        "critical_lines": lines,
        "classifications": classifications,
        "timing_s": elapsed,
        "cells": entries,
        "cell_failures": failures,
    }
    report_path = os.path.join(out_dir, "report.json")
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    outputs["report"] = report_path

    if failures > resolved["failure_budget"] * entries:
        raise EvaluationError(
            f"{failures}/{entries} cell evaluations failed, above the "
            f"{resolved['failure_budget']:.1%} budget (see {report_path})"
        )
    return report


def _size_family(model):
    size_field = type(model).size_field

    def family(n):
        return dataclasses.replace(model, **{size_field: n})

    return family


# ---------------------------------------------------------------------------
# validate subcommand
# ---------------------------------------------------------------------------

def _check_fidelity_beta_matches_dense():
    # unit-spectral-norm ensemble keeps all Gibbs populations well above
    # the precision floor of the clamped-square-root pipeline
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 33))
        a = rng.standard_normal((dim, dim))
        h = 0.5 * (a + a.T)
        h /= exact.spectral_norm(h)
        beta0, beta1 = rng.uniform(0.2, 2.5, size=2)
        model = exact.DenseModel(_ConstantBuilder(h), "random_dense")
        approx = core.fidelity_beta(model, beta0, beta1, 0.0)
        reference = exact.uhlmann_fidelity(exact.gibbs_state(h, beta0),
                                           exact.gibbs_state(h, beta1))
        worst = max(worst, abs(approx - reference))
    return worst < 1e-10, f"max |dense - log-space| = {worst:.3e} (tol 1e-10)"


class _ConstantBuilder:
    """Hamiltonian family that ignores lam (commuting, temperature-only checks)."""

    def __init__(self, h):
        self.h = h

    def __call__(self, lam):
        return self.h


def _check_fidelity_cv_consistency():
    worst = 0.0
    tim = models.Tim1D()
    for model, t, lam in ((models.TwoLevel(), 1.0, 0.0), (tim, 0.7, 1.0), (tim, 1.5, 0.5)):
        for frac in (1e-3, 1e-2):
            delta_t = frac * t
            beta0 = 1.0 / t
            beta1 = 1.0 / (t + delta_t)
            full = core.fidelity_beta(model, beta0, beta1, lam)
            cv = core.specific_heat(model, core.ThermoPoint(beta0, lam), delta_t)
            dbeta = beta0 - beta1
            approx = math.exp(-dbeta**2 * cv / (8.0 * beta0**2))
            rel = abs(approx - full) / full / (5.0 * frac)
            worst = max(worst, rel)
    return worst < 1.0, f"max relative error / (5 dT/T) = {worst:.3e} (must be < 1)"


def _check_chi_beta_vs_cv():
    model = models.Tim1D()
    worst = 0.0
    for t in np.linspace(0.2, 2.0, 10):
        delta_t = 1e-3 * t
        point = core.ThermoPoint(1.0 / t, 1.0)
        cv = core.specific_heat(model, point, delta_t)
        chi_beta = core.fidelity_susceptibility_beta(model, point, delta_t)
        worst = max(worst, abs(4.0 * point.beta**2 * chi_beta - cv) / cv)
    return worst < 1e-2, f"max |4 b^2 chi_beta - Cv| / Cv = {worst:.3e} (tol 1e-2)"


def _check_chi_lambda_vs_chi():
    model = models.Tim1D()
    worst = 0.0
    for t, lam in ((2.0, 1.0), (2.0, 0.5), (1.0, 1.2)):
        beta = 1.0 / t
        point = core.ThermoPoint(beta, lam)
        chi = core.susceptibility_lambda(model, point, 1e-3)
        chi_lam = core.fidelity_susceptibility_lambda(model, beta, lam, 1e-3)
        worst = max(worst, abs(4.0 * chi_lam / beta - chi) / chi)
    return worst < 1e-2, f"max |4 chi_lambda / b - chi| / chi = {worst:.3e} (tol 1e-2)"


def _check_field_fidelity_bound():
    builder = _chain_builder
    model = exact.DenseModel(builder, "spin_chain")
    samples = []
    ok = True
    for beta in (0.25, 0.5, 1.0):
        for dlam in (0.1, 0.05):
            lam0, lam1 = 0.5, 0.5 + dlam
            exact_f = exact.fidelity_lambda_exact(builder(lam0), builder(lam1), beta)
            approx_f = core.fidelity_lambda_approx(model, beta, lam0, lam1)
            bound = exact.trotter_bound(builder(lam0), builder(lam1), beta)
            err = abs(exact_f - approx_f)
            ok = ok and err <= bound + 1e-12
            samples.append(f"beta={beta} dlam={dlam}: |err|={err:.3e} bound={bound:.3e}")
    return ok, "; ".join(samples)


def _chain_builder(lam):
    return exact.spin_chain_hamiltonian(3, 1.0, lam)


def _check_ground_state_limit():
    builder = _chain_builder
    lam0, lam1 = 0.5, 0.6
    overlap = abs(np.vdot(exact.ground_state(builder(lam0)),
                          exact.ground_state(builder(lam1))))
    cold = exact.fidelity_lambda_exact(builder(lam0), builder(lam1), 200.0)
    diff = abs(cold - overlap)
    return diff < 1e-6, f"|F(beta=200) - GS overlap| = {diff:.3e} (tol 1e-6)"


VALIDATION_CHECKS = (
    ("fidelity_beta_matches_dense", _check_fidelity_beta_matches_dense),
    ("fidelity_cv_consistency", _check_fidelity_cv_consistency),
    ("chi_beta_vs_cv", _check_chi_beta_vs_cv),
    ("chi_lambda_vs_chi", _check_chi_lambda_vs_chi),
    ("field_fidelity_bound", _check_field_fidelity_bound),
    ("ground_state_limit", _check_ground_state_limit),
)


def cmd_validate():
    checks = []
    for name, fn in VALIDATION_CHECKS:
        try:
            passed, detail = fn()
        except ThermofidError as exc:
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        checks.append({"name": name, "passed": bool(passed), "detail": detail})
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}


# ---------------------------------------------------------------------------
# meanfield subcommand
# ---------------------------------------------------------------------------

def cmd_meanfield(lambdas, t_points=21, t_min=0.05, t_max=1.05):
    """Rows (lam, T_c, T, m_x) for each requested lam over a temperature ladder."""
    rows = []
    for lam in lambdas:
        tc = lmg.lmg_meanfield_critical_temperature(lam)
        for t in np.linspace(t_min, t_max, t_points):
            solution = lmg.lmg_meanfield_solve(1.0 / t, lam, gamma=0.0)
            rows.append((lam, tc, float(t), solution.m_x))
    return rows


def _write_meanfield(rows, stream):
    stream.write("lambda,T_c,T,m_x\n")
    for lam, tc, t, m_x in rows:
        stream.write(f"{_fmt(lam)},{_fmt(tc)},{_fmt(t)},{_fmt(m_x)}\n")


# ---------------------------------------------------------------------------
# boundary subcommand
# ---------------------------------------------------------------------------

def cmd_boundary(config_path):
    cfg = load_config(config_path)
    if not isinstance(cfg, dict):
        raise ConfigError("config", "top level must be an object")
    field_file = _require(cfg, "field_file", str, "")
    mode = _require(cfg, "mode", str, "")
    if mode not in ("minima", "jumps"):
        raise ConfigError("mode", f"must be 'minima' or 'jumps', got {mode!r}")
    output = cfg.get("output", "boundary.csv")
    if not isinstance(output, str) or not output:
        raise ConfigError("output", "must be a non-empty string")

    field = read_field_csv(field_file)
    if mode == "minima":
        try:
            line = scan.locate_minima(field)
        except EmptyLine:
            line = scan.CriticalLine((), "minimum")
    else:
        threshold = cfg.get("jump_threshold", 20.0)
        if isinstance(threshold, bool) or not isinstance(threshold, (int, float)) or threshold <= 0:
            raise ConfigError("jump_threshold", "must be a positive number")
        line = scan.locate_jumps(field, float(threshold))

    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        output = os.path.join(out_dir, os.path.basename(output))
    write_line_csv(output, line)
    return {"mode": mode, "points": len(line.points), "output": output}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parse_lambda_list(text):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError("--lambda", f"cannot parse {text!r}") from exc


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="thermofid",
        description="Thermal-state fidelity and phase-diagram scans for solvable spin models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="sweep a model over a lam-T grid")
    p_scan.add_argument("config", help="JSON run configuration")
    p_scan.add_argument("--threads", type=int, default=None,
                        help="work-pool size (default: available parallelism)")

    sub.add_parser("validate", help="run the dense-oracle consistency suite")

    p_mf = sub.add_parser("meanfield", help="mean-field critical line and order parameter")
    p_mf.add_argument("--lambda", dest="lambdas", required=True,
                      help="comma- or space-separated field values in [0, 1]")
    p_mf.add_argument("--t-points", type=int, default=21)
    p_mf.add_argument("--output", default=None, help="CSV path (default: stdout)")

    p_bd = sub.add_parser("boundary", help="extract minima/jump lines from a field file")
    p_bd.add_argument("config", help="JSON boundary configuration")

    args = parser.parse_args(argv)
    try:
        if args.command == "scan":
            report = cmd_scan(args.config, threads=args.threads)
            print(json.dumps({"report": report["outputs"]["report"],
                              "cell_failures": report["cell_failures"],
                              "timing_s": report["timing_s"]}, indent=2))
            return EXIT_OK
        if args.command == "validate":
            report = cmd_validate()
            print(json.dumps(report, indent=2))
            if not report["all_passed"]:
                failed = [c["name"] for c in report["checks"] if not c["passed"]]
                print(f"validation failed: {', '.join(failed)}", file=sys.stderr)
                return EXIT_VALIDATION
            return EXIT_OK
        if args.command == "meanfield":
            lambdas = _parse_lambda_list(args.lambdas)
            if args.t_points < 2:
                raise ConfigError("--t-points", "must be >= 2")
            rows = cmd_meanfield(lambdas, t_points=args.t_points)
            if args.output:
                with open(args.output, "w") as fh:
                    _write_meanfield(rows, fh)
            else:
                _write_meanfield(rows, sys.stdout)
            return EXIT_OK
        if args.command == "boundary":
            summary = cmd_boundary(args.config)
            print(json.dumps(summary, indent=2))
            return EXIT_OK
    except ConfigError as exc:
        print(f"config error - {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error - {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ThermofidError as exc:
        print(f"evaluation error - {exc}", file=sys.stderr)
        return EXIT_EVALUATION
    raise AssertionError(f"unhandled command {args.command}")


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
