"""``lsverify`` command line.

Every subcommand is turned into a JSON run configuration, validated against a
schema and executed by :func:`run`. Exit codes: 0 all checks pass, 1 a
violation was found, 2 usage, configuration or module error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np
from jsonschema import Draft202012Validator

from . import __version__
from .bernstein import bernstein_profile, log_c_b, log_h, spectral_bernstein
from .constants import LSConstantInput, theorem_constant
from .covering import build_covering, validate_covering
from .errors import LSVerifyError, SchemaError
from .geometry.measure import thickness_of
from .serialize import (MODEL_NAMES, box_from_json, covering_to_json, domain_from_json,
                        function_from_json, model_from_json, quadrature_from_json, thick_from_json)
from .spectral import default_region
from .verify import (fmt17, ls_empirical, optimality_example, random_remez_instance, remez_check)

COMMANDS = ("covering", "thickness", "constant", "bernstein-verify", "ls-test", "optimality", "remez")

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2

# ------------------------------------------------------------------ schemas

_POS = {"type": "number", "exclusiveMinimum": 0}
_OBJ = {"type": "object", "required": ["type"]}
_MODEL = {"oneOf": [{"enum": list(MODEL_NAMES)},
                    {"type": "object", "required": ["type"],
                     "properties": {"type": {"enum": list(MODEL_NAMES)}}}],
          "message": f"model must be one of {', '.join(MODEL_NAMES)}"}
_COMMON = {"command": {"enum": list(COMMANDS)},
           "out": {"type": ["string", "null"]},
           "format": {"enum": ["json", "csv"]},
           "quadrature": {"type": "object"}}

_PARAMS = {
    "covering": ({"domain": _OBJ, "rho": _POS, "window": _OBJ, "validate": {"type": "boolean"},
                  "narrow_tiles": {"type": "boolean"}}, ["domain", "rho", "out"]),
    "thickness": ({"domain": _OBJ, "thick_set": _OBJ, "rho": _POS}, ["domain", "thick_set", "rho"]),
    "constant": ({"kappa": {"type": "number", "minimum": 1, "message": "kappa must be at least 1"},
                  "d": {"type": "integer", "minimum": 1},
                  "l": {"type": "array", "items": _POS, "minItems": 1},
                  "gamma": {"type": "number", "exclusiveMinimum": 0, "maximum": 1,
                            "message": "gamma must lie in (0,1]"},
                  "eta": {"type": "number", "exclusiveMinimum": 0, "maximum": 1,
                          "message": "eta must lie in (0,1]"},
                  "rho": _POS, "model": _MODEL, "lambda": {"type": "number"},
                  "log_h": {"type": "number"}},
                 ["kappa", "d", "l", "gamma", "eta", "rho"]),
    "bernstein-verify": ({"function": {"type": "object", "required": ["basis", "terms", "lambda"]},
                          "model": _MODEL, "lambda": {"type": "number"},
                          "m_max": {"type": "integer", "minimum": 0, "maximum": 30},
                          "l1": _POS}, ["function"]),
    "ls-test": ({"domain": _OBJ, "bc": {"enum": ["dirichlet", "neumann"]}, "model": _MODEL,
                 "lambda": {"type": "number"}, "thick_set": _OBJ, "rho": _POS,
                 "trials": {"type": "integer", "minimum": 1}, "seed": {"type": "integer", "minimum": 0},
                 "m_max": {"type": "integer", "minimum": 1, "maximum": 30},
                 "local_estimates": {"type": "boolean"}}, ["out"]),
    "optimality": ({"alpha": {"type": "integer", "minimum": 2, "message": "alpha must be an integer >= 2"},
                    "gamma": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1,
                              "message": "gamma must lie in (0,1)"},
                    "T": {"type": "integer", "minimum": 1}, "fft": {"type": "boolean"}},
                   ["alpha", "gamma"]),
    "remez": ({"random": {"type": "integer", "minimum": 1}, "seed": {"type": "integer", "minimum": 0},
               "poly": {"type": "array", "minItems": 1, "maxItems": 65},
               "set": {"type": "array", "minItems": 1,
                       "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
               "grid": {"type": "integer", "minimum": 16}}, []),
}

_SQRT_HALF = 0.1 / math.sqrt(2.0)
LS_DEFAULTS = {
    "domain": {"type": "GeneralizedRectangle", "intervals": [[0.0, 1.0], [0.0, 1.0]]},
    "bc": "dirichlet", "model": "pure-laplacian", "lambda": 200.0,
    "thick_set": {"type": "PeriodicBoxUnion", "period": [0.1, 0.1],
                  "base": [{"type": "Box", "corner": [(0.1 - _SQRT_HALF) / 2] * 2,
                            "sides": [_SQRT_HALF] * 2}]},
    "rho": 0.1, "trials": 100, "seed": 0, "m_max": 8, "local_estimates": False,
}
DEFAULTS = {
    "ls-test": LS_DEFAULTS,
    "covering": {"validate": False, "narrow_tiles": False},
    "constant": {"model": "pure-laplacian", "lambda": 0.0},
    "bernstein-verify": {"model": "pure-laplacian", "m_max": 8},
    "optimality": {"fft": True},
    "remez": {"seed": 0, "grid": 4096},
}


def schema_for(command: str) -> dict:
    props, required = _PARAMS[command]
    return {"type": "object", "properties": {**_COMMON, **props},
            "required": ["command", *required], "additionalProperties": False}


def _errors(validator: Draft202012Validator, doc) -> list:
    out = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path)):
        if err.validator == "additionalProperties":
            allowed = set(err.schema.get("properties", {}))
            for k in sorted(set(err.instance) - allowed):
                out.append((f"{err.json_path}.{k}", "unknown key"))
            continue
        if err.validator == "required":
            for k in err.validator_value:
                if isinstance(err.instance, dict) and k not in err.instance:
                    out.append((f"{err.json_path}.{k}", "required key is missing"))
            continue
        out.append((err.json_path, err.schema.get("message", err.message)
                    if isinstance(err.schema, dict) else err.message))
    return list(dict.fromkeys(out))


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"

    def to_json(self) -> dict:
        doc = {"command": self.command, **self.params, "format": self.format}
        if self.out is not None:
            doc["out"] = self.out
        return doc


def validate_config(doc) -> RunConfig:
    """Schema-check an already decoded document."""
    if not isinstance(doc, dict):
        raise SchemaError([("$", "configuration must be a JSON object")])
    cmd = doc.get("command")
    if cmd not in COMMANDS:
        raise SchemaError([("$.command", f"command must be one of {', '.join(COMMANDS)}")])
    errs = _errors(Draft202012Validator(schema_for(cmd)), doc)
    if cmd == "remez" and not errs:
        has_rand, has_poly = "random" in doc, ("poly" in doc or "set" in doc)
        if has_rand == has_poly or (has_poly and not ("poly" in doc and "set" in doc)):
            errs.append(("$", "remez needs either 'random' or both 'poly' and 'set'"))
    if errs:
        raise SchemaError(errs)
    fmt = doc.get("format", "csv" if cmd == "ls-test" else "json")
    if fmt == "csv" and cmd not in ("ls-test", "remez"):
        raise SchemaError([("$.format", f"csv output is not available for {cmd}")])
    params = {**DEFAULTS.get(cmd, {}),
              **{k: v for k, v in doc.items() if k not in ("command", "out", "format")}}
    return RunConfig(cmd, params, doc.get("out"), fmt)


def parse_config(text: str) -> RunConfig:
    """Decode and validate a JSON run configuration."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError([("$", f"invalid JSON: {exc.msg} at line {exc.lineno}")]) from None
    return validate_config(doc)


# ---------------------------------------------------------------- execution

def thread_count() -> int:
    env = os.environ.get("LSVERIFY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SchemaError([("LSVERIFY_THREADS", f"not an integer: {env!r}")]) from None
    return os.cpu_count() or 1


def _emit(cfg: RunConfig, payload: dict | str, summary: str) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, allow_nan=False)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        print(summary)
    else:
        print(text.rstrip("\n"))


def _clean(x):
    """JSON-safe float: infinities as strings, NaN as null."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def _spec(p):
    return quadrature_from_json(p.get("quadrature"))


def _run_covering(cfg):
    p = cfg.params
    dom = domain_from_json(p["domain"], "$.domain")
    win = box_from_json(p["window"]) if "window" in p else None
    cov = build_covering(dom, float(p["rho"]), win, narrow_tiles=p["narrow_tiles"])
    doc = covering_to_json(cov)
    code = EXIT_OK
    summary = f"covering: {len(cov.elements)} elements, params {cov.params}"
    if p["validate"]:
        rep = validate_covering(cov, _spec(p))
        doc["validation"] = {"uncovered_fraction": rep.uncovered_fraction,
                             "max_overlap_measured": rep.max_overlap_measured,
                             "samples": rep.samples, "passed": rep.passed, "messages": list(rep.messages)}
        summary += f"; validation {'passed' if rep.passed else 'FAILED'}"
        code = EXIT_OK if rep.passed else EXIT_VIOLATION
    _emit(cfg, doc, summary)
    return code


def _run_thickness(cfg):
    p = cfg.params
    dom = domain_from_json(p["domain"], "$.domain")
    om = thick_from_json(p["thick_set"], "$.thick_set")
    res = thickness_of(om, dom, float(p["rho"]), _spec(p))
    doc = {"gamma": res.gamma, "rho": res.rho, "witness_x": [_clean(v) for v in res.witness_x],
           "exact": res.exact, "thick": res.thick}
    _emit(cfg, doc, f"thickness: gamma={fmt17(res.gamma)} at rho={res.rho}")
    return EXIT_OK if res.thick else EXIT_VIOLATION


def _run_constant(cfg):
    p = cfg.params
    model = model_from_json(p["model"])
    l = tuple(float(v) for v in p["l"])
    lh = float(p["log_h"]) if "log_h" in p else log_h(model, l, float(p["lambda"]))
    try:
        inp = LSConstantInput(float(p["kappa"]), int(p["d"]), l, float(p["gamma"]), float(p["eta"]),
                              float(p["rho"]), lh)
    except ValueError as exc:
        raise SchemaError([("$", str(exc))]) from None
    res = theorem_constant(inp)
    doc = {"log_base": res.log_base, "exponent": res.exponent, "log_value": res.log_value}
    if res.value is not None:
        doc["value"] = res.value
    _emit(cfg, doc, f"constant: log_value={fmt17(res.log_value)}")
    return EXIT_OK


def _run_bernstein(cfg):
    p = cfg.params
    f = function_from_json(p["function"])
    model = model_from_json(p["model"])
    lam = float(p.get("lambda", f.lambda_cap))
    m_max = int(p["m_max"])
    prof = bernstein_profile(f, m_max, [default_region(f)], None, _spec(p))[0]
    norm = f.norm_sq_exact()
    rows, ok = [], True
    for m in range(m_max + 1):
        log_bound = log_c_b(model, m, lam, p.get("l1")) - math.lgamma(m + 1) + math.log(max(norm, 1e-300))
        bound = math.exp(min(log_bound, 700.0))
        val = float(prof[m])
        margin = (bound - val) / bound
        ok &= margin >= -1e-6
        rows.append({"m": m, "sum": val, "spectral": _clean(spectral_bernstein(f, m)),
                     "log_bound": log_bound, "relative_margin": margin})
    doc = {"norm_sq": norm, "lambda": lam, "m_max": m_max, "rows": rows, "holds": bool(ok)}
    _emit(cfg, doc, f"bernstein-verify: {'holds' if ok else 'VIOLATED'} for m <= {m_max}")
    return EXIT_OK if ok else EXIT_VIOLATION


def _run_ls(cfg):
    p = cfg.params
    dom = domain_from_json(p["domain"], "$.domain")
    om = thick_from_json(p["thick_set"], "$.thick_set")
    rep = ls_empirical(dom, p["bc"], model_from_json(p["model"]), float(p["lambda"]), om,
                       int(p["trials"]), int(p["seed"]), _spec(p), rho=float(p["rho"]),
                       m_max=int(p["m_max"]), local_estimates=bool(p["local_estimates"]),
                       workers=thread_count())
    locs = rep.local_records()
    ok = rep.passed and all(r.holds for r in locs)
    summary = (f"ls-test: {rep.pass_count}/{len(rep.rows)} trials pass, min slack_log "
               f"{fmt17(rep.min_slack)}")
    if p["local_estimates"]:
        summary += f", local estimate {sum(r.holds for r in locs)}/{len(locs)}"
    if cfg.format == "csv":
        payload = rep.to_csv()
    else:
        payload = {"config": cfg.to_json(), "gamma": rep.gamma, "covering_params": list(rep.covering_params),
                   "log_h": rep.log_h, "const_log": rep.const_log, "min_slack": rep.min_slack,
                   "pass_count": rep.pass_count, "passed": ok,
                   "rows": [{"trial": r.trial, "seed": r.seed, "lambda": r.lam, "norm_full": r.norm_full,
                             "norm_omega": r.norm_omega, "ratio_log": _clean(r.ratio_log),
                             "const_log": r.const_log, "slack_log": _clean(r.slack_log),
                             "good_mass": r.good_mass} for r in rep.rows]}
    _emit(cfg, payload, summary)
    return EXIT_OK if ok else EXIT_VIOLATION


def _run_optimality(cfg):
    p = cfg.params
    res = optimality_example(int(p["alpha"]), float(p["gamma"]), _spec(p), p.get("T"), bool(p["fft"]))
    doc = {"alpha": res.alpha, "gamma": res.gamma, "T": res.T, "norm_sq_omega": res.norm_sq_omega,
           "norm_sq_full": res.norm_sq_full, "tail_bound": res.tail_bound, "paper_bound": res.paper_bound,
           "holds": res.holds, "fft_outside_fraction": _clean(res.fft_outside_fraction),
           "fft_support_check": res.fft_ok}
    ok = res.holds and res.fft_ok
    _emit(cfg, doc, f"optimality: norm_omega={fmt17(res.norm_sq_omega)} bound={fmt17(res.paper_bound)} "
                    f"{'holds' if ok else 'VIOLATED'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def _coeffs(raw) -> list:
    out = []
    for c in raw:
        if isinstance(c, (int, float)) and not isinstance(c, bool):
            out.append(complex(c))
        elif isinstance(c, list) and len(c) == 2:
            out.append(complex(float(c[0]), float(c[1])))
        elif isinstance(c, dict):
            out.append(complex(float(c.get("re", 0.0)), float(c.get("im", 0.0))))
        else:
            raise SchemaError([("$.poly", f"cannot read coefficient {c!r}")])
    return out


def _run_remez(cfg):
    p = cfg.params
    if "random" in p:
        rng = np.random.default_rng(int(p["seed"]))
        cases = [random_remez_instance(rng) for _ in range(int(p["random"]))]
    else:
        cases = [(_coeffs(p["poly"]), [tuple(iv) for iv in p["set"]])]
    results = [remez_check(c, E, int(p["grid"])) for c, E in cases]
    n_ok = sum(r.holds for r in results)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "lhs", "log_rhs", "M", "sup_E", "measure_E", "holds"])
        for i, r in enumerate(results):
            w.writerow([i, fmt17(r.lhs), fmt17(r.log_rhs), fmt17(r.M), fmt17(r.sup_E), fmt17(r.measure_E),
                        int(r.holds)])
        payload = buf.getvalue()
    else:
        payload = {"instances": [{"lhs": r.lhs, "rhs": _clean(r.rhs), "log_rhs": r.log_rhs, "M": r.M,
                                  "sup_E": r.sup_E, "measure_E": r.measure_E, "holds": r.holds}
                                 for r in results],
                   "holds": n_ok == len(results)}
    _emit(cfg, payload, f"remez: {n_ok}/{len(results)} instances hold")
    return EXIT_OK if n_ok == len(results) else EXIT_VIOLATION


_RUNNERS = {"covering": _run_covering, "thickness": _run_thickness, "constant": _run_constant,
            "bernstein-verify": _run_bernstein, "ls-test": _run_ls, "optimality": _run_optimality,
            "remez": _run_remez}


def run(config: RunConfig) -> int:
    """Execute a validated configuration and return the exit code."""
    try:
        return _RUNNERS[config.command](config)
    except SchemaError as exc:
        print(f"lsverify: configuration error: {exc}", file=sys.stderr)
    except (LSVerifyError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"lsverify: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


# ---------------------------------------------------------------- argparse

def _floats(text: str) -> list:
    return [float(v) for v in text.split(",") if v.strip()]


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError([(path, f"invalid JSON: {exc.msg} at line {exc.lineno}")]) from None


def _window_json(text: str) -> dict:
    v = _floats(text)
    if len(v) % 2:
        raise SchemaError([("--window", "expects lo1,...,lod,hi1,...,hid")])
    d = len(v) // 2
    return {"type": "Box", "corner": v[:d], "sides": [h - lo for lo, h in zip(v[:d], v[d:])]}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lsverify", description="Numerical checks of a spectral inequality on thick sets.")
    ap.add_argument("--version", action="version", version=f"lsverify {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute a JSON run configuration")
    r.add_argument("--config", required=True)

    c = sub.add_parser("covering", help="build (and optionally validate) a covering")
    c.add_argument("--domain", required=True, help="JSON file with a domain or a geometry document")
    c.add_argument("--rho", type=float, required=True)
    c.add_argument("--window", help="lo1,..,lod,hi1,..,hid for unbounded domains")
    c.add_argument("--out")
    c.add_argument("--validate", action="store_true")
    c.add_argument("--narrow-tiles", action="store_true")
    c.add_argument("--mc-samples", type=int)

    t = sub.add_parser("thickness", help="measure (gamma, rho)-thickness")
    t.add_argument("--config", required=True, help="geometry document with domain and thick_set")
    t.add_argument("--rho", type=float, required=True)
    t.add_argument("--out")

    k = sub.add_parser("constant", help="evaluate the theorem constant")
    k.add_argument("--kappa", type=float, required=True)
    k.add_argument("--d", type=int, required=True)
    k.add_argument("--l", type=_floats, required=True)
    k.add_argument("--gamma", type=float, required=True)
    k.add_argument("--eta", type=float, required=True)
    k.add_argument("--rho", type=float, required=True)
    k.add_argument("--model", default="pure-laplacian", choices=MODEL_NAMES)
    k.add_argument("--lambda", dest="lam", type=float, default=0.0)
    k.add_argument("--s", type=float)
    k.add_argument("--sigma-min", type=float)
    k.add_argument("--delta", type=float)
    k.add_argument("--log-h", type=float)
    k.add_argument("--out")

    b = sub.add_parser("bernstein-verify", help="Bernstein sums of a spectral function")
    b.add_argument("--function", required=True)
    b.add_argument("--model", default="pure-laplacian", choices=MODEL_NAMES)
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--m-max", type=int, default=8)
    b.add_argument("--s", type=float)
    b.add_argument("--sigma-min", type=float)
    b.add_argument("--delta", type=float)
    b.add_argument("--l1", type=float)
    b.add_argument("--out")

    e = sub.add_parser("ls-test", help="empirical check of the full inequality")
    e.add_argument("--config", help="scenario JSON (defaults to the unit-square scenario)")
    e.add_argument("--trials", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--out")
    e.add_argument("--format", choices=["csv", "json"])
    e.add_argument("--local-estimates", action="store_true")

    o = sub.add_parser("optimality", help="the sinc-power optimality example")
    o.add_argument("--alpha", type=int, required=True)
    o.add_argument("--gamma", type=float, required=True)
    o.add_argument("--T", type=int)
    o.add_argument("--no-fft", action="store_true")
    o.add_argument("--out")

    z = sub.add_parser("remez", help="Remez-type inequality for polynomials")
    g = z.add_mutually_exclusive_group(required=True)
    g.add_argument("--random", type=int)
    g.add_argument("--poly")
    z.add_argument("--set")
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--grid", type=int, default=4096)
    z.add_argument("--out")
    z.add_argument("--format", choices=["csv", "json"])
    return ap


def _model_arg(a) -> dict | str:
    if a.model == "fractional-laplacian":
        return {"type": a.model, "s": a.s}
    if a.model == "divergence":
        return {"type": a.model, "sigma_min": a.sigma_min}
    if a.model == "harmonic-oscillator" and a.delta is not None:
        return {"type": a.model, "delta": a.delta}
    return a.model


def _put(doc: dict, key: str, value) -> None:
    if value is not None:
        doc[key] = value


def args_to_document(a) -> dict:
    """Translate parsed arguments into a run-configuration document."""
    cmd = a.command
    if cmd == "run":
        return _read_json(a.config)
    doc = {"command": cmd}
    _put(doc, "out", getattr(a, "out", None))
    if cmd == "covering":
        src = _read_json(a.domain)
        doc["domain"] = src["domain"] if "domain" in src else src
        if "quadrature" in src:
            doc["quadrature"] = src["quadrature"]
        doc["rho"] = a.rho
        if a.window:
            doc["window"] = _window_json(a.window)
        doc["validate"] = a.validate
        doc["narrow_tiles"] = a.narrow_tiles
        if a.mc_samples:
            doc.setdefault("quadrature", {})["mc_samples"] = a.mc_samples
    elif cmd == "thickness":
        src = _read_json(a.config)
        doc.update({k: src[k] for k in ("domain", "thick_set", "quadrature") if k in src})
        doc["rho"] = a.rho
    elif cmd == "constant":
        doc.update({"kappa": a.kappa, "d": a.d, "l": a.l, "gamma": a.gamma, "eta": a.eta, "rho": a.rho,
                    "model": _model_arg(a), "lambda": a.lam})
        _put(doc, "log_h", a.log_h)
    elif cmd == "bernstein-verify":
        doc.update({"function": _read_json(a.function), "model": _model_arg(a), "m_max": a.m_max})
        _put(doc, "lambda", a.lam)
        _put(doc, "l1", a.l1)
    elif cmd == "ls-test":
        if a.config:
            src = _read_json(a.config)
            doc.update({k: v for k, v in src.items() if k != "command"})
            if a.out is not None:
                doc["out"] = a.out
        _put(doc, "trials", a.trials)
        _put(doc, "seed", a.seed)
        _put(doc, "format", a.format)
        if a.local_estimates:
            doc["local_estimates"] = True
    elif cmd == "optimality":
        doc.update({"alpha": a.alpha, "gamma": a.gamma, "fft": not a.no_fft})
        _put(doc, "T", a.T)
    elif cmd == "remez":
        if a.random is not None:
            doc["random"] = a.random
        else:
            if not a.set:
                raise SchemaError([("--set", "required together with --poly")])
            doc["poly"] = _read_json(a.poly)
            doc["set"] = _read_json(a.set)
        doc.update({"seed": a.seed, "grid": a.grid})
        _put(doc, "format", a.format)
    return doc


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        cfg = validate_config(args_to_document(a))
    except SchemaError as exc:
        print(f"lsverify: configuration error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"lsverify: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
