"""Command-line front end: ``ossolve eigenvalues|eigenfunction|figures|validate``.

Every command reads one JSON config (validated against the schemas below,
unknown keys rejected) and writes CSV, SVG and JSON artifacts to ``--out``.
Exit codes: 0 success, 2 config or usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, NoRootFound, OSSolveError, QuadratureError, SpuriousMode
from .greens import GreensKernel, synthesize_phi
from .longwave import longwave_linear_dispersion, longwave_quadratic_pair
from .meanflow import FlowConfig, Linear, Quadratic, Sech2
from .oracle import DEFAULT_N, MIN_N, YMAX_FACTOR, self_convergence
from .outer import FIGURE_R, FIGURES, figure_profiles, linear_outer_mode, quadratic_outer_mode
from .shortwave import steady_eigen, wake_eigenpair
from .svg import line_plot_svg

log = logging.getLogger("ossolve")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
THREADS_ENV = "OSSOLVE_THREADS"

# ---------------------------------------------------------------------------
# schemas

_POS = {"type": "number", "exclusiveMinimum": 0}
_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

_FLOW = {
    "type": "object",
    "additionalProperties": False,
    "required": ["r"],
    "properties": {
        "r": _POS,
        "chi": _POS,
        "R": _POS,
        "theta": {"type": "number"},
        "regime": {"enum": ["short-wave", "long-wave"]},
    },
    "oneOf": [{"required": ["chi"]}, {"required": ["R"]}],
}

_NONZERO = {"type": "number", "not": {"const": 0}}

_PROFILE = {
    "oneOf": [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "b"],
            "properties": {"kind": {"const": "linear"}, "b": _NONZERO, "c": {"type": "number"}},
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "a"],
            "properties": {"kind": {"const": "quadratic"}, "a": _NONZERO, "b": {"type": "number"},
                           "c": {"type": "number"}},
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "U0", "w"],
            "properties": {"kind": {"const": "sech2"}, "U0": _POS, "w": _POS},
        },
    ]
}

EIGENVALUES_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["flow", "profile", "modes"],
    "properties": {
        "flow": _FLOW,
        "profile": _PROFILE,
        "method": {"enum": ["steady", "wake", "longwave"]},
        "modes": {
            "type": "object",
            "additionalProperties": False,
            "required": ["start", "stop"],
            "properties": {"start": {"type": "integer", "minimum": 0}, "stop": {"type": "integer"}},
        },
        "k": _COMPLEX,
        "exact": {"type": "boolean"},
        "cube_root": {"enum": [0, 1, 2]},
        "output": {"type": "string", "minLength": 1},
    },
}

EIGENFUNCTION_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["method", "case", "n", "epsilon", "R"],
    "properties": {
        "method": {"enum": ["greens", "outer"]},
        "case": {"enum": ["linear", "quadratic"]},
        "n": {"type": "integer", "minimum": 0},
        "epsilon": _POS,
        "R": _POS,
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["start", "stop", "num"],
            "properties": {"start": {"type": "number", "minimum": 0}, "stop": _POS,
                           "num": {"type": "integer", "minimum": 2}},
        },
        "exponent": {"enum": ["derived", "printed"]},
        "svg": {"type": "boolean"},
    },
}

FIGURES_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "which": {"type": "array", "items": {"enum": sorted(FIGURES)}, "uniqueItems": True},
        "exponent": {"enum": ["derived", "printed"]},
    },
}

VALIDATE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["n", "r"],
    "properties": {
        "chi": _POS,
        "profile": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "b"],
            "properties": {"kind": {"const": "linear"}, "b": _NONZERO, "c": {"type": "number"}},
        },
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "array", "items": _POS, "minItems": 1},
        "N": {"type": "integer", "minimum": MIN_N},
        "ymax_factor": {"type": "number", "minimum": 3},
        "output": {"type": "string", "minLength": 1},
    },
}


class ConfigError(Exception):
    """Invalid configuration or usage."""


# ---------------------------------------------------------------------------
# helpers


def _num(v: float) -> str:
    return "%.17g" % v


def _load_config(path: str | None, schema: dict, default: dict | None = None) -> tuple[dict, bytes]:
    if path is None:
        if default is None:
            raise ConfigError("--config is required for this command")
        raw = json.dumps(default, sort_keys=True).encode()
        return default, raw
    try:
        raw = Path(path).read_bytes()
        cfg = json.loads(raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from exc
    return cfg, raw


def _flow(block: dict) -> FlowConfig:
    r = block["r"]
    regime = block.get("regime")
    theta = block.get("theta", 0.0)
    if "chi" in block:
        return FlowConfig(r=r, chi=block["chi"], theta=theta, regime=regime)
    return FlowConfig.from_reynolds(r, block["R"], theta=theta, regime=regime)


def _profile(block: dict):
    kind = block["kind"]
    if kind == "linear":
        return Linear(block["b"], block.get("c", 0.0))
    if kind == "quadratic":
        return Quadratic(block["a"], block.get("b", 0.0), block.get("c", 0.0))
    return Sech2(block["U0"], block["w"])


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _complex_json(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _tag(v: float) -> str:
    return f"{v:g}"


# ---------------------------------------------------------------------------
# commands

EIGEN_HEADER = ["n", "Re(k)", "Im(k)", "Re(omega)", "Im(omega)", "residual", "branch_note"]
_NUMERIC_FAILURES = (ConvergenceError, NoRootFound, QuadratureError, SpuriousMode, ArithmeticError)


def _eigen_row(method: str, n: int, profile, flow: FlowConfig, conf: dict):
    if method == "steady":
        return steady_eigen(n, profile, flow)
    if "k" not in conf:
        raise ConfigError(f"method {method!r} needs a wavenumber 'k' as [re, im]")
    k = complex(*conf["k"])
    if method == "wake":
        if not isinstance(profile, Sech2):
            raise ConfigError("method 'wake' needs a sech2 profile")
        return wake_eigenpair(n, k, profile.U0, profile.w, flow, exact=conf.get("exact", True))
    if isinstance(profile, Linear):
        return longwave_linear_dispersion(n, profile.b, flow, k=k, c=profile.c, root=conf.get("cube_root", 0))
    if isinstance(profile, Quadratic):
        return longwave_quadratic_pair(n, k, profile.a, profile.b, profile.c, flow)
    raise ConfigError("method 'longwave' needs a linear or quadratic profile")


def cmd_eigenvalues(conf: dict, out: Path) -> int:
    """Eigenvalue table ordered by n; failed modes are flagged rows."""
    flow = _flow(conf["flow"])
    profile = _profile(conf["profile"])
    method = conf.get("method", "wake" if isinstance(profile, Sech2) else "steady")
    rows, status = [], EXIT_OK
    for n in range(conf["modes"]["start"], conf["modes"]["stop"] + 1):
        try:
            p = _eigen_row(method, n, profile, flow, conf)
        except _NUMERIC_FAILURES as exc:
            log.error("mode %d failed: %s", n, exc)
            rows.append([n, math.nan, math.nan, math.nan, math.nan, math.nan, f"FAILED: {exc}"])
            status = EXIT_NUMERIC
            continue
        rows.append([n, p.k.real, p.k.imag, p.omega.real, p.omega.imag, float(p.residual), p.branch_note])
    path = out / conf.get("output", "eigenvalues.csv")
    _write_text(path, _csv_text(EIGEN_HEADER, rows))
    log.info("wrote %s (%d rows)", path, len(rows))
    return status


def _outer_mode(case: str, n: int, R: float, eps: float, exponent: str):
    if case == "linear":
        if n < 1:
            raise DomainError("the linear case needs n >= 1")
        return linear_outer_mode(n, R, eps)
    return quadratic_outer_mode(n, R, eps, exponent=exponent)


def cmd_eigenfunction(conf: dict, out: Path) -> int:
    """phi(y) of one mode from the outer formula or Green's-function synthesis."""
    method, case, n = conf["method"], conf["case"], conf["n"]
    eps, R = conf["epsilon"], conf["R"]
    g = conf.get("grid", {"start": 0.0, "stop": 10.0, "num": 1000})
    if g["stop"] <= g["start"]:
        raise ConfigError("grid stop must exceed start")
    y = np.linspace(g["start"], g["stop"], g["num"])
    mode = _outer_mode(case, n, R, eps, conf.get("exponent", "derived"))
    status = EXIT_OK
    if method == "outer":
        phi = np.asarray(mode(y))
        header = ["y", "Re(phi)", "Im(phi)", "abs(phi)"]
        rows = [[float(a), float(v.real), float(v.imag), float(abs(v))] for a, v in zip(y, phi)]
    else:
        kern = GreensKernel("half-line", mode.r, mode.pair.k)
        try:
            gf = synthesize_phi(kern, mode.psi, y)
            phi, err = gf.values, gf.errors
        except QuadratureError as exc:
            log.error("grid synthesis failed (%s); retrying point by point", exc)
            phi = np.full(y.size, complex(math.nan, math.nan))
            err = np.full(y.size, math.nan)
            for i, yi in enumerate(y):
                try:
                    gi = synthesize_phi(kern, mode.psi, y[i:i + 1])
                    phi[i], err[i] = gi.values[0], gi.errors[0]
                except QuadratureError:
                    status = EXIT_NUMERIC
        header = ["y", "Re(phi)", "Im(phi)", "abs(phi)", "quadrature_error"]
        rows = [[float(a), float(v.real), float(v.imag), float(abs(v)), float(e)] for a, v, e in zip(y, phi, err)]
    stem = f"eigenfunction_{method}_{case}_n{n}_eps{_tag(eps)}_R{_tag(R)}"
    _write_text(out / f"{stem}.csv", _csv_text(header, rows))
    if conf.get("svg", False):
        mag = np.array([r[3] for r in rows])
        _write_text(out / f"{stem}.svg", line_plot_svg([(y, np.nan_to_num(mag), f"|phi| {case} n={n} R={_tag(R)}")], 1))
    log.info("wrote %s", out / f"{stem}.csv")
    return status


def cmd_figures(conf: dict, out: Path) -> int:
    """Four-panel |phi| figures with per-panel CSVs and a JSON summary."""
    exponent = conf.get("exponent", "derived")
    for fig in conf.get("which", sorted(FIGURES)):
        case, index = FIGURES[fig]
        panels, summary = [], []
        for gf in figure_profiles(fig, exponent=exponent):
            R, eps = gf.meta["R"], gf.meta["epsilon"]
            name = f"{fig}_{case}_n{index}_eps{_tag(eps)}_R{_tag(R)}.csv"
            rows = [[float(a), float(v.real), float(v.imag), float(abs(v))] for a, v in zip(gf.grid, gf.values)]
            _write_text(out / name, _csv_text(["y", "Re(phi)", "Im(phi)", "abs(phi)"], rows))
            panels.append((gf.grid, np.abs(gf.values), f"{fig}: |phi_{index}|, eps={_tag(eps)}, R={_tag(R)}"))
            summary.append({"R": R, "epsilon": eps, "max_abs": gf.max_abs(), "k": _complex_json(gf.meta["k"]),
                            "csv": name})
        maxima = [p["max_abs"] for p in summary]
        sidecar = {
            "figure": fig,
            "case": case,
            "index": index,
            "R": list(FIGURE_R),
            "panels": summary,
            "max_abs_decreasing_in_R": all(a > b for a, b in zip(maxima, maxima[1:])),
        }
        _write_text(out / f"{fig}.svg", line_plot_svg(panels, 2))
        _write_text(out / f"{fig}_summary.json", _json_text(sidecar))
        log.info("wrote %s bundle", fig)
    return EXIT_OK


def _validate_one(r: float, n: int, chi: float, profile: Linear, N: int, ymax_factor: float) -> dict:
    flow = FlowConfig(r=r, chi=chi)
    seed = steady_eigen(n, profile, flow)
    sc = self_convergence(profile, flow, seed, N=N, ymax_factor=ymax_factor)
    gap = abs(seed.k - sc["k"]) / abs(sc["k"])
    return {
        "r": r,
        "n": n,
        "k_wkb": _complex_json(seed.k),
        "k_oracle": _complex_json(sc["k"]),
        "relative_gap": gap,
        "n_doubling": sc["n_doubling"],
        "ymax_increase": sc["ymax_increase"],
        "tail_energy": sc["tail_energy"],
        "ode_residual": sc["ode_residual"],
        "N": sc["N"],
        "Ymax": sc["Ymax"],
        "map": sc["map"],
    }


def validation_report(conf: dict, raw: bytes) -> dict:
    """Oracle-versus-WKB report for every r in the sweep."""
    n = conf["n"]
    chi = conf.get("chi", 1.0)
    pblock = conf.get("profile", {"kind": "linear", "b": 1.0})
    profile = Linear(pblock["b"], pblock.get("c", 0.0))
    N = conf.get("N", DEFAULT_N)
    factor = conf.get("ymax_factor", YMAX_FACTOR)
    rs = list(conf["r"])
    with ThreadPoolExecutor(max_workers=min(_threads(), len(rs))) as pool:
        runs = list(pool.map(lambda r: _validate_one(r, n, chi, profile, N, factor), rs))
    gaps = [run["relative_gap"] for run in runs]
    decreasing = all(a > b for a, b in zip(gaps, gaps[1:]))
    converged = all(run["n_doubling"] <= 1e-6 and run["ymax_increase"] <= 1e-6 for run in runs)
    residual_ok = all(run["ode_residual"] <= 1e-6 for run in runs)
    return {
        "tool": "ossolve",
        "version": __version__,
        "config_sha256": hashlib.sha256(raw).hexdigest(),
        "runs": runs,
        "invariants": {
            "gap_strictly_decreasing": decreasing,
            "self_convergence": converged,
            "ode_residual": residual_ok,
        },
        "status": "pass" if decreasing and converged and residual_ok else "fail",
    }


def cmd_validate(conf: dict, out: Path, raw: bytes) -> int:
    report = validation_report(conf, raw)
    path = out / conf.get("output", "validation.json")
    _write_text(path, _json_text(report))
    log.info("wrote %s: %s", path, report["status"])
    return EXIT_OK if report["status"] == "pass" else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ossolve", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ossolve {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("eigenvalues", "eigenfunction", "figures", "validate"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=name != "figures")
        sp.add_argument("--out", default=".")
        sp.add_argument("-v", "--verbose", action="store_true")
    return p


_SCHEMAS = {
    "eigenvalues": EIGENVALUES_SCHEMA,
    "eigenfunction": EIGENFUNCTION_SCHEMA,
    "figures": FIGURES_SCHEMA,
    "validate": VALIDATE_SCHEMA,
}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="ossolve: %(levelname)s: %(message)s")
    out = Path(args.out)
    try:
        default = {} if args.command == "figures" else None
        conf, raw = _load_config(args.config, _SCHEMAS[args.command], default)
        _threads()
        if args.command == "eigenvalues":
            return cmd_eigenvalues(conf, out)
        if args.command == "eigenfunction":
            return cmd_eigenfunction(conf, out)
        if args.command == "figures":
            return cmd_figures(conf, out)
        return cmd_validate(conf, out, raw)
    except (ConfigError, DomainError) as exc:
        print(f"ossolve: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSSolveError, ArithmeticError) as exc:
        print(f"ossolve: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"ossolve: I/O error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
