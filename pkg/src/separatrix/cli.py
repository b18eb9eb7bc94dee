"""Command-line front end.

Every subcommand reads one JSON run configuration (``--config PATH``)
optionally amended by dotted overrides (``--set solver.n_max=8``).  The
configuration has five sections::

    {"problem":    {"family": "master", "V": [0, 0, 1]},
     "integrator": {"x_max": 12.0, ...},
     "initial":    {"y0": 0.0, "yp0": -1.0},
     "solver":     {"n_max": 10, "slope_range": [0, -45], ...},
     "output":     {"format": "csv", "path": "spectrum.csv"}}

Missing fields take the defaults listed in `SOLVER_DEFAULTS` and in
`IntegratorConfig`.  Each artifact records the fully resolved configuration
and a SHA-256 of its content: JSON outputs carry both inline, CSV outputs
get a ``<path>.meta.json`` sidecar so the table itself stays diff-friendly.

Exit codes: 0 success, 1 runtime failure, 2 singularity budget exhausted,
3 insufficient data, 64 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import fields
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .asymptotics import InsufficientData, MixedSigns, fit_power_law
from .eigensolve import (
    EigenvalueRecord,
    _default_length,
    _reducible_potential,
    initial_function_scan,
    linear_spectrum,
    master_initial_data,
    nonlinear_spectrum,
    verify_equivalence,
)
from .integrate import (
    IntegratorConfig,
    Termination,
    Trajectory,
    config_to_dict,
    integrate_extended,
    integrate_riccati,
)
from .problems import (
    Extended,
    Ince,
    PotentialSpec,
    ProblemError,
    Riccati,
    equation_from_dict,
    equation_to_dict,
    master_to_riccati,
)
from .specialfn import exact_eigenfunction, exact_solution

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BUDGET = 2
EXIT_NO_DATA = 3
EXIT_CONFIG = 64

SOLVER_DEFAULTS: dict[str, Any] = {
    "n_max": 8,
    "slope_range": None,
    "slope_tol": 1e-9,
    "L": None,
    "grid_points": 40000,
    "energy_tol": 1e-12,
    "richardson": False,
    "threshold": 1e-6,
    "y0_range": [-10.0, 10.0],
    "grid": 201,
    "slope": 0.0,
    "n_min": None,
    "model": "corrected",
    "spectrum": None,
    "sample_x_max": 5.0,
    "sample_points": 101,
}
INITIAL_DEFAULTS: dict[str, Any] = {"y0": 0.0, "yp0": None}
SECTIONS = ("problem", "integrator", "initial", "solver", "output")
COMMANDS = ("integrate", "spectrum", "linear", "verify", "scan-initial-function", "fit", "exact")


class ConfigError(Exception):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


# -- configuration -------------------------------------------------------------

def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(doc: dict, assignment: str) -> None:
    """Apply ``section.key=value``; the value is parsed as JSON when possible."""
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like section.key=value")
    path, text = assignment.split("=", 1)
    parts = path.strip().split(".")
    if parts[0] not in SECTIONS:
        raise ConfigError(path, f"unknown section; expected one of {SECTIONS}")
    node = doc
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(path, "cannot descend into a non-object value")
    node[parts[-1]] = _parse_value(text)


def load_config(path: str | None, overrides: list[str]) -> dict:
    doc: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("--config", "top level must be a JSON object")
    for ov in overrides:
        apply_override(doc, ov)
    for key in doc:
        if key not in SECTIONS:
            raise ConfigError(key, f"unknown section; expected one of {SECTIONS}")
    return doc


def _problem(doc: dict):
    if "problem" not in doc:
        raise ConfigError("problem", "missing problem definition")
    try:
        return equation_from_dict(doc["problem"])
    except ProblemError as exc:
        raise ConfigError(f"problem.{exc.key}", str(exc)) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError("problem", str(exc)) from None


_INT_FIELDS = {"max_singularities"}
_BOOL_FIELDS = {"stop_on_capture"}


def _integrator(doc: dict, eq=None) -> IntegratorConfig:
    given = doc.get("integrator", {})
    if not isinstance(given, dict):
        raise ConfigError("integrator", "must be a JSON object")
    known = {f.name for f in fields(IntegratorConfig)}
    values: dict[str, Any] = {}
    if eq is not None and "x_max" not in given:
        values["x_max"] = 12.0 if _reducible_potential(eq) is not None else 20.0
    for key, v in given.items():
        if key not in known:
            raise ConfigError(f"integrator.{key}", "unknown integrator field")
        try:
            if key in _BOOL_FIELDS:
                if not isinstance(v, bool):
                    raise TypeError
                values[key] = v
            elif key in _INT_FIELDS:
                values[key] = int(v)
            else:
                values[key] = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"integrator.{key}", f"bad value {v!r}") from None
    try:
        return IntegratorConfig(**values)
    except ProblemError as exc:
        raise ConfigError(f"integrator.{exc.key}", str(exc)) from None


def _section(doc: dict, name: str, defaults: dict) -> dict:
    given = doc.get(name, {})
    if not isinstance(given, dict):
        raise ConfigError(name, "must be a JSON object")
    for key in given:
        if key not in defaults:
            raise ConfigError(f"{name}.{key}", f"unknown {name} field")
    out = dict(defaults)
    out.update(given)
    return out


def _output(doc: dict, command: str) -> dict:
    out = _section(doc, "output", {"format": "csv", "path": None})
    if out["format"] not in ("csv", "json"):
        raise ConfigError("output.format", "expected 'csv' or 'json'")
    if out["path"] is None:
        out["path"] = f"{command}.{out['format']}"
    return out


def _number(solver: dict, key: str, kind=float, section: str = "solver") -> Any:
    v = solver[key]
    if v is None:
        raise ConfigError(f"{section}.{key}", "required for this command")
    try:
        if kind is int and (isinstance(v, bool) or float(v) != int(v)):
            raise ValueError
        return kind(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}", f"bad value {v!r}") from None


def _pair(solver: dict, key: str) -> tuple[float, float]:
    v = solver[key]
    if v is None:
        raise ConfigError(f"solver.{key}", "required for this command")
    try:
        a, b = (float(t) for t in v)
    except (TypeError, ValueError):
        raise ConfigError(f"solver.{key}", "expected a pair of numbers") from None
    return a, b


def _potential(eq):
    V = _reducible_potential(eq)
    if V is None:
        raise ConfigError("problem.family", "command needs a Riccati-reducible problem")
    try:
        V.require_confining()
    except ProblemError as exc:
        raise ConfigError("problem.V", str(exc)) from None
    return V


# -- artifacts -------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (bool, int)) and not isinstance(v, float):
        return str(int(v))
    # adding 0.0 folds -0.0 into 0.0
    return format(float(v) + 0.0, ".12g")


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


class Artifacts:
    """Collects output files and writes them with their provenance."""

    def __init__(self, command: str, resolved: dict):
        self.command = command
        self.resolved = resolved
        self.files: dict[Path, str] = {}
        self.summary: dict[str, Any] = {}

    def add_csv(self, path: Path, header: list[str], rows: list[list]) -> None:
        self.files[path] = _csv_text(header, rows)

    def add_json(self, path: Path, data) -> None:
        body = json.dumps(data, sort_keys=True, separators=(",", ":"))
        doc = {
            "command": self.command,
            "config": self.resolved,
            "version": __version__,
            "sha256": _sha(body),
            "data": data,
        }
        if self.summary:
            doc["summary"] = self.summary
        self.files[path] = _dumps(doc)

    def write(self) -> list[Path]:
        written = []
        csvs = {p: t for p, t in self.files.items() if p.suffix == ".csv"}
        for path, text in self.files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            written.append(path)
        for path, text in csvs.items():
            meta = {
                "command": self.command,
                "config": self.resolved,
                "version": __version__,
                "file": path.name,
                "sha256": _sha(text),
            }
            if self.summary:
                meta["summary"] = self.summary
            mpath = path.with_name(path.name + ".meta.json")
            mpath.write_text(_dumps(meta))
            written.append(mpath)
        return written


def _sibling(path: Path, tag: str, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{tag}{suffix}")


_SPECTRUM_HEADER = ["n", "slope", "implied_energy", "bracket_width", "residual"]


def _spectrum_rows(records: list[EigenvalueRecord]) -> list[list]:
    return [[r.n, r.slope, r.implied_energy, r.bracket_width, r.residual] for r in records]


def _emit_records(art: Artifacts, out: dict, records: list[EigenvalueRecord]) -> None:
    path = Path(out["path"])
    if out["format"] == "csv":
        art.add_csv(path, _SPECTRUM_HEADER, _spectrum_rows(records))
    else:
        art.add_json(path, [r.to_dict() for r in records])


# -- commands --------------------------------------------------------------------

def _run_trajectory(eq, init: dict, cfg: IntegratorConfig) -> Trajectory:
    if isinstance(eq, Extended):
        if init["yp0"] is None:
            raise ConfigError("initial.yp0", "required for extended problems")
        y0 = _number(init, "y0", section="initial")
        return integrate_extended(eq, y0, _number(init, "yp0", section="initial"), cfg)
    y0 = _number(init, "y0", section="initial")
    if isinstance(eq, Riccati):
        return integrate_riccati(eq.V, eq.E, y0, cfg, with_slope=True)
    V = _reducible_potential(eq)
    if init["yp0"] is None:
        raise ConfigError("initial.yp0", "required for second-order problems")
    ym, sm = master_initial_data(eq, y0, _number(init, "yp0", section="initial"))
    traj = integrate_riccati(V, master_to_riccati(V, ym, sm), ym, cfg, with_slope=True)
    if isinstance(eq, Ince):
        # report W = y + q/2 and W' = y' + q'/2
        q = PotentialSpec(eq.q)
        traj.y = traj.y + np.array([0.5 * q(x) for x in traj.x])
        traj.yprime = traj.yprime + np.array([0.5 * q.derivative(x) for x in traj.x])
    return traj


def cmd_integrate(doc: dict) -> tuple[Artifacts, int]:
    eq = _problem(doc)
    cfg = _integrator(doc, eq)
    init = _section(doc, "initial", INITIAL_DEFAULTS)
    out = _output(doc, "integrate")
    resolved = {
        "problem": equation_to_dict(eq),
        "integrator": config_to_dict(cfg),
        "initial": init,
        "output": out,
    }
    traj = _run_trajectory(eq, init, cfg)
    art = Artifacts("integrate", resolved)
    art.summary = {"terminated": traj.terminated.value, "singularities": traj.pole_count, "x_end": traj.x_end}
    path = Path(out["path"])
    yp = traj.yprime
    rows = [[traj.x[i], traj.y[i], None if yp is None else yp[i]] for i in range(len(traj.x))]
    events = [ev.to_dict() for ev in traj.events]
    if out["format"] == "csv":
        art.add_csv(path, ["x", "y", "yprime"], rows)
        art.add_json(_sibling(path, "events", ".json"), events)
    else:
        art.add_json(path, {"x": traj.x.tolist(), "y": traj.y.tolist(),
                            "yprime": None if yp is None else yp.tolist(), "events": events})
    if traj.terminated is Termination.SINGULAR_BUDGET_EXHAUSTED:
        return art, EXIT_BUDGET
    if traj.terminated is Termination.STEP_UNDERFLOW:
        return art, EXIT_FAILURE
    return art, EXIT_OK


def _solver_resolved(solver: dict, keys: tuple[str, ...]) -> dict:
    return {k: solver[k] for k in keys}


def cmd_spectrum(doc: dict) -> tuple[Artifacts, int]:
    eq = _problem(doc)
    cfg = _integrator(doc, eq).with_(stop_on_capture=True)
    solver = _section(doc, "solver", SOLVER_DEFAULTS)
    out = _output(doc, "spectrum")
    n_max = _number(solver, "n_max", int)
    rng = _pair(solver, "slope_range")
    tol = _number(solver, "slope_tol")
    init = _section(doc, "initial", INITIAL_DEFAULTS)
    y0 = _number(init, "y0", section="initial")
    resolved = {
        "problem": equation_to_dict(eq),
        "integrator": config_to_dict(cfg),
        "initial": {"y0": y0},
        "solver": {"n_max": n_max, "slope_range": list(rng), "slope_tol": tol},
        "output": out,
    }
    records = nonlinear_spectrum(eq, n_max, rng, cfg, tol, y0=y0)
    art = Artifacts("spectrum", resolved)
    _emit_records(art, out, records)
    return art, EXIT_OK


def cmd_linear(doc: dict) -> tuple[Artifacts, int]:
    eq = _problem(doc)
    V = _potential(eq)
    solver = _section(doc, "solver", SOLVER_DEFAULTS)
    out = _output(doc, "linear")
    n_max = _number(solver, "n_max", int)
    L = _default_length(V, n_max) if solver["L"] is None else _number(solver, "L")
    pts = _number(solver, "grid_points", int)
    etol = _number(solver, "energy_tol")
    rich = bool(solver["richardson"])
    resolved = {
        "problem": equation_to_dict(eq),
        "solver": {"n_max": n_max, "L": L, "grid_points": pts, "energy_tol": etol, "richardson": rich},
        "output": out,
    }
    levels = linear_spectrum(V, n_max, L, pts, etol, richardson=rich)
    art = Artifacts("linear", resolved)
    path = Path(out["path"])
    if out["format"] == "csv":
        rows = [[lv.n, lv.energy, lv.nodes, lv.outer_amplitude_sign, lv.richardson_error] for lv in levels]
        art.add_csv(path, ["n", "energy", "nodes", "outer_amplitude_sign", "richardson_error"], rows)
    else:
        art.add_json(path, [
            {"n": lv.n, "energy": lv.energy, "nodes": lv.nodes,
             "outer_amplitude_sign": lv.outer_amplitude_sign,
             "richardson_error": None if math.isnan(lv.richardson_error) else lv.richardson_error}
            for lv in levels
        ])
    return art, EXIT_OK


def cmd_verify(doc: dict) -> tuple[Artifacts, int]:
    eq = _problem(doc)
    V = _potential(eq)
    cfg = _integrator(doc, eq).with_(stop_on_capture=True)
    solver = _section(doc, "solver", SOLVER_DEFAULTS)
    out = _output(doc, "verify")
    n_max = _number(solver, "n_max", int)
    rng = None if solver["slope_range"] is None else _pair(solver, "slope_range")
    L = _default_length(V, n_max) if solver["L"] is None else _number(solver, "L")
    pts = _number(solver, "grid_points", int)
    etol = _number(solver, "energy_tol")
    tol = _number(solver, "slope_tol")
    threshold = _number(solver, "threshold")
    records = verify_equivalence(eq, n_max, rng, cfg, tol, L, pts, etol)
    worst = max(r.residual for r in records)
    resolved = {
        "problem": equation_to_dict(eq),
        "integrator": config_to_dict(cfg),
        "solver": {
            "n_max": n_max,
            "slope_range": None if rng is None else list(rng),
            "slope_tol": tol,
            "L": L,
            "grid_points": pts,
            "energy_tol": etol,
            "threshold": threshold,
        },
        "output": out,
    }
    art = Artifacts("verify", resolved)
    art.summary = {"max_residual": worst, "passed": worst < threshold}
    _emit_records(art, out, records)
    return art, EXIT_OK if worst < threshold else EXIT_FAILURE


def cmd_scan(doc: dict) -> tuple[Artifacts, int]:
    eq = _problem(doc)
    V = _potential(eq)
    cfg = _integrator(doc, eq)
    solver = _section(doc, "solver", SOLVER_DEFAULTS)
    out = _output(doc, "scan-initial-function")
    rng = _pair(solver, "y0_range")
    grid = _number(solver, "grid", int)
    if grid < 2:
        raise ConfigError("solver.grid", "need at least 2 grid points")
    slope = _number(solver, "slope")
    resolved = {
        "problem": equation_to_dict(eq),
        "integrator": config_to_dict(cfg),
        "solver": {"y0_range": list(rng), "grid": grid, "slope": slope},
        "output": out,
    }
    pairs = initial_function_scan(V, rng, grid, cfg, slope)
    art = Artifacts("scan-initial-function", resolved)
    art.summary = {"transitions": len(pairs)}
    path = Path(out["path"])
    rows = [[a, ca, b, cb] for (a, ca), (b, cb) in pairs]
    if out["format"] == "csv":
        art.add_csv(path, ["y0_a", "count_a", "y0_b", "count_b"], rows)
    else:
        art.add_json(path, [dict(zip(("y0_a", "count_a", "y0_b", "count_b"), r)) for r in rows])
    return art, EXIT_OK


def read_spectrum(path: str | Path) -> list[EigenvalueRecord]:
    """Load records from a spectrum CSV or JSON artifact (or a bare JSON list)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        doc = json.loads(text)
        if isinstance(doc, dict):
            doc = doc["data"]
        return [EigenvalueRecord.from_dict(d) for d in doc]
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        out.append(EigenvalueRecord(
            n=int(row["n"]),
            slope=float(row["slope"]),
            implied_energy=float(row["implied_energy"]) if row.get("implied_energy") else None,
            bracket_width=float(row["bracket_width"]) if row.get("bracket_width") else math.nan,
            pole_counts=(int(row["n"]), int(row["n"]) + 1),
            residual=float(row["residual"]) if row.get("residual") else None,
        ))
    return out


def cmd_fit(doc: dict) -> tuple[Artifacts, int]:
    solver = _section(doc, "solver", SOLVER_DEFAULTS)
    out = _section(doc, "output", {"format": "json", "path": None})
    if out["format"] != "json":
        raise ConfigError("output.format", "fit reports are JSON only")
    if out["path"] is None:
        out["path"] = "fit.json"
    src = solver["spectrum"]
    if src is None:
        raise ConfigError("solver.spectrum", "path of the spectrum file to fit is required")
    try:
        records = read_spectrum(src)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise ConfigError("solver.spectrum", f"cannot read spectrum: {exc}") from None
    n_min = None if solver["n_min"] is None else _number(solver, "n_min", int)
    model = solver["model"]
    if model not in ("corrected", "ols"):
        raise ConfigError("solver.model", "expected 'corrected' or 'ols'")
    fit = fit_power_law(records, n_min, model)
    resolved = {"solver": {"spectrum": str(src), "n_min": n_min, "model": model}, "output": out}
    art = Artifacts("fit", resolved)
    art.add_json(Path(out["path"]), fit.to_dict())
    return art, EXIT_OK


def cmd_exact(doc: dict) -> tuple[Artifacts, int]:
    solver = _section(doc, "solver", SOLVER_DEFAULTS)
    out = _output(doc, "exact")
    n_max = _number(solver, "n_max", int)
    if n_max < 0:
        raise ConfigError("solver.n_max", "must be nonnegative")
    x_hi = _number(solver, "sample_x_max")
    pts = _number(solver, "sample_points", int)
    resolved = {
        "problem": {"family": "master", "V": [0.0, 0.0, 1.0]},
        "solver": {"n_max": n_max, "sample_x_max": x_hi, "sample_points": pts},
        "output": out,
    }
    art = Artifacts("exact", resolved)
    path = Path(out["path"])
    rows = []
    for n in range(n_max + 1):
        sol = exact_solution(n)
        rows.append([n, sol.slope_at_origin, sol.energy])
    xs = [x_hi * i / (pts - 1) for i in range(pts)] if pts > 1 else [0.0]
    samples = {n: [[x, exact_eigenfunction(n, x)] for x in xs] for n in range(n_max + 1)}
    if out["format"] == "csv":
        art.add_csv(path, ["n", "slope", "energy"], rows)
        for n, s in samples.items():
            art.add_csv(_sibling(path, f"y{n}", ".csv"), ["x", "y"], s)
    else:
        art.add_json(path, {
            "levels": [dict(zip(("n", "slope", "energy"), r)) for r in rows],
            "eigenfunctions": {str(n): s for n, s in samples.items()},
        })
    return art, EXIT_OK


_HANDLERS = {
    "integrate": cmd_integrate,
    "spectrum": cmd_spectrum,
    "linear": cmd_linear,
    "verify": cmd_verify,
    "scan-initial-function": cmd_scan,
    "fit": cmd_fit,
    "exact": cmd_exact,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="separatrix",
        description="Nonlinear initial-slope eigenvalue problems and their linear counterparts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field, e.g. solver.n_max=8 (repeatable)")
        if name == "fit":
            p.add_argument("spectrum", nargs="?", help="spectrum CSV or JSON (solver.spectrum)")
            p.add_argument("--n-min", type=int, help="smallest index in the fit (solver.n_min)")
        if name == "exact":
            p.add_argument("--n-max", type=int, help="highest level (solver.n_max)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_config(args.config, args.overrides)
        solver = doc.setdefault("solver", {})
        if getattr(args, "spectrum", None) is not None:
            solver["spectrum"] = args.spectrum
        if getattr(args, "n_min", None) is not None:
            solver["n_min"] = args.n_min
        if getattr(args, "n_max", None) is not None:
            solver["n_max"] = args.n_max
        if not solver:
            del doc["solver"]
        art, code = _HANDLERS[args.command](doc)
    except ConfigError as exc:
        print(f"separatrix {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProblemError as exc:
        key = exc.key or "problem"
        print(f"separatrix {args.command}: config key '{key}': {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InsufficientData, MixedSigns) as exc:
        print(f"separatrix {args.command}: {exc}", file=sys.stderr)
        return EXIT_NO_DATA
    except (RuntimeError, ArithmeticError, ValueError, NotImplementedError) as exc:
        print(f"separatrix {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    for path in art.write():
        print(path)
    if art.summary:
        print(json.dumps(art.summary, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
