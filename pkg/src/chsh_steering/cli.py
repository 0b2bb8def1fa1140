"""Command-line front end.

Subcommands: eval, optimize, sweep, bound-scan, jm, lhs. JSON goes to stdout
(or --out); sweeps write a CSV (or JSON) plus a companion plot script.

Exit codes: 0 success, 2 input error, 3 I/O error, 4 bound violation,
5 solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import files
from .correlations import CorrelationTable, chsh_value, correlation_table, steering_value
from .joint import global_eta_opt, jm_report
from .lhs import LpFailure, lhs_membership
from .measurements import DichotomicObservable, MeasurementScenario, MubPair
from .optimizer import OptConfig, optimize, sweep, threshold_crossing, uniform_grid
from .quantum import StateError, TwoQubitState, phi_plus, pure_schmidt_state, singlet, werner_state
from .scan import BoundViolation, bound_scan

log = logging.getLogger("chsh_steering")

OUT_DIR_ENV = "CHSH_STEERING_OUT_DIR"

DEFAULTS = {
    "restarts": 64,
    "seed": 42,
    "tol": 1e-10,
    "max_iters": 2000,
    "ngon": 256,
    "grid": 101,
    "range": "0:1",
    "samples": 100_000,
    "format": None,
    "workers": 1,
    "eta": 1.0,
}

EXIT_INPUT, EXIT_IO, EXIT_BOUND, EXIT_SOLVER = 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- parsing


def parse_vector(text: str, name: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise CliError(f"{name}: expected three comma-separated numbers, got {text!r}")
    if len(parts) != 3 or not all(math.isfinite(p) for p in parts):
        raise CliError(f"{name}: expected three finite comma-separated numbers, got {text!r}")
    return np.array(parts)


def _unit(text: str, name: str) -> np.ndarray:
    """Parse a direction; norms within 1e-6 of 1 are renormalized (typed decimals)."""
    v = parse_vector(text, name)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-6:
        raise CliError(f"{name}: direction must be a unit vector (norm {norm:.12g})")
    return v / norm


def _param(body: str, key: str) -> float:
    value = body.split("=", 1)[1] if "=" in body else body
    name = body.split("=", 1)[0] if "=" in body else key
    if name != key:
        raise CliError(f"expected parameter {key!r}, got {name!r}")
    try:
        return float(value)
    except ValueError:
        raise CliError(f"could not parse {key} from {body!r}")


def parse_state(spec: str | None) -> TwoQubitState:
    """pure:a=0.6 | werner:w=0.8 | singlet | phiplus | file:PATH"""
    if not spec:
        raise CliError("a state is required (--state)")
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "pure":
            return pure_schmidt_state(_param(body, "a"))
        if kind == "werner":
            return werner_state(_param(body, "w"))
        if kind == "singlet":
            return singlet()
        if kind in ("phiplus", "phi+"):
            return phi_plus()
        if kind == "file":
            path = body.split("=", 1)[1] if body.startswith("path=") else body
            try:
                return files.load_state_file(path)
            except OSError as exc:
                raise CliError(f"cannot read state file: {exc}", EXIT_IO)
    except (StateError, ValueError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(f"invalid state {spec!r}: {exc}")
    raise CliError(f"unknown state kind {kind!r}; use pure, werner, singlet, phiplus or file")


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise CliError(f"--range must look like lo:hi, got {text!r}")
    if not (0.0 <= lo <= hi <= 1.0):
        raise CliError(f"--range must satisfy 0 <= lo <= hi <= 1, got {text!r}")
    return lo, hi


def load_config(path: str | None) -> dict:
    """Flat ``key = value`` text; '#' starts a comment. Keys match flag names."""
    if not path:
        return {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}", EXIT_IO)
    out = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from DEFAULTS."""
    cfg = load_config(args.config)
    args.defaulted = set()
    for key, value in list(vars(args).items()):
        if value is not None or key in ("command", "config", "func", "defaulted"):
            continue
        if key in cfg:
            default = DEFAULTS.get(key)
            raw = cfg[key]
            if isinstance(default, bool) or key in ("scan", "inject_optimal"):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(default, int):
                value = int(float(raw))
            elif isinstance(default, float):
                value = float(raw)
            else:
                value = raw
        else:
            value = DEFAULTS.get(key)
            args.defaulted.add(key)
        setattr(args, key, value)
    for key in ("restarts", "grid", "samples", "workers", "max_iters"):
        v = getattr(args, key, None)
        if v is not None and v < 1:
            raise CliError(f"--{key.replace('_', '-')} must be at least 1")
    if getattr(args, "ngon", None) is not None and args.ngon < 8:
        raise CliError("--ngon must be at least 8")
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        raise CliError("--tol must be positive")
    return args


def opt_config(args) -> OptConfig:
    return OptConfig(restarts=args.restarts, seed=args.seed, tol=args.tol, max_iters=args.max_iters)


def scenario_from_args(args) -> MeasurementScenario:
    missing = [f for f in ("a1", "a2", "b1", "b2") if getattr(args, f) is None]
    if missing:
        raise CliError("missing measurement directions: " + ", ".join("--" + m for m in missing))
    m, n = _unit(args.a1, "--a1"), _unit(args.a2, "--a2")
    c, d = _unit(args.b1, "--b1"), _unit(args.b2, "--b2")
    eta = float(args.eta)
    if not (0.0 < eta <= 1.0):
        raise CliError("--eta must lie in (0, 1]")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            bob = MubPair.orthonormalized(c, d)
        for w in caught:
            log.warning("%s", w.message)
    except ValueError as exc:
        raise CliError(f"invalid Bob directions {c.tolist()}, {d.tolist()}: {exc}")
    return MeasurementScenario((DichotomicObservable(m, eta), DichotomicObservable(n, eta)), bob)


def emit(record: dict, out: str | None) -> None:
    text = json.dumps(_rounded(record), indent=2)
    if out:
        try:
            Path(out).write_text(text + "\n")
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO)
    else:
        print(text)


def _rounded(obj):
    if isinstance(obj, float):
        return files.round_sig(obj) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


# --------------------------------------------------------------- commands


def table_record(t: CorrelationTable) -> dict:
    s = steering_value(t)
    return {**t.to_dict(), "S": s, "CHSH": chsh_value(t), "violated": bool(s > 2.0)}


def cmd_eval(args) -> int:
    state = parse_state(args.state)
    scenario = scenario_from_args(args)
    record = table_record(correlation_table(state, scenario))
    record["bob"] = [scenario.bob.c.tolist(), scenario.bob.d.tolist()]
    emit(record, args.out)
    return 0


def cmd_optimize(args) -> int:
    state = parse_state(args.state)
    res = optimize(state, opt_config(args))
    emit({"state": args.state, **res.to_dict(), "seed": args.seed}, args.out)
    return 0


def _default_out(family: str, fmt: str) -> Path:
    base = Path(os.environ.get(OUT_DIR_ENV, "."))
    return base / f"sweep_{family}.{fmt}"


def cmd_sweep(args) -> int:
    family = args.family
    if family not in ("pure", "werner"):
        raise CliError("--family must be pure or werner")
    lo, hi = parse_range(args.range)
    grid = uniform_grid(args.grid, lo, hi)
    fmt = args.format or (Path(args.out).suffix.lstrip(".") if args.out else "csv")
    if fmt not in ("csv", "json"):
        raise CliError(f"--format must be csv or json, got {fmt!r}")
    out = Path(args.out) if args.out else _default_out(family, fmt)
    if not out.parent.is_dir():
        raise CliError(f"output directory {out.parent} does not exist", EXIT_IO)
    rows = sweep(family, grid, opt_config(args), workers=args.workers)
    try:
        if fmt == "csv":
            files.write_sweep_csv(rows, out)
            script = files.write_plot_script(out, family)
        else:
            files.write_sweep_json(rows, out, family)
            script = None
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_IO)
    best = max(rows, key=lambda r: r.s_opt)
    summary = {
        "family": family,
        "points": len(rows),
        "output": str(out),
        "plot_script": str(script) if script else None,
        "max_s_opt": best.s_opt,
        "argmax_param": best.param,
        "all_converged": all(r.converged for r in rows),
    }
    if family == "werner":
        summary["crossing_of_2"] = threshold_crossing(rows)
    print(json.dumps(_rounded(summary), indent=2))
    return 0


def cmd_bound_scan(args) -> int:
    try:
        summary = bound_scan(args.samples, args.seed, inject_optimal=bool(args.inject_optimal))
    except BoundViolation as exc:
        raise CliError(str(exc), EXIT_BOUND)
    emit(summary.to_dict(), args.out)
    return 0


def cmd_jm(args) -> int:
    if args.scan:
        samples = 10_000 if "samples" in args.defaulted else args.samples
        val = global_eta_opt(samples, args.seed)
        emit({"samples": samples, "seed": args.seed, "eta_opt": val, "reference": 1 / math.sqrt(2)}, args.out)
        return 0
    if args.a1 is None or args.a2 is None:
        raise CliError("jm needs --a1 and --a2, or --scan")
    report = jm_report(_unit(args.a1, "--a1"), _unit(args.a2, "--a2"))
    emit(report.to_dict(), args.out)
    return 0


def cmd_lhs(args) -> int:
    if args.E is not None:
        try:
            E = np.array([float(p) for p in args.E.split(",")]).reshape(2, 2)
        except ValueError:
            raise CliError("--E expects four comma-separated correlators E11,E12,E21,E22")
        if np.any(np.abs(E) > 1.0):
            raise CliError("correlators must lie in [-1, 1]")
    else:
        state = parse_state(args.state)
        E = correlation_table(state, scenario_from_args(args)).E
    try:
        res = lhs_membership(E, args.ngon)
    except LpFailure as exc:
        raise CliError(str(exc), EXIT_SOLVER)
    emit({"E": E.tolist(), **res.to_dict(), "S_le_2": bool(res.s_value <= 2.0)}, args.out)
    return 0


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags take precedence")
    common.add_argument("--out", help="output path (default: stdout, or sweep_<family>.csv)")
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", help="pure:a=A | werner:w=W | singlet | phiplus | file:PATH")

    dirs = argparse.ArgumentParser(add_help=False)
    for flag, what in (("a1", "Alice 1"), ("a2", "Alice 2"), ("b1", "Bob 1"), ("b2", "Bob 2")):
        dirs.add_argument(f"--{flag}", help=f"{what} direction as x,y,z")
    dirs.add_argument("--eta", type=float, help="Alice's sharpness (default 1)")

    opt = argparse.ArgumentParser(add_help=False)
    opt.add_argument("--restarts", type=int)
    opt.add_argument("--tol", type=float)
    opt.add_argument("--max-iters", type=int, dest="max_iters")

    p = argparse.ArgumentParser(prog="chsh-steering", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common, state, dirs], help="evaluate S for given settings")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("optimize", parents=[common, state, opt], help="maximize S over settings")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("sweep", parents=[common, opt], help="optimal S along a state family")
    s.add_argument("--family", choices=("pure", "werner"), required=True)
    s.add_argument("--grid", type=int, help="number of grid points (default 101)")
    s.add_argument("--range", help="lo:hi (default 0:1)")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("bound-scan", parents=[common], help="random search against 2*sqrt(2)")
    s.add_argument("--samples", type=int)
    s.add_argument("--inject-optimal", action="store_true", default=None, dest="inject_optimal",
                   help="append the saturating phi+ sample")
    s.set_defaults(func=cmd_bound_scan)

    s = sub.add_parser("jm", parents=[common], help="joint measurability of two directions")
    s.add_argument("--a1")
    s.add_argument("--a2")
    s.add_argument("--scan", action="store_true", default=None, help="estimate eta_opt by sampling")
    s.add_argument("--samples", type=int)
    s.set_defaults(func=cmd_jm)

    s = sub.add_parser("lhs", parents=[common, state, dirs], help="LHS membership of correlators")
    s.add_argument("--E", help="E11,E12,E21,E22")
    s.add_argument("--ngon", type=int)
    s.set_defaults(func=cmd_lhs)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        resolve(args)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
