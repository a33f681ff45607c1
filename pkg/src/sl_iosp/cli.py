"""Command-line interface: ``sl-iosp <command> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical nonconvergence.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .core import DomainError, InvalidInput, IospError, NumericalError, ProblemSpec, Regime, classify, validate
from .critical import invert_v
from .forward import SampledPotential, eigenvalue
from .reconstruct import DEFAULT_GRID, MIN_GRID, lp_norm_direct, reconstruct_closed_form, solve_u_ode
from .spectral_error import dilation_residual, z_m

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_TOL = 1e-10
DILATION_THRESHOLD = 1e-7


@dataclass(frozen=True)
class RunConfig:
    spec: ProblemSpec
    grid_n: int = DEFAULT_GRID
    tol: float = DEFAULT_TOL
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        validate(self.spec)
        if self.grid_n < MIN_GRID:
            raise InvalidInput(f"--grid must be >= {MIN_GRID}")
        if not (0.0 < self.tol < 1e-2):
            raise InvalidInput("--tol must lie in (0, 1e-2)")
        if self.format not in ("csv", "json"):
            raise InvalidInput("--format must be csv or json")


@dataclass(frozen=True)
class ErrorReport:
    regime: str
    epsilon: int
    a_m: float
    k: float
    error_formula: float
    error_direct: float
    lambda_recovered: float
    eig_residual: float
    conservation_residual: float

    def to_json(self) -> str:
        return json.dumps({"schema": SCHEMA_VERSION, **asdict(self)}, indent=2)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def resolve_method(spec: ProblemSpec, method: str) -> str:
    if method == "auto":
        return "closed-form" if spec.p == 2 and spec.m == 1 else "ode"
    return method


def reconstruct(spec: ProblemSpec, grid_n: int, tol: float, method: str = "auto"):
    quad_tol = min(tol, 1e-12)
    if resolve_method(spec, method) == "closed-form":
        return reconstruct_closed_form(spec, grid_n, quad_tol)
    return solve_u_ode(spec, grid_n, quad_tol)


def build_report(config: RunConfig, method: str = "auto") -> ErrorReport:
    """Reconstruct, re-solve the forward problem and compare both error routes."""
    spec = config.spec
    regime = classify(spec)
    profile = reconstruct(spec, config.grid_n, config.tol, method)
    formula = z_m(regime.gap, spec.m, spec.p, min(config.tol, 1e-12))
    direct = lp_norm_direct(profile)
    lam = eigenvalue(SampledPotential(profile.q_hat), spec.m, tol=config.tol)
    amp = profile.amplitude
    return ErrorReport(
        regime=regime.regime.value,
        epsilon=regime.epsilon,
        a_m=amp.a_m if amp else 0.0,
        k=amp.k if amp else 0.0,
        error_formula=formula,
        error_direct=direct,
        lambda_recovered=lam,
        eig_residual=abs(lam - spec.lambda_star),
        conservation_residual=profile.conservation_residual(),
    )


# ---------------------------------------------------------------- parsing

def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise InvalidInput(f"bad config line: {raw!r}")
        key, value = (part.strip() for part in line.split(sep, 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _spec_flags(p: argparse.ArgumentParser, with_gap: bool = True) -> None:
    if with_gap:
        p.add_argument("--q0", type=float)
        p.add_argument("--lambda-star", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file mirroring flag names; flags win")
    p.add_argument("--tol", type=float)
    p.add_argument("--format", choices=["text", "json"])
    p.add_argument("--output", "-o")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sl-iosp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("classify", "amplitude", "error"):
        p = sub.add_parser(name)
        _spec_flags(p)
        _common_flags(p)
        if name == "error":
            p.add_argument("--report", action="store_true", help="print the full JSON ErrorReport")
            p.add_argument("--grid", type=int)
            p.add_argument("--method", choices=["auto", "ode", "closed-form"])

    p = sub.add_parser("reconstruct")
    _spec_flags(p)
    _common_flags(p)
    p.add_argument("--grid", type=int)
    p.add_argument("--method", choices=["auto", "ode", "closed-form"])

    p = sub.add_parser("verify")
    _spec_flags(p)
    _common_flags(p)
    p.add_argument("--grid", type=int)
    p.add_argument("--method", choices=["auto", "ode", "closed-form"])
    p.add_argument("--eig-tol", type=float)
    p.add_argument("--norm-tol", type=float)

    p = sub.add_parser("sweep")
    _spec_flags(p, with_gap=False)
    _common_flags(p)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--jobs", type=int)

    p = sub.add_parser("dilation")
    _spec_flags(p, with_gap=False)
    _common_flags(p)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--threshold", type=float)
    return parser


_DEFAULTS = {
    "tol": DEFAULT_TOL,
    "grid": DEFAULT_GRID,
    "method": "auto",
    "eig_tol": 1e-4,
    "norm_tol": 1e-5,
    "x_min": -20.0,
    "x_max": 60.0,
    "steps": 25,
    "threshold": DILATION_THRESHOLD,
    "format": "text",
}


def _merge_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> argparse.Namespace:
    sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
    types = {a.dest: a.type for a in sub._actions if a.dest != "help"}  # noqa: SLF001
    if getattr(args, "config", None):
        for key, value in _read_config(args.config).items():
            if key not in types:
                raise InvalidInput(f"unknown config key {key!r}")
            if getattr(args, key) is None:
                conv = types[key] or str
                try:
                    setattr(args, key, conv(value))
                except ValueError as exc:
                    raise InvalidInput(f"bad value for {key}: {value!r}") from exc
    for key, value in _DEFAULTS.items():
        if key in types and getattr(args, key) is None:
            setattr(args, key, value)
    if not (0.0 < args.tol < 1e-2):
        raise InvalidInput("--tol must lie in (0, 1e-2)")
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise InvalidInput("missing required flag(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _spec_from(args) -> ProblemSpec:
    _require(args, "q0", "lambda_star", "m", "p")
    return validate(ProblemSpec(args.q0, args.lambda_star, args.m, args.p))


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------- commands

def cmd_classify(args) -> int:
    spec = _spec_from(args)
    rc = classify(spec)
    if args.format == "json":
        _emit(json.dumps({"schema": SCHEMA_VERSION, "regime": rc.regime.value,
                          "epsilon": rc.epsilon, "gap": rc.gap}) + "\n", args.output)
    else:
        eps = f"{rc.epsilon:+d}" if rc.epsilon else "0"
        _emit(f"{rc.regime.value}, epsilon={eps}, gap={_fmt(rc.gap)}\n", args.output)
    return EXIT_OK


def cmd_amplitude(args) -> int:
    spec = _spec_from(args)
    rc = classify(spec)
    if rc.regime is Regime.RESONANT:
        raise InvalidInput("resonant gap: q_hat = q0 and there is no amplitude")
    amp = invert_v(spec, min(args.tol, 1e-12))
    payload = {"schema": SCHEMA_VERSION, "regime": rc.regime.value, "epsilon": rc.epsilon,
               "a_m": amp.a_m, "k": amp.k, "bracket_lo": amp.bracket_lo,
               "bracket_hi": amp.bracket_hi, "iterations": amp.iterations}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(f"a_m={_fmt(amp.a_m)}\nk={_fmt(amp.k)}\n", args.output)
    return EXIT_OK


def cmd_error(args) -> int:
    spec = _spec_from(args)
    if args.report:
        config = RunConfig(spec, args.grid, args.tol, args.output, "json")
        _emit(build_report(config, args.method).to_json() + "\n", args.output)
        return EXIT_OK
    value = z_m(spec.gap, spec.m, spec.p, min(args.tol, 1e-12))
    _emit(_fmt(value) + "\n", args.output)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    spec = _spec_from(args)
    config = RunConfig(spec, args.grid, args.tol, args.output)
    profile = reconstruct(spec, config.grid_n, config.tol, args.method)
    rows = ((_fmt(x), _fmt(u), _fmt(q)) for x, u, q in zip(profile.x, profile.u, profile.q_hat))
    _emit(_csv_text(["x", "u", "q_hat"], rows), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _spec_from(args)
    config = RunConfig(spec, args.grid, args.tol, args.output, "json")
    report = build_report(config, args.method)
    _emit(report.to_json() + "\n", args.output)
    eig_ok = report.eig_residual <= args.eig_tol * max(1.0, abs(spec.lambda_star))
    norm_ok = abs(report.error_formula - report.error_direct) <= args.norm_tol * max(1.0, report.error_formula)
    return EXIT_OK if eig_ok and norm_ok else EXIT_VERIFY


def _jobs(requested: int | None) -> int:
    if requested is None:
        env = os.environ.get("SL_IOSP_JOBS")
        try:
            requested = int(env) if env else (os.cpu_count() or 1)
        except ValueError as exc:
            raise InvalidInput(f"SL_IOSP_JOBS must be an integer, got {env!r}") from exc
    if requested < 1:
        raise InvalidInput("--jobs must be >= 1")
    return requested


def _sweep_point(task):
    x, m, p, tol = task
    try:
        return z_m(x, m, p, tol)
    except IospError:
        return None


def sweep_values(xs, m: int, p: float, tol: float = 1e-12, jobs: int = 1) -> list[float | None]:
    tasks = [(float(x), m, p, tol) for x in xs]
    if jobs == 1 or len(tasks) < 2:
        return [_sweep_point(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def cmd_sweep(args) -> int:
    _require(args, "m", "p", "x_min", "x_max", "steps")
    validate(ProblemSpec(0.0, 0.0, args.m, args.p))
    if args.steps < 1:
        raise InvalidInput("--steps must be >= 1")
    xs = np.linspace(args.x_min, args.x_max, args.steps)
    values = sweep_values(xs, args.m, args.p, min(args.tol, 1e-12), _jobs(args.jobs))
    rows = ((_fmt(x), "" if v is None else _fmt(v)) for x, v in zip(xs, values))
    _emit(_csv_text(["gap", "error_lp"], rows), args.output)
    return EXIT_VERIFY if any(v is None for v in values) else EXIT_OK


def cmd_dilation(args) -> int:
    _require(args, "m", "p")
    validate(ProblemSpec(0.0, 0.0, args.m, args.p))
    xs = np.linspace(args.x_min, args.x_max, args.steps)
    worst = max(abs(dilation_residual(float(x), args.m, args.p, min(args.tol, 1e-12))) for x in xs)
    _emit(f"max_residual={_fmt(worst)}\n", args.output)
    return EXIT_OK if worst <= args.threshold else EXIT_VERIFY


COMMANDS = {
    "classify": cmd_classify,
    "amplitude": cmd_amplitude,
    "error": cmd_error,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "dilation": cmd_dilation,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        args = _merge_config(parser, args)
        return COMMANDS[args.command](args)
    except (InvalidInput, DomainError) as exc:
        print(f"sl-iosp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, FloatingPointError) as exc:
        print(f"sl-iosp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"sl-iosp: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
