"""Command-line interface: reproducible checks, runs, verifications, sweeps.

Commands
  check     evaluate a blowup criterion on a scenario file
  simulate  run the finite-volume solver, write snapshot and series CSVs
  verify    run a simulation and apply verification checks to its trace
  sweep     evaluate a criterion across a parameter range (concurrent rows)
  report    summarize the artifacts found in an output directory

Scenario files are flat ``key = value`` text with dotted keys:

    preset = ref-1d              # optional starting preset
    eos.K = 1.0
    eos.gamma = 2.0
    eos.rho_bar = 1.0
    geometry = radial3           # cartesian1d | radial<N>
    R = 1.0
    amp_rho = 0.01
    amp_v = 0.02
    grid.extent = 2.2
    grid.cells = 4096
    detector.slope_factor = 0.2
    detector.dt_floor = 1e-10
    detector.sample_interval = 0.01

Exit codes: 0 success (any verdict), 2 invalid input or config, 3
verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import (
    FAMILY_GENERAL_1D,
    FAMILY_GENERAL_RADIAL,
    FAMILY_LINEAR_1D,
    FAMILY_LINEAR_1D_TAU,
    FAMILY_POWER_RADIAL,
    run_family_check,
    theorem_context,
)
from .model import (
    DetectorParams,
    EosParams,
    Geometry,
    GridSpec,
    Scenario,
    TestingFunction,
    exponential,
    linear,
    make_bump_scenario,
    power_law,
)
from .scenarios import PRESETS
from .solver import SolverConfig, run
from .verify import (
    CHECK_CHARACTERISTIC,
    CHECK_CONE,
    CHECK_INEQUALITY,
    CHECK_MASS,
    CHECK_POSITIVITY,
    CHECK_PROPAGATION,
    TRACE_CHECKS,
    check_characteristic_density,
    check_cone_energy,
    check_differential_inequality,
    check_finite_propagation,
    check_mass_conservation,
    check_positivity,
    summary_table,
)

FAMILIES = (
    FAMILY_GENERAL_RADIAL,
    FAMILY_GENERAL_1D,
    FAMILY_POWER_RADIAL,
    FAMILY_LINEAR_1D_TAU,
    FAMILY_LINEAR_1D,
)

SWEEPABLE = ("amp_v", "amp_rho", "tau", "gamma", "R")

# test hook: when set, applied to the trace before verification checks run
TRACE_TRANSFORM = None

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_VERIFY_FAILED = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Scenario files


def parse_config(text: str) -> dict:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    cfg: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        cfg[key] = value
    return cfg


def _as_float(cfg: dict, key: str, default: float) -> float:
    if key not in cfg:
        return default
    try:
        return float(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: not a number: {cfg[key]!r}") from exc


def _as_int(cfg: dict, key: str, default: int) -> int:
    if key not in cfg:
        return default
    try:
        return int(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: not an integer: {cfg[key]!r}") from exc


def parse_geometry(label: str) -> Geometry:
    if label == "cartesian1d":
        return Geometry.cartesian1d()
    m = re.fullmatch(r"radial(\d+)", label)
    if m:
        try:
            return Geometry.radial(int(m.group(1)))
        except ValueError as exc:
            raise ConfigError(f"geometry: {exc}") from exc
    raise ConfigError(f"geometry: expected cartesian1d or radial<N>, got {label!r}")


def scenario_to_config(scen: Scenario) -> dict:
    return {
        "eos.K": scen.eos.K,
        "eos.gamma": scen.eos.gamma,
        "eos.rho_bar": scen.eos.rho_bar,
        "geometry": scen.geometry.label(),
        "R": scen.R,
        "amp_rho": scen.amp_rho,
        "amp_v": scen.amp_v,
        "grid.extent": scen.grid.extent,
        "grid.cells": scen.grid.cells,
        "detector.slope_factor": scen.detector.slope_factor,
        "detector.dt_floor": scen.detector.dt_floor,
        "detector.sample_interval": scen.detector.sample_interval,
    }


_KNOWN_KEYS = {
    "preset",
    "eos.K",
    "eos.gamma",
    "eos.rho_bar",
    "geometry",
    "R",
    "amp_rho",
    "amp_v",
    "grid.extent",
    "grid.cells",
    "detector.slope_factor",
    "detector.dt_floor",
    "detector.sample_interval",
}


def scenario_from_config(cfg: dict) -> Scenario:
    unknown = set(cfg) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    base: dict = {}
    if "preset" in cfg:
        name = str(cfg["preset"])
        if name not in PRESETS:
            raise ConfigError(
                f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
            )
        base = {k: str(v) for k, v in scenario_to_config(PRESETS[name]()).items()}
    merged = {**base, **{k: v for k, v in cfg.items() if k != "preset"}}
    geometry = parse_geometry(str(merged.get("geometry", "cartesian1d")))
    eos = EosParams(
        K=_as_float(merged, "eos.K", 1.0),
        gamma=_as_float(merged, "eos.gamma", 2.0),
        rho_bar=_as_float(merged, "eos.rho_bar", 1.0),
    )
    detector = DetectorParams(
        slope_factor=_as_float(merged, "detector.slope_factor", 0.2),
        dt_floor=_as_float(merged, "detector.dt_floor", 1e-10),
        sample_interval=_as_float(merged, "detector.sample_interval", 0.01),
    )
    grid = GridSpec(
        extent=_as_float(merged, "grid.extent", 2.2),
        cells=_as_int(merged, "grid.cells", 4096),
    )
    return make_bump_scenario(
        eos=eos,
        geometry=geometry,
        R=_as_float(merged, "R", 1.0),
        amp_rho=_as_float(merged, "amp_rho", 0.0),
        amp_v=_as_float(merged, "amp_v", 0.0),
        grid=grid,
        detector=detector,
    )


def load_scenario(path: str) -> Scenario:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"scenario file not found: {path}")
    return scenario_from_config(parse_config(p.read_text()))


def parse_weight(spec: str | None) -> TestingFunction | None:
    """Weight spec: 'linear', 'power:<n>' or 'exp:<beta>'."""
    if spec is None:
        return None
    if spec == "linear":
        return linear()
    head, _, arg = spec.partition(":")
    try:
        if head == "power":
            return power_law(float(arg or 2.0))
        if head == "exp":
            return exponential(float(arg or 1.0))
    except ValueError as exc:
        raise ConfigError(f"bad weight spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown weight spec {spec!r}")


# ---------------------------------------------------------------------------
# Artifacts


def _write_invocation(out_dir: Path, argv: list[str]) -> None:
    record = {"argv": list(argv), "version": __version__}
    with open(out_dir / "invocation.json", "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def snapshot_csv(snap, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r_or_x", "rho", "V"])
        for x, rho, V in zip(snap.centers, snap.rho, snap.V):
            writer.writerow([f"{x:.17g}", f"{rho:.17g}", f"{V:.17g}"])


def _trace_summary(trace) -> dict:
    return {
        "scenario": trace.scenario.label(),
        "t_final": trace.t_final,
        "steps": trace.steps,
        "snapshots": len(trace.snapshots),
        "t_detect": trace.t_detect,
        "blowup": trace.blowup.to_dict() if trace.blowup is not None else None,
    }


def _default_family(scen: Scenario) -> str:
    return FAMILY_POWER_RADIAL if scen.geometry.is_radial else FAMILY_LINEAR_1D


# ---------------------------------------------------------------------------
# Commands


def cmd_check(args, argv) -> int:
    scen = load_scenario(args.scenario)
    weight = parse_weight(args.weight)
    report = run_family_check(scen, args.theorem, tau=args.tau, f=weight, a=args.a)
    print(f"theorem: {report.theorem}")
    print(f"verdict: {report.verdict.kind}" + (f" (tau={report.verdict.tau:g})" if report.verdict.tau is not None else ""))
    for cond in report.conditions:
        mark = "ok" if cond.satisfied else "not met"
        print(f"  {cond.name}: {cond.lhs:.9g} {cond.op} {cond.rhs:.9g} [{mark}]")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        report.to_json(out / "criterion_report.json")
        _write_invocation(out, argv)
        print(f"report written to {out / 'criterion_report.json'}")
    return EXIT_OK


def _solver_config(args, scen: Scenario) -> SolverConfig:
    return SolverConfig(
        cfl=args.cfl,
        reconstruction=args.reconstruction,
        t_end=args.t_end,
        snapshot_interval=args.snapshot_interval,
    )


def cmd_simulate(args, argv) -> int:
    scen = load_scenario(args.scenario)
    config = _solver_config(args, scen)
    family = args.family or _default_family(scen)
    weight = parse_weight(args.weight)
    ctx = theorem_context(scen, family, tau=args.tau, f=weight, a=args.a)
    recorder = ctx.recorder()
    trace = run(scen, config, recorder=recorder)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for k, snap in enumerate(trace.snapshots):
        snapshot_csv(snap, out / f"snapshot_{k:04d}.csv")
    if trace.series is not None and len(trace.series.times):
        trace.series.to_csv(out / "series.csv")
    with open(out / "trace_summary.json", "w") as fh:
        json.dump(_trace_summary(trace), fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_invocation(out, argv)
    print(
        f"simulated {scen.label()} to t={trace.t_final:g} in {trace.steps} steps"
        + (f"; detector fired at t={trace.t_detect:g}" if trace.blowup else "")
    )
    print(f"artifacts in {out}")
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    scen = load_scenario(args.scenario)
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    if not names:
        raise ConfigError("empty check list")
    if names == ["all"]:
        names = list(TRACE_CHECKS)
    unknown = [c for c in names if c not in TRACE_CHECKS]
    if unknown:
        raise ConfigError(
            f"unknown checks: {', '.join(unknown)}; available: {', '.join(TRACE_CHECKS)}"
        )
    config = _solver_config(args, scen)
    family = args.family or _default_family(scen)
    weight = parse_weight(args.weight)
    recorder = None
    ctx = None
    if CHECK_INEQUALITY in names:
        ctx = theorem_context(scen, family, tau=args.tau, f=weight, a=args.a)
        if ctx.hypotheses_hold():
            recorder = ctx.recorder()
    trace = run(scen, config, recorder=recorder)
    if TRACE_TRANSFORM is not None:
        trace = TRACE_TRANSFORM(trace)
    reports = []
    for name in names:
        if name == CHECK_POSITIVITY:
            reports.append(check_positivity(trace))
        elif name == CHECK_CHARACTERISTIC:
            reports.append(check_characteristic_density(trace, args.x0))
        elif name == CHECK_PROPAGATION:
            reports.append(check_finite_propagation(trace))
        elif name == CHECK_MASS:
            reports.append(check_mass_conservation(trace))
        elif name == CHECK_INEQUALITY:
            reports.append(
                check_differential_inequality(
                    trace, family, tau=args.tau, f=weight, a=args.a, context=ctx
                )
            )
        elif name == CHECK_CONE:
            apex = args.cone_apex if args.cone_apex is not None else 0.8 * config.t_end
            reports.append(check_cone_energy(trace, args.cone_center, apex))
    print(summary_table(reports))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "verification_reports.json", "w") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_invocation(out, argv)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY_FAILED


def _sweep_row(base_cfg: dict, parameter: str, value: float, args) -> dict:
    cfg = dict(base_cfg)
    tau = args.tau
    if parameter == "tau":
        tau = value
    elif parameter == "gamma":
        cfg["eos.gamma"] = repr(value)
    else:
        cfg[parameter] = repr(value)
    scen = scenario_from_config(cfg)
    weight = parse_weight(args.weight)
    report = run_family_check(scen, args.theorem, tau=tau, f=weight, a=args.a)
    threshold = report.inputs.get("threshold", report.inputs.get("combined_threshold", float("nan")))
    return {
        "parameter": parameter,
        "value": value,
        "H0": report.inputs.get("H0", float("nan")),
        "threshold": threshold,
        "verdict": report.verdict.kind,
    }


def cmd_sweep(args, argv) -> int:
    if args.parameter not in SWEEPABLE:
        raise ConfigError(
            f"parameter {args.parameter!r} is not sweepable; choose from {', '.join(SWEEPABLE)}"
        )
    if args.steps < 2:
        raise ConfigError("need at least 2 sweep steps")
    scen = load_scenario(args.scenario)
    base_cfg = {k: str(v) for k, v in scenario_to_config(scen).items()}
    values = np.linspace(args.lo, args.hi, args.steps)
    if args.lo >= args.hi:
        raise ConfigError("sweep range must satisfy lo < hi")
    with ThreadPoolExecutor(max_workers=min(8, args.steps)) as pool:
        rows = list(
            pool.map(lambda v: _sweep_row(base_cfg, args.parameter, float(v), args), values)
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["parameter", "value", "H0", "threshold", "verdict"])
        for row in rows:
            writer.writerow(
                [
                    row["parameter"],
                    f"{row['value']:.17g}",
                    f"{row['H0']:.17g}",
                    f"{row['threshold']:.17g}",
                    row["verdict"],
                ]
            )
    _write_invocation(out, argv)
    flips = [
        (rows[i]["value"], rows[i + 1]["value"])
        for i in range(len(rows) - 1)
        if rows[i]["verdict"] != rows[i + 1]["verdict"]
    ]
    print(f"swept {args.parameter} over [{args.lo:g}, {args.hi:g}] in {args.steps} steps")
    for lo, hi in flips:
        print(f"verdict flips between {lo:.9g} and {hi:.9g}")
    if not flips:
        print("verdict constant across the range")
    print(f"rows in {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_report(args, argv) -> int:
    out = Path(args.out)
    if not out.is_dir():
        raise ConfigError(f"output directory not found: {args.out}")
    found = False
    crit = out / "criterion_report.json"
    if crit.is_file():
        found = True
        data = json.loads(crit.read_text())
        print(f"criterion {data['theorem']}: {data['verdict']['kind']}")
        for cond in data.get("conditions", []):
            print(f"  {cond['name']}: margin {cond['margin']:.6g}")
    summary = out / "trace_summary.json"
    if summary.is_file():
        found = True
        data = json.loads(summary.read_text())
        line = f"trace {data['scenario']}: t_final={data['t_final']:g}, steps={data['steps']}"
        if data.get("t_detect") is not None:
            line += f", t_detect={data['t_detect']:g}"
        print(line)
    ver = out / "verification_reports.json"
    if ver.is_file():
        found = True
        for rep in json.loads(ver.read_text()):
            print(f"verify {rep['check']} on {rep['scenario']}: {rep['status']}")
    sweep = out / "sweep.csv"
    if sweep.is_file():
        found = True
        with open(sweep, newline="") as fh:
            rows = list(csv.DictReader(fh))
        verdicts = {}
        for row in rows:
            verdicts[row["verdict"]] = verdicts.get(row["verdict"], 0) + 1
        counts = ", ".join(f"{k}: {v}" for k, v in sorted(verdicts.items()))
        print(f"sweep over {rows[0]['parameter']} ({len(rows)} rows) -> {counts}")
    if not found:
        raise ConfigError(f"no artifacts found in {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_criterion_args(p: argparse.ArgumentParser, required_theorem: bool) -> None:
    p.add_argument(
        "--theorem" if required_theorem else "--family",
        dest="theorem" if required_theorem else "family",
        choices=FAMILIES,
        required=required_theorem,
        default=None if not required_theorem else argparse.SUPPRESS,
        help="criterion family",
    )
    p.add_argument("--tau", type=float, default=1.0, help="blowup horizon (default 1.0)")
    p.add_argument("--a", type=float, default=4.0, help="trade-off constant for general families")
    p.add_argument("--weight", default=None, help="weight spec: linear | power:<n> | exp:<beta>")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-end", type=float, default=0.5, help="simulation end time")
    p.add_argument("--cfl", type=float, default=0.45)
    p.add_argument("--reconstruction", choices=("first_order", "muscl"), default="muscl")
    p.add_argument("--snapshot-interval", type=float, default=0.05)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerblowup",
        description="Blowup criteria laboratory for compressible isentropic flow",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="evaluate a blowup criterion")
    _add_criterion_args(p_check, required_theorem=True)
    p_check.add_argument("--out", default=None, help="directory for the JSON report")
    p_check.add_argument("scenario", help="scenario config file")
    p_check.set_defaults(func=cmd_check)

    p_sim = sub.add_parser("simulate", help="run the solver, write CSV artifacts")
    _add_solver_args(p_sim)
    _add_criterion_args(p_sim, required_theorem=False)
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("scenario", help="scenario config file")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run checks against a fresh trace")
    _add_solver_args(p_ver)
    _add_criterion_args(p_ver, required_theorem=False)
    p_ver.add_argument(
        "--checks",
        default="positivity,propagation,mass",
        help=f"comma list from: {', '.join(TRACE_CHECKS)} (or 'all')",
    )
    p_ver.add_argument("--x0", type=float, default=0.5, help="flow-line start for the characteristic check")
    p_ver.add_argument("--cone-center", type=float, default=0.0)
    p_ver.add_argument("--cone-apex", type=float, default=None)
    p_ver.add_argument("--out", default=None, help="output directory")
    p_ver.add_argument("scenario", help="scenario config file")
    p_ver.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="evaluate a criterion across a range")
    _add_criterion_args(p_sweep, required_theorem=True)
    p_sweep.add_argument("--parameter", required=True, help=f"one of {', '.join(SWEEPABLE)}")
    p_sweep.add_argument("--lo", type=float, required=True)
    p_sweep.add_argument("--hi", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("scenario", help="scenario config file")
    p_sweep.set_defaults(func=cmd_sweep)

    p_rep = sub.add_parser("report", help="summarize artifacts in a directory")
    p_rep.add_argument("--out", required=True, help="directory to summarize")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entry() -> None:
    sys.exit(main())
