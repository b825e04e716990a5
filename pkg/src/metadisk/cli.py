"""Command-line front end.

Commands:
  solve      problem JSON -> solution.json, solution_grid.csv, report.json
  verify     solution JSON -> report.json (re-runs the full check battery)
  transform  {"operator", "f"} JSON -> transform.csv on the sampling grid
  poisson    boundary-data JSON -> poisson.csv (harmonic extension)
  decompose  {"order", "samples"} JSON -> decomposition.json

Exit codes: 0 success, 1 malformed config or schema violation, 2 verification
failure (the report is still written), 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from jsonschema.exceptions import ValidationError

from . import formats
from .boundary import poisson_extend
from .disk import PolarGrid, RadialSequence
from .errors import MetadiskError
from .integral import schwarz_pompeiu, teodorescu_poly
from .meta import poly_decompose
from .report import Report
from .schwarz import (
    SchwarzSolution,
    chain_from_top,
    solve_meta,
    solve_meta_smooth,
    verify_solution,
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    config_path: Path
    out_dir: Path
    grid: tuple[int, int] = (32, 64)
    tolerances: dict = field(default_factory=dict)
    degree: int = 16
    radial_depth: int = 16

    def __post_init__(self):
        if self.grid[0] < 4 or self.grid[1] < 4:
            raise ValueError("grid dimensions must be at least 4")
        for name, value in self.tolerances.items():
            if value <= 0:
                raise ValueError(f"tolerance {name} must be positive")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.radial_depth < 1:
            raise ValueError("radial depth must be at least 1")

    def sampling_grid(self) -> PolarGrid:
        return PolarGrid.mesh(n_radial=self.grid[0], n_angular=self.grid[1])

    def radial_sequence(self) -> RadialSequence:
        return RadialSequence(depth=self.radial_depth)


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("grid must look like 32x64")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metadisk",
        description="Meta-analytic functions and Schwarz problems on the unit disk",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "verify", "transform", "poisson", "decompose"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="input file (JSON)")
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument("--grid", type=_parse_grid, default=(32, 64),
                         metavar="NRxNT", help="sampling grid, default 32x64")
        cmd.add_argument("--degree", type=int, default=16,
                         help="truncation degree for fits, default 16")
        cmd.add_argument("--radial-depth", type=int, default=16,
                         help="radial sequence depth, default 16")
        cmd.add_argument("--tol", action="append", default=[],
                         metavar="NAME=VALUE",
                         help="override a named tolerance (repeatable)")
    return parser


def make_config(args) -> RunConfig:
    tolerances = {}
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--tol expects NAME=VALUE, got {item!r}")
        tolerances[name] = float(value)
    return RunConfig(
        command=args.command,
        config_path=Path(args.config),
        out_dir=Path(args.out),
        grid=tuple(args.grid),
        tolerances=tolerances,
        degree=args.degree,
        radial_depth=args.radial_depth,
    )


def _write_report(out_dir: Path, report: Report, boundary) -> None:
    data = report.to_dict()
    if boundary is not None:
        data["boundary_rows"] = boundary.to_rows()
    formats.save_json(out_dir / "report.json", data)


def _sample_solution(sol: SchwarzSolution, grid: PolarGrid):
    pts = grid.points()
    w_values = sol.w(pts)
    residual_expr = sol.w.dbar_shift_power(sol.problem.n)
    residuals = np.asarray(residual_expr(pts), dtype=complex) + 0.0
    return w_values, residuals


def run_solve(config: RunConfig) -> int:
    problem = formats.problem_from_data(formats.load_json(config.config_path))
    solver = solve_meta if problem.factor_kind == "cauchy" else solve_meta_smooth
    grid = config.sampling_grid()
    sol = solver(problem, verify=True, grid=grid,
                 rs=config.radial_sequence(), thresholds=config.tolerances)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    formats.save_json(out / "solution.json", formats.solution_to_data(sol))
    w_values, residuals = _sample_solution(sol, grid)
    formats.write_solution_csv(out / "solution_grid.csv", grid, w_values, residuals)
    _write_report(out, sol.report, sol.boundary)
    return 0 if sol.report.overall_pass else 2


def run_verify(config: RunConfig) -> int:
    data = formats.load_json(config.config_path)
    w, constants, problem, _ = formats.solution_from_data(data)
    sol = SchwarzSolution(
        w=w,
        chain=chain_from_top(w.poly, problem.n),
        constants=constants,
        report=Report(),
        boundary=None,
        problem=problem,
    )
    checked = verify_solution(sol, grid=config.sampling_grid(),
                              rs=config.radial_sequence(),
                              thresholds=config.tolerances)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_report(out, checked.report, checked.boundary)
    return 0 if checked.report.overall_pass else 2


def run_transform(config: RunConfig) -> int:
    data = formats.load_json(config.config_path)
    formats.check_schema(data, formats.TRANSFORM_CONFIG_SCHEMA)
    f = formats.bivar_from_data(data["f"])
    grid = config.sampling_grid()
    pts = grid.points()
    quad_tol = config.tolerances.get("quadrature")
    if data["operator"] == "teodorescu":
        values = teodorescu_poly(f)(pts)
    else:
        values = np.array([
            [schwarz_pompeiu(f, z, tol=quad_tol) for z in row] for row in pts
        ])
    config.out_dir.mkdir(parents=True, exist_ok=True)
    formats.write_values_csv(config.out_dir / "transform.csv", grid, values)
    return 0


def run_poisson(config: RunConfig) -> int:
    data = formats.load_json(config.config_path)
    u = formats.boundary_from_data(data)
    grid = config.sampling_grid()
    values = poisson_extend(u, grid.points())
    config.out_dir.mkdir(parents=True, exist_ok=True)
    formats.write_values_csv(config.out_dir / "poisson.csv", grid, values)
    return 0


def run_decompose(config: RunConfig) -> int:
    data = formats.load_json(config.config_path)
    formats.check_schema(data, formats.DECOMPOSE_CONFIG_SCHEMA)
    samples_path = Path(data["samples"])
    if not samples_path.is_absolute():
        samples_path = config.config_path.parent / samples_path
    samples = formats.read_values_csv(samples_path)
    fit = poly_decompose(samples, n=data["order"], degree=config.degree)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    formats.save_json(config.out_dir / "decomposition.json", {
        "parts": [formats.holo_to_data(p) for p in fit.poly.parts],
        "residual": fit.residual,
        "condition": fit.condition,
    })
    return 0


RUNNERS = {
    "solve": run_solve,
    "verify": run_verify,
    "transform": run_transform,
    "poisson": run_poisson,
    "decompose": run_decompose,
}


def run(config: RunConfig) -> int:
    return RUNNERS[config.command](config)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
        return run(config)
    except MetadiskError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"schema error: {exc.message}", file=sys.stderr)
        return 1
    except (json.JSONDecodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
