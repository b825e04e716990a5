"""File formats: JSON schemas for problems and solutions, CSV for sampled grids.

Complex numbers are stored as [re, im] pairs.  All JSON is written with
sorted keys and all floats via repr, so identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from jsonschema import validate as _validate

from .boundary import BoundaryDistribution, HoloSeries
from .disk import PolarGrid
from .integral import BivarPoly, similarity_factor
from .meta import MetaExpr, PolyAnalytic
from .schwarz import SchwarzProblem, SchwarzSolution

COMPLEX_PAIR = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

BIVAR_POLY_SCHEMA = {
    "type": "object",
    "properties": {
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "m": {"type": "integer", "minimum": 0},
                    "k": {"type": "integer", "minimum": 0},
                    "re": {"type": "number"},
                    "im": {"type": "number"},
                },
                "required": ["m", "k", "re", "im"],
                "additionalProperties": False,
            },
        }
    },
    "required": ["terms"],
    "additionalProperties": False,
}

HOLO_SERIES_SCHEMA = {
    "type": "object",
    "properties": {"coeffs": {"type": "array", "items": COMPLEX_PAIR, "minItems": 1}},
    "required": ["coeffs"],
    "additionalProperties": False,
}

BOUNDARY_DATA_SCHEMA = {
    "type": "object",
    "properties": {
        "type": {"enum": ["holo_series", "fourier"]},
        "coeffs": {"type": "array", "items": COMPLEX_PAIR, "minItems": 1},
        "min_index": {"type": "integer"},
    },
    "required": ["type", "coeffs"],
    "additionalProperties": False,
}

PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "A": BIVAR_POLY_SCHEMA,
        "psi_kind": {"enum": ["cauchy", "schwarz"]},
        "levels": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"h": HOLO_SERIES_SCHEMA, "c": {"type": "number"}},
                "required": ["h", "c"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["n", "A", "psi_kind", "levels"],
    "additionalProperties": False,
}

SOLUTION_SCHEMA = {
    "type": "object",
    "properties": {
        "A": BIVAR_POLY_SCHEMA,
        "psi_kind": {"enum": ["cauchy", "schwarz"]},
        "parts": {"type": "array", "items": HOLO_SERIES_SCHEMA, "minItems": 1},
        "I": {"type": "array", "items": COMPLEX_PAIR},
        "diagnostics": {"type": "object"},
        "problem": PROBLEM_SCHEMA,
    },
    "required": ["A", "psi_kind", "parts", "I", "problem"],
    "additionalProperties": False,
}

TRANSFORM_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "operator": {"enum": ["teodorescu", "schwarz_pompeiu"]},
        "f": BIVAR_POLY_SCHEMA,
    },
    "required": ["operator", "f"],
    "additionalProperties": False,
}

DECOMPOSE_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "samples": {"type": "string"},
    },
    "required": ["order", "samples"],
    "additionalProperties": False,
}

VALUE_CSV_HEADER = "r,theta,re_value,im_value"
SOLUTION_CSV_HEADER = "r,theta,re_w,im_w,re_residual,im_residual"


def check_schema(data, schema) -> None:
    """Raise jsonschema.ValidationError if the payload does not match."""
    _validate(data, schema)


def complex_pair(c) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


def pair_complex(v) -> complex:
    return complex(float(v[0]), float(v[1]))


def bivar_to_data(poly: BivarPoly) -> dict:
    terms = [
        {"m": m, "k": k, "re": c.real, "im": c.imag}
        for (m, k), c in sorted(poly.terms.items())
    ]
    return {"terms": terms}


def bivar_from_data(data: dict) -> BivarPoly:
    return BivarPoly({
        (t["m"], t["k"]): complex(t["re"], t["im"]) for t in data["terms"]
    })


def holo_to_data(h: HoloSeries) -> dict:
    return {"coeffs": [complex_pair(c) for c in h.coeffs]}


def holo_from_data(data: dict) -> HoloSeries:
    return HoloSeries(tuple(pair_complex(v) for v in data["coeffs"]))


def boundary_from_data(data: dict) -> BoundaryDistribution:
    _validate(data, BOUNDARY_DATA_SCHEMA)
    coeffs = [pair_complex(v) for v in data["coeffs"]]
    if data["type"] == "holo_series":
        start = data.get("min_index", 0)
        if start != 0:
            raise ValueError("holo_series data starts at frequency 0")
    else:
        start = data.get("min_index", 0)
    return BoundaryDistribution({start + i: c for i, c in enumerate(coeffs)})


def problem_to_data(problem: SchwarzProblem) -> dict:
    return {
        "n": problem.n,
        "A": bivar_to_data(problem.coeff),
        "psi_kind": problem.factor_kind,
        "levels": [
            {"h": holo_to_data(h), "c": c} for h, c in problem.levels
        ],
    }


def problem_from_data(data: dict) -> SchwarzProblem:
    _validate(data, PROBLEM_SCHEMA)
    if len(data["levels"]) != data["n"]:
        raise ValueError(
            f"problem declares n={data['n']} but carries "
            f"{len(data['levels'])} levels"
        )
    return SchwarzProblem(
        n=data["n"],
        coeff=bivar_from_data(data["A"]),
        levels=tuple(
            (holo_from_data(level["h"]), level["c"]) for level in data["levels"]
        ),
        factor_kind=data["psi_kind"],
    )


def solution_to_data(sol: SchwarzSolution) -> dict:
    data = {
        "A": bivar_to_data(sol.problem.coeff),
        "psi_kind": sol.problem.factor_kind,
        "parts": [holo_to_data(p) for p in sol.w.poly.parts],
        "I": [complex_pair(c) for c in sol.constants],
        "diagnostics": sol.report.to_dict(),
        "problem": problem_to_data(sol.problem),
    }
    if sol.boundary is not None:
        data["diagnostics"]["boundary_rows"] = sol.boundary.to_rows()
    return data


def solution_from_data(data: dict):
    """Rebuild (w, constants, problem, diagnostics) from a solution file.

    The similarity factor is recomputed from A and psi_kind; it is not stored.
    """
    _validate(data, SOLUTION_SCHEMA)
    problem = problem_from_data(data["problem"])
    coeff = bivar_from_data(data["A"])
    if coeff != problem.coeff:
        raise ValueError("solution A differs from the embedded problem's A")
    if data["psi_kind"] != problem.factor_kind:
        raise ValueError("solution psi_kind differs from the embedded problem's")
    factor = similarity_factor(coeff, data["psi_kind"])
    poly = PolyAnalytic(tuple(holo_from_data(p) for p in data["parts"]))
    w = MetaExpr(factor, poly)
    constants = tuple(pair_complex(v) for v in data["I"])
    return w, constants, problem, data.get("diagnostics", {})


def save_json(path, data) -> None:
    text = json.dumps(data, sort_keys=True, indent=2)
    Path(path).write_text(text + "\n")


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def _rows_to_text(header: str, columns) -> str:
    lines = [header]
    stacked = [np.asarray(col).ravel() for col in columns]
    for row in zip(*stacked):
        lines.append(",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def _grid_columns(grid: PolarGrid):
    r = np.broadcast_to(grid.radii[:, None], (grid.radii.size, grid.angles.size))
    theta = np.broadcast_to(grid.angles[None, :], r.shape)
    return r, theta


def write_values_csv(path, grid: PolarGrid, values) -> None:
    r, theta = _grid_columns(grid)
    values = np.asarray(values, dtype=complex)
    text = _rows_to_text(VALUE_CSV_HEADER, [r, theta, values.real, values.imag])
    Path(path).write_text(text)


def write_solution_csv(path, grid: PolarGrid, w_values, residuals) -> None:
    r, theta = _grid_columns(grid)
    w_values = np.asarray(w_values, dtype=complex)
    residuals = np.asarray(residuals, dtype=complex)
    text = _rows_to_text(
        SOLUTION_CSV_HEADER,
        [r, theta, w_values.real, w_values.imag, residuals.real, residuals.imag],
    )
    Path(path).write_text(text)


def read_values_csv(path) -> PolarGrid:
    """Parse a value-grid CSV back into a PolarGrid with values attached."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0].strip() != VALUE_CSV_HEADER:
        raise ValueError(f"expected header {VALUE_CSV_HEADER!r}")
    rows = []
    for line in lines[1:]:
        r, theta, re, im = (float(s) for s in line.split(","))
        rows.append((r, theta, complex(re, im)))
    radii = []
    for r, _, _ in rows:
        if not radii or r != radii[-1]:
            if r in radii:
                raise ValueError("radii must be grouped in consecutive blocks")
            radii.append(r)
    n_theta, rem = divmod(len(rows), len(radii))
    if rem:
        raise ValueError("grid is not rectangular")
    angles = [theta for _, theta, _ in rows[:n_theta]]
    values = np.array([v for _, _, v in rows], dtype=complex)
    return PolarGrid(
        np.array(radii), np.array(angles), values.reshape(len(radii), n_theta)
    )
