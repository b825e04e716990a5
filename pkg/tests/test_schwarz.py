"""End-to-end checks of the layered boundary value solvers.

The worked n=2 case (constant data, second-level imaginary constraint)
appears repeatedly: its chain, its boundary traces, and its verification
report are all known in closed form.
"""

import cmath
import math

import numpy as np
import pytest

from conftest import random_problem
from metadisk.boundary import HoloSeries, TestFunction
from metadisk.boundary import meta_hardy_norm
from metadisk.disk import PolarGrid
from metadisk.errors import PairingMismatch
from metadisk.integral import BivarPoly
from metadisk.schwarz import (SchwarzProblem, chain_from_top,
                              default_test_basis, imag_mean_constant,
                              solve_meta, solve_meta_smooth, solve_poly_chain,
                              verify_boundary_conditions, verify_solution)

POINTS = [0.3 + 0.2j, -0.5 + 0.1j, 0.7j, 0.25]


def constant_problem(n=1, value=1.0, c=0.0, coeff=None, kind="cauchy"):
    levels = [(HoloSeries.constant(value), 0.0) for _ in range(n)]
    levels[-1] = (levels[-1][0], c)
    return SchwarzProblem(n=n, coeff=coeff or BivarPoly.zero(),
                          levels=tuple(levels), factor_kind=kind)


WORKED = SchwarzProblem(
    n=2,
    coeff=BivarPoly.constant(1.0),
    levels=((HoloSeries.constant(1.0), 0.0), (HoloSeries.zero(), 2.0)),
)


@pytest.mark.parametrize("h, want", [
    (HoloSeries.constant(1.0), 0.0),
    (HoloSeries.constant(3.0 + 4.0j), 4.0j),
    (HoloSeries((0.0, 1.0)), 0.0),
])
def test_imag_mean_constant_examples(h, want):
    assert imag_mean_constant(h) == pytest.approx(want)


def test_imag_mean_constant_cross_check_guard():
    with pytest.raises(PairingMismatch):
        imag_mean_constant(HoloSeries.constant(1.0 + 2.0j), tol=0.0)


def test_chain_constant_data():
    result = solve_poly_chain(constant_problem(value=2.5, c=-1.25))
    f1 = result.chain[0]
    assert f1(0.4 + 0.1j) == pytest.approx(2.5 - 1.25j)


def test_chain_identity_data():
    problem = SchwarzProblem(n=1, coeff=BivarPoly.zero(),
                             levels=((HoloSeries((0.0, 1.0)), 0.0),))
    f1 = solve_poly_chain(problem).chain[0]
    for z in POINTS:
        assert f1(z) == pytest.approx(z)


def test_chain_worked_example():
    result = solve_poly_chain(WORKED)
    f1, f2 = result.chain
    z = 0.3 - 0.6j
    assert f1(z) == pytest.approx(1.0)
    assert f2(z) == pytest.approx(2.0j + np.conjugate(z))
    # derivative chain holds exactly
    defect = f2.dbar() + f1.scale(-1.0)
    assert defect.max_coeff() < 1e-15
    # real boundary trace of f2 is cos(theta)
    trace = f2.boundary_distribution().re_part()
    assert trace.pair(TestFunction.cosine(1)) == pytest.approx(math.pi)
    assert trace.pair(TestFunction.constant()) == pytest.approx(0.0)
    assert trace.pair(TestFunction.sine(1)) == pytest.approx(0.0)


def test_chain_from_top_matches_recursion():
    rng = np.random.default_rng(61)
    for _ in range(4):
        problem = random_problem(rng)
        chain = solve_poly_chain(problem).chain
        rebuilt = chain_from_top(chain[-1], problem.n)
        for ours, theirs in zip(chain, rebuilt):
            gap = ours + theirs.scale(-1.0)
            assert gap.max_coeff() < 1e-12


def test_solve_meta_zero_coeff_reduces_to_chain():
    rng = np.random.default_rng(67)
    problem = random_problem(rng, coeff_degree=0)
    problem = SchwarzProblem(n=problem.n, coeff=BivarPoly.zero(),
                             levels=problem.levels)
    sol = solve_meta(problem, verify=False)
    top = solve_poly_chain(problem).chain[-1]
    for z in POINTS:
        assert sol.w(z) == pytest.approx(top(z), abs=1e-12)


def test_solve_meta_worked_example():
    sol = solve_meta(WORKED)
    assert sol.report.overall_pass
    for z in POINTS:
        want = np.exp(np.conjugate(z)) * (2.0j + np.conjugate(z))
        assert sol.w(z) == pytest.approx(want)


def test_solve_meta_linear_coeff():
    problem = constant_problem(coeff=BivarPoly.monomial(1, 0, 1.0))
    sol = solve_meta(problem, verify=False)
    for z in POINTS:
        want = np.exp(z * np.conjugate(z) - 1.0)
        assert sol.w(z) == pytest.approx(want)


def test_solve_meta_rejects_wrong_kind():
    with pytest.raises(ValueError):
        solve_meta(constant_problem(kind="schwarz"))
    with pytest.raises(ValueError):
        solve_meta_smooth(constant_problem(kind="cauchy"))


def test_smooth_variant_zero_coeff_identical():
    rng = np.random.default_rng(71)
    base = random_problem(rng, coeff_degree=0)
    pa = SchwarzProblem(n=base.n, coeff=BivarPoly.zero(), levels=base.levels)
    pb = SchwarzProblem(n=base.n, coeff=BivarPoly.zero(), levels=base.levels,
                        factor_kind="schwarz")
    wa = solve_meta(pa, verify=False).w
    wb = solve_meta_smooth(pb, verify=False).w
    for z in POINTS:
        assert wa(z) == pytest.approx(wb(z), abs=1e-12)


def test_smooth_variant_single_level():
    problem = constant_problem(c=1.0, coeff=BivarPoly.constant(1.0),
                               kind="schwarz")
    sol = solve_meta_smooth(problem)
    assert sol.report.overall_pass
    scale = cmath.exp(sol.w.factor.at_zero)
    assert scale.imag == pytest.approx(0.0, abs=1e-12)
    assert scale.real > 0
    assert sol.w(0j).imag == pytest.approx(scale.real)
    z = 0.2 + 0.4j
    psi = sol.w.factor.value(z)
    assert sol.w(z) == pytest.approx(np.exp(psi) * (1.0 + 1.0j))


def test_smooth_variant_origin_ratio_uniform():
    rng = np.random.default_rng(73)
    problem = random_problem(rng, n_max=2, coeff_degree=1, data_degree=3,
                             factor_kind="schwarz")
    sol = solve_meta_smooth(problem, verify=False)
    scale = cmath.exp(sol.w.factor.at_zero).real
    for k in range(problem.n):
        c = problem.levels[problem.n - 1 - k][1]
        got = sol.w.dbar_shift_power(k)(0j).imag
        assert got == pytest.approx(scale * c, abs=1e-10)


def test_verify_constant_problem():
    sol = solve_meta(constant_problem(), verify=False)
    report = verify_boundary_conditions(sol, constant_problem(),
                                        tests=(TestFunction.constant(),))
    assert report.max_residual < 1e-10


def test_verify_worked_example_basis():
    sol = solve_meta(WORKED, verify=False)
    tests = (TestFunction.constant(), TestFunction.cosine(1),
             TestFunction.sine(1), TestFunction.cosine(2))
    report = verify_boundary_conditions(sol, WORKED, tests=tests)
    assert report.max_residual < 1e-7
    assert report.passes(1e-7)


def test_verify_detects_corruption():
    sol = solve_meta(WORKED, verify=False)
    bad_chain = (sol.chain[0] + sol.chain[0].constant(0.1), sol.chain[1])
    corrupted = type(sol)(w=sol.w, chain=bad_chain, constants=sol.constants,
                          report=sol.report, boundary=sol.boundary,
                          problem=sol.problem)
    report = verify_boundary_conditions(corrupted, WORKED)
    assert report.max_residual > 1e-3
    worst = report.worst()
    assert worst.residual == report.max_residual


def test_verify_solution_full_battery():
    rng = np.random.default_rng(79)
    problem = random_problem(rng)
    sol = solve_meta(problem)
    names = {c.name for c in sol.report.checks}
    assert {"pde_residual", "imag_at_origin", "boundary_pairing_max",
            "chain_derivative", "negative_control"} <= names
    assert sol.report.overall_pass
    assert sol.report["negative_control"].value > 1e-3
    # impossible threshold flips the verdict without touching the solution
    strict = verify_solution(sol, thresholds={"boundary_pairing_max": 1e-30})
    assert not strict.report.overall_pass


def test_default_test_basis_spans_data():
    rng = np.random.default_rng(83)
    problem = random_problem(rng, data_degree=6)
    basis = default_test_basis(problem)
    top = max(8, 2 * problem.max_data_degree)
    assert len(basis) == 2 * top + 1


def test_hardy_persistence():
    rng = np.random.default_rng(89)
    problem = random_problem(rng)
    sol = solve_meta(problem, verify=False)
    for p in (1.0, 2.0):
        assert np.isfinite(float(meta_hardy_norm(sol.w, p, problem.n)))
