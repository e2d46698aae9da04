import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from dualgeom.ode_engine import (
    SeedError,
    SolverOptions,
    gauss_cumulative,
    jacobi_from_expr,
    solve_jacobi,
    solve_riccati,
)
from dualgeom.radial_fn import Hyper, Piecewise, Power, Rational, Trig, const


def test_linear_solution():
    sol = solve_jacobi(const(0.0), 1.0, 5.0)
    r = np.linspace(0.01, 5, 50)
    np.testing.assert_allclose(sol.f(r), r, rtol=1e-13)
    assert sol.t_sup == 5.0


def test_sine_first_zero():
    sol = solve_jacobi(const(1.0), 1.0, 4.0)
    assert abs(sol.t_sup - math.pi) <= 1e-6
    r = np.linspace(0.01, 3.1, 80)
    np.testing.assert_allclose(sol.f(r), np.sin(r), atol=1e-10)


def test_sinh_value():
    sol = solve_jacobi(const(-1.0), 1.0, 2.0)
    assert sol.f(1.0)[0] == pytest.approx(math.sinh(1.0), abs=1e-8)


@pytest.mark.parametrize("kappa", [0.5, 1.0, 2.5])
def test_invariants_at_origin(kappa):
    sol = solve_jacobi(const(-1.0), kappa, 2.0)
    inv = sol.invariants()
    assert inv["f_positive"]
    assert abs(inv["f_at_0"]) < 1e-9
    assert inv["fprime_at_0"] == pytest.approx(kappa, rel=1e-6)
    assert inv["max_residual"] <= 1e-8


def test_riccati_closed_forms():
    g0 = solve_riccati(const(0.0), 1.0, 5.0)
    r = np.linspace(0.1, 5.0, 40)
    np.testing.assert_allclose(g0.g(r), 1 / r, atol=1e-8)
    gm = solve_riccati(const(-1.0), 1.0, 3.0)
    assert gm.g(1.0)[0] == pytest.approx(1 / math.tanh(1.0), abs=1e-6)
    gp = solve_riccati(const(1.0), 1.0, 4.0)
    assert gp.pole is not None
    assert abs(gp.pole - math.pi) <= 1e-4


def test_riccati_w_bounded_near_zero():
    g = solve_riccati(const(-1.0), 1.0, 2.0)
    assert np.all(np.abs(g.w_values[:3]) < 1e-3)
    assert g.invariants()["max_residual"] <= 1e-8


def test_dual_consistency():
    G = Rational((1.0,), (1.0, 0.0, 1.0))
    f = solve_jacobi(G, 1.5, 4.0)
    g = solve_riccati(G, 1.5, 4.0)
    top = min(f.t_sup, g.t_sup)
    r = np.linspace(2 * f.t0, 0.9 * top, 200)
    np.testing.assert_allclose(g.g(r), 1.5 * f.fprime(r) / f.f(r), atol=1e-6, rtol=1e-9)


def test_against_scipy_oracle():
    G = Rational((2.0,), (1.0, 0.0, 1.0))
    sol = solve_jacobi(G, 1.0, 3.0)
    t0 = sol.t0
    ref = solve_ivp(lambda t, y: [y[1], -2.0 / (1 + t * t) * y[0]], (t0, 3.0),
                    [t0, 1.0], rtol=1e-12, atol=1e-14, dense_output=True)
    r = np.linspace(0.1, 3.0, 30)
    np.testing.assert_allclose(sol.f(r), ref.sol(r)[0], atol=1e-9)


def test_order_convergence_fixed_step():
    res = []
    for h in (0.1, 0.05):
        sol = solve_jacobi(const(-1.0), 1.0, 2.0, SolverOptions(adaptive=False, max_step=h))
        res.append(np.max(np.abs(sol.residual())))
    assert res[0] / res[1] >= 8


def test_singular_coefficient_needs_hint():
    with pytest.raises(SeedError):
        solve_jacobi(Power(-2.0, -2.0), 1.0, 2.0)
    sol = solve_jacobi(Power(-2.0, -2.0), 1.0, 2.0, SolverOptions(singular_exponent=-2.0))
    assert sol.t_sup == 2.0


def test_generalized_seed_reproduces_power():
    A, t0 = 2.0, 1e-6
    opts = SolverOptions(epsilon=t0, singular_exponent=-2.0, seed=(t0 ** A, A * t0 ** (A - 1)))
    sol = solve_jacobi(Power(-A * (A - 1), -2.0), 1.0, 3.0, opts)
    r = np.linspace(0.1, 3.0, 20)
    np.testing.assert_allclose(sol.f(r), r ** A, rtol=1e-8)
    assert sol.generalized


def test_breakpoint_restart():
    # G = 1 on (0, 1], 0 afterwards: f = sin t then linear continuation
    G = Piecewise((1.0,), (const(1.0), const(0.0)))
    sol = solve_jacobi(G, 1.0, 3.0)
    r = np.array([2.0, 3.0])
    exact = math.sin(1.0) + math.cos(1.0) * (r - 1.0)
    np.testing.assert_allclose(sol.f(r), exact, atol=1e-10)


def test_jacobi_from_expr_locates_zero():
    sol = jacobi_from_expr(Trig(), const(1.0), 1.0, 4.0)
    assert sol.t_sup == pytest.approx(math.pi, abs=1e-10)
    assert np.max(np.abs(sol.residual())) < 1e-8


def test_gauss_cumulative():
    nodes = np.linspace(0.0, 2.0, 11)
    out = gauss_cumulative(np.cos, nodes)
    np.testing.assert_allclose(out, np.sin(nodes), atol=1e-13)


def test_sinh_series_seed_relative_residual():
    sol = solve_jacobi(const(-4.0), 2.0, 5.0)
    r = np.linspace(0.5, 5.0, 10)
    np.testing.assert_allclose(sol.f(r), Hyper(2.0)(r), rtol=1e-9)
