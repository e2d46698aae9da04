import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dualgeom.comparison import HypothesisError
from dualgeom.model_geometry import (
    A_from_a,
    CurvatureHypothesis,
    a_from_A,
    bound_catalog,
    bound_table_csv,
    curvature,
    euclidean,
    from_curvature,
    hess_eigenvalue,
    hyperbolic,
    laplacian_r,
    mean_curvature,
    power_model,
    ricci_radial,
    shifted_limit_margins,
    sphere,
    verify_bounds,
    weitzenbock_residual,
)
from dualgeom.radial_fn import const

CATALOG = {
    "euclidean2": euclidean(2),
    "euclidean3": euclidean(3),
    "euclidean5": euclidean(5),
    "hyperbolic3": hyperbolic(3, 1.0),
    "hyperbolic4_a2": hyperbolic(4, 2.0),
    "sphere2": sphere(2),
    "sphere3": sphere(3),
    "power3_A2": power_model(3, 2.0),
    "power4_A1.5": power_model(4, 1.5),
    "numeric_hyperbolic3": from_curvature(3, const(-1.0), 5.0),
}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_weitzenbock_residual_vanishes(name):
    res = weitzenbock_residual(CATALOG[name])
    assert np.max(np.abs(res)) <= 1e-6


@pytest.mark.parametrize(
    "M, K",
    [
        (euclidean(3), 0.0),
        (hyperbolic(3, 1.0), -1.0),
        (hyperbolic(3, 2.0), -4.0),
        (sphere(3), 1.0),
    ],
    ids=["euclidean", "hyperbolic", "hyperbolic_a2", "sphere"],
)
def test_constant_curvature(M, K):
    r = np.array([0.3, 1.0, 2.0])
    assert np.allclose(curvature(M)(r), K, atol=1e-12)
    assert np.allclose(ricci_radial(M)(r), (M.n - 1) * K, atol=1e-12)


def test_power_model_curvature():
    r = np.array([0.5, 1.0, 3.0])
    assert np.allclose(curvature(power_model(3, 2.0))(r), -2.0 / r**2)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_euclidean_quantities(n):
    M = euclidean(n)
    r = np.array([0.5, 2.0])
    assert np.allclose(hess_eigenvalue(M)(r), 1 / r)
    assert np.allclose(laplacian_r(M)(r), (n - 1) / r)
    assert np.allclose(mean_curvature(M)(r), 1 / r)


def test_numeric_model_matches_closed_form():
    M = from_curvature(3, const(-1.0), 5.0)
    r = np.array([1.0, 2.0])
    assert np.allclose(hess_eigenvalue(M)(r), 1 / np.tanh(r), atol=1e-10)


def test_numeric_sphere_truncated_at_first_zero():
    M = from_curvature(2, const(1.0), 5.0)
    assert M.T == pytest.approx(math.pi, abs=1e-6)


@pytest.mark.parametrize("A", [1.0, 1.5, 2.0, 3.0])
def test_power_model_equality_case(A):
    M = power_model(3, A)
    cert = verify_bounds(M, CurvatureHypothesis("sec_lower_power", {"A": A}))
    assert cert.passed
    assert np.max(np.abs(cert.conclusion_margins)) <= 1e-8
    assert np.max(np.abs(cert.hypothesis_margins)) <= 1e-8


def test_sphere_passes_quarter_bound():
    cert = verify_bounds(sphere(3), CurvatureHypothesis("sec_lower_quarter", {"B1": 0.0}))
    assert cert.passed


def test_euclidean_flat_exact():
    cert = verify_bounds(euclidean(3), CurvatureHypothesis("flat", {}))
    assert cert.passed
    assert set(cert.components) == {"lower", "upper"}
    assert np.all(cert.hypothesis_margins == 0.0)
    scale = 1.0 + 1.0 / cert.radii
    assert np.max(np.abs(cert.conclusion_margins) / scale) <= 1e-15


def test_sphere_violates_nonpositive():
    with pytest.raises(HypothesisError):
        verify_bounds(sphere(3), CurvatureHypothesis("flat_nonpositive", {}))


def test_hyperbolic_laplacian_bound():
    h = CurvatureHypothesis("const_pinch", {"alpha": 1.0, "beta": 1.0})
    cert = verify_bounds(hyperbolic(3, 1.0), h, applies_to="laplacian")
    assert cert.passed


@pytest.mark.parametrize(
    "kind, params",
    [
        ("sec_lower_power", {"A": 0.5}),
        ("sec_lower_quarter", {"B1": 0.3}),
        ("two_sided_power", {"A": 1.0, "A1": 2.0}),
        ("decay_pinch", {"A": 1.0, "B": 3.0, "eps": 1.0}),
        ("sec_lower_power", {}),
        ("no_such_kind", {}),
    ],
    ids=["A_below_one", "B1_above_quarter", "A_below_A1", "B_too_large", "missing", "unknown"],
)
def test_bad_hypotheses_rejected(kind, params):
    with pytest.raises(HypothesisError):
        CurvatureHypothesis(kind, params)


def test_shift_rejected_on_unshiftable_kind():
    with pytest.raises(HypothesisError):
        CurvatureHypothesis("flat", {}, shift=1.0)


def test_dash_kind_accepted():
    assert CurvatureHypothesis("sec-lower-power", {"A": 2}).kind == "sec_lower_power"


def test_A_a_special_values():
    assert A_from_a(1.0) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-15)
    assert a_from_A(2.0) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert A_from_a(0.0) == 1.0


@given(st.floats(1.0, 50.0))
def test_A_round_trip(A):
    assert A_from_a(a_from_A(A)) == pytest.approx(A, abs=1e-12 * A)


# below 1e-3, A = 1 + O(a**2) no longer carries a to full precision
@given(st.floats(1e-3, 50.0))
def test_a_round_trip(a):
    assert a_from_A(A_from_a(a)) == pytest.approx(a, abs=1e-12 * max(1.0, a))


@pytest.mark.parametrize("applies_to", ["hessian_eigenvalue", "laplacian", "mean_curvature"])
def test_bound_catalog_flat(applies_to):
    b = bound_catalog(CurvatureHypothesis("flat", {}), 3, applies_to)
    scale = {"hessian_eigenvalue": 1.0, "laplacian": 2.0, "mean_curvature": 1.0}[applies_to]
    assert b.lower(2.0) == pytest.approx(scale / 2.0)
    assert b.upper(2.0) == pytest.approx(scale / 2.0)


def test_bound_table_csv():
    text = bound_table_csv(CurvatureHypothesis("flat", {}), 3, 1.0, 4, M=euclidean(3))
    lines = text.splitlines()
    assert lines[0] == "r,lower,value,upper"
    assert lines[1] == "0.25,4,4,4"
    assert len(lines) == 5


def test_bound_table_without_model_leaves_value_empty():
    text = bound_table_csv(CurvatureHypothesis("sec_lower_power", {"A": 2}), 3, 1.0, 2)
    assert text.splitlines()[1].split(",")[2] == ""


def test_shifted_margins_decrease_with_shift():
    m = shifted_limit_margins("sec_lower_power", {"A": 2.0}, 3, [0.5, 0.2, 0.05], [0.5, 1.0, 2.0])
    assert m.shape == (3, 3)
    assert np.all(m > 0)
    assert np.all(np.diff(m, axis=0) < 0)
