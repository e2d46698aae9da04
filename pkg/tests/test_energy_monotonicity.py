import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from dualgeom.energy_monotonicity import (
    PUBLISHED,
    ROWS,
    BornInfeldMinus,
    BornInfeldPlus,
    GridF,
    Identity,
    LambdaQuery,
    NotApplicableError,
    PPower,
    UnsupportedDomainError,
    _raw_lambda,
    check_density_ratio,
    check_monotonicity,
    dirichlet_applicable,
    f_degree,
    f_lower_degree,
    lambda_exponent,
    lambda_from_bounds,
    lemma_stress_check,
    p_harmonic_condition_disagreements,
    published_lambda,
    row_applicable,
    starlike_check,
    vanishing_test,
)
from dualgeom.model_geometry import euclidean, hyperbolic, power_model, sphere
from dualgeom.radial_fn import Power, PowerLog

from helpers import density_profile
from tables import ROW_PARAMS

# printed cells that disagree with the family's own condition list
MISPRINTS = {("p_yang_mills", "iv"), ("born_infeld_plus", "ii")}

TABLE_CASES = [
    (fam, row, n, x)
    for fam in sorted(PUBLISHED)
    for row in ROWS
    for n, x in ((10, 3.0), (25, 4.0))
]


@pytest.mark.parametrize(
    "fam, row, n, x", TABLE_CASES, ids=[f"{f}-{r}-n{n}" for f, r, n, _ in TABLE_CASES]
)
def test_master_formula_matches_published_rows(fam, row, n, x):
    printed, master = published_lambda(fam, row, n, x, ROW_PARAMS[row])
    if (fam, row) in MISPRINTS:
        assert abs(printed - master) > 1e-3
    else:
        assert printed == pytest.approx(master, abs=1e-12)


def test_misprinted_yang_mills_cell_matches_condition_form():
    # the condition list uses sqrt(1 - 4B), as does the master formula
    n, p, P = 10, 3.0, ROW_PARAMS["iv"]
    _, master = published_lambda("p_yang_mills", "iv", n, p, P)
    expected = 1 + (n - 1) * (1 + math.sqrt(1 - 4 * P["B"])) / 2 - p * (1 + math.sqrt(1 + 4 * P["B1"]))
    assert master == pytest.approx(expected, abs=1e-12)


def test_misprinted_born_infeld_cell_matches_condition_form():
    n, P = 10, ROW_PARAMS["ii"]
    _, master = published_lambda("born_infeld_plus", "ii", n, 0.0, P)
    expected = 1 + (n - 1) * (1 + math.sqrt(1 + 4 * P["A1"])) / 2 - 2 * (1 + math.sqrt(1 + 4 * P["A"]))
    assert master == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n, p", [(10, 3.0), (6, 2.0), (4, 1.5)])
def test_p_harmonic_condition_lists_agree(n, p):
    assert p_harmonic_condition_disagreements(n, p, ROW_PARAMS) == []


@pytest.mark.parametrize("row", [r for r in ROWS if r != "v"])
@pytest.mark.parametrize("k, dF", [(1, 1.0), (2, 1.5)])
def test_lambda_equals_bounds_oracle(row, k, dF):
    q = LambdaQuery(row, k, dF, 10, ROW_PARAMS[row])
    r = np.geomspace(1e-3, 50.0, 9)
    assert np.allclose(lambda_from_bounds(q, r), _raw_lambda(q), atol=1e-9)


def test_constant_pinch_lambda_is_a_lower_bound():
    q = LambdaQuery("v", 1, 1.0, 10, ROW_PARAMS["v"])
    r = np.geomspace(1e-3, 50.0, 9)
    assert np.all(lambda_from_bounds(q, r) >= lambda_exponent(q) - 1e-12)


def test_flat_row_value():
    assert lambda_exponent(LambdaQuery("vi", 1, 1.0, 4)) == 2.0
    assert lambda_exponent(LambdaQuery(6, 1, 1.0, 4)) == 2.0


@pytest.mark.parametrize(
    "q, pattern",
    [
        (LambdaQuery("vi", 1, 2.0, 4), "not positive"),
        (LambdaQuery("v", 1, 1.0, 3, {"alpha": 4.0, "beta": 1.0}), "row v"),
        (LambdaQuery("i", 1, 1.0, 4, {"A": 1.0, "A1": 2.0}), "row i"),
    ],
    ids=["nonpositive", "row_v_condition", "parameter_range"],
)
def test_lambda_not_applicable(q, pattern):
    assert not row_applicable(q)
    with pytest.raises(NotApplicableError, match=pattern):
        lambda_exponent(q)


@pytest.mark.parametrize(
    "kwargs",
    [dict(row="viii", k=1, dF=1.0, n=3), dict(row="i", k=0, dF=1.0, n=3),
     dict(row="vi", k=1, dF=1.0, n=1), dict(row="i", k=1, dF=1.0, n=3, params={"A": 1.0})],
    ids=["unknown_row", "zero_k", "dimension", "missing_param"],
)
def test_bad_queries(kwargs):
    with pytest.raises(NotApplicableError):
        LambdaQuery(**kwargs)


def test_infinite_degree_not_applicable():
    assert not row_applicable(LambdaQuery("vi", 1, math.inf, 4))


@pytest.mark.parametrize(
    "F, dF, lF",
    [(Identity(), 1.0, 1.0), (PPower(3.0), 1.5, 1.5), (PPower(2.0), 1.0, 1.0),
     (BornInfeldPlus(), 1.0, 0.5), (BornInfeldMinus(), math.inf, 1.0)],
    ids=["identity", "ppower3", "ppower2", "bi_plus", "bi_minus"],
)
def test_f_degrees(F, dF, lF):
    assert f_degree(F) == pytest.approx(dF, abs=1e-6)
    assert f_lower_degree(F) == pytest.approx(lF, abs=1e-6)


@pytest.mark.parametrize("F", [Identity(), PPower(3.0), BornInfeldPlus(), BornInfeldMinus()],
                         ids=["identity", "ppower3", "bi_plus", "bi_minus"])
def test_elasticity_within_degrees(F):
    t = np.geomspace(1e-6, 0.49, 50)
    e = F.elasticity(t)
    assert np.all(e <= f_degree(F) + 1e-9)
    assert np.all(e >= f_lower_degree(F) - 1e-9)


def test_born_infeld_elasticity_limits():
    F = BornInfeldPlus()
    assert F.elasticity(1e-10) == pytest.approx(1.0, abs=1e-6)
    assert F.elasticity(1e10) == pytest.approx(0.5, abs=1e-4)


def test_born_infeld_minus_domain():
    with pytest.raises(ValueError):
        BornInfeldMinus().F(0.5)


def test_grid_f_recovers_power():
    t = np.geomspace(1e-3, 1e3, 200)
    F = GridF(t, t**1.5)
    assert f_degree(F) == pytest.approx(1.5, abs=1e-9)
    assert f_lower_degree(F) == pytest.approx(1.5, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_euclidean_critical_profile(n):
    rho = np.geomspace(0.1, 100.0, 60)
    rep = check_monotonicity(Power(2.5, float(n)), n - 2.0, rho)
    assert rep.passed
    assert rep.worst_margin >= 0


def test_decreasing_ratio_detected():
    rho = np.geomspace(0.1, 10.0, 20)
    rep = check_monotonicity(Power(1.0, 1.0), 2.0, rho)
    assert not rep.passed
    assert rep.worst_pair[0] < rep.worst_pair[1]


def test_monotonicity_grid_validation():
    with pytest.raises(ValueError):
        check_monotonicity(Power(1.0, 1.0), 1.0, [1.0, 0.5])


def test_random_density_compliant_profiles_are_monotone():
    grid = np.geomspace(0.05, 5.0, 25)
    for i in range(100):
        M, e, lam = density_profile(np.random.default_rng([17, i]))
        rep = check_density_ratio(M, e, lam, grid)
        assert rep.passed, i
        assert rep.monotone, i


def test_density_ratio_value():
    rep = check_density_ratio(euclidean(3), Power(1.0, 2.0), 5.0, np.geomspace(0.1, 2.0, 10))
    assert rep.min_ratio == pytest.approx(5.0, rel=1e-8)


def test_density_ratio_failure():
    rep = check_density_ratio(euclidean(3), Power(1.0, 0.0), 4.0, np.geomspace(0.1, 2.0, 10))
    assert not rep.passed


def _little_o_oracle(alpha, beta, lam):
    r = sp.Symbol("r", positive=True)
    return sp.limit(r**alpha * sp.log(sp.E + r) ** beta / r**lam, r, sp.oo) == 0


def test_vanishing_rule_on_random_profiles():
    rng = np.random.default_rng(23)
    for i in range(100):
        lam = Fraction(int(rng.integers(1, 9)), 2)
        alpha = lam + Fraction(int(rng.integers(-4, 5)), 4) if i % 2 else lam
        beta = Fraction(int(rng.integers(-6, 7)), 3)
        E = PowerLog(1.0, float(alpha), float(beta))
        v = vanishing_test(E, float(lam))
        expected = _little_o_oracle(sp.Rational(alpha), sp.Rational(beta), sp.Rational(lam))
        assert v.little_o == expected, (alpha, beta, lam)
        assert v.consistent == (not expected)


def test_zero_energy_is_consistent():
    v = vanishing_test(PowerLog(0.0, 1.0, 0.0), 2.0)
    assert v.little_o and v.consistent


def test_dirichlet_conditions():
    assert dirichlet_applicable("vi", {}, 4, 1.0, 1.0, True)
    assert not dirichlet_applicable("vi", {}, 4, 1.0, 0.4, True)
    assert not dirichlet_applicable("vi", {}, 4, 1.0, 1.0, False)
    assert not dirichlet_applicable("vi", {}, 2, 1.0, 1.0, True)
    assert not dirichlet_applicable("i", {}, 4, 1.0, 1.0, True)


def test_ellipsoid_is_starlike():
    axes = np.array([1.0, 2.0, 0.5])

    def rho(th):
        return 1.0 / math.sqrt(float(np.sum((th / axes) ** 2)))

    rep = starlike_check(rho, 3, samples=50)
    assert rep.starlike and rep.min_inner > 0


def test_annulus_is_rejected():
    with pytest.raises(UnsupportedDomainError):
        starlike_check(lambda th: [1.0, 2.0], 3, samples=5)


def test_nonpositive_radius_rejected():
    with pytest.raises(UnsupportedDomainError):
        starlike_check(lambda th: -1.0, 3, samples=5)


@pytest.mark.parametrize(
    "M, F",
    [(euclidean(3), Identity()), (hyperbolic(3), PPower(3.0)), (power_model(4, 1.5), BornInfeldPlus())],
    ids=["euclidean_identity", "hyperbolic_ppower", "power_bi_plus"],
)
def test_stress_bound(M, F):
    e = PowerLog(1.0, -1.0, 0.0)
    rep = lemma_stress_check(M, F, e, grid=np.geomspace(0.1, 5.0, 50))
    assert rep.passed


def test_stress_bound_needs_convex_distance():
    with pytest.raises(NotApplicableError):
        lemma_stress_check(sphere(3), Identity(), Power(1.0, 0.0))
