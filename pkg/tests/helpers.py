"""Shared generators for the property suites."""
import numpy as np

from dualgeom.comparison import check_mixed_I, check_mixed_II, check_riccati_pair, check_sturm
from dualgeom.ode_engine import SolverOptions, solve_jacobi, solve_riccati
from dualgeom.inequalities import CKNScenario, HardyScenario, poly_bump
from dualgeom.model_geometry import CurvatureHypothesis as H
from dualgeom.model_geometry import euclidean, hyperbolic, power_model
from dualgeom.radial_fn import Power, Sum

CHECKERS = {
    "sturm": ("jacobi", "jacobi", check_sturm),
    "riccati": ("riccati", "riccati", check_riccati_pair),
    "mixed_I": ("riccati", "jacobi", check_mixed_I),
    "mixed_II": ("jacobi", "riccati", check_mixed_II),
}

# looser stepper tolerance keeps the 250-pair suite fast; margins stay ~1e-7
SUITE_OPTS = SolverOptions(singular_exponent=-2.0, rtol=1e-9, atol=1e-12)


def catalog_G(a: float, c: float):
    """``-c**2 - a(a-1)/r**2``; decreasing in ``a >= 1`` and in ``c >= 0``."""
    return Sum(Power(-c * c, 0.0), Power(-a * (a - 1.0), -2.0))


def solve(kind, G, kappa, T=2.5, opts=SUITE_OPTS):
    return (solve_jacobi if kind == "jacobi" else solve_riccati)(G, kappa, T, opts)


def draw_pair(rng, violated=False):
    """Parameters ``(a1, c1, k1), (a2, c2, k2)`` with ``G2 <= G1`` and ``k1 <= k2``.

    With ``violated`` the two coefficients are swapped so that ``G2 > G1``
    somewhere.
    """
    a1 = rng.uniform(1.0, 2.0)
    a2 = rng.uniform(a1 + (0.05 if violated else 0.0), 2.5)
    c1 = rng.uniform(0.0, 1.0)
    c2 = rng.uniform(c1, 1.5)
    k1 = rng.uniform(0.5, 1.5)
    k2 = rng.uniform(k1, 3.0)
    if violated:
        return (a2, c2, k1), (a1, c1, k2)
    return (a1, c1, k1), (a2, c2, k2)


def run_pair(theorem, p1, p2, tols=None):
    k1, k2, fn = CHECKERS[theorem]
    s1 = solve(k1, catalog_G(p1[0], p1[1]), p1[2])
    s2 = solve(k2, catalog_G(p2[0], p2[1]), p2[2])
    return fn(s1, s2, tols) if tols is not None else fn(s1, s2)


def sample_radii(lo, hi, n=64):
    return np.geomspace(lo, hi, n)


def ckn_scenario(rng, i):
    """CKN scenario ``i`` (flat, hyperbolic or power model by ``i % 3``) and its hypothesis."""
    n = int(rng.integers(2, 6))
    r1 = rng.uniform(0.05, 0.5)
    r2 = r1 + rng.uniform(0.5, 3.0)
    kind = i % 3
    if kind == 0:
        M, h = euclidean(n), H("flat", {})
        a, b = rng.uniform(-1.0, 2.0, 2)
    elif kind == 1:
        M, h = hyperbolic(n, rng.uniform(0.5, 2.0)), H("flat_nonpositive", {})
        a = rng.uniform(-2.0, (n - 1) / 2)
        b = rng.uniform(-2.0, n - 1 - a)
    else:
        A = rng.uniform(1.0, 2.5)
        M, h = power_model(n, A), H("sec_lower_power", {"A": A})
        a = rng.uniform(0.0, (n - 1) * A)
        b = (n - 1) * A - a + rng.uniform(0.0, 2.0)
    return CKNScenario(M, a, b, poly_bump(r1, r2), (r1, r2)), h


def hardy_scenario(rng, i):
    """Hardy scenario on a flat (even ``i``) or power model (odd ``i``)."""
    n = int(rng.integers(2, 5))
    if i % 2 == 0:
        A, M = 1.0, euclidean(n)
    else:
        A = rng.uniform(1.0, 2.0)
        M = power_model(n, A)
    p = (n - 1) * A + 1 + rng.uniform(0.5, 3.0)
    return HardyScenario(M, p, rng.uniform(1.0, 2.0), A, 1.0, 2.0)


def density_profile(rng):
    """Euclidean model, power-sum density and a ``lam`` it satisfies the ratio bound for."""
    n = int(rng.integers(2, 7))
    lam = rng.uniform(0.5, n + 1.0)
    e = None
    for _ in range(int(rng.integers(1, 4))):
        gamma = lam - n + rng.uniform(0.0, 2.0)
        term = Power(rng.uniform(0.1, 3.0), gamma)
        e = term if e is None else Sum(e, term)
    return euclidean(n), e, lam
