"""Sharp constants for weighted Hardy-type inequalities and radial verifiers.

Constants
---------
Every Caffarelli-Kohn-Nirenberg (CKN) constant comes from one identity,

    1/2 |int u**2 (r Delta r - a - b) / r**(a+b+1)| <= sqrt(I_a I_b),

with ``I_a = int u**2 / r**(2a)`` and ``I_b = int |grad u|**2 / r**(2b)``.
A curvature hypothesis bounds ``r Delta r`` by ``(n-1) h`` (``h`` the
scaled Hessian bound of :mod:`dualgeom.model_geometry`), so with
``raw = (a + b - (n-1) h) / 2``:

* lower curvature bounds give ``r Delta r <= (n-1) h`` and ``C = raw``,
  valid when ``raw >= 0``;
* upper curvature bounds give ``r Delta r >= (n-1) h`` and ``C = -raw``,
  valid when ``-raw >= 0``;
* equalities give ``C = |raw|`` for all ``a, b``.

The side conditions of the published rows (``n <= (a+b+A)/A`` and so on)
are exactly the sign requirements above.  The seven Costa constants are
``raw**2`` at fixed ``(a, b)``.

Verification
------------
Only radial test functions are used; the sphere area factor cancels, so
every integral is one-dimensional with density ``f**(n-1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import quad

from .comparison import HypothesisError
from .growth import integral_diverges
from .model_geometry import CurvatureHypothesis, ModelManifold, verify_bounds
from .radial_fn import Piecewise, Power, Product, RadialExpr, Rational, const

__all__ = [
    "InequalityError",
    "InequalityReport",
    "CKNScenario",
    "HardyScenario",
    "CKN_KINDS",
    "COSTA_CASES",
    "ckn_constant",
    "costa_constant",
    "hardy_constant",
    "poly_bump",
    "exp_bump",
    "hardy_test_function",
    "radial_integrals",
    "verify_identity",
    "verify_ckn",
    "verify_hardy",
    "embedding_norms",
    "near_sharp_ratio",
    "near_sharp_search",
]

QUAD_TOL = 1e-9
SLACK_TOL = 1e-6


class InequalityError(ValueError):
    """A side condition or exponent condition fails, or no table row matches."""


# kind -> (scaled Hessian bound h(params), side) with side in {"lower", "upper", "equal"}
def _h_power(p):
    return p["A"]


CKN_KINDS = {
    "flat": (lambda p: 1.0, "equal"),
    "flat_nonnegative": (lambda p: 1.0, "lower"),
    "flat_nonpositive": (lambda p: 1.0, "upper"),
    "ric_lower_power": (_h_power, "lower"),
    "sec_lower_power": (_h_power, "lower"),
    "sec_upper_power": (lambda p: p["A1"], "upper"),
    "equality_power": (_h_power, "equal"),
    "equality_ratio": (lambda p: (1.0 + math.sqrt(1.0 + 4.0 * p["A"])) / 2.0, "equal"),
    "ric_lower_positive": (lambda p: (1.0 + math.sqrt(1.0 + 4.0 * p["B1"] * (1.0 - p["B1"]))) / 2.0,
                           "lower"),
    "sec_lower_positive": (lambda p: (1.0 + math.sqrt(1.0 + 4.0 * p["B1"] * (1.0 - p["B1"]))) / 2.0,
                           "lower"),
    "sec_upper_positive": (lambda p: abs(p["B"] - 0.5) + 0.5, "upper"),
}

# case -> (a, b) as functions of the free parameter
COSTA_CASES = {
    "i": lambda t: (t + 1.0, t),
    "ii": lambda t: (t, t + 1.0),
    "iii": lambda t: (-t - 1.0, t),
    "iv": lambda t: (0.0, 1.0),
    "v": lambda t: (-1.0, 1.0),
    "vi": lambda t: (0.0, 0.0),
    "vii": lambda t: (1.0, 0.0),
}

_ROMAN = {str(i + 1): k for i, k in enumerate(COSTA_CASES)}


def _raw(h: CurvatureHypothesis, a: float, b: float, n: int) -> tuple[float, str]:
    if h.kind not in CKN_KINDS:
        raise InequalityError(f"no constant table row for hypothesis {h.kind!r}")
    hfun, side = CKN_KINDS[h.kind]
    return (a + b - (n - 1) * hfun(h.params)) / 2.0, side


def ckn_constant(h: CurvatureHypothesis, a: float, b: float, n: int) -> float:
    """Sharp CKN constant for hypothesis ``h`` and weights ``a, b``.

    Raises
    ------
    InequalityError
        When the row's side condition fails; the message names it.

    Examples
    --------
    >>> ckn_constant(CurvatureHypothesis("flat"), 0, 0, 3)
    1.0
    >>> ckn_constant(CurvatureHypothesis("ric_lower_power", {"A": 1}), 2, 2, 3)
    1.0
    """
    raw, side = _raw(h, a, b, n)
    hval = CKN_KINDS[h.kind][0](h.params)
    if side == "equal":
        return abs(raw)
    if side == "lower":
        if raw < -1e-12:
            raise InequalityError(
                f"{h.kind}: side condition n <= (a+b+h)/h fails "
                f"(n={n}, a+b={a + b}, h={hval:.6g})"
            )
        return max(raw, 0.0)
    if -raw < -1e-12:
        raise InequalityError(
            f"{h.kind}: side condition n >= (a+b+h)/h fails (n={n}, a+b={a + b}, h={hval:.6g})"
        )
    return max(-raw, 0.0)


def costa_constant(case, h: CurvatureHypothesis, n: int, t: float = 0.0) -> float:
    """Constant ``C_1 ... C_7`` of the seven weighted inequalities.

    ``case`` is a roman numeral ``"i"``..``"vii"`` (or ``1``..``7``); ``t``
    is the free weight of cases i to iii (``b`` for i and iii, ``a`` for
    ii).  The published tables square the CKN expression without
    restating the side conditions, and so does this function.
    """
    key = str(case).lower()
    key = _ROMAN.get(key, key)
    if key not in COSTA_CASES:
        raise InequalityError(f"unknown case {case!r}")
    a, b = COSTA_CASES[key](float(t))
    raw, _ = _raw(h, a, b, n)
    return raw * raw


def hardy_constant(p: float, n: int, A: float = 1.0) -> float:
    """``((p - 1 - (n-1) A) / p)**p``; needs ``p > (n-1) A + 1``."""
    if not p > (n - 1) * A + 1:
        raise InequalityError(
            f"Hardy exponent condition p > (n-1)A + 1 fails (p={p}, n={n}, A={A})"
        )
    return ((p - 1.0 - (n - 1) * A) / p) ** p


# -- test functions -------------------------------------------------------

def _zero():
    return const(0.0)


def poly_bump(r1: float, r2: float, m: int = 3) -> Piecewise:
    """``((r - r1)(r2 - r))**m`` on ``[r1, r2]``, zero elsewhere (``C**(m-1)``)."""
    if not 0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")
    core = Polynomial([-r1, 1.0]) * Polynomial([r2, -1.0])
    poly = core ** m
    return Piecewise((r1, r2), (_zero(), Rational(tuple(poly.coef)), _zero()))


class _ExpPoly(RadialExpr):
    """``exp(-lam r) * P(r)`` for a polynomial ``P`` (ascending coefficients)."""

    def __init__(self, lam: float, coef):
        self.lam = float(lam)
        self.coef = np.asarray(coef, dtype=float)
        self.T = math.inf

    def _eval(self, r):
        return np.exp(-self.lam * r) * np.polynomial.polynomial.polyval(r, self.coef)

    def derivative(self):
        dp = np.polynomial.polynomial.polyder(self.coef)
        new = np.polynomial.polynomial.polysub(dp, self.lam * self.coef)
        return _ExpPoly(self.lam, new)


def exp_bump(lam: float, r1: float, r2: float) -> Piecewise:
    """``exp(-lam r)`` switched on over ``[r1/2, r1]`` and off over ``[r2, 2 r2]``.

    Both switches are quintic smoothsteps, so the function is ``C**2``.
    As ``r1 -> 0`` and ``r2 -> oo`` it approaches the CKN extremal for
    ``a = b = 0``.
    """
    if not 0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")
    up = _smoothstep(r1 / 2, r1, rising=True)
    down = _smoothstep(r2, 2 * r2, rising=False)
    return Piecewise(
        (r1 / 2, r1, r2, 2 * r2),
        (_zero(), _ExpPoly(lam, up.coef), _ExpPoly(lam, [1.0]), _ExpPoly(lam, down.coef), _zero()),
    )


def _smoothstep(x0: float, x1: float, rising: bool) -> Polynomial:
    x = Polynomial([-x0 / (x1 - x0), 1.0 / (x1 - x0)])
    s = 10 * x ** 3 - 15 * x ** 4 + 6 * x ** 5
    return s if rising else 1 - s


def hardy_test_function(s: float, R1: float, R2: float) -> Piecewise:
    """``u = r**s chi(r)``, ``chi = 1`` on ``(0, R1]`` and ``0`` beyond ``R2``."""
    if not 0 < R1 < R2:
        raise ValueError("need 0 < R1 < R2")
    chi = _smoothstep(R1, R2, rising=False)
    return Piecewise(
        (R1, R2),
        (Power(1.0, s), Product(Power(1.0, s), Rational(tuple(chi.coef))), _zero()),
    )


# -- quadrature ---------------------------------------------------------

def _ev(e: RadialExpr, r: float) -> float:
    return float(e._eval(np.atleast_1d(np.asarray(r, dtype=float)))[0])


def _integrate(fn, lo, hi, tol, points=()):
    pts = sorted(p for p in points if lo < p < hi)
    val, err = quad(fn, lo, hi, epsabs=tol, epsrel=1e-11, limit=400, points=pts or None)
    return float(val)


@dataclass(frozen=True)
class CKNScenario:
    """Radial CKN scenario on a model.

    ``support = (r1, r2)`` must satisfy ``0 < r1 < r2 < T``.
    """

    M: ModelManifold
    a: float
    b: float
    u: RadialExpr
    support: tuple
    quad_tol: float = QUAD_TOL

    def __post_init__(self):
        r1, r2 = self.support
        if not 0 < r1 < r2 < self.M.T:
            raise InequalityError("support must satisfy 0 < r1 < r2 < T")


@dataclass(frozen=True)
class HardyScenario:
    """Hardy scenario with ``u = r**s chi``; ``chi`` switches off over ``[R1, R2]``."""

    M: ModelManifold
    p: float
    s: float = 1.0
    A: float = 1.0
    R1: float = 1.0
    R2: float = 2.0
    quad_tol: float = QUAD_TOL


@dataclass(frozen=True)
class InequalityReport:
    """``lhs <= rhs`` margin record; ``slack = rhs - lhs``."""

    scenario_id: str
    C: float
    lhs: float
    rhs: float
    slack: float
    verdict: str
    extra: tuple = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def csv_row(self) -> list:
        return [self.scenario_id, f"{self.C:.17g}", f"{self.lhs:.17g}", f"{self.rhs:.17g}",
                f"{self.slack:.17g}", self.verdict]


def _verdict(slack: float, scale: float) -> str:
    return "pass" if slack >= -SLACK_TOL * max(1.0, scale) else "fail"


def radial_integrals(s: CKNScenario) -> dict:
    """The integrals ``I_a``, ``I_b``, ``I_mid`` and both identity paths.

    ``identity`` is ``int u**2 (r Delta r - a - b) / r**(a+b+1)`` and
    ``by_parts`` the same quantity as ``-2 int u u' / r**(a+b)``, using
    ``div(grad r / r**(a+b)) = (r Delta r - a - b) / r**(a+b+1)``.
    """
    M, a, b, u = s.M, s.a, s.b, s.u
    du = u.derivative()
    f = M.warp
    df = f.derivative()
    m = M.n - 1
    lo, hi = s.support
    pts = [x for x in u.breakpoints()]

    def dens(r):
        return _ev(f, r) ** m

    def ia(r):
        return _ev(u, r) ** 2 / r ** (2 * a) * dens(r)

    def ib(r):
        return _ev(du, r) ** 2 / r ** (2 * b) * dens(r)

    def imid(r):
        return _ev(u, r) ** 2 / r ** (a + b + 1) * dens(r)

    def ident(r):
        rdr = m * r * _ev(df, r) / _ev(f, r)
        return _ev(u, r) ** 2 * (rdr - a - b) / r ** (a + b + 1) * dens(r)

    def parts(r):
        return -2.0 * _ev(u, r) * _ev(du, r) / r ** (a + b) * dens(r)

    tol = s.quad_tol
    return {
        "I_a": _integrate(ia, lo, hi, tol, pts),
        "I_b": _integrate(ib, lo, hi, tol, pts),
        "I_mid": _integrate(imid, lo, hi, tol, pts),
        "identity": _integrate(ident, lo, hi, tol, pts),
        "by_parts": _integrate(parts, lo, hi, tol, pts),
    }


def verify_identity(s: CKNScenario, scenario_id: str = "identity") -> InequalityReport:
    """Check the Cauchy-Schwarz identity-side inequality.

    ``extra`` holds ``("paths_diff", d)``: the difference between the
    direct and the integrated-by-parts evaluation.
    """
    I = radial_integrals(s)
    lhs = 0.5 * abs(I["identity"])
    rhs = math.sqrt(max(I["I_a"], 0.0) * max(I["I_b"], 0.0))
    slack = rhs - lhs
    return InequalityReport(scenario_id, 0.5, lhs, rhs, slack, _verdict(slack, rhs),
                            (("paths_diff", I["identity"] - I["by_parts"]),))


def verify_ckn(s: CKNScenario, C: float | None = None,
               hypothesis: CurvatureHypothesis | None = None,
               scenario_id: str = "ckn") -> InequalityReport:
    """Check ``C I_mid <= sqrt(I_a I_b)``.

    With ``hypothesis`` the model is first certified against it (refusing
    on mismatch) and ``C`` defaults to :func:`ckn_constant`.
    """
    if hypothesis is not None:
        try:
            cert = verify_bounds(s.M, hypothesis)
        except HypothesisError as exc:
            raise InequalityError(f"model does not satisfy {hypothesis.kind}: {exc}") from exc
        if not cert.passed:
            raise InequalityError(f"bound certificate failed for {hypothesis.kind}")
        if C is None:
            C = ckn_constant(hypothesis, s.a, s.b, s.M.n)
    if C is None:
        raise InequalityError("need a constant or a hypothesis")
    I = radial_integrals(s)
    lhs = C * I["I_mid"]
    rhs = math.sqrt(max(I["I_a"], 0.0) * max(I["I_b"], 0.0))
    slack = rhs - lhs
    return InequalityReport(scenario_id, float(C), lhs, rhs, slack, _verdict(slack, rhs))


def near_sharp_ratio(s: CKNScenario) -> float:
    """``sqrt(I_a I_b) / I_mid`` (infinite for ``u = 0``)."""
    I = radial_integrals(s)
    if I["I_mid"] == 0:
        return math.inf
    return math.sqrt(I["I_a"] * I["I_b"]) / I["I_mid"]


def embedding_norms(u: RadialExpr, M: ModelManifold, a: float, b: float, support,
                    C: float | None = None, quad_tol: float = QUAD_TOL) -> dict:
    """Weighted norms ``H_ab``, ``L_mid`` (weight ``(a+b+1)/2``) and ``D_b``.

    With a positive ``C`` the record also holds ``embedding_ok``:
    ``L_mid <= H_ab / sqrt(2 C)`` by the arithmetic-geometric mean step.
    """
    I = radial_integrals(CKNScenario(M, a, b, u, tuple(support), quad_tol))
    out = {
        "H_ab": math.sqrt(max(I["I_a"] + I["I_b"], 0.0)),
        "L_mid": math.sqrt(max(I["I_mid"], 0.0)),
        "D_gamma": math.sqrt(max(I["I_b"], 0.0)),
    }
    if C is not None and C > 0:
        bound = out["H_ab"] / math.sqrt(2.0 * C)
        out["embedding_ok"] = out["L_mid"] <= bound * (1 + SLACK_TOL) + SLACK_TOL
    return out


def verify_hardy(s: HardyScenario, scenario_id: str = "hardy",
                 check_model: bool = True) -> InequalityReport:
    """Check ``hardy_constant * int |u/r|**p <= int |u'|**p`` for ``u = r**s chi``.

    Raises
    ------
    InequalityError
        If ``p <= (n-1)A + 1``, if ``u/r`` is not ``L**p`` near 0, or if
        the model violates the Ricci lower bound with constant ``A``.
    """
    M = s.M
    n = M.n
    Cp = hardy_constant(s.p, n, s.A)
    # int_0 r**e dr < oo  <=>  int^oo t**(-e-2) dt < oo
    e = (s.s - 1.0) * s.p + (n - 1) * M.warp.leading_exponent()
    if integral_diverges(-e - 2.0, 0.0):
        raise InequalityError("u/r is not in L^p near the pole")
    if check_model:
        h = CurvatureHypothesis("ric_lower_power", {"A": s.A})
        try:
            verify_bounds(M, h)
        except HypothesisError as exc:
            raise InequalityError(f"model violates the Ricci lower bound: {exc}") from exc
    u = hardy_test_function(s.s, s.R1, s.R2)
    du = u.derivative()
    f = M.warp
    m = n - 1
    hi = min(s.R2, M.T)
    pts = [s.R1]

    def left(r):
        return abs(_ev(u, r) / r) ** s.p * _ev(f, r) ** m

    def right(r):
        return abs(_ev(du, r)) ** s.p * _ev(f, r) ** m

    L = Cp * _integrate(left, 0.0, hi, s.quad_tol, pts)
    R = _integrate(right, 0.0, hi, s.quad_tol, pts)
    slack = R - L
    return InequalityReport(scenario_id, Cp, L, R, slack, _verdict(slack, R))


def near_sharp_search(M: ModelManifold, a: float, b: float,
                      r1s=(0.01, 0.1, 0.5), r2s=(2.0, 5.0, 10.0, 20.0),
                      lam: float = 1.0, quad_tol: float = QUAD_TOL) -> tuple[float, tuple]:
    """Minimise the CKN ratio over the two-parameter family :func:`exp_bump`.

    Returns ``(ratio, (r1, r2))``.  Polynomial bumps keep a fixed shape and
    stay far above the sharp constant; the exponential family contains
    near-extremals for ``a = b = 0``.
    """
    best = (math.inf, (math.nan, math.nan))
    for r1 in r1s:
        for r2 in r2s:
            if not r1 < r2 or 2 * r2 >= M.T:
                continue
            s = CKNScenario(M, a, b, exp_bump(lam, r1, r2), (r1 / 2, 2 * r2), quad_tol)
            best = min(best, (near_sharp_ratio(s), (r1, r2)))
    return best
