"""Energy growth exponents, monotonicity and vanishing checks.

For an energy density ``F(|w|**2 / 2)`` with F-degree ``d_F`` and a
``k``-form ``w`` satisfying a conservation law, the ball energy
``E(rho)`` makes ``E(rho) / rho**lam`` nondecreasing, where ``lam``
depends on the curvature row:

=====  =====================================================================
row    lam
=====  =====================================================================
i      1 + (n-1) A1 - 2 k dF A
ii     1 + (n-1)(1 + sqrt(1+4 A1))/2 - k dF (1 + sqrt(1+4 A))
iii    1 + (n-1)(|B - 1/2| + 1/2) - k dF (1 + sqrt(1 + 4 B1 (1-B1)))
iv     1 + (n-1)(1 + sqrt(1-4 B))/2 - k dF (1 + sqrt(1 + 4 B1))
v      n - 2 k (alpha/beta) dF        (needs (n-1) beta - 2 k alpha dF >= 0)
vi     n - 2 k dF
vii    n - (n-1) B/(2 eps) - 2 k exp(A/(2 eps)) dF
=====  =====================================================================

Rows other than v need ``lam > 0``.  Except for row v every entry is
``1 + (n-1) r h1 - 2 k dF r h2`` with ``h1 <= Hess r <= h2`` the bounds of
:func:`dualgeom.model_geometry.bound_catalog`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .model_geometry import CurvatureHypothesis, ModelManifold, bound_catalog, hess_eigenvalue
from .radial_fn import PowerLog, RadialExpr

__all__ = [
    "NotApplicableError",
    "UnsupportedDomainError",
    "FKind",
    "Identity",
    "PPower",
    "BornInfeldPlus",
    "BornInfeldMinus",
    "GridF",
    "f_degree",
    "f_lower_degree",
    "ROWS",
    "ROW_HYPOTHESIS",
    "LambdaQuery",
    "lambda_exponent",
    "row_applicable",
    "lambda_from_bounds",
    "PUBLISHED",
    "published_lambda",
    "p_harmonic_condition_disagreements",
    "check_monotonicity",
    "check_density_ratio",
    "vanishing_test",
    "dirichlet_applicable",
    "starlike_check",
    "lemma_stress_check",
]

ROWS = ("i", "ii", "iii", "iv", "v", "vi", "vii")


class NotApplicableError(ValueError):
    """The side condition of a curvature row fails."""


class UnsupportedDomainError(ValueError):
    """The domain is not a positive radial graph."""


# -- energy densities -----------------------------------------------------

class FKind:
    """Energy density ``F`` with ``F(0) = 0`` and ``F' > 0``."""

    name = "F"
    sup_t = math.inf

    def F(self, t):
        raise NotImplementedError

    def dF(self, t):
        raise NotImplementedError

    def degree(self) -> float:
        raise NotImplementedError

    def lower_degree(self) -> float:
        raise NotImplementedError

    def elasticity(self, t):
        """``t F'(t) / F(t)``."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0) or np.any(t >= self.sup_t):
            raise ValueError(f"{self.name}: t outside (0, {self.sup_t})")
        return t * self.dF(t) / self.F(t)


@dataclass(frozen=True)
class Identity(FKind):
    name = "identity"

    def F(self, t):
        return np.asarray(t, dtype=float)

    def dF(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def degree(self):
        return 1.0

    def lower_degree(self):
        return 1.0


@dataclass(frozen=True)
class PPower(FKind):
    """``F(t) = (2t)**(p/2) / p`` (the p-energy density)."""

    p: float
    name = "ppower"

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError("p must exceed 1")

    def F(self, t):
        return (2.0 * np.asarray(t, dtype=float)) ** (self.p / 2.0) / self.p

    def dF(self, t):
        return (2.0 * np.asarray(t, dtype=float)) ** (self.p / 2.0 - 1.0)

    def degree(self):
        return self.p / 2.0

    def lower_degree(self):
        return self.p / 2.0


@dataclass(frozen=True)
class BornInfeldPlus(FKind):
    """``F(t) = sqrt(1 + 2t) - 1``; elasticity falls from 1 to 1/2."""

    name = "bi_plus"

    def F(self, t):
        t = np.asarray(t, dtype=float)
        # 2t / (sqrt(1+2t) + 1) avoids cancellation at small t
        return 2.0 * t / (np.sqrt(1.0 + 2.0 * t) + 1.0)

    def dF(self, t):
        return 1.0 / np.sqrt(1.0 + 2.0 * np.asarray(t, dtype=float))

    def degree(self):
        return 1.0

    def lower_degree(self):
        return 0.5


@dataclass(frozen=True)
class BornInfeldMinus(FKind):
    """``F(t) = 1 - sqrt(1 - 2t)`` on ``t < 1/2``; elasticity rises from 1 to infinity."""

    name = "bi_minus"
    sup_t = 0.5

    def F(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t >= 0.5):
            raise ValueError("bi_minus: t must be below 1/2")
        return 2.0 * t / (1.0 + np.sqrt(1.0 - 2.0 * t))

    def dF(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t >= 0.5):
            raise ValueError("bi_minus: t must be below 1/2")
        return 1.0 / np.sqrt(1.0 - 2.0 * t)

    def degree(self):
        return math.inf

    def lower_degree(self):
        return 1.0


@dataclass(frozen=True, eq=False)
class GridF(FKind):
    """Sampled ``F`` on increasing positive ``t``; degrees are taken over the samples."""

    t: np.ndarray
    values: np.ndarray
    name = "grid"

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.size < 3 or np.any(np.diff(t) <= 0) or t[0] <= 0:
            raise ValueError("need at least 3 increasing positive samples")
        if np.any(v <= 0) or np.any(np.diff(v) <= 0):
            raise ValueError("F must be positive and increasing on the samples")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    def _elastic(self):
        # d ln F / d ln t on the samples
        return np.gradient(np.log(self.values), np.log(self.t))

    def F(self, t):
        return np.interp(np.log(t), np.log(self.t), self.values)

    def dF(self, t):
        e = np.interp(np.log(t), np.log(self.t), self._elastic())
        return e * self.F(t) / np.asarray(t, dtype=float)

    def degree(self):
        return float(np.max(self._elastic()))

    def lower_degree(self):
        return float(np.min(self._elastic()))


def f_degree(F: FKind) -> float:
    """F-degree ``sup t F'(t) / F(t)``."""
    return F.degree()


def f_lower_degree(F: FKind) -> float:
    """F-lower degree ``inf t F'(t) / F(t)``."""
    return F.lower_degree()


# -- lambda ---------------------------------------------------------------

_ROW_PARAMS = {
    "i": ("A", "A1"),
    "ii": ("A", "A1"),
    "iii": ("B", "B1"),
    "iv": ("B", "B1"),
    "v": ("alpha", "beta"),
    "vi": (),
    "vii": ("A", "B", "eps"),
}

# row -> (hypothesis kind, parameter renaming)
ROW_HYPOTHESIS = {
    "i": ("two_sided_power", {"A": "A", "A1": "A1"}),
    "ii": ("two_sided_ratio", {"A": "A", "A1": "A1"}),
    "iii": ("pinch_positive", {"B": "B", "B1": "B1"}),
    "iv": ("pinch_quarter", {"B": "B", "B1": "B1"}),
    "v": ("const_pinch", {"alpha": "alpha", "beta": "beta"}),
    "vi": ("flat", {}),
    "vii": ("decay_pinch", {"A": "A", "B": "B", "eps": "eps"}),
}


def _row(row) -> str:
    key = str(row).lower()
    if key.isdigit() and 1 <= int(key) <= 7:
        key = ROWS[int(key) - 1]
    if key not in ROWS:
        raise NotApplicableError(f"unknown row {row!r}")
    return key


@dataclass(frozen=True)
class LambdaQuery:
    """Curvature row, form degree ``k``, F-degree ``dF``, dimension ``n``."""

    row: str
    k: int
    dF: float
    n: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "row", _row(self.row))
        if self.k < 1:
            raise NotApplicableError("form degree k must be at least 1")
        if self.n < 2:
            raise NotApplicableError("dimension must be at least 2")
        missing = [p for p in _ROW_PARAMS[self.row] if p not in self.params]
        if missing:
            raise NotApplicableError(f"row {self.row}: missing parameters {missing}")
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})

    def hypothesis(self) -> CurvatureHypothesis:
        kind, names = ROW_HYPOTHESIS[self.row]
        return CurvatureHypothesis(kind, {k: self.params[v] for k, v in names.items()})


def _raw_lambda(q: LambdaQuery) -> float:
    p, n, k, dF = q.params, q.n, q.k, q.dF
    r = q.row
    if r == "i":
        return 1 + (n - 1) * p["A1"] - 2 * k * dF * p["A"]
    if r == "ii":
        return (1 + (n - 1) * (1 + math.sqrt(1 + 4 * p["A1"])) / 2
                - k * dF * (1 + math.sqrt(1 + 4 * p["A"])))
    if r == "iii":
        return (1 + (n - 1) * (abs(p["B"] - 0.5) + 0.5)
                - k * dF * (1 + math.sqrt(1 + 4 * p["B1"] * (1 - p["B1"]))))
    if r == "iv":
        return (1 + (n - 1) * (1 + math.sqrt(1 - 4 * p["B"])) / 2
                - k * dF * (1 + math.sqrt(1 + 4 * p["B1"])))
    if r == "v":
        return n - 2 * k * (p["alpha"] / p["beta"]) * dF
    if r == "vi":
        return n - 2 * k * dF
    return n - (n - 1) * p["B"] / (2 * p["eps"]) - 2 * k * math.exp(p["A"] / (2 * p["eps"])) * dF


def row_applicable(q: LambdaQuery) -> bool:
    """Side condition of the row (parameter ranges included)."""
    try:
        q.hypothesis()
    except ValueError:
        return False
    if not math.isfinite(q.dF):
        return False
    if q.row == "v":
        p = q.params
        return (q.n - 1) * p["beta"] - 2 * q.k * p["alpha"] * q.dF >= 0
    return _raw_lambda(q) > 0


def lambda_exponent(q: LambdaQuery) -> float:
    """Monotonicity exponent for ``q``.

    Raises
    ------
    NotApplicableError
        When the row's side condition fails.

    Examples
    --------
    >>> lambda_exponent(LambdaQuery("vi", 1, 1.0, 4))
    2.0
    """
    try:
        q.hypothesis()
    except ValueError as exc:
        raise NotApplicableError(f"row {q.row}: {exc}") from exc
    if not row_applicable(q):
        if q.row == "v":
            raise NotApplicableError("row v: (n-1) beta - 2 k alpha dF >= 0 fails")
        raise NotApplicableError(f"row {q.row}: lambda = {_raw_lambda(q):.6g} is not positive")
    return float(_raw_lambda(q))


def lambda_from_bounds(q: LambdaQuery, r) -> np.ndarray:
    """Pointwise ``1 + (n-1) r h1(r) - 2 k dF r h2(r)`` from the bound catalog."""
    r = np.asarray(r, dtype=float)
    b = bound_catalog(q.hypothesis(), q.n)
    return 1 + (q.n - 1) * r * b.lower._eval(r) - 2 * q.k * q.dF * r * b.upper._eval(r)


# -- published specialisations ---------------------------------------------

def _pym(row, n, p, P):
    """Table for p-Yang-Mills fields (k = 2, dF = p/2), as printed."""
    s = math.sqrt
    return {
        "i": lambda: 1 + (n - 1) * P["A1"] - 2 * p * P["A"],
        "ii": lambda: 1 + (n - 1) * (1 + s(1 + 4 * P["A1"])) / 2 - p * (1 + s(1 + 4 * P["A"])),
        "iii": lambda: 1 + (n - 1) * (abs(P["B"] - 0.5) + 0.5) - p * (1 + s(1 + 4 * P["B1"] * (1 - P["B1"]))),
        "iv": lambda: 1 + (n - 1) * (1 + s(1 - 4 * P["B"] * (1 - P["B"]))) / 2 - p - p * s(1 + 4 * P["B1"]),
        "v": lambda: n - 2 * p * P["alpha"] / P["beta"],
        "vi": lambda: n - 2 * p,
        "vii": lambda: n - (n - 1) * P["B"] / (2 * P["eps"]) - 2 * p * math.exp(P["A"] / (2 * P["eps"])),
    }[row]()


def _pharm(row, n, p, P):
    """Table for p-harmonic maps (k = 1, dF = p/2), as printed."""
    s = math.sqrt
    return {
        "i": lambda: 1 + (n - 1) * P["A1"] - p * P["A"],
        "ii": lambda: 1 + (n - 1) * (1 + s(1 + 4 * P["A1"])) / 2 - p * (1 + s(1 + 4 * P["A"])) / 2,
        "iii": lambda: 1 + (n - 1) * (abs(P["B"] - 0.5) + 0.5) - p * (1 + s(1 + 4 * P["B1"] * (1 - P["B1"]))) / 2,
        "iv": lambda: 1 + (n - 1) * (1 + s(1 - 4 * P["B"])) / 2 - p * (1 + s(1 + 4 * P["B1"])) / 2,
        "v": lambda: n - p * P["alpha"] / P["beta"],
        "vi": lambda: n - p,
        "vii": lambda: n - (n - 1) * P["B"] / (2 * P["eps"]) - p * math.exp(P["A"] / (2 * P["eps"])),
    }[row]()


def _biplus(row, n, _p, P):
    """Table for Born-Infeld fields with the plus sign (k = 2, dF = 1), as printed."""
    s = math.sqrt
    return {
        "i": lambda: 1 + (n - 1) * P["A1"] - 4 * P["A"],
        "ii": lambda: 1 + (n - 1) * (1 + s(1 + 4 * P["A1"])) / 2 - 2 * s(1 + 4 * P["A"]),
        "iii": lambda: 1 + (n - 1) * (abs(P["B"] - 0.5) + 0.5) - 2 * (1 + s(1 + 4 * P["B1"] * (1 - P["B1"]))),
        "iv": lambda: 1 + (n - 1) * (1 + s(1 - 4 * P["B"])) / 2 - 2 * (1 + s(1 + 4 * P["B1"])),
        "v": lambda: n - 4 * P["alpha"] / P["beta"],
        "vi": lambda: n - 4,
        "vii": lambda: n - (n - 1) * P["B"] / (2 * P["eps"]) - 4 * math.exp(P["A"] / (2 * P["eps"])),
    }[row]()


def _dirichlet(row, n, dF, P):
    """Table for the Dirichlet problem (k = 1, general dF), as printed."""
    s = math.sqrt
    return {
        "i": lambda: 1 + (n - 1) * P["A1"] - 2 * dF * P["A"],
        "ii": lambda: 1 + (n - 1) * (1 + s(1 + 4 * P["A1"])) / 2 - dF * (1 + s(1 + 4 * P["A"])),
        "iii": lambda: 1 + (n - 1) * (abs(P["B"] - 0.5) + 0.5) - dF * (1 + s(1 + 4 * P["B1"] * (1 - P["B1"]))),
        "iv": lambda: 1 + (n - 1) * (1 + s(1 - 4 * P["B"])) / 2 - dF * (1 + s(1 + 4 * P["B1"])),
        "v": lambda: n - 2 * P["alpha"] / P["beta"] * dF,
        "vi": lambda: n - 2 * dF,
        "vii": lambda: n - (n - 1) * P["B"] / (2 * P["eps"]) - 2 * math.exp(P["A"] / (2 * P["eps"])) * dF,
    }[row]()


# family -> (table, k, dF from the family parameter)
PUBLISHED = {
    "p_yang_mills": (_pym, 2, lambda x: x / 2.0),
    "p_harmonic": (_pharm, 1, lambda x: x / 2.0),
    "born_infeld_plus": (_biplus, 2, lambda x: 1.0),
    "dirichlet": (_dirichlet, 1, lambda x: x),
}


def published_lambda(family: str, row, n: int, x: float, params: dict) -> tuple[float, float]:
    """Printed value and master-formula value for a specialised family.

    ``x`` is ``p`` for the p-families, ignored for Born-Infeld and ``dF``
    for the Dirichlet family.  Returns ``(printed, master)``.
    """
    table, k, to_dF = PUBLISHED[family]
    row = _row(row)
    q = LambdaQuery(row, k, to_dF(x), n, params)
    return float(table(row, n, x, q.params)), float(_raw_lambda(q))


def _pharm_conditions(row, n, p, P):
    """Side conditions listed for p-harmonic maps (flat row printed as ``n - p k`` with k = 1)."""
    if row == "v":
        return (n - 1) * P["beta"] - p * P["alpha"] >= 0
    return _pharm(row, n, p, P) > 0


def p_harmonic_condition_disagreements(n: int, p: float, params_by_row: dict) -> list:
    """Rows where the p-harmonic condition list and the general list at ``dF = p/2`` differ."""
    out = []
    for row, P in params_by_row.items():
        row = _row(row)
        q = LambdaQuery(row, 1, p / 2.0, n, P)
        try:
            q.hypothesis()
        except ValueError:
            continue
        if _pharm_conditions(row, n, p, q.params) != row_applicable(q):
            out.append(row)
    return out


# -- monotonicity ---------------------------------------------------------

@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    worst_pair: tuple
    worst_margin: float
    ratios: np.ndarray = field(repr=False, default=None)


def check_monotonicity(E, lam: float, grid, rel_tol: float = 1e-8) -> MonotonicityReport:
    """Check that ``E(rho) / rho**lam`` is nondecreasing on ``grid``.

    ``worst_margin`` is the most negative ``ratio_j / max_{i<j} ratio_i - 1``
    and ``worst_pair`` the corresponding ``(rho_i, rho_j)``.
    """
    rho = np.asarray(grid, dtype=float)
    if np.any(np.diff(rho) <= 0) or rho[0] <= 0:
        raise ValueError("grid must be positive and increasing")
    vals = E._eval(rho) if isinstance(E, RadialExpr) else np.asarray(E(rho), dtype=float)
    ratio = vals / rho ** lam
    run = np.maximum.accumulate(ratio)
    arg = np.zeros(rho.size, dtype=int)
    for j in range(1, rho.size):
        arg[j] = arg[j - 1] if ratio[arg[j - 1]] >= ratio[j] else j
    scale = np.where(run[:-1] > 0, run[:-1], 1.0)
    margins = (ratio[1:] - run[:-1]) / scale
    if margins.size == 0:
        return MonotonicityReport(True, (rho[0], rho[0]), 0.0, ratio)
    j = int(np.argmin(margins))
    worst = float(margins[j])
    pair = (float(rho[arg[j]]), float(rho[j + 1]))
    return MonotonicityReport(worst >= -rel_tol, pair, worst, ratio)


@dataclass(frozen=True)
class DensityRatioReport:
    passed: bool
    min_ratio: float
    at: float
    monotone: bool
    energies: np.ndarray = field(repr=False, default=None)


def ball_energy(M: ModelManifold, e: RadialExpr, grid, start: float = 0.0) -> np.ndarray:
    """``int_start^rho e f**(n-1) dr`` at each ``rho`` in ``grid`` (sphere area omitted)."""
    rho = np.asarray(grid, dtype=float)
    m = M.n - 1
    f = M.warp

    def integrand(r):
        x = np.atleast_1d(np.asarray(r, dtype=float))
        return float((e._eval(x) * f._eval(x) ** m)[0])

    pts = [p for p in e.breakpoints()]
    out = np.empty_like(rho)
    acc, last = 0.0, start
    for i, r in enumerate(rho):
        inner = [p for p in pts if last < p < r]
        acc += quad(integrand, last, r, epsabs=1e-13, epsrel=1e-12, limit=200,
                    points=inner or None)[0]
        out[i], last = acc, r
    return out


def check_density_ratio(M: ModelManifold, e: RadialExpr, lam: float, grid,
                        tol: float = 1e-8, start: float = 0.0) -> DensityRatioReport:
    """Check ``rho e(rho) f(rho)**(n-1) / E(rho) >= lam`` and the implied monotonicity."""
    rho = np.asarray(grid, dtype=float)
    E = ball_energy(M, e, rho, start)
    surf = rho * e._eval(rho) * M.warp._eval(rho) ** (M.n - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(E > 0, surf / E, np.inf)
    i = int(np.argmin(ratio))
    ok = bool(ratio[i] >= lam - tol)
    mono = check_monotonicity(lambda r: E, lam, rho).passed
    return DensityRatioReport(ok, float(ratio[i]), float(rho[i]), mono, E)


@dataclass(frozen=True)
class VanishingVerdict:
    """``little_o`` is the growth test; ``consistent`` says whether it can
    coexist with monotonicity (only for ``E == 0``)."""

    little_o: bool
    consistent: bool
    certificate: str


def vanishing_test(E: PowerLog, lam: float) -> VanishingVerdict:
    """Little-o test ``E = o(rho**lam)`` on the power-log family.

    A monotone ratio ``E / rho**lam`` that tends to 0 must vanish, so a
    true verdict with a nonzero coefficient is reported as a
    contradiction certificate.
    """
    little = E.alpha < lam or (E.alpha == lam and E.beta < 0)
    if not little:
        return VanishingVerdict(False, True, "no vanishing: E is not o(rho^lambda)")
    if E.coef == 0:
        return VanishingVerdict(True, True, "E == 0")
    r = np.array([1.0, 1e3, 1e6])
    q = E._eval(r) / r ** lam
    return VanishingVerdict(
        True, False,
        f"E/rho^lambda -> 0 (samples {q[0]:.3g}, {q[1]:.3g}, {q[2]:.3g}) contradicts "
        "a nondecreasing ratio unless E == 0",
    )


def dirichlet_applicable(row, params: dict, n: int, dF: float, lF: float, starlike: bool) -> bool:
    """Vanishing for the Dirichlet problem: row condition, ``lF >= 1/2`` and starlike domain."""
    try:
        q = LambdaQuery(row, 1, dF, n, params)
    except NotApplicableError:
        return False
    return row_applicable(q) and lF >= 0.5 and bool(starlike)


@dataclass(frozen=True)
class StarlikeReport:
    starlike: bool
    min_inner: float
    directions: int


def _sphere_samples(n: int, count: int, rng) -> np.ndarray:
    x = rng.standard_normal((count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def starlike_check(rho_boundary, n: int, samples: int = 200, seed: int = 0,
                   h: float = 1e-6) -> StarlikeReport:
    """Evaluate ``<d/dr, nu>`` on a radial-graph boundary ``x = rho(theta) theta``.

    For a graph the quantity is ``rho / sqrt(rho**2 + |grad_theta rho|**2)``
    and is always positive; the check exists to reject inputs that are not
    positive single-valued graphs (``rho_boundary`` returning several radii,
    as for an annulus, or a nonpositive radius).
    """
    rng = np.random.default_rng(seed)
    thetas = _sphere_samples(n, samples, rng)
    worst = math.inf

    def radius(th):
        v = np.atleast_1d(np.asarray(rho_boundary(th), dtype=float))
        if v.size != 1:
            raise UnsupportedDomainError("boundary meets a ray more than once (not a radial graph)")
        if not (v[0] > 0 and math.isfinite(v[0])):
            raise UnsupportedDomainError("radial graph must be positive and finite")
        return float(v[0])

    for th in thetas:
        rho = radius(th)
        # orthonormal tangent basis at th
        basis = np.linalg.svd(th[None, :])[2][1:]
        grad = np.empty(n - 1)
        for i, e in enumerate(basis):
            p = th + h * e
            m = th - h * e
            grad[i] = (radius(p / np.linalg.norm(p)) - radius(m / np.linalg.norm(m))) / (2 * h)
        worst = min(worst, rho / math.sqrt(rho * rho + float(grad @ grad)))
    return StarlikeReport(worst >= 0, worst, samples)


@dataclass(frozen=True)
class StressReport:
    passed: bool
    min_slack: float
    at: float


def lemma_stress_check(M: ModelManifold, F: FKind, e: RadialExpr, k: int = 1,
                       grid=None, tol: float = 1e-8) -> StressReport:
    """Stress-energy lower bound for ``w = e(r) dr`` on a model.

    With ``X = r grad r`` and ``h = f'/f``,
    ``<S, grad X> = F (1 + (n-1) r h) - F'(|w|**2/2) e**2``, which must be at
    least ``(1 + (n-1) r h - 2 k dF r h) F`` whenever ``r h >= 1``.

    Raises
    ------
    NotApplicableError
        If ``r h < 1`` somewhere on the grid.
    """
    if grid is None:
        top = 0.95 * M.T if math.isfinite(M.T) else 10.0
        grid = np.geomspace(1e-3 * top, top, 200)
    r = np.asarray(grid, dtype=float)
    rh = r * hess_eigenvalue(M)._eval(r)
    if np.any(rh < 1 - 1e-12):
        raise NotApplicableError("r h >= 1 fails; the stress bound does not apply")
    ev = e._eval(r)
    t = ev * ev / 2
    pos = t > 0
    Fv = np.zeros_like(r)
    dFv = np.zeros_like(r)
    Fv[pos] = F.F(t[pos])
    dFv[pos] = F.dF(t[pos])
    lhs = Fv * (1 + (M.n - 1) * rh) - dFv * ev * ev
    dF = F.degree()
    rhs = (1 + (M.n - 1) * rh - 2 * k * dF * rh) * Fv
    slack = (lhs - rhs) / np.maximum(1.0, np.abs(lhs))
    i = int(np.argmin(slack))
    return StressReport(bool(slack[i] >= -tol), float(slack[i]), float(r[i]))
