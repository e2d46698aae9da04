"""Rotationally symmetric model manifolds and the curvature-to-bound catalog.

A model is ``dr**2 + f(r)**2 dsigma**2`` in dimension ``n``.  On a model

* radial curvature            K = -f''/f
* Laplacian of the distance   Delta r = (n-1) f'/f
* Hessian eigenvalue          f'/f   (on the orthocomplement of d/dr)
* mean curvature of spheres   H = f'/f
* radial Ricci curvature      (n-1) K

The catalog maps a curvature hypothesis to closed-form bounds on the
Hessian eigenvalue; Laplacian bounds are ``(n-1)`` times these and mean
curvature bounds equal them.  Bounds are certified pointwise on
``(0, T)``; the weak (distributional) extension across the cut locus is a
trust assumption and is not tested.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .comparison import ComparisonCertificate, HypothesisError, Tolerances
from .ode_engine import JacobiWarp, SolverOptions, solve_jacobi
from .radial_fn import (
    Hyper,
    Negate,
    Power,
    Product,
    Quotient,
    RadialExpr,
    Shifted,
    Trig,
    const,
)

__all__ = [
    "ModelManifold",
    "CurvatureHypothesis",
    "BoundPair",
    "HYPOTHESIS_KINDS",
    "from_curvature",
    "euclidean",
    "hyperbolic",
    "sphere",
    "power_model",
    "curvature",
    "laplacian_r",
    "hess_eigenvalue",
    "mean_curvature",
    "ricci_radial",
    "weitzenbock_residual",
    "bound_catalog",
    "verify_bounds",
    "bound_table_csv",
    "a_from_A",
    "A_from_a",
    "shifted_limit_margins",
]


@dataclass(frozen=True, eq=False)
class ModelManifold:
    """Model manifold of dimension ``n`` with warping function ``warp``.

    ``generalized`` marks warps with ``f'(0) != 1`` (e.g. ``r**A``,
    ``A > 1``); for them only positivity and ``K = -f''/f`` are asserted.
    """

    n: int
    warp: RadialExpr
    T: float = math.inf
    generalized: bool = False
    name: str = "model"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("dimension n must be an integer >= 2")
        T = min(self.T, self.warp.T)
        object.__setattr__(self, "T", T)
        with np.errstate(over="ignore"):
            probe = np.geomspace(1e-6 * min(1.0, T), 0.999 * T if math.isfinite(T) else 1e3, 64)
            bad = np.any(self.warp._eval(probe) <= 0)
        if bad:
            raise ValueError("warp must be positive on (0, T)")

    def slope_at_zero(self) -> float:
        """Extrapolated ``f'(0)`` from ``f(r)/r`` at small radii."""
        r = np.array([1e-7, 2e-7, 4e-7]) * min(1.0, self.T)
        q = self.warp._eval(r) / r
        return float(np.polyfit(r, q, 1)[1])


def euclidean(n: int, T: float = math.inf) -> ModelManifold:
    return ModelManifold(n, Power(1.0, 1.0, T), T, name=f"euclidean{n}")


def hyperbolic(n: int, a: float = 1.0, T: float = math.inf) -> ModelManifold:
    """Constant curvature ``-a**2``: warp ``sinh(a r)/a``."""
    return ModelManifold(n, Hyper(a, "sinh", 1.0 / a, T), T, name=f"hyperbolic{n}")


def sphere(n: int, T: float = math.pi) -> ModelManifold:
    """Unit sphere: warp ``sin r`` on ``(0, pi)``."""
    T = min(T, math.pi * (1 - 1e-12))
    return ModelManifold(n, Trig(1.0, "sin", 1.0, T), T, name=f"sphere{n}")


def power_model(n: int, A: float, T: float = math.inf) -> ModelManifold:
    """Generalized model with warp ``r**A`` (``K = -A(A-1)/r**2``)."""
    return ModelManifold(n, Power(1.0, A, T), T, generalized=(A != 1.0), name=f"power{n}_{A:g}")


def from_curvature(n: int, K: RadialExpr, T: float,
                   opts: SolverOptions | None = None) -> ModelManifold:
    """Model whose radial curvature is ``K`` (Jacobi problem with kappa = 1).

    The domain is truncated to the first zero of the warp.
    """
    sol = solve_jacobi(K, 1.0, T, opts)
    top = sol.t_sup if sol.t_sup < sol.T else sol.T
    warp = JacobiWarp(sol)
    warp.T = top * (1 - 1e-9) if top < sol.T else top
    return ModelManifold(n, warp, warp.T, generalized=opts is not None and opts.seed is not None,
                         name="numeric")


# -- geometric quantities ----------------------------------------------

def curvature(M: ModelManifold) -> RadialExpr:
    """Radial curvature ``K = -f''/f``."""
    f = M.warp
    return Quotient(Negate(f.derivative().derivative()), f)


def hess_eigenvalue(M: ModelManifold) -> RadialExpr:
    return Quotient(M.warp.derivative(), M.warp)


def mean_curvature(M: ModelManifold) -> RadialExpr:
    return hess_eigenvalue(M)


def laplacian_r(M: ModelManifold) -> RadialExpr:
    return Product(const(M.n - 1.0), hess_eigenvalue(M))


def ricci_radial(M: ModelManifold) -> RadialExpr:
    return Product(const(M.n - 1.0), curvature(M))


def weitzenbock_residual(M: ModelManifold, r=None) -> np.ndarray:
    """``g' + g**2/(n-1) + (n-1) K`` for ``g = Delta r`` (zero on models).

    Default radii: 400 geometric nodes on ``[1e-3 min(1, T), 0.95 T]``;
    below ``1e-3`` the terms ``~ 1/r**2`` cancel beyond double precision.
    """
    if r is None:
        top = 0.95 * M.T if math.isfinite(M.T) else 10.0
        r = np.geomspace(1e-3 * min(1.0, top), top, 400)
    r = np.asarray(r, dtype=float)
    g = laplacian_r(M)
    m = M.n - 1.0
    return g.derivative()._eval(r) + g._eval(r) ** 2 / m + m * curvature(M)._eval(r)


# -- hypotheses ----------------------------------------------------------

def A_from_a(a: float) -> float:
    """Solve ``A(A-1) = a**2`` for ``A >= 1``."""
    return (1.0 + math.sqrt(1.0 + 4.0 * a * a)) / 2.0


def a_from_A(A: float) -> float:
    """Inverse of :func:`A_from_a`: ``a = sqrt(A(A-1))``."""
    return math.sqrt(A * (A - 1.0))


def _q(x: float) -> float:
    return (1.0 + math.sqrt(x)) / 2.0


# kind -> (parameter names, has shifted variant)
HYPOTHESIS_KINDS = {
    "ric_lower_power": (("A",), True),
    "ric_lower_positive": (("B1",), True),
    "sec_lower_power": (("A",), True),
    "sec_upper_power": (("A1",), True),
    "two_sided_power": (("A", "A1"), False),
    "two_sided_ratio": (("A", "A1"), False),
    "equality_power": (("A",), False),
    "equality_ratio": (("A",), False),
    "sec_lower_positive": (("B1",), True),
    "sec_lower_quarter": (("B1",), True),
    "sec_upper_positive": (("B",), True),
    "sec_upper_quarter": (("B",), True),
    "pinch_quarter": (("B1", "B"), True),
    "pinch_positive": (("B1", "B"), True),
    "flat": ((), False),
    "flat_nonpositive": ((), False),
    "flat_nonnegative": ((), False),
    "mixed_sign": (("A", "B"), True),
    "const_pinch": (("alpha", "beta"), False),
    "decay_pinch": (("A", "B", "eps"), False),
}

@dataclass(frozen=True)
class CurvatureHypothesis:
    """Tagged curvature hypothesis.

    Parameters
    ----------
    kind : str
        One of :data:`HYPOTHESIS_KINDS` (dashes are accepted for
        underscores).
    params : dict
        Named parameters, e.g. ``{"A": 2.0}``.
    shift : float
        ``c >= 0`` for the ``(c + r)**2`` variants (kinds that have one).
    ricci : bool
        Compare radial Ricci curvature ``(n-1) K`` instead of ``K``; on
        models both reduce to the same scalar test.
    """

    kind: str
    params: dict = field(default_factory=dict)
    shift: float = 0.0
    ricci: bool = False

    def __post_init__(self):
        kind = self.kind.replace("-", "_")
        object.__setattr__(self, "kind", kind)
        if kind not in HYPOTHESIS_KINDS:
            raise HypothesisError(f"unknown hypothesis kind {self.kind!r}")
        names, shiftable = HYPOTHESIS_KINDS[kind]
        missing = [p for p in names if p not in self.params]
        if missing:
            raise HypothesisError(f"{kind}: missing parameters {missing}")
        object.__setattr__(self, "params", {k: float(self.params[k]) for k in names})
        if self.shift < 0 or (self.shift > 0 and not shiftable):
            raise HypothesisError(f"{kind}: invalid shift {self.shift}")
        if kind.startswith("ric_"):
            object.__setattr__(self, "ricci", True)
        self._check_ranges()

    def _check_ranges(self):
        p, k = self.params, self.kind

        def need(cond, text):
            if not cond:
                raise HypothesisError(f"{k}: parameter range violated, need {text}")

        if k in ("ric_lower_power", "sec_lower_power", "equality_power"):
            need(p["A"] >= 1, "A >= 1")
        if k == "sec_upper_power":
            need(p["A1"] >= 1, "A1 >= 1")
        if k == "two_sided_power":
            need(p["A"] >= p["A1"] >= 1, "A >= A1 >= 1")
        if k == "two_sided_ratio":
            need(p["A"] >= p["A1"] >= 0, "A >= A1 >= 0")
        if k == "equality_ratio":
            need(p["A"] >= 0, "A >= 0")
        if k in ("ric_lower_positive", "sec_lower_positive"):
            need(0 <= p["B1"] <= 1, "0 <= B1 <= 1")
        if k == "sec_lower_quarter":
            need(0 <= p["B1"] <= 0.25, "0 <= B1 <= 1/4")
        if k == "sec_upper_positive":
            need(0 <= p["B"] <= 1, "0 <= B <= 1")
        if k == "sec_upper_quarter":
            need(0 <= p["B"] <= 0.25, "0 <= B <= 1/4")
        if k == "pinch_quarter":
            need(0 <= p["B1"] <= p["B"] <= 0.25, "0 <= B1 <= B <= 1/4")
        if k == "pinch_positive":
            need(0 <= p["B1"] <= 1 and 0 <= p["B"] <= 1, "0 <= B, B1 <= 1")
        if k == "mixed_sign":
            need(p["A"] >= 0 and 0 <= p["B"] <= 0.25, "A >= 0, 0 <= B <= 1/4")
        if k == "const_pinch":
            need(p["alpha"] >= p["beta"] > 0, "alpha >= beta > 0")
        if k == "decay_pinch":
            need(p["eps"] > 0 and p["A"] >= 0 and 0 < p["B"] < 2 * p["eps"],
                 "eps > 0, A >= 0, 0 < B < 2 eps")

    # -- curvature side ------------------------------------------------
    def _inv_sq(self, coef: float) -> RadialExpr:
        base = Power(coef, -2.0)
        return Shifted(base, self.shift) if self.shift > 0 else base

    def curvature_bounds(self) -> tuple[RadialExpr | None, RadialExpr | None]:
        """``(lower, upper)`` bounds on the radial curvature ``K``."""
        p, k = self.params, self.kind
        s = self._inv_sq
        if k in ("ric_lower_power", "sec_lower_power"):
            return s(-p["A"] * (p["A"] - 1)), None
        if k == "sec_upper_power":
            return None, s(-p["A1"] * (p["A1"] - 1))
        if k == "two_sided_power":
            return s(-p["A"] * (p["A"] - 1)), s(-p["A1"] * (p["A1"] - 1))
        if k == "two_sided_ratio":
            return s(-p["A"]), s(-p["A1"])
        if k == "equality_power":
            e = s(-p["A"] * (p["A"] - 1))
            return e, e
        if k == "equality_ratio":
            e = s(-p["A"])
            return e, e
        if k in ("ric_lower_positive", "sec_lower_positive"):
            return s(p["B1"] * (1 - p["B1"])), None
        if k == "sec_lower_quarter":
            return s(p["B1"]), None
        if k == "sec_upper_positive":
            return None, s(p["B"] * (1 - p["B"]))
        if k == "sec_upper_quarter":
            return None, s(p["B"])
        if k == "pinch_quarter":
            return s(p["B1"]), s(p["B"])
        if k == "pinch_positive":
            return s(p["B1"] * (1 - p["B1"])), s(p["B"] * (1 - p["B"]))
        if k == "flat":
            return const(0.0), const(0.0)
        if k == "flat_nonpositive":
            return None, const(0.0)
        if k == "flat_nonnegative":
            return const(0.0), None
        if k == "mixed_sign":
            return s(-p["A"]), s(p["B"])
        if k == "const_pinch":
            return const(-p["alpha"] ** 2), const(-p["beta"] ** 2)
        if k == "decay_pinch":
            # c/(1 + r**2)**(1 + eps)
            e = 1.0 + p["eps"]
            base = Quotient(const(1.0), _one_plus_r2_pow(e))
            return Product(const(-p["A"]), base), Product(const(p["B"]), base)
        raise AssertionError(k)


class _OnePlusR2Pow(RadialExpr):
    """``(1 + r**2)**e``."""

    def __init__(self, e: float):
        self.e = e
        self.T = math.inf

    def _eval(self, r):
        return np.power(1.0 + r * r, self.e)

    def derivative(self):
        return Product(Power(2.0 * self.e, 1.0), _OnePlusR2Pow(self.e - 1.0))


def _one_plus_r2_pow(e: float) -> RadialExpr:
    return _OnePlusR2Pow(e)


@dataclass(frozen=True)
class BoundPair:
    """Lower/upper bound functions for one quantity.

    ``applies_to`` is ``"hessian_eigenvalue"``, ``"laplacian"`` or
    ``"mean_curvature"``.
    """

    lower: RadialExpr | None
    upper: RadialExpr | None
    applies_to: str = "hessian_eigenvalue"


def _inv(c: float) -> RadialExpr:
    return Power(c, -1.0)


def _coth(a: float) -> RadialExpr:
    """``a coth(a r)``."""
    return Quotient(Hyper(a, "cosh", a), Hyper(a, "sinh", 1.0))


def bound_catalog(h: CurvatureHypothesis, n: int,
                  applies_to: str = "hessian_eigenvalue") -> BoundPair:
    """Closed-form comparison bounds implied by ``h``.

    Parameters
    ----------
    h : CurvatureHypothesis
    n : int
        Dimension.
    applies_to : str
        ``"hessian_eigenvalue"`` (default), ``"laplacian"`` (times
        ``n - 1``) or ``"mean_curvature"`` (same as the Hessian
        eigenvalue).

    Examples
    --------
    >>> b = bound_catalog(CurvatureHypothesis("two_sided_ratio", {"A": 2, "A1": 0}), 3)
    >>> b.lower(1.0), b.upper(1.0)
    (1.0, 2.0)
    """
    if applies_to not in ("hessian_eigenvalue", "laplacian", "mean_curvature"):
        raise ValueError(f"unknown quantity {applies_to!r}")
    p, k = h.params, h.kind
    lo = up = None
    if k in ("ric_lower_power", "sec_lower_power"):
        up = _inv(p["A"])
    elif k == "sec_upper_power":
        lo = _inv(p["A1"])
    elif k == "two_sided_power":
        lo, up = _inv(p["A1"]), _inv(p["A"])
    elif k == "two_sided_ratio":
        lo, up = _inv(_q(1 + 4 * p["A1"])), _inv(_q(1 + 4 * p["A"]))
    elif k == "equality_power":
        lo = up = _inv(p["A"])
    elif k == "equality_ratio":
        lo = up = _inv(_q(1 + 4 * p["A"]))
    elif k in ("ric_lower_positive", "sec_lower_positive"):
        up = _inv(_q(1 + 4 * p["B1"] * (1 - p["B1"])))
    elif k == "sec_lower_quarter":
        up = _inv(_q(1 + 4 * p["B1"]))
    elif k == "sec_upper_positive":
        lo = _inv(abs(p["B"] - 0.5) + 0.5)
    elif k == "sec_upper_quarter":
        lo = _inv(_q(1 - 4 * p["B"]))
    elif k == "pinch_quarter":
        lo, up = _inv(_q(1 - 4 * p["B"])), _inv(_q(1 + 4 * p["B1"]))
    elif k == "pinch_positive":
        lo = _inv(abs(p["B"] - 0.5) + 0.5)
        up = _inv(_q(1 + 4 * p["B1"] * (1 - p["B1"])))
    elif k == "flat":
        lo = up = _inv(1.0)
    elif k == "flat_nonpositive":
        lo = _inv(1.0)
    elif k == "flat_nonnegative":
        up = _inv(1.0)
    elif k == "mixed_sign":
        lo, up = _inv(_q(1 - 4 * p["B"])), _inv(_q(1 + 4 * p["A"]))
    elif k == "const_pinch":
        lo, up = _coth(p["beta"]), _coth(p["alpha"])
    elif k == "decay_pinch":
        lo = _inv(1 - p["B"] / (2 * p["eps"]))
        up = _inv(math.exp(p["A"] / (2 * p["eps"])))
    else:  # pragma: no cover - guarded by CurvatureHypothesis
        raise HypothesisError(k)
    if applies_to == "laplacian":
        m = const(n - 1.0)
        lo = Product(m, lo) if lo is not None else None
        up = Product(m, up) if up is not None else None
    return BoundPair(lo, up, applies_to)


def _hyp_margins(M: ModelManifold, h: CurvatureHypothesis, r: np.ndarray):
    K = curvature(M)._eval(r)
    lo, up = h.curvature_bounds()
    m = np.full_like(r, np.inf)
    if lo is not None:
        L = lo._eval(r)
        m = np.minimum(m, (K - L) / (1.0 + np.abs(L)))
    if up is not None:
        U = up._eval(r)
        m = np.minimum(m, (U - K) / (1.0 + np.abs(U)))
    return m


def verify_bounds(M: ModelManifold, h: CurvatureHypothesis,
                  tols: Tolerances | None = None, nodes: int = 512,
                  applies_to: str = "hessian_eigenvalue",
                  eps: float | None = None) -> ComparisonCertificate:
    """Certify ``lower <= f'/f <= upper`` on ``[2 eps, 0.95 T]``.

    The hypothesis is checked first on a geometric grid of ``nodes``
    radii with the scaled test ``K - bound >= -hyp_tol (1 + |bound|)``.

    Raises
    ------
    HypothesisError
        If the model's curvature violates ``h``; the radius is attached.
    """
    tols = tols or Tolerances()
    top = 0.95 * M.T if math.isfinite(M.T) else 20.0
    eps = eps if eps is not None else 1e-6 * min(1.0, top)
    r = np.geomspace(2 * eps, top, nodes)
    hm = _hyp_margins(M, h, r)
    bad = np.nonzero(hm < -tols.hyp_tol)[0]
    if bad.size:
        raise HypothesisError(
            f"{h.kind}: curvature hypothesis fails at r={r[bad[0]]:.6g}", float(r[bad[0]])
        )
    b = bound_catalog(h, M.n, applies_to)
    q = laplacian_r(M) if applies_to == "laplacian" else hess_eigenvalue(M)
    val = q._eval(r)
    comps = {}
    if b.lower is not None:
        comps["lower"] = val - b.lower._eval(r)
    if b.upper is not None:
        comps["upper"] = b.upper._eval(r) - val
    con = np.min(np.vstack(list(comps.values())), axis=0) if comps else np.zeros_like(r)
    i = int(np.argmin(con))
    ok = float(con[i]) >= -tols.con_tol
    return ComparisonCertificate(
        theorem_id="bounds",
        radii=r,
        hypothesis_margins=np.where(np.isfinite(hm), hm, 0.0),
        kappa_pair=(1.0, 1.0),
        conclusion_margins=con,
        verdict="pass" if ok else "fail",
        worst_node=float(r[i]),
        worst_margin=float(con[i]),
        components=comps,
        notes=(f"hypothesis={h.kind}",) + (("generalized model",) if M.generalized else ()),
    )


def bound_table_csv(h: CurvatureHypothesis, n: int, rmax: float, npts: int = 50,
                    M: ModelManifold | None = None, rmin: float | None = None,
                    applies_to: str = "hessian_eigenvalue") -> str:
    """CSV table ``r, lower, value, upper`` (value empty without a model)."""
    b = bound_catalog(h, n, applies_to)
    rmin = rmin if rmin is not None else rmax / npts
    r = np.linspace(rmin, rmax, npts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "lower", "value", "upper"])
    q = None
    if M is not None:
        q = laplacian_r(M) if applies_to == "laplacian" else hess_eigenvalue(M)
    for x in r:
        lo = f"{b.lower(x):.17g}" if b.lower is not None else ""
        up = f"{b.upper(x):.17g}" if b.upper is not None else ""
        val = f"{q(x):.17g}" if q is not None and x < M.T else ""
        w.writerow([f"{x:.17g}", lo, val, up])
    return buf.getvalue()


def shifted_limit_margins(kind: str, params: dict, n: int, shifts, radii,
                          T: float | None = None) -> np.ndarray:
    """Upper-bound margins of models built from the shifted curvature.

    For each ``c`` in ``shifts`` the model with ``K = k(c + r)`` (the
    equality case of the shifted hypothesis) is solved numerically and the
    margin ``bound(r) - f'/f(r)`` of the unshifted bound is returned at
    ``radii``.  Row ``i`` belongs to ``shifts[i]``.  As ``c -> 0`` the
    margins decrease to those of the ``c = 0`` (generalized) model.
    """
    radii = np.asarray(radii, dtype=float)
    T = T if T is not None else 1.02 * float(np.max(radii))
    out = []
    for c in shifts:
        h = CurvatureHypothesis(kind, params, shift=float(c))
        lo, up = h.curvature_bounds()
        K = lo if lo is not None else up
        opts = SolverOptions(epsilon=min(1e-6, 1e-3 * c))
        M = from_curvature(n, K, T, opts)
        b = bound_catalog(CurvatureHypothesis(kind, params), n)
        side = b.upper if b.upper is not None else b.lower
        val = hess_eigenvalue(M)._eval(radii)
        sgn = 1.0 if b.upper is not None else -1.0
        out.append(sgn * (side._eval(radii) - val))
    return np.array(out)
