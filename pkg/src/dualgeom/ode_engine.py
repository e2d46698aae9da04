"""Solvers for the Jacobi and Riccati initial-value problems.

Jacobi:   f'' + G f = 0,            f(0) = 0, f'(0) = kappa
Riccati:  g' + g**2/kappa + kappa G = 0,   g(t) = kappa/t + O(1)

Both problems are singular at ``t = 0``, so they are integrated from
``t0 = epsilon`` in bounded variables:

* Jacobi uses ``u = f/(kappa t)`` and ``v = u'``.  Then
  ``f = kappa t u``, ``f' = kappa (u + t v)`` and
  ``u'' = -2 u'/t - G u``.  The quantity ``kappa f'/f - kappa/t``
  equals ``kappa v/u`` with no cancellation.
* Riccati uses ``w = g - kappa/t`` with ``w' = -2w/t - w**2/kappa - kappa G``
  and ``w(t0) = 0``.

The stepper is an embedded Dormand-Prince 5(4) pair with its standard
fourth-order continuous extension, so every solution carries a dense
interpolant.  Integration restarts at breakpoints declared by ``G``.

When ``G ~ c/t**2`` near 0 with ``c != 0`` there is no classical solution
with ``f'(0) = kappa``; the epsilon-started solution with the linear seed
is returned instead (a singularity hint is required), and all duality
statements refer to that solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .radial_fn import RadialExpr, Negate, Product

__all__ = [
    "SolverOptions",
    "SolverError",
    "SeedError",
    "JacobiSolution",
    "RiccatiSolution",
    "DenseTrajectory",
    "solve_jacobi",
    "solve_riccati",
    "jacobi_from_expr",
    "riccati_from_expr",
    "JacobiWarp",
    "gauss_cumulative",
]

# Dormand-Prince 5(4) tableau and continuous extension
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
_E = np.array([-71 / 57600, 0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


class SolverError(RuntimeError):
    """Integration failure; ``partial`` holds whatever was computed."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SeedError(ValueError):
    """No admissible seed: ``G`` too singular at 0 and no hint given."""


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for :func:`solve_jacobi` and :func:`solve_riccati`.

    Parameters
    ----------
    epsilon : float, optional
        Start point ``t0``; defaults to ``1e-6 * min(1, T)``.
    res_tol : float
        Residual tolerance used by the invariant checks.
    rtol, atol : float
        Local error tolerances of the adaptive stepper.
    root_tol : float
        Bisection tolerance for the first zero of ``f``.
    max_step : float
        Step bound.  With ``adaptive=False`` it is the fixed step.
    adaptive : bool
        Error-per-step control on or off.
    singular_exponent : float, optional
        Declared leading exponent of ``G`` at 0 when ``G`` is not
        integrable there (e.g. ``-2`` for ``c/r**2``).
    seed : (float, float), optional
        Relaxed seed ``(f(t0), f'(t0))`` overriding the series/linear seed;
        used for generalized warps such as ``r**A``.
    pole_threshold : float
        Riccati integration stops once ``g <= -kappa * pole_threshold``.
    max_steps : int
        Hard cap on accepted plus rejected steps.
    """

    epsilon: float | None = None
    res_tol: float = 1e-8
    rtol: float = 1e-13
    atol: float = 1e-15
    root_tol: float = 1e-13
    max_step: float = math.inf
    adaptive: bool = True
    singular_exponent: float | None = None
    seed: tuple[float, float] | None = None
    pole_threshold: float = 1e6
    max_steps: int = 500_000

    def start(self, T: float) -> float:
        return self.epsilon if self.epsilon is not None else 1e-6 * min(1.0, T)


class DenseTrajectory:
    """Piecewise-quartic dense output of a Dormand-Prince run."""

    def __init__(self, ts, ys, Q):
        self.ts = np.asarray(ts, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.Q = np.asarray(Q, dtype=float)  # (steps, dim, 4), already times h

    def _locate(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.ts[0], self.ts[-1]
        if np.any(t < lo - 1e-12 * max(1.0, abs(lo))) or np.any(t > hi * (1 + 1e-12)):
            raise ValueError(f"dense output requested outside [{lo}, {hi}]")
        i = np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, len(self.ts) - 2)
        h = self.ts[i + 1] - self.ts[i]
        theta = (t - self.ts[i]) / h
        return t, i, h, theta

    def __call__(self, t):
        t, i, h, th = self._locate(t)
        powers = np.stack([th, th ** 2, th ** 3, th ** 4], axis=-1)
        return self.ys[i] + np.einsum("sdk,sk->sd", self.Q[i], powers)

    def derivative(self, t):
        t, i, h, th = self._locate(t)
        powers = np.stack([np.ones_like(th), 2 * th, 3 * th ** 2, 4 * th ** 3], axis=-1)
        return np.einsum("sdk,sk->sd", self.Q[i], powers) / h[:, None]


def _dopri(*args, **kwargs):
    # rejected trial steps may overflow; the error norm then rejects them
    with np.errstate(over="ignore", invalid="ignore"):
        return _dopri_run(*args, **kwargs)


def _dopri_run(fun, t0, y0, t_end, opts: SolverOptions, breaks=(), stop=None, atol_t=False):
    """Run the Dormand-Prince pair from ``t0`` to ``t_end``.

    ``stop(t, y)`` may return True to end the run after an accepted step.
    With ``atol_t`` the absolute tolerance is scaled by ``min(1, t)``, for
    variables that vanish like ``t`` at the start point.
    Returns ``(ts, ys, Q, stopped)``.
    """
    ts = [t0]
    ys = [np.array(y0, dtype=float)]
    Qs = []
    segments = [b for b in breaks if t0 < b < t_end] + [t_end]
    t = t0
    y = ys[0].copy()
    steps = 0
    stopped = False
    for seg_end in segments:
        k1 = fun(t, y)
        if opts.adaptive:
            h = min(opts.max_step, 0.1 * max(t, 1e-3 * (seg_end - t)), seg_end - t)
        else:
            h = min(opts.max_step, seg_end - t)
        while t < seg_end:
            if t + h > seg_end or (seg_end - (t + h)) < 1e-12 * max(1.0, seg_end):
                h = seg_end - t
            K = np.empty((7, y.size))
            K[0] = k1
            for s in range(1, 6):
                dy = np.dot(_A[s], K[:s])
                K[s] = fun(t + _C[s] * h, y + h * dy)
            y_new = y + h * np.dot(_B, K[:6])
            K[6] = fun(t + h, y_new)
            steps += 1
            if steps > opts.max_steps:
                raise SolverError("step budget exhausted", (ts, ys, Qs))
            if opts.adaptive:
                atol = opts.atol * min(1.0, t) if atol_t else opts.atol
                scale = atol + opts.rtol * np.maximum(np.abs(y), np.abs(y_new))
                v = h * np.dot(_E, K) / scale
                err = math.sqrt(float(np.dot(v, v)) / v.size)
                if not np.isfinite(err):
                    err = math.inf
                if err > 1.0:
                    h *= max(0.2, 0.9 * err ** -0.2) if np.isfinite(err) else 0.2
                    if h < 1e-15 * max(1.0, abs(t)):
                        raise SolverError(f"step size underflow at t={t}", (ts, ys, Qs))
                    continue
                factor = 10.0 if err == 0 else min(10.0, max(0.2, 0.9 * err ** -0.2))
            Qs.append(h * (K.T @ _P))
            t = t + h
            y = y_new
            k1 = K[6]
            ts.append(t)
            ys.append(y.copy())
            if stop is not None and stop(t, y):
                stopped = True
                break
            if opts.adaptive:
                h = min(opts.max_step, h * factor)
            else:
                h = min(opts.max_step, seg_end - t)
        if stopped:
            break
        t = seg_end
    return np.array(ts), np.array(ys), np.array(Qs), stopped


def _leading(G: RadialExpr) -> float:
    return G.leading_exponent()


def _check_seed(G: RadialExpr, opts: SolverOptions) -> str:
    e = _leading(G)
    if e >= 0:
        return "series"
    if e > -1:
        return "linear"
    if opts.singular_exponent is None:
        raise SeedError(
            f"G ~ r^{e} is not integrable at 0; pass SolverOptions(singular_exponent=...)"
        )
    return "linear"


def _bisect(fn, a, b, tol):
    fa = fn(a)
    for _ in range(200):
        if b - a <= tol:
            break
        m = 0.5 * (a + b)
        fm = fn(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def gauss_cumulative(fn: Callable, nodes: np.ndarray) -> np.ndarray:
    """Cumulative integral of ``fn`` at ``nodes`` with 8-point Gauss per cell."""
    a, b = nodes[:-1], nodes[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    cells = half * (vals @ _GL_W)
    return np.concatenate([[0.0], np.cumsum(cells)])


def _midpoints(grid: np.ndarray, lo: float, hi: float) -> np.ndarray:
    mids = 0.5 * (grid[1:] + grid[:-1])
    return mids[(mids >= lo) & (mids <= hi)]


@dataclass(frozen=True, eq=False)
class JacobiSolution:
    """Solution of the Jacobi problem on ``[t0, T]``.

    Attributes
    ----------
    G : RadialExpr
    kappa : float
    grid, f_values, fprime_values : ndarray
    t_sup : float
        First zero of ``f`` past 0, or the right end of the grid.
    t0 : float
        Start point (epsilon).
    generalized : bool
        True when a relaxed seed was used (``f'(0) != kappa``).
    """

    G: RadialExpr
    kappa: float
    grid: np.ndarray
    f_values: np.ndarray
    fprime_values: np.ndarray
    t_sup: float
    t0: float
    evaluator: Callable = field(repr=False)
    generalized: bool = False

    @property
    def T(self) -> float:
        return float(self.grid[-1])

    def uv(self, t):
        """Return ``(u, u', u'')`` at ``t``.

        Below ``t0`` the seed is continued as ``u = u(t0)``,
        ``u' = u'(t0) t/t0`` (the order of the series seed).
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        low = t < self.t0
        if not np.any(low):
            return self.evaluator(t)
        u, v, dv = (np.array(a, dtype=float) for a in self.evaluator(np.where(low, self.t0, t)))
        u0, v0 = u[low], v[low]
        v[low] = v0 * t[low] / self.t0
        dv[low] = v0 / self.t0
        u[low] = u0
        return u, v, dv

    def f(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        u, _, _ = self.uv(t)
        return self.kappa * t * u

    def fprime(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        u, v, _ = self.uv(t)
        return self.kappa * (u + t * v)

    def fsecond(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        _, v, dv = self.uv(t)
        return self.kappa * (2 * v + t * dv)

    def w(self, t):
        """``kappa f'/f - kappa/t`` evaluated without cancellation."""
        u, v, _ = self.uv(t)
        return self.kappa * v / u

    def log_derivative(self, t):
        """``f'/f``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return 1.0 / t + self.w(t) / self.kappa

    def residual(self, t=None, scaled: bool = True):
        """``f'' + G f`` at ``t`` (default: step midpoints in ``[2 t0, 0.9 t_sup]``).

        With ``scaled`` the residual is divided by ``max(1, |f|, |G f|)``, so
        growing solutions and coefficients singular at 0 are measured on a
        relative scale.
        """
        if t is None:
            t = _midpoints(self.grid, 2 * self.t0, 0.9 * self.t_sup)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        u, v, dv = self.uv(t)
        f = self.kappa * t * u
        Gf = self.G._eval(t) * f
        res = self.kappa * (2 * v + t * dv) + Gf
        if scaled:
            res = res / np.maximum(1.0, np.maximum(np.abs(f), np.abs(Gf)))
        return res

    def invariants(self) -> dict:
        """Numerical read-out of the solution invariants."""
        g = self.grid[:3]
        slope = np.polyfit(g, self.fprime_values[:3], 1)[1]
        inner = self.grid[self.grid < self.t_sup]
        return {
            "f_positive": bool(np.all(self.f_values[: len(inner)][1:] > 0)),
            "f_at_0": float(np.polyfit(g, self.f_values[:3], 2)[-1]),
            "fprime_at_0": float(slope),
            "max_residual": float(np.max(np.abs(self.residual()), initial=0.0)),
        }


@dataclass(frozen=True, eq=False)
class RiccatiSolution:
    """Solution of the Riccati problem.

    ``t_sup`` is the pole location when a finite-time blow-up occurred
    (``pole`` is then set), otherwise the right end of the grid.
    """

    G: RadialExpr
    kappa: float
    grid: np.ndarray
    g_values: np.ndarray
    t_sup: float
    t0: float
    evaluator: Callable = field(repr=False)
    pole: float | None = None

    @property
    def T(self) -> float:
        return float(self.grid[-1])

    @property
    def w_values(self) -> np.ndarray:
        return self.g_values - self.kappa / self.grid

    def ww(self, t):
        """Return ``(w, w')`` at ``t``."""
        return self.evaluator(np.atleast_1d(np.asarray(t, dtype=float)))

    def w(self, t):
        return self.ww(t)[0]

    def g(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self.kappa / t + self.w(t)

    def residual(self, t=None, scaled: bool = True):
        """``g' + g**2/kappa + kappa G`` in the cancellation-free w-form.

        With ``scaled`` it is divided by ``max(1, kappa |G|)``.
        """
        if t is None:
            t = _midpoints(self.grid, 2 * self.t0, 0.9 * self.t_sup)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        w, dw = self.ww(t)
        k = self.kappa
        kG = k * self.G._eval(t)
        res = dw + 2 * w / t + w * w / k + kG
        if scaled:
            res = res / np.maximum(1.0, np.abs(kG))
        return res

    def invariants(self) -> dict:
        return {
            "w_small_nodes": [float(x) for x in self.w_values[:3]],
            "max_residual": float(np.max(np.abs(self.residual()), initial=0.0)),
        }


def _jacobi_rhs(G: RadialExpr):
    ev = G.at

    def rhs(t, y):
        return np.array([y[1], -2.0 * y[1] / t - ev(t) * y[0]])

    return rhs


def solve_jacobi(G: RadialExpr, kappa: float, T: float,
                 opts: SolverOptions | None = None) -> JacobiSolution:
    """Solve ``f'' + G f = 0``, ``f(0) = 0``, ``f'(0) = kappa`` on ``(0, T]``.

    Examples
    --------
    >>> from dualgeom.radial_fn import const
    >>> sol = solve_jacobi(const(1.0), 1.0, 4.0)
    >>> round(sol.t_sup, 6)
    3.141593
    """
    opts = opts or SolverOptions()
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    T = min(float(T), G.T)
    t0 = opts.start(T)
    if opts.seed is not None:
        f0, fp0 = opts.seed
        u0 = f0 / (kappa * t0)
        v0 = (fp0 / kappa - u0) / t0
    else:
        kind = _check_seed(G, opts)
        if kind == "series":
            g0 = float(G(t0))
            u0, v0 = 1.0 - g0 * t0 * t0 / 6.0, -g0 * t0 / 3.0
        else:
            u0, v0 = 1.0, 0.0
    rhs = _jacobi_rhs(G)
    try:
        ts, ys, Q, _ = _dopri(rhs, t0, [u0, v0], T, opts, breaks=G.breakpoints())
    except SolverError as exc:
        exc.partial = _pack_jacobi(G, kappa, *_as_arrays(exc.partial), t0, opts)
        raise
    return _pack_jacobi(G, kappa, ts, ys, Q, t0, opts)


def _as_arrays(partial):
    ts, ys, Qs = partial
    return np.array(ts[: len(Qs) + 1]), np.array(ys[: len(Qs) + 1]), np.array(Qs)


def _pack_jacobi(G, kappa, ts, ys, Q, t0, opts):
    dense = DenseTrajectory(ts, ys, Q) if len(Q) else None

    def evaluator(t):
        y = dense(t)
        dy = dense.derivative(t)
        return y[:, 0], y[:, 1], dy[:, 1]

    u, v = ys[:, 0], ys[:, 1]
    t_sup = float(ts[-1])
    sign_change = np.nonzero((u[1:] <= 0) & (u[:-1] > 0))[0]
    if sign_change.size and dense is not None:
        i = sign_change[0]
        t_sup = _bisect(lambda s: float(dense(s)[0, 0]), ts[i], ts[i + 1], opts.root_tol)
    return JacobiSolution(
        G=G,
        kappa=float(kappa),
        grid=ts,
        f_values=kappa * ts * u,
        fprime_values=kappa * (u + ts * v),
        t_sup=t_sup,
        t0=float(t0),
        evaluator=evaluator,
        generalized=opts.seed is not None,
    )


def solve_riccati(G: RadialExpr, kappa: float, T: float,
                  opts: SolverOptions | None = None) -> RiccatiSolution:
    """Solve ``g' + g**2/kappa + kappa G = 0`` with ``g = kappa/t + O(1)``.

    A finite-time pole stops the integration; its location is reported as
    ``t_sup`` (and ``pole``).
    """
    opts = opts or SolverOptions()
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    T = min(float(T), G.T)
    t0 = opts.start(T)
    if opts.seed is None:
        _check_seed(G, opts)
    ev = G.at
    k = float(kappa)

    def rhs(t, y):
        w = y[0]
        return np.array([-2.0 * w / t - w * w / k - k * ev(t)])

    thresh = -k * opts.pole_threshold

    def stop(t, y):
        return k / t + y[0] <= thresh

    try:
        ts, ys, Q, stopped = _dopri(rhs, t0, [0.0], T, opts, breaks=G.breakpoints(), stop=stop,
                                   atol_t=True)
    except SolverError as exc:
        ts, ys, Q = _as_arrays(exc.partial)
        exc.partial = _pack_riccati(G, k, ts, ys, Q, t0, None)
        raise
    pole = None
    if stopped:
        g_end = k / ts[-1] + ys[-1, 0]
        pole = float(ts[-1] - k / g_end)
    return _pack_riccati(G, k, ts, ys, Q, t0, pole)


def _pack_riccati(G, k, ts, ys, Q, t0, pole):
    dense = DenseTrajectory(ts, ys, Q) if len(Q) else None

    def evaluator(t):
        return dense(t)[:, 0], dense.derivative(t)[:, 0]

    return RiccatiSolution(
        G=G,
        kappa=k,
        grid=ts,
        g_values=k / ts + ys[:, 0],
        t_sup=pole if pole is not None else float(ts[-1]),
        t0=float(t0),
        evaluator=evaluator,
        pole=pole,
    )


# Closed forms are evaluated in the raw variables, where w = g - kappa/t
# cancels; starting at 1e-3 keeps that rounding near 1e-10.
_EXPR_T0 = 1e-3


def _geom_grid(t0: float, T: float, n: int) -> np.ndarray:
    return np.geomspace(t0, T, n)


def jacobi_from_expr(f: RadialExpr, G: RadialExpr, kappa: float, T: float,
                     t0: float | None = None, n: int = 2000,
                     generalized: bool = False) -> JacobiSolution:
    """Wrap a closed-form candidate ``f`` as a :class:`JacobiSolution`.

    ``G`` is the coefficient the candidate is compared against; the
    residual ``f'' + G f`` need not vanish (super/sub-solutions).
    """
    T = min(float(T), f.T, G.T)
    t0 = t0 if t0 is not None else _EXPR_T0 * min(1.0, T)
    fp, fpp = f.derivative(), f.derivative().derivative()
    k = float(kappa)

    def evaluator(t):
        fv, fpv, fppv = f._eval(t), fp._eval(t), fpp._eval(t)
        u = fv / (k * t)
        v = (fpv / k - u) / t
        dv = (fppv / k - 2 * v) / t
        return u, v, dv

    grid = _geom_grid(t0, T, n)
    fv = f._eval(grid)
    sign_change = np.nonzero((fv[1:] <= 0) & (fv[:-1] > 0))[0]
    t_sup = T
    if sign_change.size:
        i = sign_change[0]
        t_sup = _bisect(lambda s: float(f._eval(np.asarray(s))), grid[i], grid[i + 1], 1e-13)
    return JacobiSolution(G, k, grid, fv, fp._eval(grid), float(t_sup), float(t0),
                          evaluator, generalized)


def riccati_from_expr(g: RadialExpr, G: RadialExpr, kappa: float, T: float,
                      t0: float | None = None, n: int = 2000) -> RiccatiSolution:
    """Wrap a closed-form candidate ``g`` as a :class:`RiccatiSolution`."""
    T = min(float(T), g.T, G.T)
    t0 = t0 if t0 is not None else _EXPR_T0 * min(1.0, T)
    gp = g.derivative()
    k = float(kappa)

    def evaluator(t):
        return g._eval(t) - k / t, gp._eval(t) + k / (t * t)

    grid = _geom_grid(t0, T, n)
    return RiccatiSolution(G, k, grid, g._eval(grid), T, float(t0), evaluator)


class JacobiWarp(RadialExpr):
    """Radial function backed by a :class:`JacobiSolution`.

    ``order=0`` is ``f``, ``order=1`` is ``f'``; the derivative of ``f'``
    is ``-G f``, so the derivative chain never leaves solver accuracy.
    """

    def __init__(self, sol: JacobiSolution, order: int = 0):
        if order not in (0, 1):
            raise ValueError("order must be 0 or 1")
        self.sol = sol
        self.order = order
        self.T = sol.T

    def _eval(self, r):
        r = np.asarray(r, dtype=float)
        flat = np.atleast_1d(r).ravel()
        if self.order == 0:
            out = self.sol.f(flat)
        else:
            out = self.sol.fprime(flat)
        return out.reshape(r.shape)

    def derivative(self):
        if self.order == 0:
            return JacobiWarp(self.sol, 1)
        return Product(Negate(self.sol.G), JacobiWarp(self.sol, 0))

    def leading_exponent(self):
        return 1.0 if self.order == 0 else 0.0
