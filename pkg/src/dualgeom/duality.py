"""Transformer and reverser between the Jacobi and Riccati problems.

transform:  g = kappa f'/f
reverse:    f(t) = kappa t exp( int_eps^t (g/kappa - 1/s) ds )

Both work on the bounded variable ``w = g - kappa/t`` so that the two
individually divergent terms never get subtracted numerically.
"""
from __future__ import annotations

import numpy as np

from .ode_engine import JacobiSolution, RiccatiSolution, gauss_cumulative

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

__all__ = [
    "PositivityError",
    "AsymptoticError",
    "transform",
    "reverse",
    "rescale_kappa",
    "residual_sign",
]


class PositivityError(ValueError):
    """The transformer needs ``f > 0``; raised at or beyond ``t_sup``."""


class AsymptoticError(ValueError):
    """``g - kappa/t`` is not integrable near 0."""


def transform(f: JacobiSolution) -> RiccatiSolution:
    """Riccati solution ``g = kappa f'/f`` dual to ``f``.

    The grid is truncated to ``t < t_sup``; evaluating the result at or
    beyond ``t_sup`` raises :class:`PositivityError`.

    Examples
    --------
    >>> from dualgeom.radial_fn import const
    >>> from dualgeom.ode_engine import solve_jacobi
    >>> g = transform(solve_jacobi(const(-1.0), 1.0, 2.0))
    >>> round(float(g.g(1.0)[0]), 6)
    1.313035
    """
    k = f.kappa
    has_zero = f.t_sup < f.T
    keep = f.grid < f.t_sup if has_zero else np.ones(f.grid.shape, dtype=bool)
    if np.count_nonzero(keep) < 2:
        raise PositivityError("f has no positive range on its grid")
    grid = f.grid[keep]

    def evaluator(t):
        if has_zero and np.any(t >= f.t_sup):
            raise PositivityError(f"transformer evaluated at t >= t_sup = {f.t_sup}")
        u, v, dv = f.uv(t)
        return k * v / u, k * (dv * u - v * v) / (u * u)

    w_nodes = k * f.uv(grid)[1] / f.uv(grid)[0]
    return RiccatiSolution(
        G=f.G,
        kappa=k,
        grid=grid,
        g_values=k / grid + w_nodes,
        t_sup=f.t_sup,
        t0=f.t0,
        evaluator=evaluator,
        pole=f.t_sup if has_zero else None,
    )


def _refine(grid: np.ndarray, ratio: float = 0.25) -> np.ndarray:
    """Insert geometric nodes so that every cell satisfies ``b/a <= 1 + ratio``.

    The integrand ``w`` may vary like ``1/t``; Gauss rules need cells that
    are short relative to their distance from 0.
    """
    out = [grid[:1]]
    for a, b in zip(grid[:-1], grid[1:]):
        m = int(np.ceil(np.log(b / a) / np.log1p(ratio)))
        if m > 1:
            out.append(np.geomspace(a, b, m + 1)[1:])
        else:
            out.append(np.array([b]))
    cells = np.concatenate(out)
    cells[np.searchsorted(cells, grid)] = grid
    return cells


def reverse(g: RiccatiSolution) -> JacobiSolution:
    """Jacobi solution ``f`` recovered from ``g``.

    ``f(t) = kappa t exp(W(t)/kappa)`` with ``W(t) = int_{t0}^t w``; the
    contribution of ``[0, t0]`` is taken as 0.  Cell integrals use 8-point
    Gauss-Legendre on the grid of ``g``, and ``f' / f = g / kappa``.
    """
    k = g.kappa
    hi = g.t_sup if g.pole is None else g.pole
    grid = g.grid[g.grid < hi] if g.pole is not None else g.grid
    if not np.all(np.isfinite(g.w_values[: len(grid)])):
        raise AsymptoticError("g - kappa/t is not finite on the grid")
    cells = _refine(grid)
    W_cells = gauss_cumulative(g.w, cells)
    W_nodes = W_cells[np.searchsorted(cells, grid)]
    if not np.all(np.isfinite(W_nodes)):
        raise AsymptoticError("integral of g - kappa/t does not converge")

    def W(t):
        i = np.clip(np.searchsorted(cells, t, side="right") - 1, 0, len(cells) - 2)
        a = cells[i]
        half = 0.5 * (t - a)
        pts = (a + half)[:, None] + half[:, None] * _GL_X[None, :]
        vals = g.w(pts.ravel()).reshape(pts.shape)
        return W_cells[i] + half * (vals @ _GL_W)

    def evaluator(t):
        inside = np.clip(t, grid[0], grid[-1])
        w, dw = g.ww(inside)
        u = np.exp(W(inside) / k)
        v = u * w / k
        dv = u * (w * w / (k * k) + dw / k)
        return u, v, dv

    u_nodes = np.exp(W_nodes / k)
    w_nodes = g.w(grid)
    t_sup = g.pole if g.pole is not None else float(grid[-1])
    return JacobiSolution(
        G=g.G,
        kappa=k,
        grid=grid,
        f_values=k * grid * u_nodes,
        fprime_values=k * u_nodes * (1.0 + grid * w_nodes / k),
        t_sup=t_sup,
        t0=g.t0,
        evaluator=evaluator,
    )


def rescale_kappa(sol, kappa_new: float):
    """Rescale a solution to initial slope / asymptotic constant ``kappa_new``.

    ``f -> (kappa_new/kappa) f`` and ``g -> (kappa_new/kappa) g``; the
    result solves the same problem with ``kappa_new``.
    """
    if kappa_new <= 0:
        raise ValueError("kappa_new must be positive")
    c = kappa_new / sol.kappa
    if isinstance(sol, JacobiSolution):
        # u = f/(kappa t) is invariant under the rescaling
        return JacobiSolution(
            G=sol.G,
            kappa=float(kappa_new),
            grid=sol.grid,
            f_values=c * sol.f_values,
            fprime_values=c * sol.fprime_values,
            t_sup=sol.t_sup,
            t0=sol.t0,
            evaluator=sol.evaluator,
            generalized=sol.generalized,
        )
    if isinstance(sol, RiccatiSolution):
        ev = sol.evaluator

        def evaluator(t):
            w, dw = ev(t)
            return c * w, c * dw

        return RiccatiSolution(
            G=sol.G,
            kappa=float(kappa_new),
            grid=sol.grid,
            g_values=c * sol.g_values,
            t_sup=sol.t_sup,
            t0=sol.t0,
            evaluator=evaluator,
            pole=sol.pole,
        )
    raise TypeError(f"cannot rescale {type(sol).__name__}")


def residual_sign(sol, tol: float = 1e-8) -> str:
    """Classify a candidate as ``"solution"``, ``"super"``, ``"sub"`` or ``"neither"``.

    Supersolutions have residual ``<= tol`` everywhere, subsolutions
    ``>= -tol``; exact solutions satisfy both.
    """
    res = sol.residual()
    if res.size == 0:
        return "solution"
    lo, hi = float(np.min(res)), float(np.max(res))
    if hi <= tol and lo >= -tol:
        return "solution"
    if hi <= tol:
        return "super"
    if lo >= -tol:
        return "sub"
    return "neither"
