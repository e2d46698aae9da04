"""Scalar functions of the radial variable.

Every object here is an immutable ``RadialExpr`` defined on a half-open
interval ``(0, T]``.  Closed-form kinds carry exact symbolic derivatives;
the ``Grid`` kind uses monotone cubic (PCHIP) interpolation so that sign
conditions are not polluted by interpolation overshoot.

Evaluation is vectorised: passing a numpy array returns an array of the
same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate as _integrate
from scipy.interpolate import PchipInterpolator

__all__ = [
    "DomainError",
    "IntegrationError",
    "RadialExpr",
    "Power",
    "PowerLog",
    "Trig",
    "Hyper",
    "Rational",
    "Shifted",
    "Sum",
    "Product",
    "Quotient",
    "Negate",
    "Grid",
    "Piecewise",
    "const",
    "eval_expr",
    "derivative",
    "integrate",
]

_EDGE = 1e-12


class DomainError(ValueError):
    """Raised when a radial function is evaluated outside ``(0, T]``."""


class IntegrationError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    estimate : float
        Last estimate returned by the quadrature routine.
    abserr : float
        Its error estimate.
    """

    def __init__(self, message: str, estimate: float, abserr: float):
        super().__init__(message)
        self.estimate = estimate
        self.abserr = abserr


class RadialExpr:
    """Base class for radial functions.

    Subclasses implement ``_eval`` (vectorised, no domain check),
    ``derivative`` and ``leading_exponent``.
    """

    T: float = math.inf

    # -- public API -----------------------------------------------------
    def __call__(self, r):
        arr = np.asarray(r, dtype=float)
        if arr.size and (np.any(arr <= 0.0) or np.any(arr > self.T * (1 + _EDGE))):
            bad = arr[(arr <= 0.0) | (arr > self.T * (1 + _EDGE))].ravel()[0]
            raise DomainError(f"r={bad!r} outside (0, {self.T}]")
        out = self._eval(arr)
        if np.ndim(r) == 0:
            return float(out)
        return out

    def derivative(self) -> "RadialExpr":
        raise NotImplementedError

    def leading_exponent(self) -> float:
        """Exponent ``e`` with ``|self(r)| ~ r**e`` as ``r -> 0+``.

        ``inf`` means identically zero near 0.  Kinds whose behaviour is
        not known symbolically report 0 (bounded).
        """
        return 0.0

    def breakpoints(self) -> tuple[float, ...]:
        """Declared points where the function may be discontinuous."""
        return ()

    def _eval(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def at(self, r: float) -> float:
        """Unchecked scalar evaluation (the ODE right-hand sides call this)."""
        return float(self._eval(np.asarray(r, dtype=float)))

    # -- combinator sugar ----------------------------------------------
    def __add__(self, other):
        return Sum(self, _lift(other))

    def __radd__(self, other):
        return Sum(_lift(other), self)

    def __sub__(self, other):
        return Sum(self, Negate(_lift(other)))

    def __rsub__(self, other):
        return Sum(_lift(other), Negate(self))

    def __mul__(self, other):
        return Product(self, _lift(other))

    def __rmul__(self, other):
        return Product(_lift(other), self)

    def __truediv__(self, other):
        return Quotient(self, _lift(other))

    def __neg__(self):
        return Negate(self)


def _lift(x) -> RadialExpr:
    if isinstance(x, RadialExpr):
        return x
    return Power(float(x), 0.0)


def _min_T(*exprs: RadialExpr) -> float:
    return min(e.T for e in exprs)


def const(c: float, T: float = math.inf) -> "Power":
    """Constant function ``c`` on ``(0, T]``."""
    return Power(float(c), 0.0, T)


@dataclass(frozen=True)
class Power(RadialExpr):
    """``coef * r**exponent``."""

    coef: float
    exponent: float
    T: float = math.inf

    def _eval(self, r):
        if self.exponent == 0.0:
            return np.full_like(r, self.coef, dtype=float)
        return self.coef * np.power(r, self.exponent)

    def at(self, r):
        return self.coef if self.exponent == 0.0 else self.coef * r ** self.exponent

    def derivative(self):
        if self.exponent == 0.0 or self.coef == 0.0:
            return Power(0.0, 0.0, self.T)
        return Power(self.coef * self.exponent, self.exponent - 1.0, self.T)

    def leading_exponent(self):
        return math.inf if self.coef == 0.0 else self.exponent


@dataclass(frozen=True)
class PowerLog(RadialExpr):
    """``coef * r**alpha * ln(e + r)**beta``."""

    coef: float
    alpha: float
    beta: float
    T: float = math.inf

    def _eval(self, r):
        return self.coef * np.power(r, self.alpha) * np.power(np.log(math.e + r), self.beta)

    def derivative(self):
        first = PowerLog(self.coef * self.alpha, self.alpha - 1.0, self.beta, self.T)
        second = Product(
            PowerLog(self.coef * self.beta, self.alpha, self.beta - 1.0, self.T),
            Shifted(Power(1.0, -1.0), math.e, self.T),
        )
        return Sum(first, second)

    def leading_exponent(self):
        return math.inf if self.coef == 0.0 else self.alpha


@dataclass(frozen=True)
class Trig(RadialExpr):
    """``coef * sin(freq r)`` or ``coef * cos(freq r)``."""

    freq: float = 1.0
    kind: str = "sin"
    coef: float = 1.0
    T: float = math.inf

    def __post_init__(self):
        if self.kind not in ("sin", "cos"):
            raise ValueError(f"unknown trig kind {self.kind!r}")

    def _eval(self, r):
        fn = np.sin if self.kind == "sin" else np.cos
        return self.coef * fn(self.freq * r)

    def derivative(self):
        if self.kind == "sin":
            return Trig(self.freq, "cos", self.coef * self.freq, self.T)
        return Trig(self.freq, "sin", -self.coef * self.freq, self.T)

    def leading_exponent(self):
        if self.coef == 0.0 or (self.kind == "sin" and self.freq == 0.0):
            return math.inf
        return 1.0 if self.kind == "sin" else 0.0


@dataclass(frozen=True)
class Hyper(RadialExpr):
    """``coef * sinh(freq r)`` or ``coef * cosh(freq r)``."""

    freq: float = 1.0
    kind: str = "sinh"
    coef: float = 1.0
    T: float = math.inf

    def __post_init__(self):
        if self.kind not in ("sinh", "cosh"):
            raise ValueError(f"unknown hyperbolic kind {self.kind!r}")

    def _eval(self, r):
        fn = np.sinh if self.kind == "sinh" else np.cosh
        return self.coef * fn(self.freq * r)

    def derivative(self):
        other = "cosh" if self.kind == "sinh" else "sinh"
        return Hyper(self.freq, other, self.coef * self.freq, self.T)

    def leading_exponent(self):
        if self.coef == 0.0 or (self.kind == "sinh" and self.freq == 0.0):
            return math.inf
        return 1.0 if self.kind == "sinh" else 0.0


@dataclass(frozen=True)
class Rational(RadialExpr):
    """Ratio of polynomials; coefficients in ascending powers of ``r``."""

    num: tuple
    den: tuple = (1.0,)
    T: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(float(c) for c in self.num))
        object.__setattr__(self, "den", tuple(float(c) for c in self.den))
        if not any(self.den):
            raise ValueError("zero denominator polynomial")

    def _eval(self, r):
        return P.polyval(r, self.num) / P.polyval(r, self.den)

    def derivative(self):
        n, d = np.array(self.num), np.array(self.den)
        top = P.polysub(P.polymul(P.polyder(n), d), P.polymul(n, P.polyder(d)))
        return Rational(tuple(top), tuple(P.polymul(d, d)), self.T)

    def leading_exponent(self):
        def order(c):
            nz = [i for i, v in enumerate(c) if v != 0.0]
            return nz[0] if nz else math.inf

        return order(self.num) - order(self.den)


@dataclass(frozen=True)
class Shifted(RadialExpr):
    """``r -> inner(c + r)`` with ``c >= 0``."""

    inner: RadialExpr
    shift: float
    T: float = math.inf

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    def _eval(self, r):
        return self.inner._eval(r + self.shift)

    def derivative(self):
        return Shifted(self.inner.derivative(), self.shift, self.T)

    def leading_exponent(self):
        if self.shift > 0:
            return 0.0
        return self.inner.leading_exponent()


@dataclass(frozen=True)
class Sum(RadialExpr):
    left: RadialExpr
    right: RadialExpr
    T: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "T", _min_T(self.left, self.right))

    def _eval(self, r):
        return self.left._eval(r) + self.right._eval(r)

    def at(self, r):
        return self.left.at(r) + self.right.at(r)

    def derivative(self):
        return Sum(self.left.derivative(), self.right.derivative())

    def leading_exponent(self):
        return min(self.left.leading_exponent(), self.right.leading_exponent())

    def breakpoints(self):
        return tuple(sorted(set(self.left.breakpoints()) | set(self.right.breakpoints())))


@dataclass(frozen=True)
class Product(RadialExpr):
    left: RadialExpr
    right: RadialExpr
    T: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "T", _min_T(self.left, self.right))

    def _eval(self, r):
        return self.left._eval(r) * self.right._eval(r)

    def derivative(self):
        return Sum(
            Product(self.left.derivative(), self.right),
            Product(self.left, self.right.derivative()),
        )

    def leading_exponent(self):
        return self.left.leading_exponent() + self.right.leading_exponent()

    def breakpoints(self):
        return tuple(sorted(set(self.left.breakpoints()) | set(self.right.breakpoints())))


@dataclass(frozen=True)
class Quotient(RadialExpr):
    num: RadialExpr
    den: RadialExpr
    T: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "T", _min_T(self.num, self.den))

    def _eval(self, r):
        return self.num._eval(r) / self.den._eval(r)

    def derivative(self):
        top = Sum(
            Product(self.num.derivative(), self.den),
            Negate(Product(self.num, self.den.derivative())),
        )
        return Quotient(top, Product(self.den, self.den))

    def leading_exponent(self):
        return self.num.leading_exponent() - self.den.leading_exponent()

    def breakpoints(self):
        return tuple(sorted(set(self.num.breakpoints()) | set(self.den.breakpoints())))


@dataclass(frozen=True)
class Negate(RadialExpr):
    inner: RadialExpr
    T: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "T", self.inner.T)

    def _eval(self, r):
        return -self.inner._eval(r)

    def derivative(self):
        return Negate(self.inner.derivative())

    def leading_exponent(self):
        return self.inner.leading_exponent()

    def breakpoints(self):
        return self.inner.breakpoints()


@dataclass(frozen=True, eq=False)
class Grid(RadialExpr):
    """Monotone cubic interpolant through ``(nodes, values)``.

    ``order`` selects the derivative of the interpolant that is evaluated;
    ``derivative()`` simply increments it.  The domain is
    ``(0, nodes[-1]]``; values left of ``nodes[0]`` are extrapolated by the
    end polynomial piece.
    """

    nodes: tuple
    values: tuple
    order: int = 0
    T: float = field(init=False)

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        y = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise ValueError("nodes and values must be 1-d of equal length >= 2")
        if np.any(np.diff(x) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        if x[0] < 0:
            raise ValueError("grid nodes must be nonnegative")
        object.__setattr__(self, "nodes", tuple(x))
        object.__setattr__(self, "values", tuple(y))
        object.__setattr__(self, "T", float(x[-1]))
        object.__setattr__(self, "_interp", PchipInterpolator(x, y, extrapolate=True))

    def _eval(self, r):
        return self._interp(r, self.order)

    def derivative(self):
        return Grid(self.nodes, self.values, self.order + 1)


@dataclass(frozen=True)
class Piecewise(RadialExpr):
    """Piecewise definition with declared breakpoints.

    ``pieces[i]`` is used on ``(breaks[i-1], breaks[i]]`` with
    ``breaks[-1] = 0`` implied; the last piece extends to ``T``.
    """

    breaks: tuple
    pieces: tuple
    T: float = field(init=False)

    def __post_init__(self):
        b = tuple(float(x) for x in self.breaks)
        if len(self.pieces) != len(b) + 1:
            raise ValueError("need exactly len(breaks) + 1 pieces")
        if any(x <= 0 for x in b) or any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must be positive and increasing")
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "T", min(p.T for p in self.pieces))

    def _eval(self, r):
        idx = np.searchsorted(np.asarray(self.breaks), r, side="left")
        out = np.empty_like(r, dtype=float)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece._eval(r[mask])
        return out

    def derivative(self):
        return Piecewise(self.breaks, tuple(p.derivative() for p in self.pieces))

    def leading_exponent(self):
        return self.pieces[0].leading_exponent()

    def breakpoints(self):
        inner = set()
        for p in self.pieces:
            inner |= set(p.breakpoints())
        return tuple(sorted(set(self.breaks) | inner))


# -- functional spellings ------------------------------------------------

def eval_expr(e: RadialExpr, r):
    """Evaluate ``e`` at ``r``; raises :class:`DomainError` outside (0, T]."""
    return e(r)


def derivative(e: RadialExpr) -> RadialExpr:
    """Exact derivative for closed forms, interpolant derivative for grids."""
    return e.derivative()


def integrate(
    e: RadialExpr,
    a: float,
    b: float,
    tol: float = 1e-10,
    singular_exponent: float | None = None,
    limit: int = 200,
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive quadrature of ``e`` over ``[a, b]``.

    Parameters
    ----------
    e : RadialExpr
        Integrand.
    a, b : float
        Limits with ``0 <= a <= b <= T``.  ``a = 0`` is allowed when the
        integrand is integrable there.
    tol : float
        Requested absolute error.
    singular_exponent : float, optional
        Hint that ``e(r) ~ r**s`` near ``a = 0`` with ``s > -1``.  The
        integrand is then split as ``r**s * (e(r) r**-s)`` and handled with
        an algebraic weight, which keeps the smooth factor well behaved.
    limit : int
        Maximum number of subintervals.
    points : sequence of float, optional
        Interior break points handed to the quadrature routine.

    Returns
    -------
    float

    Raises
    ------
    IntegrationError
        If the quadrature does not converge.
    """
    if a < 0 or b < a or b > e.T * (1 + _EDGE):
        raise DomainError(f"bad limits [{a}, {b}] for domain (0, {e.T}]")
    if a == b:
        return 0.0
    pts = sorted(set(float(p) for p in (points or ()) if a < p < b) |
                 {x for x in e.breakpoints() if a < x < b})
    kwargs = dict(epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    if singular_exponent is not None:
        if a != 0:
            raise ValueError("singularity hints refer to the endpoint a = 0")
        s = float(singular_exponent)
        if s <= -1:
            raise IntegrationError(f"r**{s} is not integrable at 0", math.nan, math.inf)

        def smooth(r):
            # QUADPACK may sample the endpoint itself
            r = max(r, 1e-300)
            return float(e._eval(np.asarray(r, dtype=float))) * r ** (-s)

        res = _integrate.quad(smooth, a, b, weight="alg", wvar=(s, 0.0), **kwargs)
    else:
        def fn(r):
            return float(e._eval(np.asarray(r, dtype=float)))

        if pts:
            res = _integrate.quad(fn, a, b, points=pts, **kwargs)
        else:
            res = _integrate.quad(fn, a, b, **kwargs)
    value, abserr = res[0], res[1]
    # full_output appends a message only when QUADPACK flags a problem
    if len(res) > 3 and abserr > tol:
        raise IntegrationError(
            f"quadrature did not converge on [{a}, {b}] (abserr={abserr:.3g})",
            value,
            abserr,
        )
    return float(value)
