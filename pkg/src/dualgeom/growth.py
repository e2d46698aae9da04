"""Growth-type classifiers on the power-log family.

A profile is the ball-mass function ``B(r) = c r**alpha ln(e + r)**beta``
of some ``|f|**q``.  For this family every growth test reduces to the
divergence of a power-log integral or a dyadic power-log series, which is
decidable from exponents:

* ``int^oo r**a ln(r)**b dr`` diverges iff ``a > -1`` or ``(a == -1 and b >= -1)``
* ``sum_j 2**(j e) j**b`` diverges iff ``e > 0`` or ``(e == 0 and b >= -1)``

Derivation of the flags (``L = ln r`` at infinity):

finite
    ``B / r**p ~ r**(alpha - p) L**beta`` has finite liminf.
small
    ``(r / B)**(1/(p-1)) ~ r**((1-alpha)/(p-1)) L**(-beta/(p-1))`` is not
    integrable.
obtuse
    The sphere integral is ``B'(r)`` by the coarea formula.  For
    ``alpha > 0`` it is ``~ alpha c r**(alpha-1) L**beta`` and the test is
    the same integral as for small.  For ``alpha == 0`` the integrand
    grows like a positive power of ``r``.
mild
    The sequence ``r_j = 2**j`` gives terms
    ``~ 2**(j (p - alpha)/(p-1)) j**(-beta/(p-1))``, so divergence along
    it is sufficient.  When the dyadic series converges the profile is
    also acute, and acute implies severe for every sequence, so the
    dyadic test decides mildness completely on this family.
moderate
    Take ``psi = (B / r**p)**(1/(p-1))``; then the limsup in the
    definition is finite and ``psi`` lies in the admissible class iff
    ``int dr / (r psi) = oo``.  Any admissible ``psi`` dominating this
    one fails whenever this one does, so the test is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

__all__ = [
    "GrowthError",
    "GrowthProfile",
    "GrowthVerdict",
    "FLAG_NAMES",
    "COUNTERPART",
    "integral_diverges",
    "dyadic_series_diverges",
    "classify",
    "classify_Lq_bounded",
    "small_integral",
]

BOUNDARY_TOL = 1e-12

FLAG_NAMES = ("finite", "mild", "obtuse", "moderate", "small")
COUNTERPART = {
    "finite": "infinite",
    "mild": "severe",
    "obtuse": "acute",
    "moderate": "immoderate",
    "small": "large",
}


class GrowthError(ValueError):
    """Unsupported exponent or a profile outside the decidable family."""


def _eq(x: float, y: float) -> bool:
    return abs(x - y) <= BOUNDARY_TOL * max(1.0, abs(x), abs(y))


def integral_diverges(a: float, b: float) -> bool:
    """Whether ``int_2^oo r**a ln(r)**b dr`` diverges."""
    if _eq(a, -1.0):
        return b >= -1.0 - BOUNDARY_TOL
    return a > -1.0


def dyadic_series_diverges(e: float, b: float) -> bool:
    """Whether ``sum_{j>=1} 2**(j e) j**b`` diverges."""
    if _eq(e, 0.0):
        return b >= -1.0 - BOUNDARY_TOL
    return e > 0.0


@dataclass(frozen=True)
class GrowthProfile:
    """Ball-mass profile ``B(r) = c r**alpha ln(e + r)**beta`` with exponent ``p``.

    Parameters
    ----------
    p : float
        Growth exponent, ``p > 1``.
    alpha, beta : float
        Power and log exponents.  ``B`` must be nondecreasing at infinity,
        hence ``alpha > 0`` or ``(alpha == 0 and beta >= 0)``.
    c : float
        Positive constant; it never affects a flag.
    """

    p: float
    alpha: float
    beta: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if not self.p > 1:
            raise GrowthError(f"unsupported exponent p={self.p}; need p > 1")
        if not self.c > 0:
            raise GrowthError("profile constant c must be positive")
        if self.alpha < 0 or (self.alpha == 0 and self.beta < 0):
            raise GrowthError("profile must be nondecreasing (alpha > 0 or alpha = 0, beta >= 0)")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.c * r ** self.alpha * np.log(math.e + r) ** self.beta

    @property
    def bounded(self) -> bool:
        return self.alpha == 0 and self.beta == 0


@dataclass(frozen=True)
class GrowthVerdict:
    finite: bool
    mild: bool
    obtuse: bool
    moderate: bool
    small: bool

    @property
    def balanced(self) -> bool:
        return self.finite or self.mild or self.obtuse or self.moderate or self.small

    def chain_holds(self) -> bool:
        """moderate <=> small, small => mild, mild => obtuse."""
        return (
            self.moderate == self.small
            and (not self.small or self.mild)
            and (not self.mild or self.obtuse)
        )

    def labels(self) -> dict:
        """Ten named flags: each type and its counterpart."""
        out = {}
        for name in FLAG_NAMES:
            v = getattr(self, name)
            out[name] = v
            out[COUNTERPART[name]] = not v
        return out


def _finite(g: GrowthProfile) -> bool:
    if _eq(g.alpha, g.p):
        return g.beta <= BOUNDARY_TOL
    return g.alpha < g.p


def _small(g: GrowthProfile) -> bool:
    m = g.p - 1.0
    return integral_diverges((1.0 - g.alpha) / m, -g.beta / m)


def _obtuse(g: GrowthProfile) -> bool:
    m = g.p - 1.0
    if g.alpha == 0:
        # B' ~ r**-1 L**(beta-1) or B' = 0: integrand unbounded either way
        return True if g.beta == 0 else integral_diverges(1.0 / m, -(g.beta - 1.0) / m)
    return integral_diverges((1.0 - g.alpha) / m, -g.beta / m)


def _mild(g: GrowthProfile) -> bool:
    m = g.p - 1.0
    if g.alpha == 0:
        # shell masses ~ j**(beta-1) (or 0): terms grow geometrically
        return True if g.beta == 0 else dyadic_series_diverges(g.p / m, -(g.beta - 1.0) / m)
    return dyadic_series_diverges((g.p - g.alpha) / m, -g.beta / m)


def _moderate(g: GrowthProfile) -> bool:
    m = g.p - 1.0
    # psi = r**((alpha-p)/m) L**(beta/m); test int r**-1 / psi
    return integral_diverges(-1.0 - (g.alpha - g.p) / m, -g.beta / m)


def classify(g: GrowthProfile) -> GrowthVerdict:
    """Decide the five growth types of ``g``.

    Examples
    --------
    >>> classify(GrowthProfile(p=2, alpha=2)).small
    True
    >>> classify(GrowthProfile(p=2, alpha=3)).balanced
    False
    """
    return GrowthVerdict(
        finite=_finite(g),
        mild=_mild(g),
        obtuse=_obtuse(g),
        moderate=_moderate(g),
        small=_small(g),
    )


def classify_Lq_bounded(total_mass: float, p: float = 2.0) -> GrowthVerdict:
    """Verdict for a bounded ball-mass function (an ``L**q`` object).

    Every flag holds for every ``p >= 0``: the liminf of ``B / r**p`` is 0
    and ``int (r / B)**(1/(p-1))`` diverges.
    """
    if not (0 <= total_mass < math.inf):
        raise GrowthError("total mass must be finite and nonnegative")
    if p < 0:
        raise GrowthError("p must be nonnegative")
    return GrowthVerdict(True, True, True, True, True)


def small_integral(g: GrowthProfile, a: float, R: float) -> float:
    """Truncated small-growth integral ``int_a^R (r / B)**(1/(p-1)) dr``.

    Evaluated in the variable ``s = ln r`` so that large ``R`` is cheap.
    """
    m = g.p - 1.0

    def integrand(s):
        r = math.exp(s)
        return r * (r / float(g(r))) ** (1.0 / m)

    val, _ = quad(integrand, math.log(a), math.log(R), limit=400, epsrel=1e-10)
    return float(val)
