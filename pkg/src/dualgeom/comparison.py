"""Checkers for the Jacobi/Riccati comparison theorems.

Four checkers share one certificate format:

``sturm``     Jacobi vs Jacobi:    f1'/f1 <= f2'/f2,  f1 <= f2,  t1 <= t2
``riccati``   Riccati vs Riccati:  g1 <= g2
``mixed_I``   Riccati vs Jacobi:   g1 <= kappa2 f2'/f2,  t1 <= t2
``mixed_II``  Jacobi vs Riccati:   kappa1 f1'/f1 <= g2

Hypotheses: ``G2 <= G1`` and ``0 < kappa1 <= kappa2``, plus residual signs
(system 1 a supersolution, system 2 a subsolution).

Margins use the bounded variables of :mod:`dualgeom.ode_engine`, e.g.
``f2'/f2 - f1'/f1 = w2/kappa2 - w1/kappa1``, so the singular ``1/t``
parts cancel exactly.  Note that ``g1 <= g2`` is derived from
``g1/kappa1 <= g2/kappa2`` and therefore needs ``g2 >= 0`` when
``kappa1 < kappa2``; the checker reports a failure honestly when that
fails.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .ode_engine import JacobiSolution, RiccatiSolution

__all__ = [
    "Tolerances",
    "HypothesisError",
    "PreconditionError",
    "ComparisonCertificate",
    "check_sturm",
    "check_riccati_pair",
    "check_mixed_I",
    "check_mixed_II",
    "wronskian",
    "margin_radii",
]

THEOREMS = ("sturm", "riccati", "mixed_I", "mixed_II", "bounds")


@dataclass(frozen=True)
class Tolerances:
    """Tolerances for hypothesis and conclusion margins.

    ``sign_tol`` bounds the residual-sign test on super/sub-solutions;
    ``wronskian_tol`` is the relative slack for the Wronskian monotonicity.
    """

    hyp_tol: float = 1e-6
    con_tol: float = 1e-6
    sign_tol: float = 1e-6
    wronskian_tol: float = 1e-8


class HypothesisError(ValueError):
    """A comparison hypothesis fails; the message names the offending system."""

    def __init__(self, message: str, radius: float | None = None):
        super().__init__(message)
        self.radius = radius


class PreconditionError(HypothesisError):
    """``0 < kappa1 <= kappa2`` fails."""


@dataclass(frozen=True, eq=False)
class ComparisonCertificate:
    """Sampled margin record for one comparison statement.

    ``verdict`` is ``"pass"`` iff every conclusion margin is at least
    ``-con_tol``, every hypothesis margin at least ``-hyp_tol`` and
    ``kappa1 <= kappa2``.
    """

    theorem_id: str
    radii: np.ndarray
    hypothesis_margins: np.ndarray
    kappa_pair: tuple[float, float]
    conclusion_margins: np.ndarray
    verdict: str
    worst_node: float
    worst_margin: float
    components: dict = field(default_factory=dict)
    t_pair: tuple[float, float] = (math.inf, math.inf)
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_record(self) -> str:
        """One line: theorem, verdict, worst margin and its radius."""
        return (
            f"theorem={self.theorem_id} verdict={self.verdict} "
            f"worst_margin={self.worst_margin:.17g} worst_radius={self.worst_node:.17g}"
        )

    def to_csv(self) -> str:
        """Per-node margins as CSV (``r, hypothesis_margin, conclusion_margin`` and components)."""
        buf = io.StringIO()
        names = sorted(self.components)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "hypothesis_margin", "conclusion_margin", *names])
        for i, r in enumerate(self.radii):
            row = [r, self.hypothesis_margins[i], self.conclusion_margins[i]]
            row += [self.components[n][i] for n in names]
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()


def _effective_sup(sol) -> float:
    """First zero / pole, or infinity when none occurs on the grid."""
    if isinstance(sol, RiccatiSolution):
        return sol.pole if sol.pole is not None else math.inf
    return sol.t_sup if sol.t_sup < sol.T else math.inf


def margin_radii(s1, s2) -> np.ndarray:
    """Union of both grids restricted to ``[2 eps, 0.95 min(t1, t2)]``."""
    eps = max(s1.t0, s2.t0)
    hi = 0.95 * min(s1.t_sup, s2.t_sup)
    r = np.union1d(s1.grid, s2.grid)
    return r[(r >= 2 * eps) & (r <= hi)]


def _hypothesis(s1, s2, r, tols: Tolerances, name: str):
    k1, k2 = s1.kappa, s2.kappa
    if not (0 < k1 <= k2):
        raise PreconditionError(f"{name}: need 0 < kappa1 <= kappa2, got ({k1}, {k2})")
    G1, G2 = s1.G._eval(r), s2.G._eval(r)
    hyp = G1 - G2
    scaled = hyp / (1.0 + np.abs(G2))
    bad = np.nonzero(scaled < -tols.hyp_tol)[0]
    if bad.size:
        raise HypothesisError(
            f"{name}: G2 <= G1 fails at r={r[bad[0]]:.6g} (G1={G1[bad[0]]:.6g}, G2={G2[bad[0]]:.6g})",
            float(r[bad[0]]),
        )
    return hyp


def _signs(sup, sub, tols: Tolerances, name: str):
    rs = sup.residual()
    if rs.size and np.max(rs) > tols.sign_tol:
        raise HypothesisError(f"{name}: system 1 is not a supersolution (residual {np.max(rs):.3g})")
    rb = sub.residual()
    if rb.size and np.min(rb) < -tols.sign_tol:
        raise HypothesisError(f"{name}: system 2 is not a subsolution (residual {np.min(rb):.3g})")


def _certificate(theorem, r, hyp, s1, s2, comps: dict, tols: Tolerances, t_ok: bool, notes=()):
    con = np.min(np.vstack(list(comps.values())), axis=0) if comps else np.zeros_like(r)
    if con.size:
        i = int(np.argmin(con))
        worst, node = float(con[i]), float(r[i])
    else:
        worst, node = 0.0, math.nan
    hyp_scaled = hyp / (1.0 + np.abs(s2.G._eval(r))) if r.size else hyp
    ok = (
        (con.size == 0 or worst >= -tols.con_tol)
        and (hyp.size == 0 or float(np.min(hyp_scaled)) >= -tols.hyp_tol)
        and s1.kappa <= s2.kappa
        and t_ok
    )
    return ComparisonCertificate(
        theorem_id=theorem,
        radii=r,
        hypothesis_margins=hyp,
        kappa_pair=(s1.kappa, s2.kappa),
        conclusion_margins=con,
        verdict="pass" if ok else "fail",
        worst_node=node,
        worst_margin=worst,
        components=comps,
        t_pair=(_effective_sup(s1), _effective_sup(s2)),
        notes=tuple(notes) + (() if t_ok else ("t1 > t2",)),
    )


def wronskian(f1: JacobiSolution, f2: JacobiSolution, r) -> np.ndarray:
    """``f2' f1 - f1' f2 = kappa1 kappa2 t**2 (u1 v2 - u2 v1)``."""
    r = np.asarray(r, dtype=float)
    u1, v1, _ = f1.uv(r)
    u2, v2, _ = f2.uv(r)
    return f1.kappa * f2.kappa * r * r * (u1 * v2 - u2 * v1)


def check_sturm(f1: JacobiSolution, f2: JacobiSolution,
                tols: Tolerances | None = None) -> ComparisonCertificate:
    """Jacobi-vs-Jacobi comparison.

    Certifies ``f1'/f1 <= f2'/f2`` and ``f1 <= f2`` on the margin radii
    and ``t1 <= t2``.  The Wronskian check is stored in ``notes`` when it
    fails.
    """
    tols = tols or Tolerances()
    r = margin_radii(f1, f2)
    hyp = _hypothesis(f1, f2, r, tols, "sturm")
    _signs(f1, f2, tols, "sturm")
    u1, v1, _ = f1.uv(r)
    u2, v2, _ = f2.uv(r)
    logd = v2 / u2 - v1 / u1
    F1, F2 = f1.kappa * r * u1, f2.kappa * r * u2
    fm = (F2 - F1) / np.maximum(1.0, np.abs(F2))
    W = wronskian(f1, f2, r)
    dW = np.diff(W)
    notes = []
    if dW.size and np.min(dW / np.maximum(1.0, np.abs(W[1:]))) < -tols.wronskian_tol:
        notes.append("wronskian decreases")
    t_ok = _effective_sup(f1) <= _effective_sup(f2) * (1 + 1e-12)
    return _certificate("sturm", r, hyp, f1, f2, {"log_derivative": logd, "value": fm},
                        tols, t_ok, notes)


def check_riccati_pair(g1: RiccatiSolution, g2: RiccatiSolution,
                       tols: Tolerances | None = None) -> ComparisonCertificate:
    """Riccati-vs-Riccati comparison: ``g1 <= g2``."""
    tols = tols or Tolerances()
    r = margin_radii(g1, g2)
    hyp = _hypothesis(g1, g2, r, tols, "riccati")
    _signs(g1, g2, tols, "riccati")
    m = (g2.kappa - g1.kappa) / r + g2.w(r) - g1.w(r)
    t_ok = _effective_sup(g1) <= _effective_sup(g2) * (1 + 1e-12)
    return _certificate("riccati", r, hyp, g1, g2, {"g": m}, tols, t_ok)


def check_mixed_I(g1: RiccatiSolution, f2: JacobiSolution,
                  tols: Tolerances | None = None) -> ComparisonCertificate:
    """Mixed comparison: ``g1 <= kappa2 f2'/f2`` and ``t1 <= t2``."""
    tols = tols or Tolerances()
    r = margin_radii(g1, f2)
    hyp = _hypothesis(g1, f2, r, tols, "mixed_I")
    _signs(g1, f2, tols, "mixed_I")
    m = (f2.kappa - g1.kappa) / r + f2.w(r) - g1.w(r)
    t_ok = _effective_sup(g1) <= _effective_sup(f2) * (1 + 1e-12)
    return _certificate("mixed_I", r, hyp, g1, f2, {"g": m}, tols, t_ok)


def check_mixed_II(f1: JacobiSolution, g2: RiccatiSolution,
                   tols: Tolerances | None = None) -> ComparisonCertificate:
    """Mixed comparison: ``kappa1 f1'/f1 <= g2``."""
    tols = tols or Tolerances()
    r = margin_radii(f1, g2)
    hyp = _hypothesis(f1, g2, r, tols, "mixed_II")
    _signs(f1, g2, tols, "mixed_II")
    m = (g2.kappa - f1.kappa) / r + g2.w(r) - f1.w(r)
    t_ok = _effective_sup(f1) <= _effective_sup(g2) * (1 + 1e-12)
    return _certificate("mixed_II", r, hyp, f1, g2, {"g": m}, tols, t_ok)
