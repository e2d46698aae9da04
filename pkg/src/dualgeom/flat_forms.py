"""Exact exterior calculus for polynomial forms on flat R**n.

Coefficients are polynomials with :class:`fractions.Fraction` coefficients
stored as ``{exponent tuple: Fraction}``; forms map strictly increasing
index tuples (0-based internally, 1-based in the text syntax) to such
polynomials.  Every zero test is exact.

Conventions
-----------
* ``d`` is the usual exterior derivative.
* ``codiff`` is ``delta w = -sum_i contraction(e_i, d_i w)``, the formal
  adjoint of ``d`` for the Euclidean metric.
* ``laplacian`` is ``-(d delta + delta d)``; on coordinates it acts as
  ``sum_i d_i**2`` on every coefficient.
* ``hodge_star`` satisfies ``** = (-1)**(k (n-k))`` (standard Riemannian
  convention).

Text syntax: a sum of terms ``coef dx_i^dx_j...`` such as
``x1*x3 dx1^dx3 + 2 dx2``; powers use ``**``, a term without ``dx`` is a
0-form.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FormError",
    "PolyForm",
    "parse_form",
    "parse_graded",
    "format_form",
    "d",
    "codiff",
    "laplacian",
    "hodge_star",
    "wedge",
    "inner",
    "norm_sq",
    "classify",
    "condition_w_report",
    "box_integral",
    "bump",
    "l2_pairing",
    "check_caps",
    "MAX_N",
    "MAX_DEGREE",
]

MAX_N = 8
MAX_DEGREE = 6


class FormError(ValueError):
    """Degree or syntax error."""


# -- polynomials ---------------------------------------------------------

def _padd(p, q, s=1):
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + s * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _pscale(p, c):
    return {e: c * v for e, v in p.items()} if c else {}


def _pdiff(p, i):
    out = {}
    for e, c in p.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = c * e[i]
    return out


def _peval(p, x):
    total = Fraction(0)
    for e, c in p.items():
        term = Fraction(c)
        for xi, ei in zip(x, e):
            if ei:
                term *= Fraction(xi) ** ei
        total += term
    return total


def _pdeg(p):
    return max((sum(e) for e in p), default=0)


def _sort_sign(idx):
    """Sign and sorted tuple of a multi-index, or ``(0, None)`` on repeats."""
    if len(set(idx)) < len(idx):
        return 0, None
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


# -- forms ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PolyForm:
    """Polynomial ``k``-form on R**n.

    ``coeffs`` maps sorted 0-based index tuples of length ``k`` to
    polynomials ``{exponents: Fraction}``; zero coefficients are dropped.
    """

    n: int
    k: int
    coeffs: dict

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise FormError(f"invalid degree k={self.k} for n={self.n}")
        clean = {}
        for I, p in self.coeffs.items():
            I = tuple(I)
            if len(I) != self.k or list(I) != sorted(set(I)) or (I and not 0 <= I[0] <= I[-1] < self.n):
                raise FormError(f"index tuple {I} is not canonical for k={self.k}, n={self.n}")
            p = {tuple(e): Fraction(c) for e, c in p.items() if c}
            if any(len(e) != self.n for e in p):
                raise FormError("exponent tuples must have length n")
            if p:
                clean[I] = p
        object.__setattr__(self, "coeffs", clean)

    # constructors
    @classmethod
    def zero(cls, n: int, k: int) -> "PolyForm":
        return cls(n, k, {})

    @classmethod
    def scalar(cls, n: int, poly: dict) -> "PolyForm":
        return cls(n, 0, {(): poly})

    @classmethod
    def from_string(cls, text: str, n: int | None = None) -> "PolyForm":
        return parse_form(text, n)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Maximal polynomial degree of the coefficients."""
        return max((_pdeg(p) for p in self.coeffs.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.n, self.k, self.coeffs) == (other.n, other.k, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.k, tuple(sorted(self.coeffs))))

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._same(other)
        out = dict(self.coeffs)
        for I, p in other.coeffs.items():
            out[I] = _padd(out.get(I, {}), p)
        return PolyForm(self.n, self.k, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.n, self.k, {I: _pscale(p, -1) for I, p in self.coeffs.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        c = Fraction(c)
        return PolyForm(self.n, self.k, {I: _pscale(p, c) for I, p in self.coeffs.items()})

    def times(self, poly: dict) -> "PolyForm":
        """Multiply every coefficient by the polynomial ``poly``."""
        return PolyForm(self.n, self.k, {I: _pmul(p, poly) for I, p in self.coeffs.items()})

    def at(self, point) -> dict:
        """Exact coefficient values at a rational point."""
        return {I: _peval(p, point) for I, p in self.coeffs.items()}

    def _same(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise FormError(f"degree mismatch: ({self.n},{self.k}) vs ({other.n},{other.k})")

    def __repr__(self):
        return f"PolyForm(n={self.n}, k={self.k}, {format_form(self)!r})"

    def __str__(self):
        return format_form(self)


def d(w: PolyForm) -> PolyForm:
    """Exterior derivative.

    Raises
    ------
    FormError
        For ``k == n``.
    """
    if w.k >= w.n:
        raise FormError("d is undefined on top-degree forms here (k = n)")
    out = {}
    for I, p in w.coeffs.items():
        for i in range(w.n):
            dp = _pdiff(p, i)
            if not dp:
                continue
            s, J = _sort_sign((i,) + I)
            if s:
                out[J] = _padd(out.get(J, {}), _pscale(dp, s))
    return PolyForm(w.n, w.k + 1, out)


def codiff(w: PolyForm) -> PolyForm:
    """Codifferential ``-sum_i contraction(e_i, d_i w)``."""
    if w.k == 0:
        raise FormError("codifferential of a 0-form is undefined")
    out = {}
    for I, p in w.coeffs.items():
        for pos, i in enumerate(I):
            dp = _pdiff(p, i)
            if not dp:
                continue
            # contraction with e_i removes position pos with sign (-1)**pos
            J = I[:pos] + I[pos + 1:]
            s = -1 if pos % 2 == 0 else 1
            out[J] = _padd(out.get(J, {}), _pscale(dp, s))
    return PolyForm(w.n, w.k - 1, out)


def laplacian(w: PolyForm) -> PolyForm:
    """``-(d codiff + codiff d)``; equals the coefficientwise ``sum_i d_i**2``."""
    acc = PolyForm.zero(w.n, w.k)
    if w.k > 0:
        acc = acc + d(codiff(w))
    if w.k < w.n:
        acc = acc + codiff(d(w))
    return -acc


def hodge_star(w: PolyForm) -> PolyForm:
    """Euclidean Hodge star with ``dx_I ^ *dx_I = dx_1 ^ ... ^ dx_n``."""
    out = {}
    full = set(range(w.n))
    for I, p in w.coeffs.items():
        J = tuple(sorted(full - set(I)))
        s, _ = _sort_sign(I + J)
        out[J] = _pscale(p, s)
    return PolyForm(w.n, w.n - w.k, out)


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    if a.n != b.n:
        raise FormError("dimension mismatch")
    if a.k + b.k > a.n:
        return _zero_over(a.n, a.k + b.k)
    out = {}
    for I, p in a.coeffs.items():
        for J, q in b.coeffs.items():
            s, K = _sort_sign(I + J)
            if s:
                out[K] = _padd(out.get(K, {}), _pscale(_pmul(p, q), s))
    return PolyForm(a.n, a.k + b.k, out)


class _TooHigh:
    """Stand-in for the zero form of degree above ``n``."""

    def __init__(self, n, k):
        self.n, self.k, self.coeffs = n, k, {}

    def is_zero(self):
        return True


def _zero_over(n, k):
    return _TooHigh(n, k)


def inner(a, b) -> dict:
    """Pointwise inner product ``sum_I a_I b_I`` as a polynomial."""
    out = {}
    for I, p in a.coeffs.items():
        q = b.coeffs.get(I)
        if q:
            out = _padd(out, _pmul(p, q))
    return out


def norm_sq(w) -> dict:
    return inner(w, w)


@dataclass(frozen=True)
class FormClass:
    closed: bool
    coclosed: bool
    harmonic: bool


def classify(w: PolyForm) -> FormClass:
    """Exact closed / co-closed / harmonic predicates.

    Top-degree forms count as closed and 0-forms as co-closed.

    Examples
    --------
    >>> classify(parse_form("x1 dx1", 3))
    FormClass(closed=True, coclosed=False, harmonic=True)
    """
    closed = w.k == w.n or d(w).is_zero()
    coclosed = w.k == 0 or codiff(w).is_zero()
    return FormClass(closed, coclosed, laplacian(w).is_zero())


def _d_or_none(w):
    return d(w) if w.k < w.n else _zero_over(w.n, w.n + 1)


def _scalar_d(p, n):
    """``d`` of a polynomial 0-function as a 1-form."""
    return d(PolyForm(n, 0, {(): p})) if n >= 1 else None


@dataclass(frozen=True)
class ConditionWReport:
    """Sampled Condition W verdict.

    ``lhs`` and ``rhs`` are the exact values ``|<d|W|**2 ^ W, dW>|`` and
    ``2 |W|**2 |dW|**2`` at ``worst_point`` for the inequality named in
    ``which`` (``"omega"`` or ``"star"``).  The comparison is done on
    squares, ``lhs**2 <= rhs**2``.
    """

    holds_at_all_samples: bool
    worst_point: tuple
    lhs: Fraction
    rhs: Fraction
    which: str


def _w_sides(w: PolyForm):
    dw = _d_or_none(w)
    ns = norm_sq(w)
    if dw.is_zero():
        zero = {}
        return zero, zero
    lhs = inner(wedge(_scalar_d(ns, w.n), w), dw)
    rhs = _pscale(_pmul(ns, norm_sq(dw)), 2)
    return lhs, rhs


def condition_w_report(w: PolyForm, sample_points) -> ConditionWReport:
    """Check both Condition W inequalities at rational sample points.

    This is a sampled check, not a global proof.
    """
    pts = [tuple(Fraction(x) for x in pt) for pt in sample_points]
    if not pts:
        raise FormError("need at least one sample point")
    if any(len(pt) != w.n for pt in pts):
        raise FormError("sample points must have n coordinates")
    sides = {"omega": _w_sides(w), "star": _w_sides(hodge_star(w))}
    ok = True
    worst = None
    for pt in pts:
        for which, (L, R) in sides.items():
            lv, rv = abs(_peval(L, pt)), _peval(R, pt)
            good = lv * lv <= rv * rv
            ok = ok and good
            gap = lv - rv
            if worst is None or gap > worst[0]:
                worst = (gap, pt, lv, rv, which)
    _, pt, lv, rv, which = worst
    return ConditionWReport(ok, pt, lv, rv, which)


# -- exact integration ----------------------------------------------------

def _moment(m: int, weighted: bool) -> Fraction:
    """``int_{-1}^{1} x**m (1 - x**2)**2 dx`` (or without the weight)."""
    if m % 2:
        return Fraction(0)
    if not weighted:
        return Fraction(2, m + 1)
    return 2 * (Fraction(1, m + 1) - Fraction(2, m + 3) + Fraction(1, m + 5))


def box_integral(p: dict, weighted: bool = False) -> Fraction:
    """Exact integral of a polynomial over ``[-1, 1]**n``.

    With ``weighted=True`` the integrand carries the bump
    ``prod_i (1 - x_i**2)**2``.
    """
    total = Fraction(0)
    for e, c in p.items():
        term = Fraction(c)
        for m in e:
            term *= _moment(m, weighted)
        total += term
    return total


def bump(n: int) -> dict:
    """The polynomial ``prod_i (1 - x_i**2)**2``, vanishing to first order on the box boundary."""
    out = {tuple([0] * n): Fraction(1)}
    for i in range(n):
        e0 = [0] * n
        e2 = [0] * n
        e4 = [0] * n
        e2[i], e4[i] = 2, 4
        out = _pmul(out, {tuple(e0): Fraction(1), tuple(e2): Fraction(-2), tuple(e4): Fraction(1)})
    return out


def l2_pairing(a: PolyForm, b: PolyForm, weighted: bool = False) -> Fraction:
    """``int_box <a, b>`` (optionally against the bump weight)."""
    a._same(b)
    return box_integral(inner(a, b), weighted)


# -- text syntax ----------------------------------------------------------

_DX = re.compile(r"dx(\d+)((?:\s*\^\s*dx\d+)*)")


def check_caps(w: PolyForm, max_n: int = MAX_N, max_degree: int = MAX_DEGREE) -> PolyForm:
    if w.n > max_n:
        raise FormError(f"dimension {w.n} exceeds cap {max_n}")
    if w.degree() > max_degree:
        raise FormError(f"polynomial degree {w.degree()} exceeds cap {max_degree}")
    return w


def parse_graded(text: str, n: int | None = None, max_n: int = MAX_N,
                 max_degree: int = MAX_DEGREE) -> dict:
    """Parse possibly inhomogeneous text into ``{k: PolyForm}``.

    ``"x1*x3 dx1^dx3 + 2 dx2"`` yields a 2-form and a 1-form.  ``n``
    defaults to the largest index that appears.  Wedge factors may come in
    any order; repeated factors give zero.
    """
    import sympy

    names = {}

    def repl(m):
        idx = [int(m.group(1))] + [int(t) for t in re.findall(r"dx(\d+)", m.group(2))]
        if min(idx) < 1:
            raise FormError("indices start at 1")
        key = "_D_" + "_".join(map(str, idx))
        names[key] = idx
        return f"*{key}"

    body = _DX.sub(repl, text.strip())
    # a leading "*" appears for terms like "dx1" or "+ dx2"
    body = re.sub(r"(^|[+\-(])\s*\*", r"\1 1*", body)
    xs = [int(t) for t in re.findall(r"x(\d+)", _DX.sub("", text))]
    dxs = [i for idx in names.values() for i in idx]
    top = max(xs + dxs + [1])
    if n is None:
        n = top
    elif top > n:
        raise FormError(f"index {top} exceeds n={n}")
    if n > max_n:
        raise FormError(f"dimension {n} exceeds cap {max_n}")
    xsyms = sympy.symbols(" ".join(f"x{i}" for i in range(1, n + 1)) + " ,")
    dsyms = {k: sympy.Symbol(k) for k in names}
    try:
        expr = sympy.parse_expr(body, local_dict={**{str(s): s for s in xsyms}, **dsyms},
                                evaluate=True)
    except Exception as exc:  # sympy raises many types
        raise FormError(f"cannot parse {text!r}: {exc}") from exc
    expr = sympy.expand(expr)
    graded = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        ds = [s for s in term.free_symbols if s.name in dsyms]
        if len(ds) > 1 or (ds and sympy.degree(term, ds[0]) != 1):
            raise FormError(f"term {term} is not linear in one wedge monomial")
        if ds:
            coef = term / ds[0]
            idx = [i - 1 for i in names[ds[0].name]]
        else:
            coef, idx = term, []
        if len(idx) > n:
            raise FormError("form degree exceeds n")
        s, I = _sort_sign(tuple(idx))
        terms = graded.setdefault(len(idx), {})
        if not s:
            continue
        try:
            poly = sympy.Poly(coef, *xsyms)
        except sympy.PolynomialError as exc:
            raise FormError(f"coefficient {coef} is not a polynomial") from exc
        p = {}
        for mon, c in poly.terms():
            c = sympy.Rational(c)
            p[tuple(mon)] = s * Fraction(int(c.p), int(c.q))
        terms[I] = _padd(terms.get(I, {}), p)
    if not graded:
        graded[0] = {}
    return {k: check_caps(PolyForm(n, k, t), max_n, max_degree) for k, t in sorted(graded.items())}


def parse_form(text: str, n: int | None = None, max_n: int = MAX_N,
               max_degree: int = MAX_DEGREE, k: int | None = None) -> PolyForm:
    """Parse homogeneous text such as ``"x1*x3 dx1^dx3 - x2 dx2^dx3"``.

    ``k`` pins the degree, which is needed to read back ``"0"`` as a zero
    ``k``-form.

    Raises
    ------
    FormError
        On syntax errors, non-polynomial coefficients, mixed degrees or
        exceeded caps.
    """
    graded = parse_graded(text, n, max_n, max_degree)
    if len(graded) > 1:
        raise FormError(f"mixed form degrees {sorted(graded)}; use parse_graded")
    (deg, w), = graded.items()
    if k is not None and k != deg:
        if w.is_zero():
            return PolyForm.zero(w.n, k)
        raise FormError(f"expected a {k}-form, got degree {deg}")
    return w


def _format_poly(p: dict) -> str:
    parts = []
    for e in sorted(p, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = p[e]
        mon = "*".join(
            f"x{i + 1}" if m == 1 else f"x{i + 1}**{m}" for i, m in enumerate(e) if m
        )
        mag = abs(c)
        if not mon:
            body = str(mag)
        elif mag == 1:
            body = mon
        else:
            body = f"{mag}*{mon}"
        parts.append(("-" if c < 0 else "+", body))
    text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sgn, body in parts[1:]:
        text += f" {sgn} {body}"
    return text


def format_form(w: PolyForm) -> str:
    """Inverse of :func:`parse_form` (up to term order)."""
    if w.is_zero():
        return "0"
    out = []
    for I in sorted(w.coeffs):
        p = w.coeffs[I]
        coef = _format_poly(p)
        basis = "^".join(f"dx{i + 1}" for i in I)
        if not basis:
            out.append(f"({coef})" if len(p) > 1 else coef)
        elif coef == "1":
            out.append(basis)
        elif coef == "-1":
            out.append(f"-{basis}")
        elif len(p) > 1:
            out.append(f"({coef}) {basis}")
        else:
            out.append(f"{coef} {basis}")
    text = out[0]
    for t in out[1:]:
        text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return text


def random_form(rng, n: int, k: int, degree: int = 3, terms: int = 3) -> PolyForm:
    """Random polynomial ``k``-form with small integer coefficients (test helper)."""
    idx = list(itertools.combinations(range(n), k))
    coeffs = {}
    for _ in range(terms):
        I = idx[int(rng.integers(len(idx)))]
        e = [0] * n
        for _ in range(int(rng.integers(degree + 1))):
            e[int(rng.integers(n))] += 1
        c = int(rng.integers(-3, 4))
        coeffs[I] = _padd(coeffs.get(I, {}), {tuple(e): Fraction(c)})
    return PolyForm(n, k, coeffs)
