"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
a usage or configuration error.  Numbers are printed with 17 significant
digits and ``\\n`` line endings so that identical inputs give identical
bytes.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import re
import sys
from fractions import Fraction

import numpy as np

from . import energy_monotonicity as em
from . import flat_forms as ff
from . import growth as gr
from . import inequalities as iq
from . import model_geometry as mg
from .comparison import (
    HypothesisError,
    Tolerances,
    check_mixed_I,
    check_mixed_II,
    check_riccati_pair,
    check_sturm,
)
from .duality import reverse, transform
from .ode_engine import SolverOptions, solve_jacobi, solve_riccati
from .radial_fn import Power, PowerLog, RadialExpr, Sum

__all__ = ["main", "run", "UsageError", "parse_G", "parse_model", "parse_F", "run_scenario"]

PARAM_NAMES = ("A", "A1", "B", "B1", "alpha", "beta", "eps")


class UsageError(ValueError):
    """Bad command line or scenario file (exit code 2)."""


def fmt(x) -> str:
    return f"{float(x):.17g}"


# -- parsers ----------------------------------------------------------------

_TERM = re.compile(r"^\s*([+-]?[\d.eE+-]+?)\s*(?:\*?\s*r\s*\^\s*([+-]?[\d.]+)|/\s*r\s*\^\s*2)?\s*$")


def parse_G(text: str) -> tuple[RadialExpr, float | None]:
    """Parse a curvature coefficient ``G``.

    Accepted terms, joined with ``+``: ``c``, ``c/r^2`` and ``c*r^e``.
    Returns the expression and the singular exponent hint (``-2`` when a
    ``c/r^2`` term is present, else ``None``).
    """
    parts = re.split(r"\s+\+\s+", text.strip())
    exprs, hint = [], None
    for part in parts:
        m = _TERM.match(part)
        if not m:
            raise UsageError(f"cannot parse G term {part!r}")
        try:
            c = float(m.group(1))
        except ValueError as exc:
            raise UsageError(f"cannot parse G coefficient {m.group(1)!r}") from exc
        if "/" in part:
            e = -2.0
        elif m.group(2) is not None:
            e = float(m.group(2))
        else:
            e = 0.0
        if e <= -1 and c != 0:
            hint = e if hint is None else min(hint, e)
        exprs.append(Power(c, e))
    out = exprs[0]
    for e in exprs[1:]:
        out = Sum(out, e)
    return out, hint


def parse_model(text: str, n: int) -> mg.ModelManifold:
    """``euclidean``, ``hyperbolic[:a]``, ``sphere`` or ``power:A``."""
    name, _, arg = text.strip().lower().partition(":")
    try:
        if name == "euclidean":
            return mg.euclidean(n)
        if name == "hyperbolic":
            return mg.hyperbolic(n, float(arg) if arg else 1.0)
        if name == "sphere":
            return mg.sphere(n)
        if name == "power":
            return mg.power_model(n, float(arg))
    except ValueError as exc:
        raise UsageError(f"bad model {text!r}: {exc}") from exc
    raise UsageError(f"unknown model {text!r}")


def parse_F(text: str) -> em.FKind:
    """``identity``, ``ppower:p``, ``bi_plus`` or ``bi_minus``."""
    name, _, arg = text.strip().lower().replace("-", "_").partition(":")
    if name == "identity":
        return em.Identity()
    if name == "ppower":
        try:
            return em.PPower(float(arg))
        except ValueError as exc:
            raise UsageError(f"bad F {text!r}: {exc}") from exc
    if name == "bi_plus":
        return em.BornInfeldPlus()
    if name == "bi_minus":
        return em.BornInfeldMinus()
    raise UsageError(f"unknown F {text!r}")


def _floats(text: str, count=None) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) not in count:
        raise UsageError(f"expected {'/'.join(map(str, count))} numbers, got {text!r}")
    return vals


def _params(ns) -> dict:
    out = {}
    for name in PARAM_NAMES:
        v = getattr(ns, name, None)
        if v is not None:
            out[name] = float(v)
    return out


def _hyp(kind: str, params: dict, shift: float = 0.0) -> mg.CurvatureHypothesis:
    kind = kind.replace("-", "_")
    if kind not in mg.HYPOTHESIS_KINDS:
        raise UsageError(f"unknown hypothesis {kind!r}")
    names, _ = mg.HYPOTHESIS_KINDS[kind]
    try:
        return mg.CurvatureHypothesis(kind, {k: params[k] for k in names if k in params}, shift)
    except HypothesisError as exc:
        raise UsageError(str(exc)) from exc


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- subcommands --------------------------------------------------------------

def cmd_solve(ns, out) -> int:
    G, hint = parse_G(ns.G)
    opts = SolverOptions(singular_exponent=hint)
    if ns.kind == "jacobi":
        sol = solve_jacobi(G, ns.kappa, ns.T, opts)
        top = min(sol.t_sup, sol.T)
        t = np.linspace(sol.t0, top, ns.grid)
        rows = [["t", "f", "fprime"]]
        rows += [[fmt(a), fmt(b), fmt(c)] for a, b, c in zip(t, sol.f(t), sol.fprime(t))]
    else:
        sol = solve_riccati(G, ns.kappa, ns.T, opts)
        top = sol.t_sup if sol.pole is None else sol.t0 + 0.99 * (sol.t_sup - sol.t0)
        t = np.linspace(sol.t0, top, ns.grid)
        rows = [["t", "g"]] + [[fmt(a), fmt(b)] for a, b in zip(t, sol.g(t))]
    out.write(_csv(rows))
    out.write(f"# t_sup={fmt(sol.t_sup)}\n")
    return 0


def dual_round_trip(G: RadialExpr, kappa: float, T: float, hint=None) -> tuple[float, float]:
    """Sup-norm of ``reverse(transform(f)) - f`` on ``[2 eps, 0.9 t_sup]`` and ``t_sup``."""
    sol = solve_jacobi(G, kappa, T, SolverOptions(singular_exponent=hint))
    back = reverse(transform(sol))
    top = min(sol.t_sup, sol.T)
    r = np.linspace(2 * sol.t0, 0.9 * top, 400)
    err = float(np.max(np.abs(back.f(r) - sol.f(r)) / np.maximum(1.0, np.abs(sol.f(r)))))
    return err, float(sol.t_sup)


def cmd_dual(ns, out) -> int:
    G, hint = parse_G(ns.G)
    err, ts = dual_round_trip(G, ns.kappa, ns.T, hint)
    ok = err <= ns.tol
    out.write(f"round_trip_error={fmt(err)} t_sup={fmt(ts)} verdict={'pass' if ok else 'fail'}\n")
    return 0 if ok else 1


_CHECKERS = {
    "sturm": ("jacobi", "jacobi", check_sturm),
    "riccati": ("riccati", "riccati", check_riccati_pair),
    "mixed_I": ("riccati", "jacobi", check_mixed_I),
    "mixed_II": ("jacobi", "riccati", check_mixed_II),
}


def cmd_compare(ns, out) -> int:
    theorem = ns.theorem.replace("-", "_")
    if theorem.lower() == "mixed_i":
        theorem = "mixed_I"
    elif theorem.lower() == "mixed_ii":
        theorem = "mixed_II"
    if theorem not in _CHECKERS:
        raise UsageError(f"unknown theorem id {ns.theorem!r}")
    k1, k2, fn = _CHECKERS[theorem]
    systems = []
    for kind, Gs, kap in ((k1, ns.G1, ns.kappa1), (k2, ns.G2, ns.kappa2)):
        G, hint = parse_G(Gs)
        solver = solve_jacobi if kind == "jacobi" else solve_riccati
        systems.append(solver(G, kap, ns.T, SolverOptions(singular_exponent=hint)))
    tols = Tolerances(hyp_tol=ns.tol, con_tol=ns.tol, sign_tol=ns.tol)
    try:
        cert = fn(*systems, tols)
    except HypothesisError as exc:
        out.write(f"theorem={theorem} verdict=hypothesis_error message={exc}\n")
        return 1
    out.write(cert.to_record() + "\n")
    if ns.cert:
        with open(ns.cert, "w", newline="\n") as fh:
            fh.write(cert.to_csv())
        out.write(f"certificate={ns.cert}\n")
    return 0 if cert.passed else 1


def cmd_bounds(ns, out) -> int:
    h = _hyp(ns.hyp, _params(ns), ns.shift)
    M = parse_model(ns.model, ns.n) if ns.model else None
    out.write(mg.bound_table_csv(h, ns.n, ns.rmax, ns.grid, M=M, applies_to=ns.applies_to))
    if M is None:
        return 0
    try:
        cert = mg.verify_bounds(M, h, Tolerances(hyp_tol=ns.tol, con_tol=ns.tol), applies_to=ns.applies_to)
    except HypothesisError as exc:
        out.write(f"# model={ns.model} verdict=hypothesis_error message={exc}\n")
        return 1
    out.write("# " + cert.to_record() + "\n")
    return 0 if cert.passed else 1


_FLAG_ORDER = ("finite", "infinite", "mild", "severe", "obtuse", "acute",
               "moderate", "immoderate", "small", "large")


def growth_rows(profiles) -> list:
    rows = [["profile", *_FLAG_ORDER, "balanced"]]
    for text in profiles:
        vals = _floats(text, (2, 3, 4))
        try:
            g = gr.GrowthProfile(*vals)
        except gr.GrowthError as exc:
            raise UsageError(str(exc)) from exc
        v = gr.classify(g)
        lab = v.labels()
        rows.append([text, *("yes" if lab[k] else "no" for k in _FLAG_ORDER),
                     "yes" if v.balanced else "no"])
    return rows


def cmd_growth(ns, out) -> int:
    out.write(_csv(growth_rows(ns.profiles)))
    return 0


def _sample_points(n: int, count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    pts = rng.integers(-8, 9, size=(count, n))
    return [tuple(Fraction(int(x), 4) for x in p) for p in pts]


def forms_lines(exprs, n, seed: int, samples: int = 16) -> list:
    lines = []
    for text in exprs:
        try:
            w = ff.parse_form(text, n)
        except ff.FormError as exc:
            raise UsageError(str(exc)) from exc
        c = ff.classify(w)
        yn = lambda b: "yes" if b else "no"  # noqa: E731
        lines.append(f"closed={yn(c.closed)} coclosed={yn(c.coclosed)} harmonic={yn(c.harmonic)}")
        rep = ff.condition_w_report(w, _sample_points(w.n, samples, seed))
        lines.append(
            f"condition_w={'holds' if rep.holds_at_all_samples else 'fails'} "
            f"which={rep.which} lhs={rep.lhs} rhs={rep.rhs} "
            f"worst_point=({','.join(str(x) for x in rep.worst_point)})"
        )
    return lines


def cmd_forms(ns, out) -> int:
    for line in forms_lines(ns.forms, ns.n, ns.seed):
        out.write(line + "\n")
    return 0


def cmd_ckn(ns, out) -> int:
    h = _hyp(ns.hyp, _params(ns))
    try:
        C = iq.ckn_constant(h, ns.a, ns.b, ns.n)
    except iq.InequalityError as exc:
        raise UsageError(str(exc)) from exc
    out.write(f"C={fmt(C)}\n")
    if not ns.model:
        return 0
    M = parse_model(ns.model, ns.n)
    s = iq.CKNScenario(M, ns.a, ns.b, iq.exp_bump(ns.lam, ns.r1, ns.r2), (ns.r1 / 2, 2 * ns.r2))
    try:
        rep = iq.verify_ckn(s, hypothesis=h)
    except iq.InequalityError as exc:
        out.write(f"verdict=refused message={exc}\n")
        return 1
    out.write(_csv([["id", "C", "lhs", "rhs", "slack", "verdict"], rep.csv_row()]))
    return 0 if rep.passed else 1


def cmd_hardy(ns, out) -> int:
    try:
        C = iq.hardy_constant(ns.p, ns.n, ns.A)
    except iq.InequalityError as exc:
        raise UsageError(str(exc)) from exc
    out.write(f"C={fmt(C)}\n")
    if not ns.model:
        return 0
    M = parse_model(ns.model, ns.n)
    try:
        rep = iq.verify_hardy(iq.HardyScenario(M, ns.p, ns.s, ns.A, ns.R1, ns.R2))
    except iq.InequalityError as exc:
        out.write(f"verdict=refused message={exc}\n")
        return 1
    out.write(_csv([["id", "C", "lhs", "rhs", "slack", "verdict"], rep.csv_row()]))
    return 0 if rep.passed else 1


def cmd_costa(ns, out) -> int:
    h = _hyp(ns.hyp, _params(ns))
    try:
        C = iq.costa_constant(ns.case, h, ns.n, ns.t)
    except (iq.InequalityError, KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    out.write(f"C={fmt(C)}\n")
    return 0


def mono_lines(row, k, F, n, params, E=None) -> tuple[list, bool]:
    dF = em.f_degree(F)
    try:
        q = em.LambdaQuery(row, k, dF, n, params)
        lam = em.lambda_exponent(q)
    except em.NotApplicableError as exc:
        return [f"applicable=no message={exc}"], False
    lines = [f"lambda={fmt(lam)}", f"dF={fmt(dF)} lF={fmt(em.f_lower_degree(F))}"]
    if E is not None:
        v = em.vanishing_test(PowerLog(*E), lam)
        lines.append(f"little_o={'yes' if v.little_o else 'no'} "
                     f"consistent={'yes' if v.consistent else 'no'} note={v.certificate}")
    return lines, True


def cmd_mono(ns, out) -> int:
    params = _params(ns)
    E = _floats(ns.E, (3,)) if ns.E else None
    lines, ok = mono_lines(ns.row, ns.k, parse_F(ns.F), ns.n, params, E)
    for line in lines:
        out.write(line + "\n")
    return 0 if ok else 1


# -- scenarios ------------------------------------------------------------------

def _get(sec, key, conv=float, default=None):
    if key not in sec:
        if default is None:
            raise UsageError(f"[{sec.name}] missing key {key!r}")
        return default
    try:
        return conv(sec[key])
    except ValueError as exc:
        raise UsageError(f"[{sec.name}] bad value for {key!r}: {sec[key]!r}") from exc


def _sec_params(sec) -> dict:
    return {k: _get(sec, k) for k in PARAM_NAMES if k in sec}


def run_scenario(sec, seed: int, tol: float) -> tuple[str, str]:
    """Run one scenario section; returns ``(verdict, summary)``."""
    kind = _get(sec, "type", str)
    if kind == "dual":
        G, hint = parse_G(_get(sec, "G", str))
        err, ts = dual_round_trip(G, _get(sec, "kappa", default=1.0), _get(sec, "T"), hint)
        return ("pass" if err <= tol else "fail"), f"round_trip_error={fmt(err)}"
    if kind == "bounds":
        n = _get(sec, "n", int)
        h = _hyp(_get(sec, "hyp", str), _sec_params(sec), _get(sec, "shift", default=0.0))
        M = parse_model(_get(sec, "model", str), n)
        try:
            cert = mg.verify_bounds(M, h, Tolerances(hyp_tol=tol, con_tol=tol))
        except HypothesisError as exc:
            return "fail", f"hypothesis_error={exc}"
        return cert.verdict, f"worst_margin={fmt(cert.worst_margin)}"
    if kind == "growth":
        rows = growth_rows([_get(sec, "profile", str)])
        return "pass", " ".join(f"{k}={v}" for k, v in zip(rows[0][1:], rows[1][1:]))
    if kind == "forms":
        lines = forms_lines([_get(sec, "form", str)], _get(sec, "n", int, 0) or None, seed)
        return "pass", "; ".join(lines)
    if kind == "ckn":
        n = _get(sec, "n", int)
        M = parse_model(_get(sec, "model", str), n)
        h = _hyp(_get(sec, "hyp", str), _sec_params(sec))
        r1, r2 = _get(sec, "r1"), _get(sec, "r2")
        s = iq.CKNScenario(M, _get(sec, "a"), _get(sec, "b"),
                           iq.exp_bump(_get(sec, "lam", default=1.0), r1, r2), (r1 / 2, 2 * r2))
        try:
            rep = iq.verify_ckn(s, hypothesis=h, scenario_id=sec.name)
        except iq.InequalityError as exc:
            return "fail", f"refused={exc}"
        return rep.verdict, f"C={fmt(rep.C)} lhs={fmt(rep.lhs)} rhs={fmt(rep.rhs)} slack={fmt(rep.slack)}"
    if kind == "hardy":
        n = _get(sec, "n", int)
        M = parse_model(_get(sec, "model", str), n)
        hs = iq.HardyScenario(M, _get(sec, "p"), _get(sec, "s", default=1.0), _get(sec, "A", default=1.0),
                              _get(sec, "R1", default=1.0), _get(sec, "R2", default=2.0))
        try:
            rep = iq.verify_hardy(hs, scenario_id=sec.name)
        except iq.InequalityError as exc:
            return "fail", f"refused={exc}"
        return rep.verdict, f"C={fmt(rep.C)} lhs={fmt(rep.lhs)} rhs={fmt(rep.rhs)} slack={fmt(rep.slack)}"
    if kind == "mono":
        E = _floats(sec["E"], (3,)) if "E" in sec else None
        lines, ok = mono_lines(_get(sec, "row", str), _get(sec, "k", int), parse_F(_get(sec, "F", str)),
                               _get(sec, "n", int), _sec_params(sec), E)
        return ("pass" if ok else "fail"), "; ".join(lines)
    if kind == "density":
        n = _get(sec, "n", int)
        M = parse_model(_get(sec, "model", str), n)
        m = _get(sec, "m", default=0.0)
        lam = _get(sec, "lambda")
        rho = np.linspace(_get(sec, "rmin", default=0.1), _get(sec, "rmax", default=5.0),
                          _get(sec, "grid", int, 50))
        rep = em.check_density_ratio(M, PowerLog(1.0, m, 0.0), lam, rho, tol=tol)
        ok = rep.passed and rep.monotone
        return ("pass" if ok else "fail"), f"min_ratio={fmt(rep.min_ratio)} monotone={'yes' if rep.monotone else 'no'}"
    raise UsageError(f"[{sec.name}] unknown scenario type {kind!r}")


def load_scenarios(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read scenario file {path!r}: {exc}") from exc
    return cp


def cmd_report(ns, out) -> int:
    cp = load_scenarios(ns.scenario)
    defaults = cp["run"] if cp.has_section("run") else {}
    seed = ns.seed if ns.seed is not None else int(defaults.get("seed", 0))
    tol = ns.tol if ns.tol_given else float(defaults.get("tol", ns.tol))
    rows = [["id", "type", "verdict", "summary"]]
    failed = 0
    for sid in sorted(s for s in cp.sections() if s != "run"):
        sec = cp[sid]
        verdict, summary = run_scenario(sec, seed, tol)
        failed += verdict != "pass"
        rows.append([sid, sec.get("type"), verdict, summary])
    out.write(_csv(rows))
    out.write(f"# scenarios={len(rows) - 1} failed={failed} seed={seed}\n")
    if ns.cert_dir and failed:
        os.makedirs(ns.cert_dir, exist_ok=True)
        for row in rows[1:]:
            if row[2] == "pass":
                continue
            path = os.path.join(ns.cert_dir, f"{row[0]}.csv")
            with open(path, "w", newline="\n") as fh:
                fh.write(_csv([rows[0], row]))
            out.write(f"# certificate={path}\n")
    return 1 if failed else 0


# -- argument parsing ----------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="seed for randomized checks")
    p.add_argument("--tol", type=float, default=d, help="verification tolerance")
    p.add_argument("--grid", type=int, default=d, help="number of output grid points")


def _add_params(p):
    for name in PARAM_NAMES:
        p.add_argument(f"--{name}", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualgeom", description=__doc__.splitlines()[0])
    _global_flags(p, False)
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, True)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("solve", cmd_solve, "solve a Jacobi or Riccati problem and dump a CSV grid")
    sp.add_argument("--kind", choices=("jacobi", "riccati"), default="jacobi")
    sp.add_argument("--G", required=True, help="e.g. '1', '-1', '-2/r^2', '0.5*r^-1'")
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--T", type=float, required=True)

    sp = add("dual", cmd_dual, "transform/reverse round trip")
    sp.add_argument("--G", required=True)
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--T", type=float, required=True)

    sp = add("compare", cmd_compare, "comparison certificate for two systems")
    sp.add_argument("--theorem", required=True, help="sturm, riccati, mixed_I or mixed_II")
    sp.add_argument("--G1", required=True)
    sp.add_argument("--kappa1", type=float, default=1.0)
    sp.add_argument("--G2", required=True)
    sp.add_argument("--kappa2", type=float, default=1.0)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--cert", help="write per-node margins to this CSV path")

    sp = add("bounds", cmd_bounds, "bound table CSV; with --model also verify")
    sp.add_argument("--hyp", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rmax", type=float, required=True)
    sp.add_argument("--shift", type=float, default=0.0)
    sp.add_argument("--model")
    sp.add_argument("--applies-to", dest="applies_to", default="hessian_eigenvalue",
                    choices=("hessian_eigenvalue", "mean_curvature", "laplacian"))
    _add_params(sp)

    sp = add("growth", cmd_growth, "growth flag table for profiles 'p,alpha[,beta[,c]]'")
    sp.add_argument("profiles", nargs="+")

    sp = add("forms", cmd_forms, "classify flat polynomial forms")
    sp.add_argument("forms", nargs="+")
    sp.add_argument("--n", type=int, default=None)

    sp = add("ckn", cmd_ckn, "CKN constant; with --model verify on an exponential bump")
    sp.add_argument("--hyp", required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--model")
    sp.add_argument("--r1", type=float, default=0.1)
    sp.add_argument("--r2", type=float, default=2.0)
    sp.add_argument("--lam", type=float, default=1.0)
    _add_params(sp)

    sp = add("hardy", cmd_hardy, "Hardy constant; with --model verify on a cut-off power")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--model")
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--R1", type=float, default=1.0)
    sp.add_argument("--R2", type=float, default=2.0)

    sp = add("costa", cmd_costa, "Costa-type constants, cases i to vii")
    sp.add_argument("--case", required=True)
    sp.add_argument("--hyp", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=float, default=0.0)
    _add_params(sp)

    sp = add("mono", cmd_mono, "monotonicity exponent and vanishing test")
    sp.add_argument("--row", required=True, help="i to vii")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--F", required=True, help="identity, ppower:p, bi_plus or bi_minus")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--E", help="energy asymptotics 'coef,alpha,beta'")
    _add_params(sp)

    sp = add("report", cmd_report, "run a scenario file end to end")
    sp.add_argument("scenario")
    sp.add_argument("--cert-dir", dest="cert_dir", help="write one record per failing scenario here")
    return p


def run(argv=None, out=None) -> int:
    """Run the CLI; returns the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    ns.tol_given = ns.tol is not None
    ns.tol = 1e-6 if ns.tol is None else ns.tol
    ns.grid = 50 if ns.grid is None else ns.grid
    ns.seed = ns.seed if ns.seed is not None or ns.cmd == "report" else 0
    try:
        return ns.fn(ns, out)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (HypothesisError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
