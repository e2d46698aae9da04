from fractions import Fraction

import pytest

from dualgeom.flat_forms import (
    FormError,
    FormClass,
    PolyForm,
    box_integral,
    bump,
    classify,
    codiff,
    condition_w_report,
    d,
    format_form,
    hodge_star,
    inner,
    l2_pairing,
    laplacian,
    parse_form,
    parse_graded,
    random_form,
    wedge,
)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize(
    "template, expected",
    [
        ("x1 dx1", FormClass(True, False, True)),
        ("x{n} dx1", FormClass(False, True, True)),
        ("(x1 + x{n}) dx1", FormClass(False, False, True)),
        ("x1*x{n} dx1 + x{n} dx{n}", FormClass(False, False, True)),
        ("dx1", FormClass(True, True, True)),
    ],
    ids=["radial_gradient", "shear", "sum", "mixed_product", "constant"],
)
def test_worked_examples(n, template, expected):
    assert classify(parse_form(template.format(n=n), n)) == expected


def test_codifferential_sign():
    assert codiff(parse_form("x1 dx1", 3)) == parse_form("-1", 3)


def test_non_harmonic_example():
    w = parse_form("x1**2 dx2", 3)
    assert not classify(w).harmonic
    assert laplacian(w) == parse_form("2 dx2", 3)


def _random_forms(rng, count):
    for _ in range(count):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(0, n + 1))
        yield random_form(rng, n, k, degree=3, terms=4)


def test_d_squared_vanishes(rng):
    for w in _random_forms(rng, 100):
        if w.k + 2 <= w.n:
            assert d(d(w)).is_zero()


def test_codiff_squared_vanishes(rng):
    for w in _random_forms(rng, 100):
        if w.k >= 2:
            assert codiff(codiff(w)).is_zero()


def test_hodge_star_twice(rng):
    for w in _random_forms(rng, 50):
        sign = (-1) ** (w.k * (w.n - w.k))
        assert hodge_star(hodge_star(w)) == w.scale(sign)


def test_hodge_star_basis():
    assert hodge_star(parse_form("dx1", 3)) == parse_form("dx2^dx3", 3)
    assert hodge_star(parse_form("dx1^dx2", 3)) == parse_form("dx3", 3)


def test_laplacian_commutes_with_d(rng):
    for w in _random_forms(rng, 30):
        if w.k < w.n:
            assert laplacian(d(w)) == d(laplacian(w))


def test_adjointness_against_bump(rng):
    checked = 0
    for _ in range(40):
        n = int(rng.integers(1, 4))
        k = int(rng.integers(0, n))
        a = random_form(rng, n, k)
        b = random_form(rng, n, k + 1).times(bump(n))
        lhs = box_integral(inner(d(a), b))
        rhs = box_integral(inner(a, codiff(b)))
        assert lhs == rhs
        checked += 1
    assert checked == 40


def test_weighted_pairing_is_symmetric(rng):
    a = random_form(rng, 3, 1)
    b = random_form(rng, 3, 1)
    assert l2_pairing(a, b, weighted=True) == l2_pairing(b, a, weighted=True)


@pytest.mark.parametrize(
    "poly, weighted, expected",
    [
        ({(0, 0): 1}, False, Fraction(4)),
        ({(2, 0): 1}, False, Fraction(4, 3)),
        ({(1, 0): 1}, False, Fraction(0)),
        ({(0,): 1}, True, Fraction(16, 15)),
    ],
    ids=["unit", "square", "odd", "bump_mass"],
)
def test_box_integral(poly, weighted, expected):
    assert box_integral({k: Fraction(v) for k, v in poly.items()}, weighted) == expected


def test_wedge_anticommutes():
    a = parse_form("x1 dx1", 3)
    b = parse_form("dx2", 3)
    assert wedge(a, b) == -wedge(b, a)
    assert wedge(b, b).is_zero()


def test_condition_w_equality_point():
    rep = condition_w_report(parse_form("x4 dx1", 4), [(0, 0, 0, 1)])
    assert rep.holds_at_all_samples
    assert rep.lhs == 2 and rep.rhs == 2


def test_condition_w_closed_form_trivial():
    rep = condition_w_report(parse_form("x1 dx1", 3), [(1, 2, 3)])
    assert rep.holds_at_all_samples


@pytest.mark.parametrize("bad", [[], [(1, 2)]], ids=["no_points", "wrong_dimension"])
def test_condition_w_rejects_bad_samples(bad):
    with pytest.raises(FormError):
        condition_w_report(parse_form("x1 dx1", 3), bad)


@pytest.mark.parametrize(
    "text",
    ["x1*x3 dx1^dx3 - x2 dx2^dx3", "(x1 + 2*x2**2) dx2", "3/2 dx1^dx2^dx3", "x1*x2", "0"],
)
def test_format_parse_round_trip(text):
    w = parse_form(text, 3)
    assert parse_form(format_form(w), 3, k=w.k) == w


def test_random_round_trip(rng):
    for w in _random_forms(rng, 50):
        assert parse_form(format_form(w), w.n, k=w.k) == w


def test_wedge_order_sign():
    assert parse_form("dx2^dx1", 2) == parse_form("-dx1^dx2", 2)
    assert parse_form("dx1^dx1", 2, k=2).is_zero()


def test_graded_parse():
    g = parse_graded("x1*x3 dx1^dx3 + 2 dx2")
    assert sorted(g) == [1, 2]
    assert g[1].n == 3


@pytest.mark.parametrize(
    "text, kwargs",
    [
        ("x1 dx1 + dx1^dx2", {}),
        ("sin(x1) dx1", {}),
        ("x9 dx1", {}),
        ("x1**7 dx1", {}),
        ("x3 dx1", {"n": 2}),
        ("x1 dx1", {"k": 2}),
        ("x1 ** dx1", {}),
    ],
    ids=["mixed_degree", "non_polynomial", "dimension_cap", "degree_cap",
         "index_above_n", "wrong_k", "syntax"],
)
def test_parse_errors(text, kwargs):
    with pytest.raises(FormError):
        parse_form(text, **kwargs)


def test_invalid_construction():
    with pytest.raises(FormError):
        PolyForm(2, 3, {})
    with pytest.raises(FormError):
        PolyForm(3, 2, {(1, 0): {(0, 0, 0): 1}})
