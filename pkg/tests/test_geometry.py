"""Vector fields, one-forms and bivectors on a chart."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from cxalgebroid.algebroid import CheckConfig, classify_algebroid, random_polynomial
from cxalgebroid.constructions import cotangent_algebroid
from cxalgebroid.errors import ParseError
from cxalgebroid.geometry import (
    Bivector,
    OneForm,
    VectorField,
    bivector_bracket_oneforms,
    bivector_sharp,
    d_fn,
    generating_family,
    lie_bracket_vf,
    lie_derivative_oneform,
    parse_vector_field,
    schouten_trilinear,
    schouten_witness,
)
from cxalgebroid.symexpr import RationalExpr, parse

CHART = ("x", "y", "z")
seeds = st.integers(0, 10**6)


def rand_poly(rng, degree=2, complex_coeffs=True):
    return random_polynomial(CHART, rng, degree, 2, complex_coeffs)


def rand_vf(rng, degree=2):
    return VectorField(CHART, tuple(rand_poly(rng, degree) for _ in CHART))


def rand_form(rng):
    return OneForm(CHART, tuple(rand_poly(rng) for _ in CHART))


def curl_oracle(pi: Bivector) -> RationalExpr:
    """v . curl v for v = (pi^23, pi^31, pi^12); zero iff pi is Poisson on R^3."""
    v = [pi.component(1, 2), pi.component(2, 0), pi.component(0, 1)]
    x, y, z = CHART
    curl = [
        v[2].diff(y) - v[1].diff(z),
        v[0].diff(z) - v[2].diff(x),
        v[1].diff(x) - v[0].diff(y),
    ]
    return v[0] * curl[0] + v[1] * curl[1] + v[2] * curl[2]


@settings(max_examples=30)
@given(seeds)
def test_vf_bracket_jacobi(seed):
    rng = random.Random(seed)
    X, Y, Z = rand_vf(rng), rand_vf(rng), rand_vf(rng)
    jac = lie_bracket_vf(X, lie_bracket_vf(Y, Z)) + lie_bracket_vf(Y, lie_bracket_vf(Z, X)) + lie_bracket_vf(Z, lie_bracket_vf(X, Y))
    assert jac.is_zero()


@settings(max_examples=30)
@given(seeds)
def test_vf_bracket_antisymmetric_and_derivation(seed):
    rng = random.Random(seed)
    X, Y, f = rand_vf(rng), rand_vf(rng), rand_poly(rng)
    assert (lie_bracket_vf(X, Y) + lie_bracket_vf(Y, X)).is_zero()
    # [X, Y] f = X(Y f) - Y(X f)
    assert lie_bracket_vf(X, Y)(f) == X(Y(f)) - Y(X(f))


@settings(max_examples=30)
@given(seeds)
def test_lie_derivative_leibniz(seed):
    rng = random.Random(seed)
    X, alpha, f = rand_vf(rng), rand_form(rng), rand_poly(rng)
    lhs = lie_derivative_oneform(X, alpha.scale(f))
    rhs = alpha.scale(X(f)) + lie_derivative_oneform(X, alpha).scale(f)
    assert (lhs - rhs).is_zero()


@settings(max_examples=30)
@given(seeds)
def test_lie_derivative_commutes_with_d(seed):
    rng = random.Random(seed)
    X, f = rand_vf(rng), rand_poly(rng)
    assert (lie_derivative_oneform(X, d_fn(f, CHART)) - d_fn(X(f), CHART)).is_zero()


def test_sharp_convention():
    pi = Bivector.from_strings(CHART, {"1,2": "z"})
    dx, dy = OneForm.coordinate(CHART, "x"), OneForm.coordinate(CHART, "y")
    assert bivector_sharp(pi, dx) == VectorField(CHART, (0, parse("z", CHART), 0))
    assert bivector_sharp(pi, dy) == VectorField(CHART, (parse("-z", CHART), 0, 0))
    assert pi(dx, dy) == parse("z", CHART)


def test_bracket_of_exact_forms():
    pi = Bivector.from_strings(CHART, {"1,2": "z", "2,3": "x*y"})
    dx, dy = OneForm.coordinate(CHART, "x"), OneForm.coordinate(CHART, "y")
    assert bivector_bracket_oneforms(pi, dx, dy) == d_fn(parse("z", CHART), CHART)


def test_bivector_storage():
    pi = Bivector.from_strings(CHART, {"2,1": "x"})
    assert pi.component(0, 1) == parse("-x", CHART)
    assert pi.component(1, 0) == parse("x", CHART)
    with pytest.raises(ParseError):
        Bivector.from_strings(CHART, {"1,1": "x"})
    with pytest.raises(ParseError):
        Bivector.from_strings(CHART, {"a,b": "x"})


@settings(max_examples=40)
@given(seeds)
def test_trilinear_form_is_alternating(seed):
    rng = random.Random(seed)
    pi = Bivector(CHART, {(0, 1): rand_poly(rng, 1), (1, 2): rand_poly(rng, 1), (0, 2): rand_poly(rng, 1)})
    f, g, h = rand_poly(rng, 1), rand_poly(rng, 1), rand_poly(rng, 1)
    t = schouten_trilinear(pi, pi, f, g, h)
    assert (t + schouten_trilinear(pi, pi, g, f, h)).is_zero()
    assert schouten_trilinear(pi, pi, f, f, h).is_zero()


@settings(max_examples=60)
@given(seeds)
def test_schouten_matches_curl_oracle_in_3d(seed):
    rng = random.Random(seed)
    if seed % 2:
        v = [rand_poly(rng, 1) for _ in CHART]
    else:
        # v = f grad g is always Poisson
        f, g = rand_poly(rng, 1), rand_poly(rng, 2)
        v = [f * g.diff(c) for c in CHART]
    pi = Bivector(CHART, {(1, 2): v[0], (0, 2): -v[1], (0, 1): v[2]})
    vanishes = schouten_witness(pi, pi, generating_family(CHART, products=False)) is None
    assert vanishes == curl_oracle(pi).is_zero()


@settings(max_examples=40)
@given(seeds)
def test_products_add_nothing_to_the_generating_family(seed):
    rng = random.Random(seed)
    pi = Bivector(CHART, {(0, 1): rand_poly(rng, 1), (1, 2): rand_poly(rng, 1)})
    sigma = Bivector(CHART, {(0, 2): rand_poly(rng, 1)})
    short = schouten_witness(pi, sigma, generating_family(CHART, products=False)) is None
    full = schouten_witness(pi, sigma, generating_family(CHART, products=True)) is None
    assert short == full


@pytest.mark.parametrize(
    "comps, poisson",
    [
        ({"1,2": "z", "2,3": "x", "1,3": "-y"}, True),
        ({"1,2": "x", "2,3": "i*y"}, False),
        ({"1,2": "1", "1,3": "i*z"}, True),
        ({"1,2": "y", "2,3": "i"}, False),
    ],
)
def test_schouten_agrees_with_cotangent_classification(comps, poisson):
    pi = Bivector.from_strings(CHART, comps)
    assert (schouten_witness(pi, pi) is None) == poisson
    verdict = classify_algebroid(cotangent_algebroid(pi), CheckConfig(trials=10))
    assert (verdict.classification == "CLA") == poisson


def test_parse_vector_field():
    Z = parse_vector_field("dx + i*x*dy")
    assert Z.chart == ("x", "y")
    assert Z.components[1] == parse("i*x", ("x", "y"))
    W = parse_vector_field("y*dx", ("x", "y", "z"))
    assert W.components == (parse("y", ("x", "y", "z")), RationalExpr.const(0, ("x", "y", "z")), RationalExpr.const(0, ("x", "y", "z")))
    with pytest.raises(ParseError):
        parse_vector_field("dx +", ("x",))
