"""Bracket extension, axiom checks and the classification."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from cxalgebroid import io
from cxalgebroid.algebroid import (
    COMPLEX,
    REAL,
    ChartedAlgebroid,
    CheckConfig,
    anchor_apply,
    bracket_sections,
    check_anchor_morphism,
    classify_algebroid,
    jacobiator,
    random_polynomial,
    random_section,
    tangent_algebroid,
    zero_algebroid,
)
from cxalgebroid.errors import ShapeMismatch
from cxalgebroid.symexpr import parse

from conftest import CORPUS

SAMPLE = ["tangent_cx_r2", "foliation_cx_r3", "sl2_bundle", "poisson_xy_cx", "gamma_cot", "almost_cx", "az_mixed"]
seeds = st.integers(0, 10**6)


@pytest.fixture(scope="module")
def algs():
    return {name: io.load_algebroid(CORPUS / "algebroids" / f"{name}.json") for name in SAMPLE}


def _rand(A, rng):
    cx = A.scalars == COMPLEX
    return random_section(A, rng, CheckConfig(), complex_coeffs=cx), random_polynomial(A.chart, rng, 2, 2, cx)


@settings(max_examples=30)
@given(seeds, st.sampled_from(SAMPLE))
def test_leibniz_identity(algs, seed, name):
    A = algs[name]
    rng = random.Random(seed)
    (a, _), (b, f) = _rand(A, rng), _rand(A, rng)
    lhs = bracket_sections(A, a, b.scale(f))
    rhs = bracket_sections(A, a, b).scale(f) + b.scale(anchor_apply(A, a)(f))
    assert (lhs - rhs).is_zero()


@settings(max_examples=30)
@given(seeds, st.sampled_from(SAMPLE))
def test_bracket_and_jacobiator_antisymmetric(algs, seed, name):
    A = algs[name]
    rng = random.Random(seed)
    a, b, c = (_rand(A, rng)[0] for _ in range(3))
    assert (bracket_sections(A, a, b) + bracket_sections(A, b, a)).is_zero()
    assert (jacobiator(A, a, b, c) + jacobiator(A, b, a, c)).is_zero()


@settings(max_examples=30)
@given(seeds, st.sampled_from(["tangent_cx_r2", "sl2_bundle", "almost_cx", "poisson_xy_cx"]))
def test_jacobiator_tensorial_when_anchor_preserves_brackets(algs, seed, name):
    A = algs[name]
    assert check_anchor_morphism(A, CheckConfig(trials=5))[0]
    rng = random.Random(seed)
    a, b = _rand(A, rng)[0], _rand(A, rng)[0]
    c, f = _rand(A, rng)
    assert (jacobiator(A, a, b, c.scale(f)) - jacobiator(A, a, b, c).scale(f)).is_zero()


@pytest.mark.parametrize(
    "name, expected",
    [
        ("tangent_cx_r2", "CLA"),
        ("tangent_r2", "RLA"),
        ("sl2_bundle", "CLA"),
        ("gamma_cot", "skew-algebroid"),
        ("almost_cx", "almost CLA"),
        ("aff_bundle", "RLA"),
    ],
)
def test_classification_examples(name, expected):
    A = io.load_algebroid(CORPUS / "algebroids" / f"{name}.json")
    v = classify_algebroid(A)
    assert v.classification == expected
    assert v.leibniz_holds


def test_witnesses_carry_nonzero_defects():
    gamma = io.load_algebroid(CORPUS / "algebroids" / "gamma_cot.json")
    v = classify_algebroid(gamma)
    assert not v.anchor_morphism
    assert not v.anchor_witness.defect.is_zero()
    assert len(v.anchor_witness.sections) == 2
    almost = io.load_algebroid(CORPUS / "algebroids" / "almost_cx.json")
    w = classify_algebroid(almost).jacobi_witness
    assert not w.defect.is_zero() and len(w.sections) == 3
    assert "defect" in w.to_dict()


def test_rank_zero_is_vacuous():
    A = zero_algebroid(("x", "y"), 0, COMPLEX)
    assert classify_algebroid(A).classification == "CLA"


def test_tangent_and_zero_builders():
    assert classify_algebroid(tangent_algebroid(("x", "y", "z"))).classification == "RLA"
    assert classify_algebroid(zero_algebroid(("x",), 2, COMPLEX)).classification == "CLA"


def test_data_validation():
    chart = ("x",)
    one = parse("1", chart)
    with pytest.raises(ShapeMismatch):
        ChartedAlgebroid(chart, 2, REAL, ((one,),), {})
    with pytest.raises(ShapeMismatch):
        ChartedAlgebroid(chart, 1, REAL, ((one,),), {(0, 1): (one,)})
    with pytest.raises(ValueError):
        ChartedAlgebroid(chart, 1, REAL, ((parse("i", chart),),), {})
    with pytest.raises(ValueError):
        ChartedAlgebroid(chart, 1, "quaternionic", ((one,),), {})


def test_classification_reproducible_from_seed():
    A = io.load_algebroid(CORPUS / "algebroids" / "gamma_cot.json")
    d1 = classify_algebroid(A, CheckConfig(seed=7, trials=5)).to_dict()
    d2 = classify_algebroid(A, CheckConfig(seed=7, trials=5)).to_dict()
    assert d1 == d2
