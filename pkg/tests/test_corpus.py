"""Golden tests: every corpus file against its annotated expectation."""
import pytest

from cxalgebroid import io
from cxalgebroid.algebroid import classify_algebroid
from cxalgebroid.cli import parse_point
from cxalgebroid.constructions import pullback_at
from cxalgebroid.errors import NonConstantRank
from cxalgebroid.invariants import extract_real_algebroid, pointwise_invariants_at, scan_grid

from conftest import (
    CORPUS,
    algebroid_files,
    bivector_files,
    classification,
    corpus_pairs,
    load_expected,
    map_files,
    pair_verdict,
    poisson_verdict,
)


def test_corpus_size():
    assert len(algebroid_files()) >= 12
    assert len(bivector_files()) >= 10
    assert len(corpus_pairs()) >= 5


@pytest.mark.parametrize("path", algebroid_files(), ids=lambda p: p.stem)
def test_algebroid_golden(path):
    data, exp = load_expected(path)
    A = io.algebroid_from_json(data, str(path))
    assert classification(path) == exp["classification"]
    for label, want in exp.get("points", {}).items():
        rep = pointwise_invariants_at(A, parse_point(label, A.chart))
        got = {"real_rank": rep.real_rank, "type": rep.type, "class": rep.class_, "order": rep.order}
        assert got == want, label
    if "constant_real_rank" in exp:
        scan = scan_grid(A, exp.get("grid", ""))
        assert scan.constant_real_rank_on_sample == exp["constant_real_rank"]
        if "cr" in exp:
            assert scan.cr_on_sample == exp["cr"]
    if "extract" in exp:
        try:
            X = extract_real_algebroid(A, exp.get("grid", ""))
            got = classify_algebroid(X.algebroid).classification
        except NonConstantRank:
            got = "non-constant"
        assert got == exp["extract"]


@pytest.mark.parametrize("path", bivector_files(), ids=lambda p: p.stem)
def test_bivector_golden(path):
    _, exp = load_expected(path)
    assert poisson_verdict(path) == exp["complex_poisson"]


@pytest.mark.parametrize("pair", corpus_pairs(), ids=lambda p: p["name"])
def test_pair_golden(pair):
    detail, sum_cls = pair_verdict(pair["name"])
    assert detail.startswith(pair["expected"]["verdict_detail"])
    assert sum_cls == pair["expected"]["sum_classification"]


@pytest.mark.parametrize("path", map_files(), ids=lambda p: p.stem)
def test_map_golden(path):
    data, exp = load_expected(path)
    phi = io.map_from_json(data, str(path))
    A = io.load_algebroid(CORPUS / exp["algebroid"])
    rep = pullback_at(A, phi, parse_point(exp["point"], phi.source_chart))
    assert rep.fiber.dim == exp["fiber_dim"]
    assert rep.transversal == exp["transversal"]
    if "completely_transversal" in exp:
        assert rep.completely_transversal == exp["completely_transversal"]
    if "class" in exp:
        assert rep.class_ == exp["class"]
