import json
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cxalgebroid import io
from cxalgebroid.algebroid import CheckConfig, classify_algebroid
from cxalgebroid.cli import load_real_pair_member
from cxalgebroid.constructions import check_complex_poisson, check_matched_pair, complex_sum

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

# criterion number -> (label, passed); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def algebroid_files():
    return sorted((CORPUS / "algebroids").glob("*.json"))


def bivector_files():
    return sorted((CORPUS / "bivectors").glob("*.json"))


def map_files():
    return sorted((CORPUS / "maps").glob("*.json"))


def corpus_pairs():
    return json.loads((CORPUS / "pairs.json").read_text())["pairs"]


def load_expected(path):
    data = io.load_json(path)
    return data, data.get("expected", {})


# verdicts are shared by the golden and acceptance tests, keyed by seed


@lru_cache(maxsize=None)
def classification(path, seed: int = 0) -> str:
    return classify_algebroid(io.load_algebroid(path), CheckConfig(seed=seed)).classification


@lru_cache(maxsize=None)
def pair_verdict(name: str, seed: int = 0) -> tuple[str, str]:
    """(matched-pair detail, classification of the complex sum)."""
    (pair,) = [p for p in corpus_pairs() if p["name"] == name]
    A1 = load_real_pair_member(str(CORPUS / pair["first"]))
    A2 = load_real_pair_member(str(CORPUS / pair["second"]))
    cfg = CheckConfig(seed=seed)
    return check_matched_pair(A1, A2, cfg).detail, classify_algebroid(complex_sum(A1, A2), cfg).classification


@lru_cache(maxsize=None)
def poisson_report(path, seed: int = 0):
    # raises InternalInconsistency if the two routes disagree
    return check_complex_poisson(io.load_bivector(path), CheckConfig(seed=seed))


def poisson_verdict(path, seed: int = 0) -> bool:
    return poisson_report(path, seed).is_poisson


@pytest.fixture(scope="session")
def corpus_algebroids():
    return {p.stem: io.load_algebroid(p) for p in algebroid_files()}


@pytest.fixture(scope="session")
def corpus_bivectors():
    return {p.stem: io.load_bivector(p) for p in bivector_files()}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        label, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {label}")
