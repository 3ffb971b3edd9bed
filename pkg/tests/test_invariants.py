"""Pointwise invariants, checked against independently built realified matrices."""
from fractions import Fraction

import pytest
import sympy

from cxalgebroid import io
from cxalgebroid.constructions import vector_field_algebroid
from cxalgebroid.errors import NonConstantRank, ParseError
from cxalgebroid.geometry import parse_vector_field
from cxalgebroid.invariants import (
    amin_at,
    anchor_at,
    extract_real_algebroid,
    isotropy_at,
    parse_grid,
    pointwise_invariants_at,
    real_elements_at,
    scan_grid,
    to_complex,
    to_real,
)
from cxalgebroid.symexpr import GaussianRational, Point, evaluate

from conftest import CORPUS, algebroid_files

ORACLE_POINTS = [(0, 0, 0, 0), (1, -1, 2, 0), (-2, 1, 0, 1), (1, 1, 1, 1)]


def load(name):
    return io.load_algebroid(CORPUS / "algebroids" / f"{name}.json")


def oracle_realified(A, coords):
    """(rho1, rho2) as sympy matrices, columns e_1..e_r, j e_1..j e_r."""
    p = Point(coords[: A.dim], A.chart)
    rows = [[evaluate(c, p) for c in row] for row in A.anchor]
    Q = lambda q: sympy.Rational(q.numerator, q.denominator)  # noqa: E731
    re = [[Q(z.re) for z in row] for row in rows]
    im = [[Q(z.im) for z in row] for row in rows]
    # rho(j e_k) = i rho(e_k): real part -Im, imaginary part Re
    rho1 = sympy.Matrix([[re[k][t] for k in range(A.rank)] + [-im[k][t] for k in range(A.rank)] for t in range(A.dim)])
    rho2 = sympy.Matrix([[im[k][t] for k in range(A.rank)] + [re[k][t] for k in range(A.rank)] for t in range(A.dim)])
    return rho1, rho2


def span_rank(vectors, width):
    return sympy.Matrix(vectors).rank() if vectors else 0


@pytest.mark.parametrize("path", algebroid_files(), ids=lambda p: p.stem)
def test_pointwise_dimensions_match_sympy_oracle(path):
    A = io.load_algebroid(path)
    for coords in ORACLE_POINTS:
        rho1, rho2 = oracle_realified(A, coords)
        r, n = A.rank, A.dim
        if r == 0:
            continue
        K = rho2.nullspace()
        delta = span_rank([list(rho1 * k) for k in K], n) if K else 0
        D = sympy.Matrix.hstack(rho1, rho2).rank()
        rep = pointwise_invariants_at(A, coords[:n])
        assert rep.real_rank == len(K)
        assert rep.dim_delta == delta
        assert rep.dim_D == D
        assert rep.identities_hold
        # A^real spans the same space as the oracle kernel
        ours = real_elements_at(A, coords[:n])
        both = [list(k) for k in K] + [[sympy.Rational(str(c)) for c in v] for v in ours.vectors]
        assert span_rank(both, 2 * r) == len(K)


@pytest.mark.parametrize("name", ["sl2_bundle", "poisson_xy_cx", "action_x_cx", "az_prop", "poisson_mixed_cx", "involutive_r4"])
def test_isotropy_real_form_is_intersection(name):
    """g_R equals A^real cap j(A^real), computed here by dimension count in sympy."""
    A = load(name)
    grid = parse_grid("", A.chart)[:20]
    for p in grid:
        iso = isotropy_at(A, p)
        assert iso.real_form_matches
        U = [[sympy.Rational(str(c)) for c in v] for v in real_elements_at(A, p).vectors]
        r = A.rank
        jU = [[-v[r + k] for k in range(r)] + [v[k] for k in range(r)] for v in U]
        dim_u = span_rank(U, 2 * r)
        inter = 2 * dim_u - span_rank(U + jU, 2 * r) if U else 0
        assert inter == 2 * iso.basis.dim


def test_real_elements_examples():
    assert real_elements_at(load("sl2_bundle"), (1, 2)).dim == 6
    assert real_elements_at(load("az_indep"), (0, 0)).dim == 0
    E = real_elements_at(load("involutive_r4"), (1, 2, 3, 4))
    assert E.dim == 1
    # basis {e2}: nonzero only in the real e2 slot
    (v,) = E.vectors
    assert [bool(c) for c in v] == [False, True, False, False]


@pytest.mark.parametrize(
    "name, point, expected",
    [
        ("tangent_cx_r2", (0, 0), (2, 0, 2, 0)),
        ("cr_r3", (1, 2, 3), (0, 1, 0, 1)),
        ("sl2_bundle", (0, 0), (6, 0, 0, 2)),
        ("involutive_r4", (0, 0, 0, 0), (1, 1, 1, 1)),
    ],
)
def test_pointwise_examples(name, point, expected):
    assert pointwise_invariants_at(load(name), point).stratum_key() == expected


def test_isotropy_examples():
    assert isotropy_at(load("tangent_cx_r2"), (0, 0)).basis.dim == 0
    full = isotropy_at(load("sl2_bundle"), (0, 0))
    assert full.basis.dim == 3 and full.closed
    assert full.structure_constants[(0, 1)] == [GaussianRational(0), GaussianRational(2), GaussianRational(0)]
    A = load("action_x_cx")
    assert isotropy_at(A, (0,)).basis.dim == 1
    assert isotropy_at(A, (1,)).basis.dim == 0


def test_amin_examples():
    assert amin_at(load("tangent_cx_r2"), (1, 1)).dim == 2
    assert amin_at(load("cr_r3"), (0, 0, 0)).dim == 0
    assert amin_at(load("sl2_bundle"), (0, 0)).dim == 3
    assert amin_at(load("involutive_r4"), (0, 0, 0, 0)).dim == 1


def test_real_complex_conversions():
    v = [GaussianRational(1, 2), GaussianRational(Fraction(1, 3), -1)]
    assert to_complex(to_real(v)) == v


def test_anchor_at_evaluates():
    rows = anchor_at(load("lewy_r3"), (1, 2, 0))
    assert rows == [[GaussianRational(1), GaussianRational(0, 1), GaussianRational(4, -2)]]


def test_parse_grid():
    pts = parse_grid("x=-1..1:1", ("x", "y"))
    assert len(pts) == 15  # y defaults to -2..2:1
    assert len(parse_grid("x=0..1:1/2,y=0..0:1", ("x", "y"))) == 3
    assert len(parse_grid("x=0..1", ("x",))) == 2  # step defaults to 1
    for bad in ["x=1..0:1", "x=0..1:0", "w=0..1:1", "x=0..1:1/0", "x=a..1:1", "x:1"]:
        with pytest.raises(ParseError):
            parse_grid(bad, ("x", "y"))


def test_scan_mixed_field_strata():
    rep = scan_grid(load("az_mixed"), "x=-2..2:1,y=-2..2:1")
    assert not rep.constant_real_rank_on_sample
    ones = [rec.point for rec in rep.records if rec.real_rank == 1]
    assert len(ones) == 5 and all(p.coords[0] == 0 for p in ones)
    assert rep.identities_hold


def test_scan_proportional_field_strata():
    rep = scan_grid(load("az_prop"), "x=-2..2:1")
    by_x = {rec.point.coords[0]: rec.real_rank for rec in rep.records}
    assert by_x == {-2: 1, -1: 1, 0: 2, 1: 1, 2: 1}


def test_scan_single_stratum_and_poles():
    assert len(scan_grid(load("tangent_cx_r2"), "").strata) == 1
    A = vector_field_algebroid(parse_vector_field("dx/x", ("x",)))
    rep = scan_grid(A, "x=-1..1:1")
    assert [p.coords for p in rep.poles] == [(0,)]
    assert len(rep.records) == 2


def test_extract_tangent_is_identity():
    X = extract_real_algebroid(load("tangent_cx_r2"), "")
    assert X.algebroid.scalars == "real" and X.algebroid.rank == 2
    assert X.algebroid.is_real_data()


def test_extract_involutive_is_dp():
    X = extract_real_algebroid(load("involutive_r4"), "x=-1..1:1,y=-1..1:1,p=0..0:1,q=0..0:1")
    assert X.algebroid.rank == 1
    assert [str(c) for c in X.algebroid.anchor[0]] == ["0", "0", "1", "0"]


def test_extract_rejects_rank_jump():
    with pytest.raises(NonConstantRank) as exc:
        extract_real_algebroid(load("az_mixed"), "x=-2..2:1,y=-2..2:1")
    assert exc.value.points and all(p.coords[0] == 0 for p in exc.value.points)


def test_extract_anchor_image_is_delta():
    A = vector_field_algebroid(parse_vector_field("(1 + i*x)*dx", ("x",)))
    X = extract_real_algebroid(A, "x=-2..2:1")
    for p in parse_grid("x=-2..2:1", A.chart):
        image = [[evaluate(c, p) for c in row] for row in X.algebroid.anchor]
        assert any(any(z for z in row) for row in image) == (pointwise_invariants_at(A, p).dim_delta == 1)
