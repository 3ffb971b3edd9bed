"""Pointwise invariants of complex anchored bundles.

All computations happen in the realified fiber with basis
(e_1, ..., e_r, j e_1, ..., j e_r) and tangent basis (d_1, ..., d_n).
Writing rho(e_k) = a_k + i b_k, the real and imaginary parts of the anchor
on the realified fiber are

    rho_1 = [a_1 .. a_r | -b_1 .. -b_r],   rho_2 = [b_1 .. b_r | a_1 .. a_r].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import linalg
from .algebroid import (
    COMPLEX,
    REAL,
    CheckConfig,
    ChartedAlgebroid,
    DEFAULT_CONFIG,
    Section,
    bracket_sections,
    classify_algebroid,
)
from .errors import InternalInconsistency, NonConstantRank, ParseError, PoleAtPoint
from .symexpr import GaussianRational, Point, RationalExpr, evaluate, poly_lcm

F0, F1 = Fraction(0), Fraction(1)
G0, G1 = GaussianRational(0, 0), GaussianRational(1, 0)


@dataclass(frozen=True)
class SubspaceBasis:
    ambient_dim: int
    vectors: tuple[tuple, ...]
    field: str  # "real" | "complex"

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(v) for v in self.vectors))
        if any(len(v) != self.ambient_dim for v in self.vectors):
            raise ValueError("basis vector length differs from ambient dimension")
        if self.vectors and linalg.rank([list(v) for v in self.vectors]) != len(self.vectors):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "field": self.field,
            "dim": self.dim,
            "vectors": [[str(c) for c in v] for v in self.vectors],
        }


def _basis(vectors, ambient: int, fld: str) -> SubspaceBasis:
    return SubspaceBasis(ambient, tuple(tuple(v) for v in linalg.independent_subset(vectors)), fld)


# ---------------------------------------------------------------------------
# anchor matrices at a point


def anchor_at(A: ChartedAlgebroid, m) -> list[list[GaussianRational]]:
    """Rows rho(e_i)|_m; raises PoleAtPoint."""
    m = _as_point(A, m)
    return [[evaluate(c, m) for c in row] for row in A.anchor]


def _as_point(A: ChartedAlgebroid, m) -> Point:
    if isinstance(m, Point):
        if m.chart is None:
            m = Point(m.coords, A.chart)
        return m
    return Point(tuple(m), A.chart)


def realified(rows: Sequence[Sequence[GaussianRational]], n: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """(rho_1, rho_2) as n x 2r real matrices."""
    r = len(rows)
    rho1 = [[F0] * (2 * r) for _ in range(n)]
    rho2 = [[F0] * (2 * r) for _ in range(n)]
    for k, row in enumerate(rows):
        for t, z in enumerate(row):
            a, b = z.re, z.im
            rho1[t][k] = a
            rho1[t][r + k] = -b
            rho2[t][k] = b
            rho2[t][r + k] = a
    return rho1, rho2


def j_map(v: Sequence[Fraction]) -> list[Fraction]:
    """Multiplication by i on the realified fiber: (x, y) -> (-y, x)."""
    r = len(v) // 2
    return [-c for c in v[r:]] + list(v[:r])


def to_complex(v: Sequence[Fraction]) -> list[GaussianRational]:
    r = len(v) // 2
    return [GaussianRational(v[k], v[r + k]) for k in range(r)]


def to_real(v: Sequence[GaussianRational]) -> list[Fraction]:
    return [z.re for z in v] + [z.im for z in v]


@dataclass(frozen=True)
class AnchorInvariants:
    """Invariants of a complex anchor matrix at one point (no bracket needed)."""

    n: int
    r: int
    real_elements: SubspaceBasis
    delta: SubspaceBasis
    D: SubspaceBasis
    isotropy: SubspaceBasis
    amin: SubspaceBasis

    @property
    def real_rank(self) -> int:
        return self.real_elements.dim

    @property
    def type(self) -> int:
        return (self.D.dim - self.delta.dim) // 2

    @property
    def class_(self) -> int:
        return self.delta.dim

    @property
    def order(self) -> int:
        return self.n - self.D.dim

    def identity_checks(self) -> list[tuple[str, bool]]:
        n, r = self.n, self.r
        rr, dD, dd = self.real_rank, self.D.dim, self.delta.dim
        iso, amin = self.isotropy.dim, self.amin.dim
        delta_in_D = linalg.span_contains([list(v) for v in self.D.vectors], [list(v) for v in self.delta.vectors])
        return [
            ("real_rank + dim D = 2r", rr + dD == 2 * r),
            ("dim D - dim Delta is even", (dD - dd) % 2 == 0),
            ("2 type + class + real_rank = 2r", 2 * self.type + self.class_ + rr == 2 * r),
            ("order = real_rank + n - 2r", self.order == rr + n - 2 * r),
            ("type = r - dim_C A_min", self.type == r - amin),
            ("class = dim_C A_min - dim_C isotropy", self.class_ == amin - iso),
            ("class = real_rank - dim_R isotropy", self.class_ == rr - 2 * iso),
            ("dim_C A_min = real_rank - dim_C isotropy", amin == rr - iso),
            ("Delta within D", delta_in_D),
        ]


def anchor_invariants(rows: Sequence[Sequence[GaussianRational]], n: int) -> AnchorInvariants:
    r = len(rows)
    rho1, rho2 = realified(rows, n)
    # A^real = ker rho_2
    kern = linalg.nullspace(rho2, 2 * r, F0, F1) if r else []
    real_elements = SubspaceBasis(2 * r, tuple(tuple(v) for v in kern), REAL)
    # Delta = rho_1(ker rho_2)
    delta = _basis([linalg.matvec(rho1, v, F0) for v in kern], n, REAL)
    # D = im rho_1 + im rho_2 (column spaces)
    cols = linalg.transpose(rho1, 2 * r) + linalg.transpose(rho2, 2 * r) if r else []
    D = _basis(cols, n, REAL)
    # isotropy = complex kernel of the n x r matrix whose columns are rho(e_k)
    cmat = [[rows[k][t] for k in range(r)] for t in range(n)]
    iso = linalg.nullspace(cmat, r, G0, G1) if r else []
    isotropy = SubspaceBasis(r, tuple(tuple(v) for v in iso), COMPLEX)
    # A_min = complex span of A^real (j A^real adds nothing over C)
    amin = _basis([to_complex(v) for v in kern], r, COMPLEX)
    return AnchorInvariants(n, r, real_elements, delta, D, isotropy, amin)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class PointwiseReport:
    point: Point
    real_rank: int
    dim_delta: int
    dim_D: int
    dim_isotropy_complex: int
    dim_amin_complex: int
    type: int
    class_: int
    order: int
    identity_checks: tuple[tuple[str, bool], ...]
    bases: AnchorInvariants | None = field(default=None, compare=False)

    @property
    def identities_hold(self) -> bool:
        return all(ok for _, ok in self.identity_checks)

    def stratum_key(self) -> tuple[int, int, int, int]:
        return (self.real_rank, self.type, self.class_, self.order)

    def to_dict(self, with_bases: bool = False) -> dict:
        d = {
            "point": self.point.as_dict(),
            "real_rank": self.real_rank,
            "dim_delta": self.dim_delta,
            "dim_D": self.dim_D,
            "dim_isotropy_complex": self.dim_isotropy_complex,
            "dim_amin_complex": self.dim_amin_complex,
            "type": self.type,
            "class": self.class_,
            "order": self.order,
            "identity_checks": {name: ok for name, ok in self.identity_checks},
        }
        if with_bases and self.bases is not None:
            b = self.bases
            d["bases"] = {
                "real_elements": b.real_elements.to_dict(),
                "delta": b.delta.to_dict(),
                "D": b.D.to_dict(),
                "isotropy": b.isotropy.to_dict(),
                "amin": b.amin.to_dict(),
            }
        return d


def report_from_invariants(point: Point, inv: AnchorInvariants) -> PointwiseReport:
    return PointwiseReport(
        point=point,
        real_rank=inv.real_rank,
        dim_delta=inv.delta.dim,
        dim_D=inv.D.dim,
        dim_isotropy_complex=inv.isotropy.dim,
        dim_amin_complex=inv.amin.dim,
        type=inv.type,
        class_=inv.class_,
        order=inv.order,
        identity_checks=tuple(inv.identity_checks()),
        bases=inv,
    )


def real_elements_at(A: ChartedAlgebroid, m) -> SubspaceBasis:
    return anchor_invariants(anchor_at(A, m), A.dim).real_elements


def pointwise_invariants_at(A: ChartedAlgebroid, m) -> PointwiseReport:
    m = _as_point(A, m)
    inv = anchor_invariants(anchor_at(A, m), A.dim)
    return report_from_invariants(m, inv)


def amin_at(A: ChartedAlgebroid, m) -> SubspaceBasis:
    return anchor_invariants(anchor_at(A, m), A.dim).amin


@dataclass(frozen=True)
class IsotropyReport:
    basis: SubspaceBasis
    real_form_matches: bool  # g(A)_R == A^real cap j(A^real)
    closed: bool  # bracket of kernel elements stays in the kernel
    structure_constants: dict | None  # (p, q) -> coefficients in ``basis``

    def to_dict(self) -> dict:
        return {
            "basis": self.basis.to_dict(),
            "real_form_matches": self.real_form_matches,
            "closed": self.closed,
            "structure_constants": None
            if self.structure_constants is None
            else {f"{p + 1},{q + 1}": [str(c) for c in cs] for (p, q), cs in self.structure_constants.items()},
        }


def real_isotropy_intersection(real_elements: Sequence[Sequence[Fraction]], r: int) -> list[list[Fraction]]:
    """Basis of U cap j(U) for U the given real subspace of R^{2r}.

    Solves sum s_k u_k = sum t_k j(u_k) for (s, t).
    """
    U = [list(v) for v in real_elements]
    if not U:
        return []
    jU = [j_map(v) for v in U]
    k = len(U)
    # columns: u_1..u_k, -j u_1..-j u_k
    M = [[U[c][row] for c in range(k)] + [-jU[c][row] for c in range(k)] for row in range(2 * r)]
    sols = linalg.nullspace(M, 2 * k, F0, F1)
    vecs = []
    for s in sols:
        v = [F0] * (2 * r)
        for c in range(k):
            if s[c]:
                v = [a + s[c] * b for a, b in zip(v, U[c])]
        vecs.append(v)
    return linalg.independent_subset(vecs)


def isotropy_at(A: ChartedAlgebroid, m) -> IsotropyReport:
    """Complex kernel of the anchor at m with its induced bracket.

    Constant-coefficient extensions of kernel vectors have no derivative
    terms in the Leibniz formula, so [u, v]_m = sum u_i v_j c_ij(m).
    """
    m = _as_point(A, m)
    inv = anchor_invariants(anchor_at(A, m), A.dim)
    basis = inv.isotropy
    r = A.rank
    # real form check: realify g and g*i, compare with A^real cap j A^real
    g_real = []
    for v in basis.vectors:
        g_real.append(to_real(v))
        g_real.append(to_real([z * GaussianRational(0, 1) for z in v]))
    inter = real_isotropy_intersection(inv.real_elements.vectors, r)
    real_form_matches = linalg.same_span(g_real, inter)

    cvals = {k: [evaluate(c, m) for c in cs] for k, cs in A.structure.items()}
    B = [list(v) for v in basis.vectors]
    consts = {}
    closed = True
    for p in range(len(B)):
        for q in range(p + 1, len(B)):
            out = [G0] * r
            for (i, j), cs in cvals.items():
                w = B[p][i] * B[q][j] - B[p][j] * B[q][i]
                if w:
                    out = [o + w * c for o, c in zip(out, cs)]
            cols = [[B[t][row] for t in range(len(B))] for row in range(r)]
            sol = linalg.solve(cols, out, G0, G1)
            if sol is None:
                closed = False
                break
            consts[(p, q)] = sol
        if not closed:
            break
    return IsotropyReport(basis, real_form_matches, closed, consts if closed else None)


# ---------------------------------------------------------------------------
# grids and scans


def parse_grid(spec: str, chart: Sequence[str]) -> list[Point]:
    """``"x=-2..2:1,y=0..1:1/2"``; coordinates not mentioned default to -2..2:1."""
    chart = tuple(chart)
    ranges = {}
    if spec and spec.strip():
        for part in spec.split(","):
            part = part.strip()
            try:
                name, rng = part.split("=")
                lohi, _, step = rng.partition(":")
                lo, hi = lohi.split("..")
                lo, hi = Fraction(lo.strip()), Fraction(hi.strip())
                step = Fraction(step.strip()) if step.strip() else Fraction(1)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad grid component {part!r}") from None
            name = name.strip()
            if name not in chart:
                raise ParseError(f"grid coordinate {name!r} not in chart {list(chart)}")
            if step <= 0 or hi < lo:
                raise ParseError(f"empty or ill-formed range in {part!r}")
            ranges[name] = (lo, hi, step)
    axes = []
    for v in chart:
        lo, hi, step = ranges.get(v, (Fraction(-2), Fraction(2), Fraction(1)))
        vals = []
        x = lo
        while x <= hi:
            vals.append(x)
            x += step
        axes.append(vals)
    return [Point(tuple(c), chart) for c in product(*axes)]


@dataclass(frozen=True)
class ScanReport:
    records: tuple[PointwiseReport, ...]
    poles: tuple[Point, ...]
    strata: dict  # stratum key -> tuple of points

    @property
    def real_ranks(self) -> set[int]:
        return {rec.real_rank for rec in self.records}

    @property
    def constant_real_rank_on_sample(self) -> bool:
        return len(self.real_ranks) <= 1

    @property
    def identities_hold(self) -> bool:
        return all(rec.identities_hold for rec in self.records)

    @property
    def cr_on_sample(self) -> bool:
        """Real rank identically zero on the sample (the CR condition)."""
        return self.real_ranks <= {0}

    def to_dict(self) -> dict:
        return {
            "points": [rec.to_dict() for rec in self.records],
            "poles": [p.as_dict() for p in self.poles],
            "strata": [
                {
                    "real_rank": k[0],
                    "type": k[1],
                    "class": k[2],
                    "order": k[3],
                    "count": len(pts),
                    "points": [p.as_dict() for p in pts],
                }
                for k, pts in sorted(self.strata.items())
            ],
            "constant_real_rank_on_sample": self.constant_real_rank_on_sample,
            "identities_hold": self.identities_hold,
        }


def scan_grid(A: ChartedAlgebroid, grid) -> ScanReport:
    points = parse_grid(grid, A.chart) if isinstance(grid, str) or grid is None else list(grid)
    records, poles = [], []
    strata: dict = {}
    for p in points:
        try:
            rep = pointwise_invariants_at(A, p)
        except PoleAtPoint:
            poles.append(_as_point(A, p))
            continue
        records.append(rep)
        strata.setdefault(rep.stratum_key(), []).append(rep.point)
    return ScanReport(tuple(records), tuple(poles), {k: tuple(v) for k, v in strata.items()})


# ---------------------------------------------------------------------------
# Lie algebroid of real elements


@dataclass(frozen=True, eq=False)
class RealExtraction:
    algebroid: ChartedAlgebroid
    frame: tuple[Section, ...]  # frame of A^real as sections of A
    excluded: tuple[str, ...]  # polynomials whose zero sets are removed from the chart
    degenerate_points: tuple[Point, ...]  # sample points where the frame drops rank

    def to_dict(self) -> dict:
        from .io import algebroid_to_json

        return {
            "algebroid": algebroid_to_json(self.algebroid),
            "frame": [s.to_strings() for s in self.frame],
            "excluded": list(self.excluded),
            "degenerate_points": [p.as_dict() for p in self.degenerate_points],
        }


def symbolic_realified(A: ChartedAlgebroid) -> tuple[list[list[RationalExpr]], list[list[RationalExpr]]]:
    n, r = A.dim, A.rank
    z = A.zero_expr()
    rho1 = [[z] * (2 * r) for _ in range(n)]
    rho2 = [[z] * (2 * r) for _ in range(n)]
    for k, row in enumerate(A.anchor):
        for t, c in enumerate(row):
            a, b = c.real_part(), c.imag_part()
            rho1[t][k] = a
            rho1[t][r + k] = -b
            rho2[t][k] = b
            rho2[t][r + k] = a
    return rho1, rho2


def _clear_denominators(v: list[RationalExpr]) -> list[RationalExpr]:
    den = None
    for c in v:
        if c and not c.is_polynomial():
            d = c.denominator()
            den = d if den is None else poly_lcm(den, d)
    if den is None:
        return v
    return [c * den for c in v]


def extract_real_algebroid(A: ChartedAlgebroid, sample, config: CheckConfig = DEFAULT_CONFIG, verify: bool = True) -> RealExtraction:
    """Build (A^real, [.,.]|, rho_1|) from a symbolic kernel frame of rho_2.

    Raises NonConstantRank when the pointwise real rank differs from the
    generic one at some sample point.
    """
    points = parse_grid(sample, A.chart) if isinstance(sample, str) or sample is None else list(sample)
    r = A.rank
    one = RationalExpr.const(1, A.chart)
    zero = A.zero_expr()
    rho1, rho2 = symbolic_realified(A)
    kern = linalg.nullspace(rho2, 2 * r, zero, one) if r else []
    kern = [_clear_denominators(v) for v in kern]
    k = len(kern)

    jumps, degenerate = [], []
    for p in points:
        p = _as_point(A, p)
        try:
            pointwise = real_elements_at(A, p).dim
        except PoleAtPoint:
            degenerate.append(p)
            continue
        if pointwise != k:
            jumps.append(p)
            continue
        try:
            vals = [[evaluate(c, p) for c in v] for v in kern]
        except PoleAtPoint:
            degenerate.append(p)
            continue
        if (linalg.rank([[z.re for z in v] for v in vals]) if vals else 0) != k:
            degenerate.append(p)
    if jumps:
        raise NonConstantRank(
            f"real rank is not constant on the sample (generic rank {k}); jumps at {len(jumps)} point(s)",
            points=jumps,
        )

    frame = tuple(Section(tuple(v[i] + v[r + i] * RationalExpr.const(GaussianRational(0, 1), A.chart) for i in range(r))) for v in kern)
    anchor = tuple(tuple(linalg.matvec(rho1, v, zero)) for v in kern)
    # K c = realified bracket, solved over the rational-function field
    K_rows = [[kern[t][row] for t in range(k)] for row in range(2 * r)]
    structure = {}
    excluded = set()
    for p in range(k):
        for q in range(p + 1, k):
            br = bracket_sections(A, frame[p], frame[q])
            rhs = [c.real_part() for c in br] + [c.imag_part() for c in br]
            sol = linalg.solve(K_rows, rhs, zero, one)
            if sol is None:
                raise InternalInconsistency("bracket of real elements left A^real")
            structure[(p, q)] = tuple(sol)
            for c in sol:
                if c and not c.is_polynomial():
                    excluded.add(str(c.denominator()))
    real = ChartedAlgebroid(A.chart, k, REAL, anchor, structure)
    if verify:
        verdict = classify_algebroid(real, config)
        if verdict.classification != "RLA":
            raise InternalInconsistency(f"extracted algebroid classifies as {verdict.classification}, expected RLA")
        bad = set(degenerate)
        for p in points:
            p = _as_point(A, p)
            if p in bad:
                continue
            rows = anchor_at(real, p)
            image = [[z.re for z in row] for row in rows]
            delta = anchor_invariants(anchor_at(A, p), A.dim).delta.vectors
            if not linalg.same_span(image, [list(v) for v in delta]):
                raise InternalInconsistency(f"anchor image of A^real differs from Delta at {p.label()}")
    return RealExtraction(real, frame, tuple(sorted(excluded)), tuple(degenerate))
