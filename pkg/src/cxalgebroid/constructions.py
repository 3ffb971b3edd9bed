"""Complex sums, matched pairs, vector-field and Poisson algebroids, pullbacks.

A complex algebroid whose frame data are written over a real frame splits
as B_1 + i B_2 (brackets) and rho_1 + i rho_2 (anchor). The real pieces are
two real skew-algebroids on the same bundle, and everything here moves
between the two descriptions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .algebroid import (
    COMPLEX,
    REAL,
    CheckConfig,
    ChartedAlgebroid,
    DEFAULT_CONFIG,
    Section,
    Witness,
    anchor_apply,
    bracket_sections,
    random_sections,
)
from .errors import ChartMismatch, InternalInconsistency, ShapeMismatch
from .geometry import (
    Bivector,
    OneForm,
    VectorField,
    bivector_bracket_oneforms,
    bivector_sharp,
    generating_family,
    lie_bracket_vf,
    schouten_trilinear,
    schouten_witness,
)
from .invariants import SubspaceBasis, anchor_at, anchor_invariants
from .io import ChartMap
from .symexpr import GaussianRational, Point, RationalExpr, evaluate

MATCHED, ALMOST, FAILS = "matched pair", "almost only", "fails"


def _same_shape(A1: ChartedAlgebroid, A2: ChartedAlgebroid):
    if A1.chart != A2.chart:
        raise ChartMismatch(f"charts differ: {list(A1.chart)} vs {list(A2.chart)}")
    if A1.rank != A2.rank:
        raise ShapeMismatch(f"ranks differ: {A1.rank} vs {A2.rank}")


def _require_real(*algs: ChartedAlgebroid):
    for A in algs:
        if A.scalars != REAL:
            raise ShapeMismatch("expected a real-scalar algebroid")


# ---------------------------------------------------------------------------
# sums and splittings


def complex_sum(A1: ChartedAlgebroid, A2: ChartedAlgebroid) -> ChartedAlgebroid:
    """Bracket B_1 + i B_2 and anchor rho_1 + i rho_2 on the complexified bundle."""
    _same_shape(A1, A2)
    _require_real(A1, A2)
    I = RationalExpr.const(GaussianRational(0, 1), A1.chart)
    anchor = tuple(tuple(a + I * b for a, b in zip(r1, r2)) for r1, r2 in zip(A1.anchor, A2.anchor))
    keys = sorted(set(A1.structure) | set(A2.structure))
    structure = {k: tuple(a + I * b for a, b in zip(A1.frame_bracket(*k), A2.frame_bracket(*k))) for k in keys}
    return ChartedAlgebroid(A1.chart, A1.rank, COMPLEX, anchor, structure)


def decompose_complexified(AC: ChartedAlgebroid) -> tuple[ChartedAlgebroid, ChartedAlgebroid]:
    """Real and imaginary parts of the frame data as two real skew-algebroids."""
    re_anchor = tuple(tuple(c.real_part() for c in row) for row in AC.anchor)
    im_anchor = tuple(tuple(c.imag_part() for c in row) for row in AC.anchor)
    re_struct = {k: tuple(c.real_part() for c in cs) for k, cs in AC.structure.items()}
    im_struct = {k: tuple(c.imag_part() for c in cs) for k, cs in AC.structure.items()}
    return (
        ChartedAlgebroid(AC.chart, AC.rank, REAL, re_anchor, re_struct),
        ChartedAlgebroid(AC.chart, AC.rank, REAL, im_anchor, im_struct),
    )


def conjugate(A: ChartedAlgebroid) -> ChartedAlgebroid:
    if A.scalars != COMPLEX:
        raise ShapeMismatch("conjugate needs a complex algebroid")
    anchor = tuple(tuple(c.conjugate() for c in row) for row in A.anchor)
    structure = {k: tuple(c.conjugate() for c in cs) for k, cs in A.structure.items()}
    return ChartedAlgebroid(A.chart, A.rank, COMPLEX, anchor, structure)


def complexify(A: ChartedAlgebroid) -> ChartedAlgebroid:
    _require_real(A)
    return A.with_scalars(COMPLEX)


# ---------------------------------------------------------------------------
# matched pairs


@dataclass(frozen=True, eq=False)
class MatchedPairReport:
    commute_frames: bool
    commute_sections: bool
    jacobiators_equal_frames: bool
    jacobiators_equal: bool
    anchor_condition: bool  # imaginary part of rho[a,b] = [rho a, rho b] for the sum
    anchor_condition_real: bool  # its real part
    verdict: str
    reasons: tuple[str, ...] = ()
    witnesses: dict = field(default_factory=dict)
    trials: int = 0
    seed: int = 0

    @property
    def detail(self) -> str:
        if self.verdict == FAILS and self.reasons:
            return f"fails: {', '.join(self.reasons)}"
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "verdict_detail": self.detail,
            "reasons": list(self.reasons),
            "commute_frames": self.commute_frames,
            "commute_sections": self.commute_sections,
            "jacobiators_equal_frames": self.jacobiators_equal_frames,
            "jacobiators_equal": self.jacobiators_equal,
            "anchor_condition": self.anchor_condition,
            "anchor_condition_real": self.anchor_condition_real,
            "witnesses": {k: w.to_dict() for k, w in sorted(self.witnesses.items())},
            "seed": self.seed,
            "trials": self.trials,
        }


def _triple_defects(A1: ChartedAlgebroid, A2: ChartedAlgebroid, a: Section, b: Section, c: Section):
    """(commuting sum, Jac_1 - Jac_2) for one triple."""
    commute = A1.zero_section()
    jac_diff = A1.zero_section()
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        yz1 = bracket_sections(A1, y, z)
        yz2 = bracket_sections(A2, y, z)
        commute = commute + bracket_sections(A2, x, yz1) + bracket_sections(A1, x, yz2)
        jac_diff = jac_diff + bracket_sections(A1, x, yz1) - bracket_sections(A2, x, yz2)
    return commute, jac_diff


def anchor_identity_defect(A1: ChartedAlgebroid, A2: ChartedAlgebroid, a: Section, b: Section) -> VectorField:
    """rho_1[a,b]_2 + rho_2[a,b]_1 - [rho_2 a, rho_1 b] - [rho_1 a, rho_2 b]."""
    lhs = anchor_apply(A1, bracket_sections(A2, a, b)) + anchor_apply(A2, bracket_sections(A1, a, b))
    r1a, r1b = anchor_apply(A1, a), anchor_apply(A1, b)
    r2a, r2b = anchor_apply(A2, a), anchor_apply(A2, b)
    return lhs - lie_bracket_vf(r2a, r1b) - lie_bracket_vf(r1a, r2b)


def anchor_real_defect(A1: ChartedAlgebroid, A2: ChartedAlgebroid, a: Section, b: Section) -> VectorField:
    """rho_1[a,b]_1 - rho_2[a,b]_2 - [rho_1 a, rho_1 b] + [rho_2 a, rho_2 b].

    Together with :func:`anchor_identity_defect` this is the anchor-morphism
    defect of the complex sum on real sections (real and imaginary parts).
    """
    lhs = anchor_apply(A1, bracket_sections(A1, a, b)) - anchor_apply(A2, bracket_sections(A2, a, b))
    r1a, r1b = anchor_apply(A1, a), anchor_apply(A1, b)
    r2a, r2b = anchor_apply(A2, a), anchor_apply(A2, b)
    return lhs - lie_bracket_vf(r1a, r1b) + lie_bracket_vf(r2a, r2b)


def check_matched_pair(A1: ChartedAlgebroid, A2: ChartedAlgebroid, config: CheckConfig = DEFAULT_CONFIG) -> MatchedPairReport:
    _same_shape(A1, A2)
    _require_real(A1, A2)
    w: dict[str, Witness] = {}

    def run(triples, tag):
        com_ok = jac_ok = True
        for a, b, c in triples:
            com, jd = _triple_defects(A1, A2, a, b, c)
            if com_ok and not com.is_zero():
                com_ok = False
                w.setdefault(f"commute_{tag}", Witness((a, b, c), com))
            if jac_ok and not jd.is_zero():
                jac_ok = False
                w.setdefault(f"jacobiators_{tag}", Witness((a, b, c), jd))
            if not (com_ok or jac_ok):
                break
        return com_ok, jac_ok

    frames = [(A1.frame(i), A1.frame(j), A1.frame(k)) for i, j, k in combinations(range(A1.rank), 3)]
    com_f, jac_f = run(frames, "frames")
    com_s, jac_s = run(random_sections(A1, 3, config, salt="matched"), "sections")
    com_s, jac_s = com_s and com_f, jac_s and jac_f

    anchor_ok = anchor_real_ok = True
    pairs = [(A1.frame(i), A1.frame(j)) for i, j in combinations(range(A1.rank), 2)]
    for a, b in pairs + list(random_sections(A1, 2, config, salt="matched-anchor")):
        if anchor_ok:
            d = anchor_identity_defect(A1, A2, a, b)
            if not d.is_zero():
                anchor_ok = False
                w["anchor"] = Witness((a, b), d)
        if anchor_real_ok:
            d = anchor_real_defect(A1, A2, a, b)
            if not d.is_zero():
                anchor_real_ok = False
                w["anchor_real"] = Witness((a, b), d)
        if not (anchor_ok or anchor_real_ok):
            break

    reasons = []
    if not com_s:
        reasons.append("compatibility")
    if not jac_s:
        reasons.append("jacobiators")
    if com_s and jac_s:
        verdict = MATCHED
    elif anchor_ok and anchor_real_ok:
        verdict = ALMOST
    else:
        verdict = FAILS
    return MatchedPairReport(
        commute_frames=com_f,
        commute_sections=com_s,
        jacobiators_equal_frames=jac_f,
        jacobiators_equal=jac_s,
        anchor_condition=anchor_ok,
        anchor_condition_real=anchor_real_ok,
        verdict=verdict,
        reasons=tuple(reasons),
        witnesses=w,
        trials=config.trials,
        seed=config.seed,
    )


# ---------------------------------------------------------------------------
# vector-field algebroids


def vector_field_algebroid(Z: VectorField, scalars: str = COMPLEX) -> ChartedAlgebroid:
    """Rank one, anchor Z, [e, e] = 0."""
    return ChartedAlgebroid(Z.chart, 1, scalars, (tuple(Z.components),), {})


BOTH_ZERO, X1_ONLY, X2_ONLY, INDEPENDENT, PROPORTIONAL = (
    "both_zero",
    "X1_only",
    "X2_only",
    "independent",
    "proportional",
)
CASE_REAL_RANK = {BOTH_ZERO: 2, X1_ONLY: 1, X2_ONLY: 1, INDEPENDENT: 0, PROPORTIONAL: 1}


@dataclass(frozen=True)
class VectorFieldCase:
    case_id: str
    real_rank: int
    delta_basis: SubspaceBasis
    ratio: Fraction | None = None  # c with X_2 = c X_1 in the proportional case

    def __post_init__(self):
        if CASE_REAL_RANK[self.case_id] != self.real_rank:
            raise InternalInconsistency(f"case {self.case_id} cannot have real rank {self.real_rank}")

    def to_dict(self) -> dict:
        return {
            "case": self.case_id,
            "real_rank": self.real_rank,
            "delta": self.delta_basis.to_dict(),
            "ratio": None if self.ratio is None else str(self.ratio),
        }


def classify_vf_at(Z: VectorField, m) -> VectorFieldCase:
    """Case of Z = X_1 + i X_2 at m, read off the values X_1|_m and X_2|_m."""
    m = m if isinstance(m, Point) else Point(tuple(m), Z.chart)
    vals = [evaluate(c, m) for c in Z.components]
    x1 = [z.re for z in vals]
    x2 = [z.im for z in vals]
    n = len(vals)
    nz1, nz2 = any(x1), any(x2)
    ratio = None
    if not nz1 and not nz2:
        case, delta = BOTH_ZERO, []
    elif nz1 and not nz2:
        case, delta = X1_ONLY, [x1]
    elif nz2 and not nz1:
        case, delta = X2_ONLY, [x2]
    elif linalg.rank([x1, x2]) == 2:
        case, delta = INDEPENDENT, []
    else:
        k = next(t for t in range(n) if x1[t])
        ratio = x2[k] / x1[k]
        case, delta = PROPORTIONAL, [x1]
    return VectorFieldCase(case, CASE_REAL_RANK[case], SubspaceBasis(n, tuple(tuple(v) for v in delta), REAL), ratio)


# ---------------------------------------------------------------------------
# bivectors


def cotangent_algebroid(pi: Bivector, scalars: str = COMPLEX) -> ChartedAlgebroid:
    """(T*M)_pi on the coordinate coframe: anchor pi-sharp, bracket [.,.]_pi."""
    chart = pi.chart
    n = len(chart)
    coframe = [OneForm.coordinate(chart, v) for v in chart]
    anchor = tuple(tuple(bivector_sharp(pi, dx).components) for dx in coframe)
    structure = {}
    for i, j in combinations(range(n), 2):
        structure[(i, j)] = tuple(bivector_bracket_oneforms(pi, coframe[i], coframe[j]).components)
    return ChartedAlgebroid(chart, n, scalars, anchor, structure)


def poisson_algebroid(pi: Bivector) -> ChartedAlgebroid:
    return cotangent_algebroid(pi, COMPLEX)


def real_cotangent_pair(pi: Bivector) -> tuple[ChartedAlgebroid, ChartedAlgebroid]:
    """((T*M)_{pi_1}, (T*M)_{pi_2}) for pi = pi_1 + i pi_2."""
    return cotangent_algebroid(pi.real_part(), REAL), cotangent_algebroid(pi.imag_part(), REAL)


@dataclass(frozen=True, eq=False)
class PoissonVerdict:
    is_poisson: bool
    matched_pair: MatchedPairReport
    schouten_vanishes: bool
    schouten_witness: tuple | None

    def to_dict(self) -> dict:
        wit = None
        if self.schouten_witness is not None:
            (f, g, h), v = self.schouten_witness
            wit = {"functions": [str(f), str(g), str(h)], "value": str(v)}
        return {
            "complex_poisson": self.is_poisson,
            "matched_pair": self.matched_pair.to_dict(),
            "schouten_vanishes": self.schouten_vanishes,
            "schouten_witness": wit,
        }


def check_complex_poisson(pi: Bivector, config: CheckConfig = DEFAULT_CONFIG) -> PoissonVerdict:
    """[pi, pi] = 0, decided twice: by the matched-pair test and by the trilinear form."""
    A1, A2 = real_cotangent_pair(pi)
    report = check_matched_pair(A1, A2, config)
    wit = schouten_witness(pi, pi, generating_family(pi.chart, products=False))
    by_pair = report.verdict == MATCHED
    by_schouten = wit is None
    if by_pair != by_schouten:
        raise InternalInconsistency(
            f"matched-pair route says {by_pair}, Schouten route says {by_schouten} for {pi}"
        )
    return PoissonVerdict(by_pair, report, by_schouten, wit)


def _dual_names(chart: Sequence[str], rank: int) -> tuple[str, ...]:
    prefix = "xi"
    while any(v.startswith(prefix) for v in chart):
        prefix = "_" + prefix
    return tuple(f"{prefix}{k + 1}" for k in range(rank))


def fiberwise_bivector(A: ChartedAlgebroid) -> Bivector:
    """Linear bivector on A* in coordinates (x, xi): {xi_i, xi_j} = c_ij^k xi_k, {xi_i, x} = rho(e_i)x."""
    n, r = A.dim, A.rank
    chart = A.chart + _dual_names(A.chart, r)
    xi = [RationalExpr.var(v, chart) for v in chart[n:]]
    entries = {}
    for (i, j), cs in A.structure.items():
        s = RationalExpr.const(0, chart)
        for k, c in enumerate(cs):
            if c:
                s = s + c.in_chart(chart) * xi[k]
        entries[(n + i, n + j)] = s
    for i, row in enumerate(A.anchor):
        for t, c in enumerate(row):
            if c:
                entries[(t, n + i)] = -c.in_chart(chart)
    return Bivector(chart, entries)


@dataclass(frozen=True, eq=False)
class FiberwiseVerdict:
    compatible: bool  # [Pi_1, Pi_2] = 0
    jacobiators_equal: bool  # [Pi_1, Pi_1] = [Pi_2, Pi_2]
    matched_pair: MatchedPairReport
    witnesses: dict

    @property
    def verdict(self) -> bool:
        return self.compatible and self.jacobiators_equal

    def to_dict(self) -> dict:
        return {
            "compatible": self.compatible,
            "jacobiators_equal": self.jacobiators_equal,
            "matched_pair_verdict": self.matched_pair.verdict,
            "witnesses": self.witnesses,
        }


def fiberwise_bivector_compat(A1: ChartedAlgebroid, A2: ChartedAlgebroid, config: CheckConfig = DEFAULT_CONFIG) -> FiberwiseVerdict:
    _same_shape(A1, A2)
    P1, P2 = fiberwise_bivector(A1), fiberwise_bivector(A2)
    fam = generating_family(P1.chart, products=False)
    witnesses = {}
    compat = schouten_witness(P1, P2, fam)
    if compat is not None:
        witnesses["compatibility"] = {"functions": [str(f) for f in compat[0]], "value": str(compat[1])}
    jac_equal = True
    for f, g, h in combinations(fam, 3):
        d = schouten_trilinear(P1, P1, f, g, h) - schouten_trilinear(P2, P2, f, g, h)
        if d:
            jac_equal = False
            witnesses["jacobiators"] = {"functions": [str(f), str(g), str(h)], "value": str(d)}
            break
    report = check_matched_pair(A1, A2, config)
    if (compat is None) != report.commute_sections or jac_equal != report.jacobiators_equal:
        raise InternalInconsistency("fiberwise bivector route disagrees with the matched-pair test")
    return FiberwiseVerdict(compat is None, jac_equal, report, witnesses)


# ---------------------------------------------------------------------------
# pullbacks


@dataclass(frozen=True)
class PullbackReport:
    point: Point
    image: Point
    fiber: SubspaceBasis  # inside A_{phi(m)} x T_C,m(source), complex
    transversal: bool
    is_inclusion: bool
    dim_delta_pullback: int | None = None
    dim_delta_intersection: int | None = None
    completely_transversal: bool | None = None

    @property
    def class_(self) -> int | None:
        return self.dim_delta_pullback

    def to_dict(self) -> dict:
        return {
            "point": self.point.as_dict(),
            "image": self.image.as_dict(),
            "fiber": self.fiber.to_dict(),
            "fiber_dim": self.fiber.dim,
            "transversal": self.transversal,
            "coordinate_inclusion": self.is_inclusion,
            "dim_delta_pullback": self.dim_delta_pullback,
            "dim_delta_intersection": self.dim_delta_intersection,
            "completely_transversal": self.completely_transversal,
        }


def _is_coordinate_inclusion(phi: ChartMap) -> bool:
    used = []
    for c in phi.components:
        if c.is_constant():
            continue
        names = [v for v in phi.source_chart if c == RationalExpr.var(v, phi.source_chart)]
        if not names:
            return False
        used.append(names[0])
    return sorted(used) == sorted(phi.source_chart) and len(set(used)) == len(used)


def _real_dim_sum(U, W) -> int:
    rows = [list(v) for v in U] + [list(v) for v in W]
    return linalg.rank(rows) if rows else 0


def pullback_at(A: ChartedAlgebroid, phi: ChartMap, m) -> PullbackReport:
    """Fiber {(a, v) : rho(a) = T phi(v)} of phi^!A at m, with transversality flags."""
    if phi.target_chart != A.chart:
        raise ChartMismatch(f"map target {list(phi.target_chart)} differs from algebroid chart {list(A.chart)}")
    if not all(c.is_real() for c in phi.components):
        raise ShapeMismatch("map components must be real")
    src = phi.source_chart
    m = m if isinstance(m, Point) else Point(tuple(m), src)
    image = Point(tuple(evaluate(c, m).re for c in phi.components), A.chart)
    rho = anchor_at(A, image)
    J = [[evaluate(c.diff(s), m).re for s in src] for c in phi.components]
    n_t, n_s, r = len(A.chart), len(src), A.rank
    G0, G1 = GaussianRational(0, 0), GaussianRational(1, 0)
    M = [[rho[i][t] for i in range(r)] + [GaussianRational(-J[t][s], 0) for s in range(n_s)] for t in range(n_t)]
    ker = linalg.nullspace(M, r + n_s, G0, G1) if n_t else [
        [G1 if k == j else G0 for k in range(r + n_s)] for j in range(r + n_s)
    ]
    fiber = SubspaceBasis(r + n_s, tuple(tuple(v) for v in ker), COMPLEX)
    span_rows = [list(row) for row in rho] + [[GaussianRational(J[t][s], 0) for t in range(n_t)] for s in range(n_s)]
    transversal = (linalg.rank(span_rows) if span_rows else 0) == n_t

    inclusion = _is_coordinate_inclusion(phi)
    rep = PullbackReport(m, image, fiber, transversal, inclusion)
    if inclusion:
        # anchor of the pullback is the v-part
        rows = [list(v[r:]) for v in ker]
        inv_pb = anchor_invariants(rows, n_s)
        delta_A = [list(v) for v in anchor_invariants(rho, n_t).delta.vectors]
        tan = linalg.independent_subset([[J[t][s] for t in range(n_t)] for s in range(n_s)])
        inter = len(tan) + len(delta_A) - _real_dim_sum(tan, delta_A)
        complete = len(tan) + len(delta_A) == n_t and inter == 0
        rep = PullbackReport(m, image, fiber, transversal, True, inv_pb.delta.dim, inter, complete)
    return rep
