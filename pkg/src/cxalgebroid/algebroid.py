"""Anchored bundles with bracket over one chart, and their axiom checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Mapping, Sequence

from .errors import ShapeMismatch
from .geometry import VectorField, lie_bracket_vf
from .symexpr import GaussianRational, RationalExpr

REAL = "real"
COMPLEX = "complex"


@dataclass(frozen=True)
class CheckConfig:
    """Controls every randomized verification; (seed, trials) fix the outcome."""

    seed: int = 0
    trials: int = 30
    degree: int = 2
    coeff_bound: int = 2


DEFAULT_CONFIG = CheckConfig()


@dataclass(frozen=True, eq=False)
class Section:
    coefficients: tuple[RationalExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __iter__(self):
        return iter(self.coefficients)

    def __add__(self, other: "Section") -> "Section":
        if len(other) != len(self):
            raise ShapeMismatch("sections of different rank")
        return Section(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "Section") -> "Section":
        if len(other) != len(self):
            raise ShapeMismatch("sections of different rank")
        return Section(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return Section(tuple(-a for a in self))

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self, other))

    def scale(self, f) -> "Section":
        return Section(tuple(f * a for a in self))

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def real_part(self) -> "Section":
        return Section(tuple(a.real_part() for a in self))

    def imag_part(self) -> "Section":
        return Section(tuple(a.imag_part() for a in self))

    def to_strings(self) -> list[str]:
        return [str(a) for a in self]

    def __str__(self):
        terms = [f"({a})*e{k + 1}" for k, a in enumerate(self) if a]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True, eq=False)
class ChartedAlgebroid:
    """Frame data (rank r, anchor rows, structure functions) over one chart.

    ``anchor[i]`` is the image of the frame element e_i; ``structure[(i, j)]``
    for 0-based i < j lists the coefficients of [e_i, e_j] in the frame.
    """

    chart: tuple[str, ...]
    rank: int
    scalars: str
    anchor: tuple[tuple[RationalExpr, ...], ...]
    structure: Mapping[tuple[int, int], tuple[RationalExpr, ...]] = field(default_factory=dict)

    def __post_init__(self):
        chart = tuple(self.chart)
        object.__setattr__(self, "chart", chart)
        if self.scalars not in (REAL, COMPLEX):
            raise ValueError(f"scalars must be 'real' or 'complex', got {self.scalars!r}")
        r, n = self.rank, len(chart)
        if r < 0:
            raise ShapeMismatch("rank must be nonnegative")
        anchor = tuple(tuple(RationalExpr.coerce(c, chart).in_chart(chart) for c in row) for row in self.anchor)
        if len(anchor) != r or any(len(row) != n for row in anchor):
            raise ShapeMismatch(f"anchor must be {r}x{n}")
        structure = {}
        for (i, j), coeffs in dict(self.structure).items():
            if not (0 <= i < j < r):
                raise ShapeMismatch(f"structure index ({i}, {j}) must satisfy i < j < rank")
            coeffs = tuple(RationalExpr.coerce(c, chart).in_chart(chart) for c in coeffs)
            if len(coeffs) != r:
                raise ShapeMismatch(f"structure entry ({i}, {j}) needs {r} coefficients")
            if any(coeffs):
                structure[(i, j)] = coeffs
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "structure", dict(sorted(structure.items())))
        if self.scalars == REAL:
            bad = [c for row in anchor for c in row if not c.is_real()]
            bad += [c for cs in structure.values() for c in cs if not c.is_real()]
            if bad:
                raise ValueError(f"real algebroid has complex entries, e.g. {bad[0]}")

    # -- frame access -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.chart)

    def zero_expr(self) -> RationalExpr:
        return RationalExpr.const(0, self.chart)

    def zero_section(self) -> Section:
        return Section((self.zero_expr(),) * self.rank)

    def frame(self, i: int) -> Section:
        return Section(tuple(RationalExpr.const(1 if k == i else 0, self.chart) for k in range(self.rank)))

    def frame_bracket(self, i: int, j: int) -> tuple[RationalExpr, ...]:
        if i == j:
            return (self.zero_expr(),) * self.rank
        if i < j:
            return self.structure.get((i, j), (self.zero_expr(),) * self.rank)
        return tuple(-c for c in self.structure.get((j, i), (self.zero_expr(),) * self.rank))

    def anchor_row(self, i: int) -> VectorField:
        return VectorField(self.chart, self.anchor[i])

    def section(self, coeffs: Sequence) -> Section:
        if len(coeffs) != self.rank:
            raise ShapeMismatch(f"section needs {self.rank} coefficients")
        return Section(tuple(RationalExpr.coerce(c, self.chart).in_chart(self.chart) for c in coeffs))

    def same_data(self, other: "ChartedAlgebroid") -> bool:
        """Exact equality of frame data (chart, rank, scalars, anchor, brackets)."""
        if (self.chart, self.rank, self.scalars) != (other.chart, other.rank, other.scalars):
            return False
        if any(a != b for ra, rb in zip(self.anchor, other.anchor) for a, b in zip(ra, rb)):
            return False
        keys = set(self.structure) | set(other.structure)
        return all(
            all(a == b for a, b in zip(self.frame_bracket(*k), other.frame_bracket(*k))) for k in keys
        )

    def is_real_data(self) -> bool:
        return all(c.is_real() for row in self.anchor for c in row) and all(
            c.is_real() for cs in self.structure.values() for c in cs
        )

    def with_scalars(self, scalars: str) -> "ChartedAlgebroid":
        return ChartedAlgebroid(self.chart, self.rank, scalars, self.anchor, self.structure)


def _check_section(A: ChartedAlgebroid, *secs: Section):
    for s in secs:
        if len(s) != A.rank:
            raise ShapeMismatch(f"section of length {len(s)} for rank-{A.rank} algebroid")


def anchor_apply(A: ChartedAlgebroid, a: Section) -> VectorField:
    _check_section(A, a)
    comps = [A.zero_expr() for _ in range(A.dim)]
    for i, f in enumerate(a):
        if not f:
            continue
        for k, c in enumerate(A.anchor[i]):
            if c:
                comps[k] = comps[k] + f * c
    return VectorField(A.chart, tuple(comps))


def bracket_sections(A: ChartedAlgebroid, a: Section, b: Section) -> Section:
    """Leibniz extension of the frame brackets to arbitrary sections.

    [a, b] = sum f_i g_j [e_i, e_j] + sum_j rho(a)(g_j) e_j - sum_i rho(b)(f_i) e_i
    """
    _check_section(A, a, b)
    r = A.rank
    out = [A.zero_expr() for _ in range(r)]
    for (i, j), cs in A.structure.items():
        w = a[i] * b[j] - a[j] * b[i]
        if not w:
            continue
        for k, c in enumerate(cs):
            if c:
                out[k] = out[k] + w * c
    ra = anchor_apply(A, a)
    rb = anchor_apply(A, b)
    for k in range(r):
        if b[k]:
            out[k] = out[k] + ra(b[k])
        if a[k]:
            out[k] = out[k] - rb(a[k])
    return Section(tuple(out))


def jacobiator(A: ChartedAlgebroid, a: Section, b: Section, c: Section) -> Section:
    br = lambda u, v: bracket_sections(A, u, v)  # noqa: E731
    return br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))


def anchor_defect(A: ChartedAlgebroid, a: Section, b: Section) -> VectorField:
    """rho[a, b] - [rho(a), rho(b)]."""
    return anchor_apply(A, bracket_sections(A, a, b)) - lie_bracket_vf(anchor_apply(A, a), anchor_apply(A, b))


# ---------------------------------------------------------------------------
# random sections


def random_polynomial(chart: Sequence[str], rng: random.Random, degree: int, bound: int, complex_coeffs: bool) -> RationalExpr:
    chart = tuple(chart)
    xs = [RationalExpr.var(v, chart) for v in chart]
    out = RationalExpr.const(0, chart)
    for d in range(degree + 1):
        for mono in combinations_with_replacement(range(len(chart)), d):
            re = rng.randint(-bound, bound)
            im = rng.randint(-bound, bound) if complex_coeffs else 0
            if re == 0 and im == 0:
                continue
            term = RationalExpr.const(GaussianRational(re, im), chart)
            for k in mono:
                term = term * xs[k]
            out = out + term
    return out


def random_section(A: ChartedAlgebroid, rng: random.Random, config: CheckConfig = DEFAULT_CONFIG, complex_coeffs: bool = False) -> Section:
    return Section(
        tuple(random_polynomial(A.chart, rng, config.degree, config.coeff_bound, complex_coeffs) for _ in range(A.rank))
    )


def random_sections(A: ChartedAlgebroid, k: int, config: CheckConfig, complex_coeffs: bool = False, salt: str = "") -> list[tuple[Section, ...]]:
    """``config.trials`` tuples of k random sections, reproducible from the seed."""
    rng = random.Random(f"{config.seed}:{salt}")
    return [tuple(random_section(A, rng, config, complex_coeffs) for _ in range(k)) for _ in range(config.trials)]


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True, eq=False)
class Witness:
    sections: tuple[Section, ...]
    defect: object  # Section or VectorField

    def to_dict(self) -> dict:
        return {
            "sections": [s.to_strings() for s in self.sections],
            "defect": [str(c) for c in self.defect.components]
            if isinstance(self.defect, VectorField)
            else self.defect.to_strings(),
        }


@dataclass(frozen=True, eq=False)
class AxiomVerdict:
    leibniz_holds: bool
    anchor_morphism: bool
    jacobi: bool
    jacobi_on_frames: bool
    classification: str
    anchor_witness: Witness | None = None
    jacobi_witness: Witness | None = None
    trials: int = 0
    seed: int = 0

    @property
    def is_lie(self) -> bool:
        return self.anchor_morphism and self.jacobi

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "leibniz_holds": self.leibniz_holds,
            "anchor_morphism": self.anchor_morphism,
            "jacobi": self.jacobi,
            "jacobi_on_frames": self.jacobi_on_frames,
            "anchor_witness": self.anchor_witness.to_dict() if self.anchor_witness else None,
            "jacobi_witness": self.jacobi_witness.to_dict() if self.jacobi_witness else None,
            "seed": self.seed,
            "trials": self.trials,
        }


def check_anchor_morphism(A: ChartedAlgebroid, config: CheckConfig = DEFAULT_CONFIG) -> tuple[bool, Witness | None]:
    """rho[a,b] = [rho a, rho b] on all frame pairs, then on random section pairs."""
    for i, j in combinations(range(A.rank), 2):
        a, b = A.frame(i), A.frame(j)
        d = anchor_defect(A, a, b)
        if not d.is_zero():
            return False, Witness((a, b), d)
    for a, b in random_sections(A, 2, config, salt="anchor"):
        d = anchor_defect(A, a, b)
        if not d.is_zero():
            return False, Witness((a, b), d)
    return True, None


def check_jacobi_frames(A: ChartedAlgebroid) -> tuple[bool, Witness | None]:
    for i, j, k in combinations(range(A.rank), 3):
        a, b, c = A.frame(i), A.frame(j), A.frame(k)
        J = jacobiator(A, a, b, c)
        if not J.is_zero():
            return False, Witness((a, b, c), J)
    return True, None


def check_jacobi_random(A: ChartedAlgebroid, config: CheckConfig = DEFAULT_CONFIG) -> tuple[bool, Witness | None]:
    for a, b, c in random_sections(A, 3, config, salt="jacobi"):
        J = jacobiator(A, a, b, c)
        if not J.is_zero():
            return False, Witness((a, b, c), J)
    return True, None


def classify_algebroid(A: ChartedAlgebroid, config: CheckConfig = DEFAULT_CONFIG) -> AxiomVerdict:
    """Skew-algebroid, almost Lie algebroid, or Lie algebroid (real or complex).

    With a bracket-preserving anchor the Jacobiator is tensorial, so the frame
    triples decide Jacobi; random triples are still run as a cross-check.
    Otherwise the random-section evidence decides and the frame result is
    reported alongside.
    """
    anchor_ok, anchor_w = check_anchor_morphism(A, config)
    frames_ok, frames_w = check_jacobi_frames(A)
    jac_ok, jac_w = frames_ok, frames_w
    if jac_ok:
        jac_ok, jac_w = check_jacobi_random(A, config)
    suffix = "CLA" if A.scalars == COMPLEX else "RLA"
    if anchor_ok and jac_ok:
        cls = suffix
    elif anchor_ok:
        cls = f"almost {suffix}"
    else:
        cls = "skew-algebroid"
    return AxiomVerdict(
        leibniz_holds=True,
        anchor_morphism=anchor_ok,
        jacobi=jac_ok,
        jacobi_on_frames=frames_ok,
        classification=cls,
        anchor_witness=anchor_w,
        jacobi_witness=jac_w,
        trials=config.trials,
        seed=config.seed,
    )


def tangent_algebroid(chart: Sequence[str], scalars: str = REAL) -> ChartedAlgebroid:
    chart = tuple(chart)
    n = len(chart)
    anchor = tuple(tuple(RationalExpr.const(1 if j == i else 0, chart) for j in range(n)) for i in range(n))
    return ChartedAlgebroid(chart, n, scalars, anchor, {})


def zero_algebroid(chart: Sequence[str], rank: int, scalars: str = REAL) -> ChartedAlgebroid:
    chart = tuple(chart)
    z = RationalExpr.const(0, chart)
    return ChartedAlgebroid(chart, rank, scalars, tuple((z,) * len(chart) for _ in range(rank)), {})
