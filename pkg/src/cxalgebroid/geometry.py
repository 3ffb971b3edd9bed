"""Vector fields, one-forms and bivectors on a single coordinate chart.

Conventions: a bivector pi = sum_{j<k} pi^{jk} d_j ^ d_k pairs with one-forms
as pi(a, b) = sum_{j,k} pi^{jk} a_j b_k (pi^{kj} = -pi^{jk}), and
sharp(pi)(a) = pi(a, .), i.e. sharp(pi)(a)^k = sum_j pi^{jk} a_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import ChartMismatch, ParseError, UnknownVariable
from .symexpr import RationalExpr, evaluate, names_in, normalize


def _chart_expr(f, chart: tuple[str, ...]) -> RationalExpr:
    if isinstance(f, str):
        return normalize(f, chart)
    return RationalExpr.coerce(f, chart).in_chart(chart)


def _same_chart(*objs):
    chart = objs[0].chart
    for o in objs[1:]:
        if o.chart != chart:
            raise ChartMismatch(f"charts differ: {list(chart)} vs {list(o.chart)}")
    return chart


@dataclass(frozen=True)
class VectorField:
    chart: tuple[str, ...]
    components: tuple[RationalExpr, ...]

    def __post_init__(self):
        chart = tuple(self.chart)
        object.__setattr__(self, "chart", chart)
        comps = tuple(_chart_expr(c, chart) for c in self.components)
        if len(comps) != len(chart):
            raise ValueError(f"vector field needs {len(chart)} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, chart: Sequence[str]) -> "VectorField":
        chart = tuple(chart)
        return cls(chart, (RationalExpr.const(0, chart),) * len(chart))

    @classmethod
    def coordinate(cls, chart: Sequence[str], name: str) -> "VectorField":
        chart = tuple(chart)
        if name not in chart:
            raise UnknownVariable(f"unknown coordinate {name!r}")
        return cls(chart, tuple(RationalExpr.const(1 if v == name else 0, chart) for v in chart))

    def __call__(self, f: RationalExpr) -> RationalExpr:
        """Directional derivative X(f) = sum_j X^j d_j f."""
        f = _chart_expr(f, self.chart)
        out = RationalExpr.const(0, self.chart)
        for v, c in zip(self.chart, self.components):
            if c:
                out = out + c * f.diff(v)
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        return VectorField(self.chart, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        return VectorField(self.chart, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(self.chart, tuple(-a for a in self.components))

    def scale(self, f) -> "VectorField":
        f = _chart_expr(f, self.chart)
        return VectorField(self.chart, tuple(f * a for a in self.components))

    def is_zero(self) -> bool:
        return not any(self.components)

    def real_part(self) -> "VectorField":
        return VectorField(self.chart, tuple(c.real_part() for c in self.components))

    def imag_part(self) -> "VectorField":
        return VectorField(self.chart, tuple(c.imag_part() for c in self.components))

    def conjugate(self) -> "VectorField":
        return VectorField(self.chart, tuple(c.conjugate() for c in self.components))

    def at(self, point) -> list:
        return [evaluate(c, point) for c in self.components]

    def __str__(self):
        terms = [f"({c})*d{v}" for v, c in zip(self.chart, self.components) if c]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class OneForm:
    chart: tuple[str, ...]
    components: tuple[RationalExpr, ...]

    def __post_init__(self):
        chart = tuple(self.chart)
        object.__setattr__(self, "chart", chart)
        comps = tuple(_chart_expr(c, chart) for c in self.components)
        if len(comps) != len(chart):
            raise ValueError(f"one-form needs {len(chart)} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, chart: Sequence[str]) -> "OneForm":
        chart = tuple(chart)
        return cls(chart, (RationalExpr.const(0, chart),) * len(chart))

    @classmethod
    def coordinate(cls, chart: Sequence[str], name: str) -> "OneForm":
        chart = tuple(chart)
        if name not in chart:
            raise UnknownVariable(f"unknown coordinate {name!r}")
        return cls(chart, tuple(RationalExpr.const(1 if v == name else 0, chart) for v in chart))

    def __add__(self, other):
        _same_chart(self, other)
        return OneForm(self.chart, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        _same_chart(self, other)
        return OneForm(self.chart, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return OneForm(self.chart, tuple(-a for a in self.components))

    def scale(self, f) -> "OneForm":
        f = _chart_expr(f, self.chart)
        return OneForm(self.chart, tuple(f * a for a in self.components))

    def pair(self, X: VectorField) -> RationalExpr:
        _same_chart(self, X)
        out = RationalExpr.const(0, self.chart)
        for a, b in zip(self.components, X.components):
            if a and b:
                out = out + a * b
        return out

    def is_zero(self) -> bool:
        return not any(self.components)

    def __str__(self):
        terms = [f"({c})*d{v}" for v, c in zip(self.chart, self.components) if c]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Bivector:
    """Upper-triangular storage: ``entries[(j, k)]`` for 0-based j < k."""

    chart: tuple[str, ...]
    entries: Mapping[tuple[int, int], RationalExpr]

    def __post_init__(self):
        chart = tuple(self.chart)
        object.__setattr__(self, "chart", chart)
        clean = {}
        for (j, k), v in dict(self.entries).items():
            if not (0 <= j < k < len(chart)):
                raise ValueError(f"bivector index ({j}, {k}) must satisfy 0 <= j < k < {len(chart)}")
            v = _chart_expr(v, chart)
            if v:
                clean[(j, k)] = v
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.chart, tuple(self.entries.items())))

    @classmethod
    def from_strings(cls, chart: Sequence[str], comps: Mapping[str, str]) -> "Bivector":
        """Parse a ``{"j,k": expr}`` map with 1-based indices."""
        chart = tuple(chart)
        entries = {}
        for key, expr in comps.items():
            try:
                j, k = (int(t) - 1 for t in key.split(","))
            except ValueError:
                raise ParseError(f"bad bivector index {key!r}") from None
            v = normalize(expr, chart)
            if j > k:
                j, k, v = k, j, -v
            elif j == k:
                if v:
                    raise ParseError(f"diagonal bivector entry {key!r} must vanish")
                continue
            entries[(j, k)] = entries.get((j, k), RationalExpr.const(0, chart)) + v
        return cls(chart, entries)

    def to_strings(self) -> dict[str, str]:
        return {f"{j + 1},{k + 1}": str(v) for (j, k), v in self.entries.items()}

    def component(self, j: int, k: int) -> RationalExpr:
        if j == k:
            return RationalExpr.const(0, self.chart)
        if j < k:
            return self.entries.get((j, k), RationalExpr.const(0, self.chart))
        return -self.entries.get((k, j), RationalExpr.const(0, self.chart))

    def matrix(self) -> list[list[RationalExpr]]:
        n = len(self.chart)
        return [[self.component(j, k) for k in range(n)] for j in range(n)]

    def __call__(self, a: OneForm, b: OneForm) -> RationalExpr:
        _same_chart(self, a, b)
        out = RationalExpr.const(0, self.chart)
        for (j, k), p in self.entries.items():
            t = a.components[j] * b.components[k] - a.components[k] * b.components[j]
            if t:
                out = out + p * t
        return out

    def on_functions(self, f, g) -> RationalExpr:
        """pi(df, dg)."""
        return self(d_fn(_chart_expr(f, self.chart)), d_fn(_chart_expr(g, self.chart)))

    def __add__(self, other):
        _same_chart(self, other)
        keys = set(self.entries) | set(other.entries)
        return Bivector(self.chart, {k: self.component(*k) + other.component(*k) for k in keys})

    def scale(self, f) -> "Bivector":
        f = _chart_expr(f, self.chart)
        return Bivector(self.chart, {k: f * v for k, v in self.entries.items()})

    def real_part(self) -> "Bivector":
        return Bivector(self.chart, {k: v.real_part() for k, v in self.entries.items()})

    def imag_part(self) -> "Bivector":
        return Bivector(self.chart, {k: v.imag_part() for k, v in self.entries.items()})

    def is_real(self) -> bool:
        return all(v.is_real() for v in self.entries.values())

    def __str__(self):
        terms = [f"({v})*d{self.chart[j]}^d{self.chart[k]}" for (j, k), v in self.entries.items()]
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# operations


def lie_bracket_vf(X: VectorField, Y: VectorField) -> VectorField:
    chart = _same_chart(X, Y)
    comps = []
    for k in range(len(chart)):
        comps.append(X(Y.components[k]) - Y(X.components[k]))
    return VectorField(chart, tuple(comps))


def d_fn(f: RationalExpr, chart: Sequence[str] | None = None) -> OneForm:
    chart = tuple(chart) if chart is not None else f.variables
    f = _chart_expr(f, chart)
    return OneForm(chart, tuple(f.diff(v) for v in chart))


def lie_derivative_oneform(X: VectorField, alpha: OneForm) -> OneForm:
    """(L_X alpha)_k = sum_j X^j d_j alpha_k + alpha_j d_k X^j."""
    chart = _same_chart(X, alpha)
    comps = []
    for k, vk in enumerate(chart):
        s = X(alpha.components[k])
        for j in range(len(chart)):
            aj = alpha.components[j]
            if aj:
                dX = X.components[j].diff(vk)
                if dX:
                    s = s + aj * dX
        comps.append(s)
    return OneForm(chart, tuple(comps))


def bivector_sharp(pi: Bivector, xi: OneForm) -> VectorField:
    chart = _same_chart(pi, xi)
    n = len(chart)
    comps = [RationalExpr.const(0, chart) for _ in range(n)]
    for (j, k), p in pi.entries.items():
        # pi^{jk} xi_j contributes to component k, pi^{kj} xi_k = -pi^{jk} xi_k to j
        if xi.components[j]:
            comps[k] = comps[k] + p * xi.components[j]
        if xi.components[k]:
            comps[j] = comps[j] - p * xi.components[k]
    return VectorField(chart, tuple(comps))


def schouten_trilinear(pi: Bivector, sigma: Bivector, f, g, h) -> RationalExpr:
    """pi(sigma(f,g),h) + sigma(pi(f,g),h) + cyclic permutations of (f,g,h).

    This is the Schouten bracket [pi, sigma] evaluated on df, dg, dh up to a
    convention-dependent constant factor.
    """
    chart = _same_chart(pi, sigma)
    f, g, h = (_chart_expr(u, chart) for u in (f, g, h))
    total = RationalExpr.const(0, chart)
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        total = total + pi.on_functions(sigma.on_functions(a, b), c)
        total = total + sigma.on_functions(pi.on_functions(a, b), c)
    return total


def generating_family(chart: Sequence[str], products: bool = True) -> list[RationalExpr]:
    """Coordinate functions and (optionally) their pairwise products."""
    chart = tuple(chart)
    xs = [RationalExpr.var(v, chart) for v in chart]
    fam = list(xs)
    if products:
        for a in range(len(xs)):
            for b in range(a, len(xs)):
                fam.append(xs[a] * xs[b])
    return fam


def schouten_witness(pi: Bivector, sigma: Bivector, family: Iterable[RationalExpr] | None = None):
    """First triple of the generating family on which the trilinear form is nonzero.

    The form is alternating, so unordered triples of distinct members suffice.
    Returns ``None`` when it vanishes on the whole family.
    """
    fam = list(family) if family is not None else generating_family(pi.chart)
    for f, g, h in combinations(fam, 3):
        v = schouten_trilinear(pi, sigma, f, g, h)
        if v:
            return (f, g, h), v
    return None


def bivector_bracket_oneforms(gamma: Bivector, alpha: OneForm, beta: OneForm) -> OneForm:
    """[a, b]_gamma = L_{gamma(a)} b - L_{gamma(b)} a - d gamma(a, b)."""
    chart = _same_chart(gamma, alpha, beta)
    t1 = lie_derivative_oneform(bivector_sharp(gamma, alpha), beta)
    t2 = lie_derivative_oneform(bivector_sharp(gamma, beta), alpha)
    t3 = d_fn(gamma(alpha, beta), chart)
    return t1 - t2 - t3


def parse_vector_field(text: str, chart: Sequence[str] | None = None) -> VectorField:
    """Parse ``"dx + i*x*dy"``-style input, where ``d<name>`` is the coordinate field.

    Without an explicit chart the coordinates are the ``d``-names in order of
    appearance followed by any other identifiers.
    """
    names = names_in(text)
    if chart is None:
        coords = [n[1:] for n in names if n.startswith("d") and len(n) > 1]
        coords += [n for n in names if n not in coords and not (n.startswith("d") and n[1:] in coords)]
        chart = tuple(dict.fromkeys(coords))
    chart = tuple(chart)
    dnames = tuple("d" + v for v in chart)
    clash = set(dnames) & set(chart)
    if clash:
        raise ParseError(f"coordinate names {sorted(clash)} collide with basis fields")
    extra = [n for n in names if n not in chart and n not in dnames]
    if extra:
        raise UnknownVariable(f"unknown identifiers {extra}; chart is {list(chart)}")
    full = chart + dnames
    expr = normalize(text, full)
    coeffs = [expr.diff(dv) for dv in dnames]
    rest = expr
    for dv, c in zip(dnames, coeffs):
        if any(c.diff(dw) for dw in dnames):
            raise ParseError(f"{text!r} is not linear in the basis fields")
        rest = rest - c * RationalExpr.var(dv, full)
    if rest:
        raise ParseError(f"{text!r} has a term without a basis field")
    return VectorField(chart, tuple(c.in_chart(chart) for c in coeffs))
