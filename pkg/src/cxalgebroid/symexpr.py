"""Exact rational functions over the Gaussian rationals.

Polynomials are sparse sympy ``PolyElement`` objects over ``QQ`` with
graded-lexicographic order. A :class:`RationalExpr` keeps the real and
imaginary parts of its numerator separately over a real monic denominator,
so real data never pays for Gaussian arithmetic.
Two expressions are equal as functions iff their canonical forms agree.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from sympy import QQ, QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .errors import DivisionByZeroExpr, ParseError, PoleAtPoint, UnknownVariable

__all__ = [
    "GaussianRational",
    "RationalExpr",
    "Point",
    "I",
    "normalize",
    "parse",
    "arith",
    "differentiate",
    "evaluate",
    "is_zero",
]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    # gmpy2.mpq and friends
    return Fraction(int(v.numerator), int(v.denominator))


@dataclass(frozen=True)
class GaussianRational:
    """An element re + i*im of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls(_frac(v), Fraction(0))

    @classmethod
    def from_qqi(cls, c) -> "GaussianRational":
        return cls(_frac(c.x), _frac(c.y))

    def to_qqi(self):
        return QQ_I(self.re, self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, RationalExpr):
            return NotImplemented
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        return _format_coeff(self.re, self.im)

    def __repr__(self):
        return f"GaussianRational({self})"


I_UNIT = GaussianRational(0, 1)


def _format_coeff(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return str(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{im}*i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{mag}*i"
    return f"({re}{sign}{imag})"


@lru_cache(maxsize=None)
def _ring(variables: tuple[str, ...]) -> PolyRing:
    return PolyRing(list(variables), QQ, grlex)


def _qq(v):
    v = _frac(v)
    return QQ(v.numerator, v.denominator)


def _union(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b or not b:
        return a
    if not a:
        return b
    return a + tuple(v for v in b if v not in a)


def _cmul(ar, ai, br, bi):
    """(ar + i ai)(br + i bi) on real polynomial pairs, skipping zero parts."""
    if not ai and not bi:
        return ar * br, ai
    if not ai:
        return ar * br, ar * bi
    if not bi:
        return ar * br, ai * br
    return ar * br - ai * bi, ar * bi + ai * br


class RationalExpr:
    """Canonical-form rational function in the named real coordinates.

    Stored as (re + i*im)/den with re, im, den in Q[x] and den monic. Every
    element of Q(i)(x) has such a form (multiply through by the conjugate
    denominator), and it is unique once gcd(den, re, im) = 1.
    """

    __slots__ = ("re", "im", "den", "variables")

    def __init__(self, re, im, den, variables: tuple[str, ...], *, _canonical: bool = False):
        self.variables = tuple(variables)
        if _canonical:
            self.re, self.im, self.den = re, im, den
            return
        if not den:
            raise DivisionByZeroExpr("denominator normalizes to the zero polynomial")
        if not re and not im:
            self.re, self.im, self.den = re, im, den.ring.one
            return
        if not den.is_ground:
            g = den.gcd(re) if re else den
            if im and not g.is_ground:
                g = g.gcd(im)
            if not g.is_ground:
                re, im, den = re.exquo(g), im.exquo(g), den.exquo(g)
        lc = den.LC
        if lc != 1:
            inv = QQ.one / lc
            re, im, den = re.mul_ground(inv), im.mul_ground(inv), den.mul_ground(inv)
        self.re, self.im, self.den = re, im, den

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, value=0, variables: Sequence[str] = ()) -> "RationalExpr":
        R = _ring(tuple(variables))
        g = GaussianRational.coerce(value)
        return cls(R.ground_new(_qq(g.re)), R.ground_new(_qq(g.im)), R.one, tuple(variables), _canonical=True)

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "RationalExpr":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise UnknownVariable(f"unknown variable {name!r}")
        R = _ring(variables)
        return cls(R.gens[variables.index(name)], R.zero, R.one, variables, _canonical=True)

    @classmethod
    def coerce(cls, v, variables: Sequence[str] = ()) -> "RationalExpr":
        if isinstance(v, RationalExpr):
            return v
        return cls.const(v, variables)

    # -- ring plumbing ------------------------------------------------
    @property
    def ring(self) -> PolyRing:
        return self.den.ring

    def _new(self, re, im, den, canonical=False) -> "RationalExpr":
        return RationalExpr(re, im, den, self.variables, _canonical=canonical)

    def in_chart(self, variables: Sequence[str]) -> "RationalExpr":
        """Re-express over exactly ``variables`` (which must contain ours)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        used = self.free_variables()
        missing = [v for v in used if v not in variables]
        if missing:
            raise UnknownVariable(f"variables {missing} not in chart {list(variables)}")
        polys = [_reembed(p, self.variables, variables) for p in (self.re, self.im, self.den)]
        # a new variable order can change which term of den leads
        return RationalExpr(*polys, variables, _canonical=polys[2].is_ground)

    def _lift(self, other) -> tuple["RationalExpr", "RationalExpr"]:
        if not isinstance(other, RationalExpr):
            return self, RationalExpr.const(other, self.variables)
        if other.variables == self.variables:
            return self, other
        vs = _union(self.variables, other.variables)
        return self.in_chart(vs), other.in_chart(vs)

    def free_variables(self) -> tuple[str, ...]:
        used = set()
        for p in (self.re, self.im, self.den):
            for m in p.keys():
                for k, e in enumerate(m):
                    if e:
                        used.add(k)
        return tuple(v for k, v in enumerate(self.variables) if k in used)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        if a.den == b.den:
            return a._new(a.re + b.re, a.im + b.im, a.den, a.den.is_ground)
        if a.den.is_ground:
            return a._new(a.re * b.den + b.re, a.im * b.den + b.im, b.den, True)
        if b.den.is_ground:
            return a._new(a.re + b.re * a.den, a.im + b.im * a.den, a.den, True)
        return a._new(a.re * b.den + b.re * a.den, a.im * b.den + b.im * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.re, -self.im, self.den, True)

    def __sub__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        re, im = _cmul(a.re, a.im, b.re, b.im)
        if a.den.is_ground and b.den.is_ground:
            return a._new(re, im, a.den, True)
        return a._new(re, im, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        if not b:
            raise DivisionByZeroExpr("division by an identically zero expression")
        # a/b = a.N * b.D * conj(b.N) / (a.D * |b.N|^2)
        if b.im:
            re, im = _cmul(a.re, a.im, b.re, -b.im)
            norm = b.re * b.re + b.im * b.im
        else:
            re, im, norm = a.re, a.im, b.re
        if not b.den.is_ground:
            re, im = re * b.den, im * b.den
        return a._new(re, im, a.den * norm)

    def __rtruediv__(self, other):
        return RationalExpr.coerce(other, self.variables) / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if k == 0:
            return RationalExpr.const(1, self.variables)
        den = self.den**k
        if not self.im:
            return self._new(self.re**k, self.im, den, True)
        R = self.ring
        re, im = R.one, R.zero
        br, bi = self.re, self.im
        while k:
            if k & 1:
                re, im = _cmul(re, im, br, bi)
            k >>= 1
            if k:
                br, bi = _cmul(br, bi, br, bi)
        return self._new(re, im, den, True)

    # -- comparisons --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, RationalExpr):
            a, b = self._lift(other)
            return a.re == b.re and a.im == b.im and a.den == b.den
        try:
            g = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_value() == g

    def __hash__(self):
        return hash(self._named_key())

    def _named_key(self):
        def key(p):
            return frozenset(
                (tuple((self.variables[k], e) for k, e in enumerate(m) if e), c) for m, c in p.items()
            )

        return key(self.re), key(self.im), key(self.den)

    # -- queries ------------------------------------------------------
    def is_constant(self) -> bool:
        return self.re.is_ground and self.im.is_ground and self.den.is_ground

    def is_polynomial(self) -> bool:
        return self.den.is_ground

    def is_real(self) -> bool:
        """True iff every coefficient is real (equivalently, real-valued)."""
        return not self.im

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        one = self.ring.one
        return GaussianRational(_frac(self.re.coeff(one)), _frac(self.im.coeff(one)))

    def numerator(self) -> "RationalExpr":
        return self._new(self.re, self.im, self.ring.one, True)

    def denominator(self) -> "RationalExpr":
        return self._new(self.den, self.ring.zero, self.ring.one, True)

    def conjugate(self) -> "RationalExpr":
        return self._new(self.re, -self.im, self.den, True)

    def real_part(self) -> "RationalExpr":
        """Real part as a function of real coordinates."""
        return self._new(self.re, self.ring.zero, self.den, self.den.is_ground or not self.im)

    def imag_part(self) -> "RationalExpr":
        return self._new(self.im, self.ring.zero, self.den, self.den.is_ground)

    def diff(self, var: str) -> "RationalExpr":
        return differentiate(self, var)

    def evaluate(self, point) -> GaussianRational:
        return evaluate(self, point)

    # -- printing -----------------------------------------------------
    def _num_terms(self) -> list:
        """(monomial, re, im) in descending grlex order."""
        monos = set(self.re.keys()) | set(self.im.keys())
        return [
            (m, _frac(self.re.get(m, 0)), _frac(self.im.get(m, 0)))
            for m in sorted(monos, key=grlex, reverse=True)
        ]

    def __str__(self):
        terms = self._num_terms()
        n = _format_terms(terms, self.variables)
        if self.den.is_ground:
            return n
        dterms = [(m, _frac(c), Fraction(0)) for m, c in self.den.terms()]
        d = _format_terms(dterms, self.variables)
        if len(terms) > 1:
            n = f"({n})"
        if not _is_single_power(self.den):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalExpr({str(self)!r}, variables={list(self.variables)})"


def _reembed(p, old: tuple[str, ...], new: tuple[str, ...]):
    R = _ring(new)
    idx = [new.index(v) if v in new else None for v in old]
    out = {}
    for m, c in p.items():
        e = [0] * len(new)
        for k, ek in enumerate(m):
            if ek:
                e[idx[k]] = ek
        out[tuple(e)] = c
    return R.from_dict(out) if out else R.zero


def _is_single_power(p) -> bool:
    """x or x^k with coefficient 1: safe to print after '/' without parentheses."""
    if len(p) != 1:
        return False
    (m, c), = p.items()
    return c == 1 and sum(1 for e in m if e) == 1


def _format_monomial(m, variables) -> str:
    parts = []
    for v, e in zip(variables, m):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def _format_terms(terms, variables) -> str:
    if not terms:
        return "0"
    out = []
    for m, re, im in terms:
        mono = _format_monomial(m, variables)
        if not mono:
            term = _format_coeff(re, im)
        elif im == 0 and re == 1:
            term = mono
        elif im == 0 and re == -1:
            term = "-" + mono
        else:
            term = f"{_format_coeff(re, im)}*{mono}"
        if not out:
            out.append(term)
        elif term.startswith("-"):
            out.append(" - " + term[1:])
        else:
            out.append(" + " + term)
    return "".join(out)


def poly_lcm(a: "RationalExpr", b: "RationalExpr") -> "RationalExpr":
    """Monic lcm of two real polynomials."""
    a, b = a._lift(b)
    if not (a.is_polynomial() and b.is_polynomial() and a.is_real() and b.is_real()):
        raise ValueError("poly_lcm needs real polynomials")
    return RationalExpr(a.re.lcm(b.re), a.ring.zero, a.ring.one, a.variables)


# ---------------------------------------------------------------------------
# parsing


_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def _check_tree(node):
    if isinstance(node, ast.Expression):
        _check_tree(node.body)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _BINOPS):
            raise ParseError(f"operator {type(node.op).__name__} not allowed")
        _check_tree(node.left)
        if isinstance(node.op, ast.Pow):
            _exponent(node.right)
        else:
            _check_tree(node.right)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.UAdd, ast.USub)):
            raise ParseError("only unary + and - are allowed")
        _check_tree(node.operand)
    elif isinstance(node, ast.Name):
        pass
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed, got {node.value!r}")
    else:
        raise ParseError(f"unsupported syntax: {type(node).__name__}")


def _exponent(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    raise ParseError("exponents must be nonnegative integer literals")


def _tree(text) -> ast.AST:
    if isinstance(text, ast.AST):
        tree = text if isinstance(text, ast.Expression) else ast.Expression(body=text)
    else:
        if not isinstance(text, str):
            raise ParseError(f"expected an expression string, got {type(text).__name__}")
        try:
            tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    _check_tree(tree)
    return tree


def names_in(text) -> list[str]:
    """Identifiers in order of first appearance (excluding ``i``)."""
    tree = _tree(text)
    # ast.walk is breadth-first; sort to recover textual order
    order = sorted(
        (n for n in ast.walk(tree) if isinstance(n, ast.Name) and n.id != "i"),
        key=lambda n: (n.lineno, n.col_offset),
    )
    seen = []
    for n in order:
        if n.id not in seen:
            seen.append(n.id)
    return seen


def normalize(raw, variables: Sequence[str] | None = None) -> RationalExpr:
    """Bring an expression tree (or its source text) to canonical form.

    ``variables`` fixes the chart; when omitted the identifiers of the
    expression are used in order of appearance.
    """
    tree = _tree(raw)
    if variables is None:
        variables = names_in(tree)
    variables = tuple(variables)
    if "i" in variables:
        raise ParseError("'i' is reserved for the imaginary unit")
    R = _ring(variables)
    one = R.one

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            return RationalExpr(R.ground_new(QQ(node.value)), R.zero, one, variables, _canonical=True)
        if isinstance(node, ast.Name):
            if node.id == "i":
                return RationalExpr(R.zero, one, one, variables, _canonical=True)
            if node.id not in variables:
                raise UnknownVariable(f"unknown variable {node.id!r}; chart is {list(variables)}")
            return RationalExpr(R.gens[variables.index(node.id)], R.zero, one, variables, _canonical=True)
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        left = ev(node.left)
        if isinstance(node.op, ast.Pow):
            k = _exponent(node.right)
            return left**k
        right = ev(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        return left / right

    return ev(tree)


def parse(text: str, variables: Sequence[str] | None = None) -> RationalExpr:
    return normalize(text, variables)


# ---------------------------------------------------------------------------
# functional interface


def arith(op: str, a: RationalExpr, b) -> RationalExpr:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def differentiate(f: RationalExpr, var: str) -> RationalExpr:
    if var not in f.variables:
        raise UnknownVariable(f"unknown variable {var!r}; chart is {list(f.variables)}")
    x = f.ring.gens[f.variables.index(var)]
    dre = f.re.diff(x) if f.re else f.re
    dim = f.im.diff(x) if f.im else f.im
    if f.den.is_ground:
        return RationalExpr(dre, dim, f.den, f.variables, _canonical=True)
    dd = f.den.diff(x)
    return RationalExpr(dre * f.den - f.re * dd, dim * f.den - f.im * dd, f.den**2, f.variables)


@dataclass(frozen=True)
class Point:
    """A point of a chart given by exact real coordinates."""

    coords: tuple[Fraction, ...]
    chart: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_frac(c) for c in self.coords))
        if self.chart is not None:
            object.__setattr__(self, "chart", tuple(self.chart))
            if len(self.chart) != len(self.coords):
                raise ValueError("point length does not match chart dimension")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def value_of(self, name: str) -> Fraction:
        return self.coords[self.chart.index(name)]

    def label(self) -> str:
        if self.chart is None:
            return "(" + ", ".join(str(c) for c in self.coords) + ")"
        return ",".join(f"{n}={c}" for n, c in zip(self.chart, self.coords))

    def as_dict(self) -> dict:
        names = self.chart or tuple(f"x{k + 1}" for k in range(len(self.coords)))
        return {n: str(c) for n, c in zip(names, self.coords)}


def _values_for(f: RationalExpr, p) -> list[Fraction]:
    if isinstance(p, Point) and p.chart is not None:
        try:
            return [p.value_of(v) if v in p.chart else None for v in f.variables]
        except ValueError:
            raise UnknownVariable(f"point chart {p.chart} lacks variables of {f}") from None
    coords = list(p)
    if f.variables and len(coords) != len(f.variables):
        raise ValueError(f"point of length {len(coords)} does not match chart {list(f.variables)}")
    return [_frac(c) for c in coords] if f.variables else []


def _eval_poly(p, vals) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        t = _frac(c)
        for v, e in zip(vals, m):
            if e:
                if v is None:
                    raise UnknownVariable("point does not fix every variable of the expression")
                t *= v**e
        total += t
    return total


def evaluate(f: RationalExpr, p) -> GaussianRational:
    vals = _values_for(f, p)
    n = GaussianRational(_eval_poly(f.re, vals), _eval_poly(f.im, vals))
    if f.den.is_ground:
        return n
    d = _eval_poly(f.den, vals)
    if not d:
        raise PoleAtPoint(f"denominator of {f} vanishes at {list(map(str, vals))}", point=p)
    return GaussianRational(n.re / d, n.im / d)


def is_zero(f: RationalExpr) -> bool:
    return f.is_zero()


def I(variables: Sequence[str] = ()) -> RationalExpr:
    return RationalExpr.const(I_UNIT, variables)


def zeros(k: int, variables: Iterable[str]) -> tuple[RationalExpr, ...]:
    z = RationalExpr.const(0, tuple(variables))
    return (z,) * k
