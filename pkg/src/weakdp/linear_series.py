"""Plane linear series: base-point analysis through blow-up charts, and construction.

Homogeneous series live in Q[x,y,z]; affine charts use two variables (u,v).
The blow-up of the origin is covered by the charts

    Ct: (u,v) -> (uv, v)   exceptional divisor v = 0
    Cs: (u,v) -> (u, uv)   exceptional divisor u = 0

and a series pulled back through either chart is divided by the exceptional
factor to the power of its multiplicity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from weakdp import exact

CHARTS = ("Ux", "Uy", "Uz", "Cs", "Ct")


class SeriesError(ValueError):
    pass


class FieldError(SeriesError):
    pass


# ---------------------------------------------------------------------------
# polynomials

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with exact rational coefficients."""
    nvars: int
    terms: tuple[tuple[Exponent, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict[Exponent, Fraction] = {}
        for e, c in self.terms:
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars:
                raise SeriesError("exponent length does not match the variable count")
            merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
        clean = tuple(sorted(((e, c) for e, c in merged.items() if c != 0), reverse=True))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_dict(cls, nvars: int, d: dict) -> Polynomial:
        return cls(nvars, tuple(d.items()))

    @classmethod
    def constant(cls, nvars: int, c) -> Polynomial:
        return cls(nvars, (((0,) * nvars, Fraction(c)),))

    @classmethod
    def variable(cls, nvars: int, i: int) -> Polynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, ((tuple(e), Fraction(1)),))

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1) -> Polynomial:
        return cls(len(exponent), ((tuple(exponent), Fraction(coeff)),))

    def as_dict(self) -> dict[Exponent, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self.nvars, self.terms + other.terms)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial(self.nvars, tuple((e, c * Fraction(other)) for e, c in self.terms))
        out: dict[Exponent, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms, other.terms):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    @property
    def order(self) -> int:
        """Lowest total degree of a term (multiplicity at the origin)."""
        return min((sum(e) for e, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def compose(self, images: Sequence[Polynomial]) -> Polynomial:
        """Substitute variable i by images[i]."""
        n = images[0].nvars
        out = Polynomial(n)
        cache: dict[tuple[int, int], Polynomial] = {}
        for e, c in self.terms:
            term = Polynomial.constant(n, c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = images[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def derivative(self, exponent: Sequence[int]) -> Polynomial:
        """Mixed partial derivative of the given orders."""
        out = {}
        for e, c in self.terms:
            if all(a >= k for a, k in zip(e, exponent)):
                f = 1
                for a, k in zip(e, exponent):
                    f *= math.perm(a, k)
                ne = tuple(a - k for a, k in zip(e, exponent))
                out[ne] = out.get(ne, Fraction(0)) + c * f
        return Polynomial.from_dict(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((c * math.prod(Fraction(p) ** k for p, k in zip(point, e)) for e, c in self.terms), Fraction(0))

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.as_dict().get(tuple(exponent), Fraction(0))

    def to_sympy(self, symbols) -> sympy.Expr:
        return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(symbols, e)])
                           for e, c in self.terms])

    @classmethod
    def from_sympy(cls, expr, symbols) -> Polynomial:
        poly = sympy.Poly(sympy.expand(expr), *symbols)
        return cls(len(symbols), tuple((m, Fraction(int(c.p), int(c.q))) for m, c in poly.terms()))

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> Polynomial:
        symbols = sympy.symbols(list(names))
        expr = sympy.sympify(text, locals=dict(zip(names, symbols)))
        return cls.from_sympy(expr, symbols)

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            mag = abs(c)
            if mono:
                coef = "" if mag == 1 else exact.format_fraction(mag) + "*"
                body = coef + mono
            else:
                body = exact.format_fraction(mag)
            parts.append(("-" if c < 0 else "+") + body)
        text = " ".join(p[0] + " " + p[1:] for p in parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


XYZ = ("x", "y", "z")
UV = ("u", "v")


def polynomial_quotient(p: Polynomial, d: Polynomial) -> Polynomial:
    """Exact quotient p / d for a monomial d; a nonzero remainder is an error."""
    q, rem = _monomial_divmod(p, d)
    if not rem.is_zero():
        raise SeriesError("inexact polynomial division")
    return q


def truncated_quotient(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient p / d by a monomial, dropping the remainder (1 \\ y = 0)."""
    return _monomial_divmod(p, d)[0]


def _monomial_divmod(p: Polynomial, d: Polynomial) -> tuple[Polynomial, Polynomial]:
    if len(d.terms) != 1:
        raise SeriesError("division is only supported by a monomial")
    (de, dc), = d.terms
    q, r = {}, {}
    for e, c in p.terms:
        if all(a >= b for a, b in zip(e, de)):
            q[tuple(a - b for a, b in zip(e, de))] = c / dc
        else:
            r[e] = c
    return Polynomial.from_dict(p.nvars, q), Polynomial.from_dict(p.nvars, r)


def _uv(i: int) -> Polynomial:
    return Polynomial.variable(2, i)


def translate(g: Polynomial, sol: Sequence) -> Polynomial:
    """g(u + a, v + b): moves the point (a, b) to the origin."""
    a, b = (Fraction(x) for x in sol)
    return g.compose([_uv(0) + Polynomial.constant(2, a), _uv(1) + Polynomial.constant(2, b)])


def pullback_t(g: Polynomial) -> Polynomial:
    return g.compose([_uv(0) * _uv(1), _uv(1)])


def pullback_s(g: Polynomial) -> Polynomial:
    return g.compose([_uv(0), _uv(1) * _uv(0)])


def dehomogenize(g: Polynomial, chart: str) -> Polynomial:
    """Restrict a homogeneous polynomial to Uz (x,y), Uy (x,z) or Ux (y,z)."""
    one = Polynomial.constant(2, 1)
    imgs = {"Uz": [_uv(0), _uv(1), one], "Uy": [_uv(0), one, _uv(1)], "Ux": [one, _uv(0), _uv(1)]}[chart]
    return g.compose(imgs)


# ---------------------------------------------------------------------------
# series and base-point trees

@dataclass(frozen=True)
class LinearSeries:
    degree: int
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.nvars != 3 or not g.is_homogeneous() or (not g.is_zero() and g.degree != self.degree):
                raise SeriesError("generators must be homogeneous of the series degree")

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def coefficient_rows(self) -> list[list[Fraction]]:
        mons = monomials(self.degree)
        return [[g.coefficient(m) for m in mons] for g in self.generators]

    def same_span(self, other: LinearSeries) -> bool:
        return self.degree == other.degree and exact.same_row_space(self.coefficient_rows(), other.coefficient_rows())

    def format(self) -> list[str]:
        return [g.format(XYZ) for g in self.generators]

    @classmethod
    def parse(cls, degree: int, generators: Iterable[str]) -> LinearSeries:
        return cls(degree, tuple(Polynomial.parse(g, XYZ) for g in generators))


def monomials(degree: int) -> list[Exponent]:
    """x^a y^b z^c with a+b+c = degree, ordered by a then b."""
    return [(a, b, degree - a - b) for a in range(degree + 1) for b in range(degree - a + 1)]


@dataclass(frozen=True)
class BasePoint:
    """Node of a prescribed base-point tree: point, multiplicity, Ct and Cs children.

    Multiplicity 0 is allowed for a node that only carries children: it
    imposes no condition of its own.
    """
    solution: tuple[Fraction, Fraction]
    multiplicity: int = 1
    t: tuple[BasePoint, ...] = ()
    s: tuple[BasePoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "solution", tuple(Fraction(x) for x in self.solution))
        object.__setattr__(self, "t", tuple(self.t))
        object.__setattr__(self, "s", tuple(self.s))
        if self.multiplicity < 0:
            raise SeriesError("prescribed multiplicities must be nonnegative")


@dataclass(frozen=True)
class BasePointRecord:
    chart: str
    depth: int
    solution: tuple[Fraction, Fraction]
    multiplicity: int                       # -1 marks a point already seen in an earlier chart
    t_children: tuple[BasePointRecord, ...] = ()
    s_children: tuple[BasePointRecord, ...] = ()

    @property
    def genuine(self) -> bool:
        return self.multiplicity >= 1

    def as_tree(self) -> BasePoint:
        return BasePoint(self.solution, self.multiplicity,
                         tuple(c.as_tree() for c in self.t_children if c.genuine),
                         tuple(c.as_tree() for c in self.s_children if c.genuine))


@dataclass(frozen=True)
class BasePointForest:
    x: tuple[BasePointRecord, ...]
    y: tuple[BasePointRecord, ...]
    z: tuple[BasePointRecord, ...]

    def genuine(self, chart: str) -> tuple[BasePointRecord, ...]:
        return tuple(r for r in getattr(self, chart) if r.genuine)

    def as_trees(self) -> tuple[tuple[BasePoint, ...], tuple[BasePoint, ...], tuple[BasePoint, ...]]:
        """Prescription [B_z, B_y, B_x] reproducing the genuine base points."""
        return tuple(tuple(r.as_tree() for r in self.genuine(c)) for c in ("z", "y", "x"))

    def count(self) -> int:
        def walk(rs):
            return sum(1 + walk(r.t_children) + walk(r.s_children) for r in rs if r.genuine)
        return walk(self.x) + walk(self.y) + walk(self.z)


# ---------------------------------------------------------------------------
# zero sets

def zero_set(G: Sequence[Polynomial], extra: Polynomial | None = None) -> list[tuple[Fraction, Fraction]]:
    """Common rational zeros of affine polynomials in (u,v).

    ``extra`` is an additional equation, used to restrict to the exceptional
    divisor in the blow-up charts. Points with irrational coordinates raise
    FieldError.
    """
    polys = [g for g in G if not g.is_zero()]
    if extra is not None:
        polys.append(extra)
    if not polys:
        raise SeriesError("zero set of the zero series is not finite")
    u, v = sympy.symbols("u v")
    exprs = [p.to_sympy((u, v)) for p in polys]
    basis = sympy.groebner(exprs, u, v, order="lex", domain=sympy.QQ)
    if list(basis.exprs) == [1]:
        return []
    # lex order puts the eliminant in v alone last
    elim = [b for b in basis.exprs if sympy.Poly(b, u, v).degree(u) == 0]
    if not elim:
        raise SeriesError("base locus is not finite")
    out = []
    for vv in rational_roots(sympy.Poly(elim[0], v)):
        g = None
        for b in basis.exprs:
            pb = sympy.Poly(sympy.Poly(b, u, v).as_expr().subs(v, vv), u)
            g = pb if g is None else sympy.gcd(g, pb)
        if g is None or g.is_zero:
            raise SeriesError("base locus is not finite")
        for uu in rational_roots(g):
            out.append((Fraction(int(uu.p), int(uu.q)), Fraction(int(vv.p), int(vv.q))))
    return sorted(set(out))


def rational_roots(p: sympy.Poly) -> list[sympy.Rational]:
    if p.degree() <= 0:
        return []
    _, factors = sympy.factor_list(p.as_expr(), *p.gens, domain=sympy.QQ)
    roots = []
    for f, _mult in factors:
        fp = sympy.Poly(f, *p.gens)
        if fp.degree() == 1:
            a, b = fp.all_coeffs()
            roots.append(sympy.Rational(-b, a))
        elif fp.degree() > 1:
            raise FieldError("base point outside coefficient field")
    return roots


def chart_overlap(sol: tuple[Fraction, Fraction], chart: str) -> bool:
    """True when the point was already reported in an earlier chart.

    Charts are analysed in the order Uz, Uy, Ux, and Ct before Cs.
    """
    a, b = sol
    if chart in ("Uz", "Ct"):
        return False
    if chart in ("Uy", "Cs"):
        return b != 0
    if chart == "Ux":
        return a != 0 or b != 0
    raise SeriesError(f"unknown chart {chart!r}")


def multiplicity(G: Sequence[Polynomial]) -> int:
    """Multiplicity at the origin of a general member of the series."""
    orders = [g.order for g in G if not g.is_zero()]
    if not orders:
        raise SeriesError("zero series has no multiplicity")
    return min(orders)


def get_base_points_affine(G: Sequence[Polynomial], depth: int, chart: str,
                           max_depth: int = 12) -> tuple[BasePointRecord, ...]:
    if depth > max_depth:
        raise SeriesError("base point recursion does not terminate")
    extra = {"Ct": _uv(1), "Cs": _uv(0)}.get(chart)
    out = []
    for sol in zero_set(G, extra):
        if chart_overlap(sol, chart):
            out.append(BasePointRecord(chart, depth, sol, -1))
            continue
        moved = [translate(g, sol) for g in G]
        mul = multiplicity(moved)
        vm = Polynomial.monomial((0, mul))
        um = Polynomial.monomial((mul, 0))
        lt = get_base_points_affine([polynomial_quotient(pullback_t(g), vm) for g in moved], depth + 1, "Ct", max_depth)
        ls = get_base_points_affine([polynomial_quotient(pullback_s(g), um) for g in moved], depth + 1, "Cs", max_depth)
        out.append(BasePointRecord(chart, depth, sol, mul, lt, ls))
    return tuple(out)


def get_base_points(series: LinearSeries) -> BasePointForest:
    """Simple and infinitely near base points in the charts Uz, Uy, Ux."""
    gens = [g for g in series.generators if not g.is_zero()]
    if not gens:
        raise SeriesError("empty series")
    syms = sympy.symbols("x y z")
    common = sympy.gcd_list([g.to_sympy(syms) for g in gens])
    if sympy.Poly(common, *syms).total_degree() > 0:
        raise SeriesError("series has a fixed component")
    z = get_base_points_affine([dehomogenize(g, "Uz") for g in gens], 0, "Uz")
    y = get_base_points_affine([dehomogenize(g, "Uy") for g in gens], 0, "Uy")
    x = get_base_points_affine([dehomogenize(g, "Ux") for g in gens], 0, "Ux")
    return BasePointForest(x, y, z)


# ---------------------------------------------------------------------------
# construction

def _condition_rows(B: Sequence[BasePoint], series: list[Polynomial], rows: list[list[Polynomial]]):
    for node in B:
        f = [translate(g, node.solution) for g in series]
        for a in range(node.multiplicity):
            for b in range(node.multiplicity - a):
                rows.append([h.derivative((a, b)) for h in f])
        vm = Polynomial.monomial((0, node.multiplicity))
        um = Polynomial.monomial((node.multiplicity, 0))
        _condition_rows(node.t, [truncated_quotient(pullback_t(h), vm) for h in f], rows)
        _condition_rows(node.s, [truncated_quotient(pullback_s(h), um) for h in f], rows)


def evaluation_matrix(degree: int, trees: Sequence[Sequence[BasePoint]]) -> list[list[Fraction]]:
    """Linear conditions on the monomial coefficients imposed by [B_z, B_y, B_x]."""
    if degree < 0:
        raise SeriesError("degree must be nonnegative")
    bz, by, bx = (tuple(t) for t in trees)
    mons = [Polynomial.monomial(m) for m in monomials(degree)]
    rows: list[list[Polynomial]] = []
    for chart, B in (("Uz", bz), ("Uy", by), ("Ux", bx)):
        _condition_rows(B, [dehomogenize(g, chart) for g in mons], rows)
    origin = (0, 0)
    return [[h.evaluate(origin) for h in row] for row in rows]


def get_linear_series(degree: int, trees: Sequence[Sequence[BasePoint]]) -> LinearSeries:
    """Series of the given degree through the prescribed base-point trees."""
    mons = monomials(degree)
    M = evaluation_matrix(degree, trees)
    kernel = exact.nullspace(M, len(mons)) if M else [
        [Fraction(int(i == j)) for j in range(len(mons))] for i in range(len(mons))]
    if not kernel:
        raise SeriesError("no series of this degree satisfies the conditions")
    basis = exact.rref(kernel)[0]
    gens = tuple(Polynomial(3, tuple((m, c) for m, c in zip(mons, row))) for row in basis)
    return LinearSeries(degree, gens)


# ---------------------------------------------------------------------------
# JSON helpers

def _frac(text) -> Fraction:
    return Fraction(str(text))


def tree_to_json(B: Sequence[BasePoint]) -> list:
    return [{"sol": [exact.format_fraction(x) for x in n.solution], "mult": n.multiplicity,
             "t": tree_to_json(n.t), "s": tree_to_json(n.s)} for n in B]


def tree_from_json(data) -> tuple[BasePoint, ...]:
    return tuple(BasePoint((_frac(d["sol"][0]), _frac(d["sol"][1])), int(d.get("mult", 1)),
                           tree_from_json(d.get("t", [])), tree_from_json(d.get("s", []))) for d in data)


def trees_from_json(data) -> tuple[tuple[BasePoint, ...], ...]:
    """``{"z": [...], "y": [...], "x": [...]}`` -> [B_z, B_y, B_x]."""
    return tuple(tree_from_json(data.get(c, [])) for c in ("z", "y", "x"))


def trees_to_json(trees) -> dict:
    return {c: tree_to_json(t) for c, t in zip(("z", "y", "x"), trees)}


def record_to_json(r: BasePointRecord) -> dict:
    return {"chart": r.chart, "depth": r.depth, "sol": [exact.format_fraction(x) for x in r.solution],
            "mult": r.multiplicity, "t": [record_to_json(c) for c in r.t_children],
            "s": [record_to_json(c) for c in r.s_children]}


def forest_to_json(f: BasePointForest) -> dict:
    return {c: [record_to_json(r) for r in getattr(f, c)] for c in ("x", "y", "z")}


def series_to_json(s: LinearSeries) -> dict:
    return {"degree": s.degree,
            "generators": [[{"exponents": list(e), "coeff": exact.format_fraction(c)} for e, c in g.terms]
                           for g in s.generators],
            "text": s.format()}


def series_from_json(data) -> LinearSeries:
    gens = []
    for g in data["generators"]:
        if isinstance(g, str):
            gens.append(Polynomial.parse(g, XYZ))
        else:
            gens.append(Polynomial(3, tuple((tuple(t["exponents"]), _frac(t["coeff"])) for t in g)))
    return LinearSeries(int(data["degree"]), tuple(gens))
