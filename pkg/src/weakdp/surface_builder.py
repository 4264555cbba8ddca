"""Weak Del Pezzo surfaces from geometric C1 labels, as plane cubic series.

A label prescribes which positive roots are effective:

    ab    p_b is infinitely near p_a
    1abc  p_a, p_b, p_c lie on a line
    2ab   the six points other than p_a, p_b lie on a conic
    30a   the eight points lie on a cubic with a double point at p_a

Points are placed one at a time in a seeded random way; a point that
completes a prescribed root is solved for exactly. The configuration is then
checked against every positive root of the kit, and the cubic series through
the points parametrizes the surface.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from weakdp import exact
from weakdp.delpezzo_sets import SurfaceLattice, indecomposable_one_set, irreducible_two_set
from weakdp.lattice_core import C1Label, LatticeError, PicardVector, order_key
from weakdp.linear_series import (
    BasePoint,
    FieldError,
    LinearSeries,
    Polynomial,
    SeriesError,
    dehomogenize,
    evaluation_matrix,
    get_linear_series,
    monomials,
    polynomial_quotient,
    pullback_s,
    pullback_t,
    rational_roots,
    series_to_json,
    translate,
    zero_set,
)
from weakdp.root_classification import PREFERENCE, candidate_labels, generated_mask, invariant, root_table, z_sets

DEFAULT_RETRIES = 25


class BuildError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configurations

@dataclass(frozen=True)
class PlanePoint:
    """The point (x : y : 1)."""
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))


@dataclass(frozen=True)
class InfinitelyNear:
    """A point on the exceptional curve over ``parent`` (a 1-based point index)."""
    parent: int
    chart: str
    coords: tuple[Fraction, Fraction]

    def __post_init__(self):
        if self.chart not in ("Ct", "Cs"):
            raise BuildError("infinitely near points live in chart Ct or Cs")
        c = tuple(Fraction(x) for x in self.coords)
        if (self.chart == "Ct" and c[1] != 0) or (self.chart == "Cs" and c[0] != 0):
            raise BuildError("infinitely near point is not on the exceptional curve")
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class PointConfiguration:
    rank: int
    points: tuple[PlanePoint | InfinitelyNear, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) != self.rank:
            raise BuildError("configuration needs one entry per point")
        for i, p in enumerate(self.points, start=1):
            if isinstance(p, InfinitelyNear) and not 1 <= p.parent < i:
                raise BuildError("an infinitely near point must follow its parent")

    def parent(self, i: int) -> int | None:
        p = self.points[i - 1]
        return p.parent if isinstance(p, InfinitelyNear) else None

    def is_descendant(self, child: int, ancestor: int) -> bool:
        p = self.parent(child)
        while p is not None:
            if p == ancestor:
                return True
            p = self.parent(p)
        return False

    def tree(self, mults: dict[int, int] | Sequence[int] | None = None) -> tuple[BasePoint, ...]:
        """B_z for the given point multiplicities (default 1 each)."""
        return _tree(self.points, _mult_map(mults, self.rank))

    def to_json(self) -> list:
        out = []
        for p in self.points:
            if isinstance(p, PlanePoint):
                out.append({"point": [exact.format_fraction(p.x), exact.format_fraction(p.y), "1"]})
            else:
                out.append({"parent": p.parent, "chart": p.chart,
                            "coords": [exact.format_fraction(c) for c in p.coords]})
        return out

    @classmethod
    def from_json(cls, data: list) -> PointConfiguration:
        pts = []
        for d in data:
            if "point" in d:
                x, y, z = (Fraction(str(c)) for c in d["point"])
                if z == 0:
                    raise BuildError("points at infinity are not supported")
                pts.append(PlanePoint(x / z, y / z))
            else:
                pts.append(InfinitelyNear(int(d["parent"]), d["chart"], tuple(Fraction(str(c)) for c in d["coords"])))
        return cls(len(pts), tuple(pts))


def _mult_map(mults, r: int) -> dict[int, int]:
    if mults is None:
        return {i: 1 for i in range(1, r + 1)}
    if isinstance(mults, dict):
        return {i: mults.get(i, 0) for i in range(1, r + 1)}
    return {i: mults[i - 1] for i in range(1, r + 1)}


def _tree(points, mults: dict[int, int], keep=None) -> tuple[BasePoint, ...]:
    """Nested base points; nodes with no multiplicity below them are dropped."""
    keep = set(mults) if keep is None else keep
    children: dict[int, list[int]] = {}
    roots = []
    for i, p in enumerate(points, start=1):
        if i not in keep:
            continue
        if isinstance(p, InfinitelyNear):
            children.setdefault(p.parent, []).append(i)
        else:
            roots.append(i)

    def weight(i: int) -> int:
        return mults.get(i, 0) + sum(weight(c) for c in children.get(i, []))

    def node(i: int, coords) -> BasePoint:
        kids = [c for c in children.get(i, []) if weight(c) > 0]
        t = tuple(node(c, points[c - 1].coords) for c in kids if points[c - 1].chart == "Ct")
        s = tuple(node(c, points[c - 1].coords) for c in kids if points[c - 1].chart == "Cs")
        return BasePoint(coords, mults.get(i, 0), t, s)

    return tuple(node(i, (points[i - 1].x, points[i - 1].y)) for i in roots if weight(i) > 0)


# ---------------------------------------------------------------------------
# roots as curve classes

def _class_data(v: PicardVector) -> tuple[int, dict[int, int]]:
    d = v.coeffs[0]
    return d, {i: -c for i, c in enumerate(v.coeffs[1:], start=1) if c}


def _support(v: PicardVector) -> set[int]:
    return {i for i, c in enumerate(v.coeffs[1:], start=1) if c}


def _curves(points, d: int, mults: dict[int, int], placed: set[int]) -> list[list[Fraction]]:
    """Kernel of the conditions of degree d with the given multiplicities."""
    tree = _tree(points, mults, keep=placed)
    M = evaluation_matrix(d, (tree, (), ()))
    n = len(monomials(d))
    if not M:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return exact.nullspace(M, n)


def is_effective(config: PointConfiguration, root: PicardVector) -> bool:
    """Whether a positive root class carries an effective curve on the blow-up."""
    d, m = _class_data(root)
    if d == 0:
        a = next(i for i, c in m.items() if c < 0)
        b = next(i for i, c in m.items() if c > 0)
        return config.is_descendant(b, a)
    return bool(_curves(config.points, d, m, set(range(1, config.rank + 1))))


def effective_roots(config: PointConfiguration) -> list[PicardVector]:
    t = root_table(config.rank)
    return [v for v in t.roots(t.positive) if is_effective(config, v)]


def _simple(roots: Sequence[PicardVector]) -> list[PicardVector]:
    """Members that are not a sum of two members."""
    s = set(roots)
    return sorted((v for v in roots if not any((v - w) in s for w in roots if w != v)),
                  key=order_key, reverse=True)


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    effective_roots: tuple[PicardVector, ...]
    simple_roots: tuple[PicardVector, ...]
    unexpected: tuple[PicardVector, ...]
    missing: tuple[PicardVector, ...]
    equivalent: bool

    def describe(self) -> str:
        if self.ok:
            return "C1 object matches the label"
        parts = []
        if self.unexpected:
            parts.append("unexpected effective roots: " + ", ".join(map(str, self.unexpected)))
        if self.missing:
            parts.append("missing effective roots: " + ", ".join(map(str, self.missing)))
        return "; ".join(parts) or "effective roots generate a different subsystem"


def verify_configuration(config: PointConfiguration, label: C1Label) -> VerificationReport:
    if config.rank != label.rank:
        raise BuildError("configuration and label have different ranks")
    r = label.rank
    t = root_table(r)
    found = effective_roots(config)
    expected = t.roots(generated_mask(label.roots, r) & t.positive)
    fs, es = set(found), set(expected)
    key = lambda vs: tuple(sorted(vs, key=order_key, reverse=True))  # noqa: E731
    unexpected, missing = key(fs - es), key(es - fs)
    simple = _simple(found)
    try:
        same = invariant(simple, r).key == invariant(label.roots, r).key
    except LatticeError:
        same = False
    return VerificationReport(not unexpected and not missing and same, key(found), tuple(simple),
                              unexpected, missing, same)


# ---------------------------------------------------------------------------
# building

@dataclass(frozen=True)
class BuiltSurface:
    lattice: SurfaceLattice
    parametrization: LinearSeries
    configuration: PointConfiguration
    report: VerificationReport = field(compare=False)

    @property
    def degree(self) -> int:
        return 9 - self.configuration.rank

    @property
    def effective_basis(self) -> tuple[PicardVector, ...]:
        return self.report.simple_roots

    def lines(self) -> tuple[PicardVector, ...]:
        return indecomposable_one_set(self.lattice)

    def conic_families(self) -> tuple[PicardVector, ...]:
        return irreducible_two_set(self.lattice)


def verify_c1_object(s: BuiltSurface) -> VerificationReport:
    return verify_configuration(s.configuration, s.lattice.effective_basis)


def _rand(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


class _Unsolvable(Exception):
    pass


def _order(label: C1Label, rng: random.Random | None = None) -> list[int]:
    """Placement order with parents first.

    Without ``rng``: double points of 30a first, then by index. With ``rng``
    the remaining points come in random order, which helps when a point
    would otherwise have to satisfy too many constraints at once.
    """
    r = label.rank
    first = [e.indices[0] for e in label.elements if e.kind == "30a"]
    parents = {}
    for v in label.roots:
        d, m = _class_data(v)
        if d == 0:
            parents[next(i for i, c in m.items() if c > 0)] = next(i for i, c in m.items() if c < 0)
    rest = list(range(1, r + 1))
    if rng is not None:
        rng.shuffle(rest)
    out: list[int] = []

    def add(i):
        if i in out:
            return
        if i in parents:
            add(parents[i])
        out.append(i)

    for i in first + rest:
        add(i)
    return out


def _local_series(C: Polynomial, points, path: list[int], mults: dict[int, int]) -> Polynomial:
    """Equation of C in the chart centred at the last point of ``path``."""
    f = translate(dehomogenize(C, "Uz"), (points[path[0] - 1].x, points[path[0] - 1].y))
    for prev, cur in zip(path, path[1:]):
        p = points[cur - 1]
        m = mults.get(prev, 0)
        if p.chart == "Ct":
            f = polynomial_quotient(pullback_t(f), Polynomial.monomial((0, m)))
        else:
            f = polynomial_quotient(pullback_s(f), Polynomial.monomial((m, 0)))
        f = translate(f, p.coords)
    return f


def _path(points, i: int) -> list[int]:
    out = [i]
    while isinstance(points[out[-1] - 1], InfinitelyNear):
        out.append(points[out[-1] - 1].parent)
    return out[::-1]


def _poly(row, d: int) -> Polynomial:
    return Polynomial(3, tuple(zip(monomials(d), row)))


def _constraint_curves(points, roots, new: int, placed: set[int]) -> list[tuple[Polynomial, dict[int, int]]]:
    """Curves the new point must lie on, one per prescribed root it completes."""
    out = []
    for v in roots:
        d, m = _class_data(v)
        if d == 0 or new not in _support(v) or not _support(v) <= placed | {new}:
            continue
        if m[new] != 1:
            raise _Unsolvable()
        rest = {i: c for i, c in m.items() if i != new}
        K = _curves(points, d, rest, placed)
        if not K:
            raise _Unsolvable()
        if len(K) == 1:
            out.append((_poly(K[0], d), rest))
    return out


def _point_on_curve(C: Polynomial, points, placed: set[int], rng: random.Random) -> PlanePoint:
    f = dehomogenize(C, "Uz")
    d = f.degree
    if d <= 0:
        raise _Unsolvable()
    centres = [(Fraction(0), Fraction(0))] if d == 1 else []
    centres += [(points[i - 1].x, points[i - 1].y) for i in sorted(placed)
                if isinstance(points[i - 1], PlanePoint)]
    for q in centres:
        g = translate(f, q)
        if d > 1 and g.order != d - 1:
            continue
        if d == 1:
            q = (_rand(rng), _rand(rng))
            g = translate(f, q)
        for _ in range(5):
            k = _rand(rng)
            s = sympy.Symbol("s")
            line = g.to_sympy((s, k * s))
            poly = sympy.Poly(sympy.expand(line), s)
            coeffs = dict(zip([m[0] for m in poly.monoms()], poly.coeffs()))
            a, b = coeffs.get(d, 0), coeffs.get(d - 1, 0)
            if a != 0:
                t = Fraction(int(sympy.Rational(-b / a).p), int(sympy.Rational(-b / a).q))
                return PlanePoint(q[0] + t, q[1] + k * t)
    raise _Unsolvable()


def _place_plane(points, curves, placed, rng) -> PlanePoint:
    taken = {(p.x, p.y) for i, p in enumerate(points, start=1) if i in placed and isinstance(p, PlanePoint)}
    if not curves:
        for _ in range(50):
            p = PlanePoint(_rand(rng), _rand(rng))
            if (p.x, p.y) not in taken:
                return p
        raise _Unsolvable()
    polys = [c for c, _ in curves]
    syms = sympy.symbols("x y z")
    common = sympy.gcd_list([p.to_sympy(syms) for p in polys])
    if len(polys) == 1 or sympy.Poly(common, *syms).total_degree() > 0:
        C = polys[0] if len(polys) == 1 else Polynomial.from_sympy(common, syms)
        for _ in range(20):
            p = _point_on_curve(C, points, placed, rng)
            if (p.x, p.y) not in taken:
                return p
        raise _Unsolvable()
    try:
        cands = [s for s in zero_set([dehomogenize(p, "Uz") for p in polys]) if s not in taken]
    except FieldError:
        raise _Unsolvable()
    if not cands:
        raise _Unsolvable()
    x, y = rng.choice(cands)
    return PlanePoint(x, y)


def _place_near(points, parent: int, curves, new: int, rng, attempt: int) -> InfinitelyNear:
    u = sympy.Symbol("u")
    path = _path(points, parent)
    nested = isinstance(points[parent - 1], InfinitelyNear)
    taken = {p.coords for p in points if isinstance(p, InfinitelyNear) and p.parent == parent}
    if not curves:
        c = Fraction(0) if attempt == 0 else _rand(rng)
        if ("Ct", (c, Fraction(0))) in {("Ct", t) for t in taken}:
            c = _rand(rng)
        return InfinitelyNear(parent, "Ct", (c, Fraction(0)))
    cands = None
    for C, mults in curves:
        f = _local_series(C, points, path, mults)
        m = mults.get(parent, 0)
        on_e = polynomial_quotient(pullback_t(f), Polynomial.monomial((0, m)))
        g = sympy.Poly(on_e.to_sympy((u, sympy.Integer(0))), u)
        opts = set()
        if not g.is_zero:
            try:
                opts = {("Ct", (Fraction(int(r.p), int(r.q)), Fraction(0))) for r in rational_roots(g)}
            except FieldError:
                raise _Unsolvable()
        s_side = polynomial_quotient(pullback_s(f), Polynomial.monomial((m, 0)))
        if s_side.evaluate((0, 0)) == 0 and not nested:
            opts.add(("Cs", (Fraction(0), Fraction(0))))
        if g.is_zero:
            continue
        cands = opts if cands is None else cands & opts
    if cands is None:
        return InfinitelyNear(parent, "Ct", (_rand(rng), Fraction(0)))
    cands = sorted(c for c in cands if c[1] not in taken)
    if not cands:
        raise _Unsolvable()
    chart, coords = rng.choice(cands)
    return InfinitelyNear(parent, chart, coords)


def sample_configuration(label: C1Label, rng: random.Random, attempt: int = 0) -> PointConfiguration:
    """One seeded attempt at a configuration realizing the label's roots."""
    r = label.rank
    roots = label.roots
    parents = {}
    for v in roots:
        d, m = _class_data(v)
        if d == 0:
            parents[next(i for i, c in m.items() if c > 0)] = next(i for i, c in m.items() if c < 0)
    points: list = [None] * r
    placed: set[int] = set()
    for i in _order(label, rng if attempt else None):
        curves = _constraint_curves(points, roots, i, placed)
        if i in parents:
            points[i - 1] = _place_near(points, parents[i], curves, i, rng, attempt)
        else:
            points[i - 1] = _place_plane(points, curves, placed, rng)
        placed.add(i)
    return PointConfiguration(r, tuple(points))


def _finish(label: C1Label, config: PointConfiguration, report: VerificationReport) -> BuiltSurface:
    series = get_linear_series(3, (config.tree(), (), ()))
    return BuiltSurface(SurfaceLattice(label), series, config, report)


def equivalent_labels(label: C1Label, limit: int = 12) -> list[C1Label]:
    """Other geometric labels of the same class, simplest constraints first."""
    r = label.rank
    key = invariant(label.roots, r).key
    zs = z_sets()
    seen = {label.text}
    out = []
    for which in PREFERENCE:
        for cand in candidate_labels(zs[which], r):
            if len(cand) != len(label) or any(e.sign < 0 for e in cand):
                continue
            lab = C1Label(cand, r)
            if lab.text in seen or invariant(lab.roots, r).key != key:
                continue
            seen.add(lab.text)
            out.append(lab)
    cost = lambda lab: (sum(e.kind == "30a" for e in lab.elements),  # noqa: E731
                        sum(e.kind == "2ab" for e in lab.elements))
    return sorted(out, key=cost)[:limit]


def _sample(label: C1Label, rng: random.Random, retries: int) -> tuple[PointConfiguration | None, VerificationReport | None, bool]:
    built_any = False
    last = None
    for attempt in range(retries):
        try:
            config = sample_configuration(label, rng, attempt)
        except (_Unsolvable, SeriesError):
            continue
        built_any = True
        report = verify_configuration(config, label)
        if report.ok:
            return config, report, True
        last = report
    return None, last, built_any


def build_surface(label: C1Label | str, seed: int = 0, points: PointConfiguration | None = None,
                  retries: int = DEFAULT_RETRIES, alternatives: bool = True) -> BuiltSurface:
    """Realize a geometric label by a point configuration and its cubic series.

    With ``points`` given the configuration is only verified. Otherwise it is
    sampled from ``seed`` with up to ``retries`` attempts; if the label itself
    cannot be realized, equivalent labels of the same class are tried and the
    surface lattice records the label actually realized.
    """
    if isinstance(label, str):
        label = C1Label.parse(label)
    if not label.geometric:
        raise BuildError("label must be geometric")
    if label.rank < 2:
        raise BuildError("surfaces need rank >= 2")
    if points is not None:
        report = verify_configuration(points, label)
        if not report.ok:
            raise BuildError("configuration does not realize the label: " + report.describe())
        return _finish(label, points, report)
    rng = random.Random(seed)
    config, report, built_any = _sample(label, rng, retries)
    if config is not None:
        return _finish(label, config, report)
    first = report
    if alternatives:
        for alt in equivalent_labels(label):
            config, report, built = _sample(alt, rng, max(4, retries // 4))
            built_any = built_any or built
            first = first or report
            if config is not None:
                return _finish(alt, config, report)
    if not built_any:
        raise BuildError("constraints unsatisfiable over field")
    raise BuildError(f"genericity failure after {retries} retries ({first.describe()})")


def degree_four_example() -> PointConfiguration:
    """p1..p4 = (0:0:1), (1:0:1), (2:0:1), (5:7:1); p5 infinitely near p4 along y = 7."""
    return PointConfiguration(5, (PlanePoint(0, 0), PlanePoint(1, 0), PlanePoint(2, 0), PlanePoint(5, 7),
                                  InfinitelyNear(4, "Cs", (0, 0))))


def surface_to_json(s: BuiltSurface) -> dict:
    return {
        "label": s.lattice.effective_basis.text,
        "degree": s.degree,
        "configuration": s.configuration.to_json(),
        "series": series_to_json(s.parametrization),
        "effective_roots": [str(v) for v in s.report.effective_roots],
        "effective_basis": [str(v) for v in s.report.simple_roots],
        "lines": [str(v) for v in s.lines()],
        "conic_families": [str(v) for v in s.conic_families()],
    }
