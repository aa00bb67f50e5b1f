"""Lattice polytopes in the t-exponent space and the admissibility test.

Polytopes are kept as generator sets; the convex hull is implied.  Hull
membership is exact: a closed interval check in dimension one and an exact
rational LP feasibility problem otherwise.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .laurent import LaurentPoly

Point = tuple[int, ...]


@dataclass(frozen=True)
class LatticePolytope:
    generators: tuple[Point, ...]
    dim: int

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("a lattice polytope needs at least one generator")
        gens = tuple(sorted(set(tuple(g) for g in self.generators)))
        if any(len(g) != self.dim for g in gens):
            raise ValueError("generator of wrong dimension")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def interval(cls, lo: int, hi: int) -> LatticePolytope:
        return cls(((lo,), (hi,)), 1)

    def bounding_box(self) -> tuple[Point, Point]:
        cols = list(zip(*self.generators))
        return tuple(min(c) for c in cols), tuple(max(c) for c in cols)

    def vertices(self) -> tuple[Point, ...]:
        """Generators that are extreme points of the hull."""
        if self.dim == 1:
            lo, hi = self.bounding_box()
            return tuple(sorted({lo, hi}))
        gens = self.generators
        keep = []
        for i, g in enumerate(gens):
            rest = gens[:i] + gens[i + 1 :]
            if not rest or not _in_hull_lp(rest, g):
                keep.append(g)
        return tuple(keep)

    def contains(self, point: Sequence[int | Fraction]) -> bool:
        point = tuple(point)
        if len(point) != self.dim:
            raise ValueError("point of wrong dimension")
        if self.dim == 1:
            return _in_interval(self.generators, point)
        lo, hi = self.bounding_box()
        if any(x < a or x > b for x, a, b in zip(point, lo, hi)):
            return False
        return _in_hull_lp(self.vertices(), point)

    def contains_lp(self, point: Sequence[int | Fraction]) -> bool:
        """Membership through the general LP path, whatever the dimension."""
        return _in_hull_lp(self.generators, tuple(point))

    def interior_contains(self, point: Sequence[int]) -> bool:
        """Strict interior membership (the hull must be full-dimensional)."""
        point = tuple(point)
        if self.dim == 1:
            (lo,), (hi,) = self.bounding_box()
            return lo < point[0] < hi
        return _in_relative_interior_lp(self.vertices(), point) and self.is_full_dimensional()

    def is_full_dimensional(self) -> bool:
        base = self.generators[0]
        rows = [[Fraction(x - y) for x, y in zip(g, base)] for g in self.generators[1:]]
        return _rank(rows) == self.dim

    def interior_lattice_points(self) -> list[Point]:
        lo, hi = self.bounding_box()
        ranges = [range(a + 1, b) for a, b in zip(lo, hi)]
        return [pt for pt in itertools.product(*ranges) if self.interior_contains(pt)]


def _in_interval(gens: Sequence[Point], point: Point) -> bool:
    xs = [g[0] for g in gens]
    return min(xs) <= point[0] <= max(xs)


def _in_hull_lp(gens: Sequence[Point], point: Sequence) -> bool:
    return _lp_feasible(tuple(gens), tuple(Fraction(x) for x in point), False)


def _in_relative_interior_lp(gens: Sequence[Point], point: Sequence) -> bool:
    return _lp_feasible(tuple(gens), tuple(Fraction(x) for x in point), True)


@lru_cache(maxsize=65536)
def _lp_feasible(gens: tuple[Point, ...], point: tuple[Fraction, ...], strict: bool) -> bool:
    # point = sum lam_i g_i, sum lam_i = 1, lam_i >= 0.  With strict, write
    # lam_i = mu_i + eps and ask whether max eps > 0.
    n = len(gens)
    dim = len(point)
    rows = [[Fraction(g[d]) for g in gens] for d in range(dim)] + [[Fraction(1)] * n]
    rhs = list(point) + [Fraction(1)]
    if not strict:
        return simplex_max(rows, rhs, [Fraction(0)] * n) is not None
    rows = [row + [sum(row, Fraction(0))] for row in rows]
    best = simplex_max(rows, rhs, [Fraction(0)] * n + [Fraction(1)])
    return best is not None and best > 0


def simplex_max(rows: list[list[Fraction]], rhs: list[Fraction], cost: list[Fraction]) -> Fraction | None:
    """Maximise ``cost . x`` over ``rows x = rhs, x >= 0`` exactly.

    Returns None when infeasible.  The problems posed here are bounded.
    Two-phase tableau simplex with Bland's rule, so it cannot cycle.
    """
    m, n = len(rows), len(cost)
    # flip rows so rhs >= 0, then append one artificial per row
    tab = []
    for row, b in zip(rows, rhs):
        sign = -1 if b < 0 else 1
        tab.append([sign * a for a in row] + [Fraction(0)] * m + [sign * b])
    for i in range(m):
        tab[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r: int, c: int) -> None:
        pr = tab[r]
        pv = pr[c]
        tab[r] = pr = [a / pv for a in pr]
        for i in range(m):
            if i != r and tab[i][c] != 0:
                f = tab[i][c]
                tab[i] = [a - f * b for a, b in zip(tab[i], pr)]
        basis[r] = c

    def run(obj: list[Fraction], allowed: int) -> Fraction:
        # maximise obj . x restricted to columns < allowed
        while True:
            # reduced costs
            red = [obj[j] - sum(obj[basis[i]] * tab[i][j] for i in range(m)) for j in range(allowed)]
            enter = next((j for j in range(allowed) if red[j] > 0 and j not in basis), None)
            if enter is None:
                return sum(obj[basis[i]] * tab[i][-1] for i in range(m))
            ratios = [(tab[i][-1] / tab[i][enter], basis[i], i) for i in range(m) if tab[i][enter] > 0]
            if not ratios:
                raise ArithmeticError("unbounded LP")
            _, _, leave = min(ratios)
            pivot(leave, enter)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    if run(phase1, width) < 0:
        return None
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(tab)
    obj = list(cost) + [Fraction(0)] * (width - n)
    return run(obj, n)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def newton_polytope_t(a: LaurentPoly) -> LatticePolytope:
    """Newton polytope of ``a`` with respect to the t-variables only."""
    if a.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    return LatticePolytope(tuple(a.t_parts()), a.nt)


def weighted_minkowski_sum(polys: Sequence[LatticePolytope], weights: Sequence[int]) -> LatticePolytope:
    """Hull of all ``sum w_k * v_k`` over vertex choices ``v_k``."""
    if len(polys) != len(weights):
        raise ValueError("polys and weights differ in length")
    if not polys:
        raise ValueError("empty Minkowski sum")
    dim = polys[0].dim
    if any(P.dim != dim for P in polys):
        raise ValueError("dimension mismatch")
    if dim == 1:
        lo = sum(w * P.bounding_box()[0][0] for P, w in zip(polys, weights))
        hi = sum(w * P.bounding_box()[1][0] for P, w in zip(polys, weights))
        return LatticePolytope.interval(lo, hi)
    acc: set[Point] = {(0,) * dim}
    for P, w in zip(polys, weights):
        verts = P.vertices()
        acc = {tuple(a + w * b for a, b in zip(x, v)) for x in acc for v in verts}
        acc = set(LatticePolytope(tuple(acc), dim).vertices())
    return LatticePolytope(tuple(acc), dim)


def polytope_lattice_intersection_trivial(P: LatticePolytope, q: int) -> bool:
    """True iff the hull of ``P`` meets ``q Z^r`` exactly in the origin."""
    if q < 2:
        raise ValueError("q must be at least 2")
    origin = (0,) * P.dim
    if not P.contains(origin):
        return False
    lo, hi = P.bounding_box()
    ranges = [range(-(-a // q) * q, b + 1, q) for a, b in zip(lo, hi)]
    for pt in itertools.product(*ranges):
        if pt != origin and P.contains(pt):
            return False
    return True


def first_inadmissible_window(polys: Sequence[LatticePolytope], p: int) -> tuple[int, int] | None:
    """The first ``(i, j)`` violating the weighted-sum lattice condition, or None."""
    n = len(polys)
    for i in range(n):
        for j in range(i, n):
            window = polys[i : j + 1]
            weights = [p**k for k in range(j - i + 1)]
            S = weighted_minkowski_sum(window, weights)
            if not polytope_lattice_intersection_trivial(S, p ** (j - i + 1)):
                return (i, j)
    return None


def is_admissible_polytopes(polys: Sequence[LatticePolytope], p: int) -> bool:
    return first_inadmissible_window(polys, p) is None


def is_admissible_tuple(members: Sequence[LaurentPoly], p: int) -> bool:
    """Admissibility of a tuple of Laurent polynomials via their t-Newton polytopes."""
    if not members:
        raise ValueError("admissibility needs a nonempty tuple")
    return is_admissible_polytopes([newton_polytope_t(m) for m in members], p)


def has_origin_as_unique_interior_point(P: LatticePolytope) -> bool:
    return P.interior_lattice_points() == [(0,) * P.dim]
