import random

import pytest

from padic_periods.laurent import LaurentPoly
from padic_periods.polytope import (
    LatticePolytope,
    first_inadmissible_window,
    has_origin_as_unique_interior_point,
    is_admissible_tuple,
    newton_polytope_t,
    polytope_lattice_intersection_trivial,
    weighted_minkowski_sum,
)

T, X = LaurentPoly.gens(1, 1)
TINV = LaurentPoly.monomial((-1, 0), 1, 1, 1)
H = (T - 1) * (1 - X * TINV)


def test_newton_polytope_examples():
    assert newton_polytope_t(H).generators == ((-1,), (0,), (1,))
    assert newton_polytope_t(LaurentPoly.constant(5, 1, 1)).generators == ((0,),)
    P = newton_polytope_t(T**2 * X + T * X**2)
    assert P.bounding_box() == ((1,), (2,))


def test_newton_polytope_of_zero_is_an_error():
    with pytest.raises(ValueError):
        newton_polytope_t(LaurentPoly((), 1, 1))


def test_weighted_minkowski_examples():
    I = LatticePolytope.interval(-1, 1)
    assert weighted_minkowski_sum([I, I], [1, 3]).bounding_box() == ((-4,), (4,))
    assert weighted_minkowski_sum([LatticePolytope(((0,),), 1)], [7]).generators == ((0,),)
    assert weighted_minkowski_sum([I, I, I], [1, 3, 9]).bounding_box() == ((-13,), (13,))


def test_weighted_minkowski_dimension_mismatch():
    with pytest.raises(ValueError):
        weighted_minkowski_sum([LatticePolytope.interval(0, 1), LatticePolytope(((0, 0),), 2)], [1, 1])


def test_lattice_intersection_examples():
    P = LatticePolytope.interval(-13, 13)
    assert polytope_lattice_intersection_trivial(P, 27)
    assert not polytope_lattice_intersection_trivial(P, 9)
    assert not polytope_lattice_intersection_trivial(LatticePolytope.interval(1, 2), 5)


def test_admissibility_examples():
    assert is_admissible_tuple([H, H, H], 3)
    assert not is_admissible_tuple([LaurentPoly.monomial((2, 0), 1, 1, 1)], 3)
    assert not is_admissible_tuple([LaurentPoly.monomial((2, 0), 1, 1, 1)], 7)


def test_first_inadmissible_window_names_the_pair():
    wide = LaurentPoly.monomial((3, 0), 1, 1, 1) + LaurentPoly.monomial((-3, 0), 1, 1, 1) + 1
    polys = [newton_polytope_t(m) for m in (H, wide)]
    # window (0, 0) is fine, (0, 1) has hull [-10, 10] which contains 9
    assert first_inadmissible_window(polys, 3) == (0, 1)


def test_interval_and_lp_membership_agree():
    rng = random.Random(2024)
    for _ in range(200):
        k = rng.randint(1, 3)
        polys = []
        for _ in range(k):
            a, b = sorted(rng.randint(-4, 4) for _ in range(2))
            polys.append(LatticePolytope.interval(a, b))
        weights = [rng.randint(1, 5) for _ in range(k)]
        S = weighted_minkowski_sum(polys, weights)
        (lo,), (hi,) = S.bounding_box()
        # closed-form interval from the weights
        assert lo == sum(w * P.bounding_box()[0][0] for P, w in zip(polys, weights))
        assert hi == sum(w * P.bounding_box()[1][0] for P, w in zip(polys, weights))
        x = rng.randint(lo - 3, hi + 3)
        assert S.contains_lp((x,)) == (lo <= x <= hi)


def test_two_dimensional_membership():
    tri = LatticePolytope(((0, 0), (4, 0), (0, 4)), 2)
    assert tri.contains((1, 1))
    assert tri.contains((2, 2))
    assert not tri.contains((3, 2))
    assert tri.vertices() == ((0, 0), (0, 4), (4, 0))
    sq = LatticePolytope(((-1, -1), (1, -1), (-1, 1), (1, 1), (0, 0)), 2)
    assert sq.vertices() == ((-1, -1), (-1, 1), (1, -1), (1, 1))
    assert has_origin_as_unique_interior_point(sq)
    assert polytope_lattice_intersection_trivial(sq, 2)
    assert not polytope_lattice_intersection_trivial(LatticePolytope(((-2, 0), (2, 0), (0, 1)), 2), 2)


def test_minkowski_grouping_is_associative():
    rng = random.Random(7)
    for _ in range(15):
        polys = [
            LatticePolytope(tuple((rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(3)), 2)
            for _ in range(3)
        ]
        w = [1, 3, 9]
        whole = weighted_minkowski_sum(polys, w)
        inner = weighted_minkowski_sum(polys[1:], [1, 3])
        grouped = weighted_minkowski_sum([polys[0], inner], [1, 3])
        assert set(whole.vertices()) == set(grouped.vertices())


def test_admissibility_invariant_under_scaling_members():
    rng = random.Random(11)
    for _ in range(30):
        members = []
        for _ in range(rng.randint(1, 3)):
            d = {(rng.randint(-3, 3), rng.randint(0, 1)): rng.randint(-3, 3) or 1 for _ in range(3)}
            members.append(LaurentPoly(d, 1, 1))
        if any(m.is_zero() for m in members):
            continue
        scaled = [m * rng.choice([2, -1, 5]) for m in members]
        assert is_admissible_tuple(members, 3) == is_admissible_tuple(scaled, 3)


def test_unique_interior_point():
    assert has_origin_as_unique_interior_point(LatticePolytope.interval(-1, 1))
    assert not has_origin_as_unique_interior_point(LatticePolytope.interval(-2, 1))
    assert not has_origin_as_unique_interior_point(LatticePolytope.interval(0, 2))
