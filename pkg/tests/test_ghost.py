import itertools
import random

import pytest

from padic_periods.ghost import (
    InadmissibleTuple,
    PolyTuple,
    composed_ghost,
    ct_power,
    enumerate_index_tuples,
    factor_index_tuple,
    ghost_sum,
    ghost_term,
    i_lambda,
    is_index_tuple,
    is_indecomposable,
    random_dwork_instance,
    random_member,
    verify_ct_factorization,
    verify_dwork_tuple_congruence,
    verify_ghost_decomposition,
    verify_mellit,
)
from padic_periods.laurent import LaurentPoly
from padic_periods.polytope import newton_polytope_t, weighted_minkowski_sum

T, X = LaurentPoly.gens(1, 1)
TINV = LaurentPoly.monomial((-1, 0), 1, 1, 1)
H = (T - 1) * (1 - X * TINV)
(T1,) = LaurentPoly.gens(1, 0)
TRI = 1 + T1 + LaurentPoly.monomial((-1,), 1, 1, 0)
ONE_T = 1 + T1


def test_ghost_term_examples():
    assert ghost_term(ONE_T, 1, 3) == 3 * T1 + 3 * T1**2
    assert ghost_term(H, 0, 5) == H
    assert ghost_term(ONE_T, 2, 3).divisible_by(9)


def test_ghost_terms_rebuild_powers():
    # L^{p^m} = sum_j R_j(L)(t^{p^{m-j}})
    for m in range(4):
        total = sum((ghost_term(H, j, 3).substitute_power(3 ** (m - j)) for j in range(m + 1)), LaurentPoly((), 1, 1))
        assert total == H ** (3**m)


def test_composed_ghost_examples():
    lam = PolyTuple.of(ONE_T, ONE_T)
    assert composed_ghost(lam, (0, 0), 3) == ONE_T * (1 + T1**3)
    # member 1 with m_1 = 1 is evaluated at t^(p^0)
    assert composed_ghost(lam, (0, 1), 3) == ONE_T * (3 * T1 + 3 * T1**2)
    assert ghost_sum(lam, 3) == lam.tilde(3)
    with pytest.raises(ValueError):
        composed_ghost(lam, (0,), 3)


def test_ghost_sum_rebuilds_tilde_up_to_length_three():
    rng = random.Random(5)
    for l in (1, 2, 3):
        for _ in range(3):
            lam = PolyTuple(tuple(random_member(rng, 3) for _ in range(l)), 1, 1)
            assert ghost_sum(lam, 3) == lam.tilde(3)


def test_composed_ghost_divisibility():
    lam = PolyTuple.of(H, H, H)
    for m in enumerate_index_tuples(3):
        assert composed_ghost(lam, m, 3).divisible_by(3 ** sum(m))


def test_index_tuple_examples():
    assert enumerate_index_tuples(1) == [(0,)]
    assert enumerate_index_tuples(1, True) == [(0,)]
    assert enumerate_index_tuples(2) == [(0, 0), (0, 1)]
    assert enumerate_index_tuples(2, True) == [(0, 1)]
    assert all(sum(m) >= 2 for m in enumerate_index_tuples(3, True))
    assert [len(enumerate_index_tuples(k)) for k in range(1, 6)] == [1, 2, 6, 24, 120]


def _all_factorizations(m):
    # every way to cut m into indecomposable pieces, by brute force over split points
    out = []
    n = len(m)
    for r in range(n):
        for cuts in itertools.combinations(range(1, n), r):
            bounds = [0, *cuts, n]
            pieces = [m[a:b] for a, b in zip(bounds, bounds[1:])]
            if all(is_index_tuple(x) and _brute_indecomposable(x) for x in pieces):
                out.append(pieces)
    return out


def _brute_indecomposable(m):
    return not any(is_index_tuple(m[:j]) and is_index_tuple(m[j:]) for j in range(1, len(m)))


def test_factorization_matches_oracle():
    assert factor_index_tuple((0, 0)) == [(0,), (0,)]
    assert factor_index_tuple((0, 1)) == [(0, 1)]
    assert factor_index_tuple((0, 0, 2)) == [(0, 0, 2)]
    for k in range(1, 7):
        for m in enumerate_index_tuples(k):
            facs = _all_factorizations(m)
            assert len(facs) == 1
            assert factor_index_tuple(m) == facs[0]
            assert sum(factor_index_tuple(m), ()) == m
            assert is_indecomposable(m) == _brute_indecomposable(m)


def test_indecomposable_weight_bound():
    for k in range(1, 7):
        ind = enumerate_index_tuples(k, True)
        assert len(ind) == sum(1 for m in enumerate_index_tuples(k) if len(_all_factorizations(m)[0]) == 1)
        assert all(sum(m) >= k - 1 for m in ind)


def test_i_lambda_examples():
    assert i_lambda(PolyTuple.of(H), 3) == H
    assert i_lambda(PolyTuple.of(ONE_T, ONE_T), 3).divisible_by(3)
    assert i_lambda(PolyTuple.of(ONE_T, ONE_T, ONE_T), 3).divisible_by(9)
    assert i_lambda(PolyTuple.of(H, H, H), 3).divisible_by(9)


def test_ghost_decomposition_examples():
    assert verify_ghost_decomposition(PolyTuple.of(ONE_T), 3).passed
    assert verify_ghost_decomposition(PolyTuple.of(ONE_T, ONE_T), 3).passed
    assert verify_ghost_decomposition(PolyTuple.of(H, H, H), 3).passed


def test_ct_factorization_examples():
    assert verify_ct_factorization(PolyTuple.of(H), 3).passed
    assert verify_ct_factorization(PolyTuple.of(H, H), 3).passed
    assert verify_ct_factorization(PolyTuple.of(H, H, H), 3).passed
    sq = LaurentPoly.monomial((2, 0), 1, 1, 1)
    with pytest.raises(InadmissibleTuple) as err:
        verify_ct_factorization(PolyTuple.of(H, sq), 3)
    # [-1,1] + 3*{2} misses the origin before the (1,1) window is reached
    assert err.value.window == (0, 1)


def test_dwork_tuple_examples():
    empty = PolyTuple.empty(1, 1)
    assert verify_dwork_tuple_congruence(PolyTuple.of(H), empty, empty, 3).passed
    rep = verify_dwork_tuple_congruence(PolyTuple.of(H, H), PolyTuple.of(H), empty, 3)
    assert rep.passed and rep.modulus == (3, 2)


def test_dwork_tuple_rejects_inadmissible():
    wide = LaurentPoly.monomial((3, 0), 1, 1, 1) + 1
    with pytest.raises(InadmissibleTuple) as err:
        verify_dwork_tuple_congruence(PolyTuple.of(wide), PolyTuple.empty(1, 1), PolyTuple.empty(1, 1), 3)
    assert err.value.name == "a*b"


def test_dwork_tuple_random_instances():
    rng = random.Random(2008)
    for _ in range(100):
        a, b, c = random_dwork_instance(rng, 3)
        assert verify_dwork_tuple_congruence(a, b, c, 3).passed


def test_mellit_examples():
    assert [ct_power(TRI, n) for n in (1, 2, 4, 7)] == [1, 3, 19, 393]
    rep = verify_mellit(TRI, (1,), (1,), (2,), 3)
    assert rep.passed
    assert rep.details["direct"] == {"a*b": 19, "a'*c": 3, "a'*b": 1, "a*c": 393}
    assert verify_mellit(TRI, (1,), (2,), (2,), 3).passed
    assert verify_mellit(TRI, (1, 2), (1,), (2,), 3).passed
    with pytest.raises(ValueError):
        verify_mellit(TRI, (3,), (), (), 3)


def test_mellit_trinomial_family():
    for p in (3, 5):
        for a in itertools.product(range(1, p), repeat=2):
            for b, c in [((), ()), ((1,), ()), ((), (p - 1,)), ((2,), (1,))]:
                assert verify_mellit(TRI, a, b, c, p).passed


def test_ghost_divisibility_and_support():
    rng = random.Random(3)
    for _ in range(50):
        p = rng.choice([3, 5])
        L = random_member(rng, p)
        m = rng.randint(0, 3 if p == 3 else 2)
        R = ghost_term(L, m, p)
        assert R.divisible_by(p**m)
        if not R.is_zero():
            N = newton_polytope_t(L)
            scaled = weighted_minkowski_sum([N], [p**m])
            assert all(scaled.contains(e) for e in R.t_parts())
