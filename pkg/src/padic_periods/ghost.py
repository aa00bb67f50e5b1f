"""Ghost terms, composed ghosts and index-tuple combinatorics.

A tuple ``lam = (L0, L1, ...)`` stands for the product
``tilde(lam) = L0 * L1**p * L2**(p**2) * ...``.  Expanding each power into
ghost terms splits ``tilde(lam)`` into pieces ``R_{m,lam}`` indexed by
``m`` with ``0 <= m_i <= i``; grouping by the indecomposable factorization
of ``m`` gives the ``I_lam`` building blocks used by the congruence
verifiers at the bottom of this module.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .laurent import ContextMismatch, LaurentPoly, ModulusContext, lp_congruent
from .polytope import (
    first_inadmissible_window,
    has_origin_as_unique_interior_point,
    newton_polytope_t,
)
from .report import CongruenceReport, exact_report

MAX_FACTOR_LENGTH = 6

IndexTuple = tuple[int, ...]


class InadmissibleTuple(ValueError):
    """Raised when a tuple fails the Newton-polytope lattice condition."""

    def __init__(self, name: str, window: tuple[int, int]):
        self.name = name
        self.window = window
        super().__init__(f"tuple {name} is not admissible: window {window} meets the lattice")


@dataclass(frozen=True)
class PolyTuple:
    """Ordered tuple of Laurent polynomials sharing one variable context."""

    members: tuple[LaurentPoly, ...]
    nt: int
    nz: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        for m in self.members:
            if m.context != (self.nt, self.nz):
                raise ContextMismatch("tuple members must share the tuple's context")

    @classmethod
    def of(cls, *members: LaurentPoly) -> PolyTuple:
        if not members:
            raise ValueError("use PolyTuple.empty(nt, nz) for the empty tuple")
        nt, nz = members[0].context
        return cls(members, nt, nz)

    @classmethod
    def empty(cls, nt: int, nz: int) -> PolyTuple:
        return cls((), nt, nz)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return PolyTuple(self.members[idx], self.nt, self.nz)
        return self.members[idx]

    def __mul__(self, other: PolyTuple) -> PolyTuple:
        # concatenation product
        if (self.nt, self.nz) != (other.nt, other.nz):
            raise ContextMismatch("concatenating tuples from different contexts")
        return PolyTuple(self.members + other.members, self.nt, self.nz)

    def derivative(self) -> PolyTuple:
        """Drop the first member."""
        if not self.members:
            raise ValueError("the empty tuple has no derivative")
        return self[1:]

    def one(self) -> LaurentPoly:
        return LaurentPoly.constant(1, self.nt, self.nz)

    def tilde(self, p: int, modulus: int | None = None) -> LaurentPoly:
        """``L0 * L1**p * ... * L_{l-1}**(p**(l-1))``; the empty tuple gives 1."""
        acc = self.one()
        for i, L in enumerate(self.members):
            acc = acc.mul(L.pow(p**i, modulus), modulus)
        return acc


# -- ghost terms -------------------------------------------------------------


def ghost_term(L: LaurentPoly, m: int, p: int) -> LaurentPoly:
    """``R_m(L) = L**(p**m) - L(t**p, z**p)**(p**(m-1))`` with ``R_0(L) = L``."""
    if m < 0:
        raise ValueError("ghost index must be nonnegative")
    if m == 0:
        return L
    return L.pow(p**m) - L.substitute_power(p).pow(p ** (m - 1))


def composed_ghost(lam: PolyTuple, m: Sequence[int], p: int) -> LaurentPoly:
    """``prod_i R_{m_i}(L_i)`` with member ``i`` evaluated at ``(t, z)**(p**(i - m_i))``."""
    m = tuple(m)
    if len(m) != len(lam):
        raise ValueError(f"index tuple of length {len(m)} for a tuple of length {len(lam)}")
    if not is_index_tuple(m):
        raise ValueError(f"{m} is not in S")
    acc = lam.one()
    for i, (L, mi) in enumerate(zip(lam.members, m)):
        acc = acc * ghost_term(L, mi, p).substitute_power(p ** (i - mi))
    return acc


# -- index tuples -------------------------------------------------------------


def is_index_tuple(m: Sequence[int]) -> bool:
    return len(m) > 0 and all(0 <= x <= i for i, x in enumerate(m))


def is_indecomposable(m: Sequence[int]) -> bool:
    """No split ``m = m' * m''`` with both parts in S.

    ``m'`` is a prefix and so always lies in S; the split at ``j`` exists iff
    the suffix ``m[j:]`` satisfies ``m[j+i] <= i``.
    """
    m = tuple(m)
    if not is_index_tuple(m):
        raise ValueError(f"{m} is not in S")
    return not any(is_index_tuple(m[j:]) for j in range(1, len(m)))


def enumerate_index_tuples(k: int, indecomposable_only: bool = False) -> list[IndexTuple]:
    if k < 1:
        raise ValueError("k must be positive")
    out = [m for m in itertools.product(*(range(i + 1) for i in range(k)))]
    if indecomposable_only:
        out = [m for m in out if is_indecomposable(m)]
    return out


def factor_index_tuple(m: Sequence[int]) -> list[IndexTuple]:
    """Unique factorization into indecomposables: cut wherever the suffix lies in S."""
    m = tuple(m)
    if not is_index_tuple(m):
        raise ValueError(f"{m} is not in S")
    cuts = [j for j in range(1, len(m)) if is_index_tuple(m[j:])]
    bounds = [0, *cuts, len(m)]
    return [m[a:b] for a, b in zip(bounds, bounds[1:])]


def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive part lengths summing to ``n``."""
    for mask in range(1 << (n - 1)) if n else ():
        parts, last = [], 0
        for j in range(1, n):
            if mask >> (j - 1) & 1:
                parts.append(j - last)
                last = j
        parts.append(n - last)
        yield tuple(parts)


def _split(lam: PolyTuple, parts: Sequence[int]) -> list[tuple[PolyTuple, int]]:
    out, off = [], 0
    for n in parts:
        out.append((lam[off : off + n], off))
        off += n
    return out


# -- I_lambda and the decomposition identities --------------------------------


def i_lambda(lam: PolyTuple, p: int) -> LaurentPoly:
    """Sum of composed ghosts over indecomposable index tuples."""
    if not len(lam):
        raise ValueError("I is defined for nonempty tuples")
    acc = LaurentPoly((), lam.nt, lam.nz)
    for m in _indecomposables(len(lam)):
        acc = acc + composed_ghost(lam, m, p)
    return acc


@lru_cache(maxsize=None)
def _indecomposables(k: int) -> tuple[IndexTuple, ...]:
    return tuple(enumerate_index_tuples(k, True))


def _cap(lam: PolyTuple) -> None:
    if len(lam) > MAX_FACTOR_LENGTH:
        raise ValueError(f"tuple length {len(lam)} exceeds the cap {MAX_FACTOR_LENGTH} on factorization sums")


def ghost_sum(lam: PolyTuple, p: int) -> LaurentPoly:
    """Sum of ``R_{m,lam}`` over all of ``S_l``."""
    acc = LaurentPoly((), lam.nt, lam.nz)
    for m in enumerate_index_tuples(len(lam)):
        acc = acc + composed_ghost(lam, m, p)
    return acc


def factorization_sum(lam: PolyTuple, p: int) -> LaurentPoly:
    """Sum over decompositions ``lam = lam^1 * ... * lam^s`` of the shifted products of ``I``."""
    _cap(lam)
    acc = LaurentPoly((), lam.nt, lam.nz)
    cache: dict[tuple[int, int], LaurentPoly] = {}
    for parts in compositions(len(lam)):
        term = lam.one()
        for piece, off in _split(lam, parts):
            key = (off, len(piece))
            if key not in cache:
                cache[key] = i_lambda(piece, p)
            term = term * cache[key].substitute_power(p**off)
        acc = acc + term
    return acc


def ct_factorization_sum(lam: PolyTuple, p: int) -> LaurentPoly:
    """Same sum with each factor replaced by the shifted constant term of ``I``."""
    _cap(lam)
    acc = LaurentPoly((), 0, lam.nz)
    cache: dict[tuple[int, int], LaurentPoly] = {}
    for parts in compositions(len(lam)):
        term = LaurentPoly.constant(1, 0, lam.nz)
        for piece, off in _split(lam, parts):
            key = (off, len(piece))
            if key not in cache:
                cache[key] = i_lambda(piece, p).ct_t()
            term = term * cache[key].substitute_power(p**off)
        acc = acc + term
    return acc


def verify_ghost_decomposition(lam: PolyTuple, p: int) -> CongruenceReport:
    """``tilde(lam)`` against the factorization sum of ``I`` terms, exactly."""
    if not len(lam):
        raise ValueError("decomposition needs a nonempty tuple")
    return exact_report(
        f"tilde(lambda) = sum over factorizations of shifted I products (l={len(lam)}, p={p})",
        lam.tilde(p),
        factorization_sum(lam, p),
        paper_ref="tilde(lambda) = sum_{lambda=lambda^1*...*lambda^s} prod I_{lambda^i}(t^{p^offset}, z^{p^offset})",
    )


def check_admissible(lam: PolyTuple, p: int, name: str = "lambda") -> None:
    if not len(lam):
        return
    window = first_inadmissible_window([newton_polytope_t(L) for L in lam.members], p)
    if window is not None:
        raise InadmissibleTuple(name, window)


def verify_ct_factorization(lam: PolyTuple, p: int) -> CongruenceReport:
    """Constant term of ``tilde(lam)`` against the factorization sum of constant terms."""
    if not len(lam):
        raise ValueError("factorization needs a nonempty tuple")
    check_admissible(lam, p)
    return exact_report(
        f"CT_t(tilde(lambda)) = sum over factorizations of shifted CT_t(I) products (l={len(lam)}, p={p})",
        lam.tilde(p).ct_t(),
        ct_factorization_sum(lam, p),
        paper_ref="CT_t(tilde(lambda))(z) = sum prod CT_t(I_{lambda^i})(z^{p^offset}) for admissible lambda",
    )


# -- Dwork congruence for tuples ------------------------------------------------


def _ct_tilde(lam: PolyTuple, p: int, modulus: int) -> LaurentPoly:
    if not len(lam):
        return LaurentPoly.constant(1, 0, lam.nz)
    return lam.tilde(p, modulus).ct_t()


def verify_dwork_tuple_congruence(a: PolyTuple, b: PolyTuple, c: PolyTuple, p: int) -> CongruenceReport:
    """``CT(~(a*b))(z) CT(~(a'*c))(z^p) == CT(~(a'*b))(z^p) CT(~(a*c))(z)  (mod p**l(a))``."""
    if not len(a):
        raise ValueError("a must be nonempty")
    ad = a.derivative()
    ab, ac, adb, adc = a * b, a * c, ad * b, ad * c
    for name, lam in (("a*b", ab), ("a*c", ac), ("a'*b", adb), ("a'*c", adc)):
        check_admissible(lam, p, name)
    ctx = ModulusContext(p, len(a))
    q = ctx.modulus
    lhs = _ct_tilde(ab, p, q).mul(_ct_tilde(adc, p, q).substitute_power(p), q)
    rhs = _ct_tilde(adb, p, q).substitute_power(p).mul(_ct_tilde(ac, p, q), q)
    rep = lp_congruent(
        lhs,
        rhs,
        ctx,
        f"Dwork congruence for tuples, l(a)={len(a)}, l(b)={len(b)}, l(c)={len(c)}",
    )
    return rep.relabel(
        "dwork-tuple",
        "CT(~(a*b))(z) CT(~(a'*c))(z^p) = CT(~(a'*b))(z^p) CT(~(a*c))(z) mod p^l(a)",
    )


def digit_exponent(digits: Sequence[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(digits))


def ct_power(L: LaurentPoly, n: int, modulus: int | None = None) -> int:
    """Constant term of ``L**n`` for ``L`` in the t-block only."""
    if L.nz:
        raise ValueError("expected a polynomial in t only")
    return L.pow(n, modulus).ct_t().coeff(())


def verify_mellit(L: LaurentPoly, a: Sequence[int], b: Sequence[int], c: Sequence[int], p: int) -> CongruenceReport:
    """Digit-exponent constant-term congruence for a single Laurent polynomial.

    Runs through the tuple machinery with members ``L**d``; ``direct`` in the
    report details holds the four constant terms computed from the digit
    exponents straight away as an independent oracle.
    """
    for d in (*a, *b, *c):
        if not 1 <= d <= p - 1:
            raise ValueError(f"digit {d} outside [1, {p - 1}]")
    if not a:
        raise ValueError("a must be nonempty")
    if L.nz:
        raise ValueError("expected a polynomial in t only")
    if not has_origin_as_unique_interior_point(newton_polytope_t(L)):
        raise InadmissibleTuple("Newton polytope of L", (0, 0))

    def tup(ds: Sequence[int]) -> PolyTuple:
        return PolyTuple(tuple(L.pow(d) for d in ds), L.nt, 0)

    rep = verify_dwork_tuple_congruence(tup(a), tup(b), tup(c), p)
    q = p ** len(a)
    a, b, c = tuple(a), tuple(b), tuple(c)
    direct = {
        name: ct_power(L, digit_exponent(ds, p))
        for name, ds in (("a*b", a + b), ("a'*c", a[1:] + c), ("a'*b", a[1:] + b), ("a*c", a + c))
    }
    diff = direct["a*b"] * direct["a'*c"] - direct["a'*b"] * direct["a*c"]
    details = {"direct": direct, "direct_agrees": diff % q == 0}
    ok = rep.passed and diff % q == 0
    witness = rep.witness if not rep.passed else (None if ok else ("1", diff % q))
    return CongruenceReport(
        f"digit-exponent constant terms, a={a}, b={b}, c={c}",
        (p, len(a)),
        ok,
        witness,
        check_id="mellit",
        paper_ref="CT(L^{a*b}) CT(L^{a'*c}) = CT(L^{a'*b}) CT(L^{a*c}) mod p^l(a)",
        details=details,
    )


# -- random admissible instances ----------------------------------------------


def random_member(rng: random.Random, p: int, nz: int = 1, terms: int = 3, coeff: int = 3) -> LaurentPoly:
    """Random Laurent polynomial with t-hull inside ``[-(p-1), p-1]`` containing 0.

    Any tuple of such members is admissible: a window of length ``k`` has hull
    inside ``[-(p**k - 1), p**k - 1]``, which meets ``p**k Z`` only in 0.
    """
    span = p - 1
    lo, hi = rng.randint(-span, 0), rng.randint(0, span)
    exps = {(lo,), (hi,)} | {(rng.randint(lo, hi),) for _ in range(terms - 2)}
    out = {}
    for (e,) in exps:
        zs = tuple(rng.randint(0, 1) for _ in range(nz))
        out[(e, *zs)] = rng.choice([c for c in range(-coeff, coeff + 1) if c])
    return LaurentPoly(out, 1, nz)


def random_dwork_instance(rng: random.Random, p: int, max_la: int = 3, max_bc: int = 1, nz: int = 1):
    la = rng.randint(1, max_la)
    lb = rng.randint(0, max_bc)
    lc = rng.randint(0, max_bc)

    def tup(n: int) -> PolyTuple:
        return PolyTuple(tuple(random_member(rng, p, nz) for _ in range(n)), 1, nz)

    return tup(la), tup(lb), tup(lc)
