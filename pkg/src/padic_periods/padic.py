"""Fixed-precision p-adic integers, Teichmüller lifts and unit-root limits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .hyperg import FamilyTag, bar_polynomial, truncation
from .report import CongruenceReport, valuation
from .upoly import XPoly


@dataclass(frozen=True)
class PadicInt:
    """An element of ``Z/p^S`` viewed as a truncated p-adic integer."""

    p: int
    precision: int
    residue: int

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        object.__setattr__(self, "residue", self.residue % self.p**self.precision)

    @classmethod
    def of(cls, value: int | Fraction, p: int, precision: int) -> PadicInt:
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ValueError(f"{value} is not a {p}-adic integer")
            q = p**precision
            return cls(p, precision, value.numerator * pow(value.denominator, -1, q))
        return cls(p, precision, value)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def valuation(self) -> int:
        """Valuation capped at the precision (zero reports ``precision``)."""
        return valuation(self.residue, self.p, self.precision)

    def with_precision(self, precision: int) -> PadicInt:
        if precision > self.precision:
            raise ValueError("cannot raise the precision of a truncated element")
        return PadicInt(self.p, precision, self.residue)

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            if other.precision != self.precision:
                raise ValueError("mixing different precisions")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicInt.of(other, self.p, self.precision)
        return NotImplemented

    def __add__(self, other) -> PadicInt:
        o = self._coerce(other)
        return PadicInt(self.p, self.precision, self.residue + o.residue)

    __radd__ = __add__

    def __neg__(self) -> PadicInt:
        return PadicInt(self.p, self.precision, -self.residue)

    def __sub__(self, other) -> PadicInt:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PadicInt:
        return self._coerce(other) - self

    def __mul__(self, other) -> PadicInt:
        o = self._coerce(other)
        return PadicInt(self.p, self.precision, self.residue * o.residue)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PadicInt:
        if n < 0:
            return unit_inverse(self) ** (-n)
        return PadicInt(self.p, self.precision, pow(self.residue, n, self.modulus))

    def __truediv__(self, other) -> PadicInt:
        return self * unit_inverse(self._coerce(other))

    def __rtruediv__(self, other) -> PadicInt:
        return self._coerce(other) * unit_inverse(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.residue == other % self.modulus
        if isinstance(other, PadicInt):
            return (self.p, self.precision, self.residue) == (other.p, other.precision, other.residue)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.precision, self.residue))

    def __int__(self) -> int:
        return self.residue

    def __repr__(self) -> str:
        return f"PadicInt({self.residue} mod {self.p}^{self.precision})"


def teichmuller(a: int, p: int, S: int) -> PadicInt:
    """The root of unity ``w`` with ``w**p == w`` and ``w == a (mod p)``."""
    if a % p == 0:
        raise ValueError(f"{a} is divisible by {p}; no Teichmüller unit")
    q = p**S
    x = a % q
    # x -> x^p gains one digit per step
    for _ in range(S):
        nxt = pow(x, p, q)
        if nxt == x:
            break
        x = nxt
    return PadicInt(p, S, x)


def unit_inverse(u: PadicInt) -> PadicInt:
    if not u.is_unit():
        raise ZeroDivisionError(f"{u!r} is not a unit")
    return PadicInt(u.p, u.precision, pow(u.residue, -1, u.modulus))


def evaluate(f: XPoly, x: PadicInt) -> PadicInt:
    return PadicInt(x.p, x.precision, f.evaluate(x.residue, x.modulus))


def _split(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _ratio_products(factors, p: int, q: int):
    """Yield ``prod_{i<k} num_i/den_i`` mod ``q`` for ``k = 0, 1, ...``.

    Each product is assumed to be a p-adic integer; valuations are tracked
    separately so non-unit factors never need inverting.
    """
    v, unit = 0, 1
    yield 1
    for num, den in factors:
        if num == 0:
            return
        vn, un = _split(abs(num), p)
        vd, ud = _split(abs(den), p)
        v += vn - vd
        sign = -1 if (num < 0) != (den < 0) else 1
        unit = unit * sign * un * pow(ud, -1, q) % q
        yield unit * pow(p, v, q) % q if v >= 0 else _fail(v)


def _fail(v: int):
    raise ArithmeticError(f"negative valuation {v} in an integral product")


def hyp_value(A: int, B: int, x: PadicInt) -> PadicInt:
    """``sum_k C(A,k) C(B,k) x^k`` evaluated in ``Z/p^S`` without expanding."""
    p, q = x.p, x.modulus
    n = min(A, B)
    ca = _ratio_products(((A - k, k + 1) for k in range(n)), p, q)
    if A == B:
        terms = (a * a for a in ca)
    else:
        cb = _ratio_products(((B - k, k + 1) for k in range(n)), p, q)
        terms = (a * b for a, b in zip(ca, cb))
    total, xp = 0, 1
    for c in terms:
        total = (total + c * xp) % q
        xp = xp * x.residue % q
    return PadicInt(p, x.precision, total)


def bar_value(tag: FamilyTag, x: PadicInt, s: int) -> PadicInt:
    """``Pbar_s(x)`` (or the family analogue) in ``Z/p^S``."""
    tag.check_prime(x.p)
    t = tag.triple
    return hyp_value(truncation(t.beta, x.p, s), truncation(t.gamma, x.p, s), x)


# -- Igusa / Dwork truncations --------------------------------------------------


def _binom_half_sq(k: int) -> Fraction:
    """``binom(-1/2, k)**2``, equal to ``(C(2k,k) / 4**k)**2``."""
    c = 1
    for i in range(k):
        c = c * (2 * (2 * i + 1)) // (i + 1)  # C(2k,k) recurrence
    return Fraction(c, 4**k) ** 2


@lru_cache(maxsize=None)
def igusa_coefficients(p: int) -> tuple[Fraction, ...]:
    return tuple(_binom_half_sq(k) for k in range((p - 1) // 2 + 1))


def _reduce_series(coeffs, q: int) -> XPoly:
    return XPoly(c.numerator * pow(c.denominator, -1, q) % q for c in coeffs)


def _dwork_coefficients(p: int, n: int, q: int) -> list[int]:
    # binom(-1/2,k)^2 / binom(-1/2,k-1)^2 = (2k-1)^2 / (2k)^2
    return list(_ratio_products((((2 * k - 1) ** 2, (2 * k) ** 2) for k in range(1, n)), p, q))


def dwork_series_exact(p: int, s: int) -> list[Fraction]:
    """The ``p**s`` rational coefficients ``binom(-1/2,k)**2`` of ``F_s``; small ``p**s`` only."""
    out = [Fraction(1)]
    for k in range(1, p**s):
        out.append(out[-1] * Fraction(2 * k - 1, 2 * k) ** 2)
    return out


def dwork_truncation(p: int, s: int) -> tuple[XPoly, XPoly]:
    """``(F_s, g)`` with coefficients reduced mod ``p**s``.

    ``F_s`` is the series ``2F1(1/2,1/2;1;x)`` cut below ``x**(p**s)``;
    ``g`` is its Igusa head of degree ``(p-1)/2``.
    """
    if s < 1:
        raise ValueError("s must be positive")
    q = p**s
    return XPoly(_dwork_coefficients(p, p**s, q)), _reduce_series(igusa_coefficients(p), q)


# -- domains ----------------------------------------------------------------------


def _t_bar_1(z, p: int) -> int:
    """``sum_{k1+k2+k3=M} prod C(M,k_i) z_i^k_i`` mod p, with ``M = (p-1)/2``."""
    M = (p - 1) // 2
    row = [1]
    for k in range(M):
        row.append(row[-1] * (M - k) // (k + 1))
    total = 0
    for k1 in range(M + 1):
        for k2 in range(M + 1 - k1):
            k3 = M - k1 - k2
            total += row[k1] * row[k2] * row[k3] * pow(z[0], k1, p) * pow(z[1], k2, p) * pow(z[2], k3, p)
    return total % p


def _residue_mod_p(v, p: int) -> int | None:
    """Reduction of a rational into ``Z_p`` modulo p, or None if not integral."""
    if isinstance(v, PadicInt):
        return v.residue % p
    v = Fraction(v)
    if v.denominator % p == 0:
        return None
    return v.numerator * pow(v.denominator, -1, p) % p


def _igusa_unit(r, p: int) -> bool:
    res = _residue_mod_p(r, p)
    if res is None:
        return False
    return _reduce_series(igusa_coefficients(p), p).evaluate(res, p) != 0


def hat_domain_membership(z, p: int) -> bool:
    """Union over the six orderings ``(i,j,k)`` of the cross-ratio conditions.

    A point qualifies for an ordering when ``(z_j-z_k)/(z_i-z_k)`` or its
    inverse lies in ``Z_p`` with a unit Igusa value.
    """
    z = [Fraction(v) for v in z]
    if len(set(z)) < 3:
        return False
    for i, j, k in itertools.permutations(range(3)):
        r = (z[j] - z[k]) / (z[i] - z[k])
        if _igusa_unit(r, p) or _igusa_unit(1 / r, p):
            return True
    return False


def domain_membership(x, which) -> bool:
    """Membership in one of the convergence domains.

    ``which`` is a :class:`FamilyTag` for the one-variable domains, ``"dwork"``
    for Dwork's Igusa-polynomial domain, ``"kz"`` for the domain of the KZ
    polynomial ``T_1`` on triples, or ``("hat", p)`` for the union of the
    cross-ratio domains on rational triples.
    """
    if isinstance(which, tuple) and which[0] == "hat":
        return hat_domain_membership(x, which[1])
    if which == "kz":
        p = x[0].p
        return _t_bar_1([v.residue for v in x], p) != 0
    if which == "dwork":
        return _igusa_unit(x, x.p)
    if isinstance(which, str):
        which = FamilyTag.parse(which)
    return bar_polynomial(which, x.p, 1).evaluate(x.residue, x.p) != 0


# -- unit roots -------------------------------------------------------------------


@dataclass
class UnitRootTrace:
    """Successive ratios ``f_s = Pbar_{s+1}(x) / Pbar_s(x^p)`` with ``f_s`` mod ``p**s``."""

    x: PadicInt
    family: FamilyTag
    ratios: list[PadicInt] = field(default_factory=list)
    # valuation of f_{s+1} - f_s at full working precision, one entry per step
    deltas: list[int] = field(default_factory=list)

    def cauchy_report(self) -> CongruenceReport:
        bad = [(s, v) for s, v in enumerate(self.deltas, start=1) if v < s]
        p = self.x.p
        desc = f"|f_(s+1) - f_s|_{p} <= {p}^-s along the {self.family.name} ratios at x={self.x.residue}"
        details = {"deltas": list(self.deltas), "ratios": [r.residue for r in self.ratios]}
        kw = dict(check_id="unit-root-cauchy", paper_ref="Cauchy rate of Pbar_(s+1)(x)/Pbar_s(x^p)", details=details)
        if bad:
            s, v = bad[0]
            return CongruenceReport(desc, (p, s), False, (f"f_{s + 1} - f_{s}", v), observed_valuation=v, **kw)
        return CongruenceReport(desc, (p, len(self.deltas)), True, observed_valuation=min(self.deltas, default=None), **kw)


def _ratio(tag: FamilyTag, x: PadicInt, s: int) -> PadicInt:
    num = bar_value(tag, x, s + 1)
    den = bar_value(tag, x**x.p, s)
    if not den.is_unit():
        raise ArithmeticError(f"Pbar_{s}(x^p) is not a unit at x={x.residue}; x lies outside the domain")
    return num / den


def unit_root(x: PadicInt, family: FamilyTag = FamilyTag.HALF, s_max: int = 3) -> UnitRootTrace:
    """Trace of ``f_s`` for ``s = 1..s_max``; ``x`` needs precision ``s_max + 1``."""
    if x.precision < s_max + 1:
        raise ValueError(f"precision {x.precision} too small for s_max={s_max}")
    if not domain_membership(x, family):
        raise ValueError(f"{x!r} is outside the domain of {family.name}")
    trace = UnitRootTrace(x, family)
    full = [_ratio(family, x, s) for s in range(1, s_max + 2)]
    for s in range(1, s_max + 1):
        trace.ratios.append(full[s - 1].with_precision(s))
        trace.deltas.append((full[s] - full[s - 1]).valuation())
    return trace


def legendre_point_count(alpha: int, p: int) -> int:
    """``a_p = p + 1 - #E(F_p)`` for ``y^2 = x(x-1)(x-alpha)``."""
    if alpha % p in (0, 1):
        raise ValueError(f"y^2 = x(x-1)(x-{alpha}) is singular over F_{p}")
    squares = [0] * p
    for y in range(p):
        squares[y * y % p] += 1
    count = 1 + sum(squares[x * (x - 1) * (x - alpha) % p] for x in range(p))
    return p + 1 - count


def frobenius_quadratic_check(alpha: int, p: int, s: int) -> CongruenceReport:
    """The unit root ``u`` read off at ``w(alpha)`` satisfies ``u^2 - a_p u + p = 0`` mod ``p**s``."""
    w = teichmuller(alpha, p, s + 1)
    if not domain_membership(w, FamilyTag.HALF):
        raise ValueError(f"w({alpha}) is outside the domain at p={p}")
    a_p = legendre_point_count(alpha, p)
    f = unit_root(w, FamilyTag.HALF, s).ratios[-1]
    u = f if (p - 1) // 2 % 2 == 0 else -f
    value = u * u - a_p * u + p
    desc = f"u^2 - a_p*u + p == 0 mod {p}^{s} for y^2 = x(x-1)(x-{alpha})"
    details = {"a_p": a_p, "u": u.residue, "unit": u.is_unit()}
    kw = dict(check_id="unit-root-frobenius", paper_ref="unit root of the Legendre curve from f(w(alpha))", details=details)
    if value == 0 and u.is_unit():
        return CongruenceReport(desc, (p, s), True, observed_valuation=value.valuation(), **kw)
    return CongruenceReport(desc, (p, s), False, ("u", value.residue), observed_valuation=value.valuation(), **kw)


def _dwork_ratio(x: PadicInt, s: int) -> PadicInt:
    F_next, _ = dwork_truncation(x.p, s + 1)
    F_cur, _ = dwork_truncation(x.p, s)
    num = evaluate(F_next, x)
    den = evaluate(F_cur.reduce(x.modulus), x**x.p)
    if not den.is_unit():
        raise ArithmeticError(f"F_{s}(x^p) is not a unit at x={x.residue}")
    return num / den


def limits_agree_check(p: int, s: int, samples) -> CongruenceReport:
    """The Pbar-ratios and Dwork's F-ratios agree mod ``p**(s-1)`` on the samples."""
    W = s + 1
    observed = []
    desc = f"Pbar_(s+1)(x)/Pbar_s(x^p) == F_(s+1)(x)/F_s(x^p) mod {p}^{s - 1}"
    kw = dict(check_id="unit-root-dwork", paper_ref="same limiting function as Dwork's truncations")
    for x in samples:
        x = x if isinstance(x, PadicInt) else PadicInt(p, W, x)
        x = x.with_precision(W)
        if not domain_membership(x, FamilyTag.HALF):
            raise ValueError(f"{x!r} is outside the domain")
        v = (_ratio(FamilyTag.HALF, x, s) - _dwork_ratio(x, s)).valuation()
        observed.append(v)
        if v < s - 1:
            details = {"observed": observed}
            return CongruenceReport(desc, (p, s - 1), False, (f"x={x.residue}", v), observed_valuation=v, details=details, **kw)
    return CongruenceReport(
        desc, (p, s - 1), True, observed_valuation=min(observed, default=None), details={"observed": observed}, **kw
    )


def domain_teichmuller_points(p: int, S: int, family: FamilyTag = FamilyTag.HALF) -> list[PadicInt]:
    """Teichmüller lifts of the nonzero residues that lie in the family's domain."""
    pts = [teichmuller(a, p, S) for a in range(1, p)]
    return [w for w in pts if domain_membership(w, family)]
