"""Sparse multivariate Laurent polynomials over Z.

A polynomial lives in a variable context ``(nt, nz)``: ``nt`` variables
``t1..t{nt}`` followed by ``nz`` variables ``z1..z{nz}``.  Exponent vectors
are stored as one flat tuple of length ``nt + nz`` (t-block first), so the
lexicographic order on the tuple is the lexicographic order on
``(t_part, z_part)``.

Values are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from operator import add

from .report import CongruenceReport

INT64_MAX = 2**63 - 1

Exp = tuple[int, ...]


class ContextMismatch(ValueError):
    """Raised when polynomials from different variable contexts are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class ModulusContext:
    """An odd prime ``p`` and a precision ``s``; the modulus is ``p**s``."""

    p: int
    s: int

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.s < 1:
            raise ValueError(f"s must be positive, got {self.s}")

    @property
    def modulus(self) -> int:
        return self.p**self.s


def _check_exp(e: Exp) -> Exp:
    for x in e:
        if x > INT64_MAX or x < -INT64_MAX - 1:
            raise OverflowError(f"exponent {x} exceeds the signed 64-bit range")
    return e


class LaurentPoly:
    __slots__ = ("nt", "nz", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, int] | Iterable[tuple[Exp, int]] = (), nt: int = 1, nz: int = 0):
        self.nt = nt
        self.nz = nz
        n = nt + nz
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exp, int] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise ContextMismatch(f"exponent {e} does not fit context ({nt}, {nz})")
            if c:
                acc[e] = acc.get(e, 0) + c
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Exp, int], nt: int, nz: int) -> LaurentPoly:
        # terms already cleaned of zeros and correctly shaped
        obj = cls.__new__(cls)
        obj.nt = nt
        obj.nz = nz
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c: int, nt: int = 1, nz: int = 0) -> LaurentPoly:
        return cls._raw({(0,) * (nt + nz): c} if c else {}, nt, nz)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: int = 1, nt: int = 1, nz: int = 0) -> LaurentPoly:
        return cls({tuple(exp): coeff}, nt, nz)

    @classmethod
    def gens(cls, nt: int, nz: int) -> tuple[LaurentPoly, ...]:
        """The variables ``t1..t{nt}, z1..z{nz}`` as polynomials."""
        n = nt + nz
        return tuple(cls._raw({tuple(int(i == j) for j in range(n)): 1}, nt, nz) for i in range(n))

    @classmethod
    def from_univariate(cls, coeffs: Mapping[int, int] | Sequence[int], nt: int = 0, nz: int = 1, var: int = 0) -> LaurentPoly:
        """Polynomial in one variable (index ``var`` of the flat exponent) from a degree->coeff map."""
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        n = nt + nz
        out = {}
        for d, c in items:
            if c:
                e = [0] * n
                e[var] = d
                out[tuple(e)] = c
        return cls._raw(out, nt, nz)

    # -- basic protocol ---------------------------------------------------

    @property
    def context(self) -> tuple[int, int]:
        return (self.nt, self.nz)

    @property
    def terms(self) -> Mapping[Exp, int]:
        return self._terms

    def __iter__(self) -> Iterator[tuple[Exp, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == LaurentPoly.constant(other, self.nt, self.nz)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.context == other.context and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nt, self.nz, frozenset(self._terms.items())))
        return self._hash

    def coeff(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def sorted_terms(self) -> list[tuple[Exp, int]]:
        return sorted(self._terms.items())

    def leading_term(self) -> tuple[Exp, int]:
        """First term in the lexicographic monomial order."""
        return min(self._terms.items())

    def _same(self, other: LaurentPoly) -> None:
        if self.context != other.context:
            raise ContextMismatch(f"context {self.context} vs {other.context}")

    def _lift(self, other) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.nt, self.nz)
        if isinstance(other, LaurentPoly):
            self._same(other)
            return other
        return NotImplemented

    # -- ring operations --------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, self.nt, self.nz)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self.nt, self.nz)

    def __sub__(self, other) -> LaurentPoly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def scale(self, k: int) -> LaurentPoly:
        if not k:
            return LaurentPoly._raw({}, self.nt, self.nz)
        return LaurentPoly._raw({e: c * k for e, c in self._terms.items()}, self.nt, self.nz)

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: LaurentPoly, modulus: int | None = None) -> LaurentPoly:
        """Product, optionally with coefficients reduced into ``[0, modulus)``."""
        self._same(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        acc: dict[Exp, int] = defaultdict(int)
        if self.nt + self.nz == 1:
            for (ea,), ca in a.items():
                for (eb,), cb in b.items():
                    acc[(ea + eb,)] += ca * cb
        else:
            for ea, ca in a.items():
                for eb, cb in b.items():
                    acc[tuple(map(add, ea, eb))] += ca * cb
        if modulus is None:
            out = {e: c for e, c in acc.items() if c}
        else:
            out = {}
            for e, c in acc.items():
                c %= modulus
                if c:
                    out[e] = c
        return LaurentPoly._raw(out, self.nt, self.nz)

    def __pow__(self, n: int) -> LaurentPoly:
        return self.pow(n)

    def pow(self, n: int, modulus: int | None = None) -> LaurentPoly:
        """n-th power by repeated squaring."""
        if n < 0:
            raise ValueError("negative powers are not supported")
        if len(self._terms) == 1:
            ((e, c),) = self._terms.items()
            e = _check_exp(tuple(x * n for x in e))
            c = c**n if modulus is None else pow(c, n, modulus)
            return LaurentPoly._raw({e: c} if c else {}, self.nt, self.nz)
        result = LaurentPoly.constant(1, self.nt, self.nz)
        base = self if modulus is None else self.reduce(modulus)
        while n:
            if n & 1:
                result = result.mul(base, modulus)
            n >>= 1
            if n:
                base = base.mul(base, modulus)
        return result

    # -- structural operations --------------------------------------------

    def substitute_power(self, q: int, block: str = "all") -> LaurentPoly:
        """Replace every variable ``v`` by ``v**q`` (``block``: 'all', 't' or 'z')."""
        if q < 1:
            raise ValueError("q must be positive")
        if q == 1:
            return self
        if block == "all":
            out = {_check_exp(tuple(x * q for x in e)): c for e, c in self._terms.items()}
        elif block in ("t", "z"):
            lo, hi = (0, self.nt) if block == "t" else (self.nt, self.nt + self.nz)
            out = {
                _check_exp(tuple(x * q if lo <= i < hi else x for i, x in enumerate(e))): c
                for e, c in self._terms.items()
            }
        else:
            raise ValueError(f"unknown block {block!r}")
        return LaurentPoly._raw(out, self.nt, self.nz)

    def coeff_t(self, e: Sequence[int]) -> LaurentPoly:
        """The z-only polynomial (context ``(0, nz)``) multiplying ``t**e``."""
        e = tuple(e)
        if len(e) != self.nt:
            raise ContextMismatch(f"t-exponent {e} has wrong length for nt={self.nt}")
        nt = self.nt
        out = {ex[nt:]: c for ex, c in self._terms.items() if ex[:nt] == e}
        return LaurentPoly._raw(out, 0, self.nz)

    def ct_t(self) -> LaurentPoly:
        """Constant term with respect to the t-block."""
        return self.coeff_t((0,) * self.nt)

    def t_parts(self) -> set[Exp]:
        return {e[: self.nt] for e in self._terms}

    def split_t(self) -> dict[Exp, LaurentPoly]:
        """Group by t-exponent: ``{t_exp: z-only coefficient polynomial}``."""
        groups: dict[Exp, dict[Exp, int]] = defaultdict(dict)
        nt = self.nt
        for e, c in self._terms.items():
            groups[e[:nt]][e[nt:]] = c
        return {k: LaurentPoly._raw(v, 0, self.nz) for k, v in groups.items()}

    def with_t(self, nt: int) -> LaurentPoly:
        """Embed a z-only polynomial into a context with ``nt`` t-variables."""
        if self.nt != 0:
            raise ContextMismatch("with_t expects a z-only polynomial")
        pad = (0,) * nt
        return LaurentPoly._raw({pad + e: c for e, c in self._terms.items()}, nt, self.nz)

    def reduce(self, modulus: int) -> LaurentPoly:
        out = {}
        for e, c in self._terms.items():
            c %= modulus
            if c:
                out[e] = c
        return LaurentPoly._raw(out, self.nt, self.nz)

    def derivative(self, var: int) -> LaurentPoly:
        """Partial derivative with respect to flat variable index ``var``."""
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                e2 = e[:var] + (k - 1,) + e[var + 1 :]
                out[e2] = c * k
        return LaurentPoly._raw(out, self.nt, self.nz)

    def evaluate(self, point: Sequence[int], modulus: int | None = None) -> int:
        """Value at an integer point (all variables), optionally mod ``modulus``.

        Negative exponents need the coordinate to be invertible mod ``modulus``.
        """
        if len(point) != self.nt + self.nz:
            raise ContextMismatch("point has the wrong number of coordinates")
        cache: list[dict[int, int]] = [{} for _ in point]
        total = 0
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    v = cache[i].get(k)
                    if v is None:
                        if modulus is None:
                            if k < 0:
                                raise ValueError("negative exponent needs a modulus")
                            v = point[i] ** k
                        else:
                            v = pow(point[i], k, modulus)
                        cache[i][k] = v
                    term *= v
            total += term
            if modulus is not None:
                total %= modulus
        return total

    def specialize(self, values: Mapping[int, int]) -> LaurentPoly:
        """Set the flat variables in ``values`` to integers; the context is kept."""
        out: dict[Exp, int] = defaultdict(int)
        for e, c in self._terms.items():
            v = c
            e2 = list(e)
            for i, x in values.items():
                k = e[i]
                if k:
                    if k < 0:
                        raise ValueError("cannot specialize a negative exponent")
                    v *= x**k
                    e2[i] = 0
            if v:
                out[tuple(e2)] += v
        return LaurentPoly._raw({e: c for e, c in out.items() if c}, self.nt, self.nz)

    def min_valuation(self, p: int) -> int | None:
        """Minimum p-adic valuation of the coefficients (None for zero)."""
        from .report import valuation

        vals = [valuation(c, p) for c in self._terms.values()]
        return min(vals) if vals else None

    def divisible_by(self, m: int) -> bool:
        return all(c % m == 0 for c in self._terms.values())

    def max_abs_exponent(self) -> int:
        return max((abs(x) for e in self._terms for x in e), default=0)

    # -- text -------------------------------------------------------------

    def var_names(self) -> list[str]:
        return [f"t{i + 1}" for i in range(self.nt)] + [f"z{i + 1}" for i in range(self.nz)]

    def monomial_text(self, exp: Exp) -> str:
        parts = []
        for name, k in zip(self.var_names(), exp):
            if k == 1:
                parts.append(name)
            elif k:
                parts.append(f"{name}^{k}")
        return "*".join(parts) if parts else "1"

    def to_text(self) -> str:
        """Canonical text: ``coeff*t1^e1*...*z1^f1`` terms in lexicographic order."""
        if not self._terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = self.monomial_text(e)
            body = str(abs(c)) if mono == "1" else f"{abs(c)}*{mono}"
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r}, nt={self.nt}, nz={self.nz})"

    __str__ = to_text


# -- module-level operations ---------------------------------------------


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a.mul(b)


def lp_pow(a: LaurentPoly, n: int) -> LaurentPoly:
    return a.pow(n)


def lp_substitute_power(a: LaurentPoly, q: int) -> LaurentPoly:
    return a.substitute_power(q)


def lp_coeff_t(a: LaurentPoly, e: Sequence[int]) -> LaurentPoly:
    return a.coeff_t(e)


def lp_reduce_mod(a: LaurentPoly, m: ModulusContext) -> LaurentPoly:
    return a.reduce(m.modulus)


def lp_congruent(a: LaurentPoly, b: LaurentPoly, m: ModulusContext, description: str = "") -> CongruenceReport:
    """Check ``a == b (mod p**s)`` coefficientwise.

    On failure the witness is the lexicographically first monomial of the
    reduced difference together with its residue in ``[0, p**s)``.
    """
    a._same(b)
    diff = (a - b).reduce(m.modulus)
    desc = description or "polynomial congruence"
    if diff.is_zero():
        return CongruenceReport(desc, (m.p, m.s), True)
    exp, residue = diff.leading_term()
    return CongruenceReport(desc, (m.p, m.s), False, (diff.monomial_text(exp), residue))


def coeff_t_of_product(a: LaurentPoly, b: LaurentPoly, e: Sequence[int], modulus: int | None = None) -> LaurentPoly:
    """``coeff_t(a*b, e)`` without forming the full product."""
    a._same(b)
    e = tuple(e)
    bt = b.split_t()
    acc: dict[Exp, int] = defaultdict(int)
    for ta, za in a.split_t().items():
        need = tuple(x - y for x, y in zip(e, ta))
        zb = bt.get(need)
        if zb is None:
            continue
        for ea, ca in za.terms.items():
            for eb, cb in zb.terms.items():
                acc[tuple(map(add, ea, eb))] += ca * cb
    if modulus is None:
        out = {k: v for k, v in acc.items() if v}
    else:
        out = {k: v % modulus for k, v in acc.items() if v % modulus}
    return LaurentPoly._raw(out, 0, a.nz)
