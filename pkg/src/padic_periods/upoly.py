"""Dense univariate integer polynomials in ``x``.

Every approximation polynomial in one variable is dense, so a coefficient
tuple beats the sparse Laurent representation by a wide margin here.
"""

from __future__ import annotations

from collections.abc import Iterable

from .laurent import LaurentPoly
from .report import CongruenceReport


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class XPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(list(coeffs))

    @classmethod
    def constant(cls, c: int) -> XPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> XPoly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = XPoly.constant(other)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def _lift(self, other) -> XPoly:
        return XPoly.constant(other) if isinstance(other, int) else other

    def __add__(self, other) -> XPoly:
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return XPoly(out)

    __radd__ = __add__

    def __neg__(self) -> XPoly:
        return XPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> XPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> XPoly:
        return self._lift(other) - self

    def scale(self, k: int) -> XPoly:
        return XPoly(k * c for c in self.coeffs)

    def __mul__(self, other) -> XPoly:
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: XPoly, modulus: int | None = None) -> XPoly:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return XPoly()
        # loop over the sparser factor
        if sum(1 for c in a if c) < sum(1 for c in b if c):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for j, cb in enumerate(b):
            if cb:
                for i, ca in enumerate(a):
                    out[i + j] += ca * cb
        if modulus is not None:
            out = [c % modulus for c in out]
        return XPoly(out)

    def __pow__(self, n: int) -> XPoly:
        result, base = XPoly.constant(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, q: int) -> XPoly:
        """``f(x**q)``."""
        if q == 1 or len(self.coeffs) <= 1:
            return self
        out = [0] * ((len(self.coeffs) - 1) * q + 1)
        for i, c in enumerate(self.coeffs):
            out[i * q] = c
        return XPoly(out)

    def derivative(self) -> XPoly:
        return XPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def shift(self, k: int) -> XPoly:
        """``x**k * f``."""
        return XPoly([0] * k + list(self.coeffs)) if self.coeffs else self

    def reduce(self, modulus: int) -> XPoly:
        return XPoly(c % modulus for c in self.coeffs)

    def divisible_by(self, m: int) -> bool:
        return all(c % m == 0 for c in self.coeffs)

    def evaluate(self, x: int, modulus: int | None = None) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
            if modulus is not None:
                acc %= modulus
        return acc

    def min_valuation(self, p: int) -> int | None:
        from .report import valuation

        vals = [valuation(c, p) for c in self.coeffs if c]
        return min(vals) if vals else None

    def to_laurent(self, nt: int = 0, nz: int = 1, var: int | None = None) -> LaurentPoly:
        return LaurentPoly.from_univariate(dict(enumerate(self.coeffs)), nt, nz, nt if var is None else var)

    @classmethod
    def from_laurent(cls, a: LaurentPoly, var: int = 0) -> XPoly:
        out: dict[int, int] = {}
        for e, c in a.terms.items():
            if any(x for i, x in enumerate(e) if i != var) or e[var] < 0:
                raise ValueError("not a polynomial in a single variable")
            out[e[var]] = c
        n = max(out, default=-1) + 1
        return cls(out.get(i, 0) for i in range(n))

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = monomial_text(k)
            body = str(abs(c)) if k == 0 else f"{abs(c)}*{mono}"
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(("+ " if c > 0 else "- ") + body)
        return " ".join(out)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"XPoly({self.to_text()!r})"


def monomial_text(k: int) -> str:
    return "1" if k == 0 else ("x" if k == 1 else f"x^{k}")


def x_congruent(a: XPoly, b: XPoly, p: int, s: int, description: str, **kw) -> CongruenceReport:
    """``a == b (mod p**s)``; the witness is the lowest-degree offending monomial."""
    q = p**s
    diff = a - b
    for k, c in enumerate(diff.coeffs):
        if c % q:
            return CongruenceReport(description, (p, s), False, (monomial_text(k), c % q), **kw)
    return CongruenceReport(description, (p, s), True, observed_valuation=diff.min_valuation(p), **kw)


def x_equal(a: XPoly, b: XPoly, description: str, **kw) -> CongruenceReport:
    """Exact identity with the lowest-degree differing monomial as witness."""
    diff = a - b
    for k, c in enumerate(diff.coeffs):
        if c:
            return CongruenceReport(description, None, False, (monomial_text(k), c), **kw)
    return CongruenceReport(description, None, True, **kw)


def binomial_row(n: int, upto: int | None = None) -> list[int]:
    """``[C(n,0), ..., C(n,upto)]`` by the multiplicative recurrence."""
    upto = n if upto is None else min(upto, n)
    row = [1]
    c = 1
    for k in range(upto):
        c = c * (n - k) // (k + 1)
        row.append(c)
    return row


def hyp_sum(A: int, B: int, modulus: int | None = None) -> XPoly:
    """``sum_k C(A,k) C(B,k) x**k``, the terminating series 2F1(-A,-B;1;x)."""
    if A < 0 or B < 0:
        raise ValueError("terminating sums need nonnegative parameters")
    ra = binomial_row(A, min(A, B))
    rb = ra if A == B else binomial_row(B, min(A, B))
    if modulus is None:
        return XPoly(x * y for x, y in zip(ra, rb))
    return XPoly(x * y % modulus for x, y in zip(ra, rb))

