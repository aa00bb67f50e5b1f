"""Structured pass/fail verdicts shared by every verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CongruenceReport:
    """Verdict for one checked identity.

    ``modulus`` is ``(p, s)`` for a congruence modulo ``p**s`` and ``None``
    for an exact integer identity.  ``witness`` is ``(monomial, residue)`` and
    is only present on failure.
    """

    description: str
    modulus: tuple[int, int] | None
    passed: bool
    witness: tuple[str, int] | None = None
    check_id: str = ""
    paper_ref: str = ""
    observed_valuation: int | None = None
    details: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.passed and self.witness is not None:
            raise ValueError("a passing report carries no witness")

    def __bool__(self) -> bool:
        return self.passed

    def relabel(self, check_id: str, paper_ref: str | None = None) -> CongruenceReport:
        return CongruenceReport(
            description=self.description,
            modulus=self.modulus,
            passed=self.passed,
            witness=self.witness,
            check_id=check_id,
            paper_ref=self.paper_ref if paper_ref is None else paper_ref,
            observed_valuation=self.observed_valuation,
            details=self.details,
        )

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.check_id or self.description,
            "description": self.description,
            "paper_ref": self.paper_ref,
            "modulus": None if self.modulus is None else {"p": self.modulus[0], "s": self.modulus[1]},
            "pass": self.passed,
        }
        if self.witness is not None:
            out["witness"] = {"monomial": self.witness[0], "residue": self.witness[1]}
        if self.observed_valuation is not None:
            out["observed_valuation"] = self.observed_valuation
        if self.details:
            out["details"] = self.details
        return out


def exact_report(description: str, lhs, rhs, **kw) -> CongruenceReport:
    """Report for the exact identity ``lhs == rhs`` of two polynomials."""
    diff = lhs - rhs
    if diff.is_zero():
        return CongruenceReport(description, None, True, **kw)
    exp, coeff = diff.leading_term()
    return CongruenceReport(description, None, False, (diff.monomial_text(exp), coeff), **kw)


def scalar_report(description: str, value: int, p: int, s: int, **kw) -> CongruenceReport:
    """Report for ``value == 0 (mod p**s)`` with the observed valuation attached."""
    residue = value % p**s
    val = valuation(value, p)
    if residue == 0:
        return CongruenceReport(description, (p, s), True, observed_valuation=val, **kw)
    return CongruenceReport(description, (p, s), False, ("1", residue), observed_valuation=val, **kw)


def valuation(n: int, p: int, cap: int | None = None) -> int | None:
    """p-adic valuation of an integer; ``None`` stands for +infinity (n == 0).

    With ``cap`` set, zero and anything divisible by ``p**cap`` report ``cap``.
    """
    if n == 0:
        return cap
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v
