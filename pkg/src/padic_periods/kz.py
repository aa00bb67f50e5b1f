"""The three-point KZ system and its p^s-approximation solutions.

Polynomials live in the z-only context ``(nt, nz) = (0, 3)``; the master
polynomials add one t-variable.  ``M`` is ``(p**s - 1) / 2`` throughout, so
``-M`` plays the part of ``1/2`` modulo ``p**s``.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

from .hyperg import FamilyTag, family_polynomial
from .laurent import LaurentPoly, coeff_t_of_product
from .padic import PadicInt, domain_membership, teichmuller, unit_inverse
from .report import CongruenceReport, exact_report
from .upoly import XPoly

Matrix = tuple[tuple[int, int, int], ...]

OMEGA: dict[tuple[int, int], Matrix] = {
    (0, 1): ((-1, 1, 0), (1, -1, 0), (0, 0, 0)),
    (0, 2): ((-1, 0, 1), (0, 0, 0), (1, 0, -1)),
    (1, 2): ((0, 0, 0), (0, -1, 1), (0, 1, -1)),
}

Z1, Z2, Z3 = LaurentPoly.gens(0, 3)
ZERO = LaurentPoly((), 0, 3)
ONE = LaurentPoly.constant(1, 0, 3)


def omega(i: int, j: int) -> Matrix:
    """``Omega_ij`` with zero-based indices; symmetric in ``i, j``."""
    return OMEGA[(min(i, j), max(i, j))]


def _half_m(p: int, s: int) -> int:
    if p % 2 == 0:
        raise ValueError("p must be odd")
    return (p**s - 1) // 2


def _linear(i: int, nt: int = 1) -> LaurentPoly:
    """``t - z_i`` in the context ``(nt, 3)``."""
    t = LaurentPoly.monomial((1,) + (0,) * 3, 1, 1, 3)
    z = LaurentPoly.monomial((0,) + tuple(int(k == i) for k in range(3)), 1, 1, 3)
    return t - z


@dataclass(frozen=True)
class KZApprox:
    p: int
    s: int
    T: LaurentPoly
    I: tuple[LaurentPoly, LaurentPoly, LaurentPoly]
    U: LaurentPoly

    @property
    def M(self) -> int:
        return (self.p**self.s - 1) // 2

    @property
    def gradient(self) -> tuple[LaurentPoly, ...]:
        return tuple(self.T.derivative(i) for i in range(3))


def t_closed_form(p: int, s: int) -> LaurentPoly:
    """The signed trinomial sum for ``T_s``."""
    M = _half_m(p, s)
    row = [1]
    for k in range(M):
        row.append(row[-1] * (M - k) // (k + 1))
    sign = -1 if M % 2 else 1
    terms = {}
    for k1 in range(M + 1):
        for k2 in range(M + 1 - k1):
            k3 = M - k1 - k2
            terms[(k1, k2, k3)] = sign * row[k1] * row[k2] * row[k3]
    return LaurentPoly(terms, 0, 3)


def _coeff_of_product(factors: Sequence[tuple[LaurentPoly, int]], e: int) -> LaurentPoly:
    """Coefficient of ``t**e`` in ``prod f**n``, contracting the last factor lazily."""
    *head, (last, n_last) = factors
    acc = LaurentPoly.constant(1, 1, 3)
    for f, n in head:
        acc = acc * f**n
    return coeff_t_of_product(acc, last**n_last, (e,))


@lru_cache(maxsize=None)
def kz_build(p: int, s: int) -> KZApprox:
    """Extract ``T_s``, ``I_s`` and ``U_s`` as coefficients of ``t**(p^s-1)``."""
    M = _half_m(p, s)
    if s == 0:
        return KZApprox(p, 0, ONE, (ZERO, ZERO, ZERO), ONE)
    e = p**s - 1
    L = [_linear(i) for i in range(3)]
    T = _coeff_of_product([(L[0], M), (L[1], M), (L[2], M)], e)
    I = tuple(
        _coeff_of_product([(L[j], M - (j == i)) for j in range(3) if j != i] + [(L[i], M - 1)], e)
        for i in range(3)
    )
    # Phi_s(t + z_3, z) = ((t - (z1-z3)) (t - (z2-z3)) t)^M
    t = LaurentPoly.monomial((1, 0, 0, 0), 1, 1, 3)
    z3 = LaurentPoly.monomial((0, 0, 0, 1), 1, 1, 3)
    U = _coeff_of_product([(t, M), (L[0] + z3, M), (L[1] + z3, M)], e)
    return KZApprox(p, s, T, I, U)


# -- exact identities ---------------------------------------------------------------


def closed_form_check(p: int, s: int) -> CongruenceReport:
    a = kz_build(p, s)
    return exact_report(
        f"T_s extracted from Phi_s equals the trinomial sum (p={p}, s={s})",
        a.T,
        t_closed_form(p, s),
        check_id="kz-trinomial",
        paper_ref="T_s as signed trinomial-binomial sum",
    )


def gradient_identity_check(p: int, s: int) -> CongruenceReport:
    """``grad T_s = ((1-p^s)/2) I_s`` exactly."""
    a = kz_build(p, s)
    for i in range(3):
        rep = exact_report(
            f"dT_s/dz_{i + 1} = (1-p^s)/2 * I_s,{i + 1} (p={p}, s={s})",
            a.gradient[i],
            a.I[i].scale(-a.M),
            check_id="kz-gradient",
            paper_ref="grad T_s = (1-p^s)/2 I_s",
        )
        if not rep.passed:
            return rep
    return rep


def _permute(poly: LaurentPoly, perm: Sequence[int]) -> LaurentPoly:
    return LaurentPoly({tuple(e[perm[k]] for k in range(3)): c for e, c in poly.terms.items()}, 0, 3)


def symmetry_check(p: int, s: int) -> CongruenceReport:
    T = kz_build(p, s).T
    for perm in itertools.permutations(range(3)):
        rep = exact_report(
            f"T_s invariant under z -> z{perm} (p={p}, s={s})",
            _permute(T, perm),
            T,
            check_id="kz-symmetry",
            paper_ref="T_s symmetric in z_1, z_2, z_3",
        )
        if not rep.passed:
            return rep
    return rep


def restriction_check(p: int, s: int) -> CongruenceReport:
    """``T_s(1, z_2, 0) = P_s(z_2)``."""
    T = kz_build(p, s).T
    line = XPoly.from_laurent(T.specialize({0: 1, 2: 0}), var=1)
    P = family_polynomial(FamilyTag.HALF, p, s)
    diff = line - P
    kw = dict(check_id="kz-restriction", paper_ref="T_s(1,z_2,0) = P_s(z_2)")
    desc = f"T_s(1,z2,0) = P_s(z2) (p={p}, s={s})"
    for k, c in enumerate(diff.coeffs):
        if c:
            return CongruenceReport(desc, None, False, (f"z2^{k}", c), **kw)
    return CongruenceReport(desc, None, True, **kw)


def u_factorization_check(p: int, s: int) -> CongruenceReport:
    """``U_s = (z1-z3)^M P_s((z2-z3)/(z1-z3))`` with the denominator cleared."""
    a = kz_build(p, s)
    P = family_polynomial(FamilyTag.HALF, p, s)
    x, y = Z1 - Z3, Z2 - Z3
    rhs = ZERO
    for k, c in enumerate(P.coeffs):
        if c:
            rhs = rhs + (x ** (a.M - k) * y**k).scale(c)
    return exact_report(
        f"U_s = (z1-z3)^M P_s((z2-z3)/(z1-z3)) (p={p}, s={s})",
        a.U,
        rhs,
        check_id="kz-u-factorization",
        paper_ref="U_s as (z1-z3)^M times P_s at the cross-ratio",
    )


def _line(poly: LaurentPoly) -> XPoly:
    return XPoly.from_laurent(poly.specialize({0: 1, 2: 0}), var=1)


def line_equality_check(p: int, s: int, i: int, modulus: bool = False) -> CongruenceReport:
    """``d_iT_s * U_s = d_iU_s * T_s`` on the line ``z1 = 1, z3 = 0``.

    ``i`` is one-based.  With ``modulus`` set the identity is only asked
    modulo ``p**s``.
    """
    a = kz_build(p, s)
    T, U = a.T, a.U
    lhs = _line(T.derivative(i - 1)) * _line(U)
    rhs = _line(U.derivative(i - 1)) * _line(T)
    kw = dict(check_id=f"kz-line-equality-{i}" + ("-mod" if modulus else ""), paper_ref="d_iT/T = d_iU/U on z1=1, z3=0")
    desc = f"d{i}T_s/T_s = d{i}U_s/U_s on the line z1=1, z3=0 (p={p}, s={s})"
    diff = lhs - rhs
    q = p**s if modulus else None
    for k, c in enumerate(diff.coeffs):
        if (c % q if q else c):
            return CongruenceReport(
                desc, (p, s) if modulus else None, False, (f"z2^{k}", c % q if q else c),
                observed_valuation=diff.min_valuation(p), **kw,
            )
    return CongruenceReport(desc, (p, s) if modulus else None, True, **kw)


# -- congruences modulo p^s ---------------------------------------------------------


def _cleared_denominator(i: int, skip: int | None = None) -> LaurentPoly:
    z = (Z1, Z2, Z3)
    out = ONE
    for j in range(3):
        if j != i and j != skip:
            out = out * (z[i] - z[j])
    return out


def _report_vector(desc: str, vec: Sequence[LaurentPoly], p: int, s: int, **kw) -> CongruenceReport:
    q = p**s
    vals = []
    for comp in vec:
        for e, c in comp.sorted_terms():
            if c % q:
                return CongruenceReport(desc, (p, s), False, (comp.monomial_text(e), c % q), **kw)
        v = comp.min_valuation(p)
        if v is not None:
            vals.append(v)
    return CongruenceReport(desc, (p, s), True, observed_valuation=min(vals) if vals else None, **kw)


def kz_residual(approx: KZApprox) -> list[CongruenceReport]:
    """The three cleared KZ residuals and the linear constraint, all mod ``p**s``."""
    p, s, M, I = approx.p, approx.s, approx.M, approx.I
    out = []
    for i in range(3):
        D = _cleared_denominator(i)
        res = [D * I[r].derivative(i) for r in range(3)]
        for j in range(3):
            if j == i:
                continue
            Dj = _cleared_denominator(i, skip=j).scale(M)
            W = omega(i, j)
            for r in range(3):
                for c in range(3):
                    if W[r][c]:
                        res[r] = res[r] + (Dj * I[c]).scale(W[r][c])
        out.append(
            _report_vector(
                f"prod_j (z{i + 1}-z_j) (d/dz{i + 1} - H_{i + 1}) I_s == 0 mod {p}^{s}",
                res, p, s, check_id=f"kz-residual-{i + 1}", paper_ref="I_s solves the KZ system mod p^s",
            )
        )
    total = I[0] + I[1] + I[2]
    rep = _report_vector(
        f"I_s,1 + I_s,2 + I_s,3 == 0 mod {p}^{s}", [total], p, s,
        check_id="kz-constraint", paper_ref="I_1 + I_2 + I_3 = 0 mod p^s",
    )
    out.append(rep)
    return out


def gradient_sum_check(p: int, s: int) -> CongruenceReport:
    a = kz_build(p, s)
    return _report_vector(
        f"sum_i dT_s/dz_i == 0 mod {p}^{s}", [a.gradient[0] + a.gradient[1] + a.gradient[2]], p, s,
        check_id="kz-gradient-sum", paper_ref="sum of partials of T_s vanishes mod p^s",
    )


def kz_dwork_congruence(p: int, s: int, which: str = "T") -> CongruenceReport:
    """``X_{s+1}(z) X_{s-1}(z^p) == X_s(z) X_s(z^p)`` mod ``p**s`` for ``X`` in ``{T, U}``."""
    if s < 1:
        raise ValueError("s must be positive")
    q = p**s

    def X(k: int) -> LaurentPoly:
        a = kz_build(p, k)
        return (a.T if which == "T" else a.U).reduce(q)

    lhs = X(s + 1).mul(X(s - 1).substitute_power(p), q)
    rhs = X(s).mul(X(s).substitute_power(p), q)
    return _report_vector(
        f"{which}_(s+1)(z) {which}_(s-1)(z^p) == {which}_s(z) {which}_s(z^p) mod {p}^{s}",
        [lhs - rhs], p, s,
        check_id=f"kz-dwork-{which}", paper_ref=f"Dwork congruence for {which}_s in three variables",
    )


# -- evaluation at p-adic points -----------------------------------------------------


def _eval(poly: LaurentPoly, z: Sequence[PadicInt]) -> PadicInt:
    p, S = z[0].p, z[0].precision
    return PadicInt(p, S, poly.evaluate([v.residue for v in z], p**S))


def _check_point(z: Sequence[PadicInt]) -> None:
    if len({(v.p, v.precision) for v in z}) != 1:
        raise ValueError("coordinates must share p and precision")


@dataclass
class EtaValues:
    s: int
    first: tuple[PadicInt, PadicInt, PadicInt]
    second: tuple[tuple[PadicInt, ...], ...] | None = None


def eta_evaluate(p: int, s_max: int, z: Sequence[PadicInt], order: int = 1) -> list[EtaValues]:
    """``eta^(i)_s = d_iT_s/T_s`` (and ``eta^(ij)_s`` for ``order=2``) for ``s = 1..s_max``."""
    _check_point(z)
    if not domain_membership(z, "kz"):
        raise ValueError(f"{[v.residue for v in z]} is outside the KZ domain")
    out = []
    for s in range(1, s_max + 1):
        a = kz_build(p, s)
        Tz = _eval(a.T, z)
        if not Tz.is_unit():
            raise ArithmeticError(f"T_{s}(z) is not a unit inside the domain")
        inv = unit_inverse(Tz)
        first = tuple(_eval(g, z) * inv for g in a.gradient)
        second = None
        if order == 2:
            second = tuple(tuple(_eval(a.gradient[i].derivative(j), z) * inv for j in range(3)) for i in range(3))
        out.append(EtaValues(s, first, second))
    return out


def eta_relations_check(p: int, s: int, z: Sequence[PadicInt]) -> CongruenceReport:
    """Sum rules for ``eta^(i)`` and ``eta^(ji)`` mod ``p**s`` and the log-derivative rule."""
    ev = eta_evaluate(p, s, z, order=2)[-1]
    desc = f"eta relations at z={[v.residue for v in z]} mod {p}^{s}"
    kw = dict(check_id="kz-eta-relations", paper_ref="sum rules for eta and eta^(ij)")
    q = p**s
    total = sum((e.residue for e in ev.first), 0) % q
    if total:
        return CongruenceReport(desc, (p, s), False, ("sum eta^(i)", total), **kw)
    for j in range(3):
        r = sum(ev.second[j][i].residue for i in range(3)) % q
        if r:
            return CongruenceReport(desc, (p, s), False, (f"sum_i eta^({j + 1}i)", r), **kw)
    # d_j eta^(i) from the quotient rule against eta^(ji) - eta^(i) eta^(j)
    a = kz_build(p, s)
    Tz = _eval(a.T, z)
    for i, j in itertools.product(range(3), repeat=2):
        num = _eval(a.gradient[i].derivative(j), z) * Tz - _eval(a.gradient[i], z) * _eval(a.gradient[j], z)
        d_eta = num * unit_inverse(Tz * Tz)
        r = (d_eta - (ev.second[j][i] - ev.first[i] * ev.first[j])).with_precision(max(s - 1, 1))
        if s > 1 and r != 0:
            return CongruenceReport(desc, (p, s), False, (f"d{j + 1} eta^({i + 1})", r.residue), **kw)
    return CongruenceReport(desc, (p, s), True, **kw)


def _h_matrix(i: int, z: Sequence[PadicInt]) -> list[list[PadicInt]]:
    """``H_i(z)`` at a point; ``1/2`` and ``1/(z_i - z_j)`` are inverted p-adically."""
    half = unit_inverse(z[0] * 0 + 2)
    H = [[z[0] * 0 for _ in range(3)] for _ in range(3)]
    for j in range(3):
        if j == i:
            continue
        w = unit_inverse(z[i] - z[j]) * half
        W = omega(i, j)
        for r in range(3):
            for c in range(3):
                if W[r][c]:
                    H[r][c] = H[r][c] + w * W[r][c]
    return H


def teichmuller_samples(p: int, S: int, cap: int = 50) -> list[tuple[PadicInt, ...]]:
    """Triples of Teichmüller lifts of distinct residues that lie in the KZ domain."""
    lifts = [PadicInt(p, S, 0)] + [teichmuller(a, p, S) for a in range(1, p)]
    out = []
    for trip in itertools.permutations(lifts, 3):
        if domain_membership(trip, "kz"):
            out.append(trip)
            if len(out) >= cap:
                break
    return out


def eta_kz_system_check(p: int, s: int, samples: Sequence[Sequence[PadicInt]] | None = None) -> CongruenceReport:
    """Row ``j`` of the second derivatives equals ``H_j`` applied to ``eta``, mod ``p**s``."""
    samples = teichmuller_samples(p, s) if samples is None else samples
    desc = f"(eta^(j1), eta^(j2), eta^(j3)) == H_j eta mod {p}^{s} at sampled points"
    kw = dict(check_id="kz-eta-system", paper_ref="second-order system for eta (Omega_32 in the third row)")
    checked = 0
    for z in samples:
        if any(z[i].residue % p == z[j].residue % p for i, j in ((0, 1), (0, 2), (1, 2))):
            raise ValueError(f"coordinates of {[v.residue for v in z]} collide mod {p}")
        ev = eta_evaluate(p, s, z, order=2)[-1]
        for j in range(3):
            H = _h_matrix(j, z)
            for r in range(3):
                rhs = sum((H[r][c] * ev.first[c] for c in range(3)), z[0] * 0)
                diff = (ev.second[j][r] - rhs).with_precision(s)
                if diff != 0:
                    return CongruenceReport(
                        desc, (p, s), False, (f"eta^({j + 1}{r + 1}) at z={[v.residue for v in z]}", diff.residue),
                        details={"samples": checked}, **kw,
                    )
        checked += 1
    return CongruenceReport(desc, (p, s), True, details={"samples": checked}, **kw)


def nonvanishing_check(p: int, s: int, samples=None) -> CongruenceReport:
    """Some component of the finite-s eta vector is a unit at each sample."""
    samples = teichmuller_samples(p, s) if samples is None else samples
    desc = f"eta_s(z) has a unit component at sampled points (p={p}, s={s})"
    kw = dict(check_id="kz-eta-nonvanishing", paper_ref="eta vector nonzero on the domain")
    for z in samples:
        ev = eta_evaluate(p, s, z)[-1]
        if not any(e.is_unit() for e in ev.first):
            return CongruenceReport(desc, (p, 1), False, (f"z={[v.residue for v in z]}", 0), **kw)
    return CongruenceReport(desc, (p, 1), True, details={"samples": len(samples)}, **kw)


def kz_cauchy_check(p: int, s: int, samples=None) -> CongruenceReport:
    """``|Tbar_{s+1}(z)/Tbar_s(z^p) - Tbar_s(z)/Tbar_{s-1}(z^p)|_p <= p^-s``."""
    samples = teichmuller_samples(p, s + 1) if samples is None else samples
    desc = f"Cauchy rate of Tbar_(s+1)(z)/Tbar_s(z^p) at step s={s}, p={p}"
    kw = dict(check_id="kz-cauchy", paper_ref="Cauchy rate for the T-ratios")
    observed = []

    def tbar(k: int, pt) -> PadicInt:
        sign = -1 if ((p**k - 1) // 2) % 2 else 1
        return _eval(kz_build(p, k).T, pt) * sign

    for z in samples:
        zp = [v**p for v in z]
        ratio = lambda k: tbar(k + 1, z) / tbar(k, zp)  # noqa: E731
        v = (ratio(s) - ratio(s - 1)).valuation()
        observed.append(v)
        if v < s:
            return CongruenceReport(desc, (p, s), False, (f"z={[w.residue for w in z]}", v), observed_valuation=v, **kw)
    return CongruenceReport(
        desc, (p, s), True, observed_valuation=min(observed, default=None), details={"samples": len(samples)}, **kw
    )


def eta_at_base_point(p: int, s: int) -> CongruenceReport:
    """``eta^(2)_s(1,0,0) == 1/4`` mod ``p**s``."""
    z = (PadicInt(p, s, 1), PadicInt(p, s, 0), PadicInt(p, s, 0))
    eta2 = eta_evaluate(p, s, z)[-1].first[1]
    target = PadicInt.of(1, p, s) / 4
    diff = eta2 - target
    desc = f"eta^(2)_s(1,0,0) == 1/4 mod {p}^{s}"
    kw = dict(check_id="kz-eta-base", paper_ref="eta^(2)(1,0,0) = F'(0)/F(0) = 1/4")
    if diff == 0:
        return CongruenceReport(desc, (p, s), True, details={"eta2": eta2.residue}, **kw)
    return CongruenceReport(desc, (p, s), False, ("eta^(2)", diff.residue), **kw)


def omega_vector_compare(u: Sequence[PadicInt], p: int, s: int) -> CongruenceReport:
    """Compare ``grad U_s / U_s`` at ``z(u)`` with the closed vector in ``(u_1, u_2)``.

    ``U_s`` only depends on differences of the ``z_i``, so the point is taken
    as ``(u_1, u_1 u_2, 0)`` and ``u_3`` does not enter.
    """
    u1, u2 = u[0], u[1]
    if not u1.is_unit():
        raise ValueError("u_1 must be a unit")
    P = family_polynomial(FamilyTag.HALF, p, s)
    Pu = PadicInt(p, u1.precision, P.evaluate(u2.residue, u1.modulus))
    if not Pu.is_unit():
        raise ValueError(f"P_s(u_2) is not a unit at u_2={u2.residue}")
    a = kz_build(p, s)
    M = a.M
    z = (u1, u1 * u2, u1 * 0)
    Uz = _eval(a.U, z)
    lhs = [_eval(a.U.derivative(i), z) / Uz for i in range(3)]
    rho = PadicInt(p, u1.precision, P.derivative().evaluate(u2.residue, u1.modulus)) / Pu
    inv = unit_inverse(u1)
    rhs = [inv * (M - u2 * rho), inv * rho, inv * (-M + (u2 - 1) * rho)]
    desc = f"grad U_s/U_s matches the u-coordinate vector mod {p}^{s} at u=({u1.residue},{u2.residue})"
    kw = dict(check_id="kz-omega-vector", paper_ref="grad U_s/U_s in the coordinates u_1, u_2")
    for i in range(3):
        d = (lhs[i] - rhs[i]).with_precision(s)
        if d != 0:
            return CongruenceReport(desc, (p, s), False, (f"component {i + 1}", d.residue), **kw)
    total = sum((r.with_precision(s).residue for r in rhs)) % p**s
    if total:
        return CongruenceReport(desc, (p, s), False, ("sum of components", total), **kw)
    return CongruenceReport(desc, (p, s), True, **kw)


def kz_suite(p: int, s_max: int, samples: int = 50) -> list[CongruenceReport]:
    out = []
    for s in range(1, s_max + 1):
        a = kz_build(p, s)
        out.append(closed_form_check(p, s))
        out.extend(kz_residual(a))
        out.append(gradient_identity_check(p, s))
        out.append(gradient_sum_check(p, s))
        out.append(symmetry_check(p, s))
        out.append(restriction_check(p, s))
        out.append(kz_dwork_congruence(p, s, "T"))
        out.append(kz_dwork_congruence(p, s, "U"))
        out.append(u_factorization_check(p, s))
        for i in (1, 2, 3):
            out.append(line_equality_check(p, s, i))
            out.append(line_equality_check(p, s, i, modulus=True))
        pts = teichmuller_samples(p, s + 1, samples)
        out.append(eta_kz_system_check(p, s, [tuple(v.with_precision(s) for v in z) for z in pts]))
        out.append(nonvanishing_check(p, s, pts))
        out.append(kz_cauchy_check(p, s, pts))
        out.append(eta_at_base_point(p, s))
        one = PadicInt(p, s, 1)
        out.append(omega_vector_compare((one, one * 0, one * 0), p, s))
    return out
