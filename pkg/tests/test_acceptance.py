"""End-to-end acceptance checks, one test per criterion.

Each test prints a ``criterion N: PASS|FAIL`` line; conftest repeats them in
the terminal summary so they survive output capture.
"""

import random
import time

from padic_periods import cli
from padic_periods.ghost import (
    PolyTuple,
    enumerate_index_tuples,
    i_lambda,
    random_dwork_instance,
    random_member,
    verify_ct_factorization,
    verify_dwork_tuple_congruence,
    verify_ghost_decomposition,
    verify_mellit,
)
from padic_periods.hyperg import (
    FamilyTag,
    balanced_k_range,
    family_polynomial,
    fifths_suite,
    hyp_ode_residual,
    lucas_factorization_check,
    theorem_p_congruence,
    thirds_suite,
    verify_Ck,
)
from padic_periods.kz import (
    closed_form_check,
    eta_at_base_point,
    eta_kz_system_check,
    eta_relations_check,
    gradient_identity_check,
    kz_build,
    kz_cauchy_check,
    kz_dwork_congruence,
    kz_residual,
    line_equality_check,
    nonvanishing_check,
    restriction_check,
    symmetry_check,
    teichmuller_samples,
    u_factorization_check,
)
from padic_periods.laurent import LaurentPoly, ModulusContext, lp_congruent
from padic_periods.padic import (
    domain_membership,
    domain_teichmuller_points,
    frobenius_quadratic_check,
    legendre_point_count,
    teichmuller,
    unit_root,
)
from padic_periods.conjecture import coeff_identity_42_33, conjecture_scan, sample_digit_tuples

SEED = 20240601
HALF, THIRD_Q, THIRD_R = FamilyTag.HALF, FamilyTag.THIRD_Q, FamilyTag.THIRD_R


def verdict(record_property, n, label, parts):
    """``parts`` maps a sub-check name to a bool or a list of reports."""
    failed = []
    for name, value in parts.items():
        ok = value if isinstance(value, bool) else all(r.passed for r in value)
        if not ok:
            failed.append(name)
    status = "FAIL" if failed else "PASS"
    line = f"criterion {n}: {status} {label}" + (f" (failing: {', '.join(failed)})" if failed else "")
    print(line)
    record_property("criterion", line)
    assert not failed, line


def test_criterion_01_half_dwork_congruence(record_property):
    t0 = time.perf_counter()
    reps = [theorem_p_congruence(p, s) for p in (3, 5, 7, 11, 13) for s in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    verdict(record_property, 1, f"P_(s+1) P_(s-1)(x^p) = P_s P_s(x^p), {len(reps)} cases, {elapsed:.1f}s",
            {"congruence": reps, "runtime < 30s": elapsed < 30})


def test_criterion_02_refined_coefficients(record_property):
    reps = [verify_Ck(p, s, k) for p in (3, 5) for s in (1, 2) for k in balanced_k_range(p, s)]
    verdict(record_property, 2, f"C-coefficient congruences over all balanced k, {len(reps)} cases", {"C_k": reps})


def test_criterion_03_differential_operator(record_property):
    reps = []
    for p in (3, 5, 7):
        for s in (1, 2):
            reps.append(hyp_ode_residual(HALF.triple, family_polynomial(HALF, p, s), p, s))
            if p != 3:
                # the thirds are undefined at p = 3
                for tag in (THIRD_Q, THIRD_R):
                    reps.append(hyp_ode_residual(tag.triple, family_polynomial(tag, p, s), p, s))
    verdict(record_property, 3, f"D I_s in p^s Z[x] for half and third families, {len(reps)} cases", {"ode": reps})


def test_criterion_04_thirds(record_property):
    reps = {p: thirds_suite(p, 2) for p in (5, 7, 11, 13)}
    ids = {r.check_id for rs in reps.values() for r in rs}
    verdict(record_property, 4, "Q/R congruences in both classes mod 3 with branch selection", {
        **{f"p={p}": rs for p, rs in reps.items()},
        "both classes covered": {"thirds-QQ", "thirds-QR", "thirds-branch"} <= ids,
    })


def test_criterion_05_fifths(record_property):
    reps = [r for p in (7, 11, 13, 19) for r in fifths_suite(p, 2)]
    ids = {r.check_id for r in reps}
    verdict(record_property, 5, f"fifths congruences, {len(reps)} cases", {
        "fifths": reps,
        "all four pairings": ids == {"fifths-41-41", "fifths-32-32", "fifths-41-32", "fifths-32-41"},
    })


def test_criterion_06_ghost_layer(record_property):
    p = 3
    T, X = LaurentPoly.gens(1, 1)
    H = (T - 1) * (1 - X * LaurentPoly.monomial((-1, 0), 1, 1, 1))
    rng = random.Random(SEED)
    tuples = [PolyTuple.of(*[H] * n) for n in (1, 2, 3)]
    tuples += [PolyTuple(tuple(random_member(rng, p) for _ in range(n)), 1, 1) for n in (1, 2, 3) for _ in range(3)]
    decomp = [verify_ghost_decomposition(lam, p) for lam in tuples]
    ct = [verify_ct_factorization(lam, p) for lam in tuples]
    div = all(i_lambda(lam, p).divisible_by(p ** (len(lam) - 1)) for lam in tuples)
    bound = all(sum(m) >= k - 1 for k in range(1, 7) for m in enumerate_index_tuples(k, True))
    verdict(record_property, 6, f"ghost decomposition, CT factorization, I_lambda, weight bound ({len(tuples)} tuples)", {
        "decomposition": decomp, "ct factorization": ct, "I_lambda divisibility": div, "weight bound k<=6": bound,
    })


def test_criterion_07_tuple_and_single_congruences(record_property):
    rng = random.Random(SEED)
    tuple_reps = [verify_dwork_tuple_congruence(*random_dwork_instance(rng, 3, max_la=3), 3) for _ in range(100)]
    (t,) = LaurentPoly.gens(1, 0)
    L = 1 + t + LaurentPoly.monomial((-1,), 1, 1, 0)
    mellit = [
        verify_mellit(L, a, b, c, p)
        for p in (3, 5)
        for a in ((1,), (p - 1,), (1, 2))
        for b, c in (((), ()), ((1,), ()), ((), (p - 1,)))
    ]
    verdict(record_property, 7, "tuple congruence on 100 random instances and the trinomial family", {
        "tuple": tuple_reps, "trinomial": mellit,
    })


def test_criterion_08_unit_root(record_property):
    t0 = time.perf_counter()
    a5 = legendre_point_count(2, 5)
    reps = [frobenius_quadratic_check(2, 5, s) for s in range(1, 5)]
    alphas = [a for a in range(2, 7) if domain_membership(teichmuller(a, 7, 2), HALF)]
    reps += [frobenius_quadratic_check(a, 7, s) for a in alphas for s in range(1, 5)]
    cauchy = [unit_root(w, HALF, 4).cauchy_report() for p in (5, 7) for w in domain_teichmuller_points(p, 6)]
    elapsed = time.perf_counter() - t0
    verdict(record_property, 8, f"unit root quadratic at p=5, 7 for s<=4 (alphas at 7: {alphas}), {elapsed:.1f}s", {
        "a_5(2) = -2": a5 == -2, "quadratic": reps, "cauchy": cauchy, "runtime < 60s": elapsed < 60,
    })


def test_criterion_09_kz_layer(record_property):
    t0 = time.perf_counter()
    parts: dict = {}
    for p in (3, 5, 7):
        for s in (1, 2):
            tag = f"p={p},s={s}"
            pts = teichmuller_samples(p, s + 1, 30)
            parts[f"residuals {tag}"] = kz_residual(kz_build(p, s))
            parts[f"exact identities {tag}"] = [
                closed_form_check(p, s), gradient_identity_check(p, s), symmetry_check(p, s),
                restriction_check(p, s), u_factorization_check(p, s),
            ]
            parts[f"three-variable congruences {tag}"] = [kz_dwork_congruence(p, s, w) for w in "TU"]
            for i in (1, 2, 3):
                parts[f"line equality {i} exact {tag}"] = [line_equality_check(p, s, i)]
            parts[f"sampled points {tag}"] = [
                eta_kz_system_check(p, s, [tuple(v.with_precision(s) for v in z) for z in pts]),
                nonvanishing_check(p, s, pts),
                kz_cauchy_check(p, s, pts),
                *(eta_relations_check(p, s, z) for z in teichmuller_samples(p, s, 5)),
            ]
            parts[f"eta2(1,0,0) = 1/4 {tag}"] = [eta_at_base_point(p, s)]
    elapsed = time.perf_counter() - t0
    parts["runtime < 120s"] = elapsed < 120
    verdict(record_property, 9, f"KZ layer at p in 3,5,7 and s in 1,2, {elapsed:.1f}s", parts)


def test_criterion_10_conjecture(record_property):
    scans = {ps: conjecture_scan(*ps) for ps in ((3, 1), (5, 1), (3, 2))}
    coeff = [coeff_identity_42_33(3, N) for N in sample_digit_tuples(3, 20, SEED)]
    verdict(record_property, 10, "full-grid scans at (3,1), (5,1), (3,2) and 20 coefficient sums mod 27", {
        **{f"scan p={p},s={s}": [r] for (p, s), r in scans.items()},
        "p^2 at s=1": all(scans[k].observed_valuation >= 2 for k in ((3, 1), (5, 1))),
        "coefficient sums": coeff,
        "20 tuples": len(coeff) == 20,
    })


def test_criterion_11_properties(record_property, tmp_path):
    rng = random.Random(SEED)

    def poly():
        d = {(rng.randint(-3, 3), rng.randint(0, 2)): rng.randint(-9, 9) for _ in range(rng.randint(0, 6))}
        return LaurentPoly(d, 1, 1)

    ring = frob = True
    for _ in range(60):
        a, b, c = poly(), poly(), poly()
        ring &= (a + b) * c == a * c + b * c and a * b == b * a and (a * b) * c == a * (b * c)
        p = rng.choice((3, 5, 7))
        frob &= lp_congruent(a.pow(p), a.substitute_power(p), ModulusContext(p, 1)).passed
    lucas = [lucas_factorization_check(HALF, p, s) for p in (3, 5, 7) for s in (1, 2, 3)]
    teich = True
    for _ in range(60):
        p, S = rng.choice((3, 5, 7, 11)), rng.randint(1, 6)
        a = rng.choice([x for x in range(-500, 501) if x % p])
        w = teichmuller(a, p, S)
        teich &= w**p == w
    outs = []
    for name in ("a.json", "b.json"):
        cli.main(["dwork-tuple", "--primes", "3", "--samples", "15", "--seed", str(SEED), "--out", str(tmp_path / name)])
        outs.append((tmp_path / name).read_bytes())
    verdict(record_property, 11, "property suites under a fixed seed", {
        "ring axioms": ring, "frobenius mod p": frob, "lucas": lucas,
        "teichmuller fixed point": teich, "report determinism": outs[0] == outs[1],
    })
