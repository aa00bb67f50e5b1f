"""Batch front end: ``verify SUITE [options]`` and ``verify describe SUITE``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for usage
or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .hyperg import FamilyTag
from .laurent import is_prime
from .report import CongruenceReport

DEFAULT_PRIMES = (3, 5, 7)
DEFAULT_S_MAX = 2
DEFAULT_SAMPLES = 50
SUITES = ("ghost", "dwork-tuple", "mellit", "hyperg", "thirds", "fifths", "unit-root", "kz", "conjecture", "all")


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    primes: tuple[int, ...] = DEFAULT_PRIMES
    s_max: int = DEFAULT_S_MAX
    families: tuple[FamilyTag, ...] = tuple(FamilyTag)
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    jobs: int = 1
    out: str | None = None

    def __post_init__(self) -> None:
        if not self.primes:
            raise ConfigError("at least one prime is needed")
        for p in self.primes:
            if p == 2 or not is_prime(p):
                raise ConfigError(f"{p} is not an odd prime")
        if self.s_max < 1:
            raise ConfigError("s_max must be at least 1")
        if self.samples < 1 or self.jobs < 1:
            raise ConfigError("samples and jobs must be positive")

    def to_json(self) -> dict:
        # out and jobs do not change results, so they stay out of the report
        return {
            "primes": list(self.primes),
            "s_max": self.s_max,
            "families": [f.name for f in self.families],
            "samples": self.samples,
            "seed": self.seed,
        }


# -- suites --------------------------------------------------------------------------
# Each task is (suite, p) and returns a list of reports; tasks run in a fixed
# order and may be farmed out to worker processes.


def _ghost(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .ghost import (
        PolyTuple,
        enumerate_index_tuples,
        i_lambda,
        random_member,
        verify_ct_factorization,
        verify_ghost_decomposition,
    )
    from .laurent import LaurentPoly

    if p > 5:
        return []
    T, X = LaurentPoly.gens(1, 1)
    H = (T - 1) * (1 - X * LaurentPoly.monomial((-1, 0), 1, 1, 1))
    rng = random.Random(cfg.seed * 1000 + p)
    tuples = [PolyTuple.of(*([H] * n)) for n in (1, 2, 3)]
    tuples += [PolyTuple(tuple(random_member(rng, p) for _ in range(n)), 1, 1) for n in (2, 3)]
    out = []
    for lam in tuples:
        out.append(verify_ghost_decomposition(lam, p))
        out.append(verify_ct_factorization(lam, p))
        I = i_lambda(lam, p)
        need = p ** (len(lam) - 1)
        ok = I.divisible_by(need)
        out.append(
            CongruenceReport(
                f"I_lambda divisible by {p}^{len(lam) - 1} for a tuple of length {len(lam)}",
                (p, len(lam) - 1), ok, None if ok else ("I_lambda", I.min_valuation(p) or 0),
                check_id="ghost-i-lambda", paper_ref="I_lambda divisible by p^(l-1)",
                observed_valuation=I.min_valuation(p),
            )
        )
    if p == cfg.primes[0]:
        for k in range(1, 7):
            bad = [m for m in enumerate_index_tuples(k, True) if sum(m) < k - 1]
            out.append(
                CongruenceReport(
                    f"indecomposable index tuples of length {k} have weight >= {k - 1}", None, not bad,
                    None if not bad else (str(bad[0]), sum(bad[0])),
                    check_id="ghost-weight-bound", paper_ref="|m| >= k-1 for indecomposable m",
                    details={"count": len(enumerate_index_tuples(k, True))},
                )
            )
    return out


def _dwork_tuple(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .ghost import random_dwork_instance, verify_dwork_tuple_congruence

    if p > 5:
        return []
    rng = random.Random(cfg.seed * 1000 + p)
    count = cfg.samples if p == 3 else max(1, cfg.samples // 5)
    return [verify_dwork_tuple_congruence(*random_dwork_instance(rng, p), p) for _ in range(count)]


def _mellit(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .ghost import verify_mellit
    from .laurent import LaurentPoly

    if p > 7:
        return []
    (t,) = LaurentPoly.gens(1, 0)
    L = 1 + t + LaurentPoly.monomial((-1,), 1, 1, 0)
    out = []
    for a in ((1,), (p - 1,), (1, 2), (p - 1, 1)):
        for b, c in (((), ()), ((1,), ()), ((), (p - 1,)), ((2,), (1,))):
            out.append(verify_mellit(L, a, b, c, p))
    return out


def _hyperg(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .hyperg import closed_form_check, family_polynomial, half_suite, hyp_ode_residual

    out = half_suite(p, cfg.s_max)
    for tag in cfg.families:
        try:
            tag.check_prime(p)
        except ValueError:
            continue
        for s in range(1, cfg.s_max + 1):
            if tag is not FamilyTag.HALF:
                out.append(hyp_ode_residual(tag.triple, family_polynomial(tag, p, s), p, s))
            out.append(closed_form_check(tag, p, s))
    return out


def _thirds(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .hyperg import thirds_suite

    return [] if p == 3 else thirds_suite(p, cfg.s_max)


def _fifths(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .hyperg import fifths_suite

    return [] if p == 5 else fifths_suite(p, cfg.s_max)


def _unit_root(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .padic import domain_teichmuller_points, frobenius_quadratic_check, limits_agree_check, unit_root

    s_top = cfg.s_max + 1
    out = []
    pts = domain_teichmuller_points(p, s_top + 1)
    for w in pts:
        alpha = w.residue % p
        out.append(unit_root(w, FamilyTag.HALF, s_top).cauchy_report())
        if alpha != 1:
            out.extend(frobenius_quadratic_check(alpha, p, s) for s in range(1, s_top + 1))
    for s in range(1, s_top + 1):
        out.append(limits_agree_check(p, s, [0] + [w.with_precision(s + 1) for w in pts]))
    return out


def _kz(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .kz import kz_suite

    return kz_suite(p, cfg.s_max, cfg.samples)


def _conjecture(p: int, cfg: SuiteConfig) -> list[CongruenceReport]:
    from .conjecture import conjecture_suite

    return conjecture_suite([p], cfg.s_max, seed=cfg.seed)


RUNNERS: dict[str, Callable[[int, SuiteConfig], list[CongruenceReport]]] = {
    "ghost": _ghost,
    "dwork-tuple": _dwork_tuple,
    "mellit": _mellit,
    "hyperg": _hyperg,
    "thirds": _thirds,
    "fifths": _fifths,
    "unit-root": _unit_root,
    "kz": _kz,
    "conjecture": _conjecture,
}

INVENTORY: dict[str, list[str]] = {
    "ghost": [
        "ghost decomposition of the Frobenius-twisted product of a tuple (exact)",
        "constant-term factorization over indecomposable index tuples (exact)",
        "p^(l-1) divisibility of I_lambda",
        "weight bound |m| >= k-1 for indecomposable index tuples, k <= 6",
    ],
    "dwork-tuple": ["tuple Dwork congruence for admissible (a, b, c), randomized instances"],
    "mellit": ["constant-term congruence for digit expansions of a single Laurent polynomial (trinomial family)"],
    "hyperg": [
        "Dwork congruence P_(s+1) P_(s-1)(x^p) = P_s P_s(x^p) mod p^s",
        "refined congruences for the coefficients C_(s,k), all balanced k",
        "hypergeometric differential operator kills I_s mod p^s",
        "C_(s,j) symmetry, Lucas factorization mod p, baby congruences",
        "closed forms of the approximation polynomials versus coefficient extraction",
    ],
    "thirds": [
        "Q/R congruences for p = 1 mod 3 and the crossed pairs for p = 2 mod 3",
        "branch selection by the parity of s and the sign of the bar polynomials",
    ],
    "fifths": ["fifths congruences 41-41, 32-32 (p = 1, 4 mod 5) and 41-32, 32-41 (p = 2, 3 mod 5)"],
    "unit-root": [
        "Cauchy rate of Pbar_(s+1)(x)/Pbar_s(x^p) at Teichmuller points of the domain",
        "unit root u satisfies u^2 - a_p u + p = 0 mod p^s with a_p from point counts",
        "agreement with Dwork's truncated-series ratios",
    ],
    "kz": [
        "I_s solves the KZ system mod p^s (cleared residuals and the linear constraint)",
        "grad T_s = (1-p^s)/2 I_s, symmetry of T_s, T_s(1,z2,0) = P_s (exact)",
        "Dwork congruences for T_s and U_s in three variables",
        "equality of log-derivatives of T_s and U_s on the line z1=1, z3=0",
        "U_s = (z1-z3)^M P_s(cross-ratio) (exact)",
        "second-order eta system, nonvanishing, Cauchy rate, eta^(2)(1,0,0) = 1/4",
        "grad U_s/U_s against the u-coordinate vector",
    ],
    "conjecture": [
        "p^(s+1) divides the symmetrized B(a,b;k) over the full digit grid",
        "coefficient sum for Pbar_4 Pbar_2(x^p) - Pbar_3 Pbar_3(x^p) is 0 mod p^3",
    ],
}


def describe(suite: str) -> str:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    lines = []
    for name in names:
        lines.append(f"{name}:")
        lines.extend(f"  - {item}" for item in INVENTORY[name])
    return "\n".join(lines)


def _task(args: tuple[str, int, SuiteConfig]) -> list[CongruenceReport]:
    name, p, cfg = args
    return RUNNERS[name](p, cfg)


def collect(suite: str, cfg: SuiteConfig) -> list[CongruenceReport]:
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    tasks = [(name, p, cfg) for name in names for p in cfg.primes]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_task, tasks))
    else:
        chunks = [_task(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def build_report(suite: str, cfg: SuiteConfig, results: Sequence[CongruenceReport]) -> dict:
    checks = [r.to_json() for r in results]
    passed = sum(1 for r in results if r.passed)
    return {
        "suite": suite,
        "config": cfg.to_json(),
        "checks": checks,
        "summary": {"total": len(checks), "passed": passed, "failed": len(checks) - passed},
    }


def emit_report(report: dict, path: str | Path | None) -> str:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text


def run_suite(suite: str, cfg: SuiteConfig) -> int:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    results = collect(suite, cfg)
    report = build_report(suite, cfg, results)
    emit_report(report, cfg.out)
    s = report["summary"]
    print(f"{suite}: {s['passed']}/{s['total']} checks passed", file=sys.stderr)
    return 0 if s["failed"] == 0 else 1


# -- argument handling -------------------------------------------------------------


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"not a comma-separated list of integers: {text!r}") from None


def _families(values) -> tuple[FamilyTag, ...]:
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    try:
        return tuple(FamilyTag.parse(v) for v in values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(args: argparse.Namespace) -> SuiteConfig:
    """Merge flags over a JSON config file over the defaults."""
    base: dict = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(base) - {"primes", "s_max", "families", "samples", "seed", "jobs", "out"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    def pick(flag, key, conv=lambda v: v):
        if flag is not None:
            return conv(flag)
        if key in base:
            return conv(base[key])
        return None

    kw = {}
    primes = pick(args.primes, "primes", lambda v: _int_list(v) if isinstance(v, str) else tuple(int(x) for x in v))
    if primes is not None:
        kw["primes"] = primes
    for key, flag in (("s_max", args.s_max), ("samples", args.samples), ("seed", args.seed), ("jobs", args.jobs)):
        v = pick(flag, key, int)
        if v is not None:
            kw[key] = v
    fams = pick(args.families, "families", _families)
    if fams is not None:
        kw["families"] = fams
    out = pick(args.out, "out", str)
    if out is not None:
        kw["out"] = out
    try:
        return SuiteConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(message)


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="verify", description="Machine-check p-adic congruences and write a JSON report.")
    ap.add_argument("suite", help=f"one of {', '.join(SUITES)}, or 'describe'")
    ap.add_argument("target", nargs="?", help="suite to describe")
    ap.add_argument("--primes", help="comma-separated odd primes (default 3,5,7)")
    ap.add_argument("--s-max", type=int, dest="s_max")
    ap.add_argument("--families", help="comma-separated family tags, e.g. half,third_q")
    ap.add_argument("--samples", type=int, help="sample cap for randomized and sampled checks")
    ap.add_argument("--jobs", type=int, help="worker processes")
    ap.add_argument("--out", help="report path (default: stdout)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--config", help="JSON file with default option values")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if args.suite == "describe":
            print(describe(args.target or "all"))
            return 0
        if args.target is not None:
            raise ConfigError(f"unexpected argument {args.target!r}")
        if args.suite not in SUITES:
            raise ConfigError(f"unknown suite {args.suite!r}")
        cfg = load_config(args)
        return run_suite(args.suite, cfg)
    except ConfigError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"verify: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
