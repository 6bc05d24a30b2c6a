"""Acceptance suites: each returns a deterministic, timing-free report."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import expsum, family, rank, variety
from .errors import DegreeZero
from .generators import gen_F
from .gf import field_create
from .poly import Polynomial, Tensor, multilinearize, parse, random_poly


@dataclass
class SuiteResult:
    name: str
    criterion: int
    passed: bool
    details: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"suite": self.name, "criterion": self.criterion, "passed": self.passed,
                "details": self.details}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.criterion} ({self.name})"


# --- corpora ---

def poly_corpus(size: int = 204, seed: int = 2024) -> list[Polynomial]:
    """Random polynomials, q in {2, 3}, n <= 3, d in {2, 3}, cycling through the configs."""
    configs = [(q, n, d) for q in (2, 3) for n in (1, 2, 3) for d in (2, 3)]
    rng = random.Random(seed)
    out = []
    for k in range(size):
        q, n, d = configs[k % len(configs)]
        out.append(random_poly(field_create(q), n, d, rng.randint(1, 5), rng.randrange(1 << 30)))
    return out


def bilinear_corpus(size: int = 100, seed: int = 7) -> list[Tensor]:
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        q = rng.choice((2, 3))
        n = rng.randint(1, 4)
        M = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
        out.append(Tensor.from_matrix(field_create(q), M))
    return out


def family_corpus(size: int = 40, seed: int = 11) -> list[family.PolyFamily]:
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        q = rng.choice((2, 3))
        n = rng.randint(1, 3)
        c = rng.randint(1, 3)
        fld = field_create(q)
        polys = [random_poly(fld, n, rng.randint(1, 3), rng.randint(1, 4), rng.randrange(1 << 30))
                 for _ in range(c)]
        out.append(family.PolyFamily(polys, allow_dependent=True))
    return out


def variety_corpus(size: int = 30, seed: int = 13) -> list[list[Polynomial]]:
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        q = rng.choice((2, 3))
        n = rng.randint(2, 3)
        c = rng.randint(1, 2)
        fld = field_create(q)
        out.append([random_poly(fld, n, rng.randint(1, 3), rng.randint(1, 4), rng.randrange(1 << 30))
                    for _ in range(c)])
    return out


def _tensors(corpus, threads):
    for P in corpus:
        try:
            yield P, multilinearize(P)
        except DegreeZero:
            continue


# --- criteria ---

def suite_ga_identity(threads: int = 1) -> SuiteResult:
    corpus = poly_corpus()
    bad = []
    for k, P in enumerate(corpus):
        d = P.degree
        a = expsum.gowers_power_sum(P, d, "definition", threads=threads)
        b = expsum.gowers_power_sum(P, d, "tensor", threads=threads)
        if not a.same_average(b):
            bad.append(k)
    return SuiteResult("ga-identity", 1, not bad, {"corpus": len(corpus), "mismatches": bad})


def suite_tensor_bias(threads: int = 1) -> SuiteResult:
    corpus = poly_corpus()
    tensors = [T for _, T in _tensors(corpus, threads)] + bilinear_corpus()
    bad = []
    for k, T in enumerate(tensors):
        fld = T.field
        s = expsum.char_sum_exact(T.base, threads=threads)
        r = s.rational_value()
        ok = r is not None and r >= 0 and s.is_real()
        for a in range(2, fld.q):
            ok &= expsum.char_sum_exact(T.base.scale(a), threads=threads) == s
        if not ok:
            bad.append(k)
    return SuiteResult("tensor-bias", 2, not bad, {"tensors": len(tensors), "failures": bad})


def bias_power_gap(P: Polynomial, threads: int = 1) -> int:
    """Exact sign of |b(P)|^(2^d) - b(P~) (scaled to integers)."""
    d, q, n = P.degree, P.field.q, P.n
    S = expsum.char_sum_exact(P, threads=threads)
    bt = expsum.tensor_bias(multilinearize(P), threads=threads)
    lhs = S.abs2() ** (2 ** (d - 1))
    rhs = bt * q ** (n * 2**d)
    assert rhs.denominator == 1
    return expsum.add_rational(lhs, -int(rhs)).sign()


def suite_bias_inequality(threads: int = 1) -> SuiteResult:
    corpus = poly_corpus()
    bad = [k for k, P in enumerate(corpus) if bias_power_gap(P, threads) > 0]
    return SuiteResult("bias-inequality", 3, not bad, {"corpus": len(corpus), "violations": bad})


def suite_certificates(threads: int = 1) -> SuiteResult:
    corpus = poly_corpus()
    checked = strict_fail = weak_fail = below_lower = 0
    equality_sizes: dict[str, int] = {}
    for P, T in _tensors(corpus, threads):
        if T.d not in (2, 3):
            continue
        cert = rank.prank_upper_search(T, seed=1, threads=1)
        if cert is None:
            continue
        assert rank.verify_certificate(T, cert)
        checked += 1
        margin = rank.bias_margin(T, cert.size, threads=threads)
        if not margin > 1:
            strict_fail += 1
            key = f"d={T.d},r={cert.size}"
            equality_sizes[key] = equality_sizes.get(key, 0) + 1
        if margin < 1:
            weak_fail += 1
        if not T.base.is_zero and rank.prank_lower(T, threads=threads) > cert.size:
            below_lower += 1
    mism = []
    for k, T in enumerate(bilinear_corpus()):
        cert = rank.prank_upper_search(T, budget=10**6, seed=1, threads=1)
        if cert is None or cert.size != rank.prank_bilinear(T)[0]:
            mism.append(k)
    passed = strict_fail == 0 and not mism
    return SuiteResult("certificates", 4, passed, {
        "certificates": checked,
        "strict_failures": strict_fail,
        "strict_failures_by_shape": dict(sorted(equality_sizes.items())),
        "nonstrict_failures": weak_fail,
        "lower_above_upper": below_lower,
        "bilinear_mismatches": mism,
    })


def suite_f_bias(threads: int = 1) -> SuiteResult:
    rows = []
    ok = True
    for q in (2, 3, 5):
        fld = field_create(q)
        for n in (2, 3, 4, 5):
            b = expsum.char_sum_exact(gen_F(n, 2, fld), threads=threads).rational_value()
            target = Fraction(1, q ** (n - 1))
            good = b == target if n % 2 else (b is not None and b <= target)
            ok &= bool(good)
            rows.append({"q": q, "n": n, "bias": str(b), "q^(1-n)": str(target), "equal": b == target})
    return SuiteResult("f-bias", 5, ok, {"rows": rows})


def suite_equidistribution(threads: int = 1) -> SuiteResult:
    F3 = field_create(3)
    fam = family.PolyFamily([parse("x1*x4 + x2*x5 + x3*x6", F3, 6)])
    rep = family.equidistribution_check(fam, threads=threads)
    ok = rep.satisfied and rep.hypothesis_holds
    bad = []
    for k, F in enumerate(family_corpus()):
        dist = expsum.joint_distribution(F, threads=threads)
        for l, s in family.fiber_fourier(dist).items():
            if s != expsum.char_sum_exact(F.combo(l), threads=threads):
                bad.append([k, list(l)])
    return SuiteResult("equidistribution", 6, ok and not bad, {
        "bilinear": rep.to_json(), "fourier_mismatches": bad, "families": len(family_corpus())})


def quadric(r: int, n: int, q: int) -> list[Polynomial]:
    fld = field_create(q)
    terms = {((2 * i, 1), (2 * i + 1, 1)): 1 for i in range(r)}
    return [Polynomial(fld, n, terms)]


def suite_singular(threads: int = 1) -> SuiteResult:
    disagree = []
    for k, fam in enumerate(variety_corpus()):
        for s in (1, 2):
            a = variety.count_both(fam, s, "minors", threads=threads)
            b = variety.count_both(fam, s, "pairing", threads=threads)
            if a != b:
                disagree.append([k, s])
    reports = {}
    ok = not disagree
    for q in (2, 3):
        rep = variety.codim_singular(quadric(3, 6, q), 2, threads=threads)
        reports[str(q)] = rep.to_json(timing=False)
        ok &= rep.kappa == 5 and rep.dim_X.value == 5 and rep.dim_sing.value == 0
    return SuiteResult("singular", 7, ok, {"method_disagreements": disagree, "quadric": reports})


def e4(n: int) -> Polynomial:
    import itertools

    fld = field_create(2)
    return Polynomial(fld, n, {tuple((v, 1) for v in c): 1 for c in itertools.combinations(range(n), 4)})


def suite_low_char(threads: int = 1) -> SuiteResult:
    rows = {}
    ok = True
    for n in (5, 6):
        ar = expsum.analytic_rank(e4(n), threads=threads)
        rows[str(n)] = ar
        ok &= ar <= 4
    return SuiteResult("low-char", 8, ok, {"analytic_rank": rows})


def suite_shift_search(threads: int = 1) -> SuiteResult:
    P = gen_F(4, 2, field_create(2))
    res = family.search_shifts(P, 2, 64, 1, threads=threads)
    again = family.family_min_arank(family.shift_family(P, res.shifts)).value
    ok = again == res.score and res.score >= res.baseline
    return SuiteResult("shift-search", 9, ok, {"result": res.to_json(), "recomputed": expsum.json_number(again)})


SUITES: dict[str, Callable[[int], SuiteResult]] = {
    "ga-identity": suite_ga_identity,
    "tensor-bias": suite_tensor_bias,
    "bias-inequality": suite_bias_inequality,
    "certificates": suite_certificates,
    "f-bias": suite_f_bias,
    "equidistribution": suite_equidistribution,
    "singular": suite_singular,
    "low-char": suite_low_char,
    "shift-search": suite_shift_search,
}


def suite_determinism(threads: int = 8, names=None) -> SuiteResult:
    """Every other suite gives byte-identical reports at 1 and ``threads`` threads."""
    names = list(names or SUITES)
    diff = [n for n in names if SUITES[n](1).dumps() != SUITES[n](threads).dumps()]
    return SuiteResult("determinism", 10, not diff, {"suites": names, "threads": [1, threads], "differing": diff})


def run(name: str, threads: int = 1) -> SuiteResult:
    if name == "determinism":
        return suite_determinism(max(threads, 8))
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['determinism']}")
    return SUITES[name](threads)


def all_names() -> list[str]:
    return list(SUITES) + ["determinism"]
