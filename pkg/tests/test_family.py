import math
from fractions import Fraction

import pytest

from oracles import NaiveField, naive_bias
from strengthlab import expsum, family
from strengthlab.errors import ConstantInSpan, LinearlyDependent, NonpositiveConstant
from strengthlab.family import PolyFamily
from strengthlab.gf import field_create
from strengthlab.poly import Polynomial, multilinearize, parse, random_poly


def _fam(texts, q, n, **kw):
    F = field_create(q)
    return PolyFamily([parse(t, F, n) for t in texts], **kw)


def _naive_min_arank(F: PolyFamily) -> float:
    q = F.field.q
    best = math.inf
    for l, P in family.span_representatives(F):
        if P.degree == 0:
            return 0.0
        b = naive_bias(multilinearize(P).base, NaiveField(q, 1)).real
        ar = math.inf if abs(b) < 1e-12 else -math.log(b, q)
        best = min(best, ar)
    return best


def test_span_representatives_counts():
    assert len(list(family.span_representatives(_fam(["x1*x2"], 2, 2)))) == 1
    reps = [P for _, P in family.span_representatives(_fam(["x1*x2", "x1"], 2, 2))]
    F2 = field_create(2)
    assert set(map(str, reps)) == {str(parse(t, F2, 2)) for t in ("x1*x2", "x1", "x1*x2 + x1")}
    assert len(list(family.span_representatives(_fam(["x1*x2", "x1"], 3, 2)))) == 4


def test_dependent_members_rejected():
    with pytest.raises(LinearlyDependent):
        _fam(["x1", "x1"], 3, 2)
    assert _fam(["x1", "x1"], 3, 2, allow_dependent=True).dimension() == 1


def test_min_arank_examples():
    assert family.family_min_arank(_fam(["x1", "x2"], 2, 2)).value == math.inf
    r = family.family_min_arank(_fam(["x1*x2", "x1*x2 + x1"], 2, 2))
    assert r.value == 2.0 and r.representative.degree == 2
    assert family.family_min_arank(_fam(["x1*x2", "x1*x2 + 1"], 2, 2)).value == 0.0


@pytest.mark.parametrize("q,seed", [(2, 1), (2, 2), (3, 3), (3, 4), (2, 5)])
def test_min_arank_against_naive(q, seed):
    F = field_create(q)
    polys = [random_poly(F, 2, d, 3, seed * 10 + d) for d in (2, 3)]
    fam = PolyFamily(polys, allow_dependent=True)
    got = family.family_min_arank(fam).value
    want = _naive_min_arank(fam)
    assert got == pytest.approx(want) if math.isfinite(want) else got == want


def test_min_is_below_each_member():
    F3 = field_create(3)
    fam = PolyFamily([random_poly(F3, 3, 2, 4, 7), random_poly(F3, 3, 2, 4, 8)])
    v = family.family_min_arank(fam).value
    for P in fam.members:
        assert v <= expsum.analytic_rank(P)


def test_graded_basis_examples():
    F = field_create(3)
    g = family.graded_basis(_fam(["x1^2", "x1^2 + x2"], 3, 2))
    assert list(g) == [2, 1]
    assert g[2] == [parse("x1^2", F, 2)] and g[1] == [parse("x2", F, 2)]
    g = family.graded_basis(_fam(["x1*x2", "x1*x2"], 3, 2, allow_dependent=True))
    assert sum(len(v) for v in g.values()) == 1
    with pytest.raises(ConstantInSpan):
        family.graded_basis(_fam(["x1 + 1", "x1"], 3, 2))
    fam = _fam(["x1*x2 + x3", "x2^2 + x1", "x3"], 3, 3)
    flat = [P for v in family.graded_basis(fam).values() for P in v]
    assert family.same_span(flat, fam.members)


def test_fourier_examples():
    F3 = field_create(3)
    dist = expsum.joint_distribution(_fam(["x1"], 3, 2))
    for l, s in family.fiber_fourier(dist).items():
        assert s.magnitude == 0 or not any(l)
    dist = expsum.joint_distribution(_fam(["x1*x2"], 2, 2))
    assert family.fiber_fourier(dist)[(1,)].rational_value() == Fraction(1, 2)
    del F3


def test_fourier_equals_combo_bias():
    for q in (2, 3):
        F = field_create(q)
        fam = PolyFamily([random_poly(F, 3, 2, 3, 1), random_poly(F, 3, 3, 3, 2)])
        dist = expsum.joint_distribution(fam)
        for l, s in family.fiber_fourier(dist).items():
            assert s == expsum.char_sum_exact(fam.combo(l))


def test_equidistribution_examples():
    rep = family.equidistribution_check(_fam(["x1"], 3, 2))
    assert rep.deviation == 0
    rep = family.equidistribution_check(_fam(["x1*x4 + x2*x5 + x3*x6"], 3, 6))
    assert rep.deviation == Fraction(3, 26) and rep.satisfied
    assert rep.hypothesis_rank == 3 and rep.hypothesis_holds
    rep = family.equidistribution_check(_fam(["x1*x2"], 2, 2))
    assert rep.deviation == 2 and not rep.satisfied
    assert rep.hypothesis_rank == 1 and not rep.hypothesis_holds


def test_derivative_span_examples():
    F5, F2 = field_create(5), field_create(2)
    P = parse("x1^2", F5)
    assert list(family.derivative_span(P, [[0]]).members) == [P]
    assert list(family.derivative_span(P, [[1]]).members) == [P, parse("2*x1 + 1", F5)]
    Q = parse("x1*x2", F2)
    assert list(family.derivative_span(Q, [[1, 0]]).members) == [Q, parse("x2", F2, 2)]
    full = family.derivative_span(Q, [[1, 0], [0, 1]], full_span=True)
    assert full.c == 4  # x1*x2, x2, x1, x1 + x2 + 1


def test_search_shifts_contract():
    F2 = field_create(2)
    P = parse("x1*x2 + x3*x4", F2)
    res = family.search_shifts(P, 1, 8, seed=3)
    assert res.score >= res.baseline
    again = family.search_shifts(P, 1, 8, seed=3, threads=4)
    assert again.to_json() == res.to_json()
    assert family.family_min_arank(family.shift_family(P, res.shifts)).value == res.score


def test_threshold_examples():
    assert family.threshold_T(10, 2, 2, 1, 1, 1) == (4, False)
    assert family.threshold_T(100, 4, 2, 1, 2, 1) == (3, False)
    v, degenerate = family.threshold_T(4, 5, 2, 1, 1, 1)
    assert degenerate and v <= 0
    with pytest.raises(NonpositiveConstant):
        family.threshold_T(4, 1, 2, 0, 1, 1)
