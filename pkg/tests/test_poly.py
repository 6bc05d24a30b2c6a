import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField, all_points, naive_eval
from strengthlab.errors import DegreeZero, DimensionMismatch, PolySyntaxError, UnknownVariable
from strengthlab.gf import field_create
from strengthlab.poly import (Polynomial, compose, dehomogenize, delta, format_poly, formal_jacobian,
                              homogenize, multilinearize, parse, parse_lines, random_poly)


def test_parse_examples():
    F5 = field_create(5)
    P = parse("x1*x2 + 2*x3^2", F5, 3)
    assert len(P.terms) == 2 and P.degree == 2
    Z = parse("x1 - x1", F5)
    assert Z.is_zero and Z.degree == 0
    F2 = field_create(2)
    assert parse("(x1+x2)^2", F2) == parse("x1^2 + x2^2", F2)


def test_parse_errors():
    F2 = field_create(2)
    with pytest.raises(PolySyntaxError):
        parse("x1 +* x2", F2)
    with pytest.raises(UnknownVariable):
        parse("x5", F2, 3)
    with pytest.raises(PolySyntaxError):
        parse("x0", F2)


def test_round_trip_extension_field():
    F9 = field_create(3, 2)
    P = random_poly(F9, 3, 3, 5, seed=4)
    assert parse(format_poly(P), F9, 3) == P
    lines = parse_lines(format_poly(P) + "\n# comment\n\nx1\n", F9, 3)
    assert len(lines) == 2


def test_evaluate_examples():
    F2, F5 = field_create(2), field_create(5)
    assert parse("x1*x2", F2).evaluate([1, 1]).value == 1
    assert parse("x1*x2 + 2*x3^2", F5).evaluate([1, 2, 1]).value == 4
    with pytest.raises(DimensionMismatch):
        parse("x1", F5, 2).evaluate([1])


@pytest.mark.parametrize("p,s,n,d,seed", [(2, 1, 3, 3, 1), (3, 1, 3, 2, 2), (2, 2, 2, 3, 3), (3, 2, 2, 2, 4),
                                          (5, 1, 2, 4, 5)])
def test_evaluate_against_naive(p, s, n, d, seed):
    F, N = field_create(p, s), NaiveField(p, s)
    P = random_poly(F, n, d, 6, seed)
    for pt in all_points(F.q, n):
        assert P.eval_ids(pt) == naive_eval(P, pt, N)


def test_delta_examples():
    F5 = field_create(5)
    assert delta(parse("x1^2", F5), [1]) == parse("2*x1 + 1", F5)
    P = random_poly(F5, 3, 3, 4, 9)
    assert delta(P, [0, 0, 0]).is_zero
    L = parse("x1 + 3*x2", F5)
    assert delta(L, [2, 1]) == Polynomial.constant(F5, 2, L.eval_ids([2, 1]))


def test_delta_pointwise():
    F3 = field_create(3)
    P = random_poly(F3, 2, 3, 5, 11)
    for h in all_points(3, 2):
        D = delta(P, h)
        for x in all_points(3, 2):
            xh = [F3.add(a, b) for a, b in zip(x, h)]
            assert D.eval_ids(x) == F3.sub(P.eval_ids(xh), P.eval_ids(x))


def test_multilinearize_examples():
    F5 = field_create(5)
    T = multilinearize(parse("x1*x2", F5))
    # blocks (h1, h2), (k1, k2) become x1, x2, x3, x4
    assert T.base == parse("x1*x4 + x2*x3", F5, 4)
    L = parse("x1 + 2*x2", F5)
    assert multilinearize(L).base == L
    with pytest.raises(DegreeZero):
        multilinearize(Polynomial.constant(F5, 2, 3))


@pytest.mark.parametrize("q,n,d,seed", [(2, 2, 2, 1), (3, 2, 3, 2), (5, 2, 2, 3), (2, 3, 3, 4)])
def test_multilinear_form_is_symmetric_and_iterated_delta(q, n, d, seed):
    F = field_create(q)
    P = random_poly(F, n, d, 5, seed)
    T = multilinearize(P)
    assert T.is_symmetric()
    pts = list(all_points(q, n))
    import random

    rng = random.Random(seed)
    for _ in range(10):
        hs = [rng.choice(pts) for _ in range(d)]
        Q = P
        for h in hs:
            Q = delta(Q, h)
        assert Q.degree == 0
        assert T.evaluate(*hs) == Q.coefficient(())


def test_formal_jacobian_examples():
    F5 = field_create(5)
    assert formal_jacobian([parse("x1^2", F5)])[0][0] == parse("2*x1", F5)
    assert formal_jacobian([parse("x1^5", F5)])[0][0].is_zero
    J = formal_jacobian([parse("x1*x2 + x3*x4", F5)])
    assert J[0] == [parse(t, F5, 4) for t in ("x2", "x1", "x4", "x3")]


def test_homogenize_examples():
    F3 = field_create(3)
    # the new variable is appended last
    assert homogenize(parse("x1^2 + x2", F3)) == parse("x1^2 + x3*x2", F3, 3)
    assert homogenize(parse("x1*x2", F3)) == parse("x1*x2", F3, 3)
    assert homogenize(parse("x1 + 1", F3)) == parse("x1 + x2", F3, 2)
    P = random_poly(F3, 2, 3, 5, 8)
    H = homogenize(P)
    assert H.is_homogeneous and dehomogenize(H) == P


def test_compose_examples():
    F5 = field_create(5)
    x1 = parse("x1", F5, 2)
    assert compose(parse("x1*x2", F5), [x1, x1]) == parse("x1^2", F5, 2)
    P = random_poly(F5, 2, 3, 4, 3)
    assert compose(parse("x1 + x2", F5), [P, -P]).is_zero
    det = parse("x1*x4 - x2*x3", F5)
    inners = [parse(t, F5, 2) for t in ("x1 + x2", "2*x1", "x2 + 3", "x1 + 4*x2")]
    C = compose(det, inners)
    assert C.degree == 2
    for pt in all_points(5, 2):
        vals = [Q.eval_ids(pt) for Q in inners]
        assert C.eval_ids(pt) == det.eval_ids(vals)


def test_random_poly_contract():
    F2 = field_create(2)
    assert random_poly(F2, 4, 2, 3, 7) == random_poly(F2, 4, 2, 3, 7)
    P = random_poly(F2, 4, 2, 1, 7)
    assert len(P.terms) == 1 and P.degree == 2


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_ring_laws_pointwise(q, n, d, seed):
    F = field_create(q)
    A = random_poly(F, n, d, 3, seed)
    B = random_poly(F, n, d, 3, seed + 1)
    for pt in list(all_points(q, n))[:27]:
        a, b = A.eval_ids(pt), B.eval_ids(pt)
        assert (A * B).eval_ids(pt) == F.mul(a, b)
        assert (A - B).eval_ids(pt) == F.sub(a, b)
    assert (A + B) - B == A
    assert (A * B) == (B * A)
    assert parse(format_poly(A), F, n) == A
