import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField
from strengthlab.errors import DegreeZero, DivisionByZero, FieldMismatch, FieldTooLarge, NotPrime
from strengthlab.gf import field_create, parse_element

MATRIX = [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (5, 2)]


def test_field_examples():
    assert field_create(2, 1).q == 2
    assert field_create(2, 2).modulus == (1, 1, 1)  # t^2 + t + 1
    assert field_create(3, 2).modulus == (1, 0, 1)  # t^2 + 1
    assert field_create(3, 2) is field_create(3, 2)


@pytest.mark.parametrize("p,s", MATRIX)
def test_modulus_matches_product_sieve(p, s):
    assert list(field_create(p, s).modulus) == NaiveField(p, s).modulus


def test_errors():
    with pytest.raises(NotPrime):
        field_create(4)
    with pytest.raises(DegreeZero):
        field_create(2, 0)
    with pytest.raises(FieldTooLarge):
        field_create(2, 21)
    F = field_create(5)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(FieldMismatch):
        F.element(1) + field_create(3).element(1)


def test_arithmetic_examples():
    F5 = field_create(5)
    assert (F5.element(3) + F5.element(4)).value == 2
    F4 = field_create(2, 2)
    t = F4.element("t")
    assert str(t * t) == "t+1"
    for p, s in MATRIX:
        F = field_create(p, s)
        assert F.inv(1) == 1


def test_trace_examples():
    F4 = field_create(2, 2)
    assert F4.trace(0) == 0
    assert F4.trace(parse_element("t", F4)) == 1
    assert F4.char_exponent(parse_element("t", F4)) == 1
    F3 = field_create(3)
    assert F3.char_exponent(2) == 2
    assert F3.char_exponent(0) == 0


@pytest.mark.parametrize("p,s", MATRIX)
def test_against_naive_field(p, s):
    F, N = field_create(p, s), NaiveField(p, s)
    for a in range(F.q):
        assert F.trace(a) == N.trace(a)
        for b in range(F.q):
            assert F.mul(a, b) == N.mul(a, b)
            assert F.add(a, b) == N.add(a, b)


@pytest.mark.parametrize("p,s", MATRIX)
def test_group_and_trace_properties(p, s):
    F = field_create(p, s)
    q = F.q
    for g in range(1, q):
        assert F.pow(g, q - 1) == 1
        assert F.mul(g, F.inv(g)) == 1
    fibers = [0] * p
    for a in range(q):
        fibers[F.trace(a)] += 1
    assert fibers == [p ** (s - 1)] * p
    for a in range(q):
        for b in range(q):
            assert F.char_exponent(F.add(a, b)) == (F.char_exponent(a) + F.char_exponent(b)) % p


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(MATRIX), st.data())
def test_field_axioms(ps, data):
    F = field_create(*ps)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    assert F.mul(a, b) == F.scalar_mul_naive(a, b)


def test_element_text_round_trip():
    F9 = field_create(3, 2)
    for a in range(9):
        assert parse_element(str(F9.element(a)), F9) == a
