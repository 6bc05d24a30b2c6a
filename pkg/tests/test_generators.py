import itertools
import math

import pytest

from strengthlab import expsum, generators
from strengthlab.errors import ArityMismatch, BadParameters, DegreeTooLow
from strengthlab.family import PolyFamily
from strengthlab.gf import field_create
from strengthlab.poly import Polynomial, compose, delta, parse


def test_F32_matches_determinant_sum():
    F5 = field_create(5)
    # rows a = (x1, x2, x3), b = (x4, x5, x6); sum over i < j of a_i b_j - a_j b_i
    want = parse("x1*x5 - x2*x4 + x1*x6 - x3*x4 + x2*x6 - x3*x5", F5, 6)
    assert generators.gen_F(3, 2, F5) == want


def test_square_case_is_one_determinant():
    F3 = field_create(3)
    assert generators.gen_F(2, 2, F3) == parse("x1*x4 - x2*x3", F3, 4)
    assert len(generators.F_summands(5, 2)) == 10


def test_F_is_row_multilinear_and_antisymmetric():
    F5 = field_create(5)
    n, s = 4, 3
    P = generators.gen_F(n, s, F5)
    for m in P.terms:
        rows = [v // n for v, e in m]
        assert all(e == 1 for _, e in m) and sorted(rows) == list(range(s))
    swap = [((v // n + 1) % 2 if v // n < 2 else v // n) * n + v % n for v in range(s * n)]
    assert P.remap(swap, s * n) == -P


def test_block_copy():
    F2 = field_create(2)
    base = generators.gen_F(3, 2, F2)
    assert generators.gen_F_block(3, 2, 1, 1, F2) == base
    B = generators.gen_F_block(3, 2, 3, 2, F2)
    assert B.n == 18 and B.variables == frozenset(v + 6 for v in base.variables)
    with pytest.raises(BadParameters):
        generators.gen_F_block(3, 2, 2, 3, F2)


def test_G_examples():
    F3 = field_create(3)
    lay = generators.g_layout(2, 2, (2, 2))
    assert lay.e == 2 and lay.sets == (((1,), (2,)), ((1,), (2,)))
    assert lay.covers() == [((1,), (2,)), ((2,), (1,))]
    G = generators.gen_G(2, 2, (2, 2), F3)
    assert G.n == 2 * (2 + 2)
    for degrees in [(2, 2), (2, 3), (3, 3), (2, 2, 2)]:
        t = len(degrees)
        lay = generators.g_layout(t, t, degrees)
        assert lay.num_vars == t * sum(math.comb(lay.e, d - 1) for d in degrees)
        G = generators.gen_G(t, t, degrees, F3)
        collapsed = generators.collapse_G(G, t, t, degrees)
        k = generators.cover_count(degrees) % 3
        assert collapsed == generators.gen_F(t, t, F3).scale(k)
    with pytest.raises(BadParameters):
        generators.g_layout(2, 2, (1, 2))


def test_f_bias_decay():
    for q in (2, 3, 5):
        fld = field_create(q)
        prev = None
        for n in range(2, 6):
            b = expsum.char_sum_exact(generators.gen_F(n, 2, fld)).rational_value()
            assert b <= expsum.Fraction(1, q ** (n - 1))
            if prev is not None:
                assert b <= prev
            prev = b


def test_theorem_m_base_case():
    F5 = field_create(5)
    P = parse("x1*x2 + x2^2", F5)
    fam = generators.build_theorem_m_family([P], [[1, 2]], 1, 1)
    assert fam.members == (P, delta(P, [1, 2]))


def test_theorem_m_composite_pointwise():
    F5 = field_create(5)
    P = parse("x1*x2", F5)
    shifts = [[1, 0], [2, 3]]
    fam = generators.build_theorem_m_family([P, P], shifts, 2, 1)
    assert list(fam.members[:2]) == [P, P]
    Q = fam.members[2]
    outer = generators.gen_F(2, 2, F5)
    rows = [delta(P, w) for w in shifts] * 2
    for pt in itertools.product(range(5), repeat=2):
        vals = [R.eval_ids(pt) for R in rows]
        assert Q.eval_ids(pt) == outer.eval_ids(vals)
    assert Q.degree <= 2


def test_theorem_m_errors():
    F5 = field_create(5)
    P = parse("x1*x2", F5)
    with pytest.raises(ArityMismatch):
        generators.build_theorem_m_family([P], [[1, 0]], 2, 1)
    with pytest.raises(DegreeTooLow):
        generators.build_theorem_m_family([parse("x1", F5, 2)], [[1, 0]], 1, 1)


def test_sidecar_names():
    spec = generators.spec_F(3, 2)
    side = spec.to_json()
    assert side["variables"]["x1"] == "y1_1" and side["variables"]["x4"] == "y2_1"
    g = generators.spec_G(2, 2, (2, 2)).to_json()
    assert len(g["variables"]) == 8 and g["variables"]["x1"] == "w1[1]_1"
