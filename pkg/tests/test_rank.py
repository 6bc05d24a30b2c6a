import itertools
import json
import random

import pytest

from oracles import naive_matrix_rank, naive_partition_ranks
from strengthlab import rank
from strengthlab.errors import BlockMismatch, DegreeZero, ZeroBias
from strengthlab.gf import field_create
from strengthlab.poly import Polynomial, Tensor, multilinearize, parse
from strengthlab.rank import PartitionCertificate, Summand


def _t(text, q=2, d=2, n=2):
    return Tensor(parse(text, field_create(q), d * n), d, n)


def _from_flat(t, q, n, d):
    terms = {}
    for k, idx in enumerate(itertools.product(range(n), repeat=d)):
        if t[k]:
            terms[tuple((b * n + i, 1) for b, i in enumerate(idx))] = t[k]
    return Tensor(Polynomial(field_create(q), d * n, terms), d, n)


def test_verify_examples():
    F = field_create(2)
    # x1, x2 are block 1 and x3, x4 (y1, y2) are block 2
    T = _t("x1*x4 + x2*x3")
    cert = PartitionCertificate(2, 2, (
        Summand((0,), parse("x1", F, 4), parse("x4", F, 4)),
        Summand((0,), parse("x2", F, 4), parse("x3", F, 4)),
    ))
    assert rank.verify_certificate(T, cert)
    assert rank.verify_certificate(_t("0"), PartitionCertificate(2, 2, ()))
    bad = PartitionCertificate(2, 2, (Summand((0,), parse("x1", F, 4), parse("x4", F, 4)),))
    assert not rank.verify_certificate(_t("x1*x3"), bad)


def test_verify_rejects_block_violations():
    F = field_create(2)
    T = _t("x1*x3")
    wrong = PartitionCertificate(2, 2, (Summand((0,), parse("x3", F, 4), parse("x1", F, 4)),))
    with pytest.raises(BlockMismatch):
        rank.verify_certificate(T, wrong)
    with pytest.raises(BlockMismatch):
        rank.verify_certificate(T, PartitionCertificate(3, 2, ()))
    improper = PartitionCertificate(2, 2, (Summand((0, 1), parse("x1*x3", F, 4), parse("1", F, 4)),))
    with pytest.raises(BlockMismatch):
        rank.verify_certificate(T, improper)


def test_prank_bilinear_examples():
    assert rank.prank_bilinear(_t("x1*x3 + x2*x4"))[0] == 2
    assert rank.prank_bilinear(_t("0"))[0] == 0
    assert rank.prank_bilinear(_t("x1*x4"))[0] == 1


def test_bilinear_rank_matches_naive_elimination():
    rng = random.Random(5)
    for _ in range(40):
        q = rng.choice((2, 3, 5))
        n = rng.randint(1, 4)
        M = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
        T = Tensor.from_matrix(field_create(q), M)
        r, cert = rank.prank_bilinear(T)
        assert r == naive_matrix_rank(M, q)
        assert rank.verify_certificate(T, cert)
        up = rank.prank_upper_search(T, budget=10**6, seed=2)
        assert up.size == r


def test_prank_lower_examples():
    assert rank.prank_lower(_t("0")) == 0
    T = Tensor.from_matrix(field_create(3), [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert rank.prank_lower(T) <= 3 == rank.prank_bilinear(T)[0]
    with pytest.raises(ZeroBias):
        rank.prank_lower(Tensor(parse("x1", field_create(3), 1), 1, 1))


def test_rank_one_trilinear():
    T = _t("x1*x3*x5", d=3)
    cert = rank.prank_upper_search(T)
    assert cert.size == 1 and cert.summands[0].J == (0,)
    assert rank.verify_certificate(T, cert)


def test_search_is_exact_on_all_small_trilinear_tensors():
    exact = naive_partition_ranks(2, 2)
    assert len(exact) == 256
    for t, pr in exact.items():
        T = _from_flat(t, 2, 2, 3)
        cert = rank.prank_upper_search(T, seed=0)
        assert rank.verify_certificate(T, cert)
        assert cert.size == pr
        if pr:
            assert rank.prank_lower(T) <= pr
            assert rank.bias_margin(T, pr) >= 1


def test_search_is_deterministic():
    rng = random.Random(1)
    t = [rng.randrange(3) for _ in range(27)]
    T = _from_flat(t, 3, 3, 3)
    a = rank.prank_upper_search(T, seed=4, threads=1)
    b = rank.prank_upper_search(T, seed=4, threads=8)
    assert a.dumps() == b.dumps()
    assert rank.verify_certificate(T, a)


def test_certificate_json_round_trip():
    F = field_create(3)
    T = multilinearize(parse("x1*x2*x3 + 2*x1^2*x2", F))
    cert = rank.prank_upper_search(T, seed=1)
    data = json.loads(cert.dumps())
    again = PartitionCertificate.from_json(data, F)
    assert again.dumps() == cert.dumps()
    assert rank.verify_certificate(T, again)
    assert cert.concat(again).size == 2 * cert.size


def test_ncrank_examples():
    F5, F2 = field_create(5), field_create(2)
    b = rank.ncrank_bounds(parse("x1*x2 + x3*x4", F5))
    assert b.pr_lower == b.pr_upper == 4
    with pytest.raises(DegreeZero):
        rank.ncrank_bounds(parse("x1 + x2", F5))
    assert rank.ncrank_bounds(Polynomial.constant(F5, 2, 3)).upper == 0
    b = rank.ncrank_bounds(parse("x1*x2*x3", F2))
    assert b.C_d == 4**3 and b.lower <= b.upper
    assert rank.default_C(3, 5) == 1


def test_strength_verify_examples():
    F = field_create(5)
    x = [parse(f"x{i}", F, 4) for i in range(1, 5)]
    assert rank.strength_verify(parse("x1*x2", F, 4), [(x[0], x[1])])
    assert rank.strength_verify(parse("x1*x2 + x3*x4", F, 4), [(x[0], x[1]), (x[2], x[3])])
    assert not rank.strength_verify(parse("x1^2", F, 4), [(x[0] * x[0], Polynomial.constant(F, 4, 1))])


def test_flattening_rank_is_upper_bound():
    rng = random.Random(3)
    for _ in range(20):
        t = [rng.randrange(2) for _ in range(8)]
        T = _from_flat(t, 2, 2, 3)
        cert = rank.prank_upper_search(T)
        assert cert.size <= min(rank.flattening_rank(T, J) for J in rank.splits(3))


def test_bilinear_bias_meets_certificate_bound_with_equality():
    rng = random.Random(8)
    for _ in range(30):
        q = rng.choice((2, 3))
        n = rng.randint(1, 3)
        T = Tensor.from_matrix(field_create(q), [[rng.randrange(q) for _ in range(n)] for _ in range(n)])
        r, _ = rank.prank_bilinear(T)
        assert rank.bias_margin(T, r) == 1
