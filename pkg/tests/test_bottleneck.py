import math
import random
from fractions import Fraction

import pytest

from geomatch.bottleneck import (
    PersistenceDiagram,
    SortedMatrix,
    bottleneck_search,
    build_sorted_matrices,
    decide,
    pd_bottleneck,
    select_kth,
)
from geomatch.flow import SupplyDemand
from geomatch.geometry import Metric, Point, rotate45
from geomatch.numeric import FLOAT, InputError

from brute import bottleneck_brute, pd_brute
from helpers import rand_fraction


def rand_pts(rng, n):
    return [
        Point((rand_fraction(rng, -30, 30), rand_fraction(rng, -30, 30)))
        for _ in range(n)
    ]


# ------------------------------------------------------------ sorted matrices

def test_matrix_column_of_differences():
    m = SortedMatrix([1, 3], [2], sign=-1)
    assert [m.entry(i, 0) for i in range(2)] == [-1, 1]


def test_matrix_rows_and_columns_monotone():
    rng = random.Random(9)
    rows = sorted(rng.randrange(-40, 40) for _ in range(12))
    cols = sorted(rng.randrange(-40, 40) for _ in range(9))
    for sign in (1, -1):
        m = SortedMatrix(rows, cols, sign)
        for i in range(12):
            col_vals = [m.entry(i, j) for j in range(9)]
            assert col_vals == sorted(col_vals) or col_vals == sorted(
                col_vals, reverse=True
            )
        for j in range(9):
            row_vals = [m.entry(i, j) for i in range(12)]
            assert row_vals == sorted(row_vals)


def test_transposed_matrices_negate():
    rng = random.Random(10)
    P, Q = rand_pts(rng, 8), rand_pts(rng, 6)
    mats = build_sorted_matrices(P, Q)
    dx, dbx = mats["D_x"], mats["Dbar_x"]
    for i in range(dbx.shape[0]):
        for j in range(dbx.shape[1]):
            assert dbx.entry(i, j) == -dx.entry(j, i)


def test_count_staircases():
    m = SortedMatrix([1, 5, 3], [2, 0], sign=-1)
    vals = sorted(m.entry(i, j) for i in range(3) for j in range(2))
    for x in range(-2, 7):
        assert m.count_le(x) == sum(1 for v in vals if v <= x)
        assert m.count_lt(x) == sum(1 for v in vals if v < x)


def test_select_small_example():
    m = SortedMatrix([1, 3], [0, 1], sign=1)  # entries {1, 2, 3, 4}
    assert [select_kth([m], k) for k in (1, 2, 3, 4)] == [1, 2, 3, 4]
    assert select_kth([m], 3) == 3


def test_select_rejects_bad_rank():
    m = SortedMatrix([1], [1], sign=1)
    with pytest.raises(InputError):
        select_kth([m], 0)
    with pytest.raises(InputError):
        select_kth([m], 2)


def test_select_matches_flatten_sort():
    rng = random.Random(12)
    P, Q = rand_pts(rng, 50), rand_pts(rng, 50)
    mats = build_sorted_matrices(P, Q)
    flat = sorted(
        m.entry(i, j)
        for m in mats.values()
        for i in range(m.shape[0])
        for j in range(m.shape[1])
    )
    for k in rng.sample(range(1, len(flat) + 1), 60):
        assert select_kth(mats, k, random.Random(k)) == flat[k - 1]


# ------------------------------------------------------------------- decide

def test_decide_single_pair_boundary():
    P, Q = [Point((0, 0))], [Point((1, 2))]
    assert decide(P, Q, Metric.LINF, 2).feasible
    assert not decide(P, Q, Metric.LINF, Fraction(19, 10)).feasible


def test_decide_two_pairs():
    P = [Point((0, 0)), Point((10, 0))]
    Q = [Point((0, 1)), Point((10, 2))]
    assert decide(P, Q, Metric.LINF, 2).feasible
    assert not decide(P, Q, Metric.LINF, 1).feasible


def test_decide_returns_witness():
    P = [Point((0, 0)), Point((5, 5))]
    Q = [Point((1, 0)), Point((5, 6))]
    res = decide(P, Q, Metric.LINF, 1)
    assert res.feasible
    assert sorted((p, q) for p, q, _ in res.matching) == [(0, 0), (1, 1)]


def test_decide_validates_input():
    with pytest.raises(InputError):
        decide([Point((0, 0))], [], Metric.LINF, 1)
    with pytest.raises(InputError):
        decide([Point((0, 0))], [Point((1, 1))], Metric.LINF, -1)
    with pytest.raises(InputError):
        decide([Point((0, 0))], [Point((1, 1))], Metric.L1, 4, squared=True)


def test_decide_monotone_in_lambda():
    rng = random.Random(14)
    for _ in range(10):
        n = rng.randrange(1, 7)
        P, Q = rand_pts(rng, n), rand_pts(rng, n)
        feas = [
            decide(P, Q, Metric.LINF, lam, want_matching=False).feasible
            for lam in range(0, 80, 8)
        ]
        assert feas == sorted(feas), "feasibility must be monotone"


# ---------------------------------------------------------------- the search

def test_single_pair_all_metrics():
    P, Q = [Point((0, 0))], [Point((1, 2))]
    assert bottleneck_search(P, Q, Metric.LINF).lambda_star == 2
    assert bottleneck_search(P, Q, Metric.L1).lambda_star == 3
    r = bottleneck_search(P, Q, Metric.L2)
    assert r.lambda_star_sq == 5
    assert r.lambda_star == pytest.approx(math.sqrt(5))


def test_identical_sets_zero():
    rng = random.Random(15)
    P = rand_pts(rng, 6)
    for metric in Metric:
        r = bottleneck_search(P, list(P), metric)
        star = r.lambda_star_sq if metric is Metric.L2 else r.lambda_star
        assert star == 0


def test_empty_sets():
    r = bottleneck_search([], [], Metric.LINF)
    assert r.lambda_star == 0 and r.matching == []


def test_size_mismatch_rejected():
    with pytest.raises(InputError):
        bottleneck_search([Point((0, 0))], [], Metric.LINF)


def test_search_matches_brute_force():
    rng = random.Random(16)
    for _ in range(25):
        n = rng.randrange(1, 9)
        P, Q = rand_pts(rng, n), rand_pts(rng, n)
        for metric in Metric:
            r = bottleneck_search(P, Q, metric, rng=random.Random(1))
            got = r.lambda_star_sq if metric is Metric.L2 else r.lambda_star
            assert got == bottleneck_brute(P, Q, metric)


def test_bisected_oracle_equals_linear_scan():
    rng = random.Random(18)
    for _ in range(6):
        n = rng.randrange(1, 6)
        P, Q = rand_pts(rng, n), rand_pts(rng, n)
        for metric in Metric:
            assert bottleneck_brute(P, Q, metric) == bottleneck_brute(
                P, Q, metric, scan=True
            )


def test_l1_equals_linf_on_rotated_inputs():
    rng = random.Random(19)
    for _ in range(12):
        n = rng.randrange(1, 8)
        P, Q = rand_pts(rng, n), rand_pts(rng, n)
        direct = bottleneck_search(P, Q, Metric.L1).lambda_star
        rotated = bottleneck_search(
            [rotate45(p) for p in P], [rotate45(q) for q in Q], Metric.LINF
        ).lambda_star
        assert direct == rotated


def test_witness_matching_is_within_bound():
    rng = random.Random(20)
    P, Q = rand_pts(rng, 7), rand_pts(rng, 7)
    r = bottleneck_search(P, Q, Metric.LINF)
    for p, q, _ in r.matching:
        d = max(abs(P[p][0] - Q[q][0]), abs(P[p][1] - Q[q][1]))
        assert d <= r.lambda_star


def test_predecessor_candidate_infeasible():
    rng = random.Random(22)
    P, Q = rand_pts(rng, 6), rand_pts(rng, 6)
    star = bottleneck_search(P, Q, Metric.LINF).lambda_star
    if star > 0:
        eps = Fraction(1, 10**9)
        assert not decide(P, Q, Metric.LINF, star - eps, want_matching=False).feasible


def test_many_to_many_variant():
    P = [Point((0, 0)), Point((4, 0))]
    Q = [Point((1, 0)), Point((3, 0))]
    sd = SupplyDemand((2, 3), (1, 4))
    r = bottleneck_search(P, Q, Metric.LINF, sd=sd)
    assert r.lambda_star == 3
    assert sum(v for _, _, v in r.matching) == 5


def test_float_mode_search():
    P = [Point((0.0, 0.0)), Point((3.0, 1.0))]
    Q = [Point((0.5, 0.0)), Point((3.0, 2.0))]
    r = bottleneck_search(P, Q, Metric.LINF, numeric=FLOAT)
    assert r.lambda_star == pytest.approx(1.0)


# ------------------------------------------------------------------ diagrams

def test_diagram_validation():
    with pytest.raises(InputError):
        PersistenceDiagram(((1, 1),))
    with pytest.raises(InputError):
        PersistenceDiagram(((2, 1),))
    assert len(PersistenceDiagram(((1, 3), (0, 1)))) == 2


def test_pd_single_point_vs_empty():
    v = pd_bottleneck([(1, 3)], [])
    assert v == 1
    assert isinstance(v, Fraction)


def test_pd_empty_and_identical():
    assert pd_bottleneck([], []) == 0
    dgm = [(Fraction(1), Fraction(3)), (Fraction(2), Fraction(9, 2))]
    assert pd_bottleneck(dgm, dgm) == 0


def test_pd_symmetry():
    rng = random.Random(23)
    for _ in range(8):
        X = [(b, b + rand_fraction(rng, 1, 9)) for b in rand_fraction_list(rng, 5)]
        Y = [(b, b + rand_fraction(rng, 1, 9)) for b in rand_fraction_list(rng, 4)]
        assert pd_bottleneck(X, Y) == pd_bottleneck(Y, X)


def rand_fraction_list(rng, n):
    return [rand_fraction(rng, -10, 10) for _ in range(rng.randrange(0, n))]


def test_pd_matches_brute_force():
    rng = random.Random(24)
    for _ in range(15):
        X = [(b, b + rand_fraction(rng, 1, 8)) for b in rand_fraction_list(rng, 7)]
        Y = [(b, b + rand_fraction(rng, 1, 8)) for b in rand_fraction_list(rng, 7)]
        assert pd_bottleneck(X, Y) == pd_brute(X, Y)


def test_pd_triangle_inequality_soft():
    rng = random.Random(25)
    for _ in range(6):
        dgms = [
            [(b, b + rand_fraction(rng, 1, 6)) for b in rand_fraction_list(rng, 5)]
            for _ in range(3)
        ]
        d01 = float(pd_bottleneck(dgms[0], dgms[1]))
        d12 = float(pd_bottleneck(dgms[1], dgms[2]))
        d02 = float(pd_bottleneck(dgms[0], dgms[2]))
        assert d02 <= d01 + d12 + 1e-9
