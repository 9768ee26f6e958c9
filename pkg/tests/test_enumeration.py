"""Direct checks of the vectorized enumeration kernel against pure-Python
oracles.  The kernel underlies both routes of several cross-checks, so a
shared bug could cancel out there; these tests pin it independently.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from expsums import BudgetExceededError, Polynomial
from expsums.enumeration import (
    common_zero_points,
    count_common_zeros,
    eval_box_exact,
    eval_points_mod,
    residue_histogram,
)
from conftest import small_polynomials


def brute_histogram(f: Polynomial, grid: int, modulus: int) -> list[int]:
    hist = [0] * modulus
    for pt in itertools.product(range(grid), repeat=f.n):
        hist[f.eval_mod(pt, modulus)] += 1
    return hist


class TestResidueHistogram:
    @given(small_polynomials(max_n=2), st.integers(2, 12), st.integers(2, 40))
    @settings(max_examples=60)
    def test_matches_brute_any_grid_modulus(self, f, grid, modulus):
        got = residue_histogram(f, grid, modulus)
        assert got.tolist() == brute_histogram(f, grid, modulus)

    def test_large_modulus_small_grid(self):
        # fiber-style call: grid well below the modulus
        f = Polynomial(1, {(3,): 125, (1,): 50, (0,): 7})
        got = residue_histogram(f, 25, 625)
        assert got.tolist() == brute_histogram(f, 25, 625)

    def test_huge_coefficients_reduce(self):
        f = Polynomial(2, {(2, 0): 10**30 + 1, (0, 1): -(10**18)})
        got = residue_histogram(f, 7, 7)
        assert got.tolist() == brute_histogram(f, 7, 7)

    def test_counts_sum_to_grid_points(self):
        f = Polynomial(3, {(1, 1, 1): 2, (0, 0, 2): 3})
        hist = residue_histogram(f, 5, 11)
        assert int(hist.sum()) == 5**3

    def test_worker_invariance(self):
        f = Polynomial(2, {(2, 1): 3, (0, 3): -4, (1, 0): 9})
        a = residue_histogram(f, 50, 50, workers=1)
        b = residue_histogram(f, 50, 50, workers=4)
        assert np.array_equal(a, b)

    def test_budget_refused(self):
        f = Polynomial(3, {(1, 1, 1): 1})
        with pytest.raises(BudgetExceededError):
            residue_histogram(f, 100, 100, budget=10**5)


class TestZeroEnumeration:
    @given(small_polynomials(max_n=2), st.sampled_from([2, 3, 5, 7]))
    @settings(max_examples=40)
    def test_zero_points_match_brute(self, f, p):
        pts = common_zero_points([f], p, p)
        want = [
            pt
            for pt in itertools.product(range(p), repeat=f.n)
            if f.eval_mod(pt, p) == 0
        ]
        assert [tuple(row) for row in pts] == want
        assert count_common_zeros([f], p, p) == len(want)

    def test_joint_zeros_of_two_polynomials(self):
        f = Polynomial(2, {(1, 0): 1})
        g = Polynomial(2, {(0, 1): 1, (0, 0): -3})
        pts = common_zero_points([f, g], 7, 7)
        assert [tuple(r) for r in pts] == [(0, 3)]


class TestPointAndBoxEvaluation:
    @given(small_polynomials(max_n=3), st.integers(2, 50))
    @settings(max_examples=40)
    def test_points_match_eval_mod(self, f, modulus):
        pts = np.array(
            [[i % 5 - 2 for i in range(k, k + f.n)] for k in range(8)], dtype=np.int64
        )
        got = eval_points_mod(f, pts, modulus)
        want = [f.eval_mod(tuple(int(v) for v in row), modulus) for row in pts]
        assert got.tolist() == want

    def test_box_exact_values(self):
        f = Polynomial(2, {(2, 0): 1, (0, 1): -1})
        lows, highs = [-3, -2], [3, 2]
        vals = eval_box_exact(f, lows, highs, -3, 4)
        want = [x * x - y for x in range(-3, 4) for y in range(-2, 3)]
        assert vals.tolist() == want

    def test_box_overflow_guard(self):
        f = Polynomial(1, {(4,): 2**40})
        with pytest.raises(ValueError):
            eval_box_exact(f, [-1000], [1000], -1000, 1001)
