import math

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from expsums import (
    AdditiveCharacter,
    BudgetExceededError,
    Polynomial,
    exp_sum_composite,
    exp_sum_direct,
    exp_sum_naive,
    exp_sum_pruned,
    finite_field_sum,
    parse_polynomial,
)
from expsums.charsums import crt_units
from expsums.corpus import standard_corpus
from conftest import brute_exp_sum, small_polynomials


class TestCharacter:
    def test_unit_must_be_coprime(self):
        with pytest.raises(ValueError):
            AdditiveCharacter(5, 2, 10)

    def test_conductor_positive(self):
        with pytest.raises(ValueError):
            AdditiveCharacter(5, 0, 1)

    def test_modulus(self):
        assert AdditiveCharacter(3, 4, 2).modulus == 81


class TestNaive:
    def test_linear_vanishes(self):
        v = exp_sum_naive(parse_polynomial("x1"), AdditiveCharacter(7, 2))
        assert v.abs < 1e-14
        # complete character sum: histogram is uniform
        assert set(v.exact_histogram.values()) == {1}

    def test_square_mod_nine(self):
        v = exp_sum_naive(parse_polynomial("x1^2"), AdditiveCharacter(3, 2))
        assert abs(v.value - (1 / 3)) < 1e-12
        assert abs(v.value.imag) < 1e-14
        oracle = brute_exp_sum(parse_polynomial("x1^2"), 9)
        assert abs(v.value - oracle) < 1e-12

    def test_bad_reduction_family_magnitude(self):
        f = parse_polynomial(f"x1^3 + {5**5}*x2^3")
        v = exp_sum_naive(f, AdditiveCharacter(5, 5), budget=10**8)
        assert abs(v.abs - 5**-2) < 1e-9

    def test_matches_brute_oracle(self):
        for text, p, m, a in [
            ("x1^2+x1", 5, 2, 1),
            ("x1^3+2*x2", 3, 2, 2),
            ("x1*x2+1", 2, 3, 1),
        ]:
            f = parse_polynomial(text)
            got = exp_sum_naive(f, AdditiveCharacter(p, m, a))
            want = brute_exp_sum(f, p**m, a)
            assert abs(got.value - want) < 1e-12

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceededError):
            exp_sum_naive(parse_polynomial("x1+x2"), AdditiveCharacter(5, 4), budget=1000)

    def test_composite_p_rejected(self):
        with pytest.raises(ValueError):
            exp_sum_naive(parse_polynomial("x1"), AdditiveCharacter(9, 1))

    def test_magnitude_bounded(self):
        v = exp_sum_naive(Polynomial.constant(1, 4), AdditiveCharacter(5, 2, 3))
        assert v.abs <= 1 + v.err_bound


class TestFiniteField:
    def test_linear(self):
        assert finite_field_sum(parse_polynomial("x1"), 11).abs < 1e-14

    def test_gauss_magnitude(self):
        v = finite_field_sum(parse_polynomial("x1^2"), 5)
        assert abs(v.abs - 5**-0.5) < 1e-12

    def test_weil_bound_cubic(self):
        v = finite_field_sum(parse_polynomial("x1^3+x1"), 7)
        assert v.abs <= 2 * 7**-0.5 + 1e-12


class TestPruned:
    def test_matches_naive_with_critical_point(self):
        f = parse_polynomial("x1^2+x2^2+1")
        chi = AdditiveCharacter(3, 2)
        assert abs(exp_sum_pruned(f, chi).value - exp_sum_naive(f, chi).value) < 1e-12

    def test_single_critical_fiber(self):
        f = parse_polynomial("x1^2+x1")
        chi = AdditiveCharacter(5, 3)
        pruned = exp_sum_pruned(f, chi)
        naive = exp_sum_naive(f, chi)
        assert abs(pruned.value - naive.value) < 1e-12
        assert pruned.fiber_count == 1  # the root of 2x+1 mod 5 is x = 2
        assert abs(pruned.abs - 5**-1.5) < 1e-12

    def test_empty_critical_set_is_exact_zero(self):
        v = exp_sum_pruned(parse_polynomial("x1"), AdditiveCharacter(7, 2))
        assert v.value == 0 and v.err_bound == 0
        assert v.fiber_count == 0

    def test_conductor_one_falls_through(self):
        f = parse_polynomial("x1^2")
        chi = AdditiveCharacter(5, 1)
        assert abs(exp_sum_pruned(f, chi).value - exp_sum_naive(f, chi).value) < 1e-14

    def test_depth_zero_enumerates_fibers(self):
        f = parse_polynomial("x1^2 + x2^3 + x1")
        chi = AdditiveCharacter(3, 3)
        full = exp_sum_pruned(f, chi)
        shallow = exp_sum_pruned(f, chi, max_depth=0)
        naive = exp_sum_naive(f, chi)
        assert abs(full.value - naive.value) < 1e-11
        assert abs(shallow.value - naive.value) < 1e-11

    def test_small_primes_supported(self):
        for p in (2, 3):
            f = parse_polynomial("x1^2 + x1*x2")
            chi = AdditiveCharacter(p, 4)
            assert abs(exp_sum_pruned(f, chi).value - exp_sum_naive(f, chi).value) < 1e-11

    @given(small_polynomials(max_n=2, max_degree=3), st.sampled_from([2, 3, 5]), st.integers(2, 3))
    @settings(max_examples=40)
    def test_oracle_equivalence(self, f, p, m):
        if p ** (m * f.n) > 10**5:
            return
        chi = AdditiveCharacter(p, m)
        assert abs(exp_sum_pruned(f, chi).value - exp_sum_naive(f, chi).value) < 1e-9


class TestComposite:
    def test_trivial_modulus(self):
        assert exp_sum_composite(parse_polynomial("x1"), 1, 1).value == 1

    def test_prime_power_single_factor(self):
        f = parse_polynomial("x1^2+x2")
        chi = AdditiveCharacter(3, 2)
        a = exp_sum_composite(f, 9, 1)
        b = exp_sum_pruned(f, chi)
        assert abs(a.value - b.value) < 1e-12

    def test_gauss_product_45(self):
        f = parse_polynomial("x1^2")
        v = exp_sum_composite(f, 45, 1)
        assert abs(v.abs - (1 / 3) * 5**-0.5) < 1e-12
        direct = exp_sum_direct(f, 45, 1)
        assert abs(v.value - direct.value) < 1e-11

    def test_noncoprime_unit_rejected(self):
        with pytest.raises(ValueError):
            exp_sum_composite(parse_polynomial("x1"), 45, 9)

    def test_large_prime_factor(self):
        # exercises the primality exit in the factorizer
        f = parse_polynomial("x1^2")
        N = 3 * 10007
        got = exp_sum_composite(f, N, 1)
        # odd-prime Gauss magnitudes: |E| = 3^(-1/2) * 10007^(-1/2)
        assert abs(got.abs - (3 * 10007) ** -0.5) < 1e-10

    def test_mod_two_square_vanishes(self):
        # x^2 = x mod 2: the sum is a nontrivial linear character sum
        v = exp_sum_naive(parse_polynomial("x1^2"), AdditiveCharacter(2, 1))
        assert v.abs < 1e-15

    def test_crt_unit_bookkeeping(self):
        # 1/N = sum u_i / q_i (mod 1) with u_i = (N/q_i)^(-1) mod q_i
        for N in (6, 45, 360):
            units = crt_units(N, 1)
            total = sum(u * (N // p**m) for p, m, u in units)
            assert total % N == 1

    @given(st.integers(2, 80), st.integers(1, 7))
    @settings(max_examples=30)
    def test_crt_multiplicativity_small(self, N, a):
        if math.gcd(a, N) != 1:
            return
        f = parse_polynomial("x1^2 + 3*x1")
        got = exp_sum_composite(f, N, a)
        want = exp_sum_direct(f, N, a)
        assert abs(got.value - want.value) < 1e-10


class TestSymmetries:
    def test_conjugation(self):
        f = parse_polynomial("x1^3 + x2")
        chi_pos = AdditiveCharacter(5, 2, 2)
        chi_neg = AdditiveCharacter(5, 2, -2)
        a = exp_sum_naive(f, chi_pos)
        b = exp_sum_naive(f, chi_neg)
        assert a.exact_histogram is not None
        assert abs(a.value - b.value.conjugate()) < 1e-13

    def test_affine_invariance(self):
        import random

        rng = random.Random(11)
        f = parse_polynomial("x1^2 + x1*x2 + 2*x2^3")
        p, m = 3, 3
        chi = AdditiveCharacter(p, m)
        base = exp_sum_naive(f, chi).abs
        n = f.n
        for _ in range(5):
            while True:
                mat = [[rng.randrange(p**m) for _ in range(n)] for _ in range(n)]
                det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
                if det % p:
                    break
            shift = [rng.randrange(p**m) for _ in range(n)]
            subs = []
            for j in range(n):
                comp = Polynomial.constant(n, shift[j])
                for k in range(n):
                    comp = comp + Polynomial.variable(n, k).scale_coefficients(mat[j][k])
                subs.append(comp)
            composed = f.compose(subs)
            assert abs(exp_sum_naive(composed, chi).abs - base) < 1e-9

    def test_value_reconstructible_from_histogram(self):
        import cmath
        import math as _math

        f = parse_polynomial("x1^2 + 2*x1")
        chi = AdditiveCharacter(5, 2, 3)
        v = exp_sum_naive(f, chi)
        M = v.modulus
        rebuilt = sum(
            c * cmath.exp(2j * _math.pi * ((chi.unit * r) % M) / M)
            for r, c in sorted(v.exact_histogram.items())
        ) / sum(v.exact_histogram.values())
        assert abs(rebuilt - v.value) < 4e-16 * len(v.exact_histogram)

    def test_vanishing_off_critical_locus(self):
        hits = 0
        for f in standard_corpus(0, 30):
            for p in (3, 5):
                grads = f.gradient()
                import itertools

                has_zero = any(
                    all(g.eval_mod(pt, p) == 0 for g in grads)
                    for pt in itertools.product(range(p), repeat=f.n)
                )
                if has_zero:
                    continue
                for m in (2, 3):
                    if p ** (m * f.n) > 10**6:
                        continue
                    v = exp_sum_pruned(f, AdditiveCharacter(p, m))
                    assert v.value == 0 and v.fiber_count == 0
                    hits += 1
        assert hits > 0
