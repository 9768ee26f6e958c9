"""Shared oracles and hypothesis setup.

Oracle implementations here are deliberately independent of the package's
fast paths: plain Python loops, cmath phases, fsum accumulation.
"""

from __future__ import annotations

import cmath
import itertools
import math

import hypothesis.strategies as st
from hypothesis import settings

from expsums import Polynomial

settings.register_profile("suite", max_examples=30, deadline=None, derandomize=True)
settings.load_profile("suite")


def brute_exp_sum(f: Polynomial, modulus: int, a: int = 1) -> complex:
    """Normalized sum over (Z/modulus)^n by direct loop, no histogram."""
    if modulus == 1:
        return 1 + 0j
    parts = []
    for point in itertools.product(range(modulus), repeat=f.n):
        r = f.eval_mod(point, modulus)
        parts.append(cmath.exp(2j * math.pi * ((a * r) % modulus) / modulus))
    return complex(
        math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts)
    ) / modulus**f.n


def brute_zero_count(f: Polynomial, modulus: int) -> int:
    return sum(
        1
        for point in itertools.product(range(modulus), repeat=f.n)
        if f.eval_mod(point, modulus) == 0
    )


def brute_critical_count(fd: Polynomial, p: int) -> int:
    grads = fd.gradient()
    return sum(
        1
        for point in itertools.product(range(p), repeat=fd.n)
        if all(g.eval_mod(point, p) == 0 for g in grads)
    )


@st.composite
def small_polynomials(draw, max_n: int = 3, max_degree: int = 4, max_terms: int = 4):
    n = draw(st.integers(1, max_n))
    n_terms = draw(st.integers(1, max_terms))
    terms: dict[tuple[int, ...], int] = {}
    for _ in range(n_terms):
        exps = tuple(
            draw(
                st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(
                    lambda e: sum(e) <= max_degree
                )
            )
        )
        coeff = draw(st.integers(-9, 9).filter(bool))
        terms[exps] = terms.get(exps, 0) + coeff
    poly = Polynomial(n, terms)
    return poly if not poly.is_zero else Polynomial.constant(n, 1)
