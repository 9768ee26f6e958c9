"""Normalized exponential sums over Z/p^m, F_p, and composite Z/N.

The normalized sum for a polynomial f in n variables, a prime power p^m
and a unit a is

    E = p^(-mn) * sum_{x mod p^m} e^(2*pi*i * a*f(x) / p^m).

Three evaluation routes:

* exp_sum_naive      -- full enumeration through an exact integer histogram
                        of residues, converted to complex once per distinct
                        angle (order-independent, bitwise deterministic).
* exp_sum_pruned     -- stationary-phase pruning.  For m >= 2, writing
                        x = u + p^(m-1) t gives
                        f(x) = f(u) + p^(m-1) t . grad f(u)  (mod p^m),
                        so the inner t-sum vanishes unless grad f(u) = 0
                        mod p.  Only fibers over critical residues mod p
                        remain; each fiber reduces, after factoring p^v out
                        of f(P + p y) - f(P), to a sum at conductor m - v,
                        and the recursion repeats.  Valid for every prime,
                        including p = 2 and 3.
* exp_sum_composite  -- the product over prime powers dividing N, with the
                        per-factor units fixed by 1/N = sum_i u_i / q_i
                        where u_i = (N/q_i)^(-1) mod q_i, so that the unit
                        for the factor q_i is a * u_i mod q_i.

Values carry a coarse but sound error bound: 4 ulp per distinct histogram
angle plus one per combination step.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import enumeration
from .arith import factorize, is_prime
from .polynomials import Polynomial

_EPS = sys.float_info.epsilon

# Phase tables beyond this size are processed in chunks.
_PHASE_CHUNK = 1 << 20

# Histograms at most this long are attached to the returned value.
_HISTOGRAM_KEEP = 1 << 16


@dataclass(frozen=True)
class AdditiveCharacter:
    """The character x -> e^(2*pi*i * a*x / p^m) on Z/p^m with conductor m.

    ``p`` is normally prime; composite moduli go through
    exp_sum_composite, which builds its own per-prime-power characters.
    """

    p: int
    m: int
    a: int = 1

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"modulus base must be >= 2, got {self.p}")
        if self.m < 1:
            raise ValueError(f"conductor must be >= 1, got {self.m}")
        if math.gcd(self.a, self.p) != 1:
            raise ValueError(f"unit {self.a} shares a factor with {self.p}")

    @property
    def modulus(self) -> int:
        return self.p**self.m

    @property
    def unit(self) -> int:
        return self.a % self.modulus


@dataclass
class ExpSumValue:
    """A computed normalized sum with provenance.

    ``exact_histogram`` (residue -> count, together with ``modulus``) is
    attached when the value came from a single full enumeration and the
    modulus is small enough to keep; the value is reconstructible from it
    to within a few ulp per distinct angle.  ``fiber_count`` reports how
    many critical fibers the pruned route touched (None on other routes).
    """

    value: complex
    abs: float
    err_bound: float
    exact_histogram: dict[int, int] | None = None
    modulus: int | None = None
    fiber_count: int | None = None


def _phase(numerator: int, modulus: int) -> complex:
    """e^(2*pi*i * numerator/modulus) from the exact reduced angle."""
    return cmath.exp(2j * math.pi * (numerator % modulus) / modulus)


def _histogram_value(hist: np.ndarray, modulus: int, a: int, total: int) -> tuple[complex, float]:
    """sum_r hist[r] e^(2*pi*i a r / modulus) / total, chunked and ordered."""
    acc = 0j
    a = a % modulus
    for lo in range(0, modulus, _PHASE_CHUNK):
        hi = min(lo + _PHASE_CHUNK, modulus)
        counts = hist[lo:hi]
        if not counts.any():
            continue
        residues = np.arange(lo, hi, dtype=np.int64)
        angles = (a * residues) % modulus
        phases = np.exp((2j * np.pi / modulus) * angles)
        acc += complex(np.sum(counts.astype(np.float64) * phases))
    nnz = int(np.count_nonzero(hist))
    err = 4.0 * _EPS * (nnz + 1)
    return acc / total, err


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _from_histogram(
    f: Polynomial, grid: int, modulus: int, a: int, budget, workers
) -> ExpSumValue:
    hist = enumeration.residue_histogram(f, grid, modulus, budget=budget, workers=workers)
    total = grid**f.n
    value, err = _histogram_value(hist, modulus, a, total)
    keep = None
    if modulus <= _HISTOGRAM_KEEP:
        keep = {int(r): int(c) for r, c in enumerate(hist) if c}
    return ExpSumValue(value, abs(value), err, exact_histogram=keep, modulus=modulus)


def exp_sum_naive(
    f: Polynomial,
    chi: AdditiveCharacter,
    budget: int | None = None,
    workers: int | None = None,
) -> ExpSumValue:
    """Full enumeration of E over (Z/p^m)^n via the exact residue histogram."""
    _require_prime(chi.p)
    return _from_histogram(f, chi.modulus, chi.modulus, chi.unit, budget, workers)


def finite_field_sum(
    f: Polynomial,
    p: int,
    a: int = 1,
    budget: int | None = None,
    workers: int | None = None,
) -> ExpSumValue:
    """E over F_p^n (conductor 1)."""
    return exp_sum_naive(f, AdditiveCharacter(p, 1, a), budget=budget, workers=workers)


def exp_sum_direct(
    f: Polynomial,
    N: int,
    a: int = 1,
    budget: int | None = None,
    workers: int | None = None,
) -> ExpSumValue:
    """E over (Z/N)^n by direct enumeration, any N >= 1 (oracle route)."""
    if N < 1:
        raise ValueError(f"modulus must be >= 1, got {N}")
    if math.gcd(a, N) != 1:
        raise ValueError(f"unit {a} shares a factor with {N}")
    if N == 1:
        return ExpSumValue(1 + 0j, 1.0, 0.0)
    return _from_histogram(f, N, N, a % N, budget, workers)


def _min_p_valuation(f: Polynomial, p: int) -> int | None:
    """min_p-valuation over coefficients; None for the zero polynomial."""
    best: int | None = None
    for c in f.terms.values():
        v = 0
        c = abs(c)
        while c % p == 0:
            c //= p
            v += 1
        best = v if best is None else min(best, v)
        if best == 0:
            return 0
    return best


def _critical_residues(f: Polynomial, p: int, budget, workers) -> np.ndarray:
    """Points of F_p^n where every gradient component vanishes, sorted."""
    grads = list(f.gradient())
    return enumeration.common_zero_points(grads, p, p, budget=budget, workers=workers)


def _fiber_value(
    f: Polynomial,
    p: int,
    m: int,
    a: int,
    point: tuple[int, ...],
    depth: int,
    budget,
    workers,
) -> tuple[complex, float]:
    """Normalized sum over the fiber {x = point mod p} of (Z/p^m)^n.

    Writes f(point + p y) = f(point) + p^v h(y) with h of unit content.
    Since point is critical mod p, v >= 2, so the fiber reduces to the
    sum for h at conductor m - v; conductor <= 0 means a bare phase.
    With depth exhausted the fiber is enumerated directly instead.
    """
    modulus = p**m
    g = f.shift_scale(point, p)
    c0 = g.constant_term()
    phase = _phase(a * c0, modulus)
    g1 = g - c0
    if g1.is_zero:
        return phase, 2.0 * _EPS
    v = _min_p_valuation(g1, p)
    assert v is not None and v >= 2, "critical fiber must carry p^2"
    if v >= m:
        return phase, 2.0 * _EPS
    if depth <= 0:
        # no recursion left: enumerate the p^((m-1)n) lift points directly
        direct = _from_histogram(g, p ** (m - 1), modulus, a, budget, workers)
        return direct.value, direct.err_bound
    m_eff = m - v
    h = g1.divide_coefficients(p**v)
    sub_chi = AdditiveCharacter(p, m_eff, a % (p**m_eff))
    if m_eff == 1:
        sub = exp_sum_naive(h, sub_chi, budget=budget, workers=workers)
    else:
        sub = exp_sum_pruned(h, sub_chi, max_depth=depth - 1, budget=budget, workers=workers)
    return phase * sub.value, sub.err_bound + 2.0 * _EPS


def exp_sum_pruned(
    f: Polynomial,
    chi: AdditiveCharacter,
    max_depth: int | None = None,
    budget: int | None = None,
    workers: int | None = None,
) -> ExpSumValue:
    """E via stationary-phase pruning; exact 0 when no critical residue exists.

    max_depth counts the remaining recursion levels (default: full, i.e.
    the conductor); at depth 0 surviving fibers are enumerated directly.
    """
    _require_prime(chi.p)
    p, m, a = chi.p, chi.m, chi.unit
    if m == 1:
        return exp_sum_naive(f, chi, budget=budget, workers=workers)
    if max_depth is None:
        max_depth = m
    criticals = _critical_residues(f, p, budget, workers)
    if criticals.shape[0] == 0:
        return ExpSumValue(0j, 0.0, 0.0, fiber_count=0)
    total = 0j
    err = 0.0
    for row in criticals:
        val, e = _fiber_value(f, p, m, a, tuple(int(x) for x in row), max_depth, budget, workers)
        total += val
        err += e + _EPS
    scale = p**f.n
    value = total / scale
    return ExpSumValue(value, abs(value), err / scale + 2 * _EPS, fiber_count=int(criticals.shape[0]))


def crt_units(N: int, a: int) -> list[tuple[int, int, int]]:
    """Per-prime-power characters (p, m, unit) for x -> e^(2 pi i a x / N).

    With q_i = p_i^{m_i} and u_i = (N/q_i)^(-1) mod q_i one has
    a x / N = sum_i (a u_i x) / q_i  (mod 1), so the factor at q_i uses
    the unit a * u_i mod q_i.
    """
    factors = factorize(N)
    out = []
    for p in sorted(factors):
        m = factors[p]
        q = p**m
        u = pow(N // q, -1, q)
        out.append((p, m, (a * u) % q))
    return out


def exp_sum_composite(
    f: Polynomial,
    N: int,
    a: int = 1,
    method: str = "pruned",
    budget: int | None = None,
    workers: int | None = None,
) -> ExpSumValue:
    """E over (Z/N)^n as the product of its prime-power factors."""
    if N < 1:
        raise ValueError(f"modulus must be >= 1, got {N}")
    if math.gcd(a, N) != 1:
        raise ValueError(f"unit {a} shares a factor with {N}")
    if method not in ("naive", "pruned"):
        raise ValueError(f"unknown method {method!r}")
    if N == 1:
        return ExpSumValue(1 + 0j, 1.0, 0.0)
    value = 1 + 0j
    err = 0.0
    for p, m, unit in crt_units(N, a):
        chi = AdditiveCharacter(p, m, unit)
        if method == "naive":
            part = exp_sum_naive(f, chi, budget=budget, workers=workers)
        else:
            part = exp_sum_pruned(f, chi, budget=budget, workers=workers)
        err = err * part.abs + abs(value) * part.err_bound + err * part.err_bound + _EPS
        value *= part.value
    return ExpSumValue(value, abs(value), err)
