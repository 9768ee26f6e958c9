"""Vectorized enumeration kernels: grid evaluation, exact histograms, budgets.

All heavy loops run through numpy int64 with reduction mod M after every
multiply, which is exact provided M < 2^31 (products stay below 2^62).
Counts are exact integers throughout, so results are independent of block
partitioning and of the worker count: parallel workers each produce an
integer histogram (or count, or index list) and the merge is exact integer
addition / ordered concatenation.

Budgets: the default enumeration budget is 10^8 points, overridable via
the IGUSA_BUDGET environment variable or per call.  IGUSA_WORKERS sets the
default worker-thread count (default 1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError
from .polynomials import Polynomial

DEFAULT_BUDGET = 10**8

# Target elements per evaluation block; keeps temporaries ~tens of MB.
_BLOCK_ELEMS = 1 << 21

_MAX_MODULUS = 2**31  # int64 products of two reduced residues stay exact

# Points touched since the last reset; CLI reports this per run.
_consumed = 0


def enumeration_budget(override: int | None = None) -> int:
    if override is not None:
        if override < 1:
            raise ValueError(f"budget must be positive, got {override}")
        return override
    env = os.environ.get("IGUSA_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def default_workers(override: int | None = None) -> int:
    if override is not None:
        if override < 1:
            raise ValueError(f"workers must be >= 1, got {override}")
        return override
    env = os.environ.get("IGUSA_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def reset_meter() -> None:
    global _consumed
    _consumed = 0


def meter_consumed() -> int:
    return _consumed


def _charge(points: int, budget: int, what: str) -> None:
    global _consumed
    if points > budget:
        raise BudgetExceededError(points, budget, what)
    _consumed += points


def _pow_vector(values: np.ndarray, e: int, modulus: int) -> np.ndarray:
    out = np.ones_like(values)
    base = values % modulus
    k = e
    while k:
        if k & 1:
            out = out * base % modulus
        k >>= 1
        if k:
            base = base * base % modulus
    return out


def _prepare_terms(f: Polynomial, modulus: int) -> list[tuple[tuple[int, ...], int]]:
    terms = []
    for e, c in f.terms.items():
        cm = c % modulus
        if cm:
            terms.append((e, cm))
    return terms


_INT64_SAFE = 2**62


def _block_values(
    terms: list[tuple[tuple[int, ...], int]],
    n: int,
    grid: int,
    modulus: int,
    lo: int,
    hi: int,
    pow_full: dict[tuple[int, int], np.ndarray],
) -> np.ndarray:
    """Values of sum(terms) mod modulus on [lo,hi) x [0,grid)^(n-1), flattened.

    Worst-case magnitudes are tracked exactly so the (slow) int64 reduction
    runs only when a product or sum could otherwise overflow; for small
    moduli a term costs one multiply per variable factor and a single
    final reduction.
    """
    shape = (hi - lo,) + (grid,) * (n - 1)
    acc = np.zeros(shape, dtype=np.int64)
    acc_bound = 0
    red = modulus - 1
    for e, c in terms:
        t: np.ndarray | None = None
        t_bound = 1
        for j, k in enumerate(e):
            if not k:
                continue
            key = (j, k)
            if key not in pow_full:
                pow_full[key] = _pow_vector(np.arange(grid, dtype=np.int64), k, modulus)
            vec = pow_full[key][lo:hi] if j == 0 else pow_full[key]
            ax_shape = [1] * n
            ax_shape[j] = -1
            shaped = vec.reshape(ax_shape)
            if t is None:
                # fold the coefficient into the first (cheap, 1-D) factor
                t = shaped * c
                t_bound = red * c
            else:
                if t_bound * red >= _INT64_SAFE:
                    t = t % modulus
                    t_bound = red
                t = t * shaped
                t_bound *= red
        if t is None:
            acc += c
            acc_bound += c
        else:
            if acc_bound + t_bound >= _INT64_SAFE:
                acc %= modulus
                acc_bound = red
                if t_bound >= _INT64_SAFE - acc_bound:
                    t = t % modulus
                    t_bound = red
            acc += t
            acc_bound += t_bound
    acc %= modulus
    return acc.reshape(-1)


def _axis0_blocks(grid: int, n: int, workers: int = 1) -> list[tuple[int, int]]:
    inner = grid ** (n - 1)
    step = max(1, _BLOCK_ELEMS // max(1, inner))
    if workers > 1:
        step = max(1, min(step, -(-grid // workers)))
    return [(lo, min(lo + step, grid)) for lo in range(0, grid, step)]


def _run_blocks(fn, blocks, workers):
    if workers <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def residue_histogram(
    f: Polynomial,
    grid: int,
    modulus: int,
    budget: int | None = None,
    workers: int | None = None,
) -> np.ndarray:
    """Exact histogram of f(x) mod modulus over x in [0, grid)^n.

    Returns an int64 array of length ``modulus`` whose entries sum to
    grid^n.  The modulus need not equal the grid size (fiber sums evaluate
    a polynomial mod p^m over a grid of size p^(m-1)).
    """
    if modulus >= _MAX_MODULUS:
        raise ValueError(f"modulus {modulus} too large for the int64 kernel")
    n = f.n
    total = grid**n
    _charge(total, enumeration_budget(budget), "histogram enumeration")
    workers = default_workers(workers)
    terms = _prepare_terms(f, modulus)
    pow_full: dict[tuple[int, int], np.ndarray] = {}

    def work(block):
        lo, hi = block
        vals = _block_values(terms, n, grid, modulus, lo, hi, pow_full)
        return np.bincount(vals, minlength=modulus)

    hist = np.zeros(modulus, dtype=np.int64)
    for part in _run_blocks(work, _axis0_blocks(grid, n, workers), workers):
        hist += part
    return hist


def common_zero_points(
    polys: Sequence[Polynomial],
    grid: int,
    modulus: int,
    budget: int | None = None,
    workers: int | None = None,
) -> np.ndarray:
    """Coordinates in [0, grid)^n where every polynomial is 0 mod modulus.

    Returns an (N, n) int64 array in row-major (lexicographic) order.
    """
    if not polys:
        raise ValueError("need at least one polynomial")
    n = polys[0].n
    if any(p.n != n for p in polys):
        raise ValueError("polynomials have mixed variable counts")
    if modulus >= _MAX_MODULUS:
        raise ValueError(f"modulus {modulus} too large for the int64 kernel")
    total = grid**n
    _charge(total * len(polys), enumeration_budget(budget), "zero-locus enumeration")
    workers = default_workers(workers)
    terms_list = [_prepare_terms(p, modulus) for p in polys]
    pow_full: dict[tuple[int, int], np.ndarray] = {}
    inner = grid ** (n - 1)

    def work(block):
        lo, hi = block
        mask: np.ndarray | None = None
        for terms in terms_list:
            vals = _block_values(terms, n, grid, modulus, lo, hi, pow_full)
            m = vals == 0
            mask = m if mask is None else (mask & m)
            if not mask.any():
                return np.empty(0, dtype=np.int64)
        return np.flatnonzero(mask) + lo * inner

    flats = _run_blocks(work, _axis0_blocks(grid, n, workers), workers)
    flat = np.concatenate(flats) if flats else np.empty(0, dtype=np.int64)
    coords = np.empty((flat.size, n), dtype=np.int64)
    rem = flat
    for j in range(n - 1, -1, -1):
        coords[:, j] = rem % grid
        rem = rem // grid
    return coords


def count_common_zeros(
    polys: Sequence[Polynomial],
    grid: int,
    modulus: int,
    budget: int | None = None,
    workers: int | None = None,
) -> int:
    """|{x in [0,grid)^n : every polynomial is 0 mod modulus}|."""
    if not polys:
        raise ValueError("need at least one polynomial")
    n = polys[0].n
    if any(p.n != n for p in polys):
        raise ValueError("polynomials have mixed variable counts")
    if modulus >= _MAX_MODULUS:
        raise ValueError(f"modulus {modulus} too large for the int64 kernel")
    total = grid**n
    _charge(total * len(polys), enumeration_budget(budget), "zero-count enumeration")
    workers = default_workers(workers)
    terms_list = [_prepare_terms(p, modulus) for p in polys]
    pow_full: dict[tuple[int, int], np.ndarray] = {}

    def work(block):
        lo, hi = block
        mask: np.ndarray | None = None
        for terms in terms_list:
            vals = _block_values(terms, n, grid, modulus, lo, hi, pow_full)
            m = vals == 0
            mask = m if mask is None else (mask & m)
            if not mask.any():
                return 0
        return int(mask.sum())

    return sum(_run_blocks(work, _axis0_blocks(grid, n, workers), workers))


def eval_points_mod(f: Polynomial, points: np.ndarray, modulus: int) -> np.ndarray:
    """f at each row of ``points`` (N, n), reduced mod modulus."""
    if modulus >= _MAX_MODULUS:
        raise ValueError(f"modulus {modulus} too large for the int64 kernel")
    if points.ndim != 2 or points.shape[1] != f.n:
        raise ValueError(f"points must be (N, {f.n})")
    acc = np.zeros(points.shape[0], dtype=np.int64)
    cols = points.T % modulus
    for e, c in _prepare_terms(f, modulus):
        t = np.full(points.shape[0], c, dtype=np.int64)
        for j, k in enumerate(e):
            if k:
                t = t * _pow_vector(cols[j], k, modulus) % modulus
        acc = (acc + t) % modulus
    return acc


def eval_box_exact(
    f: Polynomial,
    lows: Sequence[int],
    highs: Sequence[int],
    lo0: int,
    hi0: int,
) -> np.ndarray:
    """Exact int64 values of f on [lo0,hi0) x prod_j [lows_j, highs_j].

    Axis 0 is restricted to [lo0, hi0) within [lows_0, highs_0]; the result
    is flattened in row-major order.  Raises when the worst-case magnitude
    could overflow int64.
    """
    n = f.n
    big = max(max(abs(int(a)), abs(int(b))) for a, b in zip(lows, highs))
    bound = sum(abs(c) * max(1, big) ** sum(e) for e, c in f.terms.items())
    if bound >= 2**62:
        raise ValueError("coefficients too large for the exact int64 box kernel")
    shape = [hi0 - lo0] + [int(highs[j]) - int(lows[j]) + 1 for j in range(1, n)]
    axes = [np.arange(lo0, hi0, dtype=np.int64)] + [
        np.arange(int(lows[j]), int(highs[j]) + 1, dtype=np.int64) for j in range(1, n)
    ]
    acc = np.zeros(shape, dtype=np.int64)
    for e, c in f.terms.items():
        t: np.ndarray | None = None
        for j, k in enumerate(e):
            if not k:
                continue
            vec = axes[j] ** k
            ax_shape = [1] * n
            ax_shape[j] = -1
            shaped = vec.reshape(ax_shape)
            t = shaped if t is None else t * shaped
        acc = acc + c if t is None else acc + c * t
    return acc.reshape(-1)
