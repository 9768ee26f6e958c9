"""Major-arc toolkit: smooth weight, lattice sums, local densities, and
the comparison of a direct weighted solution count against the
singular-series x singular-integral prediction.

The weight is the standard compactly supported bump

    omega(x) = w(||x - x0|| / rho),   w(t) = exp(-1/(1 - t^2)) for |t| < 1,

zero on and outside the sphere of radius rho.  For a polynomial f of
degree d in n variables the prediction reads

    N_omega(f, B)  ~  S(R) * J(R) * B^(n-d),

with S(R) the truncated sum over moduli q <= R of the averaged complete
sums and J(R) the truncated integral of I(gamma) = int omega(x)
e^(2 pi i gamma f(x)) dx.  Truncations default to R = ceil(B^delta) for
the series and B^delta for the integral.

Floating-point reductions are carried out in a fixed chunk order
(chunk results combined by math.fsum in index order), so results are
bitwise independent of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import enumeration
from .charsums import exp_sum_composite
from .errors import QuadratureConvergenceError
from .polynomials import Polynomial

_SOLVER_CHUNK = 1 << 20


@dataclass(frozen=True)
class WeightFunction:
    """Bump weight omega(x) = w(||x - center|| / rho) supported in the
    open ball of radius rho around center."""

    center: tuple[float, ...]
    rho: float

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def n(self) -> int:
        return len(self.center)

    def __call__(self, x: Sequence[float]) -> float:
        return weight_eval(self, x)

    def values(self, points: np.ndarray, scale: float = 1.0) -> np.ndarray:
        """omega(points / scale) for an (N, n) array, vectorized."""
        c = np.asarray(self.center)
        t2 = np.sum((points / scale - c) ** 2, axis=-1) / self.rho**2
        out = np.zeros(t2.shape, dtype=np.float64)
        inside = t2 < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - t2[inside]))
        return out

    def support_box(self, B: float) -> list[tuple[int, int]]:
        """Per-axis integer ranges of {x : ||x/B - center|| < rho}."""
        out = []
        for c in self.center:
            lo = math.ceil(B * (c - self.rho))
            hi = math.floor(B * (c + self.rho))
            out.append((lo, hi))
        return out


def weight_eval(w: WeightFunction, x: Sequence[float]) -> float:
    if len(x) != w.n:
        raise ValueError(f"point has length {len(x)}, expected {w.n}")
    t2 = sum((float(v) - c) ** 2 for v, c in zip(x, w.center)) / w.rho**2
    if t2 >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - t2))


# -- box utilities -------------------------------------------------------------


def _box_sizes(box: list[tuple[int, int]]) -> list[int]:
    return [hi - lo + 1 for lo, hi in box]


def _box_chunks(box: list[tuple[int, int]], target: int = _SOLVER_CHUNK) -> list[tuple[int, int]]:
    lo0, hi0 = box[0]
    inner = 1
    for lo, hi in box[1:]:
        inner *= hi - lo + 1
    step = max(1, target // max(1, inner))
    return [(a, min(a + step, hi0 + 1)) for a in range(lo0, hi0 + 1, step)]


def _box_coordinates(box: list[tuple[int, int]], lo0: int, hi0: int) -> list[np.ndarray]:
    """Flattened coordinate columns of [lo0,hi0) x rest-of-box."""
    shape = [hi0 - lo0] + [hi - lo + 1 for lo, hi in box[1:]]
    axes = [np.arange(lo0, hi0, dtype=np.int64)] + [
        np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in box[1:]
    ]
    cols = []
    for j, ax in enumerate(axes):
        ax_shape = [1] * len(shape)
        ax_shape[j] = -1
        cols.append(np.broadcast_to(ax.reshape(ax_shape), shape).reshape(-1))
    return cols


def _ordered_chunk_sums(work: Callable, chunks: list, workers: int) -> list:
    if workers <= 1 or len(chunks) <= 1:
        return [work(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, chunks))


# -- lattice sums --------------------------------------------------------------


def weighted_exponential_sum(
    f: Polynomial,
    B: float,
    w: WeightFunction,
    alpha: float,
    budget: int | None = None,
    workers: int | None = None,
) -> complex:
    """sum_{x in Z^n} omega(x/B) e^(2 pi i alpha f(x)), exact f values."""
    if w.n != f.n:
        raise ValueError("weight dimension does not match the polynomial")
    box = w.support_box(B)
    sizes = _box_sizes(box)
    if any(s <= 0 for s in sizes):
        return 0j
    total = math.prod(sizes)
    enumeration._charge(total, enumeration.enumeration_budget(budget), "lattice sum")
    workers = enumeration.default_workers(workers)

    def work(chunk):
        lo0, hi0 = chunk
        vals = enumeration.eval_box_exact(f, [b[0] for b in box], [b[1] for b in box], lo0, hi0)
        cols = _box_coordinates(box, lo0, hi0)
        pts = np.stack(cols, axis=-1).astype(np.float64)
        wv = w.values(pts, scale=B)
        phases = np.exp((2j * np.pi * alpha) * vals.astype(np.float64))
        return complex(np.sum(wv * phases))

    parts = _ordered_chunk_sums(work, _box_chunks(box), workers)
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def complete_sum_mod_q(
    f: Polynomial,
    q: int,
    a: int,
    budget: int | None = None,
    workers: int | None = None,
) -> complex:
    """The complete unnormalized sum over (Z/q)^n: q^n * E_f(q, a)."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    val = exp_sum_composite(f, q, a, budget=budget, workers=workers)
    return q**f.n * val.value


# -- singular series -----------------------------------------------------------


@dataclass
class SingularSeriesResult:
    S_of_R: float
    per_q: list[tuple[int, float, float]]  # (q, Re of the q-term, running sum)
    tail_exponent: Fraction | None
    max_imag: float


def singular_series(
    f: Polynomial,
    R: int,
    s_val: int | None = None,
    budget: int | None = None,
    workers: int | None = None,
) -> SingularSeriesResult:
    """Truncated series S(R) = sum_{q <= R} sum_{a in (Z/q)^x} E_f(q, a).

    The a and q-a terms are conjugate, so every partial sum is real up to
    rounding; the largest imaginary part seen is reported.  When s is
    known, tail_exponent = 2 - (n-s)/(2(d-1)) tells whether the q-term
    bound q^(1-(n-s)/(2(d-1))) makes the full series provably summable
    (negative exponent, equivalently n-s > 4(d-1)).
    """
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    running = 0.0
    max_imag = 0.0
    rows = []
    for q in range(1, R + 1):
        term = 0j
        for a in range(1, q + 1) if q == 1 else range(1, q):
            if q > 1 and math.gcd(a, q) != 1:
                continue
            term += exp_sum_composite(f, q, a, budget=budget, workers=workers).value
        if q == 1:
            term = 1 + 0j
        max_imag = max(max_imag, abs(term.imag))
        running += term.real
        rows.append((q, term.real, running))
    tail = None
    if s_val is not None:
        d = f.degree()
        if d is None or d < 2:
            raise ValueError("tail exponent needs degree >= 2")
        tail = Fraction(2, 1) - Fraction(f.n - s_val, 2 * (d - 1))
    return SingularSeriesResult(S_of_R=running, per_q=rows, tail_exponent=tail, max_imag=max_imag)


def singular_series_local(
    f: Polynomial,
    p: int,
    r_max: int,
    budget: int | None = None,
    workers: int | None = None,
) -> float:
    """Partial local density at p: the q = p^r terms for r = 0..r_max."""
    total = 1.0  # r = 0
    for r in range(1, r_max + 1):
        q = p**r
        term = 0j
        for a in range(1, q):
            if a % p == 0:
                continue
            term += exp_sum_composite(f, q, a, budget=budget, workers=workers).value
        total += term.real
    return total


# -- oscillatory integral ------------------------------------------------------


@dataclass
class QuadConfig:
    """Tensor Gauss-Legendre settings for I(gamma) and the 1-D integral.

    Convergence is judged on successive refinement levels, measured
    relative to max(current magnitude, the plain weight integral) so that
    tiny oscillatory values do not stall the ladder.  ``orders`` of None
    selects a ladder by dimension: the bump weight is smooth but not
    analytic, so low dimensions climb to high orders cheaply while n = 5
    stops where the tensor grid is still affordable.
    """

    tol: float = 1e-6
    orders: tuple[int, ...] | None = None
    panel_nodes: int = 16
    max_panel_doublings: int = 5
    max_dim: int = 5


_ORDER_LADDERS = {
    1: (16, 24, 32, 48, 64, 96, 128, 192, 256),
    2: (12, 16, 24, 32, 48, 64, 96, 128),
    3: (12, 16, 24, 32, 48, 64, 96),
    4: (8, 12, 16, 24, 32, 48, 64),
    5: (8, 12, 16, 24, 32, 40, 48),
}


class OscillatoryIntegrator:
    """Evaluates I(gamma) = int omega(x) e^(2 pi i gamma f(x)) dx.

    Node grids are cached per order as flattened (f values, omega times
    quadrature weight) pairs restricted to the ball, so refinement and
    repeated gamma evaluations reuse them.
    """

    def __init__(self, f: Polynomial, w: WeightFunction, quad: QuadConfig | None = None):
        if w.n != f.n:
            raise ValueError("weight dimension does not match the polynomial")
        self.f = f
        self.w = w
        self.quad = quad or QuadConfig()
        if f.n > self.quad.max_dim:
            raise ValueError(f"tensor quadrature supports n <= {self.quad.max_dim}")
        self.orders = self.quad.orders or _ORDER_LADDERS[f.n]
        self._grids: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._ladder_pos = 1
        self._weight_integral: float | None = None

    def _grid(self, order: int) -> tuple[np.ndarray, np.ndarray]:
        if order in self._grids:
            return self._grids[order]
        f, w = self.f, self.w
        n = f.n
        nodes, gl_w = np.polynomial.legendre.leggauss(order)
        axes = [w.center[j] + w.rho * nodes for j in range(n)]
        wts = [w.rho * gl_w for _ in range(n)]
        chunk_f: list[np.ndarray] = []
        chunk_wq: list[np.ndarray] = []
        shape_rest = (order,) * (n - 1)
        for i0 in range(order):
            t2 = np.zeros(shape_rest)
            t2 += (axes[0][i0] - w.center[0]) ** 2
            for j in range(1, n):
                ax_shape = [1] * (n - 1)
                ax_shape[j - 1] = -1
                t2 = t2 + ((axes[j] - w.center[j]) ** 2).reshape(ax_shape)
            t2 = t2 / w.rho**2
            inside = t2 < 1.0
            if not inside.any():
                continue
            bump = np.zeros(shape_rest)
            bump[inside] = np.exp(-1.0 / (1.0 - t2[inside]))
            wq = np.full(shape_rest, wts[0][i0])
            for j in range(1, n):
                ax_shape = [1] * (n - 1)
                ax_shape[j - 1] = -1
                wq = wq * wts[j].reshape(ax_shape)
            fv = np.zeros(shape_rest)
            for e, c in f.terms.items():
                t: np.ndarray | float = float(c)
                if e[0]:
                    t = t * axes[0][i0] ** e[0]
                for j in range(1, n):
                    if e[j]:
                        ax_shape = [1] * (n - 1)
                        ax_shape[j - 1] = -1
                        t = t * (axes[j] ** e[j]).reshape(ax_shape)
                fv = fv + t
            sel = inside.reshape(-1)
            chunk_f.append(fv.reshape(-1)[sel])
            chunk_wq.append((wq * bump).reshape(-1)[sel])
        fs = np.concatenate(chunk_f) if chunk_f else np.empty(0)
        wqs = np.concatenate(chunk_wq) if chunk_wq else np.empty(0)
        self._grids[order] = (fs, wqs)
        return fs, wqs

    def weight_integral(self) -> float:
        """int omega(x) dx at the mid-ladder order (scale for tolerances)."""
        if self._weight_integral is None:
            order = self.orders[min(2, len(self.orders) - 1)]
            _, wq = self._grid(order)
            self._weight_integral = float(np.sum(wq))
        return self._weight_integral

    def _eval(self, order: int, gamma: float) -> complex:
        fs, wqs = self._grid(order)
        if fs.size == 0:
            return 0j
        return complex(np.sum(wqs * np.exp((2j * np.pi * gamma) * fs)))

    def value(self, gamma: float) -> complex:
        """I(gamma), refined along the order ladder until stable."""
        ladder = self.orders
        scale = self.weight_integral()
        start = max(0, self._ladder_pos - 1)
        prev: complex | None = None
        for idx in range(start, len(ladder)):
            cur = self._eval(ladder[idx], gamma)
            if prev is not None and abs(cur - prev) <= self.quad.tol * max(abs(cur), scale):
                self._ladder_pos = idx
                return cur
            prev = cur
        raise QuadratureConvergenceError(
            f"I(gamma) did not stabilize at gamma={gamma} within orders {ladder}"
        )


def oscillatory_integral(
    f: Polynomial,
    w: WeightFunction,
    gamma: float,
    quad: QuadConfig | None = None,
) -> complex:
    """One-off I(gamma); build an OscillatoryIntegrator for repeated use."""
    return OscillatoryIntegrator(f, w, quad).value(gamma)


@dataclass
class SingularIntegralResult:
    J_of_R: float
    samples: list[tuple[float, complex]]
    panels: int


def _gauss_panels(fn: Callable[[float], float], a: float, b: float, panels: int, nodes: int) -> float:
    base, gl_w = np.polynomial.legendre.leggauss(nodes)
    total = []
    width = (b - a) / panels
    for k in range(panels):
        lo = a + k * width
        mid = lo + width / 2
        half = width / 2
        total.extend(gl_w[i] * half * fn(mid + half * base[i]) for i in range(nodes))
    return math.fsum(total)


def singular_integral(
    f: Polynomial,
    w: WeightFunction,
    R: float,
    quad: QuadConfig | None = None,
) -> SingularIntegralResult:
    """J(R) = int_{-R}^{R} I(gamma) dgamma = 2 int_0^R Re I(gamma) dgamma.

    The reduction to [0, R] uses I(-gamma) = conj(I(gamma)).  The 1-D
    integral refines by doubling Gauss-Legendre panels until stable.
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    integrator = OscillatoryIntegrator(f, w, quad)
    cfg = integrator.quad
    scale = integrator.weight_integral()

    def g(gamma: float) -> float:
        return integrator.value(gamma).real

    prev: float | None = None
    panels = 1
    for _ in range(cfg.max_panel_doublings + 1):
        cur = 2.0 * _gauss_panels(g, 0.0, R, panels, cfg.panel_nodes)
        if prev is not None and abs(cur - prev) <= cfg.tol * max(abs(cur), scale):
            samples = [(gam, integrator.value(gam)) for gam in np.linspace(0.0, R, 9)]
            return SingularIntegralResult(J_of_R=cur, samples=samples, panels=panels)
        prev = cur
        panels *= 2
    raise QuadratureConvergenceError(
        f"J(R) did not stabilize after {cfg.max_panel_doublings} doublings"
    )


# -- weighted solution count ---------------------------------------------------


def _last_var_split(f: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial] | None:
    """(A, B, C) with f = A z^2 + B z + C in the last variable, else None."""
    n = f.n
    if n < 2:
        return None
    if any(e[-1] > 2 for e in f.terms):
        return None
    parts: list[dict[tuple[int, ...], int]] = [{}, {}, {}]
    for e, c in f.terms.items():
        parts[e[-1]][e[:-1]] = c
    C, B, A = (Polynomial(n - 1, d) for d in parts)
    return A, B, C


def weighted_solution_count(
    f: Polynomial,
    B: float,
    w: WeightFunction,
    budget: int | None = None,
    workers: int | None = None,
) -> float:
    """N_omega(f, B) = sum over integer solutions f(x) = 0 of omega(x/B).

    Solution testing is exact integer arithmetic.  Polynomials of degree
    <= 2 in the last variable take the accelerated path: enumerate the
    first n-1 coordinates and solve the (at most quadratic) fiber
    equation, checking discriminants for perfect squares.
    """
    if w.n != f.n:
        raise ValueError("weight dimension does not match the polynomial")
    box = w.support_box(B)
    sizes = _box_sizes(box)
    if any(s <= 0 for s in sizes):
        return 0.0
    budget_val = enumeration.enumeration_budget(budget)
    workers = enumeration.default_workers(workers)
    split = _last_var_split(f)
    if split is not None:
        outer = math.prod(sizes[:-1])
        enumeration._charge(outer, budget_val, "fiber-solver enumeration")
        return _count_quadratic_fiber(f, split, B, w, box, workers)
    total = math.prod(sizes)
    enumeration._charge(total, budget_val, "solution enumeration")

    def work(chunk):
        lo0, hi0 = chunk
        vals = enumeration.eval_box_exact(f, [b[0] for b in box], [b[1] for b in box], lo0, hi0)
        hit = vals == 0
        if not hit.any():
            return 0.0
        cols = _box_coordinates(box, lo0, hi0)
        pts = np.stack([c[hit] for c in cols], axis=-1).astype(np.float64)
        return float(np.sum(w.values(pts, scale=B)))

    parts = _ordered_chunk_sums(work, _box_chunks(box), workers)
    return math.fsum(parts)


def _count_quadratic_fiber(f, split, B, w, box, workers) -> float:
    A, Bc, C = split
    outer_box = box[:-1]
    zlo, zhi = box[-1]
    z_axis = np.arange(zlo, zhi + 1, dtype=np.int64)

    def weight_of(points_int: np.ndarray) -> np.ndarray:
        return w.values(points_int.astype(np.float64), scale=B)

    def work(chunk):
        lo0, hi0 = chunk
        lows = [b[0] for b in outer_box]
        highs = [b[1] for b in outer_box]
        a = enumeration.eval_box_exact(A, lows, highs, lo0, hi0)
        b = enumeration.eval_box_exact(Bc, lows, highs, lo0, hi0)
        c = enumeration.eval_box_exact(C, lows, highs, lo0, hi0)
        cols = _box_coordinates(outer_box, lo0, hi0)
        acc = 0.0

        def add_points(sel: np.ndarray, z: np.ndarray) -> float:
            ok = (z >= zlo) & (z <= zhi)
            if not ok.any():
                return 0.0
            idx = np.flatnonzero(sel)[ok]
            pts = np.stack([col[idx] for col in cols] + [z[ok]], axis=-1)
            return float(np.sum(weight_of(pts)))

        quad = a != 0
        if quad.any():
            aq, bq, cq = a[quad], b[quad], c[quad]
            disc = bq * bq - 4 * aq * cq
            if disc.max(initial=0) >= 2**52:
                raise ValueError("discriminants too large for the float-sqrt root check")
            nonneg = disc >= 0
            if nonneg.any():
                root = np.zeros_like(disc)
                r = np.rint(np.sqrt(disc[nonneg].astype(np.float64))).astype(np.int64)
                # rounding can be off by one near perfect squares
                r = np.where(r * r > disc[nonneg], r - 1, r)
                r = np.where((r + 1) * (r + 1) <= disc[nonneg], r + 1, r)
                root[nonneg] = r
                square = np.zeros_like(nonneg)
                square[nonneg] = root[nonneg] ** 2 == disc[nonneg]
                for sign in (1, -1):
                    branch = square.copy()
                    if sign == -1:
                        branch &= root > 0  # double root counted once
                    num = -bq + sign * root
                    den = 2 * aq
                    divisible = branch & (num % den == 0)
                    if divisible.any():
                        sel = np.zeros_like(quad)
                        sel[np.flatnonzero(quad)[divisible]] = True
                        z = (num[divisible] // den[divisible]).astype(np.int64)
                        acc += add_points(sel, z)
        lin = (a == 0) & (b != 0)
        if lin.any():
            bl, cl = b[lin], c[lin]
            divisible = (-cl) % bl == 0
            if divisible.any():
                sel = np.zeros_like(lin)
                sel[np.flatnonzero(lin)[divisible]] = True
                z = ((-cl[divisible]) // bl[divisible]).astype(np.int64)
                acc += add_points(sel, z)
        flat = (a == 0) & (b == 0) & (c == 0)
        if flat.any():
            for i in np.flatnonzero(flat):
                base = np.array([col[i] for col in cols], dtype=np.int64)
                pts = np.concatenate(
                    [np.broadcast_to(base, (z_axis.size, base.size)), z_axis[:, None]], axis=1
                )
                acc += float(np.sum(weight_of(pts)))
        return acc

    parts = _ordered_chunk_sums(work, _box_chunks(outer_box), workers)
    return math.fsum(parts)


# -- the report ----------------------------------------------------------------


@dataclass
class CircleMethodReport:
    B: float
    delta: float
    R: float                 # B^delta; the series truncates at ceil(R)
    R_series: int
    S_truncated: float
    J_truncated: float
    direct_count: float
    prediction: float
    ratio: float | None
    trusted: bool
    warnings: list[str] = field(default_factory=list)


def major_arc_report(
    f: Polynomial,
    B: float,
    delta: float,
    w: WeightFunction,
    s_val: int,
    R_series: int | None = None,
    R_integral: float | None = None,
    quad: QuadConfig | None = None,
    budget: int | None = None,
    workers: int | None = None,
) -> CircleMethodReport:
    """Assemble S(B^delta), J(B^delta), the direct count, and their ratio.

    The prediction is trusted when n - s > 4(d-1); outside that range it
    is still computed, with a warning flag.  Explicit R overrides support
    convergence studies (holding R fixed makes the prediction scale
    exactly like B^(n-d))."""
    if B <= 0 or delta <= 0:
        raise ValueError("B and delta must be positive")
    d = f.degree()
    if d is None or d < 1:
        raise ValueError("polynomial must be non-constant")
    R = B**delta
    r_series = R_series if R_series is not None else math.ceil(R)
    r_int = R_integral if R_integral is not None else R
    warnings: list[str] = []
    trusted = d >= 2 and (f.n - s_val) > 4 * (d - 1)
    if not trusted:
        warnings.append("decay hypothesis n - s > 4(d-1) not met; prediction untrusted")

    series = singular_series(f, r_series, s_val=s_val if d >= 2 else None, budget=budget, workers=workers)
    integral = singular_integral(f, w, r_int, quad=quad)
    direct = weighted_solution_count(f, B, w, budget=budget, workers=workers)
    prediction = series.S_of_R * integral.J_of_R * B ** (f.n - d)
    if series.S_of_R <= 0:
        warnings.append("truncated singular series is not positive")
    if integral.J_of_R <= 0:
        warnings.append("truncated singular integral is not positive")
    ratio = direct / prediction if prediction != 0 else None
    return CircleMethodReport(
        B=B,
        delta=delta,
        R=R,
        R_series=r_series,
        S_truncated=series.S_of_R,
        J_truncated=integral.J_of_R,
        direct_count=direct,
        prediction=prediction,
        ratio=ratio,
        trusted=trusted,
        warnings=warnings,
    )
