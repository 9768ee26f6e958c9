"""Sparse multivariate polynomials over the integers, with a text DSL.

A polynomial in n variables is a dict from exponent tuples (length n, one
non-negative int per variable) to nonzero arbitrary-precision integer
coefficients.  The zero polynomial has an empty term dict and degree None
(a sentinel; callers must branch rather than compare).

Text syntax (whitespace insignificant)::

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*"? factor)*
    factor := base ("^" uint)?
    base   := int | var | "(" expr ")"
    var    := "x" uint          (1-based: x1, x2, ...)

The "*" between juxtaposed factors may be omitted ("3x1" == "3*x1").
Unicode identifiers and floating-point coefficients are rejected.
Canonical rendering writes terms in descending graded-lexicographic order
with explicit "*" and "^" throughout, e.g. "1*x1^2 + 3*x2^1"; rendering
then parsing is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import PolyParseError

MAX_EXPONENT = 2**31

Exponent = tuple[int, ...]


def _grlex_key(e: Exponent) -> tuple[int, Exponent]:
    return (sum(e), e)


class Polynomial:
    """Immutable sparse polynomial in ``n`` named variables x1..xn.

    Term dicts are canonical: no zero coefficients, keys iterated in
    descending graded-lex order.  Do not mutate ``terms``.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exponent, int] | None = None):
        if n < 1:
            raise ValueError(f"variable count must be positive, got {n}")
        clean: dict[Exponent, int] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n:
                    raise ValueError(f"exponent tuple {exps} has length {len(exps)}, expected {n}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                coeff = int(coeff)
                if coeff:
                    clean[exps] = coeff
        ordered = dict(sorted(clean.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", ordered)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c: int) -> "Polynomial":
        return cls(n, {(0,) * n: int(c)})

    @classmethod
    def variable(cls, n: int, index: int) -> "Polynomial":
        """The polynomial x_{index+1} (``index`` is 0-based)."""
        if not 0 <= index < n:
            raise ValueError(f"variable index {index} out of range for n={n}")
        e = [0] * n
        e[index] = 1
        return cls(n, {tuple(e): 1})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Total degree; None for the zero polynomial (callers must branch)."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.n, 0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.n, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponent, int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def partial(self, j: int) -> "Polynomial":
        """Partial derivative with respect to variable j (0-based)."""
        if not 0 <= j < self.n:
            raise ValueError(f"variable index {j} out of range")
        out: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            if e[j] == 0:
                continue
            ne = list(e)
            ne[j] -= 1
            out[tuple(ne)] = out.get(tuple(ne), 0) + c * e[j]
        return Polynomial(self.n, out)

    def gradient(self) -> tuple["Polynomial", ...]:
        return tuple(self.partial(j) for j in range(self.n))

    def homogeneous_part(self, k: int) -> "Polynomial":
        """Sum of the terms of total degree exactly k."""
        if k < 0:
            raise ValueError("degree must be non-negative")
        return Polynomial(self.n, {e: c for e, c in self.terms.items() if sum(e) == k})

    def scale_coefficients(self, c: int) -> "Polynomial":
        return Polynomial(self.n, {e: c * v for e, v in self.terms.items()})

    def divide_coefficients(self, d: int) -> "Polynomial":
        """Exact coefficient division; raises when d does not divide a term."""
        out = {}
        for e, c in self.terms.items():
            q, r = divmod(c, d)
            if r:
                raise ValueError(f"coefficient {c} not divisible by {d}")
            out[e] = q
        return Polynomial(self.n, out)

    # -- evaluation and substitution ----------------------------------------

    def eval_int(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t *= v**k
            total += t
        return total

    def eval_mod(self, point: Sequence[int], modulus: int) -> int:
        """f(point) mod modulus, exact (arbitrary-precision intermediates)."""
        if modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {modulus}")
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        total = 0
        for e, c in self.terms.items():
            t = c % modulus
            for v, k in zip(point, e):
                if k:
                    t = t * pow(v % modulus, k, modulus) % modulus
            total += t
        return total % modulus

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute subs[j] for variable j; all subs share one ambient n."""
        if len(subs) != self.n:
            raise ValueError(f"need {self.n} substitutions, got {len(subs)}")
        if not subs:
            raise ValueError("empty substitution")
        m = subs[0].n
        if any(s.n != m for s in subs):
            raise ValueError("substitutions have mixed variable counts")
        acc = Polynomial.zero(m)
        pow_cache: dict[tuple[int, int], Polynomial] = {}

        def spow(j: int, k: int) -> Polynomial:
            key = (j, k)
            if key not in pow_cache:
                pow_cache[key] = subs[j] ** k
            return pow_cache[key]

        for e, c in self.terms.items():
            t = Polynomial.constant(m, c)
            for j, k in enumerate(e):
                if k:
                    t = t * spow(j, k)
            acc = acc + t
        return acc

    def shift_scale(self, base: Sequence[int], scale: int) -> "Polynomial":
        """f(base + scale * y) as a polynomial in y (same variable count)."""
        if len(base) != self.n:
            raise ValueError(f"base point has length {len(base)}, expected {self.n}")
        subs = [
            Polynomial.constant(self.n, b) + Polynomial.variable(self.n, j).scale_coefficients(scale)
            for j, b in enumerate(base)
        ]
        return self.compose(subs)

    def embed(self, new_n: int) -> "Polynomial":
        """Pad exponent tuples with zeros up to new_n variables."""
        if new_n < self.n:
            raise ValueError("cannot shrink variable count")
        pad = (0,) * (new_n - self.n)
        return Polynomial(new_n, {e + pad: c for e, c in self.terms.items()})

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Canonical text form (descending graded-lex, explicit * and ^)."""
        if not self.terms:
            return "0"
        parts: list[str] = []
        for i, (e, c) in enumerate(self.terms.items()):
            mono = "*".join(f"x{j + 1}^{k}" for j, k in enumerate(e) if k)
            body = f"{abs(c)}*{mono}" if mono else str(abs(c))
            if i == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {self.render()!r})"


# -- parser -----------------------------------------------------------------

_TOK_INT = "int"
_TOK_VAR = "var"
_TOK_OP = "op"
_TOK_END = "end"


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    """Tokens as (kind, value, 1-based offset)."""
    toks: list[tuple[str, object, int]] = []
    i = 0
    size = len(text)
    while i < size:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pos = i + 1
        if ch in "+-*^()":
            toks.append((_TOK_OP, ch, pos))
            i += 1
        elif ch.isdigit():
            j = i
            while j < size and text[j].isdigit():
                j += 1
            toks.append((_TOK_INT, int(text[i:j]), pos))
            i = j
        elif ch == "x":
            j = i + 1
            while j < size and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise PolyParseError("expected digits after 'x'", pos)
            idx = int(text[i + 1 : j])
            if idx == 0:
                raise PolyParseError("variable index 0 is not allowed (variables start at x1)", pos)
            toks.append((_TOK_VAR, idx, pos))
            i = j
        else:
            raise PolyParseError(f"unexpected character {ch!r}", pos)
    toks.append((_TOK_END, None, size + 1))
    return toks


class _Parser:
    def __init__(self, toks: list[tuple[str, object, int]], n: int):
        self.toks = toks
        self.i = 0
        self.n = n

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self.peek()
        if kind == _TOK_OP and val in "+-":
            self.advance()
            sign = -1 if val == "-" else 1
        acc = self.term().scale_coefficients(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == _TOK_OP and val in "+-":
                self.advance()
                nxt = self.term()
                acc = acc - nxt if val == "-" else acc + nxt
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == _TOK_OP and val == "*":
                self.advance()
                acc = acc * self.factor()
            elif kind in (_TOK_INT, _TOK_VAR) or (kind == _TOK_OP and val == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.base()
        kind, val, _ = self.peek()
        if kind == _TOK_OP and val == "^":
            self.advance()
            kind, val, pos = self.advance()
            if kind != _TOK_INT:
                raise PolyParseError("expected integer exponent after '^'", pos)
            if val > MAX_EXPONENT:
                raise PolyParseError(f"exponent {val} exceeds 2^31", pos)
            return base**val
        return base

    def base(self) -> Polynomial:
        kind, val, pos = self.advance()
        if kind == _TOK_INT:
            return Polynomial.constant(self.n, val)
        if kind == _TOK_VAR:
            return Polynomial.variable(self.n, val - 1)
        if kind == _TOK_OP and val == "(":
            inner = self.expr()
            kind, val, pos = self.advance()
            if not (kind == _TOK_OP and val == ")"):
                raise PolyParseError("expected ')'", pos)
            return inner
        raise PolyParseError("expected a number, variable, or '('", pos)


def parse_polynomial(text: str, n_hint: int | None = None) -> Polynomial:
    """Parse the DSL into a canonical Polynomial.

    The ambient variable count is the largest variable index seen, or
    n_hint if that is larger.  Raises PolyParseError with a 1-based byte
    offset on malformed input.
    """
    if n_hint is not None and n_hint < 1:
        raise ValueError(f"n_hint must be positive, got {n_hint}")
    toks = _tokenize(text)
    max_idx = max((v for k, v, _ in toks if k == _TOK_VAR), default=0)  # type: ignore[type-var]
    n = max(int(max_idx), n_hint or 0, 1)
    parser = _Parser(toks, n)
    poly = parser.expr()
    kind, _, pos = parser.peek()
    if kind != _TOK_END:
        raise PolyParseError("unexpected trailing input", pos)
    return poly


def render_polynomial(f: Polynomial) -> str:
    return f.render()


# -- arc-coefficient expansion ------------------------------------------------

@dataclass(frozen=True)
class ArcExpansion:
    """Coefficients of f(P + sum_i x_i t^i) through order t^m.

    ``coefficients[i]`` is the coefficient of t^i, a polynomial in the m*n
    variables x_{ij} (1 <= i <= m arc level, 1 <= j <= n coordinate), with
    x_{ij} linearized as DSL variable x_{(i-1)*n + j}, i.e. 0-based position
    (i-1)*n + (j-1).  coefficients[0] is the constant f(P); coefficients[i]
    for i >= 1 is weighted homogeneous of degree i when x_{ij} carries
    weight i (or is zero).
    """

    base_point: tuple[int, ...]
    order: int
    coefficients: tuple[Polynomial, ...]
    n: int

    def variable_position(self, level: int, coord: int) -> int:
        """0-based ambient position of x_{level,coord} (both 1-based)."""
        if not (1 <= level <= self.order and 1 <= coord <= self.n):
            raise ValueError(f"no arc variable x_({level},{coord})")
        return (level - 1) * self.n + (coord - 1)


def _series_mul(a: list[Polynomial], b: list[Polynomial], order: int, ambient: int) -> list[Polynomial]:
    out = [Polynomial.zero(ambient) for _ in range(order + 1)]
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            if bj.is_zero:
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def arc_expansion(f: Polynomial, base_point: Sequence[int], order: int) -> ArcExpansion:
    """Expand f(P_j + sum_{i=1..m} x_{ij} t^i) and truncate at t^order.

    Computed by repeated truncated series multiplication, all exact.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if len(base_point) != f.n:
        raise ValueError(f"base point has length {len(base_point)}, expected {f.n}")
    n = f.n
    ambient = order * n
    # t-series for each substituted coordinate: P_j + x_{1j} t + ... + x_{mj} t^m
    subs_series: list[list[Polynomial]] = []
    for j in range(n):
        coeffs = [Polynomial.constant(ambient, int(base_point[j]))]
        coeffs += [Polynomial.variable(ambient, (i - 1) * n + j) for i in range(1, order + 1)]
        subs_series.append(coeffs)

    one = [Polynomial.constant(ambient, 1)] + [Polynomial.zero(ambient)] * order
    acc = [Polynomial.zero(ambient) for _ in range(order + 1)]
    pow_cache: dict[tuple[int, int], list[Polynomial]] = {}

    def series_pow(j: int, k: int) -> list[Polynomial]:
        key = (j, k)
        if key not in pow_cache:
            s = one
            for _ in range(k):
                s = _series_mul(s, subs_series[j], order, ambient)
            pow_cache[key] = s
        return pow_cache[key]

    for e, c in f.terms.items():
        t = [Polynomial.constant(ambient, c)] + [Polynomial.zero(ambient)] * order
        for j, k in enumerate(e):
            if k:
                t = _series_mul(t, series_pow(j, k), order, ambient)
        acc = [a + b for a, b in zip(acc, t)]

    return ArcExpansion(tuple(int(v) for v in base_point), order, tuple(acc), n)
