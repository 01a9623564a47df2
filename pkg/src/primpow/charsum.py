"""Multiplicative characters and the analytic counting route.

A character is stored as an exponent e relative to the canonical generator
g0: chi(g0^j) = zeta^(j*e) with zeta = exp(2*pi*i/(q-1)), and chi(0) = 0 for
every character including the trivial one. Sums over the field are evaluated
with numpy in binary64 complex arithmetic from precomputed root-of-unity
tables (exact angles per entry, no drift), and integer results are rounded
with a consistency guard that turns table bugs into hard errors instead of
silently wrong counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import arith
from .counting import CountQuery
from .errors import DomainError, NumericConsistencyError, ResourceError, UsageError
from .ffield import FieldElement, FieldSpec, QuadraticPoly

COUNT_VIA_CHARACTERS_MAX_Q = 2**16

# Debug hook for fault injection: when set, characters_of_order silently
# zeroes one exponent, which must be caught by the orthogonality self-test.
DEBUG_FLIP_EXPONENT = False


@dataclass(frozen=True)
class Character:
    """A multiplicative character, encoded by its exponent on the canonical generator."""

    field: FieldSpec
    exponent: int

    def __post_init__(self):
        m = self.field.q - 1
        if not 0 <= self.exponent <= max(m - 1, 0):
            raise DomainError(f"exponent must lie in [0, {m - 1}], got {self.exponent}")

    @property
    def order(self) -> int:
        m = self.field.q - 1
        if m == 0:
            return 1
        return m // math.gcd(m, self.exponent)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    def __pow__(self, i: int) -> "Character":
        m = self.field.q - 1
        return Character(self.field, (self.exponent * i) % m if m else 0)


class _CharContext:
    """Per-field numpy tables shared by every sum in this module."""

    _cache: dict[FieldSpec, "_CharContext"] = {}

    def __init__(self, field: FieldSpec):
        exp, log, gen_idx = field.tables()
        self.field = field
        self.q = field.q
        self.m = field.q - 1
        self.log = np.array(log, dtype=np.int64)
        self.exp = np.array(exp, dtype=np.int64)
        angles = 2.0 * np.pi * np.arange(max(self.m, 1), dtype=np.float64) / max(self.m, 1)
        self.zeta = np.cos(angles) + 1j * np.sin(angles)
        if field.n > 1:
            xs = np.arange(self.q, dtype=np.int64)
            digits = np.empty((self.q, field.n), dtype=np.int64)
            rest = xs.copy()
            for i in range(field.n):
                digits[:, i] = rest % field.p
                rest //= field.p
            self.digits = digits
            self.weights = np.array(field._pow_p, dtype=np.int64)
        else:
            self.digits = None
            self.weights = None

    @classmethod
    def of(cls, field: FieldSpec) -> "_CharContext":
        ctx = cls._cache.get(field)
        if ctx is None:
            ctx = cls(field)
            cls._cache[field] = ctx
        return ctx

    # vector ops on arrays of element indices

    def vec_add(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.field.n == 1:
            return (u + v) % self.field.p
        summed = (self.digits[u] + self.digits[v]) % self.field.p
        return summed @ self.weights

    def vec_mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        lu, lv = self.log[u], self.log[v]
        out = self.exp[(lu + lv) % max(self.m, 1)]
        return np.where((lu < 0) | (lv < 0), 0, out)

    def eval_poly(self, coeff_indices: list[int]) -> np.ndarray:
        """Values of a polynomial (coefficient indices, low degree first) at every x."""
        xs = np.arange(self.q, dtype=np.int64)
        if self.field.n == 1:
            p = self.field.p
            val = np.full(self.q, coeff_indices[-1], dtype=np.int64)
            for c in reversed(coeff_indices[:-1]):
                val = (val * xs + c) % p
            return val
        val = np.full(self.q, coeff_indices[-1], dtype=np.int64)
        for c in reversed(coeff_indices[:-1]):
            val = self.vec_add(self.vec_mul(val, xs), np.full(self.q, c, dtype=np.int64))
        return val

    def char_sum(self, exponent: int, value_logs: np.ndarray) -> complex:
        """Sum of zeta^(exponent * log v) over the valid (log >= 0) entries."""
        valid = value_logs[value_logs >= 0]
        if valid.size == 0:
            return 0j
        return complex(self.zeta[(exponent * valid) % max(self.m, 1)].sum())


def dlog_table(field: FieldSpec) -> list[int]:
    """Discrete logs to the canonical generator, indexed by element index; -1 at 0."""
    exp, log, _ = field.tables()
    return list(log)


def characters_of_order(field: FieldSpec, d: int) -> list[Character]:
    """The phi(d) characters of exact order d, ascending cofactor multiplier."""
    m = field.q - 1
    if d < 1 or m % d != 0:
        raise DomainError(f"order must divide q-1={m}, got {d}")
    step = m // d
    exponents = [step * r for r in range(1, d + 1) if math.gcd(r, d) == 1]
    if d == 1:
        exponents = [0]
    if DEBUG_FLIP_EXPONENT and d > 1:
        exponents[0] = 0
    return [Character(field, e) for e in exponents]


def trivial_character(field: FieldSpec) -> Character:
    return Character(field, 0)


def canonical_character(field: FieldSpec, k: int) -> Character:
    """The fixed order-k character used in the power-residue indicator."""
    m = field.q - 1
    if k < 1 or m % k != 0:
        raise DomainError(f"k must divide q-1={m}, got {k}")
    return Character(field, m // k if k > 1 else 0)


def char_eval(chi: Character, x: FieldElement) -> complex:
    """chi(x), with chi(0) = 0 for every character."""
    if x.field != chi.field:
        raise UsageError("element belongs to a different field")
    if x.is_zero:
        return 0j
    ctx = _CharContext.of(chi.field)
    j = int(ctx.log[x.index])
    return complex(ctx.zeta[(chi.exponent * j) % max(ctx.m, 1)])


def s_sum(chi: Character, i: int, k: int, f: QuadraticPoly) -> complex:
    """Sum over x of chi(x) * psi(f(x)), psi the i-th power of the canonical order-k character.

    Terms with x = 0 or f(x) = 0 vanish because every character is 0 at 0.
    """
    field = chi.field
    m = field.q - 1
    if k < 1 or m % k != 0:
        raise DomainError(f"k must divide q-1={m}, got {k}")
    if not 0 <= i <= k - 1:
        raise DomainError(f"need 0 <= i <= k-1, got i={i}")
    if f.field != field:
        raise UsageError("polynomial belongs to a different field")
    ctx = _CharContext.of(field)
    fvals = ctx.eval_poly([f.c.index, f.b.index, f.a.index])
    return _s_sum_from_logs(ctx, chi.exponent, i, m // k, ctx.log[fvals])


def _s_sum_from_logs(ctx: _CharContext, chi_exponent: int, i: int, ek: int,
                     f_logs: np.ndarray) -> complex:
    m = max(ctx.m, 1)
    x_logs = ctx.log
    mask = (x_logs >= 0) & (f_logs >= 0)
    exponents = (chi_exponent * x_logs[mask] + (i * ek % m) * f_logs[mask]) % m
    if exponents.size == 0:
        return 0j
    return complex(ctx.zeta[exponents].sum())


def count_via_characters(query: CountQuery) -> int:
    """The analytic evaluation of the exact count: a mu-weighted double character sum.

    Computes (phi(t)/(k t)) * sum over i in [0, k) and squarefree d | t of
    (mu(d)/phi(d)) * sum over order-d characters chi of s_sum(chi, i, k, f),
    then rounds the real part. The imaginary part and the rounding defect are
    guarded; exceeding the tolerance raises NumericConsistencyError, since
    this count is an integer whenever the tables are right.
    """
    field = query.field
    q, m = field.q, field.q - 1
    if q > COUNT_VIA_CHARACTERS_MAX_Q:
        raise ResourceError(
            f"q={q} exceeds the character-count cap {COUNT_VIA_CHARACTERS_MAX_Q}")
    t, k, f = query.t, query.k, query.f
    ctx = _CharContext.of(field)
    fvals = ctx.eval_poly([f.c.index, f.b.index, f.a.index])
    f_logs = ctx.log[fvals]
    ek = m // k
    total = 0j
    for i in range(k):
        for d in arith.squarefree_divisors(t):
            weight = arith.mobius(d) / arith.euler_phi(d)
            for chi in characters_of_order(field, d):
                total += weight * _s_sum_from_logs(ctx, chi.exponent, i, ek, f_logs)
    total *= arith.euler_phi(t) / (k * t)
    guard = 1e-6 * q
    rounded = round(total.real)
    if abs(total.imag) > guard or abs(total.real - rounded) > guard:
        raise NumericConsistencyError(
            f"character count failed the exactness guard: {total!r} (q={q}, t={t}, k={k})")
    return int(rounded)


class WeilCheck(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def _poly_derivative(coeffs: list[FieldElement], field: FieldSpec) -> list[FieldElement]:
    return [field.scalar(j) * coeffs[j] for j in range(1, len(coeffs))]


def _field_poly_gcd(a: list[FieldElement], b: list[FieldElement],
                    field: FieldSpec) -> list[FieldElement]:
    def trim(u):
        while u and u[-1].is_zero:
            u.pop()
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = b[-1].inverse()
        b = [ci * inv for ci in b]
        while len(a) >= len(b):
            coef = a[-1]
            shift = len(a) - len(b)
            if not coef.is_zero:
                for j, bj in enumerate(b):
                    a[shift + j] = a[shift + j] - coef * bj
            a.pop()
            trim(a)
        a, b = b, a
    return a


def distinct_root_count(coeffs: list[FieldElement], field: FieldSpec) -> int:
    """Number of distinct roots in the algebraic closure: deg f - deg gcd(f, f').

    For quadratics this is 2 when the discriminant is nonzero, else 1.
    """
    deriv = _poly_derivative(coeffs, field)
    g = _field_poly_gcd(coeffs, deriv, field)
    return (len(coeffs) - 1) - (len(g) - 1 if g else 0)


def weil_check(chi: Character, f_coeffs: list[FieldElement], a: FieldElement) -> WeilCheck:
    """Empirical check of the Weil bound |sum chi(a f(x))| <= (r-1) sqrt(q).

    chi must be nontrivial (order m > 1) and f monic. The "f is not an m-th
    power" hypothesis is only decided here for deg f <= 2 (reject perfect
    squares when m is even); higher-degree callers must guarantee it.
    """
    field = chi.field
    if chi.is_trivial:
        raise DomainError("the Weil bound needs a nontrivial character")
    if a.field != field or any(c.field != field for c in f_coeffs):
        raise UsageError("mixed fields in weil_check")
    coeffs = list(f_coeffs)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        raise DomainError("f must have degree >= 1")
    if coeffs[-1] != field.one():
        raise DomainError("f must be monic")
    r = distinct_root_count(coeffs, field)
    if deg <= 2 and chi.order % 2 == 0 and r < deg:
        raise DomainError("f is a perfect square and the character order is even")
    ctx = _CharContext.of(field)
    fvals = ctx.eval_poly([c.index for c in coeffs])
    avals = ctx.vec_mul(np.full(field.q, a.index, dtype=np.int64), fvals)
    lhs = abs(complex(ctx.char_sum(chi.exponent, ctx.log[avals])))
    rhs = (r - 1) * math.sqrt(field.q)
    return WeilCheck(lhs=lhs, rhs=rhs, ok=lhs <= rhs + 1e-9)
