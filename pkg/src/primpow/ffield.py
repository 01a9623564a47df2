"""Finite fields F_{p^n}: deterministic construction, element arithmetic, order predicates.

Elements are stored in canonical reduced form (coefficient tuples of length n,
low degree first, each in [0, p-1]) and are also addressable by their integer
index: the coefficient tuple read as base-p digits. Index order is the
canonical enumeration order used for witnesses and generators.

Heavy loops elsewhere in the package work on indices through the ``idx_*``
kernel and the lazily built exp/log tables; the element-level predicates here
stay table-free (plain square-and-multiply) so the two routes can be checked
against each other.
"""
from __future__ import annotations

import math
import os
from array import array

from . import arith
from .errors import DomainError, ResourceError, UsageError

MAX_Q = 2**31

# Flat q*q addition tables are only worth it for small extension fields.
_ADD_TABLE_MAX_Q = 2048

_DEFAULT_TABLE_CAP = 2**20


def table_cap() -> int:
    """q cap for exp/log table construction; PRIMPOW_QCAP overrides."""
    return int(os.environ.get("PRIMPOW_QCAP", str(_DEFAULT_TABLE_CAP)))


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (coefficient lists, low degree first)

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim([v % p for v in out])


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    """a mod f for monic f."""
    a = _ptrim([v % p for v in a])
    deg_f = len(f) - 1
    while a and len(a) - 1 >= deg_f:
        coef = a[-1]
        if coef:
            shift = len(a) - 1 - deg_f
            for j, fj in enumerate(f):
                a[shift + j] = (a[shift + j] - coef * fj) % p
        a.pop()
        _ptrim(a)
    return a


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        lead_inv = pow(b[-1], p - 2, p)
        monic_b = [v * lead_inv % p for v in b]
        a, b = monic_b, _pmod(a, monic_b, p)
    return a


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    acc = _pmod(list(base), f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, acc, p), f, p)
        e >>= 1
        if e:
            acc = _pmod(_pmul(acc, acc, p), f, p)
    return result


def is_irreducible(modulus: list[int] | tuple[int, ...], p: int) -> bool:
    """Rabin irreducibility test for a monic polynomial of degree >= 1 over F_p."""
    f = list(modulus)
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        raise DomainError("modulus must be monic of degree >= 1")
    if n == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p**n, f, p) != x:
        return False
    for r in arith.factorize(n).primes:
        g = _ppowmod(x, p ** (n // r), f, p)
        g = g + [0] * (2 - len(g))
        diff = _ptrim([(g[0]) % p, (g[1] - 1) % p] + [v % p for v in g[2:]])
        if len(_pgcd(f, diff, p)) - 1 != 0:
            return False
    return True


# ---------------------------------------------------------------------------

class FieldSpec:
    """A concrete finite field F_{p^n} with a fixed monic irreducible modulus.

    Immutable after construction (the lazy internal tables are caches, not
    state); safe to share across workers.
    """

    def __init__(self, p: int, n: int, modulus: tuple[int, ...],
                 qm1_factors: arith.Factorization):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = modulus
        self.qm1_factors = qm1_factors
        if n > 1:
            # x^(n+i) mod modulus for i in [0, n-2], used in multiplication
            self._red: list[tuple[int, ...]] = []
            xpow = _pmod([0] * n + [1], list(modulus), p)
            for _ in range(n - 1):
                self._red.append(tuple(xpow) + (0,) * (n - len(xpow)))
                xpow = _pmod([0] + list(xpow), list(modulus), p)
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._gen_idx: int | None = None
        self._add_table: array | None = None
        self._pow_p = tuple(p**i for i in range(n))

    # -- construction -------------------------------------------------------

    @classmethod
    def with_modulus(cls, p: int, modulus: list[int] | tuple[int, ...]) -> "FieldSpec":
        """Build F_{p^n} with an explicit monic irreducible modulus."""
        if not arith.is_prime(p):
            raise DomainError(f"p must be prime, got {p}")
        modulus = tuple(v % p for v in modulus)
        if not modulus:
            n = 1
        else:
            n = len(modulus) - 1
            if n < 2:
                raise DomainError("explicit modulus only makes sense for degree >= 2")
            if modulus[-1] != 1:
                raise DomainError("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise DomainError(f"modulus {list(modulus)} is reducible over F_{p}")
        if p**n > MAX_Q:
            raise DomainError(f"q = {p}^{n} exceeds the 2^31 cap")
        return cls(p, n, modulus, arith.factorize(p**n - 1))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FieldSpec)
                and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus))

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec({self.description()})"

    def description(self) -> str:
        """Text form "p^n:modulus-coeffs-low-to-high", e.g. "3^2:1,0,1"."""
        return f"{self.p}^{self.n}:" + ",".join(str(c) for c in self.modulus)

    # -- elements ------------------------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        """Make an element from an int (n = 1) or a coefficient iterable."""
        if isinstance(coeffs, int):
            if self.n == 1:
                return FieldElement(self, (coeffs % self.p,))
            raise UsageError("extension-field elements need a coefficient list")
        vals = [int(v) % self.p for v in coeffs]
        if len(vals) > self.n:
            raise DomainError(f"coefficient list longer than degree {self.n}")
        vals += [0] * (self.n - len(vals))
        return FieldElement(self, tuple(vals))

    def from_index(self, idx: int) -> "FieldElement":
        if not 0 <= idx < self.q:
            raise DomainError(f"index {idx} out of range for q={self.q}")
        return FieldElement(self, self.coeffs_of(idx))

    def coeffs_of(self, idx: int) -> tuple[int, ...]:
        if self.n == 1:
            return (idx,)
        out = []
        for _ in range(self.n):
            idx, r = divmod(idx, self.p)
            out.append(r)
        return tuple(out)

    def index_of(self, coeffs) -> int:
        if self.n == 1:
            return coeffs[0]
        return sum(c * w for c, w in zip(coeffs, self._pow_p))

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.n)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.n - 1))

    def scalar(self, m: int) -> "FieldElement":
        """The image of the integer m in the field."""
        return FieldElement(self, (m % self.p,) + (0,) * (self.n - 1))

    def elements(self):
        """All elements in canonical index order."""
        for idx in range(self.q):
            yield self.from_index(idx)

    # -- index-domain kernel ---------------------------------------------

    def _mul_coeffs(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, n = self.p, self.n
        if n == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        res = prod[:n]
        for i in range(n - 1):
            hi = prod[n + i] % p
            if hi:
                red = self._red[i]
                for j in range(n):
                    res[j] += hi * red[j]
        return tuple(v % p for v in res)

    def idx_mul(self, x: int, y: int) -> int:
        if self.n == 1:
            return x * y % self.p
        return self.index_of(self._mul_coeffs(self.coeffs_of(x), self.coeffs_of(y)))

    def idx_add(self, x: int, y: int) -> int:
        if self.n == 1:
            return (x + y) % self.p
        table = self._add_table
        if table is not None:
            return table[x * self.q + y]
        # digit-wise addition, low digit first
        p = self.p
        out, w = 0, 1
        for _ in range(self.n):
            x, dx = divmod(x, p)
            y, dy = divmod(y, p)
            out += ((dx + dy) % p) * w
            w *= p
        return out

    def idx_neg(self, x: int) -> int:
        if self.n == 1:
            return (-x) % self.p
        p = self.p
        out, w = 0, 1
        for _ in range(self.n):
            x, d = divmod(x, p)
            out += ((-d) % p) * w
            w *= p
        return out

    def idx_sub(self, x: int, y: int) -> int:
        return self.idx_add(x, self.idx_neg(y))

    def idx_pow(self, x: int, e: int) -> int:
        if self.n == 1:
            return pow(x, e, self.p)
        result = 1
        acc = self.coeffs_of(x)
        res_c = self.coeffs_of(1)
        while e:
            if e & 1:
                res_c = self._mul_coeffs(res_c, acc)
            e >>= 1
            if e:
                acc = self._mul_coeffs(acc, acc)
        return self.index_of(res_c)

    def ensure_add_table(self) -> bool:
        """Build the flat q*q addition table if q is small enough."""
        if self.n == 1 or self._add_table is not None:
            return self.n > 1
        if self.q > _ADD_TABLE_MAX_Q:
            return False
        q, p = self.q, self.p
        digits = [self.coeffs_of(i) for i in range(q)]
        weights = self._pow_p
        flat = array("i", [0]) * (q * q)
        for x in range(q):
            dx = digits[x]
            base = x * q
            for y in range(q):
                acc = 0
                for d_x, d_y, w in zip(dx, digits[y], weights):
                    s = d_x + d_y
                    if s >= p:
                        s -= p
                    acc += s * w
                flat[base + y] = acc
        self._add_table = flat
        return True

    # -- exp/log tables ----------------------------------------------------

    def tables(self) -> tuple[list[int], list[int], int]:
        """(exp, log, generator_index); exp[j] is the index of g0^j.

        log is indexed by element index, with -1 at the zero element.
        Built once, capped at q <= table_cap().
        """
        if self._exp is None:
            if self.q > table_cap():
                raise ResourceError(
                    f"q={self.q} exceeds the table cap {table_cap()} "
                    "(set PRIMPOW_QCAP to raise it)")
            g = find_generator(self)
            g_idx = g.index
            m = self.q - 1
            exp = [0] * max(m, 1)
            log = [-1] * self.q
            cur = 1
            if self.n == 1:
                p = self.p
                for j in range(m):
                    exp[j] = cur
                    log[cur] = j
                    cur = cur * g_idx % p
            else:
                cur_c = self.coeffs_of(1)
                g_c = self.coeffs_of(g_idx)
                for j in range(m):
                    idx = self.index_of(cur_c)
                    exp[j] = idx
                    log[idx] = j
                    cur_c = self._mul_coeffs(cur_c, g_c)
            self._exp, self._log, self._gen_idx = exp, log, g_idx
        return self._exp, self._log, self._gen_idx


class FieldElement:
    """A canonical residue in a FieldSpec; arithmetic via operators."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- plumbing ---------------------------------------------------------

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise UsageError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field != self.field:
            raise UsageError("elements belong to different fields")

    @property
    def index(self) -> int:
        return self.field.index_of(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        if self.field.n == 1:
            return f"{self.coeffs[0]}(mod {self.field.p})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "T" if i == 1 else f"T^{i}"
                terms.append(t if c == 1 else f"{c}*{t}")
        return (" + ".join(terms) or "0") + f" in F_{self.field.q}"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field._mul_coeffs(self.coeffs, other.coeffs))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            raise DomainError("negative exponents: use inverse() explicitly")
        # pow(0, 0) is 1 by convention; the order/power predicates never see it
        return self.field.from_index(self.field.idx_pow(self.index, e))

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise DomainError("0 has no multiplicative inverse")
        if self.field.n == 1:
            return FieldElement(self.field, (pow(self.coeffs[0], -1, self.field.p),))
        return self ** (self.field.q - 2)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()


class QuadraticPoly:
    """f(x) = a*x^2 + b*x + c with a != 0 and nonzero discriminant.

    In characteristic 2 the discriminant b^2 - 4ac degenerates to b^2, so the
    requirement is b != 0 there.
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a: FieldElement, b: FieldElement, c: FieldElement):
        a._check(b)
        a._check(c)
        if a.is_zero:
            raise DomainError("leading coefficient must be nonzero")
        self.a, self.b, self.c = a, b, c
        if self.discriminant().is_zero:
            raise DomainError("discriminant b^2 - 4ac must be nonzero")

    @property
    def field(self) -> FieldSpec:
        return self.a.field

    def discriminant(self) -> FieldElement:
        four = self.field.scalar(4)
        return self.b * self.b - four * self.a * self.c

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, QuadraticPoly)
                and (self.a, self.b, self.c) == (other.a, other.b, other.c))

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c))

    def __repr__(self) -> str:
        return f"QuadraticPoly(a={self.a!r}, b={self.b!r}, c={self.c!r})"


# ---------------------------------------------------------------------------
# module-level operations

def build_field(p: int, n: int) -> FieldSpec:
    """F_{p^n} with the lexicographically smallest monic irreducible modulus.

    Modulus candidates are compared by their non-leading coefficients read as
    base-p digits (low degree first), so the construction is deterministic.
    """
    if not isinstance(p, int) or not arith.is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if n < 1:
        raise DomainError(f"extension degree must be >= 1, got {n}")
    try:
        q = p**n
    except OverflowError:  # pragma: no cover
        raise DomainError("q overflow") from None
    if q > MAX_Q:
        raise DomainError(f"q = {p}^{n} = {q} exceeds the 2^31 cap")
    if n == 1:
        return FieldSpec(p, 1, (), arith.factorize(q - 1))
    for tail in range(1, q):
        coeffs = []
        t = tail
        for _ in range(n):
            t, r = divmod(t, p)
            coeffs.append(r)
        modulus = tuple(coeffs) + (1,)
        if modulus[0] == 0:
            continue  # divisible by x
        if is_irreducible(modulus, p):
            return FieldSpec(p, n, modulus, arith.factorize(q - 1))
    raise ArithmeticError(f"no irreducible of degree {n} over F_{p}")  # unreachable


def find_generator(field: FieldSpec) -> FieldElement:
    """The canonical generator: the least primitive element in index order."""
    if field._gen_idx is not None:
        return field.from_index(field._gen_idx)
    qm1 = field.q - 1
    cofactors = [qm1 // r for r in field.qm1_factors.primes]
    for idx in range(1, field.q):
        if all(field.idx_pow(idx, cof) != 1 for cof in cofactors):
            field._gen_idx = idx
            return field.from_index(idx)
    raise ArithmeticError("no generator found")  # unreachable for valid fields


def element_order(x: FieldElement) -> int:
    """Exact multiplicative order of a nonzero element."""
    if x.is_zero:
        raise DomainError("0 has no multiplicative order")
    field = x.field
    d = field.q - 1
    idx = x.index
    for r, e in field.qm1_factors.factors:
        for _ in range(e):
            if field.idx_pow(idx, d // r) != 1:
                break
            d //= r
    return d


def is_primitive(x: FieldElement) -> bool:
    """True iff x generates the multiplicative group, i.e. has order q-1."""
    if x.is_zero:
        return False
    field = x.field
    qm1 = field.q - 1
    idx = x.index
    return all(field.idx_pow(idx, qm1 // r) != 1 for r in field.qm1_factors.primes)


def is_kth_power(x: FieldElement, k: int) -> bool:
    """True iff x is a nonzero k-th power; requires k | q-1.

    0 is excluded, matching the convention that characters vanish at 0.
    """
    field = x.field
    qm1 = field.q - 1
    if k < 1 or qm1 % k != 0:
        raise DomainError(f"k must divide q-1={qm1}, got {k}")
    if x.is_zero:
        return False
    return field.idx_pow(x.index, qm1 // k) == 1


def is_t_free(x: FieldElement, t: int) -> bool:
    """True iff x != 0 and x is not a p-th power for any prime p | t.

    Equivalent to: x = y^d with d | t forces d = 1. Requires t | q-1.
    """
    field = x.field
    qm1 = field.q - 1
    if t < 1 or qm1 % t != 0:
        raise DomainError(f"t must divide q-1={qm1}, got {t}")
    if x.is_zero:
        return False
    idx = x.index
    return all(field.idx_pow(idx, qm1 // r) != 1 for r in arith.factorize(t).primes)


def eval_quadratic(f: QuadraticPoly, x: FieldElement) -> FieldElement:
    """Evaluate a*x^2 + b*x + c in Horner form (a*x + b)*x + c."""
    if f.field != x.field:
        raise UsageError("polynomial and point belong to different fields")
    return (f.a * x + f.b) * x + f.c
