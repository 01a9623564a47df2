"""Explicit thresholds and sieve parameters, plus the published-vs-computed bound table.

All bound comparisons against an exact integer q use the conservative rule
"q > bound" == "q >= floor(bound) + 1" so float edges cannot flip a verdict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import arith
from .errors import DomainError
from .ffield import FieldSpec

#: Published reference values for the bound table (omega -> {s: value}).
#: Blank cells in the published table are absent here. These are reproduced
#: for side-by-side comparison only; mismatches with the formula are expected
#: and flagged, never corrected (the published convention is not stated).
PUBLISHED_TABLE = {
    1: {1: 32},
    2: {1: 128, 2: 128},
    3: {1: 512, 2: 265},
    4: {1: 2048, 2: 901, 3: 523},
    5: {2: 3384, 3: 498},
    6: {2: 13114},
    7: {2: 51725},
    8: {2: 204828},
    9: {2: 814305},
}


def exceeds_bound(q: int, bound: float) -> bool:
    """q > bound, evaluated conservatively as q >= floor(bound) + 1."""
    return q >= math.floor(bound) + 1


def direct_threshold(k: int) -> float:
    """The unconditional q threshold max(e^(e^3), (2k)^6) of the non-sieve route."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    return max(math.exp(math.exp(3.0)), float((2 * k) ** 6))


def direct_certificate(field: FieldSpec, k: int) -> bool:
    """True iff q - 2k W(q-1) sqrt(q) > 0, tested exactly as q > 4 k^2 W(q-1)^2.

    A true certificate guarantees at least one primitive g with f(g) a
    nonzero k-th power for every admissible quadratic f.
    """
    qm1 = field.q - 1
    if k < 2 or qm1 % k != 0:
        raise DomainError(f"k must divide q-1={qm1} and be >= 2, got {k}")
    if field.q < 5:
        raise DomainError(f"certificate needs q >= 5, got {field.q}")
    w = arith.big_w(qm1)
    return field.q > 4 * k * k * w * w


def direct_lower_bound(field: FieldSpec, k: int) -> float:
    """(phi(q-1) / (k (q-1))) * (q - 2k W(q-1) sqrt(q)): the certified count floor."""
    qm1 = field.q - 1
    if k < 2 or qm1 % k != 0:
        raise DomainError(f"k must divide q-1={qm1} and be >= 2, got {k}")
    w = arith.big_w(qm1)
    return (arith.euler_phi(qm1) / (k * qm1)) * (field.q - 2 * k * w * math.sqrt(field.q))


def sieve_bound(k: int, w_t: int, s: int, delta: float) -> float:
    """4 k^2 W(t)^2 (2 + (s-1)/delta)^2: q beyond this is certified by the sieve."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if w_t < 1 or s < 1:
        raise DomainError("w_t and s must be >= 1")
    if delta <= 0:
        raise DomainError(f"sieve requires delta > 0, got {delta}")
    return 4.0 * k * k * w_t * w_t * (2.0 + (s - 1) / delta) ** 2


def worst_case_delta(omega: int, s: int) -> float:
    """1 minus the reciprocals of the s largest among the first omega primes.

    This is the least possible delta over all fields whose q-1 has omega
    distinct prime factors, when the sieve uses the s largest of them.
    """
    if not 1 <= s <= omega <= 64:
        raise DomainError(f"need 1 <= s <= omega <= 64, got s={s}, omega={omega}")
    primes = arith.first_primes(omega)
    delta = 1.0 - sum(1.0 / p for p in primes[omega - s:])
    if delta <= 0:
        raise DomainError(f"worst-case delta is nonpositive for omega={omega}, s={s}")
    return delta


def primorial(omega: int) -> int:
    """Product of the first omega primes; capped at omega = 15 to stay in 64 bits."""
    if not 1 <= omega <= 15:
        raise DomainError(f"omega must be in [1, 15], got {omega}")
    out = 1
    for p in arith.first_primes(omega):
        out *= p
    return out


@dataclass(frozen=True)
class SieveProfile:
    """Sieve parameters for one divisor t of q-1."""

    t: int
    sieve_primes: tuple[int, ...]
    s: int
    delta: float
    w_t: int

    @property
    def sieve_applicable(self) -> bool:
        return self.delta > 0


def sieve_profile_for(field: FieldSpec, t: int) -> SieveProfile:
    """The sieve profile of t: the primes of q-1 missing from t, their delta, W(t).

    Requires rad(t) < rad(q-1); a nonpositive delta is recorded in the
    profile and rejected later by sieve_bound.
    """
    qm1 = field.q - 1
    if t < 1 or qm1 % t != 0:
        raise DomainError(f"t must divide q-1={qm1}, got {t}")
    if arith.radical(t) == arith.radical(qm1):
        raise DomainError(f"t={t} already contains every prime of q-1={qm1}")
    t_primes = set(arith.factorize(t).primes)
    sieve_primes = tuple(p for p in field.qm1_factors.primes if p not in t_primes)
    delta = 1.0 - sum(1.0 / p for p in sieve_primes)
    return SieveProfile(t=t, sieve_primes=sieve_primes, s=len(sieve_primes),
                        delta=delta, w_t=arith.big_w(t))


def w_estimate_holds(q: int) -> bool:
    """Check W(q-1) <= q^(0.96 / log log q); valid to test for q >= 17."""
    if q < 17:
        raise DomainError(f"estimate is asserted for q >= 17, got {q}")
    w = arith.big_w(q - 1)
    return w <= q ** (0.96 / math.log(math.log(q)))


@dataclass(frozen=True)
class BoundCell:
    s: int
    computed: float | None  # None when the worst-case delta is nonpositive
    published: int | None
    mismatch: bool
    closed: bool


@dataclass(frozen=True)
class BoundRow:
    omega: int
    primorial: int
    cells: tuple[BoundCell, ...]


def table1_report(k: int) -> list[BoundRow]:
    """Worst-case sieve bounds for omega = 1..9 and s = 1..3, next to published values.

    A cell is "closed" when the primorial of omega already exceeds the bound,
    meaning no field with that many prime factors in q-1 survives. Published
    cells that disagree with the formula are flagged, not reconciled.
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    rows = []
    for omega in range(1, 10):
        prim = primorial(omega)
        cells = []
        for s in range(1, min(3, omega) + 1):
            published = PUBLISHED_TABLE.get(omega, {}).get(s)
            try:
                delta = worst_case_delta(omega, s)
            except DomainError:
                cells.append(BoundCell(s=s, computed=None, published=published,
                                       mismatch=False, closed=False))
                continue
            computed = sieve_bound(k, 2 ** (omega - s), s, delta)
            mismatch = published is not None and abs(computed - published) > 0.5
            cells.append(BoundCell(s=s, computed=computed, published=published,
                                   mismatch=mismatch,
                                   closed=exceeds_bound(prim, computed)))
        rows.append(BoundRow(omega=omega, primorial=prim, cells=tuple(cells)))
    return rows
