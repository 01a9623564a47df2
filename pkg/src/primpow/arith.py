"""Integer arithmetic: factorization and the multiplicative functions used everywhere else.

All functions are exact integer computations except ``robin_holds``, which
evaluates its inequality in binary64. Everything here is pure and safe to
call from any number of workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

from .errors import DomainError

MAX_N = 2**63 - 1

_TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witness sets (valid for all n below the bound).
_MR_TIERS = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (3_215_031_751, (2, 3, 5, 7)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (2**64, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = tuple(primes_up_to(1000))
_TRIAL_PRIMES: list[int] | None = None  # primes to 10^6, sieved on first need


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for bound, bases in _MR_TIERS:
        if n < bound:
            witnesses = bases
            break
    else:
        raise DomainError(f"primality test requires n < 2^64, got {n}")
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n.

    Deterministic: the (x0, c) sequence is fixed so factorizations are
    reproducible across runs.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # unreachable in practice


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n, primes strictly increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def reconstruct(self) -> int:
        return reduce(lambda acc, pe: acc * pe[0] ** pe[1], self.factors, 1)


def _trial_primes() -> list[int]:
    global _TRIAL_PRIMES
    if _TRIAL_PRIMES is None:
        _TRIAL_PRIMES = primes_up_to(_TRIAL_LIMIT)
    return _TRIAL_PRIMES


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Factor n completely; factorize(1) has an empty factor list.

    Trial division by primes up to 10^6, then deterministic Miller-Rabin
    plus Pollard-Brent for any remaining 64-bit cofactor.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"n must be an integer, got {type(n).__name__}")
    if n < 1 or n > MAX_N:
        raise DomainError(f"n must be in [1, 2^63-1], got {n}")
    exponents: dict[int, int] = {}

    def record(p: int, count: int = 1) -> None:
        exponents[p] = exponents.get(p, 0) + count

    m = n
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        while m % p == 0:
            record(p)
            m //= p
    # m now has no prime factor <= min(1000, sqrt(m)).
    if m > 1:
        if m >= _SMALL_PRIMES[-1] ** 2 and not is_prime(m):
            for p in _trial_primes():
                if p <= _SMALL_PRIMES[-1]:
                    continue
                if p * p > m:
                    break
                if m % p == 0:
                    while m % p == 0:
                        record(p)
                        m //= p
                    if m == 1 or is_prime(m):
                        break
            # Whatever is left is 1, prime, or a composite whose prime
            # factors all exceed the trial bound; split the latter with rho.
            stack = [] if m == 1 or is_prime(m) else [m]
            m = 1 if stack else m
            while stack:
                comp = stack.pop()
                d = _pollard_brent(comp)
                for part in (d, comp // d):
                    if is_prime(part):
                        record(part)
                    else:
                        stack.append(part)
        if m > 1:
            record(m)
    factors = tuple(sorted(exponents.items()))
    return Factorization(n=n, factors=factors)


def mobius(n: int) -> int:
    """Moebius function: 0 on non-squarefree n, else (-1)^(number of prime factors)."""
    fac = factorize(n)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if fac.omega % 2 else 1


def euler_phi(n: int) -> int:
    """Euler totient via the product formula over distinct primes."""
    result = n
    for p in factorize(n).primes:
        result -= result // p
    return result


def radical(n: int) -> int:
    """Product of the distinct primes dividing n; radical(1) = 1."""
    return reduce(lambda acc, p: acc * p, factorize(n).primes, 1)


def big_w(n: int) -> int:
    """Number of squarefree divisors of n, i.e. 2^(distinct prime factors)."""
    return 1 << factorize(n).omega


def squarefree_divisors(n: int) -> list[int]:
    """All squarefree divisors of n in strictly increasing order."""
    divs = [1]
    for p in factorize(n).primes:
        divs += [d * p for d in divs]
    return sorted(divs)


def divisors(n: int) -> list[int]:
    """All positive divisors of n in strictly increasing order."""
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def first_primes(s: int) -> list[int]:
    """The first s primes; s is capped at 64."""
    if not 1 <= s <= 64:
        raise DomainError(f"s must be in [1, 64], got {s}")
    return list(_SMALL_PRIMES[:s])


def robin_holds(n: int) -> bool:
    """Check the classical upper bound omega(n) <= 1.38402 * log n / log log n.

    Requires n >= 3 so that log log n is positive.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    return factorize(n).omega <= 1.38402 * math.log(n) / math.log(math.log(n))
