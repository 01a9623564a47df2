"""Exact counts and witness searches: how many t-free x have f(x) a k-th power.

Two counting routes live in this package. ``count_direct`` is the literal
one: enumerate the field and apply the table-free order predicates from
``ffield``. ``FieldTables`` is the fast exact route used by the scans: it
classifies elements by discrete logarithm, which turns every predicate into
a modular test on the log. The two routes are checked against each other in
the test suite; ``charsum.count_via_characters`` is the third, analytic
route.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from . import arith, ffield
from .errors import DomainError, ResourceError
from .ffield import FieldElement, FieldSpec, QuadraticPoly


@dataclass(frozen=True)
class CountQuery:
    """Parameters of one exact count: field, divisors t and k, quadratic f."""

    field: FieldSpec
    t: int
    k: int
    f: QuadraticPoly

    def __post_init__(self):
        qm1 = self.field.q - 1
        if self.t < 1 or qm1 % self.t != 0:
            raise DomainError(f"t must divide q-1={qm1}, got {self.t}")
        if self.k < 2 or qm1 % self.k != 0:
            raise DomainError(f"k must divide q-1={qm1} and be >= 2, got {self.k}")
        if self.f.field != self.field:
            raise DomainError("polynomial belongs to a different field")


def count_direct(query: CountQuery) -> int:
    """|{x in F_q : x is t-free and f(x) is a nonzero k-th power}| by full enumeration."""
    t, k, f = query.t, query.k, query.f
    total = 0
    for x in query.field.elements():
        if ffield.is_t_free(x, t) and ffield.is_kth_power(ffield.eval_quadratic(f, x), k):
            total += 1
    return total


class FieldTables:
    """Per-field discrete-log classification: the fast exact counting route.

    Everything is expressed on element indices. An element x = g0^j is a
    k-th power iff k | j, and t-free iff no prime of t divides j, so counts
    and witness searches reduce to modular tests on the log table.
    """

    _cache: dict[FieldSpec, "FieldTables"] = {}

    def __init__(self, field: FieldSpec):
        self.field = field
        self.q = field.q
        self.m = field.q - 1
        exp, log, gen_idx = field.tables()
        self.exp = exp
        self.log = log
        self.gen_idx = gen_idx
        self._prims: list[int] | None = None
        self._kpw: dict[int, bytearray] = {}

    @classmethod
    def of(cls, field: FieldSpec) -> "FieldTables":
        tables = cls._cache.get(field)
        if tables is None:
            tables = cls(field)
            cls._cache[field] = tables
        return tables

    def primitive_indices(self) -> list[int]:
        """Indices of all primitive elements, ascending."""
        if self._prims is None:
            m = self.m
            if m == 1:
                self._prims = [1]
            else:
                gcd = math.gcd
                self._prims = sorted(self.exp[j] for j in range(m) if gcd(j, m) == 1)
        return self._prims

    def kth_power_mask(self, k: int) -> bytearray:
        """mask[idx] = 1 iff the element with that index is a nonzero k-th power."""
        mask = self._kpw.get(k)
        if mask is None:
            if self.m % k != 0:
                raise DomainError(f"k must divide q-1={self.m}, got {k}")
            mask = bytearray(self.q)
            for j in range(0, max(self.m, 1), k):
                mask[self.exp[j]] = 1
            self._kpw[k] = mask
        return mask

    def poly_values(self, f: QuadraticPoly) -> list[int]:
        """f(x) for every element index x, as indices."""
        field = self.field
        a, b, c = f.a.index, f.b.index, f.c.index
        if field.n == 1:
            p = field.p
            return [(a * x * x + b * x + c) % p for x in range(p)]
        exp, log, m = self.exp, self.log, self.m
        add = field.idx_add
        la, lb = log[a], log[b] if b else -1
        out = [0] * self.q
        out[0] = c
        for x in range(1, self.q):
            lx = log[x]
            v = exp[(la + 2 * lx) % m]
            if b:
                v = add(v, exp[(lb + lx) % m])
            out[x] = add(v, c)
        return out

    def count(self, t: int, k: int, f: QuadraticPoly,
              fvals: list[int] | None = None) -> int:
        """Exact count of t-free x with f(x) a nonzero k-th power."""
        if t < 1 or self.m % t != 0:
            raise DomainError(f"t must divide q-1={self.m}, got {t}")
        if fvals is None:
            fvals = self.poly_values(f)
        kpw = self.kth_power_mask(k)
        log = self.log
        t_primes = arith.factorize(t).primes
        total = 0
        for x in range(1, self.q):
            if kpw[fvals[x]]:
                lx = log[x]
                for r in t_primes:
                    if lx % r == 0:
                        break
                else:
                    total += 1
        return total


def find_witness(field: FieldSpec, k: int, f: QuadraticPoly) -> FieldElement | None:
    """First primitive g (canonical ascending order) with f(g) a nonzero k-th power."""
    qm1 = field.q - 1
    if k < 2 or qm1 % k != 0:
        raise DomainError(f"k must divide q-1={qm1} and be >= 2, got {k}")
    tables = FieldTables.of(field)
    kpw = tables.kth_power_mask(k)
    fvals = tables.poly_values(f)
    for g in tables.primitive_indices():
        if kpw[fvals[g]]:
            return field.from_index(g)
    return None


def coset_representatives(field: FieldSpec, k: int) -> list[FieldElement]:
    """One representative per coset of the k-th powers: g0^0, ..., g0^(k-1)."""
    qm1 = field.q - 1
    if k < 1 or qm1 % k != 0:
        raise DomainError(f"k must divide q-1={qm1}, got {k}")
    g = ffield.find_generator(field)
    reps = [field.one()]
    cur = field.one()
    for _ in range(k - 1):
        cur = cur * g
        reps.append(cur)
    return reps


def enumerate_quadratics(field: FieldSpec, k: int, all_units: bool = False):
    """All normalized quadratics: a over coset representatives, b and c over F_q.

    Scaling f by a k-th power does not change which primitive elements
    witness it, so only the coset of a matters; ``all_units=True`` ranges a
    over the whole multiplicative group instead (the unnormalized oracle).
    Degenerate (zero discriminant) polynomials are skipped. Deterministic
    order: a, then b, then c, each in canonical element order.
    """
    if all_units:
        a_values = [field.from_index(i) for i in range(1, field.q)]
    else:
        a_values = coset_representatives(field, k)
    elements = [field.from_index(i) for i in range(field.q)]
    four = field.scalar(4)
    for a in a_values:
        four_a = four * a
        for b in elements:
            b_sq = b * b
            for c in elements:
                if (b_sq - four_a * c).is_zero:
                    continue
                yield QuadraticPoly(a, b, c)


def sample_quadratics(field: FieldSpec, count: int, seed: int) -> list[QuadraticPoly]:
    """Deterministic pseudo-random quadratics with nonzero discriminant."""
    rng = random.Random(seed)
    out: list[QuadraticPoly] = []
    while len(out) < count:
        a = field.from_index(rng.randrange(1, field.q))
        b = field.from_index(rng.randrange(field.q))
        c = field.from_index(rng.randrange(field.q))
        try:
            out.append(QuadraticPoly(a, b, c))
        except DomainError:
            continue
    return out


# ---------------------------------------------------------------------------
# exhaustive scan

@dataclass(frozen=True)
class ScanRow:
    """Result for one field: was any normalized quadratic left without a witness."""

    q: int
    p: int
    n: int
    field_description: str
    exceptional: bool
    witnessless_count: int
    witnessless_sample: tuple[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]], ...]
    millis: float


@dataclass(frozen=True)
class ScanReport:
    k: int
    q_lo: int
    q_hi: int
    rows: tuple[ScanRow, ...]

    @property
    def exceptional_qs(self) -> list[int]:
        return [row.q for row in self.rows if row.exceptional]

    @property
    def fields_scanned(self) -> int:
        return len(self.rows)


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, n) with q = p^n for a prime p, or None."""
    if q < 2:
        return None
    fac = arith.factorize(q)
    if fac.omega != 1:
        return None
    return fac.factors[0]


def prime_powers_in(q_lo: int, q_hi: int) -> list[tuple[int, int, int]]:
    """All (q, p, n) with q a prime power in [q_lo, q_hi]."""
    out = []
    for q in range(max(q_lo, 2), q_hi + 1):
        pn = prime_power(q)
        if pn is not None:
            out.append((q, pn[0], pn[1]))
    return out


def _scan_prime_field(tables: FieldTables, k: int, cap: int):
    """Witnessless polynomials over a prime field, index arithmetic inlined."""
    p = tables.q
    prims = tables.primitive_indices()
    kpw2 = tables.kth_power_mask(k) * 2  # lookup for h + c without the mod
    rep_idx = [tables.exp[j % tables.m] for j in range(k)]
    inv4 = pow(4, -1, p)
    count = 0
    samples = []
    for a in rep_idx:
        inv4a = inv4 * pow(a, -1, p) % p
        for b in range(p):
            h = [(a * g * g + b * g) % p for g in prims]
            c_bad = b * b * inv4a % p
            for c in range(p):
                if c == c_bad:
                    continue
                for v in h:
                    if kpw2[v + c]:
                        break
                else:
                    count += 1
                    if len(samples) < cap:
                        samples.append(((a,), (b,), (c,)))
    return count, samples


def _scan_extension_field(tables: FieldTables, k: int, cap: int):
    """Witnessless polynomials over an extension field, via log/exp plus add."""
    field = tables.field
    q, m, p = tables.q, tables.m, field.p
    exp, log = tables.exp, tables.log
    prims = tables.primitive_indices()
    kpw = tables.kth_power_mask(k)
    rep_idx = [exp[j % m] for j in range(k)]
    use_table = field.ensure_add_table()
    add_flat = field._add_table if use_table else None
    idx_add = field.idx_add
    count = 0
    samples = []
    log4 = log[field.scalar(4).index] if p != 2 else -1
    for a in rep_idx:
        la = log[a]
        inv4a_log = (-(log4 + la)) % m if p != 2 else -1
        for b in range(q):
            lb = log[b] if b else -1
            h = []
            for g in prims:
                lg = log[g]
                v = exp[(la + 2 * lg) % m]
                if b:
                    v = add_flat[v * q + exp[(lb + lg) % m]] if use_table \
                        else idx_add(v, exp[(lb + lg) % m])
                h.append(v * q if use_table else v)
            if p == 2:
                if b == 0:
                    continue  # discriminant is b^2 in characteristic 2
                c_bad = -1
            else:
                c_bad = exp[(2 * lb + inv4a_log) % m] if b else 0
            if use_table:
                for c in range(q):
                    if c == c_bad:
                        continue
                    for vq in h:
                        if kpw[add_flat[vq + c]]:
                            break
                    else:
                        count += 1
                        if len(samples) < cap:
                            samples.append((field.coeffs_of(a), field.coeffs_of(b),
                                            field.coeffs_of(c)))
            else:
                for c in range(q):
                    if c == c_bad:
                        continue
                    for v in h:
                        if kpw[idx_add(v, c)]:
                            break
                    else:
                        count += 1
                        if len(samples) < cap:
                            samples.append((field.coeffs_of(a), field.coeffs_of(b),
                                            field.coeffs_of(c)))
    return count, samples


def scan_field(field: FieldSpec, k: int, sample_cap: int = 10) -> ScanRow:
    """Scan every normalized quadratic over one field for missing witnesses."""
    start = time.perf_counter()
    tables = FieldTables.of(field)
    if field.n == 1:
        count, samples = _scan_prime_field(tables, k, sample_cap)
    else:
        count, samples = _scan_extension_field(tables, k, sample_cap)
    millis = (time.perf_counter() - start) * 1000.0
    return ScanRow(q=field.q, p=field.p, n=field.n,
                   field_description=field.description(),
                   exceptional=count > 0, witnessless_count=count,
                   witnessless_sample=tuple(samples), millis=millis)


def _scan_job(args: tuple[int, int, int, int]) -> ScanRow:
    p, n, k, sample_cap = args
    return scan_field(ffield.build_field(p, n), k, sample_cap)


def scan_exceptional(k: int, q_lo: int, q_hi: int, workers: int = 1,
                     sample_cap: int = 10) -> ScanReport:
    """Scan all prime powers q in [q_lo, q_hi] with k | q-1.

    A field is exceptional when at least one normalized quadratic has no
    primitive element g with f(g) a nonzero k-th power.
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    cap = ffield.table_cap()
    if not 3 <= q_lo <= q_hi:
        raise DomainError(f"need 3 <= q_lo <= q_hi, got [{q_lo}, {q_hi}]")
    if q_hi > cap:
        raise ResourceError(
            f"scan range exceeds the q cap {cap} (set PRIMPOW_QCAP to raise it)")
    jobs = [(p, n, k, sample_cap)
            for q, p, n in prime_powers_in(q_lo, q_hi) if (q - 1) % k == 0]
    if workers > 1 and len(jobs) > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            rows = list(pool.imap(_scan_job, jobs, chunksize=4))
    else:
        rows = [_scan_job(job) for job in jobs]
    return ScanReport(k=k, q_lo=q_lo, q_hi=q_hi, rows=tuple(rows))
