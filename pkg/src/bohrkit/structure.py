"""Multiplicative structure of coefficient sequences and the factorizations it licenses.

Every multiplicativity class asks ``a_mn = a_m a_n`` on a family of pairs.
All families used here have the same shape: each index ``n`` is mapped to a
squarefree "tag" ``rho(n)`` and a pair is constrained exactly when the tags
are coprime. Totally multiplicative uses ``rho = 1``; multiplicative uses the
radical; ``S``-multiplicative uses the ``S``-part of the radical; partition
multiplicativity uses one representative prime per block met by ``n``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import table_for
from .disk import TaylorPoly
from .errors import DomainError, StructureError, ValidationError
from .series import BohrSeries, dirichlet_multiply, prime_factor_arrays

CLASS_TOL = 1e-10
MAX_REPORTED = 100


class PrimePartition:
    """Disjoint finite blocks of primes; every unlisted prime forms its own block."""

    def __init__(self, blocks=(), rest="singletons"):
        if rest != "singletons":
            raise ValidationError(f"unsupported rest rule {rest!r}")
        t = table_for(2)
        clean, seen = [], set()
        for b in blocks:
            b = frozenset(int(p) for p in b)
            if not b:
                continue
            for p in b:
                if not t.is_prime(p):
                    raise ValidationError(f"{p} is not a prime")
            if seen & b:
                raise ValidationError(f"blocks overlap on {sorted(seen & b)}")
            seen |= b
            clean.append(b)
        self.blocks = sorted(clean, key=min)
        self.rest = rest

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        if not isinstance(doc, dict) or not isinstance(doc.get("blocks"), list):
            raise ValidationError("partition needs a 'blocks' list")
        return cls(doc["blocks"], doc.get("rest", "singletons"))

    def to_json(self):
        return {"blocks": [sorted(b) for b in self.blocks], "rest": self.rest}

    def block_of(self, p):
        for b in self.blocks:
            if p in b:
                return b
        return frozenset([p])

    def merged(self, groups):
        """Coarsening: each group lists blocks (as prime sets or single primes) to fuse."""
        fused, used = [], set()
        for g in groups:
            union = frozenset()
            for item in g:
                blk = self.block_of(item) if isinstance(item, int) else frozenset(item)
                union |= blk
            used |= union
            fused.append(union)
        keep = [b for b in self.blocks if not (b & used)]
        return PrimePartition(keep + fused)

    def __eq__(self, other):
        return isinstance(other, PrimePartition) and self.blocks == other.blocks

    def __repr__(self):
        return f"PrimePartition({[sorted(b) for b in self.blocks]}, rest={self.rest!r})"


@dataclass(frozen=True)
class MultClass:
    """A multiplicativity class. Build with :func:`totally`, :func:`multiplicative`, etc."""

    kind: str
    primes: frozenset = frozenset()
    partition: PrimePartition | None = None

    def label(self):
        if self.kind == "S":
            return f"SMultiplicative({sorted(self.primes)})"
        if self.kind == "delta":
            return f"DeltaMultiplicative({[sorted(b) for b in self.partition.blocks]})"
        return {"totally": "TotallyMultiplicative", "multiplicative": "Multiplicative"}[self.kind]


def totally():
    return MultClass("totally")


def multiplicative():
    return MultClass("multiplicative")


def s_multiplicative(S):
    return MultClass("S", primes=frozenset(int(p) for p in S))


def delta_multiplicative(partition):
    if not isinstance(partition, PrimePartition):
        partition = PrimePartition(partition)
    return MultClass("delta", partition=partition)


@dataclass
class MultiplicativityReport:
    cls: MultClass | None
    candidate: MultClass
    violations: list = field(default_factory=list)
    violation_count: int = 0
    checked_pairs: int = 0
    scale: complex = 1.0
    n_max: int = 0

    @property
    def holds(self):
        return self.cls is not None

    def to_json(self):
        return {
            "class": self.cls.label() if self.cls else None,
            "candidate": self.candidate.label(),
            "violations": self.violations,
            "violation_count": self.violation_count,
            "checked_pairs": self.checked_pairs,
            "scale": [self.scale.real, self.scale.imag],
            "within_truncation": self.n_max,
        }


def _tags(cls, n_max):
    """``rho(n)`` for ``n = 0..n_max``; pairs with coprime tags are constrained."""
    rho = np.ones(n_max + 1, dtype=np.int64)
    if cls.kind == "totally":
        return rho
    t = table_for(n_max)
    primes = t.primes[t.primes <= n_max]
    if cls.kind == "multiplicative":
        for p in primes.tolist():
            rho[p::p] *= p
        return rho
    if cls.kind == "S":
        for p in sorted(cls.primes):
            if p <= n_max:
                rho[p::p] *= p
        return rho
    listed = set()
    for b in cls.partition.blocks:
        listed |= b
        hit = np.zeros(n_max + 1, dtype=bool)
        for p in sorted(b):
            if p <= n_max:
                hit[p::p] = True
        rho[hit] *= min(b)
    for p in primes.tolist():
        if p not in listed:
            rho[p::p] *= p
    return rho


def classify(F, candidate, tol=CLASS_TOL):
    """Check ``a_mn = a_m a_n`` on every constrained pair with ``m n <= n_max``.

    The series is first scaled so that ``a_1 = 1``; the scale is reported.
    The check is exhaustive within the truncation.
    """
    a1 = F[1]
    if a1 == 0:
        raise DomainError("multiplicative classes need a_1 != 0")
    N = F.n_max
    a = F.to_dense() / a1
    rho = _tags(candidate, N)
    bad, count, checked = [], 0, 0
    for m in range(2, math.isqrt(N) + 1):
        n = np.arange(m, N // m + 1)
        ok = np.gcd(rho[m], rho[n]) == 1
        n = n[ok]
        if n.size == 0:
            continue
        checked += int(n.size)
        prod = a[m] * a[n]
        err = np.abs(a[m * n] - prod)
        viol = err > tol * (1 + np.abs(prod))
        if viol.any():
            count += int(viol.sum())
            room = MAX_REPORTED - len(bad)
            if room > 0:
                bad.extend((m, int(k)) for k in n[viol][:room])
    return MultiplicativityReport(
        cls=None if count else candidate,
        candidate=candidate,
        violations=sorted(bad),
        violation_count=count,
        checked_pairs=checked,
        scale=complex(a1),
        n_max=N,
    )


def prime_factor_series(F, p):
    """``f_p(z) = sum_k a_{p^k} z^k`` for ``p^k <= n_max``."""
    if not table_for(p).is_prime(p):
        raise ValidationError(f"{p} is not a prime")
    c, q = [F[1]], p
    while q <= F.n_max:
        c.append(F[q])
        q *= p
    return TaylorPoly(c)


def block_series(F, primes):
    """Coefficients of ``F`` at indices built only from ``primes`` (including ``n = 1``)."""
    allowed = set(primes)
    t = table_for(F.n_max)
    rest = F.indices.copy()
    ok = np.ones(rest.size, dtype=bool)
    while True:
        live = rest > 1
        if not live.any():
            break
        p = t.spf[rest[live]].astype(np.int64)
        good = np.fromiter((int(x) in allowed for x in p), dtype=bool, count=p.size)
        idx = np.flatnonzero(live)
        ok[idx[~good]] = False
        rest[idx[~good]] = 1
        rest[idx[good]] //= p[good]
    return BohrSeries.from_arrays(F.n_max, F.indices[ok], F.values[ok])


def partition_factorize(F, partition, tol=CLASS_TOL):
    """Split a partition-multiplicative ``F`` into one factor per block met by its support.

    Listed blocks come first (in block order), then singleton blocks for the
    remaining primes in ascending order. The constant ``a_1`` is carried by the
    first factor.

    Raises
    ------
    StructureError
        If ``F`` is not multiplicative for ``partition`` within ``tol``.
    """
    if not isinstance(partition, PrimePartition):
        partition = PrimePartition(partition)
    rep = classify(F, delta_multiplicative(partition), tol)
    if not rep.holds:
        raise StructureError(
            f"series is not multiplicative for {partition}: {rep.violation_count} violations",
            violations=rep.violations,
        )
    Fn = F.scaled(1 / rep.scale)
    support = set(variable_support(F))
    blocks = list(partition.blocks)
    listed = set().union(*blocks) if blocks else set()
    blocks += [frozenset([p]) for p in sorted(support - listed)]
    factors = [block_series(Fn, b) for b in blocks]
    if not factors:
        factors = [BohrSeries.unit(F.n_max)]
    factors[0] = factors[0].scaled(rep.scale)
    return factors


def product(factors):
    out = factors[0]
    for G in factors[1:]:
        out = dirichlet_multiply(out, G)
    return out


def variable_support(F):
    """Primes dividing at least one index with a nonzero coefficient."""
    _, primes = prime_factor_arrays(F.indices, F.n_max)
    return [int(p) for p in primes]


def growth_class(F, eps):
    """Partial sums of ``sum |a_n| n^eps`` at ``n = 1, 2, 4, ...`` and ``n_max``."""
    if eps <= 0:
        raise ValidationError("eps must be positive")
    n = np.arange(1, F.n_max + 1)
    terms = np.abs(F.to_dense()[1:]) * n.astype(float) ** eps
    sums = np.cumsum(terms)
    marks = [1 << k for k in range(F.n_max.bit_length()) if (1 << k) <= F.n_max]
    if marks[-1] != F.n_max:
        marks.append(F.n_max)
    return [(c, float(sums[c - 1])) for c in marks]
