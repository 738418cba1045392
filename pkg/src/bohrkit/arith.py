"""Exact integer arithmetic behind the isomorphism (N, *) -> finitely supported exponent vectors.

A positive integer ``n = p_1**a_1 * p_2**a_2 * ...`` is identified with its
exponent vector ``(a_1, a_2, ...)``; the j-th entry belongs to the j-th prime.
All routines go through a :class:`PrimeTable`, a smallest-prime-factor sieve
built once up to a fixed limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import RangeError, ValidationError

DEFAULT_LIMIT = 10**6


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector of a positive integer, trailing zeros trimmed."""

    exponents: tuple = ()

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValidationError(f"negative exponent in {exps}")
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        object.__setattr__(self, "exponents", exps)

    def __add__(self, other):
        a, b = self.exponents, other.exponents
        if len(a) < len(b):
            a, b = b, a
        return MultiIndex(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, j):
        return self.exponents[j]

    def degree(self):
        return sum(self.exponents)


class PrimeTable:
    """Smallest-prime-factor sieve on ``[0, limit]``.

    Parameters
    ----------
    limit : int
        Largest integer that can be factorized.
    """

    def __init__(self, limit=DEFAULT_LIMIT):
        limit = int(limit)
        if limit < 2:
            raise ValidationError("prime table limit must be at least 2")
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.int32)
        spf[2::2] = 2
        for p in range(3, int(limit**0.5) + 1, 2):
            if spf[p] == 0:
                block = spf[p * p :: 2 * p]
                block[block == 0] = p
        odd = np.arange(3, limit + 1, 2, dtype=np.int32)
        spf[odd[spf[odd] == 0]] = odd[spf[odd] == 0]
        self.spf = spf
        self.primes = np.flatnonzero(spf == np.arange(limit + 1, dtype=np.int32))
        self.primes = self.primes[self.primes >= 2]
        # position (1-based) of each prime; 0 for non-primes
        self.position = np.zeros(limit + 1, dtype=np.int32)
        self.position[self.primes] = np.arange(1, len(self.primes) + 1)

    def __repr__(self):
        return f"PrimeTable(limit={self.limit}, primes={len(self.primes)})"

    def _check(self, n):
        n = int(n)
        if n < 1 or n > self.limit:
            raise RangeError(f"{n} outside factorizable range [1, {self.limit}]")
        return n

    def is_prime(self, p):
        p = int(p)
        return 2 <= p <= self.limit and self.spf[p] == p

    def prime(self, j):
        """The j-th prime, 1-based."""
        if j < 1 or j > len(self.primes):
            raise RangeError(f"prime position {j} beyond table ({len(self.primes)} primes)")
        return int(self.primes[j - 1])

    def prime_position(self, p):
        if not self.is_prime(p):
            raise ValidationError(f"{p} is not a prime")
        return int(self.position[p])

    def primes_upto(self, bound):
        return [int(p) for p in self.primes[self.primes <= bound]]

    def factorize(self, n):
        n = self._check(n)
        out = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def multi_index(self, n):
        fac = self.factorize(n)
        if not fac:
            return MultiIndex(())
        exps = [0] * int(self.position[fac[-1][0]])
        for p, e in fac:
            exps[int(self.position[p]) - 1] = e
        return MultiIndex(tuple(exps))

    def index_of(self, alpha):
        exps = alpha.exponents if isinstance(alpha, MultiIndex) else tuple(alpha)
        n = 1
        for j, e in enumerate(exps, start=1):
            if e < 0:
                raise ValidationError("negative exponent")
            if e == 0:
                continue
            n *= self.prime(j) ** int(e)
            if n > self.limit:
                raise RangeError(f"index of {tuple(exps)} exceeds limit {self.limit}")
        return n

    def mobius(self, n):
        fac = self.factorize(n)
        if any(e > 1 for _, e in fac):
            return 0
        return -1 if len(fac) % 2 else 1

    def divisors(self, n):
        divs = [1]
        for p, e in self.factorize(n):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def mobius_array(self, n_max):
        """mu(n) for n = 0..n_max (entry 0 is 0)."""
        self._check(n_max)
        mu = np.ones(n_max + 1, dtype=np.int64)
        mu[0] = 0
        for p in self.primes[self.primes <= n_max]:
            p = int(p)
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
        return mu

    def smooth_mask(self, n_max, k):
        """Boolean mask over 0..n_max of integers whose prime factors are among the first k primes."""
        lpf = self.largest_prime_factor_array(n_max)
        mask = lpf <= (self.prime(k) if k >= 1 else 1)
        mask[0] = False
        return mask

    def largest_prime_factor_array(self, n_max):
        self._check(n_max)
        lpf = np.zeros(n_max + 1, dtype=np.int64)
        lpf[1] = 1
        for p in self.primes[self.primes <= n_max]:
            lpf[int(p) :: int(p)] = p
        return lpf


@lru_cache(maxsize=4)
def _table_for(limit):
    return PrimeTable(limit)


_default_limit = DEFAULT_LIMIT


def default_table():
    return _table_for(_default_limit)


def set_default_limit(limit):
    """Change the limit of the shared table (rebuilt lazily)."""
    global _default_limit
    _default_limit = int(limit)


def table_for(n):
    """Shared table covering at least ``n``."""
    if n <= _default_limit:
        return default_table()
    return _table_for(int(n))


def factorize(n):
    """Prime factorization of ``n`` as ascending ``(prime, exponent)`` pairs."""
    return default_table().factorize(n)


def multi_index(n):
    return default_table().multi_index(n)


def index_of(alpha):
    return default_table().index_of(alpha)


def mobius(n):
    return default_table().mobius(n)


def divisors(n):
    return default_table().divisors(n)


def nth_prime(j):
    return default_table().prime(j)


def is_prime(p):
    return default_table().is_prime(p)
