"""Truncated power series over the infinite polydisk, indexed by positive integers.

A :class:`BohrSeries` stores ``F = sum_{n <= n_max} a_n zeta^alpha(n)`` as a
sorted array of integer indices with their nonzero complex coefficients.
Multiplication of monomials is multiplication of indices, so the product of
two series is Dirichlet convolution of coefficient sequences, and it is exact
on every index up to the smaller truncation bound.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .arith import table_for
from .errors import DomainError, NonInvertibleError, ParseError, UnsupportedError, ValidationError

SERIES_FORMAT = "bohr-series/1"


class BohrSeries:
    """Immutable truncated series ``sum a_n zeta^alpha(n)`` for ``1 <= n <= n_max``.

    Parameters
    ----------
    n_max : int
        Truncation bound.
    coeffs : mapping, optional
        ``{n: a_n}``; zero entries are dropped.
    prune : float
        Coefficients with ``|a_n| <= prune`` are dropped (default: exact zeros only).
    """

    __slots__ = ("n_max", "indices", "values")

    def __init__(self, n_max, coeffs=None, prune=0.0):
        n_max = int(n_max)
        if n_max < 1:
            raise ValidationError("n_max must be a positive integer")
        coeffs = coeffs or {}
        idx = np.fromiter((int(k) for k in coeffs), dtype=np.int64, count=len(coeffs))
        vals = np.fromiter((complex(v) for v in coeffs.values()), dtype=np.complex128, count=len(coeffs))
        if idx.size and (idx.min() < 1 or idx.max() > n_max):
            raise ValidationError(f"indices must lie in [1, {n_max}]")
        order = np.argsort(idx, kind="stable")
        self._set(n_max, idx[order], vals[order], prune)

    def _set(self, n_max, idx, vals, prune):
        keep = np.abs(vals) > prune
        self.n_max = n_max
        self.indices = idx[keep]
        self.values = vals[keep]
        self.indices.flags.writeable = False
        self.values.flags.writeable = False

    @classmethod
    def from_arrays(cls, n_max, indices, values, prune=0.0):
        """Build from parallel index/value arrays; indices must be unique."""
        idx = np.asarray(indices, dtype=np.int64)
        vals = np.asarray(values, dtype=np.complex128)
        if idx.shape != vals.shape:
            raise ValidationError("indices and values differ in length")
        if idx.size:
            if idx.min() < 1 or idx.max() > n_max:
                raise ValidationError(f"indices must lie in [1, {n_max}]")
            order = np.argsort(idx, kind="stable")
            idx, vals = idx[order], vals[order]
            if np.any(np.diff(idx) == 0):
                raise ValidationError("duplicate index")
        obj = cls.__new__(cls)
        obj._set(int(n_max), idx.copy(), vals.copy(), prune)
        return obj

    @classmethod
    def from_dense(cls, dense, prune=0.0):
        """``dense[n]`` holds ``a_n``; ``dense[0]`` is ignored and ``n_max = len(dense) - 1``."""
        dense = np.asarray(dense, dtype=np.complex128)
        n_max = dense.size - 1
        idx = np.flatnonzero(dense)
        idx = idx[idx >= 1]
        return cls.from_arrays(n_max, idx, dense[idx], prune)

    @classmethod
    def from_function(cls, n_max, fn, prune=0.0):
        n = np.arange(1, n_max + 1)
        return cls.from_arrays(n_max, n, np.asarray(fn(n), dtype=np.complex128), prune)

    @classmethod
    def zero(cls, n_max):
        return cls(n_max)

    @classmethod
    def unit(cls, n_max, scale=1.0):
        return cls(n_max, {1: scale})

    @classmethod
    def monomial(cls, n, n_max, scale=1.0):
        """``scale * zeta^alpha(n)``."""
        return cls(n_max, {n: scale})

    @property
    def coeffs(self):
        return {int(k): complex(v) for k, v in zip(self.indices, self.values)}

    def __getitem__(self, n):
        pos = np.searchsorted(self.indices, n)
        if pos < self.indices.size and self.indices[pos] == n:
            return complex(self.values[pos])
        return 0j

    def __len__(self):
        return int(self.indices.size)

    def __iter__(self):
        return iter(zip(self.indices.tolist(), self.values.tolist()))

    def __repr__(self):
        head = ", ".join(f"{n}: {v:.6g}" for n, v in list(self)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"BohrSeries(n_max={self.n_max}, {{{head}{more}}})"

    def is_zero(self):
        return self.indices.size == 0

    def is_real(self):
        return bool(np.all(self.values.imag == 0))

    def to_dense(self, n_max=None):
        n_max = self.n_max if n_max is None else n_max
        out = np.zeros(n_max + 1, dtype=np.complex128)
        keep = self.indices <= n_max
        out[self.indices[keep]] = self.values[keep]
        return out

    def truncate(self, n_max):
        keep = self.indices <= n_max
        return BohrSeries.from_arrays(min(n_max, self.n_max), self.indices[keep], self.values[keep])

    def pruned(self, eps):
        return BohrSeries.from_arrays(self.n_max, self.indices, self.values, prune=eps)

    def scaled(self, c):
        return BohrSeries.from_arrays(self.n_max, self.indices, complex(c) * self.values)

    def conj(self):
        return BohrSeries.from_arrays(self.n_max, self.indices, self.values.conj())

    def max_abs_diff(self, other):
        """Componentwise sup distance on the common truncation."""
        n = min(self.n_max, other.n_max)
        d = self.to_dense(n) - other.to_dense(n)
        return float(np.max(np.abs(d))) if d.size else 0.0

    def __add__(self, other):
        return linear_combine([(1, self), (1, other)])

    def __sub__(self, other):
        return linear_combine([(1, self), (-1, other)])

    def __neg__(self):
        return self.scaled(-1)

    def __mul__(self, other):
        if isinstance(other, BohrSeries):
            return dirichlet_multiply(self, other)
        return self.scaled(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BohrSeries):
            return NotImplemented
        return (
            self.n_max == other.n_max
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


class Point:
    """Finitely supported point of the infinite polydisk.

    ``entries`` maps a 1-based variable position ``j`` (the j-th prime) to
    ``lambda_j`` with ``|lambda_j| < 1``. Positions not listed are zero.
    """

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        clean = {}
        for j, v in (entries or {}).items():
            j = int(j)
            if j < 1:
                raise ValidationError(f"variable position must be >= 1, got {j}")
            v = complex(v)
            if not abs(v) < 1:
                raise DomainError(f"|lambda_{j}| = {abs(v)} is not < 1")
            if v != 0:
                clean[j] = v
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def from_primes(cls, mapping):
        """Point keyed by primes instead of positions, e.g. ``{2: -0.5, 3: -1/3}``."""
        t = table_for(max(mapping, default=2))
        return cls({t.prime_position(p): v for p, v in mapping.items()})

    def primes(self):
        t = table_for(2)
        return {t.prime(j): v for j, v in self.entries.items()}

    def __getitem__(self, j):
        return self.entries.get(j, 0j)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return "Point({" + ", ".join(f"{j}: {v:.12g}" for j, v in self.entries.items()) + "})"

    def __eq__(self, other):
        return isinstance(other, Point) and self.entries == other.entries

    def to_list(self):
        return [[j, v.real, v.imag] for j, v in self.entries.items()]


@dataclass(frozen=True)
class TailRule:
    """Symbolic rule for an infinitely supported point.

    ``kind="prime_power"``: ``lambda_j = scale / p_j**exponent``.
    ``kind="geometric"``: ``lambda_j = scale * ratio**j``.
    """

    kind: str
    scale: complex = 1.0
    exponent: float = 1.0
    ratio: complex = 0.0


def _smooth_table(point, n_max, squarefree=False, sign=1.0, conjugate=False):
    """Indices ``n <= n_max`` built from the point's primes and ``prod lambda_j^alpha_j(n)``.

    With ``squarefree`` only exponents 0/1 are produced and each prime factor
    contributes ``sign * lambda_j``.
    """
    t = table_for(n_max)
    idx = np.array([1], dtype=np.int64)
    vals = np.array([1.0 + 0j])
    for j, lam in point.entries.items():
        if j > len(t.primes):
            raise DomainError(f"variable position {j} beyond prime table")
        p = t.prime(j)
        if p > n_max:
            continue
        lam = lam.conjugate() if conjugate else lam
        if squarefree:
            lam = sign * lam
        parts_i, parts_v = [idx], [vals]
        cur_i, cur_v = idx, vals
        while True:
            cur_i = cur_i * p
            keep = cur_i <= n_max
            cur_i, cur_v = cur_i[keep], cur_v[keep] * lam
            if cur_i.size == 0:
                break
            parts_i.append(cur_i)
            parts_v.append(cur_v)
            if squarefree:
                break
        idx, vals = np.concatenate(parts_i), np.concatenate(parts_v)
    order = np.argsort(idx, kind="stable")
    return idx[order], vals[order]


def linear_combine(terms):
    """``sum c_i F_i`` truncated to the smallest ``n_max`` among the inputs."""
    terms = list(terms)
    if not terms:
        raise ValidationError("linear_combine needs at least one term")
    n_max = min(F.n_max for _, F in terms)
    acc = np.zeros(n_max + 1, dtype=np.complex128)
    for c, F in terms:
        keep = F.indices <= n_max
        acc[F.indices[keep]] += complex(c) * F.values[keep]
    return BohrSeries.from_dense(acc)


def dirichlet_multiply(F, G):
    """Product ``F * G``: coefficient ``sum_{d | n} F_d G_{n/d}`` for ``n <= min(n_max)``."""
    n = min(F.n_max, G.n_max)
    if len(F) > len(G):
        F, G = G, F
    if len(F) * len(G) <= 20000:
        if len(F) == 0 or len(G) == 0:
            return BohrSeries.zero(n)
        prod_i = np.outer(F.indices, G.indices).ravel()
        prod_v = np.outer(F.values, G.values).ravel()
        keep = prod_i <= n
        acc = np.zeros(n + 1, dtype=np.complex128)
        np.add.at(acc, prod_i[keep], prod_v[keep])
        return BohrSeries.from_dense(acc)
    g = G.to_dense(n)
    acc = np.zeros(n + 1, dtype=np.complex128)
    for d, fd in zip(F.indices.tolist(), F.values.tolist()):
        if d > n:
            break
        m = n // d
        acc[d : d * m + 1 : d] += fd * g[1 : m + 1]
    return BohrSeries.from_dense(acc)


def invert(F):
    """Dirichlet inverse of ``F`` up to its truncation bound.

    Raises
    ------
    NonInvertibleError
        If the constant coefficient ``a_1`` vanishes.
    """
    a1 = F[1]
    if a1 == 0:
        raise NonInvertibleError("series with a_1 = 0 has no inverse")
    N = F.n_max
    rest = F.indices > 1
    di, dv = F.indices[rest], F.values[rest]
    acc = np.zeros(N + 1, dtype=np.complex128)
    g = np.zeros(N + 1, dtype=np.complex128)
    inv_a1 = 1.0 / a1
    g[1] = inv_a1
    for n in range(1, N + 1):
        if n > 1:
            g[n] = -acc[n] * inv_a1
        if g[n] == 0:
            continue
        cut = np.searchsorted(di, N // n, side="right")
        if cut:
            acc[n * di[:cut]] += dv[:cut] * g[n]
    return BohrSeries.from_dense(g)


def norm(F):
    """Hardy-space norm ``sqrt(sum |a_n|^2)`` (correctly rounded sum of squares)."""
    return math.sqrt(math.fsum((np.abs(F.values) ** 2).tolist()))


def inner(F, G):
    """``<F, G> = sum_n F_n conj(G_n)`` over common indices, ascending."""
    _, i, j = np.intersect1d(F.indices, G.indices, assume_unique=True, return_indices=True)
    return complex(np.sum(F.values[i] * G.values[j].conj()))


def kernel(point, n_max):
    """Reproducing kernel ``K_lambda`` with coefficients ``conj(lambda)^alpha(n)``."""
    idx, vals = _smooth_table(point, n_max, conjugate=True)
    return BohrSeries.from_arrays(n_max, idx, vals)


def kernel_inverse(point, n_max):
    """``1 / K_lambda = prod (1 - conj(lambda_j) zeta_j)``: coefficients ``mu(n) conj(lambda)^alpha(n)``."""
    idx, vals = _smooth_table(point, n_max, squarefree=True, sign=-1.0, conjugate=True)
    return BohrSeries.from_arrays(n_max, idx, vals)


def kernel_norm(point):
    """``||K_lambda|| = sqrt(prod 1 / (1 - |lambda_j|^2))``."""
    if not isinstance(point, Point):
        point = Point(point)
    log_sq = math.fsum(-math.log1p(-abs(v) ** 2) for v in point.entries.values())
    return math.exp(0.5 * log_sq)


def evaluate(F, point, tail_eps=0.0):
    """Value of ``F`` at a finitely supported point, with a Cauchy-Schwarz tail bound.

    The value is ``<F, K_lambda>`` on the truncation; variables absent from the
    point are zero. ``tail_eps`` bounds the norm of the dropped coefficients and
    the returned bound is ``||K_lambda|| * tail_eps``.
    """
    if not isinstance(point, Point):
        point = Point(point)
    value = inner(F, kernel(point, F.n_max))
    return value, kernel_norm(point) * float(tail_eps)


def kernel_bounded(point):
    """Whether ``K_lambda`` is a bounded function, i.e. ``sum |lambda_j| < infinity``.

    Finitely supported points are always bounded. For a :class:`TailRule` the
    answer follows from the rule's closed form.
    """
    if isinstance(point, Point):
        return True
    if not isinstance(point, TailRule):
        raise UnsupportedError(f"cannot decide boundedness for {type(point).__name__}")
    c = abs(complex(point.scale))
    if point.kind == "prime_power":
        s = float(point.exponent)
        if c == 0:
            return True
        if s <= 0.5 or c / 2**s >= 1:
            raise DomainError("rule does not define a point of the polydisk in l^2")
        # sum over primes of p^-s converges exactly when s > 1
        return s > 1
    if point.kind == "geometric":
        r = abs(complex(point.ratio))
        if c == 0:
            return True
        if r >= 1 or c * r >= 1:
            raise DomainError("rule does not define a point of the polydisk in l^2")
        return True
    raise UnsupportedError(f"unknown tail rule {point.kind!r}")


def prime_factor_arrays(indices, n_max):
    """For each index, the largest prime factor, plus the sorted set of all primes met."""
    t = table_for(n_max)
    rest = np.asarray(indices, dtype=np.int64).copy()
    lpf = np.ones_like(rest)
    seen = []
    while True:
        live = rest > 1
        if not live.any():
            break
        p = t.spf[rest[live]].astype(np.int64)
        seen.append(p)
        lpf[live] = np.maximum(lpf[live], p)
        rest[live] //= p
    primes = np.unique(np.concatenate(seen)) if seen else np.array([], dtype=np.int64)
    return lpf, primes


def restrict_to_first_variables(F, k):
    """Keep the coefficients whose indices only involve the first ``k`` primes."""
    if k < 1:
        return BohrSeries.from_arrays(F.n_max, F.indices[:1][F.indices[:1] == 1], F.values[:1][F.indices[:1] == 1])
    lpf, _ = prime_factor_arrays(F.indices, F.n_max)
    bound = table_for(F.n_max).prime(k)
    keep = lpf <= bound
    return BohrSeries.from_arrays(F.n_max, F.indices[keep], F.values[keep])


# --- persistence -----------------------------------------------------------------


def series_to_json(F, meta=None):
    doc = {
        "format": SERIES_FORMAT,
        "n_max": F.n_max,
        "coeffs": [{"n": int(n), "re": float(v.real), "im": float(v.imag)} for n, v in F],
    }
    if meta:
        doc["meta"] = meta
    return doc


def _check_format(tag, expected):
    if not isinstance(tag, str) or "/" not in tag:
        raise ValidationError(f"missing or malformed format tag {tag!r}")
    name, _, major = tag.partition("/")
    ename, _, emajor = expected.partition("/")
    if name != ename:
        raise ValidationError(f"expected format {expected!r}, got {tag!r}")
    if major.split(".")[0] != emajor:
        raise ValidationError(f"unsupported major version in {tag!r}")


def series_from_json(doc):
    if not isinstance(doc, dict):
        raise ValidationError("series document must be a JSON object")
    _check_format(doc.get("format"), SERIES_FORMAT)
    n_max = doc.get("n_max")
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 1:
        raise ValidationError(f"n_max must be a positive integer, got {n_max!r}")
    recs = doc.get("coeffs")
    if not isinstance(recs, list):
        raise ValidationError("'coeffs' must be a list")
    seen = {}
    for k, rec in enumerate(recs):
        where = f"record {k}"
        if not isinstance(rec, dict) or "n" not in rec:
            raise ValidationError(f"{where}: expected an object with key 'n'")
        n = rec["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValidationError(f"{where}: index must be an integer, got {n!r}")
        if n < 1:
            raise ValidationError(f"{where}: index {n} must be >= 1")
        if n > n_max:
            raise ValidationError(f"{where}: index {n} exceeds n_max={n_max}")
        if n in seen:
            raise ValidationError(f"{where}: duplicate index {n} (first at record {seen[n]})")
        try:
            re_, im_ = float(rec.get("re", 0.0)), float(rec.get("im", 0.0))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{where}: non-numeric coefficient ({exc})") from None
        seen[n] = k
        recs[k] = (n, complex(re_, im_))
    idx = [n for n, _ in recs]
    vals = [v for _, v in recs]
    return BohrSeries.from_arrays(n_max, np.array(idx, dtype=np.int64), np.array(vals, dtype=np.complex128))


def load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def read_series(path):
    """Read a ``bohr-series/1`` JSON file."""
    try:
        return series_from_json(load_json(path))
    except ParseError:
        raise
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def dumps_series(F, meta=None):
    """JSON text with one coefficient record per line."""
    doc = series_to_json(F, meta)
    recs = doc.pop("coeffs")
    head = json.dumps(doc)[:-1]
    body = ",\n".join(json.dumps(r) for r in recs)
    return f'{head}, "coeffs": [\n{body}\n]}}\n'


def write_series(F, path, meta=None):
    Path(path).write_text(dumps_series(F, meta))


def parse_number(text):
    """Parse a decimal or ``a/b`` literal exactly, then round once to a float or complex."""
    text = text.strip()
    if "j" in text or "i" in text:
        try:
            return complex(text.replace("i", "j"))
        except ValueError:
            raise ValidationError(f"bad complex literal {text!r}") from None
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"bad numeric literal {text!r}") from None


def parse_point(text):
    """``"1:-0.5,2:-1/3"`` -> Point with ``lambda_1 = -0.5``, ``lambda_2 = -1/3``."""
    entries = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        pos, sep, val = part.partition(":")
        if not sep:
            raise ValidationError(f"point entry {part!r} is not 'pos:value'")
        try:
            j = int(pos)
        except ValueError:
            raise ValidationError(f"bad variable position {pos!r}") from None
        if j in entries:
            raise ValidationError(f"position {j} given twice")
        entries[j] = parse_number(val)
    return Point(entries)


def reciprocal_kernel(n_max):
    """``K_p`` for the point ``(1/2, 1/3, 1/5, ...)``: ``a_n = 1/n`` for every ``n <= n_max``.

    Only primes up to ``n_max`` reach indices ``<= n_max``, so the truncation is exact
    even though the point has infinitely many nonzero entries.
    """
    n = np.arange(1, n_max + 1)
    return BohrSeries.from_arrays(n_max, n, 1.0 / n)


def reciprocal_kernel_inverse(n_max):
    """``1 / K_p``: ``a_n = mu(n) / n``."""
    mu = table_for(n_max).mobius_array(n_max)
    n = np.flatnonzero(mu)
    return BohrSeries.from_arrays(n_max, n, mu[n] / n)
