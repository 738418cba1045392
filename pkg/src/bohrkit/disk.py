"""One-variable Hardy space tools: truncated Taylor series, outerness tests and dilation operators."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, ValidationError
from .series import BohrSeries, _check_format, load_json

TAYLOR_FORMAT = "taylor/1"
OUTER_TOL = 1e-9
SZEGO_THRESHOLD = 1e-4
SZEGO_NODES = 4096

OUTER = "Outer"
NOT_OUTER = "NotOuter"
INDETERMINATE = "Indeterminate"


class TaylorPoly:
    """Dense coefficients ``c_0 .. c_degree_max`` of a (truncated) power series in ``z``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValidationError("TaylorPoly needs a nonempty 1-d coefficient sequence")
        c.flags.writeable = False
        self.coeffs = c

    @classmethod
    def monomial(cls, j, degree_max=None, scale=1.0):
        degree_max = j if degree_max is None else degree_max
        c = np.zeros(degree_max + 1, dtype=np.complex128)
        if j <= degree_max:
            c[j] = scale
        return cls(c)

    @property
    def degree_max(self):
        return self.coeffs.size - 1

    def degree(self):
        """True degree (largest index with a nonzero coefficient), ``-1`` for zero."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def trimmed(self):
        return TaylorPoly(self.coeffs[: max(self.degree(), 0) + 1])

    def with_degree(self, degree_max):
        c = np.zeros(degree_max + 1, dtype=np.complex128)
        k = min(degree_max, self.degree_max) + 1
        c[:k] = self.coeffs[:k]
        return TaylorPoly(c)

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def __getitem__(self, k):
        return complex(self.coeffs[k]) if 0 <= k <= self.degree_max else 0j

    def __add__(self, other):
        n = max(self.degree_max, other.degree_max)
        return TaylorPoly(self.with_degree(n).coeffs + other.with_degree(n).coeffs)

    def __sub__(self, other):
        n = max(self.degree_max, other.degree_max)
        return TaylorPoly(self.with_degree(n).coeffs - other.with_degree(n).coeffs)

    def __mul__(self, other):
        if isinstance(other, TaylorPoly):
            return TaylorPoly(np.convolve(self.coeffs, other.coeffs))
        return TaylorPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TaylorPoly) and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        shown = ", ".join(f"{v:.6g}" for v in self.coeffs[:8])
        return f"TaylorPoly([{shown}{', ...' if self.degree_max >= 8 else ''}])"


@dataclass
class OuterVerdict:
    status: str
    witness: object = None
    method: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def is_outer(self):
        return self.status == OUTER

    def to_json(self):
        w = self.witness
        if isinstance(w, complex):
            w = [w.real, w.imag]
        return {"status": self.status, "witness": w, "method": self.method, **self.detail}


def polynomial_roots(p):
    """Roots with multiplicity (companion matrix, then one Newton pass)."""
    p = p if isinstance(p, TaylorPoly) else TaylorPoly(p)
    deg = p.degree()
    if deg < 0:
        raise ValidationError("the zero polynomial has no root set")
    if deg == 0:
        return []
    c = p.coeffs[: deg + 1]
    roots = npoly.polyroots(c).astype(np.complex128)
    dc = npoly.polyder(c)
    out = []
    for r in roots:
        val, der = npoly.polyval(r, c), npoly.polyval(r, dc)
        if der != 0:
            cand = r - val / der
            if abs(npoly.polyval(cand, c)) < abs(val):
                r = cand
        out.append(complex(r))
    return out


def is_outer_polynomial(p, tol=OUTER_TOL):
    """Polynomial outerness: no root in ``|z| <= 1 - tol``. Boundary roots are allowed."""
    p = p if isinstance(p, TaylorPoly) else TaylorPoly(p)
    if p.degree() < 0:
        raise ValidationError("the zero polynomial is not outer")
    roots = polynomial_roots(p)
    if not roots:
        return OuterVerdict(OUTER, None, "roots", {"min_root_modulus": math.inf})
    inner = min(roots, key=abs)
    if abs(inner) <= 1 - tol:
        return OuterVerdict(NOT_OUTER, inner, "roots", {"min_root_modulus": abs(inner)})
    return OuterVerdict(OUTER, None, "roots", {"min_root_modulus": abs(inner)})


def boundary_values(f, nodes):
    """``f`` on the midpoint grid ``theta_k = 2 pi (k + 1/2) / nodes``."""
    c = f.coeffs
    j = np.arange(c.size)
    twisted = c * np.exp(1j * np.pi * j / nodes)
    bins = np.zeros(nodes, dtype=np.complex128)
    np.add.at(bins, j % nodes, twisted)
    return np.fft.ifft(bins) * nodes


def szego_defect(f, nodes=SZEGO_NODES):
    """Midpoint-rule estimate of ``mean log|f| - log|f(0)|`` on the circle, clamped at 0.

    Returns ``inf`` when ``f(0) = 0``. If ``f`` vanishes exactly at a node the
    node count is bumped by one.
    """
    f = f if isinstance(f, TaylorPoly) else TaylorPoly(f)
    f0 = abs(f.coeffs[0])
    if f0 == 0:
        return math.inf
    for L in (nodes, nodes + 1, nodes + 3):
        vals = np.abs(boundary_values(f, L))
        if np.all(vals > 0):
            break
    else:
        raise DomainError("function vanishes at quadrature nodes")
    mean_log = math.fsum(np.log(vals).tolist()) / L
    return max(0.0, mean_log - math.log(f0))


def recognize_rational(c, max_degree=4, rtol=1e-9):
    """Find low-degree ``P/Q`` (``Q(0) = 1``) reproducing the coefficient list ``c``.

    At least one coefficient beyond the ``deg P + deg Q + 1`` fitted ones must be
    reproduced, so a fit is always checked against unused data.
    """
    c = np.asarray(c, dtype=np.complex128)
    L = c.size
    scale = float(np.max(np.abs(c))) if L else 0.0
    if scale == 0:
        return None
    for total in range(0, 2 * max_degree + 1):
        for dq in range(0, min(total, max_degree) + 1):
            dp = total - dq
            if dp > max_degree or L < dp + dq + 2:
                continue
            rows = np.arange(dp + 1, L)
            if dq:
                A = np.array([[c[i - k] if i - k >= 0 else 0 for k in range(1, dq + 1)] for i in rows])
                q_tail, *_ = np.linalg.lstsq(A, -c[rows], rcond=None)
            else:
                q_tail = np.zeros(0, dtype=np.complex128)
            q = np.concatenate([[1.0 + 0j], q_tail])
            full = np.convolve(c, q)[:L]
            if np.max(np.abs(full[dp + 1 :])) <= rtol * scale * (1 + np.sum(np.abs(q))):
                return TaylorPoly(full[: dp + 1]), TaylorPoly(q)
    return None


def is_outer_series(f, tol=OUTER_TOL, threshold=SZEGO_THRESHOLD, nodes=SZEGO_NODES):
    """Outerness of a truncated power series whose tail is unknown.

    Tries, in order: recognition as a low-degree rational function with poles
    off the closed disk; the two-coefficient case; the Szego defect, where only
    a defect above ten times the threshold is conclusive.
    """
    f = f if isinstance(f, TaylorPoly) else TaylorPoly(f)
    c = f.coeffs
    if c[0] == 0:
        return OuterVerdict(NOT_OUTER, 0j, "vanishes-at-origin")
    fit = recognize_rational(c)
    if fit is not None:
        P, Q = fit
        poles = polynomial_roots(Q)
        if all(abs(r) > 1 + tol for r in poles):
            v = is_outer_polynomial(P, tol)
            v.method = "rational"
            v.detail["numerator"] = [[z.real, z.imag] for z in P.coeffs.tolist()]
            v.detail["denominator"] = [[z.real, z.imag] for z in Q.coeffs.tolist()]
            return v
    if c.size == 2:
        ratio = float(abs(c[1] / c[0]))
        if ratio < 1:
            return OuterVerdict(OUTER, None, "two-term", {"truncation_limited": True, "ratio": ratio})
        return OuterVerdict(INDETERMINATE, None, "two-term", {"truncation_limited": True, "ratio": ratio})
    if c.size == 1:
        return OuterVerdict(OUTER, None, "constant", {"truncation_limited": True})
    d = szego_defect(f, nodes)
    if d > 10 * threshold:
        return OuterVerdict(NOT_OUTER, d, "szego", {"defect": d})
    return OuterVerdict(INDETERMINATE, d, "szego", {"defect": d})


def power_dilation(n, f, cutoff=None):
    """``T_n f = f(z^n)``, truncated at ``cutoff`` (default ``n * degree_max``)."""
    if n < 1:
        raise ValidationError("dilation factor must be positive")
    cutoff = n * f.degree_max if cutoff is None else cutoff
    out = np.zeros(cutoff + 1, dtype=np.complex128)
    j = np.arange(f.degree_max + 1)
    keep = n * j <= cutoff
    out[n * j[keep]] = f.coeffs[keep]
    return TaylorPoly(out)


def shift(f):
    """``S f = z f`` keeping ``degree_max`` (top coefficient dropped)."""
    out = np.zeros_like(f.coeffs)
    out[1:] = f.coeffs[:-1]
    return TaylorPoly(out)


def noor_w(n, f, cutoff=None):
    """``W_n f = (1 + z + ... + z^(n-1)) f(z^n)`` truncated at ``cutoff``."""
    cutoff = n * f.degree_max + n - 1 if cutoff is None else cutoff
    dil = power_dilation(n, f, cutoff).coeffs
    return TaylorPoly(np.convolve(dil, np.ones(n))[: cutoff + 1])


def log_series(kind, m, cutoff):
    """Taylor coefficients of ``log(1 - z^m)`` (``kind="log"``) or ``phi_m`` (``kind="phi"``).

    ``phi_m = log(1 - z^m) - log(1 - z) - log m``.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    c = np.zeros(cutoff + 1, dtype=np.complex128)
    j = np.arange(1, cutoff // m + 1)
    c[m * j] = -1.0 / j
    if kind == "log":
        return TaylorPoly(c)
    if kind != "phi":
        raise ValidationError(f"unknown log series kind {kind!r}")
    i = np.arange(1, cutoff + 1)
    c[1:] += 1.0 / i
    c[0] = -math.log(m)
    return TaylorPoly(c)


def bohr_lift(f, n_max):
    """``a_n = f^(n)`` for ``1 <= n <= min(degree_max, n_max)``; requires ``f(0) = 0``."""
    if f.coeffs[0] != 0:
        raise DomainError("bohr_lift needs f(0) = 0; subtract the constant term first")
    top = min(f.degree_max, n_max)
    n = np.arange(1, top + 1)
    return BohrSeries.from_arrays(n_max, n, f.coeffs[1 : top + 1])


def taylor_to_json(f):
    return {"format": TAYLOR_FORMAT, "degree_max": f.degree_max, "coeffs": [[v.real, v.imag] for v in f.coeffs.tolist()]}


def taylor_from_json(doc):
    if not isinstance(doc, dict):
        raise ValidationError("Taylor document must be a JSON object")
    _check_format(doc.get("format"), TAYLOR_FORMAT)
    deg, coeffs = doc.get("degree_max"), doc.get("coeffs")
    if not isinstance(deg, int) or deg < 0 or not isinstance(coeffs, list):
        raise ValidationError("Taylor document needs integer 'degree_max' and list 'coeffs'")
    if len(coeffs) != deg + 1:
        raise ValidationError(f"expected {deg + 1} coefficients, got {len(coeffs)}")
    try:
        vals = [complex(float(r), float(i)) for r, i in coeffs]
    except (TypeError, ValueError):
        raise ValidationError("each Taylor coefficient must be a [re, im] pair") from None
    return TaylorPoly(vals)


def read_taylor(path):
    return taylor_from_json(load_json(path))


def write_taylor(f, path):
    Path(path).write_text(json.dumps(taylor_to_json(f)) + "\n")
