"""Dilation completeness experiments: indicator functions, Noor's operators, and ingestion of L^2(0,1) data.

A function on ``(0, 1)``, extended to be odd and 2-periodic, has sine coefficients
``a_n = <psi, sqrt(2) sin(n pi x)>``. Its dilation system is complete exactly
when the series ``sum a_n zeta^alpha(n)`` is cyclic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy.fft

from .arith import table_for
from .cyclicity import RECIPROCAL_PRIMES, Hints, decide
from .delta import delta_sweep
from .disk import TaylorPoly, noor_w, power_dilation, shift
from .errors import ValidationError
from .series import (
    BohrSeries,
    _check_format,
    dirichlet_multiply,
    linear_combine,
    load_json,
    reciprocal_kernel,
    reciprocal_kernel_inverse,
    series_from_json,
    series_to_json,
)

FIXTURE_FORMAT = "kozlov-fixture/1"
SQRT2_PI = math.sqrt(2) / math.pi
# G_theta is displayed as -(1 / (sqrt(2) pi)) times an integer polynomial
DISPLAY_SCALE = -1 / (math.sqrt(2) * math.pi)


def as_theta(theta):
    """Accept ``Fraction``, ``int``, ``"a/b"`` strings or floats; validate ``0 < theta <= 1``."""
    if isinstance(theta, str):
        try:
            theta = Fraction(theta)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"bad theta literal {theta!r}") from None
    elif isinstance(theta, int):
        theta = Fraction(theta)
    if not 0 < theta <= 1:
        raise ValidationError(f"theta must lie in (0, 1], got {theta}")
    return theta


def cos_pi_multiples(x, n):
    """``cos(n x pi)`` for integer array ``n``.

    For rational ``x`` the angle is reduced modulo ``2 pi`` exactly and the
    values 0, +-1/2, +-1 are produced without rounding.
    """
    n = np.asarray(n, dtype=np.int64)
    if not isinstance(x, Fraction):
        return np.cos(np.pi * (n * float(x) % 2.0))
    p, q = x.numerator, x.denominator
    r = (n * p) % (2 * q)
    r = np.where(r > q, 2 * q - r, r)
    out = np.cos(np.pi * r / q)
    out[r == 0] = 1.0
    out[r == q] = -1.0
    out[2 * r == q] = 0.0
    out[3 * r == q] = 0.5
    out[3 * r == 2 * q] = -0.5
    return out


def kozlov_F(theta, n_max):
    """``a_n = (sqrt 2 / pi) (1 - cos(n theta pi)) / n``."""
    theta = as_theta(theta)
    n = np.arange(1, n_max + 1)
    return BohrSeries.from_arrays(n_max, n, SQRT2_PI * (1 - cos_pi_multiples(theta, n)) / n)


def kozlov_G(theta, n_max):
    """Closed form of ``F_theta / K_p``, summing ``mu(k) cos((n/k) theta pi)`` over divisors.

    ``a_1 = (sqrt 2/pi)(1 - cos theta pi)`` and, for ``n >= 2``,
    ``a_n = -(sqrt 2/pi)(1/n) sum_{k | n} mu(k) cos((n/k) theta pi)``.
    """
    theta = as_theta(theta)
    mu = table_for(n_max).mobius_array(n_max)
    c = cos_pi_multiples(theta, np.arange(n_max + 1))
    acc = np.zeros(n_max + 1)
    for k in np.flatnonzero(mu).tolist():
        m = n_max // k
        acc[k : k * m + 1 : k] += mu[k] * c[1 : m + 1]
    n = np.arange(1, n_max + 1)
    vals = -SQRT2_PI * acc[1:] / n
    vals[0] = SQRT2_PI * (1 - c[1])
    return BohrSeries.from_arrays(n_max, n, vals)


def kozlov_G_by_division(theta, n_max):
    """``F_theta`` times ``sum mu(n)/n zeta^alpha(n)`` by Dirichlet convolution."""
    return dirichlet_multiply(kozlov_F(theta, n_max), reciprocal_kernel_inverse(n_max))


@dataclass
class KozlovPair:
    theta: object
    F: BohrSeries
    G: BohrSeries

    def residual(self):
        """``max |G K_p - F|`` on the common truncation."""
        return dirichlet_multiply(self.G, reciprocal_kernel(self.G.n_max)).max_abs_diff(self.F)

    def to_json(self):
        th = Fraction(self.theta) if isinstance(self.theta, Fraction) else self.theta
        return {
            "format": FIXTURE_FORMAT,
            "theta": [th.numerator, th.denominator] if isinstance(th, Fraction) else float(th),
            "scale": DISPLAY_SCALE,
            "F": series_to_json(self.F),
            "G": series_to_json(self.G),
        }


def kozlov_pair(theta, n_max):
    theta = as_theta(theta)
    return KozlovPair(theta, kozlov_F(theta, n_max), kozlov_G(theta, n_max))


def fixture_path(root, theta):
    theta = as_theta(theta)
    if not isinstance(theta, Fraction):
        raise ValidationError("fixtures are named by rational theta")
    return Path(root) / "kozlov" / f"theta_{theta.numerator}_{theta.denominator}.json"


def write_fixture(pair, root):
    path = fixture_path(root, pair.theta)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(pair.to_json(), separators=(",", ":")) + "\n")
    return path


def read_fixture(path):
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise ValidationError("fixture must be a JSON object")
    _check_format(doc.get("format"), FIXTURE_FORMAT)
    th = doc.get("theta")
    theta = Fraction(th[0], th[1]) if isinstance(th, list) else float(th)
    return KozlovPair(theta, series_from_json(doc["F"]), series_from_json(doc["G"]))


def kozlov_decide(theta, n_max, config=None):
    """Decide cyclicity of ``F_theta`` after dividing out ``K_p``."""
    return decide(kozlov_F(theta, n_max), Hints(kernel=RECIPROCAL_PRIMES), config)


def finite_support_evidence(G, prime_bound):
    """``(p, |G_p|)`` for each prime ``p <= prime_bound`` (within the truncation)."""
    t = table_for(max(prime_bound, 2))
    return [(p, abs(G[p])) for p in t.primes_upto(min(prime_bound, G.n_max))]


def prime_coefficient(theta, p):
    """Closed form ``(sqrt 2/pi)(1/p)|cos(p theta pi) - cos(theta pi)|`` of ``|G_p|``."""
    theta = as_theta(theta)
    c = cos_pi_multiples(theta, np.array([1, p]))
    return SQRT2_PI * abs(c[1] - c[0]) / p


def indicator_sine_coeffs(theta, n_max):
    """Sine coefficients of the indicator of ``(0, theta)``, through piecewise ingestion."""
    theta = as_theta(theta)
    brk = [Fraction(0), theta, Fraction(1)] if isinstance(theta, Fraction) else [0.0, float(theta), 1.0]
    return ingest_piecewise(brk, [1.0, 0.0], n_max)


def ingest_piecewise(breakpoints, values, n_max):
    """Exact sine coefficients of a step function: ``values[i]`` on ``[breakpoints[i], breakpoints[i+1]]``.

    Each piece contributes ``sqrt(2) v (cos(n pi x0) - cos(n pi x1)) / (n pi)``.
    """
    if len(breakpoints) != len(values) + 1:
        raise ValidationError("need one more breakpoint than values")
    if list(breakpoints) != sorted(breakpoints) or breakpoints[0] < 0 or breakpoints[-1] > 1:
        raise ValidationError("breakpoints must increase within [0, 1]")
    n = np.arange(1, n_max + 1)
    acc = np.zeros(n_max)
    cs = [cos_pi_multiples(Fraction(b) if isinstance(b, (int, Fraction)) else b, n) for b in breakpoints]
    for i, v in enumerate(values):
        if v:
            acc += v * (cs[i] - cs[i + 1])
    return BohrSeries.from_arrays(n_max, n, math.sqrt(2) * acc / (n * math.pi))


def midpoint_grid(nodes):
    return (np.arange(nodes) + 0.5) / nodes


def ingest_samples(samples, n_max):
    """Composite-midpoint sine coefficients from samples at ``(i + 1/2) / L``.

    ``L = len(samples)`` must be at least ``4 n_max``.
    """
    y = np.asarray(samples, dtype=float)
    L = y.size
    if L < 4 * n_max:
        raise ValidationError(f"aliasing: {L} nodes is below 4 * n_max = {4 * n_max}")
    coef = scipy.fft.dst(y, type=2)[:n_max] / (math.sqrt(2) * L)
    return BohrSeries.from_arrays(n_max, np.arange(1, n_max + 1), coef)


def ingest_odd_periodic(psi, n_max, nodes=None, breakpoints=None, values=None):
    """Sine coefficients of ``psi`` on ``(0, 1)``.

    With ``breakpoints`` and ``values`` the step-function closed form is used;
    otherwise ``psi`` (a callable or an array of midpoint samples) goes through
    the midpoint rule on ``nodes`` points (default ``8 n_max``).
    """
    if breakpoints is not None:
        return ingest_piecewise(breakpoints, values, n_max)
    if callable(psi):
        L = nodes or 8 * n_max
        return ingest_samples(psi(midpoint_grid(L)), n_max)
    return ingest_samples(psi, n_max)


def noor_series(m, n_max):
    """``b_n = (1 - m [m | n]) / n``."""
    if m < 2:
        raise ValidationError("m must be at least 2")
    n = np.arange(1, n_max + 1)
    b = (1.0 - m * (n % m == 0)) / n
    return BohrSeries.from_arrays(n_max, n, b)


def noor_factorization_error(m, n_max):
    """``max |b - (zeta^alpha(m) - 1)(-K_p)|``: the built series against its factorization."""
    left = linear_combine([(1, BohrSeries.monomial(m, n_max)), (-1, BohrSeries.unit(n_max))])
    prod = dirichlet_multiply(left, reciprocal_kernel(n_max).scaled(-1))
    return prod.max_abs_diff(noor_series(m, n_max))


def noor_experiment(m, N_list, M):
    """Build ``b`` for ``m``, check its factorization and the intertwining identity, then sweep."""
    err = noor_factorization_error(m, M)
    rows = delta_sweep(noor_series(m, M), N_list, M)
    return {"m": m, "factorization_error": err, "intertwining_defect": intertwining_defect(), "rows": rows}


def intertwining_defect(j_max=50, n_max=10):
    """Largest coefficient gap in ``T_n (I - S) z^j = (I - S) W_n z^j`` over the grid."""
    worst = 0.0
    for n in range(1, n_max + 1):
        for j in range(j_max + 1):
            cutoff = n * (j + 1)
            zj = TaylorPoly.monomial(j, j + 1)
            left = power_dilation(n, zj - shift(zj), cutoff)
            w = noor_w(n, zj, cutoff)
            right = w - shift(w)
            worst = max(worst, float(np.max(np.abs(left.coeffs - right.coeffs))))
    return worst
