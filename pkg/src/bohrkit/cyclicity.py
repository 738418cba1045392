"""Rule-based cyclicity decisions with certificates.

Rule identifiers are a stable public contract:

R1  a zero inside the polydisk (non-cyclic)
R2  totally multiplicative coefficients, i.e. a reproducing kernel (cyclic)
R3  multiplicative coefficients: cyclic iff every prime factor series is outer
R4  S-multiplicative coefficients: cyclic iff the factors at primes of S are outer
R5  partition-multiplicative coefficients: cyclic iff every block factor is
R6  division by a reproducing kernel does not change cyclicity
R7  a one-variable polynomial factor q: cyclic iff q is outer and the cofactor is
R8  finitely many variables and finite support: cyclic iff zero-free
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .arith import table_for
from .disk import (
    NOT_OUTER,
    OUTER,
    OUTER_TOL,
    SZEGO_NODES,
    SZEGO_THRESHOLD,
    TaylorPoly,
    is_outer_polynomial,
    is_outer_series,
    polynomial_roots,
)
from .errors import DomainError, PreconditionError, ValidationError
from .series import (
    BohrSeries,
    Point,
    dirichlet_multiply,
    evaluate,
    kernel_inverse,
    kernel_norm,
    reciprocal_kernel_inverse,
)
from .structure import (
    PrimePartition,
    classify,
    delta_multiplicative,
    multiplicative,
    partition_factorize,
    prime_factor_series,
    s_multiplicative,
    totally,
    variable_support,
)

CYCLIC = "Cyclic"
NOT_CYCLIC = "NotCyclic"
UNKNOWN = "Unknown"

RECIPROCAL_PRIMES = "reciprocal-primes"


@dataclass
class EngineConfig:
    zero_tol: float = 1e-10
    class_tol: float = 1e-10
    outer_tol: float = OUTER_TOL
    szego_threshold: float = SZEGO_THRESHOLD
    szego_nodes: int = SZEGO_NODES
    search_budget: int = 2**15
    poly_max_terms: int = 64
    max_factor_degree: int = 4
    sweep_points: int = 4096
    boundary_margin: float = 1e-6
    seed: int = 0
    max_depth: int = 32


@dataclass
class Hints:
    """Optional knowledge about ``F``; every hint is re-verified before use.

    ``kernel`` is either :data:`RECIPROCAL_PRIMES` or a :class:`Point`; it asks
    the engine to divide by that reproducing kernel before anything else.
    """

    partition: PrimePartition | None = None
    S: frozenset | None = None
    zeros: list = field(default_factory=list)
    kernel: object = None


@dataclass
class Step:
    rule: str
    inputs: dict
    conclusion: str

    def to_json(self):
        return {"rule": self.rule, "inputs": _jsonable(self.inputs), "conclusion": self.conclusion}


@dataclass
class CyclicityVerdict:
    status: str
    trace: list
    certificate: dict = field(default_factory=dict)

    @property
    def rules(self):
        return [s.rule for s in self.trace]

    def to_json(self):
        return {
            "status": self.status,
            "trace": [s.to_json() for s in self.trace],
            "certificate": _jsonable(self.certificate),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Point):
        return obj.to_list()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


@dataclass
class ZeroSearchResult:
    point: Point | None
    value: complex
    best_point: Point
    min_modulus: float
    seeds: int

    @property
    def found(self):
        return self.point is not None


# --- zero search -----------------------------------------------------------------


class _Poly:
    """Fast evaluator for a finite-support series in a few variables."""

    def __init__(self, F, positions):
        t = table_for(F.n_max)
        self.positions = list(positions)
        col = {j: i for i, j in enumerate(self.positions)}
        E = np.zeros((len(F), len(self.positions)), dtype=np.int64)
        for r, n in enumerate(F.indices.tolist()):
            for p, e in t.factorize(n):
                j = int(t.position[p])
                if j not in col:
                    raise PreconditionError(f"series depends on variable {j} outside the search set")
                E[r, col[j]] = e
        self.E = E
        self.c = F.values.copy()

    def __call__(self, lam):
        """``lam`` has shape (..., k)."""
        lam = np.asarray(lam, dtype=np.complex128)
        pw = np.prod(lam[..., None, :] ** self.E, axis=-1)
        return pw @ self.c

    def grad(self, lam):
        lam = np.asarray(lam, dtype=np.complex128)
        out = np.zeros(len(self.positions), dtype=np.complex128)
        for j in range(len(self.positions)):
            m = self.E[:, j] > 0
            if not m.any():
                continue
            ex = self.E[m].copy()
            ex[:, j] -= 1
            out[j] = np.sum(self.c[m] * self.E[m, j] * np.prod(lam**ex, axis=-1))
        return out


def _seed_grid(k, budget, seed):
    radii = np.array([0.2, 0.5, 0.8, 0.95])
    angles = 2 * np.pi * (np.arange(8) + 0.5) / 8
    per_var = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    total = per_var.size**k
    if total <= budget:
        grids = np.meshgrid(*([per_var] * k), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, per_var.size, size=(budget, k))
    return per_var[picks]


def _to_disk(u, k):
    w = u[:k] + 1j * u[k:]
    return w / np.sqrt(1 + np.abs(w) ** 2)


def _from_disk(lam):
    w = lam / np.sqrt(1 - np.abs(lam) ** 2)
    return np.concatenate([w.real, w.imag])


def zero_search(F, k=None, budget=2**15, zero_tol=1e-10, seed=0, margin=1e-6, starts=16):
    """Look for a zero of a finite-support ``F`` inside the polydisk.

    Seeds on a radial/angular grid (32 points per variable), descends from the
    best seeds with least squares on ``(Re F, Im F)``, then polishes with
    Newton steps in the most sensitive variable. A returned point satisfies
    ``|F| <= zero_tol`` and ``|lambda_j| <= 1 - margin``. Failure to find a
    zero proves nothing.
    """
    if F.is_zero():
        raise ValidationError("the zero series vanishes everywhere")
    t = table_for(F.n_max)
    support = [int(t.position[p]) for p in variable_support(F)]
    if k is not None and any(j > k for j in support):
        raise PreconditionError(f"series depends on variables beyond the first {k}")
    if not support:
        a1 = F[1]
        return ZeroSearchResult(None, a1, Point(), abs(a1), 1)
    poly = _Poly(F, support)
    kk = len(support)
    seeds = _seed_grid(kk, budget, seed)
    vals = np.concatenate([np.abs(poly(seeds[i : i + 4096])) for i in range(0, len(seeds), 4096)])
    keys = sorted(range(len(seeds)), key=lambda i: (vals[i], tuple(seeds[i].real), tuple(seeds[i].imag)))

    def resid(u):
        v = poly(_to_disk(u, kk))
        return np.array([v.real, v.imag])

    cands = []
    for i in keys[:starts]:
        sol = least_squares(resid, _from_disk(seeds[i]), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200 * (kk + 1))
        lam = _to_disk(sol.x, kk)
        lam = _polish(poly, lam, margin)
        cands.append((float(abs(poly(lam))), tuple(lam.real), tuple(lam.imag), lam))
    cands.sort(key=lambda c: c[:3])
    best_val, best = cands[0][0], cands[0][3]
    # among genuine zeros keep the one with the smallest kernel norm (strongest bound)
    zeros = [c for c in cands if c[0] <= zero_tol and np.all(np.abs(c[3]) <= 1 - margin)]
    zeros.sort(key=lambda c: (float(np.sum(-np.log1p(-np.abs(c[3]) ** 2))), c[1], c[2]))
    best_pt = Point(dict(zip(support, best)))
    if zeros:
        lam = zeros[0][3]
        pt = Point(dict(zip(support, lam)))
        value, _ = evaluate(F, pt)
        if abs(value) <= zero_tol:
            return ZeroSearchResult(pt, value, pt, abs(value), len(seeds))
    return ZeroSearchResult(None, complex(poly(best)), best_pt, float(best_val), len(seeds))


def _polish(poly, lam, margin):
    lam = lam.copy()
    g = poly.grad(lam)
    j = int(np.argmax(np.abs(g)))
    cur = abs(poly(lam))
    for _ in range(8):
        g = poly.grad(lam)
        if g[j] == 0:
            break
        trial = lam.copy()
        trial[j] -= poly(lam) / g[j]
        val = abs(poly(trial))
        if abs(trial[j]) >= 1 - margin or val >= cur:
            break
        lam, cur = trial, val
    return lam


def noncyclicity_bound(F, zero, zero_tol=1e-10):
    """``1 / ||K_lambda||``: a lower bound for ``inf_p ||1 - pF||`` when ``F(lambda) = 0``.

    For every polynomial ``p``, ``<1 - pF, K_lambda> = 1``, so Cauchy-Schwarz
    gives ``||1 - pF|| >= 1 / ||K_lambda||``.
    """
    if not isinstance(zero, Point):
        zero = Point(zero)
    value, _ = evaluate(F, zero)
    if abs(value) > zero_tol:
        raise PreconditionError(f"|F(zero)| = {abs(value):.3e} exceeds zero_tol = {zero_tol:.1e}")
    return 1.0 / kernel_norm(zero)


# --- kernel stripping ------------------------------------------------------------


def estimate_kernel(F):
    """Guess ``lambda_p`` per prime from the tail ratio of ``a_{p^(k+1)} / a_{p^k}``.

    Returns ``{prime: lambda_p}`` for the nonzero entries, or ``None`` when some
    ratio has modulus ``>= 1``.
    """
    N = F.n_max
    t = table_for(N)
    a = F.to_dense()
    lam = {}
    for p in t.primes[t.primes <= N].tolist():
        chain = [1]
        while chain[-1] * p <= N:
            chain.append(chain[-1] * p)
        vals = a[chain]
        ratio = 0j
        for k in range(len(chain) - 2, -1, -1):
            if vals[k] != 0:
                ratio = vals[k + 1] / vals[k]
                break
        if abs(ratio) >= 1:
            return None
        if ratio != 0:
            lam[p] = complex(ratio).conjugate()
    return lam


def strip_kernel(F, kernel_hint=None, prune=1e-9):
    """Divide ``F`` by a reproducing kernel; returns ``(quotient, description)``.

    The quotient is pruned at ``prune`` relative to its largest coefficient.
    """
    if kernel_hint == RECIPROCAL_PRIMES:
        inv = reciprocal_kernel_inverse(F.n_max)
        desc = {"kernel": RECIPROCAL_PRIMES}
    elif isinstance(kernel_hint, Point):
        inv = kernel_inverse(kernel_hint, F.n_max)
        desc = {"kernel": kernel_hint}
    else:
        lam = estimate_kernel(F)
        if not lam:
            return None, {}
        t = table_for(F.n_max)
        pt = Point({int(t.position[p]): v for p, v in lam.items()})
        inv = kernel_inverse(pt, F.n_max)
        if all(abs(v - 1 / p) <= 1e-12 for p, v in lam.items()) and len(lam) == len(t.primes_upto(F.n_max)):
            desc = {"kernel": RECIPROCAL_PRIMES}
        else:
            shown = dict(list(lam.items())[:8])
            desc = {"kernel": "estimated", "primes": len(lam), "leading": shown}
    Q = dirichlet_multiply(F, inv)
    top = float(np.max(np.abs(Q.values))) if len(Q) else 0.0
    return Q.pruned(prune * top), desc


# --- univariate factors ----------------------------------------------------------


def univariate_factor(F, p, max_degree=4, tol=1e-10, min_evidence=8):
    """Try ``F = q(zeta_p) * G`` with ``q`` a polynomial, ``q(0) = 1`` and ``G`` free of ``zeta_p``.

    Returns ``(q, G)`` with ``deg q >= 1`` or ``None``. For series with many
    terms each checked slice must rest on at least ``min_evidence`` nonzero
    coefficients of ``G``.
    """
    N = F.n_max
    idx, vals = F.indices, F.values
    v = np.zeros(idx.size, dtype=np.int64)
    m = idx.copy()
    while True:
        hit = m % p == 0
        if not hit.any():
            break
        v[hit] += 1
        m[hit] //= p
    base = v == 0
    g_idx, g_val = m[base], vals[base]
    if g_idx.size == 0:
        return None
    sparse = len(F) <= 64
    fnorm = float(np.linalg.norm(vals))
    q = [1.0 + 0j]
    kmax = int(v.max())
    for k in range(1, kmax + 1):
        window = N // p**k
        sel = v == k
        h_idx, h_val = m[sel], vals[sel]
        gw = g_idx <= window
        gi, gv = g_idx[gw], g_val[gw]
        denom = float(np.vdot(gv, gv).real)
        if denom == 0:
            return None
        if not sparse and gi.size < min_evidence:
            return None
        pos = np.searchsorted(gi, h_idx)
        if np.any(pos >= gi.size) or np.any(gi[np.minimum(pos, gi.size - 1)] != h_idx):
            return None
        aligned = np.zeros_like(gv)
        aligned[pos] = h_val
        qk = np.vdot(gv, aligned) / denom
        if np.linalg.norm(aligned - qk * gv) > tol * max(fnorm, 1e-300):
            return None
        q.append(complex(qk))
    while len(q) > 1 and abs(q[-1]) <= tol:
        q.pop()
    if len(q) < 2 or len(q) - 1 > max_degree:
        return None
    a1 = F[1]
    G = BohrSeries.from_arrays(N, g_idx, g_val)
    return TaylorPoly(np.array(q) * a1), G.scaled(1 / a1)


# --- polynomial certificates -----------------------------------------------------


def _variable_terms(F):
    """Exponent dict ``{(e_1, ..., e_k): coeff}`` over the support variables."""
    t = table_for(F.n_max)
    primes = variable_support(F)
    terms = {}
    for n, c in F:
        fac = dict(t.factorize(n))
        terms[tuple(fac.get(p, 0) for p in primes)] = c
    return primes, terms


def bilinear_certificate(F):
    """Exact zero-freeness test for ``a + b x + c y + d x y`` on the open bidisk.

    Returns ``None`` when ``F`` is not of that shape, otherwise a dict with
    ``zero_free`` and either the minimum of ``|a+bx|^2 - |c+dx|^2`` over the
    closed disk or an explicit zero.
    """
    primes, terms = _variable_terms(F)
    if len(primes) != 2 or any(max(e) > 1 for e in terms):
        return None
    a, b = terms.get((0, 0), 0j), terms.get((1, 0), 0j)
    c, d = terms.get((0, 1), 0j), terms.get((1, 1), 0j)
    A = abs(b) ** 2 - abs(d) ** 2
    B = a.conjugate() * b - c.conjugate() * d
    C = abs(a) ** 2 - abs(c) ** 2
    r_star = abs(B) / A if A > 0 else math.inf
    if r_star <= 1:
        r, phi_min = r_star, C - abs(B) ** 2 / A
    else:
        r, phi_min = (0.0, C) if C <= A + C - 2 * abs(B) else (1.0, A + C - 2 * abs(B))
    scale = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    # common root of a + b x and c + d x inside the disk gives a whole line of zeros
    common = None
    if b != 0 and abs(a / b) < 1 and abs(c * b - d * a) <= 1e-14 * scale:
        common = -a / b
    elif b == 0 and a == 0 and (d == 0 and c == 0 or d != 0 and abs(c / d) < 1):
        common = 0j if d == 0 else -c / d
    out = {"variables": primes, "phi_min": phi_min, "shape": "bilinear"}
    if common is not None:
        out.update(zero_free=False, zero=(complex(common), 0j))
        return out
    if phi_min >= -1e-13 * scale:
        out["zero_free"] = True
        return out
    x = -r * np.exp(1j * np.angle(B)) if B != 0 else r
    x = complex(x) * (1 - 1e-9)
    y = -(a + b * x) / (c + d * x)
    out.update(zero_free=False, zero=(x, complex(y)))
    return out


def quadratic_sweep_certificate(F, points=4096, margin=1e-9):
    """Zero-freeness on the closed bidisk for two-variable, total-degree-2 polynomials.

    Checks that ``F(x, 0)`` has no root in the closed disk and that for every
    sampled ``|x| = 1`` the roots in ``y`` lie outside it, which together rule
    out zeros in the closed bidisk. The boundary is sampled, so the result
    carries the smallest root modulus seen.
    """
    primes, terms = _variable_terms(F)
    if len(primes) != 2 or any(sum(e) > 2 for e in terms):
        return None
    fx0 = np.zeros(3, dtype=np.complex128)
    for (ex, ey), c in terms.items():
        if ey == 0:
            fx0[ex] += c
    if not np.any(fx0):
        return {"variables": primes, "zero_free": False, "shape": "quadratic", "reason": "F(x, 0) vanishes identically"}
    r0 = polynomial_roots(TaylorPoly(fx0))
    m0 = min((abs(r) for r in r0), default=math.inf)
    xs = np.exp(2j * np.pi * (np.arange(points) + 0.5) / points)
    cy = np.zeros((points, 3), dtype=np.complex128)
    for (ex, ey), c in terms.items():
        cy[:, ey] += c * xs**ex
    m1 = math.inf
    for row in cy:
        if not np.any(row):
            m1 = 0.0
            break
        rts = polynomial_roots(TaylorPoly(row))
        if rts:
            m1 = min(m1, min(abs(r) for r in rts))
    ok = m0 >= 1 + margin and m1 >= 1 + margin
    return {
        "variables": primes,
        "shape": "quadratic",
        "zero_free": ok,
        "min_root_modulus_at_y0": m0,
        "min_root_modulus_on_boundary": m1,
        "sampled_points": points,
    }


# --- the cascade -----------------------------------------------------------------


class _Ctx:
    def __init__(self, cfg, hints):
        self.cfg = cfg
        self.hints = hints


def _zero_cert(F, zero, cfg, where):
    value, _ = evaluate(F, zero)
    if abs(value) > cfg.zero_tol:
        return None
    return {"zero": zero, "value": value, "bound": 1.0 / kernel_norm(zero), "evaluated_on": where}


def decide(F, hints=None, config=None):
    """Decide cyclicity of ``F``, returning a verdict with a rule trace.

    Raises
    ------
    ValidationError
        For the zero series.
    """
    if F.is_zero():
        raise ValidationError("the zero series is not cyclic and has no verdict")
    cfg = config or EngineConfig()
    hints = hints or Hints()
    ctx = _Ctx(cfg, hints)
    status, trace, cert = _decide(F, ctx, list(hints.zeros), hints.kernel, 0, "input")
    return CyclicityVerdict(status, trace, cert)


def _decide(F, ctx, zeros, kernel_hint, depth, where):
    cfg = ctx.cfg
    trace = []
    if depth > cfg.max_depth:
        step = Step("R8", {"reason": "recursion depth exceeded"}, UNKNOWN)
        return UNKNOWN, [step], {"blocking": step}

    # R1 with supplied zeros
    deferred = []
    for z in zeros:
        cert = _zero_cert(F, z, cfg, where)
        if cert:
            trace.append(Step("R1", {"zero": z, "source": "hint"}, NOT_CYCLIC))
            return NOT_CYCLIC, trace, cert
        deferred.append(z)

    a1 = F[1]
    if a1 == 0:
        cert = {"zero": Point(), "value": 0j, "bound": 1.0, "evaluated_on": where}
        trace.append(Step("R1", {"zero": Point(), "source": "constant term"}, NOT_CYCLIC))
        return NOT_CYCLIC, trace, cert

    if kernel_hint is not None:
        return _r6(F, ctx, deferred, kernel_hint, depth, trace)

    rep = classify(F, totally(), cfg.class_tol)
    if rep.holds:
        trace.append(Step("R2", {"checked_pairs": rep.checked_pairs, "terms": len(F)}, CYCLIC))
        return CYCLIC, trace, {"kernel_scale": rep.scale}

    sparse = len(F) <= cfg.poly_max_terms
    if not sparse:
        Q, desc = strip_kernel(F)
        if Q is not None and len(Q) <= cfg.poly_max_terms and Q[1] != 0:
            return _r6(F, ctx, deferred, None, depth, trace, pre=(Q, desc))

    blocking = None

    out = _r7(F, ctx, deferred, depth, trace, where)
    if out is not None:
        return out

    if deferred:
        step = Step("R1", {"zeros": deferred, "reason": "hint does not vanish within zero_tol"}, UNKNOWN)
        trace.append(step)
        blocking = blocking or step

    for rule in (_r3, _r4, _r5):
        out = rule(F, ctx, depth, trace, where)
        if out is None:
            continue
        if out[0] != UNKNOWN:
            return out
        blocking = blocking or out[2].get("blocking")

    if sparse:
        out = _r8(F, ctx, trace, where)
        if out[0] != UNKNOWN:
            return out
        blocking = blocking or out[2].get("blocking")
        return UNKNOWN, trace, {**out[2], "blocking": blocking}

    if blocking is None:
        blocking = Step("R8", {"reason": "no rule applies", "terms": len(F)}, UNKNOWN)
        trace.append(blocking)
    return UNKNOWN, trace, {"blocking": blocking}


def _r6(F, ctx, zeros, kernel_hint, depth, trace, pre=None):
    Q, desc = pre if pre else strip_kernel(F, kernel_hint)
    if Q is None or Q.is_zero():
        step = Step("R6", {"reason": "kernel division failed"}, UNKNOWN)
        trace.append(step)
        return UNKNOWN, trace, {"blocking": step}
    trace.append(Step("R6", {**desc, "quotient_terms": len(Q)}, "divided"))
    status, sub, cert = _decide(Q, ctx, zeros, None, depth + 1, "kernel quotient")
    trace.extend(sub)
    if status == CYCLIC:
        trace.append(Step("R2", {"factor": "stripped kernel"}, CYCLIC))
    cert = dict(cert)
    cert["quotient"] = {int(n): v for n, v in Q}
    return status, trace, cert


def _r7(F, ctx, zeros, depth, trace, where):
    cfg = ctx.cfg
    t = table_for(F.n_max)
    for p in variable_support(F):
        got = univariate_factor(F, p, cfg.max_factor_degree, cfg.class_tol)
        if got is None:
            continue
        q, G = got
        verdict = is_outer_polynomial(q, cfg.outer_tol)
        j = int(t.position[p])
        info = {"variable": j, "prime": p, "factor": q.coeffs.tolist(), "outer": verdict.status}
        if verdict.status == NOT_OUTER:
            trace.append(Step("R7", info, NOT_CYCLIC))
            root = complex(verdict.witness)
            cert = {"factor_witness": verdict}
            zc = _zero_cert(F, Point({j: root}), cfg, where) if abs(root) < 1 else None
            if zc:
                cert.update(zc)
            return NOT_CYCLIC, trace, cert
        trace.append(Step("R7", info, "outer factor"))
        status, sub, cert = _decide(G, ctx, zeros, None, depth + 1, "cofactor")
        trace.extend(sub)
        return status, trace, cert
    return None


def _factor_outerness(F, primes, ctx):
    cfg = ctx.cfg
    verdicts = {}
    for p in primes:
        f = prime_factor_series(F, p)
        verdicts[p] = is_outer_series(f, cfg.outer_tol, cfg.szego_threshold, cfg.szego_nodes)
    return verdicts


def _summarize(rule, verdicts, extra):
    bad = [p for p, v in verdicts.items() if v.status == NOT_OUTER]
    unsure = [p for p, v in verdicts.items() if v.status not in (OUTER, NOT_OUTER)]
    limited = [p for p, v in verdicts.items() if v.detail.get("truncation_limited")]
    info = {**extra, "primes_checked": len(verdicts), "truncation_limited": len(limited)}
    if bad:
        p = bad[0]
        step = Step(rule, {**info, "not_outer": p}, NOT_CYCLIC)
        return NOT_CYCLIC, step, {"factor_witness": {"prime": p, **verdicts[p].to_json()}}
    if unsure:
        step = Step(rule, {**info, "indeterminate": unsure[:10]}, UNKNOWN)
        return UNKNOWN, step, {"blocking": step}
    return CYCLIC, Step(rule, info, CYCLIC), {"factors": {p: v.method for p, v in list(verdicts.items())[:20]}}


def _r3(F, ctx, depth, trace, where):
    rep = classify(F, multiplicative(), ctx.cfg.class_tol)
    if not rep.holds:
        return None
    verdicts = _factor_outerness(F, variable_support(F), ctx)
    status, step, cert = _summarize("R3", verdicts, {"class": "Multiplicative"})
    if status == NOT_CYCLIC:
        _attach_prime_zero(F, cert, ctx, where)
    trace.append(step)
    return status, trace, cert


def _r4(F, ctx, depth, trace, where):
    S = ctx.hints.S
    if S is None:
        return None
    rep = classify(F, s_multiplicative(S), ctx.cfg.class_tol)
    if not rep.holds:
        step = Step("R4", {"S": sorted(S), "violations": rep.violations[:5]}, UNKNOWN)
        trace.append(step)
        return UNKNOWN, trace, {"blocking": step}
    primes = [p for p in variable_support(F) if p in S]
    verdicts = _factor_outerness(F, primes, ctx)
    status, step, cert = _summarize("R4", verdicts, {"S": sorted(S)})
    if status == NOT_CYCLIC:
        _attach_prime_zero(F, cert, ctx, where)
    trace.append(step)
    return status, trace, cert


def _attach_prime_zero(F, cert, ctx, where):
    w = cert["factor_witness"]
    wit = w.get("witness")
    if w.get("method") in ("rational", "roots") and isinstance(wit, list):
        root = complex(*wit)
        j = int(table_for(F.n_max).position[w["prime"]])
        if abs(root) < 1:
            zc = _zero_cert(F, Point({j: root}), ctx.cfg, where)
            if zc:
                cert.update(zc)


def _r5(F, ctx, depth, trace, where):
    part = ctx.hints.partition
    if part is None:
        return None
    rep = classify(F, delta_multiplicative(part), ctx.cfg.class_tol)
    if not rep.holds:
        step = Step("R5", {"partition": part.to_json(), "violations": rep.violations[:5]}, UNKNOWN)
        trace.append(step)
        return UNKNOWN, trace, {"blocking": step}
    factors = partition_factorize(F, part, ctx.cfg.class_tol)
    trace.append(Step("R5", {"partition": part.to_json(), "factors": len(factors)}, "factorized"))
    status = CYCLIC
    cert, blocking = {}, None
    for G in factors:
        sub_primes = variable_support(G)
        if len(sub_primes) == 1 and len(G) > ctx.cfg.poly_max_terms:
            v = is_outer_series(prime_factor_series(G, sub_primes[0]), ctx.cfg.outer_tol)
            s = {OUTER: CYCLIC, NOT_OUTER: NOT_CYCLIC}.get(v.status, UNKNOWN)
            step = Step("R5", {"block": sub_primes, "outer": v.status, "method": v.method}, s)
            sub, c = [step], ({"factor_witness": v} if s == NOT_CYCLIC else {"blocking": step} if s == UNKNOWN else {})
        else:
            s, sub, c = _decide(G, ctx, [], None, depth + 1, "block factor")
        trace.extend(sub)
        if s == NOT_CYCLIC:
            return NOT_CYCLIC, trace, c
        if s == UNKNOWN:
            status = UNKNOWN
            blocking = blocking or c.get("blocking")
    if status == UNKNOWN:
        cert["blocking"] = blocking
    return status, trace, cert


def _r8(F, ctx, trace, where):
    cfg = ctx.cfg
    res = zero_search(F, None, cfg.search_budget, cfg.zero_tol, cfg.seed, cfg.boundary_margin)
    if res.found:
        trace.append(Step("R8", {"search": "zero found", "seeds": res.seeds}, "zero found"))
        trace.append(Step("R1", {"zero": res.point, "source": "search"}, NOT_CYCLIC))
        return NOT_CYCLIC, trace, _zero_cert(F, res.point, cfg, where)
    for test in (bilinear_certificate, quadratic_sweep_certificate):
        c = test(F) if test is bilinear_certificate else test(F, cfg.sweep_points)
        if c is None:
            continue
        if c["zero_free"]:
            trace.append(Step("R8", {"certificate": c["shape"]}, CYCLIC))
            return CYCLIC, trace, {"no_zero": c}
        if "zero" in c:
            t = table_for(F.n_max)
            j1, j2 = (int(t.position[p]) for p in c["variables"])
            zc = _zero_cert(F, Point({j1: c["zero"][0], j2: c["zero"][1]}), cfg, where)
            if zc:
                trace.append(Step("R8", {"certificate": c["shape"]}, "zero found"))
                trace.append(Step("R1", {"zero": zc["zero"], "source": "certificate"}, NOT_CYCLIC))
                return NOT_CYCLIC, trace, zc
    step = Step("R8", {"search": "no zero found", "min_modulus": res.min_modulus, "best_point": res.best_point}, UNKNOWN)
    trace.append(step)
    return UNKNOWN, trace, {"blocking": step, "min_modulus": res.min_modulus}


def replay(F, verdict, hints=None, config=None):
    """Re-run the decision and check that status and rule sequence match."""
    again = decide(F, hints, config)
    return again.status == verdict.status and again.rules == verdict.rules
