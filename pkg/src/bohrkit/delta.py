"""Least-squares estimate of the distance ``inf_p ||1 - pF||`` over a finite dictionary.

The dictionary is a set of monomials ``zeta^alpha(k)``; multiplying ``F`` by
``zeta^alpha(k)`` shifts its coefficients onto the multiples of ``k``, so the
design matrix has entry ``a_{n/k}`` at row ``n`` and column ``k`` when ``k | n``.
Only rows ``n <= M`` are kept, which makes the estimate window-dependent.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import SolverError, ValidationError


@dataclass
class DeltaEstimate:
    N: int
    M: int
    value: float
    coefficients: np.ndarray = field(repr=False)
    dictionary: np.ndarray = field(repr=False)
    rank: int = 0
    cond: float = 1.0

    def to_json(self):
        return {"N": self.N, "M": self.M, "delta_hat": self.value, "rank": self.rank, "cond": self.cond}


def design_matrix(F, M, dictionary):
    """Dense ``M x len(dictionary)`` matrix whose column ``k`` holds ``zeta^alpha(k) F`` up to ``M``."""
    real = F.is_real()
    a = F.to_dense(M)
    a = a.real if real else a
    A = np.zeros((M, len(dictionary)), dtype=a.dtype)
    for col, k in enumerate(dictionary):
        m = M // k
        A[k - 1 : k * m : k, col] = a[1 : m + 1]
    return A


def _dictionary(N, M, dictionary):
    if dictionary is None:
        if N < 1:
            raise ValidationError("dictionary size N must be >= 1")
        return np.arange(1, N + 1)
    d = np.unique(np.asarray(dictionary, dtype=np.int64))
    if d.size == 0 or d[0] < 1:
        raise ValidationError("dictionary indices must be positive")
    if d[-1] > M:
        raise ValidationError("dictionary index exceeds the window M")
    return d


def delta_hat(F, N, M, dictionary=None):
    """``min_c ||e_1 - A c||`` over rows ``1..M`` by pivoted QR.

    Parameters
    ----------
    F : BohrSeries
        Needs ``n_max >= M``.
    N : int
        Dictionary ``{1, ..., N}`` unless ``dictionary`` lists the indices.
    M : int
        Coefficient window.
    """
    if M > F.n_max:
        raise ValidationError(f"window M={M} exceeds n_max={F.n_max}")
    if dictionary is None and N > M:
        raise ValidationError(f"N={N} must not exceed M={M}")
    dic = _dictionary(N, M, dictionary)
    A = design_matrix(F, M, dic)
    n_cols = dic.size
    zero = np.zeros(n_cols, dtype=np.complex128)
    if not np.any(A):
        return DeltaEstimate(n_cols, M, 1.0, zero, dic, 0, np.inf)
    Q, R, piv = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = diag[0] * max(A.shape) * np.finfo(float).eps
    rank = int(np.sum(diag > tol))
    rhs = Q[0, :rank].conj()
    c_piv = scipy.linalg.solve_triangular(R[:rank, :rank], rhs)
    c = np.zeros(n_cols, dtype=A.dtype)
    c[piv[:rank]] = c_piv
    resid = -(A @ c)
    resid[0] += 1.0
    value = float(np.linalg.norm(resid))
    if not np.isfinite(value) or value > 1.0:
        value, c = 1.0, np.zeros(n_cols, dtype=A.dtype)
    cond = float(diag[0] / diag[rank - 1])
    return DeltaEstimate(n_cols, M, value, c.astype(np.complex128), dic, rank, cond)


def delta_sweep(F, N_list, M, tol=1e-10):
    """``delta_hat`` for nested dictionaries ``{1..N}``; the values must not increase.

    Raises
    ------
    SolverError
        If a larger dictionary yields a value larger by more than ``tol``.
    """
    Ns = list(N_list)
    if Ns != sorted(Ns) or len(set(Ns)) != len(Ns):
        raise ValidationError("N_list must be strictly ascending")
    if Ns and Ns[-1] > M:
        raise ValidationError("max(N_list) must not exceed M")
    rows = [delta_hat(F, N, M) for N in Ns]
    for prev, cur in zip(rows, rows[1:]):
        if cur.value > prev.value + tol:
            raise SolverError(f"sweep not monotone: N={cur.N} gives {cur.value} > {prev.value} at N={prev.N}")
    return rows


def one_column_value(F, M):
    """Closed form for ``N = 1``: ``sqrt(1 - |a_1|^2 / ||F||^2_{<=M})``."""
    a = F.to_dense(M)[1:]
    nrm2 = float(np.sum(np.abs(a) ** 2))
    if nrm2 == 0:
        return 1.0
    return float(np.sqrt(max(0.0, 1 - abs(a[0]) ** 2 / nrm2)))


def sweep_csv(rows, config=None):
    """CSV text with header ``N,M,delta_hat,cond``; the config is echoed as ``#`` lines."""
    buf = io.StringIO()
    buf.write("N,M,delta_hat,cond\n")
    for r in rows:
        buf.write(f"{r.N},{r.M},{r.value!r},{r.cond!r}\n")
    if config:
        for line in json.dumps(config, sort_keys=True, indent=None).splitlines():
            buf.write(f"# config {line}\n")
    return buf.getvalue()
