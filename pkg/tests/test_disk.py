import math

import numpy as np
import pytest

from bohrkit import TaylorPoly, bohr_lift, is_outer_polynomial, log_series, noor_w, polynomial_roots, power_dilation, shift, szego_defect
from bohrkit.disk import INDETERMINATE, NOT_OUTER, OUTER, is_outer_series, read_taylor, recognize_rational, write_taylor
from bohrkit.errors import DomainError, ValidationError

from oracles import mean_log_modulus


def test_roots_examples():
    assert polynomial_roots([1, -1]) == pytest.approx([1])
    r = sorted(polynomial_roots([2, -3, 1]), key=abs)
    assert r == pytest.approx([1, 2])
    assert polynomial_roots([5]) == []
    with pytest.raises(ValidationError):
        polynomial_roots([0, 0])


def test_roots_residual_contract():
    rng = np.random.default_rng(11)
    for _ in range(50):
        c = rng.normal(size=7) + 1j * rng.normal(size=7)
        p = TaylorPoly(c)
        roots = polynomial_roots(p)
        assert len(roots) == 6
        for r in roots:
            assert abs(p(r)) <= 1e-8 * (1 + np.sum(np.abs(c)))


@pytest.mark.parametrize(
    "coeffs, status",
    [([1, -1], OUTER), ([1, -0.5], OUTER), ([1, -2], NOT_OUTER), ([-0.5, 1], NOT_OUTER), ([0, 1], NOT_OUTER), ([1, 0.5, 0.06], OUTER)],
)
def test_is_outer_polynomial(coeffs, status):
    assert is_outer_polynomial(coeffs).status == status


def test_szego_examples():
    assert szego_defect(TaylorPoly([1, -1]), 65536) <= 1e-4
    assert abs(szego_defect(TaylorPoly([-0.5, 1]), 4096) - math.log(2)) <= 1e-6
    assert szego_defect(TaylorPoly([0, 1])) == math.inf
    assert szego_defect(TaylorPoly([3, 1, 0.2])) < 1e-12


def test_szego_matches_jensen_oracle():
    rng = np.random.default_rng(4)
    for _ in range(30):
        c = rng.normal(size=5) + 1j * rng.normal(size=5)
        roots = np.roots(c[::-1])
        if np.min(np.abs(np.abs(roots) - 1)) < 0.05:
            continue
        expected = mean_log_modulus(roots, c[-1]) - math.log(abs(c[0]))
        assert szego_defect(TaylorPoly(c)) == pytest.approx(max(expected, 0.0), abs=1e-9)


def test_recognize_rational():
    c = [0.5**k for k in range(12)]
    P, Q = recognize_rational(c)
    assert P.coeffs == pytest.approx([1]) and Q.coeffs == pytest.approx([1, -0.5])
    assert recognize_rational(np.random.default_rng(0).normal(size=12)) is None


def test_is_outer_series():
    assert is_outer_series(TaylorPoly([0.7**k for k in range(20)])).status == OUTER
    # (z - 1/2) / (1 - z/3)
    num = TaylorPoly([-0.5, 1])
    geo = TaylorPoly([(1 / 3) ** k for k in range(20)])
    assert is_outer_series((num * geo).with_degree(19)).status == NOT_OUTER
    v = is_outer_series(TaylorPoly([1, 0.4]))
    assert v.status == OUTER and v.detail["truncation_limited"]
    assert is_outer_series(TaylorPoly([1, 1.5])).status == INDETERMINATE
    assert is_outer_series(TaylorPoly([0, 1, 2])).status == NOT_OUTER


def test_dilation_and_shift():
    f = TaylorPoly([1, 2, 3])
    assert power_dilation(2, f).coeffs.tolist() == [1, 0, 2, 0, 3]
    assert power_dilation(3, f, 4).coeffs.tolist() == [1, 0, 0, 2, 0]
    assert shift(f).coeffs.tolist() == [0, 1, 2]
    assert noor_w(2, TaylorPoly([1, 1])).coeffs.tolist() == [1, 1, 1, 1]
    with pytest.raises(ValidationError):
        power_dilation(0, f)


def test_log_series():
    L = log_series("log", 2, 8)
    assert L.coeffs.real.tolist() == pytest.approx([0, 0, -1, 0, -0.5, 0, -1 / 3, 0, -0.25])
    phi = log_series("phi", 2, 9)
    # phi_2 = log(1 + z) - log 2
    expect = [-math.log(2)] + [(-1) ** (k + 1) / k for k in range(1, 10)]
    assert phi.coeffs.real.tolist() == pytest.approx(expect)


def test_bohr_lift():
    F = bohr_lift(TaylorPoly([0, 1, 0.5, 0.25]), 10)
    assert F.coeffs == {1: 1, 2: 0.5, 3: 0.25}
    with pytest.raises(DomainError):
        bohr_lift(TaylorPoly([1, 1]), 5)


def test_taylor_round_trip(tmp_path):
    f = TaylorPoly([1, 2j, -3.5])
    write_taylor(f, tmp_path / "t.json")
    assert read_taylor(tmp_path / "t.json") == f
