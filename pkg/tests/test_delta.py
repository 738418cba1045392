import numpy as np
import pytest

from bohrkit import BohrSeries, delta_hat, delta_sweep
from bohrkit.delta import design_matrix, one_column_value, sweep_csv
from bohrkit.dilation import kozlov_F, noor_series
from bohrkit.errors import SolverError, ValidationError
from bohrkit.series import reciprocal_kernel


def test_unit_is_zero_distance():
    for N in (1, 5, 50):
        assert delta_hat(BohrSeries.unit(100), N, 100).value == 0


def test_design_matrix_layout():
    F = BohrSeries(6, {1: 1, 2: 2, 3: 3})
    A = design_matrix(F, 6, np.array([1, 2]))
    assert A[:, 0].tolist() == [1, 2, 3, 0, 0, 0]
    assert A[:, 1].tolist() == [0, 1, 0, 2, 0, 3]


def test_reciprocal_kernel_annihilated():
    assert delta_hat(reciprocal_kernel(500), 500, 500).value <= 1e-8


def test_value_bounded_and_closed_form():
    rng = np.random.default_rng(0)
    for _ in range(20):
        F = BohrSeries.from_dense(np.r_[0, rng.normal(size=200) + 1j * rng.normal(size=200)])
        rows = delta_sweep(F, [1, 2, 4, 16, 64], 200)
        assert all(r.value <= 1 for r in rows)
        assert abs(rows[0].value - one_column_value(F, 200)) <= 1e-10


def test_zero_column_dictionary():
    F = BohrSeries(50, {7: 1})
    est = delta_hat(F, 3, 50, dictionary=[1, 2, 3])
    assert est.value == pytest.approx(1.0)


def test_custom_dictionary():
    F = reciprocal_kernel(256)
    powers = [2**k for k in range(9)]
    est = delta_hat(F, None, 256, dictionary=powers)
    assert 0 < est.value < 1
    assert est.dictionary.tolist() == powers


def test_noor_m2_strictly_decreasing():
    F = noor_series(2, 4096)
    rows = delta_sweep(F, [1, 2, 4, 8, 16, 32, 64], 4096)
    vals = [r.value for r in rows]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_kozlov_third_stays_large():
    assert delta_hat(kozlov_F("1/3", 1024), 32, 1024).value >= 0.7


def test_determinism():
    F = noor_series(3, 1000)
    assert delta_hat(F, 40, 1000).value == delta_hat(F, 40, 1000).value


def test_validation():
    F = reciprocal_kernel(100)
    with pytest.raises(ValidationError):
        delta_hat(F, 10, 200)
    with pytest.raises(ValidationError):
        delta_hat(F, 101, 100)
    with pytest.raises(ValidationError):
        delta_sweep(F, [4, 2], 100)


def test_monotonicity_violation_raises(monkeypatch):
    import bohrkit.delta as mod

    real = mod.delta_hat
    vals = iter([0.5, 0.6])

    def fake(F, N, M, dictionary=None):
        est = real(F, N, M)
        est.value = next(vals)
        return est

    monkeypatch.setattr(mod, "delta_hat", fake)
    with pytest.raises(SolverError):
        mod.delta_sweep(reciprocal_kernel(50), [1, 2], 50)


def test_csv():
    rows = delta_sweep(noor_series(2, 100), [1, 2], 100)
    text = sweep_csv(rows, {"M": 100})
    lines = text.splitlines()
    assert lines[0] == "N,M,delta_hat,cond"
    assert lines[1].startswith("1,100,")
    assert lines[-1].startswith("# config")
