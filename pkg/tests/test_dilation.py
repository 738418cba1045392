import math
from fractions import Fraction

import numpy as np
import pytest

from bohrkit import finite_support_evidence, indicator_sine_coeffs, ingest_odd_periodic, kozlov_F, kozlov_G
from bohrkit.arith import default_table
from bohrkit.dilation import (
    as_theta,
    cos_pi_multiples,
    fixture_path,
    ingest_samples,
    intertwining_defect,
    kozlov_G_by_division,
    kozlov_decide,
    kozlov_pair,
    noor_factorization_error,
    noor_series,
    prime_coefficient,
    read_fixture,
    write_fixture,
)
from bohrkit.errors import ValidationError

import frozen
from oracles import sine_coefficient_quad


def test_theta_parsing():
    assert as_theta("2/3") == Fraction(2, 3)
    assert as_theta(1) == 1
    for bad in ("0", "3/2", "x"):
        with pytest.raises(ValidationError):
            as_theta(bad)


def test_exact_cosines():
    c = cos_pi_multiples(Fraction(1, 3), np.arange(7))
    assert c.tolist() == [1, 0.5, -0.5, -1, -0.5, 0.5, 1]
    c = cos_pi_multiples(Fraction(1, 2), np.arange(5))
    assert c.tolist() == [1, 0, -1, 0, 1]


def test_kozlov_F_examples():
    F = kozlov_F(1, 10)
    assert F[1] == pytest.approx(2 * math.sqrt(2) / math.pi, abs=1e-15)
    assert F[2] == 0
    assert kozlov_F("1/2", 4)[2] == pytest.approx(math.sqrt(2) / math.pi, abs=1e-15)


@pytest.mark.parametrize(
    "theta, expected",
    [("1/2", frozen.G_HALF), ("2/3", frozen.G_TWO_THIRDS), ("1/3", frozen.G_THIRD), ("1", frozen.G_ONE)],
)
def test_kozlov_G_fixtures(theta, expected):
    G = kozlov_G(theta, 3000)
    assert set(G.coeffs) == set(expected)
    for n, v in expected.items():
        assert abs(G[n] - v) <= 1e-12


def test_kozlov_G_two_paths_and_pair_invariant():
    for theta in ("1", "1/2", "1/3", "2/3", "1/4", "2/5"):
        pair = kozlov_pair(theta, 3000)
        assert pair.residual() <= 1e-10
        assert pair.G.max_abs_diff(kozlov_G_by_division(theta, 3000)) <= 1e-12


def test_displayed_polynomial_scale():
    # G_{1/3} = -(1/(sqrt 2 pi)) (z1 z2 - z1 - z2 - 1)
    G = kozlov_G("1/3", 10)
    s = frozen.S
    assert [G[n] / -s for n in (1, 2, 3, 6)] == pytest.approx([-1, -1, -1, 1])


def test_prime_coefficients():
    assert prime_coefficient("1/4", 3) == pytest.approx(frozen.G_QUARTER_AT_3, abs=1e-15)
    assert abs(kozlov_G("1/4", 10)[3]) == pytest.approx(frozen.G_QUARTER_AT_3, abs=1e-12)
    ev = finite_support_evidence(kozlov_G(1 / math.pi, 200), 100)
    assert all(v > 0 for _, v in ev)
    assert all(v <= 1e-12 for p, v in finite_support_evidence(kozlov_G("1/2", 500), 500) if p >= 3)


def test_kozlov_verdicts():
    assert kozlov_decide("1/2", 1000).status == "Cyclic"
    assert kozlov_decide("1/3", 1000).status == "NotCyclic"


def test_fixture_round_trip(tmp_path):
    pair = kozlov_pair("2/3", 200)
    path = write_fixture(pair, tmp_path)
    assert path == fixture_path(tmp_path, "2/3")
    assert path.name == "theta_2_3.json"
    back = read_fixture(path)
    assert back.theta == Fraction(2, 3) and back.F == pair.F and back.G == pair.G


def test_indicator_matches_kozlov_F():
    assert indicator_sine_coeffs("1/2", 500).max_abs_diff(kozlov_F("1/2", 500)) <= 1e-10


def test_ingest_identity_function():
    N = 64
    A = ingest_odd_periodic(lambda x: x, N, nodes=2**15)
    n = np.arange(1, N + 1)
    exact = -math.sqrt(2) * (-1.0) ** n / (n * math.pi)
    assert np.max(np.abs(A.to_dense()[1:].real - exact)) < 1e-6
    for k in (1, 5, 17):
        assert A[k].real == pytest.approx(sine_coefficient_quad(lambda x: x, k), abs=1e-6)


def test_ingest_sine_is_single_mode():
    A = ingest_odd_periodic(lambda x: np.sin(np.pi * x), 20)
    d = A.to_dense()
    assert d[1] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert np.max(np.abs(d[2:])) < 1e-12


def test_ingest_aliasing_guard():
    with pytest.raises(ValidationError):
        ingest_samples(np.ones(10), 5)


def test_piecewise_ingestion():
    A = ingest_odd_periodic(None, 50, breakpoints=[Fraction(0), Fraction(1, 2), Fraction(1)], values=[1.0, 0.0])
    assert A.max_abs_diff(kozlov_F("1/2", 50)) <= 1e-12
    with pytest.raises(ValidationError):
        ingest_odd_periodic(None, 5, breakpoints=[0, 1], values=[1.0, 2.0])


def test_noor_series():
    b = noor_series(2, 100)
    n = np.arange(1, 101)
    assert np.allclose(b.to_dense()[1:].real, (-1.0) ** (n + 1) / n, atol=0, rtol=1e-15)
    assert noor_series(3, 3)[3] == pytest.approx(-2 / 3)
    assert noor_factorization_error(2, 1000) <= 1e-15
    assert noor_factorization_error(5, 1000) <= 1e-15
    with pytest.raises(ValidationError):
        noor_series(1, 10)


def test_intertwining_identity():
    assert intertwining_defect(50, 10) == 0.0


def test_variable_support_of_displayed_G():
    from bohrkit import variable_support

    for theta in ("1", "1/2", "1/3", "2/3"):
        assert set(variable_support(kozlov_G(theta, 2000))) <= {2, 3}
