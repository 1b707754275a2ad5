import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fcshape.sbd import (
    DimensionError,
    fft_cross_correlate,
    fft_length,
    sbd,
    sbd_matrix,
    shift_series,
)
from fcshape.series import z_normalize
from tests.oracles import direct_cross_correlation, direct_sbd

series = st.integers(2, 40).flatmap(
    lambda p: st.tuples(
        arrays(float, p, elements=st.floats(-10, 10)),
        arrays(float, p, elements=st.floats(-10, 10)),
    )
)


def test_fft_length():
    assert fft_length(2) == 4
    assert fft_length(3) == 8
    assert fft_length(64) == 128
    assert fft_length(65) == 256


def test_two_sample_correlation():
    np.testing.assert_allclose(fft_cross_correlate([1, 0], [1, 0]), [0, 1, 0], atol=1e-12)


def test_pulse_example():
    # x: unit pulse at 3, y: unit pulse at 5, both z-normalized (p = 8)
    x = np.zeros(8)
    x[3] = 1
    y = np.zeros(8)
    y[5] = 1
    r = sbd(z_normalize(x), z_normalize(y))
    assert r.shift == -2
    # best NCC is 54/56 after normalization of the pulses
    assert r.dist == pytest.approx(1 / 28, abs=1e-12)
    assert np.argmax(r.aligned) == 3


@settings(max_examples=150, deadline=None)
@given(series)
def test_fft_matches_direct_lag_sums(pair):
    x, y = pair
    np.testing.assert_allclose(
        fft_cross_correlate(x, y), direct_cross_correlation(x, y), atol=1e-9
    )


def test_sbd_matches_direct_oracle_on_random_series():
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = int(rng.integers(2, 70))
        x, y = rng.normal(size=p), rng.normal(size=p)
        d, s = direct_sbd(x, y)
        r = sbd(x, y)
        assert r.dist == pytest.approx(d, abs=1e-10)
        assert r.shift == s


@settings(max_examples=200, deadline=None)
@given(series)
def test_symmetry_bounds_and_identity(pair):
    x, y = pair
    a, b = sbd(x, y), sbd(y, x)
    assert a.dist == pytest.approx(b.dist, abs=1e-10)
    assert -1e-12 <= a.dist <= 2 + 1e-12
    if np.linalg.norm(x) > 1e-3:
        assert sbd(x, x).dist == pytest.approx(0.0, abs=1e-10)
        assert sbd(x, x).shift == 0


@settings(max_examples=150, deadline=None)
@given(series, st.floats(0.01, 100), st.floats(0.01, 100))
def test_scale_invariance(pair, a, b):
    x, y = pair
    if np.linalg.norm(x) < 1e-3 or np.linalg.norm(y) < 1e-3:
        return
    assert sbd(a * x, b * y).dist == pytest.approx(sbd(x, y).dist, abs=1e-9)


@pytest.mark.parametrize("s", [-7, -3, -1, 0, 1, 4, 9])
def test_shift_recovery(s):
    rng = np.random.default_rng(abs(s))
    p = 48
    y = np.zeros(p)
    y[12:36] = rng.normal(size=24)
    x = shift_series(y, s)
    r = sbd(x, y)
    assert r.shift == s
    assert r.dist == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(r.aligned, x, atol=1e-12)


def test_zero_operand():
    x = np.array([1.0, 2, 3, 4])
    z = np.zeros(4)
    for r in (sbd(x, z), sbd(z, x), sbd(z, z)):
        assert r.dist == 1.0 and r.shift == 0
    np.testing.assert_array_equal(sbd(z, x).aligned, x)


def test_length_mismatch():
    with pytest.raises(DimensionError):
        sbd([1, 2, 3], [1, 2])
    with pytest.raises(DimensionError):
        sbd_matrix(np.zeros((2, 3)), np.zeros((4, 5)))


def test_shift_series_zero_fills():
    np.testing.assert_array_equal(shift_series([1, 2, 3, 4], 1), [0, 1, 2, 3])
    np.testing.assert_array_equal(shift_series([1, 2, 3, 4], -2), [3, 4, 0, 0])
    np.testing.assert_array_equal(shift_series([1, 2, 3, 4], 5), [0, 0, 0, 0])


def test_matrix_agrees_with_pairwise():
    rng = np.random.default_rng(5)
    V = rng.normal(size=(3, 30))
    V[1] = 0
    X = rng.normal(size=(12, 30))
    X[4] = 0
    D, S = sbd_matrix(V, X)
    for i in range(3):
        for k in range(12):
            r = sbd(V[i], X[k])
            assert D[i, k] == pytest.approx(r.dist, abs=1e-12)
            assert S[i, k] == r.shift


def test_cost_grows_like_p_log_p():
    rng = np.random.default_rng(0)

    def cost(p, reps=40):
        x, y = rng.normal(size=p), rng.normal(size=p)
        best = np.inf
        for _ in range(3):
            t = time.perf_counter()
            for _ in range(reps):
                sbd(x, y)
            best = min(best, time.perf_counter() - t)
        return best

    small, large = cost(1024), cost(16384)
    # 16x longer input: quadratic growth would be ~256x
    assert large / small < 64
