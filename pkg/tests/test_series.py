import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fcshape.series import Dataset, InvalidSeriesError, ParseError, load_ucr, z_normalize

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_z_normalize_small_example():
    # mean 2, population std sqrt(2/3)
    expected = np.array([-1.0, 0.0, 1.0]) / np.sqrt(2.0 / 3.0)
    np.testing.assert_allclose(z_normalize([1, 2, 3]), expected, atol=1e-12)
    np.testing.assert_allclose(z_normalize([1, 2, 3]), [-1.224744871, 0, 1.224744871], atol=1e-9)


def test_constant_series_maps_to_zeros():
    np.testing.assert_array_equal(z_normalize([5, 5, 5, 5]), np.zeros(4))


def test_too_short():
    with pytest.raises(InvalidSeriesError):
        z_normalize([1.0])


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.integers(2, 50), elements=finite))
def test_normalized_moments_and_idempotence(x):
    z = z_normalize(x)
    if np.any(z):
        assert abs(z.mean()) < 1e-10
        assert abs(z.std() - 1.0) < 1e-10
    np.testing.assert_allclose(z_normalize(z), z, atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(
    arrays(float, st.integers(2, 40), elements=st.floats(-100, 100)),
    st.floats(1e-3, 1e3),
    st.floats(-1e3, 1e3),
)
def test_scale_offset_invariance(x, a, b):
    if np.ptp(x) < 1e-6:
        return
    np.testing.assert_allclose(z_normalize(a * x + b), z_normalize(x), atol=1e-9)


def test_rows_normalized_independently():
    X = np.array([[1.0, 2, 3], [10, 10, 10], [3, 2, 1]])
    Z = z_normalize(X)
    np.testing.assert_allclose(Z[0], z_normalize(X[0]))
    np.testing.assert_array_equal(Z[1], 0)
    np.testing.assert_allclose(Z[2], -Z[0])


def test_load_two_line_file(tmp_path):
    f = tmp_path / "tiny.csv"
    f.write_text("1,0,1,0\n2,1,0,1")
    ds = load_ucr(f)
    assert (ds.n, ds.p) == (2, 3)
    assert ds.labels.tolist() == [1, 2]
    assert ds.name == "tiny"


def test_load_tab_crlf_and_label_remap(tmp_path):
    f = tmp_path / "x_TRAIN.tsv"
    f.write_bytes(b"7\t1.0\t2.0\t4.0\r\n-1\t3\t1\t0\r\n7\t0\t0\t1\r\n\r\n")
    ds = load_ucr(f)
    assert ds.labels.tolist() == [1, 2, 1]
    assert ds.name == "x"
    np.testing.assert_allclose(ds.X.mean(axis=1), 0, atol=1e-12)


def test_merge_concatenates(tmp_path):
    rng = np.random.default_rng(3)
    rows = lambda k: "\n".join(  # noqa: E731
        ",".join([str(1 + i % 2)] + [repr(float(v)) for v in rng.normal(size=12)]) for i in range(k)
    )
    a, b = tmp_path / "d_TRAIN", tmp_path / "d_TEST"
    a.write_text(rows(56) + "\n")
    b.write_text(rows(56) + "\n")
    ds = load_ucr(a, merge=b)
    assert ds.n == 112 and ds.p == 12
    ds2 = load_ucr(b, merge=a)
    # per-series normalization: merge order only permutes rows
    np.testing.assert_array_equal(ds.X[:56], ds2.X[56:])


def test_ragged_row_reports_line(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("1,0,1,0\n2,1,0\n1,1,1,0\n")
    with pytest.raises(ParseError) as err:
        load_ucr(f)
    assert err.value.lineno == 2


def test_non_numeric_field(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("1,0,1,0\n2,1,x,1\n")
    with pytest.raises(ParseError) as err:
        load_ucr(f)
    assert err.value.lineno == 2


def test_merge_length_mismatch(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.write_text("1,0,1,0\n2,1,0,1\n")
    b.write_text("1,0,1\n2,1,0\n")
    with pytest.raises(ParseError):
        load_ucr(a, merge=b)


def test_loading_is_deterministic(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("3,0.5,1.5,2\n1,2,1,0\n3,1,1,2\n")
    a, b = load_ucr(f), load_ucr(f)
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_dataset_is_read_only():
    ds = Dataset(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        ds.X[0, 0] = 1.0


def test_dataset_rejects_single_series():
    with pytest.raises(InvalidSeriesError):
        Dataset(np.zeros((1, 4)))
