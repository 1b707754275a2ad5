import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcshape.prototype import (
    DegenerateWeightsError,
    EmptyClusterError,
    align_members,
    dominant_eigenvector,
    mean_prototype,
    mean_prototypes,
    rayleigh_matrix,
    shape_extract,
    top_eigenpair,
)
from fcshape.sbd import sbd
from fcshape.series import z_normalize
from tests.oracles import top_eigenpair_eigh


def rayleigh(M, v):
    return float(v @ M @ v / (v @ v))


def cluster(seed, k=8, p=32):
    rng = np.random.default_rng(seed)
    base = np.sin(np.linspace(0, 2 * np.pi, p)) + 0.3 * rng.normal(size=p)
    rows = [np.roll(base, int(rng.integers(-4, 5))) * rng.uniform(0.5, 2) for _ in range(k)]
    rows = np.array(rows) + 0.2 * rng.normal(size=(k, p))
    return z_normalize(rows), z_normalize(base)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("k", [3, 8, 40])
def test_eigen_residual(seed, k):
    members, ref = cluster(seed, k=k)
    aligned = align_members(members, ref)
    M = rayleigh_matrix(aligned)
    v, lam = top_eigenpair(aligned, ref - ref.mean())
    assert lam >= 0
    assert np.linalg.norm(M @ v - lam * v) <= 1e-8 * np.linalg.norm(M, "fro")
    lam_ref, _ = top_eigenpair_eigh(M)
    assert lam == pytest.approx(lam_ref, rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_output_maximizes_rayleigh_quotient(seed):
    members, ref = cluster(seed)
    aligned = align_members(members, ref)
    M = rayleigh_matrix(aligned)
    out = shape_extract(members, ref)
    q = rayleigh(M, out)
    rng = np.random.default_rng(100 + seed)
    probes = rng.normal(size=(1000, M.shape[0]))
    assert all(q >= rayleigh(M, v) - 1e-9 for v in probes)
    assert all(q >= rayleigh(M, a) - 1e-9 for a in aligned if np.any(a))


def test_output_is_z_normalized_and_sign_resolved():
    members, ref = cluster(3)
    out = shape_extract(members, ref)
    assert abs(out.mean()) < 1e-10 and abs(out.std() - 1) < 1e-10
    assert sbd(out, ref).dist <= sbd(-out, ref).dist


@pytest.mark.parametrize("ref_kind", ["zero", "self", "other"])
def test_identical_members_return_the_member(ref_kind):
    x = z_normalize(np.sin(np.linspace(0, 3, 24)) + np.linspace(0, 1, 24) ** 2)
    members = np.tile(x, (5, 1))
    ref = {"zero": np.zeros(24), "self": x, "other": z_normalize(np.cos(np.arange(24.0)))}[ref_kind]
    out = shape_extract(members, ref)
    if ref_kind == "other":
        # members are first slid (zero-filled) toward the reference
        expected = z_normalize(align_members(members, ref)[0])
        np.testing.assert_allclose(out, expected, atol=1e-8)
    else:
        np.testing.assert_allclose(out, x, atol=1e-8)


def test_member_order_does_not_matter():
    members, ref = cluster(7, k=10)
    perm = np.random.default_rng(1).permutation(10)
    np.testing.assert_allclose(shape_extract(members, ref), shape_extract(members[perm], ref), atol=1e-8)


def test_zero_reference_skips_alignment():
    members, _ = cluster(2)
    np.testing.assert_array_equal(align_members(members, np.zeros(members.shape[1])), members)


def test_single_member():
    x = z_normalize(np.arange(10.0) ** 2)
    np.testing.assert_allclose(shape_extract(x[None, :], np.zeros(10)), x, atol=1e-8)


def test_empty_cluster():
    with pytest.raises(EmptyClusterError):
        shape_extract(np.empty((0, 5)), np.zeros(5))


def test_all_zero_members_give_zero_prototype():
    np.testing.assert_array_equal(shape_extract(np.zeros((3, 6)), np.zeros(6)), np.zeros(6))


def test_power_iteration_reports_nonconvergence():
    # equal top eigenvalues with opposite signs never settle
    M = np.diag([1.0, -1.0, 0.1])
    _, _, ok = dominant_eigenvector(lambda v: M @ v, 3, start=np.ones(3), max_steps=50)
    assert not ok


def test_degenerate_top_eigenvalue_still_gives_eigenvector():
    # two orthogonal members of equal energy: top eigenvalue has multiplicity 2
    p = 16
    t = np.arange(p)
    a = z_normalize(np.cos(2 * np.pi * 2 * t / p))
    b = z_normalize(np.sin(2 * np.pi * 5 * t / p))
    aligned = np.stack([a, b])
    M = rayleigh_matrix(aligned)
    v, lam = top_eigenpair(aligned, None)
    assert np.linalg.norm(M @ v - lam * v) <= 1e-8 * np.linalg.norm(M, "fro")


def test_mean_prototype_examples():
    X = np.array([[1.0, 2.0], [3.0, 6.0]])
    np.testing.assert_allclose(mean_prototype(X, [1, 1]), [2, 4])
    np.testing.assert_allclose(mean_prototype(X, [3, 1]), [1.5, 3])
    np.testing.assert_allclose(mean_prototype(X, [1, 0]), [1, 2])
    with pytest.raises(DegenerateWeightsError):
        mean_prototype(X, [0, 0])
    with pytest.raises(DegenerateWeightsError):
        mean_prototype(X, [1, -1])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.floats(1.01, 4))
def test_mean_prototypes_match_direct_sums(seed, m):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(9, 7))
    U = rng.dirichlet(np.ones(3), size=9).T
    W = U**m
    V = mean_prototypes(X, W)
    for i in range(3):
        direct = sum(W[i, k] * X[k] for k in range(9)) / sum(W[i, k] for k in range(9))
        np.testing.assert_allclose(V[i], direct, atol=1e-12)
