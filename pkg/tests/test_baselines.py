import numpy as np
import pytest

from conftest import random_symmetric
from netclust import (GraphTensor, adjusted_rand_index, edge_features, kmeans,
                      spectra_features)
from netclust.admm import ClusterAssignment
from netclust.errors import AsymmetricSlice, DegenerateK, LengthMismatch
from netclust.synth import GraphonSpec, graphon_sample, permute_nodes
from oracles import best_partition, charpoly_eigenvalues


def test_spectra_empty_and_complete():
    p = 6
    A = np.stack([np.zeros((p, p)), np.ones((p, p)) - np.eye(p)])
    f = spectra_features(GraphTensor(A))
    np.testing.assert_array_equal(f[0], 0.0)
    np.testing.assert_allclose(f[1], [p - 1] + [-1] * (p - 1), atol=1e-12)


def test_spectra_charpoly(rng):
    for p in (2, 3, 4, 5):
        x = random_symmetric(rng, 4, p)
        f = spectra_features(x)
        for t in range(4):
            np.testing.assert_allclose(f[t], charpoly_eigenvalues(x.slices[t]),
                                       atol=1e-8)
        assert np.all(np.diff(f, axis=1) <= 0)


def test_spectra_permutation_invariant(rng):
    a = graphon_sample(GraphonSpec(), 10, rng)
    b = permute_nodes(a, rng.permutation(10))
    f = spectra_features(GraphTensor(np.stack([a, b])))
    np.testing.assert_allclose(f[0], f[1], atol=1e-10)


def test_features_reject_directed():
    x = GraphTensor(np.triu(np.ones((2, 3, 3)), 1), directed=True)
    with pytest.raises(AsymmetricSlice):
        spectra_features(x)
    with pytest.raises(AsymmetricSlice):
        edge_features(x)


def test_edge_features():
    A = np.zeros((2, 4, 4))
    A[1, 0, 1] = A[1, 1, 0] = 1
    f = edge_features(GraphTensor(A))
    assert f.shape == (2, 6)
    assert not f[0].any()
    assert f[1].sum() == 1 and np.count_nonzero(f[1]) == 1


def test_edge_features_counts(rng):
    slices = np.array([graphon_sample(GraphonSpec(), 9, rng) for _ in range(5)])
    f = edge_features(GraphTensor(slices))
    np.testing.assert_array_equal(f.sum(1), slices.sum((1, 2)) / 2)


def test_kmeans_singletons(rng):
    X = rng.standard_normal((6, 3))
    res = kmeans(X, 6)
    assert res.assignment.K == 6 and res.inertia == pytest.approx(0, abs=1e-20)


def test_kmeans_one_cluster(rng):
    X = rng.standard_normal((7, 3))
    res = kmeans(X, 1)
    assert res.assignment.K == 1
    np.testing.assert_allclose(res.centers[0], X.mean(0))
    assert res.inertia == pytest.approx(np.sum((X - X.mean(0)) ** 2))


@pytest.mark.parametrize("seed", range(5))
def test_kmeans_blobs_exhaustive(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 11))
    X = rng.standard_normal((n, 2)) * 0.3
    X[n // 2:] += 5.0
    res = kmeans(X, 2, seed=seed)
    best, fbest = best_partition(X, 2)
    assert res.assignment == ClusterAssignment(best + 1)
    assert res.inertia == pytest.approx(fbest)


def test_kmeans_matches_exhaustive_on_noise(rng):
    for _ in range(5):
        X = rng.standard_normal((8, 2))
        best, fbest = best_partition(X, 3)
        assert kmeans(X, 3, restarts=50).inertia == pytest.approx(fbest)


def test_kmeans_history_nonincreasing(rng):
    X = rng.standard_normal((40, 3))
    res = kmeans(X, 4, restarts=1)
    assert np.all(np.diff(res.history) <= 1e-12)


def test_kmeans_deterministic(rng):
    X = rng.standard_normal((30, 4))
    a, b = kmeans(X, 3, seed=9), kmeans(X, 3, seed=9)
    assert a.assignment == b.assignment and a.inertia == b.inertia
    np.testing.assert_array_equal(a.centers, b.centers)


def test_kmeans_centers_follow_labels(rng):
    X = rng.standard_normal((20, 2))
    res = kmeans(X, 3)
    for k in range(1, 4):
        np.testing.assert_allclose(res.centers[k - 1],
                                   X[res.assignment.labels == k].mean(0))


def test_kmeans_against_sklearn(rng):
    KMeans = pytest.importorskip("sklearn.cluster").KMeans
    X = np.vstack([rng.standard_normal((15, 3)) + c for c in (0, 4, 8)])
    ours = kmeans(X, 3)
    ref = KMeans(3, n_init=20, random_state=0).fit(X)
    assert ours.inertia == pytest.approx(ref.inertia_, rel=1e-9)
    assert ours.assignment == ClusterAssignment(ref.labels_)


def test_kmeans_degenerate():
    X = np.array([[0.0], [0.0], [1.0], [1.0]])
    with pytest.warns(DegenerateK):
        res = kmeans(X, 3)
    assert res.degenerate
    np.testing.assert_array_equal(res.assignment.labels, [1, 1, 2, 2])


def test_kmeans_bad_k(rng):
    with pytest.raises(ValueError):
        kmeans(rng.standard_normal((3, 2)), 4)


def test_ari_identical_and_relabelled():
    a = [1, 1, 2, 2, 3]
    assert adjusted_rand_index(a, a) == 1.0
    assert adjusted_rand_index(a, [7, 7, 0, 0, 5]) == 1.0
    assert adjusted_rand_index(ClusterAssignment(a), a) == 1.0


def test_ari_hand_value():
    # contingency [[1,1],[1,1]]: index 0, expected 2*2/6, max 2
    assert adjusted_rand_index([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(-0.5)


def test_ari_trivial_partitions():
    assert adjusted_rand_index([1, 1, 1], [2, 2, 2]) == 1.0
    assert adjusted_rand_index([1, 2, 3], [3, 1, 2]) == 1.0
    assert adjusted_rand_index([1, 1, 1, 1], [1, 1, 2, 2]) == 0.0


def test_ari_symmetric_and_sklearn(rng):
    skm = pytest.importorskip("sklearn.metrics")
    for _ in range(20):
        a = rng.integers(0, 3, 12)
        b = rng.integers(0, 4, 12)
        v = adjusted_rand_index(a, b)
        assert v == pytest.approx(adjusted_rand_index(b, a))
        assert v == pytest.approx(skm.adjusted_rand_score(a, b), abs=1e-12)
        assert -1 <= v <= 1


def test_ari_length_mismatch():
    with pytest.raises(LengthMismatch):
        adjusted_rand_index([1, 2], [1, 2, 3])
