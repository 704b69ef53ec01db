#
# Copyright 2024 The Resil-Fuse Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

import numpy as np
import pytest
from libpysal.weights import W

from resil_fuse.common.errors import ComputeError
from resil_fuse.ingest.neighborhoods import Neighborhood
from resil_fuse.stats.weights import (
    WeightsScheme,
    build_weights,
    from_neighbors,
    knn_neighbors,
)

from basic_set import grid_neighborhoods, square


def _hoods(*squares):
    return [Neighborhood(id=i, name=f"hood {i}", boundary=s) for i, s in enumerate(squares)]


def test_shared_edge():
    w = build_weights(_hoods(square(0.0, 0.0), square(1.0, 0.0)))
    assert w.ids == [0, 1]
    assert w.neighbors == [[1], [0]]
    assert [list(x) for x in w.weights] == [[1.0], [1.0]]
    assert w.islands == []


def test_shared_corner_is_queen_contiguity():
    w = build_weights(_hoods(square(0.0, 0.0), square(1.0, 1.0), square(5.0, 5.0)))
    assert w.neighbors == [[1], [0], []]
    assert w.islands == [2]


def test_snap_tolerance():
    w = build_weights(_hoods(square(0.0, 0.0), square(1.0 + 2e-7, 0.0)))
    assert w.neighbors == [[1], [0]]
    w = build_weights(_hoods(square(0.0, 0.0), square(1.001, 0.0)))
    assert w.neighbors == [[], []]


def test_three_by_three_center():
    w = build_weights(grid_neighborhoods(3, 3))
    assert w.neighbors[4] == [0, 1, 2, 3, 5, 6, 7, 8]
    np.testing.assert_array_equal(w.weights[4], np.full(8, 1.0 / 8))
    assert w.neighbors[0] == [1, 3, 4]
    assert w.s0 == pytest.approx(9.0)


def test_binary_weights():
    w = build_weights(grid_neighborhoods(3, 3), row_standardize=False)
    assert not w.row_standardized
    np.testing.assert_array_equal(w.weights[4], np.ones(8))
    assert w.s0 == 40.0


def test_restricted_ids():
    w = build_weights(grid_neighborhoods(3, 3), ids=[0, 1, 4, 8])
    assert w.ids == [0, 1, 4, 8]
    assert w.neighbors == [[1, 2], [0, 2], [0, 1, 3], [2]]


def test_multipart_ids_are_merged():
    hoods = [
        Neighborhood(id=1, name="a", boundary=square(0.0, 0.0)),
        Neighborhood(id=2, name="b", boundary=square(3.0, 0.0)),
        Neighborhood(id=1, name="a", boundary=square(2.0, 0.0)),
    ]
    w = build_weights(hoods)
    assert w.ids == [1, 2]
    assert w.neighbors == [[1], [0]]


def test_knn_collinear_ties():
    centroids = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    assert knn_neighbors(centroids, 1) == [[1], [0], [1], [2]]
    assert knn_neighbors(centroids, 2) == [[1, 2], [0, 2], [1, 3], [1, 2]]


def test_knn_weights():
    w = build_weights(grid_neighborhoods(2, 3), scheme=WeightsScheme.KNN, k=2)
    assert all(len(n) == 2 for n in w.neighbors)
    assert all(np.array_equal(x, [0.5, 0.5]) for x in w.weights)
    assert w.s0 == 6.0
    w = build_weights(grid_neighborhoods(2, 3), scheme="knn", k=5)
    assert w.neighbors[0] == [1, 2, 3, 4, 5]


def test_invalid_inputs():
    with pytest.raises(ComputeError, match="k=6"):
        build_weights(grid_neighborhoods(2, 3), scheme=WeightsScheme.KNN, k=6)
    with pytest.raises(ComputeError):
        knn_neighbors(np.zeros((3, 2)), 0)
    with pytest.raises(ComputeError, match="at least 2"):
        build_weights(grid_neighborhoods(1, 1))
    with pytest.raises(ComputeError, match="at least 2"):
        build_weights(grid_neighborhoods(2, 2), ids=[3])
    with pytest.raises(ComputeError, match="itself"):
        from_neighbors([0, 1], [[0], [0]])


def test_weights_are_libpysal_backed():
    w = build_weights(grid_neighborhoods(3, 3))
    assert isinstance(w.w, W)
    assert w.w.transform == "R"
    assert w.w.cardinalities[4] == 8
    binary = from_neighbors([0, 1, 2], [[1], [0, 2], [1]], row_standardize=False)
    assert binary.w.transform == "B"
    assert binary.s0 == 4.0


def test_sparse_and_lag_agree():
    w = build_weights(grid_neighborhoods(4, 5))
    z = np.random.default_rng(3).normal(size=w.n)
    np.testing.assert_allclose(w.sparse() @ z, w.lag(z), rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(np.asarray(w.sparse().sum(axis=1)).ravel(), np.ones(w.n))


if __name__ == "__main__":
    pytest.main(["-v", __file__])
