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

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, Optional, Sequence

import geopandas as gpd
import numpy as np
from libpysal.weights import W, fuzzy_contiguity, lag_spatial
from scipy import sparse
from scipy.spatial.distance import cdist
from shapely.geometry import MultiPolygon

from resil_fuse.common.errors import ComputeError
from resil_fuse.common.logging import logger
from resil_fuse.ingest.neighborhoods import Neighborhood
from resil_fuse.stats.aggregate import group_neighborhoods

# boundaries closer than this (meters) touch
SNAP_TOLERANCE = 1e-6


class WeightsScheme(str, Enum):
    QUEEN = "queen"
    KNN = "knn"


@dataclass(frozen=True)
class SpatialWeights:
    """
    Neighborhood ids in observation order, over a libpysal W keyed by observation
    index 0..n-1 with sorted neighbor lists.
    """

    ids: List[int]
    w: W

    @property
    def n(self) -> int:
        return len(self.ids)

    @cached_property
    def neighbors(self) -> List[List[int]]:
        return [list(self.w.neighbors[i]) for i in range(self.n)]

    @cached_property
    def weights(self) -> List[np.ndarray]:
        return [np.asarray(self.w.weights[i], dtype=np.float64) for i in range(self.n)]

    @property
    def row_standardized(self) -> bool:
        return self.w.transform.upper() == "R"

    @property
    def islands(self) -> List[int]:
        return sorted(self.w.islands)

    @property
    def s0(self) -> float:
        return float(self.w.s0)

    def sparse(self) -> sparse.csr_matrix:
        return sparse.csr_matrix(self.w.sparse)

    def lag(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(lag_spatial(self.w, np.asarray(z, dtype=np.float64)), dtype=np.float64)


def from_neighbors(
    ids: Sequence[int], neighbors: Sequence[Sequence[int]], row_standardize: bool = True
) -> SpatialWeights:
    """Binary weights over the given neighbor lists, row-standardized by default."""
    if len(neighbors) != len(ids):
        raise ComputeError(f"{len(neighbors)} neighbor lists for {len(ids)} ids")
    neighbors = [sorted(set(int(j) for j in nbrs)) for nbrs in neighbors]
    for i, nbrs in enumerate(neighbors):
        if i in nbrs:
            raise ComputeError(f"observation {ids[i]} neighbors itself")
        if any(j < 0 or j >= len(ids) for j in nbrs):
            raise ComputeError(f"observation {ids[i]} has a neighbor index out of range")

    order = list(range(len(ids)))
    w = W(
        {i: neighbors[i] for i in order},
        {i: [1.0] * len(neighbors[i]) for i in order},
        id_order=order,
        silence_warnings=True,
    )
    w.transform = "r" if row_standardize else "b"
    return SpatialWeights(ids=list(ids), w=w)


def _merged_geometries(hoods: Sequence[Neighborhood]):
    ids, geoms = [], []
    for hood_id, records in group_neighborhoods(hoods).items():
        ids.append(hood_id)
        if len(records) == 1:
            geoms.append(records[0].boundary.geometry)
        else:
            geoms.append(MultiPolygon([r.boundary.geometry for r in records]))
    return ids, geoms


def queen_neighbors(geoms) -> List[List[int]]:
    """
    Boundaries grown by half the snap tolerance that intersect are neighbors, so any
    shared vertex, shared edge or gap narrower than SNAP_TOLERANCE counts.
    """
    frame = gpd.GeoDataFrame(geometry=list(geoms))
    fuzzy = fuzzy_contiguity(
        frame, buffering=True, buffer=SNAP_TOLERANCE / 2, silence_warnings=True
    )
    return [sorted(int(j) for j in fuzzy.neighbors.get(i, []) if j != i) for i in range(len(frame))]


def knn_neighbors(centroids: np.ndarray, k: int) -> List[List[int]]:
    n = len(centroids)
    if k < 1 or k >= n:
        raise ComputeError(f"knn needs 1 <= k < n, got k={k} with n={n}")
    d = cdist(centroids, centroids)
    np.fill_diagonal(d, np.inf)
    # stable sort breaks distance ties by index
    order = np.argsort(d, axis=1, kind="stable")
    return [sorted(int(j) for j in order[i, :k]) for i in range(n)]


def build_weights(
    hoods: Sequence[Neighborhood],
    scheme: WeightsScheme = WeightsScheme.QUEEN,
    k: int = 4,
    ids: Optional[Sequence[int]] = None,
    row_standardize: bool = True,
) -> SpatialWeights:
    """
    Spatial weights over neighborhoods (MultiPolygon parts merged by id).

    `ids` restricts the observations, e.g. to neighborhoods with a defined value;
    observations follow first-appearance order of the ids in `hoods`.
    """
    all_ids, geoms = _merged_geometries(hoods)
    if ids is not None:
        wanted = set(ids)
        keep = [i for i, hid in enumerate(all_ids) if hid in wanted]
        all_ids = [all_ids[i] for i in keep]
        geoms = [geoms[i] for i in keep]
    if len(all_ids) < 2:
        raise ComputeError(f"spatial weights need at least 2 neighborhoods, got {len(all_ids)}")

    scheme = WeightsScheme(scheme)
    if scheme == WeightsScheme.QUEEN:
        neighbors = queen_neighbors(geoms)
    else:
        centroids = np.array([[g.centroid.x, g.centroid.y] for g in geoms])
        neighbors = knn_neighbors(centroids, k)

    w = from_neighbors(all_ids, neighbors, row_standardize)
    if w.islands:
        isolated = [w.ids[i] for i in w.islands]
        logger.warning(f"{len(isolated)} neighborhoods have no neighbors: {isolated}")
    logger.info(f"built {scheme.value} weights over {w.n} neighborhoods, s0 = {w.s0}")
    return w
