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

from resil_fuse.stats.aggregate import (
    NeighborhoodValue,
    aggregate,
    assign_cells,
    group_neighborhoods,
)
from resil_fuse.stats.weights import (
    SNAP_TOLERANCE,
    SpatialWeights,
    WeightsScheme,
    build_weights,
    from_neighbors,
    knn_neighbors,
    queen_neighbors,
)
from resil_fuse.stats.lisa import (
    MIN_PERMUTATIONS,
    LisaResult,
    Quadrant,
    classify,
    global_morans_i,
    lisa,
    local_morans_i,
    permutation_p,
)

__all__ = [
    "NeighborhoodValue",
    "aggregate",
    "assign_cells",
    "group_neighborhoods",
    "SNAP_TOLERANCE",
    "SpatialWeights",
    "WeightsScheme",
    "build_weights",
    "from_neighbors",
    "knn_neighbors",
    "queen_neighbors",
    "MIN_PERMUTATIONS",
    "LisaResult",
    "Quadrant",
    "classify",
    "global_morans_i",
    "lisa",
    "local_morans_i",
    "permutation_p",
]
