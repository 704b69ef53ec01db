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

from resil_fuse.ingest.raster import (
    GridHeader,
    Raster,
    PopulationRaster,
    PopulationGroupRaster,
    load_raster,
    load_group_raster,
    read_grid,
    write_raster,
)
from resil_fuse.ingest.structures import (
    SocialStructure,
    load_structures,
    category_from_tags,
    read_feature_collection,
)
from resil_fuse.ingest.neighborhoods import Neighborhood, load_neighborhoods

__all__ = [
    "GridHeader",
    "Raster",
    "PopulationRaster",
    "PopulationGroupRaster",
    "load_raster",
    "load_group_raster",
    "read_grid",
    "write_raster",
    "SocialStructure",
    "load_structures",
    "category_from_tags",
    "read_feature_collection",
    "Neighborhood",
    "load_neighborhoods",
]
