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

from resil_fuse.geo.geo_core import (
    EARTH_RADIUS,
    GeoPoint,
    PlanarPoint,
    Polygon,
    project,
    unproject,
    dataset_origin,
    distance,
    contains,
)

__all__ = [
    "EARTH_RADIUS",
    "GeoPoint",
    "PlanarPoint",
    "Polygon",
    "project",
    "unproject",
    "dataset_origin",
    "distance",
    "contains",
]
