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
from typing import List, Optional

from resil_fuse.common.errors import GeometryError, IngestError
from resil_fuse.common.logging import logger
from resil_fuse.geo.geo_core import GeoPoint, Polygon, dataset_origin, project
from resil_fuse.ingest.structures import read_feature_collection


@dataclass(frozen=True)
class Neighborhood:
    """One boundary record. MultiPolygon parts share the id of their feature."""

    id: int
    name: str
    boundary: Polygon


def _project_rings(rings, origin: GeoPoint):
    return [
        [tuple(project(GeoPoint(lon=pt[0], lat=pt[1]), origin)) for pt in ring] for ring in rings
    ]


def _feature_parts(geometry, fid, path):
    kind = geometry.get("type")
    if kind == "Polygon":
        return [geometry["coordinates"]]
    if kind == "MultiPolygon":
        return list(geometry["coordinates"])
    raise IngestError(f"{path}: feature {fid} is a {kind}, neighborhoods must be (Multi)Polygons")


def load_neighborhoods(path: str, origin: Optional[GeoPoint] = None) -> List[Neighborhood]:
    data = read_feature_collection(path)
    features = data.get("features", [])

    parsed = []
    seen = set()
    for index, feature in enumerate(features):
        props = feature.get("properties") or {}
        raw_id = props.get("id", feature.get("id"))
        try:
            hood_id = int(raw_id)
        except (TypeError, ValueError):
            raise IngestError(f"{path}: feature {index} has no integer id (got {raw_id!r})")
        if hood_id in seen:
            raise IngestError(f"{path}: duplicate neighborhood id {hood_id}")
        seen.add(hood_id)
        name = str(props.get("name", hood_id))
        parts = _feature_parts(feature.get("geometry") or {}, hood_id, path)
        parsed.append((hood_id, name, parts))

    if origin is None:
        vertices = [
            GeoPoint(lon=pt[0], lat=pt[1])
            for _, _, parts in parsed
            for rings in parts
            for pt in rings[0]
        ]
        origin = dataset_origin(vertices)

    hoods = []
    for hood_id, name, parts in parsed:
        for rings in parts:
            try:
                boundary = Polygon.from_rings(_project_rings(rings, origin))
            except GeometryError as e:
                raise GeometryError(f"{path}: neighborhood {hood_id} ({name}): {e}")
            hoods.append(Neighborhood(id=hood_id, name=name, boundary=boundary))

    logger.info(f"loaded {len(parsed)} neighborhoods ({len(hoods)} boundary records) from {path}")
    return hoods
