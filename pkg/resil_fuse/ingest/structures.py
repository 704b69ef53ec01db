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

import functools
import json
import os
from collections import Counter
from typing import Any, Dict, List, Optional

import geojson
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator, validator
from pydantic_yaml import parse_yaml_raw_as

from resil_fuse.common.errors import IngestError, UnknownCategoryError
from resil_fuse.common.logging import logger
from resil_fuse.geo.geo_core import GeoPoint, PlanarPoint, dataset_origin, project
from resil_fuse.ontology.ontology_config import Access, Ontology

_cur = os.path.dirname(os.path.abspath(__file__))
OSM_TAGS_PATH = os.path.join(_cur, "osm_tags.yaml")


class SocialStructure(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    category: str
    location: GeoPoint
    # persons the structure serves at once, e.g. beds or seats
    capacity: float
    group: Optional[str] = None
    access: Access = Access.OPEN
    # planar location in the run's projection frame, set by the loader
    position: Optional[PlanarPoint] = None

    @validator("capacity")
    def _check_capacity(cls, v: float):
        assert v > 0, f"capacity must be positive, got {v}"
        return v

    @validator("category")
    def _check_category(cls, v: str):
        assert v, "category must not be empty"
        return v

    @model_validator(mode="after")
    def _check_restricted_group(self) -> "SocialStructure":
        if self.access == Access.RESTRICTED and not self.group:
            raise ValueError(f"structure {self.id} has restricted access but no group")
        return self


class OsmTagRule(BaseModel):
    tags: Dict[str, str]
    category: str
    group_from: Optional[str] = None


class OsmTagMap(BaseModel):
    rules: List[OsmTagRule]


@functools.lru_cache(maxsize=None)
def load_osm_tag_map(path: str = OSM_TAGS_PATH) -> OsmTagMap:
    with open(path, "r") as f:
        return parse_yaml_raw_as(OsmTagMap, f)


def category_from_tags(props: Dict[str, Any], tag_map: Optional[OsmTagMap] = None):
    """Return (category, group) for the first matching rule, or (None, None)."""
    tag_map = tag_map or load_osm_tag_map()
    for rule in tag_map.rules:
        if all(str(props.get(k)) == v for k, v in rule.tags.items()):
            group = props.get(rule.group_from) if rule.group_from else None
            return rule.category, group
    return None, None


def read_feature_collection(path: str) -> geojson.FeatureCollection:
    if not os.path.isfile(path):
        raise IngestError(f"GeoJSON file {path} does not exist")
    try:
        with open(path, "r") as f:
            data = geojson.load(f)
    except json.JSONDecodeError as e:
        raise IngestError(f"{path}:{e.lineno}:{e.colno}: malformed GeoJSON: {e.msg}")
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise IngestError(f"{path}: expected a GeoJSON FeatureCollection")
    return data


def feature_id(feature: Dict[str, Any], index: int) -> str:
    props = feature.get("properties") or {}
    fid = props.get("id", feature.get("id"))
    return str(fid) if fid is not None else str(index)


def load_structures(
    path: str,
    ontology: Ontology,
    origin: Optional[GeoPoint] = None,
    permissive: bool = False,
) -> List[SocialStructure]:
    """
    Load point structures from a GeoJSON FeatureCollection, in file order.

    Missing capacity falls back to the category's default. Unknown categories are an
    error unless `permissive`, in which case the feature is dropped with a warning.
    Structures are projected about `origin`, or the mean of their own locations.
    """
    data = read_feature_collection(path)
    raw = []
    for index, feature in enumerate(data.get("features", [])):
        fid = feature_id(feature, index)
        geometry = feature.get("geometry") or {}
        if geometry.get("type") != "Point":
            raise IngestError(
                f"{path}: feature {fid} is a {geometry.get('type')}, structures must be Points"
            )
        props = dict(feature.get("properties") or {})
        category, group = props.get("category"), props.get("group")
        if not category:
            category, tag_group = category_from_tags(props)
            group = group or tag_group
        if not category:
            raise IngestError(f"{path}: feature {fid} has no category and no known OSM tags")
        try:
            spec = ontology.category(category)
        except UnknownCategoryError:
            if permissive:
                logger.warning(f"{path}: dropping feature {fid} with unknown category {category}")
                continue
            raise IngestError(f"{path}: feature {fid} has unknown category {category}")

        capacity = props.get("capacity")
        if capacity is None:
            capacity = spec.default_capacity
        lon, lat = geometry["coordinates"][:2]
        try:
            raw.append(
                SocialStructure(
                    id=fid,
                    category=category,
                    location=GeoPoint(lon=lon, lat=lat),
                    capacity=capacity,
                    group=group,
                    access=props.get("access", Access.OPEN),
                )
            )
        except ValidationError as e:
            raise IngestError(f"{path}: feature {fid}: {e}")

    if origin is None and raw:
        origin = dataset_origin(s.location for s in raw)
    structures = [
        s.model_copy(update={"position": project(s.location, origin)}) for s in raw
    ]

    unknown_groups = {s.group for s in structures if s.group} - set(ontology.groups)
    if ontology.groups and unknown_groups:
        logger.warning(f"{path}: groups {sorted(unknown_groups)} are not listed in the ontology")
    counts = Counter(s.category for s in structures)
    logger.info(f"loaded {len(structures)} structures from {path}: {dict(sorted(counts.items()))}")
    return structures
