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

import os
from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator, validator
from pydantic_yaml import parse_yaml_raw_as

from resil_fuse.common.errors import ConfigError, UnknownCategoryError
from resil_fuse.ontology.modifier import WeightModifier

_cur = os.path.dirname(os.path.abspath(__file__))
DEFAULT_ONTOLOGY_PATH = os.path.join(_cur, "ontologies", "urban_resilience.yaml")

TRANSIT_LAYER = "transit"


class Access(str, Enum):
    OPEN = "open"
    RESTRICTED = "restricted"


class CapitalKind(str, Enum):
    BRIDGING = "bridging"
    BONDING = "bonding"
    CONTEXT_DEPENDENT = "context_dependent"


class CategorySpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = ""
    base_weight: float
    # Gaussian kernel bandwidth sigma, meters
    bandwidth: float
    # unset means: transit half-mile rule or the ontology default
    catchment_radius: Optional[float] = None
    default_capacity: float
    layer: str
    capital_kind: CapitalKind = CapitalKind.BRIDGING
    context_threshold: float = 0.5

    @validator("base_weight")
    def _check_base_weight(cls, v: float):
        assert -1.0 <= v <= 1.0, f"base_weight {v} out of [-1, 1]"
        return v

    @validator("bandwidth")
    def _check_bandwidth(cls, v: float):
        assert v > 0, f"bandwidth must be positive, got {v}"
        return v

    @validator("catchment_radius")
    def _check_catchment_radius(cls, v: Optional[float]):
        if v is not None:
            assert v > 0, f"catchment_radius must be positive, got {v}"
        return v

    @validator("default_capacity")
    def _check_default_capacity(cls, v: float):
        assert v > 0, f"default_capacity must be positive, got {v}"
        return v

    @validator("context_threshold")
    def _check_context_threshold(cls, v: float):
        assert 0.0 <= v <= 1.0, f"context_threshold {v} out of [0, 1]"
        return v


class Ontology(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = "default"
    # lower bound on catchment population used in the amplitude denominator
    p_floor: float = 1.0
    # kernels are cut off beyond this many bandwidths
    truncation_sigmas: float = 4.0
    modifier: str = "linear"
    default_catchment_radius: float = 1000.0
    layer_weights: Dict[str, float] = {}
    groups: List[str] = []
    categories: Dict[str, CategorySpec]

    @validator("p_floor")
    def _check_p_floor(cls, v: float):
        assert v > 0, f"p_floor must be positive, got {v}"
        return v

    @validator("truncation_sigmas")
    def _check_truncation(cls, v: float):
        assert v > 0, f"truncation_sigmas must be positive, got {v}"
        return v

    @validator("default_catchment_radius")
    def _check_default_radius(cls, v: float):
        assert v > 0, f"default_catchment_radius must be positive, got {v}"
        return v

    @validator("modifier")
    def _check_modifier(cls, v: str):
        assert v in WeightModifier.registry, f"unknown weight modifier {v}"
        return v

    @model_validator(mode="before")
    @classmethod
    def _fill_names_and_layers(cls, data):
        if not isinstance(data, dict):
            return data
        categories = {}
        for key, spec in (data.get("categories") or {}).items():
            if isinstance(spec, dict):
                spec = {**spec, "name": key}
            categories[key] = spec
        data = {**data, "categories": categories}
        layer_weights = dict(data.get("layer_weights") or {})
        for spec in categories.values():
            layer = spec.get("layer") if isinstance(spec, dict) else spec.layer
            layer_weights.setdefault(layer, 1.0)
        data["layer_weights"] = layer_weights
        return data

    def category(self, name: str) -> CategorySpec:
        spec = self.categories.get(name)
        if spec is None:
            raise UnknownCategoryError(name)
        return spec

    def layer_names(self) -> List[str]:
        """Layers in first-appearance order of the categories."""
        names: List[str] = []
        for spec in self.categories.values():
            if spec.layer not in names:
                names.append(spec.layer)
        return names

    def layer_weight(self, layer: str) -> float:
        return self.layer_weights.get(layer, 1.0)


def load_ontology(path: Union[str, None] = None) -> Ontology:
    if path is None:
        path = DEFAULT_ONTOLOGY_PATH
    if not os.path.isfile(path):
        raise ConfigError(f"ontology file {path} does not exist")
    try:
        with open(path, "r") as f:
            return parse_yaml_raw_as(Ontology, f)
    except ValidationError as e:
        raise ConfigError(f"invalid ontology {path}: {e}")
    except Exception as e:
        raise ConfigError(f"cannot parse ontology {path}: {e}")
