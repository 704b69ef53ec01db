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
from typing import Dict, Optional

from pydantic import BaseModel, ValidationError, model_validator, validator
from pydantic_yaml import parse_yaml_raw_as

from resil_fuse.common.errors import ConfigError
from resil_fuse.geo.geo_core import GeoPoint
from resil_fuse.stats.lisa import MIN_PERMUTATIONS
from resil_fuse.stats.weights import WeightsScheme

_cur = os.path.dirname(os.path.abspath(__file__))
RUN_CONFIG_TEMPLATE = os.path.join(_cur, "configs", "run_config_template.yaml")


class Inputs(BaseModel):
    structures: str
    neighborhoods: str
    population: str
    # None selects the bundled urban resilience ontology
    ontology: Optional[str] = None
    group_rasters: Dict[str, str] = {}


class Projection(BaseModel):
    origin_lon: float
    origin_lat: float

    @validator("origin_lon")
    def check_origin_lon(cls, v: float):
        assert -180.0 <= v <= 180.0, f"origin_lon {v} out of [-180, 180]"
        return v

    @validator("origin_lat")
    def check_origin_lat(cls, v: float):
        assert -90.0 < v < 90.0, f"origin_lat {v} out of (-90, 90)"
        return v

    @property
    def origin(self) -> GeoPoint:
        return GeoPoint(lon=self.origin_lon, lat=self.origin_lat)


class Analysis(BaseModel):
    weights: WeightsScheme = WeightsScheme.QUEEN
    k: int = 4
    n_perm: int = 999
    seed: int = 0
    alpha_map: float = 0.05
    alpha_report: float = 0.001
    bonferroni: bool = False
    raw_local_i: bool = False
    permissive: bool = False

    @validator("k")
    def check_k(cls, v: int):
        assert v >= 1, f"k must be >= 1, got {v}"
        return v

    @validator("n_perm")
    def check_n_perm(cls, v: int):
        assert v >= MIN_PERMUTATIONS, f"n_perm must be >= {MIN_PERMUTATIONS}, got {v}"
        return v

    @validator("alpha_map", "alpha_report")
    def check_alpha(cls, v: float):
        assert 0.0 < v < 1.0, f"alpha must lie in (0, 1), got {v}"
        return v

    @model_validator(mode="after")
    def check_alpha_order(self) -> "Analysis":
        if self.alpha_report > self.alpha_map:
            raise ValueError(
                f"alpha_report {self.alpha_report} must not exceed alpha_map {self.alpha_map}"
            )
        return self


class RunConfig(BaseModel):
    inputs: Inputs
    projection: Projection
    analysis: Analysis = Analysis()
    output_dir: str = "out"
    workers: int = 1

    @validator("workers")
    def check_workers(cls, v: int):
        assert v >= 1, f"workers must be >= 1, got {v}"
        return v

    def resolve_paths(self, base_dir: str) -> "RunConfig":
        """Copy with every relative path made absolute against `base_dir`."""

        def resolve(path: Optional[str]) -> Optional[str]:
            if path is None:
                return None
            return os.path.normpath(os.path.join(base_dir, os.path.expanduser(path)))

        inputs = self.inputs.model_copy(
            update={
                "structures": resolve(self.inputs.structures),
                "neighborhoods": resolve(self.inputs.neighborhoods),
                "population": resolve(self.inputs.population),
                "ontology": resolve(self.inputs.ontology),
                "group_rasters": {g: resolve(p) for g, p in self.inputs.group_rasters.items()},
            }
        )
        return self.model_copy(update={"inputs": inputs, "output_dir": resolve(self.output_dir)})

    def input_files(self) -> Dict[str, str]:
        files = {
            "structures": self.inputs.structures,
            "neighborhoods": self.inputs.neighborhoods,
            "population": self.inputs.population,
        }
        if self.inputs.ontology is not None:
            files["ontology"] = self.inputs.ontology
        for group, path in self.inputs.group_rasters.items():
            files[f"group_raster:{group}"] = path
        return files

    def check_inputs(self):
        for role, path in self.input_files().items():
            if not os.path.isfile(path):
                raise ConfigError(f"{role} file {path} does not exist")


def load_run_config(
    path: str,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
    output_dir: Optional[str] = None,
) -> RunConfig:
    """
    Parse a YAML run config, apply command-line overrides and resolve relative paths
    against the config file's directory (the output override against the cwd).
    """
    if not os.path.isfile(path):
        raise ConfigError(f"config file {path} does not exist")
    try:
        with open(path, "r") as f:
            config = parse_yaml_raw_as(RunConfig, f)
    except ValidationError as e:
        raise ConfigError(f"invalid run config {path}: {e}")
    except Exception as e:
        raise ConfigError(f"cannot parse run config {path}: {e}")

    config = config.resolve_paths(os.path.dirname(os.path.abspath(path)))
    if workers is not None:
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")
        config = config.model_copy(update={"workers": workers})
    if seed is not None:
        analysis = config.analysis.model_copy(update={"seed": seed})
        config = config.model_copy(update={"analysis": analysis})
    if output_dir is not None:
        config = config.model_copy(update={"output_dir": os.path.abspath(output_dir)})
    config.check_inputs()
    return config
