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

import pytest
from pydantic_yaml import parse_yaml_raw_as

from resil_fuse.common.errors import ConfigError
from resil_fuse.pipeline.run_config import RUN_CONFIG_TEMPLATE, RunConfig, load_run_config
from resil_fuse.pipeline.toy_city import write_toy_city
from resil_fuse.stats.weights import WeightsScheme


@pytest.fixture(scope="module")
def toy_config(tmp_path_factory):
    return write_toy_city(str(tmp_path_factory.mktemp("toy")))


def test_template_parses():
    with open(RUN_CONFIG_TEMPLATE) as f:
        config = parse_yaml_raw_as(RunConfig, f)
    assert config.analysis.weights == WeightsScheme.QUEEN
    assert config.analysis.n_perm == 999
    assert config.analysis.alpha_report == 0.001
    assert config.inputs.ontology is None
    assert config.projection.origin.lat == -6.2


def test_paths_resolve_against_config_dir(toy_config):
    config = load_run_config(toy_config)
    base = os.path.dirname(toy_config)
    assert config.inputs.population == os.path.join(base, "data", "population.asc")
    expected = os.path.join(base, "data", "muslim_fraction.asc")
    assert config.inputs.group_rasters["muslim"] == expected
    assert config.output_dir == os.path.join(base, "out")
    assert set(config.input_files()) == {
        "structures",
        "neighborhoods",
        "population",
        "group_raster:muslim",
    }


def test_overrides(toy_config, tmp_path):
    config = load_run_config(toy_config, workers=3, seed=42, output_dir=str(tmp_path / "elsewhere"))
    assert config.workers == 3
    assert config.analysis.seed == 42
    assert config.output_dir == str(tmp_path / "elsewhere")
    with pytest.raises(ConfigError, match="workers"):
        load_run_config(toy_config, workers=0)


def _write(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


def _minimal(analysis=""):
    return (
        "inputs:\n"
        "  structures: s.geojson\n"
        "  neighborhoods: n.geojson\n"
        "  population: p.asc\n"
        "projection:\n"
        "  origin_lon: 106.8\n"
        "  origin_lat: -6.2\n" + analysis
    )


def test_missing_input_names_the_path(tmp_path):
    for name in ("s.geojson", "n.geojson"):
        (tmp_path / name).write_text("{}")
    with pytest.raises(ConfigError) as e:
        load_run_config(_write(tmp_path, _minimal()))
    assert "population" in str(e.value)
    assert str(tmp_path / "p.asc") in str(e.value)


@pytest.mark.parametrize(
    "analysis, message",
    [
        ("analysis:\n  n_perm: 50\n", "n_perm"),
        ("analysis:\n  alpha_map: 0.01\n  alpha_report: 0.05\n", "alpha_report"),
        ("analysis:\n  alpha_map: 1.5\n", "alpha"),
        ("analysis:\n  weights: rook\n", "weights"),
        ("analysis:\n  k: 0\n", "k must be"),
    ],
)
def test_invalid_analysis(tmp_path, analysis, message):
    with pytest.raises(ConfigError, match=message):
        load_run_config(_write(tmp_path, _minimal(analysis)))


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError, match="does not exist"):
        load_run_config(str(tmp_path / "absent.yaml"))
    with pytest.raises(ConfigError):
        load_run_config(_write(tmp_path, "inputs: [\n"))
    with pytest.raises(ConfigError, match="origin_lat"):
        load_run_config(_write(tmp_path, _minimal().replace("-6.2", "-95")))


if __name__ == "__main__":
    pytest.main(["-v", __file__])
