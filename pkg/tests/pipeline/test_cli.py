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
import shutil

import pytest
from typer.testing import CliRunner

from resil_fuse.common.errors import EXIT_COMPUTE, EXIT_CONFIG, EXIT_INGEST
from resil_fuse.pipeline.cli import app

runner = CliRunner()


@pytest.fixture(scope="module")
def toy_dir(tmp_path_factory):
    root = str(tmp_path_factory.mktemp("cli"))
    result = runner.invoke(app, ["toy-city", root])
    assert result.exit_code == 0, result.output
    return root


def _config(root):
    return os.path.join(root, "run_config.yaml")


def test_validate(toy_dir):
    result = runner.invoke(app, ["validate", "--config", _config(toy_dir)])
    assert result.exit_code == 0, result.output
    assert "ok: 200 structures, 25 neighborhoods, population grid 200x200" in result.output


def test_run_and_stages(toy_dir, tmp_path):
    out = str(tmp_path / "out")
    result = runner.invoke(app, ["run", "-c", _config(toy_dir), "--out", out, "--seed", "3"])
    assert result.exit_code == 0, result.output
    assert os.path.isfile(os.path.join(out, "report.md"))

    staged = str(tmp_path / "staged")
    for command in (["layers"], ["fuse"], ["lisa", "--seed", "3"], ["report"]):
        result = runner.invoke(app, command + ["-c", _config(toy_dir), "-o", staged])
        assert result.exit_code == 0, result.output
    with open(os.path.join(out, "lisa.csv")) as a, open(os.path.join(staged, "lisa.csv")) as b:
        assert a.read() == b.read()


def test_missing_population_exits_with_config_code(toy_dir, tmp_path):
    broken = str(tmp_path / "broken")
    shutil.copytree(toy_dir, broken)
    missing = os.path.join(broken, "data", "population.asc")
    os.remove(missing)
    result = runner.invoke(app, ["run", "-c", _config(broken)])
    assert result.exit_code == EXIT_CONFIG
    assert missing in result.output
    assert not os.path.exists(os.path.join(broken, "out"))


def test_malformed_input_exits_with_ingest_code(toy_dir, tmp_path):
    broken = str(tmp_path / "malformed")
    shutil.copytree(toy_dir, broken)
    with open(os.path.join(broken, "data", "structures.geojson"), "w") as f:
        f.write('{"type": "FeatureCollection", "features": [')
    result = runner.invoke(app, ["validate", "-c", _config(broken)])
    assert result.exit_code == EXIT_INGEST
    assert "structures.geojson" in result.output


def test_compute_failure_exits_with_compute_code(toy_dir, tmp_path):
    broken = str(tmp_path / "knn")
    shutil.copytree(toy_dir, broken)
    config = _config(broken)
    with open(config) as f:
        text = f.read()
    with open(config, "w") as f:
        f.write(text.replace("weights: queen", "weights: knn").replace("k: 4", "k: 40"))
    result = runner.invoke(app, ["run", "-c", config])
    assert result.exit_code == EXIT_COMPUTE
    assert "k=40" in result.output


def test_missing_config():
    result = runner.invoke(app, ["run", "-c", "/nonexistent/run_config.yaml"])
    assert result.exit_code == EXIT_CONFIG


if __name__ == "__main__":
    pytest.main(["-v", __file__])
