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

import math

import numpy as np
import pytest

from resil_fuse.catchment.catchment import CatchmentResult
from resil_fuse.common.errors import ComputeError, UnknownCategoryError
from resil_fuse.common.parallel import split_range
from resil_fuse.density.density import _render_band, amplitude, render_layer, render_layers
from resil_fuse.ontology.ontology_config import Access, CapitalKind

from basic_set import make_header, make_ontology, make_structure


def _catchment(population, f=1.0):
    return CatchmentResult(structure_id="s", population=population, ingroup_fraction=f)


def _weighted_ontology(w):
    return make_ontology(
        {
            "thing": {
                "base_weight": w,
                "bandwidth": 100.0,
                "default_capacity": 1,
                "layer": "things",
            }
        }
    )


def test_amplitude_examples():
    ont = _weighted_ontology(0.5)
    s = make_structure("s", "thing", 0, 0, capacity=100)
    assert amplitude(s, _catchment(1000.0), ont) == 0.05

    ont = _weighted_ontology(0.0)
    assert amplitude(s, _catchment(1000.0), ont) == 0.0

    ont = _weighted_ontology(-0.6)
    s = make_structure("s", "thing", 0, 0, capacity=300)
    assert amplitude(s, _catchment(600.0), ont) == pytest.approx(-0.3, abs=1e-15)


def test_amplitude_population_floor():
    ont = _weighted_ontology(0.5)
    s = make_structure("s", "thing", 0, 0, capacity=40)
    assert amplitude(s, _catchment(0.0), ont) == 20.0
    assert amplitude(s, _catchment(0.5), ont) == 20.0


def test_amplitude_random_triples():
    rng = np.random.default_rng(21)
    weights, capacities = rng.uniform(-1, 1, 100), rng.uniform(1, 1000, 100)
    for w, c, p in zip(weights, capacities, rng.uniform(0, 5000, 100)):
        ont = _weighted_ontology(float(w))
        s = make_structure("s", "thing", 0, 0, capacity=float(c))
        assert amplitude(s, _catchment(float(p)), ont) == float(w) * float(c) / max(float(p), 1.0)


def test_amplitude_restricted_uses_fraction():
    ont = make_ontology()
    mosque = make_structure("m", "place_of_worship", 0, 0, 100, Access.RESTRICTED, "muslim")
    assert amplitude(mosque, _catchment(100.0, f=0.0), ont) == pytest.approx(-0.6)


def test_amplitude_unknown_category():
    with pytest.raises(UnknownCategoryError):
        amplitude(make_structure("s", "casino", 0, 0), _catchment(1.0), make_ontology())


def _render(structures, amplitudes, header=None, ont=None, kinds=None, workers=1):
    header = header or make_header(21, 21, 100.0)
    ont = ont or make_ontology()
    return render_layer(
        "medical", structures, amplitudes, header, ont, kinds=kinds, workers=workers
    )


def test_single_peak_and_one_sigma():
    # clinic bandwidth is 100 m, one cell
    layer = _render([make_structure("a", "clinic", 1050.0, 1050.0)], [1.0])
    assert layer.grid[10, 10] == 1.0
    assert layer.grid[10, 11] == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert layer.grid[9, 10] == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert layer.structure_count == 1
    assert np.all(np.isfinite(layer.grid))


def test_superposition_of_identical_structures():
    s = make_structure("a", "clinic", 1050.0, 1050.0)
    layer = _render([s, s], [1.0, 1.0])
    assert layer.grid[10, 10] == 2.0


def test_negative_amplitude():
    layer = _render([make_structure("a", "clinic", 1050.0, 1050.0)], [-0.3])
    assert layer.grid.min() == -0.3
    assert layer.grid.max() == 0.0


def test_isolated_peak_off_center():
    x, y = 1080.0, 1035.0
    layer = _render([make_structure("a", "clinic", x, y)], [2.5])
    # nearest cell center is (1050, 1050)
    assert np.unravel_index(np.argmax(layer.grid), layer.grid.shape) == (10, 10)
    d0_sq = (1050.0 - x) ** 2 + (1050.0 - y) ** 2
    assert layer.grid[10, 10] == pytest.approx(2.5 * math.exp(-d0_sq / (2 * 100.0**2)), abs=1e-12)


def test_linearity():
    rng = np.random.default_rng(8)
    s1 = [make_structure(f"a{i}", "clinic", *rng.uniform(0, 2100, 2)) for i in range(6)]
    s2 = [make_structure(f"b{i}", "clinic", *rng.uniform(0, 2100, 2)) for i in range(6)]
    a1 = list(rng.uniform(-1, 1, 6))
    a2 = list(rng.uniform(-1, 1, 6))
    union = _render(s1 + s2, a1 + a2).grid
    parts = _render(s1, a1).grid + _render(s2, a2).grid
    np.testing.assert_allclose(union, parts, rtol=1e-9, atol=1e-15)


def test_truncation_bound():
    rng = np.random.default_rng(9)
    structures = [make_structure(f"a{i}", "clinic", *rng.uniform(0, 2100, 2)) for i in range(8)]
    amps = list(rng.uniform(-1, 1, 8))
    truncated = _render(structures, amps).grid
    full = _render(structures, amps, ont=make_ontology(truncation_sigmas=50.0)).grid
    assert np.abs(full - truncated).max() <= 3.4e-4 * np.abs(amps).sum()


def test_row_bands_match_whole_grid():
    rng = np.random.default_rng(10)
    header = make_header(37, 29, 100.0)
    xs = rng.uniform(-300, 4000, 15)
    ys = rng.uniform(-300, 3200, 15)
    amps = rng.uniform(-1, 1, 15)
    sigmas = rng.choice([100.0, 250.0, 400.0], 15)
    bonding = rng.random(15) < 0.5
    whole = _render_band(0, header.nrows, xs, ys, amps, sigmas, bonding, header, 4.0)
    for chunks in (2, 3, 7):
        bands = [
            _render_band(a, b, xs, ys, amps, sigmas, bonding, header, 4.0)
            for a, b in split_range(header.nrows, chunks)
        ]
        for part in range(3):
            np.testing.assert_array_equal(np.vstack([band[part] for band in bands]), whole[part])


def test_single_row_band_evaluates_only_its_row():
    header = make_header(10, 10, 100.0)
    xs, ys = np.array([550.0]), np.array([550.0])
    grid, bridging, bonding = _render_band(
        4, 5, xs, ys, np.array([1.0]), np.array([100.0]), np.array([False]), header, 4.0
    )
    assert grid.shape == (1, 10)
    assert grid[0, 5] == 1.0
    assert grid[0, 6] == pytest.approx(math.exp(-0.5), rel=1e-12)
    np.testing.assert_array_equal(bridging, grid)
    assert not bonding.any()


def test_bridging_bonding_partition():
    structures = [
        make_structure("a", "clinic", 550.0, 550.0),
        make_structure("b", "clinic", 750.0, 650.0),
    ]
    layer = _render(structures, [1.0, 0.5], kinds=[CapitalKind.BRIDGING, CapitalKind.BONDING])
    np.testing.assert_allclose(layer.grid, layer.bridging + layer.bonding, rtol=1e-12, atol=1e-15)
    assert layer.bridging[15, 5] == 1.0
    assert layer.bonding[14, 7] == 0.5


def test_render_layer_errors():
    with pytest.raises(ComputeError, match="amplitudes"):
        _render([make_structure("a", "clinic", 0, 0)], [])
    unprojected = make_structure("a", "clinic", 0, 0).model_copy(update={"position": None})
    with pytest.raises(ComputeError, match="projected"):
        _render([unprojected], [1.0])


def test_render_layers_includes_empty_layers():
    ont = make_ontology()
    header = make_header(10, 10, 100.0)
    structures = [make_structure("a", "clinic", 500.0, 500.0, capacity=10)]
    layers, kernels = render_layers(structures, [_catchment(100.0)], header, ont)
    assert [l.layer_name for l in layers] == ["medical", "worship", "community", "transit"]
    assert [l.structure_count for l in layers] == [1, 0, 0, 0]
    assert not layers[1].grid.any()
    assert kernels[0].amplitude == 0.05
    assert kernels[0].kind == CapitalKind.BRIDGING
    with pytest.raises(ComputeError):
        render_layers(structures, [], header, ont)


if __name__ == "__main__":
    pytest.main(["-v", __file__])
