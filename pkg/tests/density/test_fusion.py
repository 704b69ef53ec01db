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

import numpy as np
import pytest

from resil_fuse.catchment.catchment import compute_catchments
from resil_fuse.common.errors import ComputeError
from resil_fuse.density.density import render_layer, render_layers
from resil_fuse.density.fusion import fuse
from resil_fuse.ontology.ontology_config import Access, CapitalKind

from basic_set import (
    make_group_raster,
    make_header,
    make_ontology,
    make_population,
    make_structure,
)


def _layer(name, header, points, amplitudes, kinds=None):
    ont = make_ontology()
    structures = [make_structure(f"{name}{i}", "clinic", x, y) for i, (x, y) in enumerate(points)]
    return render_layer(name, structures, amplitudes, header, ont, kinds=kinds)


@pytest.fixture
def header():
    return make_header(15, 12, 100.0)


def test_single_layer_identity(header):
    layer = _layer("medical", header, [(450.0, 650.0), (1020.0, 310.0)], [1.0, -0.4])
    surface = fuse([layer], make_ontology())
    np.testing.assert_array_equal(surface.total, layer.grid)
    assert surface.valid.all()


def test_weighted_sum(header):
    l1 = _layer("medical", header, [(450.0, 650.0)], [1.0])
    l2 = _layer("worship", header, [(500.0, 600.0), (1300.0, 900.0)], [0.7, 0.2])
    ont = make_ontology(layer_weights={"medical": 2.0, "worship": -1.0})
    surface = fuse([l1, l2], ont)
    np.testing.assert_allclose(surface.total, 2.0 * l1.grid - l2.grid, rtol=1e-12, atol=1e-15)


def test_total_is_bridging_plus_bonding(header):
    rng = np.random.default_rng(4)
    points = [tuple(p) for p in rng.uniform(0, 1200, (10, 2))]
    amps = list(rng.uniform(-1, 1, 10))
    kinds = [CapitalKind.BONDING if i % 3 == 0 else CapitalKind.BRIDGING for i in range(10)]
    l1 = _layer("medical", header, points[:5], amps[:5], kinds[:5])
    l2 = _layer("worship", header, points[5:], amps[5:], kinds[5:])
    surface = fuse([l1, l2], make_ontology(layer_weights={"medical": 0.5, "worship": 1.5}))
    np.testing.assert_allclose(
        surface.total, surface.bridging + surface.bonding, rtol=1e-12, atol=1e-12
    )


def test_open_structures_have_no_bonding(header):
    ont = make_ontology()
    pop = make_population(np.full(header.shape, 4.0))
    structures = [
        make_structure("a", "clinic", 300.0, 300.0),
        make_structure("b", "school", 800.0, 700.0),
        make_structure("c", "place_of_worship", 1100.0, 200.0),
    ]
    catchments = compute_catchments(structures, pop, ont)
    layers, _ = render_layers(structures, catchments, header, ont)
    surface = fuse(layers, ont)
    assert not surface.bonding.any()
    assert surface.total.any()


def test_header_mismatch(header):
    l1 = _layer("medical", header, [(450.0, 650.0)], [1.0])
    l2 = _layer("worship", make_header(15, 12, 50.0), [(450.0, 650.0)], [1.0])
    with pytest.raises(ComputeError, match="worship"):
        fuse([l1, l2], make_ontology())


def test_no_layers():
    with pytest.raises(ComputeError):
        fuse([], make_ontology())
    surface = fuse([], make_ontology(), header=make_header(4, 3))
    assert surface.total.shape == (3, 4)
    assert not surface.total.any()


def test_group_flip_negates_bonding():
    ont = make_ontology()
    header = make_header(20, 20, 100.0)
    pop = make_population(np.full(header.shape, 3.0))
    structures = [
        make_structure("m1", "place_of_worship", 520.0, 480.0, 300, Access.RESTRICTED, "muslim"),
        make_structure("m2", "place_of_worship", 1410.0, 1330.0, 120, Access.RESTRICTED, "muslim"),
        make_structure("k", "clinic", 900.0, 900.0),
    ]

    surfaces = []
    for fraction in (1.0, 0.0):
        groups = {"muslim": make_group_raster(np.full(header.shape, fraction))}
        catchments = compute_catchments(structures, pop, ont, groups)
        layers, _ = render_layers(structures, catchments, header, ont)
        surfaces.append(fuse(layers, ont))

    ingroup, outgroup = surfaces
    assert ingroup.bonding.max() > 0
    np.testing.assert_array_equal(outgroup.bonding, -ingroup.bonding)
    np.testing.assert_array_equal(outgroup.bridging, ingroup.bridging)


def test_group_flip_moves_restricted_context_dependent_to_bridging():
    ont = make_ontology()
    header = make_header(20, 20, 100.0)
    pop = make_population(np.full(header.shape, 3.0))
    structures = [make_structure("s", "school", 900.0, 900.0, 200, Access.RESTRICTED, "muslim")]

    surfaces = []
    for fraction in (1.0, 0.0):
        groups = {"muslim": make_group_raster(np.full(header.shape, fraction))}
        catchments = compute_catchments(structures, pop, ont, groups)
        layers, _ = render_layers(structures, catchments, header, ont)
        surfaces.append(fuse(layers, ont))

    ingroup, outgroup = surfaces
    assert ingroup.bonding.max() > 0
    assert not ingroup.bridging.any()
    assert not outgroup.bonding.any()
    assert outgroup.bridging.min() < 0


if __name__ == "__main__":
    pytest.main(["-v", __file__])
