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
from pydantic import ValidationError

from resil_fuse.common.errors import GeometryError
from resil_fuse.geo.geo_core import (
    EARTH_RADIUS,
    GeoPoint,
    PlanarPoint,
    Polygon,
    contains,
    dataset_origin,
    distance,
    project,
    unproject,
)

from basic_set import ORIGIN, square


def test_project_origin_is_zero():
    assert project(ORIGIN, ORIGIN) == PlanarPoint(0.0, 0.0)


def test_project_east_and_north():
    east = project(GeoPoint(lon=106.81, lat=-6.2), ORIGIN)
    expected_x = EARTH_RADIUS * math.radians(0.01) * math.cos(math.radians(-6.2))
    assert east.x == pytest.approx(expected_x, abs=1e-9)
    assert east.x == pytest.approx(1105.7, abs=0.1)
    assert east.y == 0.0

    north = project(GeoPoint(lon=106.8, lat=-6.19), ORIGIN)
    assert north.x == 0.0
    assert north.y == pytest.approx(1111.9, abs=0.1)


def test_unproject_round_trip():
    rng = np.random.default_rng(0)
    for lon, lat in zip(rng.uniform(106.5, 107.1, 100), rng.uniform(-6.5, -5.9, 100)):
        p = GeoPoint(lon=lon, lat=lat)
        back = unproject(project(p, ORIGIN), ORIGIN)
        assert abs(back.lon - p.lon) <= 1e-6
        assert abs(back.lat - p.lat) <= 1e-6


def test_geopoint_range():
    with pytest.raises(ValidationError):
        GeoPoint(lon=181.0, lat=0.0)
    with pytest.raises(ValidationError):
        GeoPoint(lon=0.0, lat=-90.5)


def test_dataset_origin():
    origin = dataset_origin([GeoPoint(lon=106.0, lat=-6.0), GeoPoint(lon=107.0, lat=-7.0)])
    assert origin == GeoPoint(lon=106.5, lat=-6.5)
    with pytest.raises(GeometryError):
        dataset_origin([])


def test_contains_square():
    unit = square(0.0, 0.0)
    assert contains(unit, PlanarPoint(0.5, 0.5))
    assert not contains(unit, PlanarPoint(2.0, 2.0))
    # edge points count as inside
    assert contains(unit, PlanarPoint(1.0, 0.5))


def test_contains_hole():
    holed = Polygon(
        exterior=((0, 0), (4, 0), (4, 4), (0, 4), (0, 0)),
        holes=(((1, 1), (3, 1), (3, 3), (1, 3), (1, 1)),),
    )
    assert not contains(holed, PlanarPoint(2.0, 2.0))
    assert contains(holed, PlanarPoint(0.5, 0.5))
    assert holed.area == 12.0


def test_contains_convex_centroid():
    rng = np.random.default_rng(1)
    for _ in range(20):
        angles = np.sort(rng.uniform(0, 2 * math.pi, 6))
        ring = [(math.cos(a) * 10, math.sin(a) * 10) for a in angles]
        poly = Polygon(exterior=tuple(ring + ring[:1]))
        assert contains(poly, poly.centroid)


def test_polygon_validation():
    with pytest.raises(GeometryError):
        Polygon(exterior=((0, 0), (1, 0), (0, 0)))
    with pytest.raises(GeometryError):
        # not closed
        Polygon(exterior=((0, 0), (1, 0), (1, 1), (0, 1)))
    with pytest.raises(GeometryError):
        # collinear, zero area
        Polygon(exterior=((0, 0), (1, 0), (2, 0), (0, 0)))
    with pytest.raises(GeometryError):
        # bow tie
        Polygon(exterior=((0, 0), (1, 1), (1, 0), (0, 1), (0, 0)))


def test_contains_rejects_non_polygon():
    with pytest.raises(GeometryError):
        contains("not a polygon", PlanarPoint(0, 0))


@pytest.mark.parametrize(
    "a,b,expected",
    [((0, 0), (0, 0), 0.0), ((0, 0), (3, 4), 5.0), ((1, 1), (-2, 5), 5.0)],
)
def test_distance(a, b, expected):
    assert distance(PlanarPoint(*a), PlanarPoint(*b)) == expected


def test_distance_symmetry_and_triangle():
    rng = np.random.default_rng(2)
    for _ in range(100):
        a, b, c = (PlanarPoint(*xy) for xy in rng.uniform(-1e4, 1e4, (3, 2)))
        assert distance(a, b) == distance(b, a)
        assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9


def test_distance_rejects_non_finite():
    with pytest.raises(ValueError):
        distance(PlanarPoint(math.nan, 0.0), PlanarPoint(0.0, 0.0))


if __name__ == "__main__":
    pytest.main(["-v", __file__])
