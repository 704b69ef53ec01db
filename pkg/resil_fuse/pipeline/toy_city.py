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

"""
A small synthetic city for smoke runs, tests and benchmarks.

20 km x 20 km around the projection origin: a 200 x 200 population raster at 100 m
with a lake of nodata in the south-east corner, a fraction raster for the `muslim`
group falling from west to east, 200 structures that crowd towards the north-east,
and 25 square neighborhoods of 4 km. Everything derives from one seed.
"""

import os
from typing import Dict, List, Tuple

import geojson
import numpy as np
from pydantic_yaml import to_yaml_str

from resil_fuse.geo.geo_core import GeoPoint, PlanarPoint, unproject
from resil_fuse.ingest.raster import DEFAULT_NODATA, GridHeader, Raster, write_raster
from resil_fuse.pipeline.run_config import Analysis, Inputs, Projection, RunConfig

TOY_ORIGIN = GeoPoint(lon=106.8, lat=-6.2)
TOY_SEED = 7
HALF_EXTENT = 10000.0
CELLSIZE = 100.0
HOOD_SIZE = 4000.0

# category -> number of structures
CATEGORY_COUNTS = {
    "hospital": 6,
    "clinic": 20,
    "place_of_worship": 50,
    "school": 30,
    "community_centre": 20,
    "park": 20,
    "sports_venue": 8,
    "marketplace": 14,
    "fire_station": 6,
    "transit_station": 6,
    "transit_stop": 20,
}

DEFAULT_CAPACITY = {
    "hospital": 200,
    "clinic": 20,
    "place_of_worship": 500,
    "school": 400,
    "community_centre": 150,
    "park": 300,
    "sports_venue": 1000,
    "marketplace": 500,
    "fire_station": 30,
    "transit_station": 2000,
    "transit_stop": 100,
}


def toy_header() -> GridHeader:
    n = int(2 * HALF_EXTENT / CELLSIZE)
    return GridHeader(
        ncols=n,
        nrows=n,
        xllcorner=-HALF_EXTENT,
        yllcorner=-HALF_EXTENT,
        cellsize=CELLSIZE,
        nodata=DEFAULT_NODATA,
    )


def in_lake(x, y):
    return (x > 6000.0) & (y < -6000.0)


def toy_population(rng: np.random.Generator, header: GridHeader) -> np.ndarray:
    xs, ys = np.meshgrid(header.cell_centers_x(), header.cell_centers_y())
    density = (
        40.0
        + 160.0 * np.exp(-((xs - 3000.0) ** 2 + (ys - 3000.0) ** 2) / (2 * 4000.0**2))
        + 80.0 * np.exp(-((xs + 5000.0) ** 2 + (ys + 4000.0) ** 2) / (2 * 3000.0**2))
    )
    counts = rng.poisson(density).astype(np.float64)
    return np.where(in_lake(xs, ys), header.nodata, counts)


def toy_group_fraction(header: GridHeader, population: np.ndarray) -> np.ndarray:
    xs, _ = np.meshgrid(header.cell_centers_x(), header.cell_centers_y())
    fraction = np.round(np.clip(0.5 - xs / 16000.0, 0.05, 0.95), 2)
    return np.where(population == header.nodata, header.nodata, fraction)


def _draw_position(rng: np.random.Generator, clustered: bool) -> Tuple[float, float]:
    limit = HALF_EXTENT - 500.0
    while True:
        if clustered:
            x, y = rng.normal(4000.0, 3000.0, size=2)
        else:
            x, y = rng.uniform(-limit, limit, size=2)
        if abs(x) <= limit and abs(y) <= limit and not in_lake(x, y):
            return float(x), float(y)


def _lonlat(x: float, y: float) -> Tuple[float, float]:
    p = unproject(PlanarPoint(x, y), TOY_ORIGIN)
    return round(p.lon, 7), round(p.lat, 7)


def toy_structures(rng: np.random.Generator) -> List[geojson.Feature]:
    features = []
    index = 0
    for category, count in CATEGORY_COUNTS.items():
        for _ in range(count):
            index += 1
            worship = category == "place_of_worship"
            x, y = _draw_position(rng, clustered=not worship and rng.random() < 0.7)
            props = {"id": f"s{index:03d}", "category": category}
            # every fifth structure relies on the category's default capacity
            if index % 5:
                base = DEFAULT_CAPACITY[category]
                props["capacity"] = int(rng.integers(base // 2, base + base // 2 + 1))
            if worship:
                props["access"] = "restricted"
                props["group"] = "muslim" if rng.random() < 0.7 else "christian"
            elif category == "school" and rng.random() < 0.5:
                props["access"] = "restricted"
                props["group"] = "muslim"
            features.append(
                geojson.Feature(geometry=geojson.Point(_lonlat(x, y)), properties=props)
            )
    return features


def toy_neighborhoods() -> List[geojson.Feature]:
    features = []
    per_side = int(2 * HALF_EXTENT / HOOD_SIZE)
    for row in range(per_side):
        for col in range(per_side):
            hood_id = row * per_side + col + 1
            x0 = -HALF_EXTENT + col * HOOD_SIZE
            y1 = HALF_EXTENT - row * HOOD_SIZE
            x1, y0 = x0 + HOOD_SIZE, y1 - HOOD_SIZE
            ring = [_lonlat(x, y) for x, y in ((x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0))]
            features.append(
                geojson.Feature(
                    geometry=geojson.Polygon([ring]),
                    properties={"id": hood_id, "name": f"Ward {hood_id:02d}"},
                )
            )
    return features


def write_toy_city(out_dir: str, seed: int = TOY_SEED) -> str:
    """Write the toy city under `out_dir` and return the path of its run config."""
    data_dir = os.path.join(out_dir, "data")
    os.makedirs(data_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    header = toy_header()

    population = toy_population(rng, header)
    write_raster(Raster(header, population), os.path.join(data_dir, "population.asc"))
    write_raster(
        Raster(header, toy_group_fraction(header, population)),
        os.path.join(data_dir, "muslim_fraction.asc"),
    )
    files: Dict[str, List[geojson.Feature]] = {
        "structures.geojson": toy_structures(rng),
        "neighborhoods.geojson": toy_neighborhoods(),
    }
    for name, features in files.items():
        with open(os.path.join(data_dir, name), "w") as f:
            geojson.dump(geojson.FeatureCollection(features), f, indent=1)
            f.write("\n")

    config = RunConfig(
        inputs=Inputs(
            structures="data/structures.geojson",
            neighborhoods="data/neighborhoods.geojson",
            population="data/population.asc",
            group_rasters={"muslim": "data/muslim_fraction.asc"},
        ),
        projection=Projection(origin_lon=TOY_ORIGIN.lon, origin_lat=TOY_ORIGIN.lat),
        analysis=Analysis(seed=seed),
        output_dir="out",
        workers=1,
    )
    config_path = os.path.join(out_dir, "run_config.yaml")
    with open(config_path, "w") as f:
        f.write(to_yaml_str(config))
    return config_path
