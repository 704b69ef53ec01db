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
Density layers and fused surfaces as plain files.

A layer directory holds, per layer, `<name>.asc` (all kernels), `<name>.bridging.asc`,
`<name>.bonding.asc` and a `<name>.pgm` heatmap, plus `layers.json` listing the layers
in fusion order with their structure counts. Cells without population data are
written as the nodata sentinel.
"""

import json
import os
from typing import List, Optional, Tuple

import numpy as np

from resil_fuse.common.errors import IngestError
from resil_fuse.density.density import DensityLayer
from resil_fuse.density.fusion import SocialCapitalSurface
from resil_fuse.density.heatmap import write_heatmap
from resil_fuse.ingest.raster import GridHeader, Raster, read_grid, write_raster

LAYER_INDEX = "layers.json"
SURFACE_PREFIX = "social_capital"
SURFACE_PARTS = ("total", "bridging", "bonding")


def _masked(header: GridHeader, values: np.ndarray, valid: np.ndarray) -> Raster:
    return Raster(header=header, values=np.where(valid, values, header.nodata))


def write_layer(layer: DensityLayer, out_dir: str, valid: Optional[np.ndarray] = None):
    if valid is None:
        valid = np.ones(layer.header.shape, dtype=bool)
    base = os.path.join(out_dir, layer.layer_name)
    write_raster(_masked(layer.header, layer.grid, valid), base + ".asc")
    write_raster(_masked(layer.header, layer.bridging, valid), base + ".bridging.asc")
    write_raster(_masked(layer.header, layer.bonding, valid), base + ".bonding.asc")
    write_heatmap(layer.grid, base + ".pgm", valid)


def write_layers(layers: List[DensityLayer], out_dir: str, valid: Optional[np.ndarray] = None):
    os.makedirs(out_dir, exist_ok=True)
    for layer in layers:
        write_layer(layer, out_dir, valid)
    index = [{"name": l.layer_name, "structure_count": l.structure_count} for l in layers]
    with open(os.path.join(out_dir, LAYER_INDEX), "w") as f:
        json.dump({"layers": index}, f, indent=2)
        f.write("\n")


def _read_part(path: str, header: Optional[GridHeader]) -> Tuple[GridHeader, np.ndarray]:
    part_header, values = read_grid(path)
    if header is not None and not part_header.aligned_with(header):
        raise IngestError(f"{path} is not aligned with the other layer files")
    return part_header, values


def read_layer(
    in_dir: str, name: str, structure_count: int = 0
) -> Tuple[DensityLayer, np.ndarray]:
    """The layer with nodata cells zeroed, and the mask of cells holding data."""
    base = os.path.join(in_dir, name)
    header, grid = _read_part(base + ".asc", None)
    _, bridging = _read_part(base + ".bridging.asc", header)
    _, bonding = _read_part(base + ".bonding.asc", header)
    valid = grid != header.nodata
    layer = DensityLayer(
        layer_name=name,
        header=header,
        grid=np.where(valid, grid, 0.0),
        bridging=np.where(valid, bridging, 0.0),
        bonding=np.where(valid, bonding, 0.0),
        structure_count=structure_count,
    )
    return layer, valid


def read_layers(in_dir: str) -> Tuple[List[DensityLayer], Optional[np.ndarray]]:
    index_path = os.path.join(in_dir, LAYER_INDEX)
    if not os.path.isfile(index_path):
        raise IngestError(f"layer index {index_path} does not exist, run the layers stage first")
    with open(index_path, "r") as f:
        try:
            index = json.load(f)["layers"]
        except (ValueError, KeyError) as e:
            raise IngestError(f"cannot read layer index {index_path}: {e}")

    layers, valid = [], None
    for entry in index:
        layer, layer_valid = read_layer(in_dir, entry["name"], entry.get("structure_count", 0))
        valid = layer_valid if valid is None else valid & layer_valid
        layers.append(layer)
    return layers, valid


def surface_paths(out_dir: str, part: str) -> Tuple[str, str]:
    base = os.path.join(out_dir, f"{SURFACE_PREFIX}_{part}")
    return base + ".asc", base + ".pgm"


def write_surface(surface: SocialCapitalSurface, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    for part in SURFACE_PARTS:
        values = getattr(surface, part)
        asc_path, pgm_path = surface_paths(out_dir, part)
        write_raster(_masked(surface.header, values, surface.valid), asc_path)
        write_heatmap(values, pgm_path, surface.valid)


def read_surface(in_dir: str) -> SocialCapitalSurface:
    parts = {}
    header = None
    for part in SURFACE_PARTS:
        asc_path, _ = surface_paths(in_dir, part)
        header, parts[part] = _read_part(asc_path, header)
    valid = parts["total"] != header.nodata
    return SocialCapitalSurface(
        header=header,
        total=np.where(valid, parts["total"], 0.0),
        bridging=np.where(valid, parts["bridging"], 0.0),
        bonding=np.where(valid, parts["bonding"], 0.0),
        valid=valid,
    )
