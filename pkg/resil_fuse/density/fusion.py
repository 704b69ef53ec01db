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

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from resil_fuse.common.errors import ComputeError
from resil_fuse.common.logging import logger
from resil_fuse.density.density import DensityLayer
from resil_fuse.ingest.raster import GridHeader
from resil_fuse.ontology.ontology_config import Ontology


@dataclass(frozen=True)
class SocialCapitalSurface:
    header: GridHeader
    total: np.ndarray
    bridging: np.ndarray
    bonding: np.ndarray
    # cells with population data; nodata cells are written as the header sentinel
    valid: np.ndarray

    def __post_init__(self):
        for name in ("total", "bridging", "bonding", "valid"):
            if getattr(self, name).shape != self.header.shape:
                raise ComputeError(f"surface {name} does not match the grid {self.header.shape}")


def fuse(
    layers: Sequence[DensityLayer],
    ont: Ontology,
    header: Optional[GridHeader] = None,
    valid: Optional[np.ndarray] = None,
) -> SocialCapitalSurface:
    """
    Weighted cell-wise sum of the layers, in the order given.

    The bridging and bonding partials are fused with the same layer weights, so
    total equals bridging + bonding up to rounding.
    """
    if header is None:
        if not layers:
            raise ComputeError("nothing to fuse: no layers and no grid header")
        header = layers[0].header
    for layer in layers:
        if not layer.header.aligned_with(header):
            raise ComputeError(f"layer {layer.layer_name} has a different grid header")

    total = np.zeros(header.shape)
    bridging = np.zeros(header.shape)
    bonding = np.zeros(header.shape)
    for layer in layers:
        weight = ont.layer_weight(layer.layer_name)
        total += weight * layer.grid
        bridging += weight * layer.bridging
        bonding += weight * layer.bonding
        logger.debug(f"fused layer {layer.layer_name} with weight {weight}")

    if valid is None:
        valid = np.ones(header.shape, dtype=bool)
    return SocialCapitalSurface(
        header=header, total=total, bridging=bridging, bonding=bonding, valid=valid
    )
