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
Zonal means of the fused surface over neighborhood polygons.

A cell belongs to the first neighborhood (in input order) whose boundary contains
its center, boundary included. Cells without population data are never averaged.
"""

from collections import OrderedDict
from typing import Dict, List, Optional, Sequence

import numpy as np
import shapely
from pydantic import BaseModel, ConfigDict

from resil_fuse.common.logging import logger
from resil_fuse.density.fusion import SocialCapitalSurface
from resil_fuse.ingest.neighborhoods import Neighborhood


class NeighborhoodValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    name: str
    cell_count: int
    # None when the neighborhood covers no cell center with data
    value: Optional[float] = None
    bridging: Optional[float] = None
    bonding: Optional[float] = None

    @property
    def defined(self) -> bool:
        return self.value is not None


def group_neighborhoods(hoods: Sequence[Neighborhood]) -> "OrderedDict[int, List[Neighborhood]]":
    """Boundary records by neighborhood id, ids in first-appearance order."""
    grouped: "OrderedDict[int, List[Neighborhood]]" = OrderedDict()
    for hood in hoods:
        grouped.setdefault(hood.id, []).append(hood)
    return grouped


def assign_cells(surface: SocialCapitalSurface, hoods: Sequence[Neighborhood]) -> np.ndarray:
    """Per-cell owner: position of the neighborhood id in first-appearance order, or -1."""
    header = surface.header
    xs = header.cell_centers_x()
    ys = header.cell_centers_y()
    owner = np.full(header.shape, -1, dtype=np.int64)
    order: Dict[int, int] = {hid: i for i, hid in enumerate(group_neighborhoods(hoods))}

    for hood in hoods:
        minx, miny, maxx, maxy = hood.boundary.bounds
        cols = np.nonzero((xs >= minx) & (xs <= maxx))[0]
        rows = np.nonzero((ys >= miny) & (ys <= maxy))[0]
        if cols.size == 0 or rows.size == 0:
            continue
        gx, gy = np.meshgrid(xs[cols], ys[rows])
        inside = shapely.intersects_xy(hood.boundary.geometry, gx, gy)
        block = owner[np.ix_(rows, cols)]
        block[inside & (block < 0)] = order[hood.id]
        owner[np.ix_(rows, cols)] = block
    return owner


def aggregate(
    surface: SocialCapitalSurface, hoods: Sequence[Neighborhood]
) -> List[NeighborhoodValue]:
    owner = assign_cells(surface, hoods)
    results = []
    for index, (hood_id, records) in enumerate(group_neighborhoods(hoods).items()):
        cells = (owner == index) & surface.valid
        count = int(cells.sum())
        name = records[0].name
        if count == 0:
            logger.warning(
                f"neighborhood {hood_id} ({name}) covers no cell centers, excluded from LISA"
            )
            results.append(NeighborhoodValue(id=hood_id, name=name, cell_count=0))
            continue
        results.append(
            NeighborhoodValue(
                id=hood_id,
                name=name,
                cell_count=count,
                value=float(surface.total[cells].mean()),
                bridging=float(surface.bridging[cells].mean()),
                bonding=float(surface.bonding[cells].mean()),
            )
        )
    return results
