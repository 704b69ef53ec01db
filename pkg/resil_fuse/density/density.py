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
Gaussian kernel density layers.

Each structure contributes A * exp(-d^2 / (2 sigma^2)) to every cell center within
`truncation_sigmas * sigma`, where the amplitude A is the kernel peak (not its
integral):

    A = effective_weight * capacity / max(P(A_c), p_floor)

Cells accumulate kernels in structure input order. Rendering may split rows across
workers; every band evaluates each kernel over the structure's full window and
keeps its own rows, so cell values do not depend on the worker count.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from resil_fuse.catchment.catchment import CatchmentResult
from resil_fuse.common.errors import ComputeError
from resil_fuse.common.logging import logger
from resil_fuse.common.parallel import map_ordered, split_range
from resil_fuse.ingest.raster import GridHeader
from resil_fuse.ingest.structures import SocialStructure
from resil_fuse.ontology.ontology import classify_capital, effective_weight
from resil_fuse.ontology.ontology_config import CapitalKind, Ontology


@dataclass(frozen=True)
class DensityLayer:
    layer_name: str
    header: GridHeader
    grid: np.ndarray
    # the same kernels split by the capital kind of their structure
    bridging: np.ndarray
    bonding: np.ndarray
    structure_count: int

    def __post_init__(self):
        for name in ("grid", "bridging", "bonding"):
            values = getattr(self, name)
            if values.shape != self.header.shape:
                raise ComputeError(
                    f"layer {self.layer_name}: {name} has shape {values.shape}, "
                    f"grid is {self.header.shape}"
                )
            if not np.all(np.isfinite(values)):
                raise ComputeError(f"layer {self.layer_name}: {name} has non-finite values")


@dataclass(frozen=True)
class StructureKernel:
    structure_id: str
    layer: str
    amplitude: float
    bandwidth: float
    kind: CapitalKind


def amplitude(s: SocialStructure, c: CatchmentResult, ont: Ontology) -> float:
    w = effective_weight(s, c.ingroup_fraction, ont)
    return w * s.capacity / max(c.population, ont.p_floor)


def _render_band(
    row_start: int,
    row_end: int,
    xs: np.ndarray,
    ys: np.ndarray,
    amplitudes: np.ndarray,
    sigmas: np.ndarray,
    bonding: np.ndarray,
    header: GridHeader,
    truncation_sigmas: float,
):
    shape = (row_end - row_start, header.ncols)
    grid = np.zeros(shape)
    bridging_grid = np.zeros(shape)
    bonding_grid = np.zeros(shape)
    centers_x = header.cell_centers_x()
    centers_y = header.cell_centers_y()

    for x, y, a, sigma, is_bonding in zip(xs, ys, amplitudes, sigmas, bonding):
        cutoff = truncation_sigmas * sigma
        r0, r1, c0, c1 = header.window(x, y, cutoff)
        lo, hi = max(r0, row_start), min(r1, row_end)
        if lo >= hi or c0 >= c1:
            continue
        dx = centers_x[c0:c1] - x
        # only the rows of this band
        dy = centers_y[lo:hi] - y
        d2 = dy[:, None] ** 2 + dx[None, :] ** 2
        part = np.where(d2 <= cutoff * cutoff, a * np.exp(-d2 / (2.0 * sigma * sigma)), 0.0)
        grid[lo - row_start : hi - row_start, c0:c1] += part
        target = bonding_grid if is_bonding else bridging_grid
        target[lo - row_start : hi - row_start, c0:c1] += part
    return grid, bridging_grid, bonding_grid


def render_layer(
    layer_name: str,
    structures: Sequence[SocialStructure],
    amplitudes: Sequence[float],
    header: GridHeader,
    ont: Ontology,
    kinds: Optional[Sequence[CapitalKind]] = None,
    workers: int = 1,
) -> DensityLayer:
    if len(amplitudes) != len(structures):
        raise ComputeError(
            f"layer {layer_name}: {len(structures)} structures but {len(amplitudes)} amplitudes"
        )
    if kinds is None:
        kinds = [CapitalKind.BRIDGING] * len(structures)
    if any(s.position is None for s in structures):
        raise ComputeError(f"layer {layer_name}: structures must be projected before rendering")

    xs = np.array([s.position.x for s in structures], dtype=np.float64)
    ys = np.array([s.position.y for s in structures], dtype=np.float64)
    sigmas = np.array([ont.category(s.category).bandwidth for s in structures], dtype=np.float64)
    amps = np.asarray(amplitudes, dtype=np.float64)
    bonding = np.array([k == CapitalKind.BONDING for k in kinds], dtype=bool)

    tasks = [
        (a, b, xs, ys, amps, sigmas, bonding, header, ont.truncation_sigmas)
        for a, b in split_range(header.nrows, workers)
    ]
    bands = map_ordered(_render_band, tasks, workers)
    grid = np.vstack([band[0] for band in bands])
    bridging = np.vstack([band[1] for band in bands])
    bonding_grid = np.vstack([band[2] for band in bands])
    return DensityLayer(
        layer_name=layer_name,
        header=header,
        grid=grid,
        bridging=bridging,
        bonding=bonding_grid,
        structure_count=len(structures),
    )


def structure_kernels(
    structures: Sequence[SocialStructure],
    catchments: Sequence[CatchmentResult],
    ont: Ontology,
) -> List[StructureKernel]:
    kernels = []
    for s, c in zip(structures, catchments):
        spec = ont.category(s.category)
        kernels.append(
            StructureKernel(
                structure_id=s.id,
                layer=spec.layer,
                amplitude=amplitude(s, c, ont),
                bandwidth=spec.bandwidth,
                kind=classify_capital(s, c.ingroup_fraction, ont),
            )
        )
    return kernels


def render_layers(
    structures: Sequence[SocialStructure],
    catchments: Sequence[CatchmentResult],
    header: GridHeader,
    ont: Ontology,
    workers: int = 1,
) -> Tuple[List[DensityLayer], List[StructureKernel]]:
    """Render every ontology layer, empty ones included, in ontology layer order."""
    if len(catchments) != len(structures):
        raise ComputeError("every structure needs exactly one catchment result")
    kernels = structure_kernels(structures, catchments, ont)

    layers = []
    for name in ont.layer_names():
        members = [i for i, k in enumerate(kernels) if k.layer == name]
        layer = render_layer(
            name,
            [structures[i] for i in members],
            [kernels[i].amplitude for i in members],
            header,
            ont,
            kinds=[kernels[i].kind for i in members],
            workers=workers,
        )
        logger.info(f"rendered layer {name} from {layer.structure_count} structures")
        layers.append(layer)
    return layers, kernels
