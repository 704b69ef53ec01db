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
ESRI ASCII grid rasters.

Row 0 of `values` is the northernmost row, as in the file. Coordinates are planar
meters in the frame of the configured projection origin.
"""

import math
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from resil_fuse.common.errors import IngestError
from resil_fuse.common.logging import logger

DEFAULT_NODATA = -9999.0

HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


@dataclass(frozen=True)
class GridHeader:
    ncols: int
    nrows: int
    xllcorner: float
    yllcorner: float
    cellsize: float
    nodata: float = DEFAULT_NODATA

    def __post_init__(self):
        if self.ncols <= 0 or self.nrows <= 0:
            raise IngestError(f"grid dimensions must be positive, got {self.ncols}x{self.nrows}")
        if not self.cellsize > 0:
            raise IngestError(f"cellsize must be positive, got {self.cellsize}")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def cell_centers_x(self) -> np.ndarray:
        return self.xllcorner + (np.arange(self.ncols) + 0.5) * self.cellsize

    def cell_centers_y(self) -> np.ndarray:
        # row 0 is the north edge
        return self.yllcorner + (self.nrows - np.arange(self.nrows) - 0.5) * self.cellsize

    def window(self, x: float, y: float, radius: float) -> Tuple[int, int, int, int]:
        """
        Row/column span [r0, r1) x [c0, c1) covering every cell whose center can lie
        within `radius` of (x, y). The span is padded by one cell so callers can apply
        an exact distance test without missing boundary cells to rounding.
        """
        cs = self.cellsize
        c0 = math.floor((x - radius - self.xllcorner) / cs - 0.5) - 1
        c1 = math.ceil((x + radius - self.xllcorner) / cs - 0.5) + 2
        ytop = self.yllcorner + self.nrows * cs
        r0 = math.floor((ytop - (y + radius)) / cs - 0.5) - 1
        r1 = math.ceil((ytop - (y - radius)) / cs - 0.5) + 2
        c0, c1 = max(c0, 0), min(c1, self.ncols)
        r0, r1 = max(r0, 0), min(r1, self.nrows)
        return r0, max(r1, r0), c0, max(c1, c0)

    def aligned_with(self, other: "GridHeader") -> bool:
        return (
            self.ncols == other.ncols
            and self.nrows == other.nrows
            and self.xllcorner == other.xllcorner
            and self.yllcorner == other.yllcorner
            and self.cellsize == other.cellsize
        )


@dataclass(frozen=True)
class GridText:
    """Header lines and cell tokens exactly as they appear in the source file."""

    header: Tuple[Tuple[str, str], ...]
    cells: Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True)
class Raster:
    header: GridHeader
    values: np.ndarray
    # set by the loaders; write_raster reproduces it
    text: Optional[GridText] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.header.shape:
            raise IngestError(
                f"grid has shape {values.shape}, header says {self.header.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def valid(self) -> np.ndarray:
        return self.values != self.header.nodata

    def filled(self, fill: float = 0.0) -> np.ndarray:
        """Values with nodata cells replaced by `fill`."""
        return np.where(self.valid, self.values, fill)


class PopulationRaster(Raster):
    """Persons per cell; nodata cells hold the header sentinel."""

    def __post_init__(self):
        super().__post_init__()
        data = self.values[self.valid]
        if not np.all(np.isfinite(data)) or np.any(data < 0):
            raise IngestError("population values must be finite and >= 0 (or nodata)")


@dataclass(frozen=True)
class PopulationGroupRaster(Raster):
    """Per-cell fraction in [0, 1] of the population belonging to `group`."""

    group: str = ""

    def __post_init__(self):
        super().__post_init__()
        data = self.values[self.valid]
        if not np.all(np.isfinite(data)) or np.any(data < 0) or np.any(data > 1):
            raise IngestError(f"group fractions of {self.group!r} must lie in [0, 1]")


def _parse_header(lines, path) -> Tuple[GridHeader, Tuple[Tuple[str, str], ...]]:
    found = {}
    text = []
    for lineno, line in enumerate(lines[: len(HEADER_KEYS)], start=1):
        parts = line.split()
        if len(parts) != 2:
            raise IngestError(f"{path}:{lineno}: malformed header line {line!r}")
        key = parts[0].lower()
        if key not in HEADER_KEYS:
            raise IngestError(f"{path}:{lineno}: {parts[0]} is an illegal header key")
        found[key] = parts[1]
        text.append((parts[0], parts[1]))
    missing = [k for k in HEADER_KEYS if k not in found]
    if missing:
        raise IngestError(f"{path}: header is missing {', '.join(missing)}")
    try:
        header = GridHeader(
            ncols=int(found["ncols"]),
            nrows=int(found["nrows"]),
            xllcorner=float(found["xllcorner"]),
            yllcorner=float(found["yllcorner"]),
            cellsize=float(found["cellsize"]),
            nodata=float(found["nodata_value"]),
        )
    except ValueError as e:
        raise IngestError(f"{path}: bad header value: {e}")
    return header, tuple(text)


def _read(path: str) -> Tuple[GridHeader, np.ndarray, GridText]:
    if not os.path.isfile(path):
        raise IngestError(f"raster file {path} does not exist")
    with open(path, "r") as f:
        lines = [line for line in f.read().splitlines() if line.strip()]

    header, header_text = _parse_header(lines, path)
    rows = lines[len(HEADER_KEYS) :]
    if len(rows) != header.nrows:
        raise IngestError(
            f"{path}: header declares {header.nrows} rows, found {len(rows)} "
            f"(row index {min(len(rows), header.nrows)})"
        )
    values = np.empty(header.shape, dtype=np.float64)
    cells = []
    for i, row in enumerate(rows):
        tokens = row.split()
        cells.append(tuple(tokens))
        if len(tokens) != header.ncols:
            raise IngestError(
                f"{path}: row {i} has {len(tokens)} values, header declares {header.ncols}"
            )
        try:
            values[i, :] = np.array(tokens, dtype=np.float64)
        except ValueError as e:
            raise IngestError(f"{path}: row {i}: {e}")
    return header, values, GridText(header=header_text, cells=tuple(cells))


def read_grid(path: str) -> Tuple[GridHeader, np.ndarray]:
    header, values, _ = _read(path)
    return header, values


def load_raster(path: str) -> PopulationRaster:
    header, values, text = _read(path)
    raster = PopulationRaster(header=header, values=values, text=text)
    n_nodata = int((~raster.valid).sum())
    logger.info(
        f"loaded population raster {path}: {header.ncols}x{header.nrows}, "
        f"cellsize {header.cellsize}, {n_nodata} nodata cells"
    )
    return raster


def load_group_raster(
    path: str, group: str, population: Optional[PopulationRaster] = None
) -> PopulationGroupRaster:
    header, values, text = _read(path)
    raster = PopulationGroupRaster(header=header, values=values, text=text, group=group)
    if population is not None and not header.aligned_with(population.header):
        raise IngestError(f"group raster {path} is not aligned with the population raster")
    logger.info(f"loaded group raster {path} for group {group!r}")
    return raster


def format_value(v: float) -> str:
    """Integral values without a decimal part, others in shortest round-trip form."""
    v = float(v)
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def write_raster(raster: Raster, path: str):
    """
    Loaded rasters are written back token for token, so only whitespace differs
    from the source file. Computed rasters use `format_value`.
    """
    if raster.text is not None:
        with open(path, "w") as f:
            for key, value in raster.text.header:
                f.write(f"{key:<14}{value}\n")
            for row in raster.text.cells:
                f.write(" ".join(row))
                f.write("\n")
        return

    h = raster.header
    header_values = (
        h.ncols,
        h.nrows,
        format_value(h.xllcorner),
        format_value(h.yllcorner),
        format_value(h.cellsize),
        format_value(h.nodata),
    )
    with open(path, "w") as f:
        for key, value in zip(HEADER_KEYS, header_values):
            f.write(f"{key:<14}{value}\n")
        for row in raster.values:
            f.write(" ".join(format_value(v) for v in row))
            f.write("\n")
