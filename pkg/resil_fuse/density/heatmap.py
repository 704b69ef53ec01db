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
8-bit binary PGM heatmaps on a diverging scale centered at 0.

Valid cells map linearly from [-m, m] onto gray levels 1..255, m being the largest
absolute valid value; 128 is zero capital. Nodata cells are gray 0. The scale is
written next to the image in `<name>.pgm.txt`.
"""

from typing import Optional

import numpy as np
from skimage import io

from resil_fuse.ingest.raster import format_value

NODATA_GRAY = 0
MIN_GRAY = 1
MAX_GRAY = 255


def heatmap_scale(values: np.ndarray, valid: Optional[np.ndarray] = None) -> float:
    if valid is None:
        valid = np.ones(values.shape, dtype=bool)
    data = values[valid]
    if data.size == 0:
        return 0.0
    return float(np.abs(data).max())


def to_gray(values: np.ndarray, valid: Optional[np.ndarray] = None) -> np.ndarray:
    if valid is None:
        valid = np.ones(values.shape, dtype=bool)
    m = heatmap_scale(values, valid)
    if m > 0:
        scaled = (np.clip(values, -m, m) + m) / (2.0 * m)
    else:
        scaled = np.full(values.shape, 0.5)
    gray = MIN_GRAY + np.rint(scaled * (MAX_GRAY - MIN_GRAY))
    gray = np.where(valid, gray, NODATA_GRAY)
    return gray.astype(np.uint8)


def write_heatmap(values: np.ndarray, path: str, valid: Optional[np.ndarray] = None):
    if valid is None:
        valid = np.ones(values.shape, dtype=bool)
    # binary PGM (P5), picked from the extension
    io.imsave(path, to_gray(values, valid), check_contrast=False)

    m = heatmap_scale(values, valid)
    data = values[valid]
    lo = format_value(data.min()) if data.size else "nan"
    hi = format_value(data.max()) if data.size else "nan"
    with open(path + ".txt", "w") as f:
        f.write(f"scale_min {format_value(-m)}\n")
        f.write(f"scale_max {format_value(m)}\n")
        f.write("center 0\n")
        f.write(f"data_min {lo}\n")
        f.write(f"data_max {hi}\n")
        f.write(f"gray_min {MIN_GRAY}\n")
        f.write(f"gray_max {MAX_GRAY}\n")
        f.write(f"nodata_gray {NODATA_GRAY}\n")
