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

from resil_fuse.density.density import (
    DensityLayer,
    StructureKernel,
    amplitude,
    render_layer,
    render_layers,
    structure_kernels,
)
from resil_fuse.density.fusion import SocialCapitalSurface, fuse
from resil_fuse.density.heatmap import to_gray, write_heatmap
from resil_fuse.density.layer_io import (
    read_layer,
    read_layers,
    read_surface,
    write_layer,
    write_layers,
    write_surface,
)

__all__ = [
    "DensityLayer",
    "StructureKernel",
    "amplitude",
    "render_layer",
    "render_layers",
    "structure_kernels",
    "SocialCapitalSurface",
    "fuse",
    "to_gray",
    "write_heatmap",
    "read_layer",
    "read_layers",
    "read_surface",
    "write_layer",
    "write_layers",
    "write_surface",
]
