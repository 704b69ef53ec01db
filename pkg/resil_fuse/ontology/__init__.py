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

from resil_fuse.ontology.ontology_config import (
    DEFAULT_ONTOLOGY_PATH,
    TRANSIT_LAYER,
    Access,
    CapitalKind,
    CategorySpec,
    Ontology,
    load_ontology,
)
from resil_fuse.ontology.modifier import WeightModifier, get_modifier
from resil_fuse.ontology.ontology import effective_weight, classify_capital

__all__ = [
    "DEFAULT_ONTOLOGY_PATH",
    "TRANSIT_LAYER",
    "Access",
    "CapitalKind",
    "CategorySpec",
    "Ontology",
    "load_ontology",
    "WeightModifier",
    "get_modifier",
    "effective_weight",
    "classify_capital",
]
