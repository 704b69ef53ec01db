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

from typing import TYPE_CHECKING

from resil_fuse.ontology.modifier import get_modifier
from resil_fuse.ontology.ontology_config import Access, CapitalKind, Ontology

if TYPE_CHECKING:
    from resil_fuse.ingest.structures import SocialStructure


def _check_fraction(f: float):
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"ingroup fraction {f} out of [0, 1]")


def effective_weight(s: "SocialStructure", ingroup_fraction: float, ont: Ontology) -> float:
    """
    Signed weight of one structure. Open structures keep the category weight;
    restricted ones scale it by the ontology's modifier of the ingroup fraction of
    their catchment, so an outgroup catchment turns the contribution negative.
    """
    _check_fraction(ingroup_fraction)
    w = ont.category(s.category).base_weight
    if s.access == Access.OPEN:
        return w
    factor = get_modifier(ont.modifier)(ingroup_fraction)
    return min(1.0, max(-1.0, w * factor))


def classify_capital(s: "SocialStructure", ingroup_fraction: float, ont: Ontology) -> CapitalKind:
    """
    Open structures are bridging. Restricted `context_dependent` structures are bonding
    only while the ingroup fraction exceeds the category threshold and bridging below it,
    so at f = 0 they move to the bridging sub-surface rather than turning negative there.
    Other restricted structures are always bonding.
    """
    _check_fraction(ingroup_fraction)
    spec = ont.category(s.category)
    if s.access == Access.OPEN:
        return CapitalKind.BRIDGING
    if spec.capital_kind == CapitalKind.CONTEXT_DEPENDENT:
        if ingroup_fraction > spec.context_threshold:
            return CapitalKind.BONDING
        return CapitalKind.BRIDGING
    return CapitalKind.BONDING
