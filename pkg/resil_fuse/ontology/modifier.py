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

from resil_fuse.common.registry import Meta


class WeightModifier(metaclass=Meta):
    """
    Maps the ingroup fraction f of a restricted structure's catchment to a factor in
    [-1, 1] applied to the category's base weight. Subclasses register under `name`
    and are selected by the ontology's `modifier` key.
    """

    def __call__(self, ingroup_fraction: float) -> float:
        raise NotImplementedError


class LinearModifier(WeightModifier):
    # +1 for a fully ingroup catchment, -1 for a fully outgroup one
    name = "linear"

    def __call__(self, ingroup_fraction: float) -> float:
        return 2.0 * ingroup_fraction - 1.0


class MajorityModifier(WeightModifier):
    name = "majority"

    def __call__(self, ingroup_fraction: float) -> float:
        return 1.0 if ingroup_fraction >= 0.5 else -1.0


def get_modifier(name: str) -> WeightModifier:
    Factory = WeightModifier.registry.get(name)
    if Factory is None:
        raise ValueError(
            f"there is no {name} weight modifier, choose one of {sorted(WeightModifier.registry)}."
        )
    return Factory()
