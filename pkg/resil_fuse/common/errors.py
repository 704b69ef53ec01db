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

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_COMPUTE = 4


class ResilFuseError(Exception):
    """Base class of every error the pipeline reports with its own exit code."""

    exit_code = 1


class ConfigError(ResilFuseError):
    exit_code = EXIT_CONFIG


class IngestError(ResilFuseError):
    exit_code = EXIT_INGEST


class GeometryError(IngestError, ValueError):
    pass


class ComputeError(ResilFuseError):
    exit_code = EXIT_COMPUTE


class UnknownCategoryError(ComputeError, KeyError):
    def __init__(self, category: str):
        super().__init__(f"there is no {category} category in the ontology.")
        self.category = category

    def __str__(self):
        return self.args[0]
