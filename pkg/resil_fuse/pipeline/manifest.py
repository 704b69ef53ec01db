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

import hashlib
import os
import tempfile
from typing import Any, Dict, List

from pydantic import BaseModel

MANIFEST_NAME = "manifest.json"


class FlaggedStructure(BaseModel):
    id: str
    flags: List[str]


class RunManifest(BaseModel):
    version: str
    config: Dict[str, Any]
    input_hashes: Dict[str, str]
    output_hashes: Dict[str, str] = {}
    counts: Dict[str, int] = {}
    flagged_structures: List[FlaggedStructure] = []
    timings: Dict[str, float] = {}


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def hash_tree(root: str, skip: tuple = (MANIFEST_NAME,)) -> Dict[str, str]:
    """sha256 of every file under `root`, keyed by sorted relative path."""
    hashes = {}
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            rel = os.path.relpath(os.path.join(dirpath, name), root)
            if rel in skip:
                continue
            hashes[rel.replace(os.sep, "/")] = sha256_file(os.path.join(dirpath, name))
    return dict(sorted(hashes.items()))


def write_manifest(manifest: RunManifest, out_dir: str) -> str:
    """Write through a temporary file and rename, so readers never see a partial manifest."""
    path = os.path.join(out_dir, MANIFEST_NAME)
    fd, tmp = tempfile.mkstemp(prefix=".manifest-", suffix=".json", dir=out_dir)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(manifest.model_dump_json(indent=2))
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path
