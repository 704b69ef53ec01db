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

from typing import Any, Callable, List, Sequence, Tuple

import numpy as np
import ray

from resil_fuse.common.logging import logger


def init_workers(workers: int):
    if not ray.is_initialized():
        runtime_env = {"env_vars": {"OMP_NUM_THREADS": "1"}}
        ray.init(
            num_cpus=workers,
            include_dashboard=False,
            log_to_driver=False,
            runtime_env=runtime_env,
        )
        logger.info(f"ray available resources = {ray.available_resources()}")


def split_range(n: int, chunks: int) -> List[Tuple[int, int]]:
    """Split [0, n) into at most `chunks` contiguous, non-empty, ordered spans."""
    chunks = max(1, min(chunks, n)) if n > 0 else 1
    bounds = np.linspace(0, n, chunks + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def map_ordered(func: Callable, tasks: Sequence[Tuple[Any, ...]], workers: int = 1) -> List[Any]:
    """
    Apply `func` to every argument tuple in `tasks` and return results in task order.

    With more than one worker each task becomes a Ray task; the shared arguments are
    expected to be numpy arrays or plain objects that Ray can serialize.
    """
    if workers <= 1 or len(tasks) <= 1:
        return [func(*args) for args in tasks]

    init_workers(workers)
    remote_func = ray.remote(func)
    refs = [remote_func.remote(*args) for args in tasks]
    # ray.get keeps the order of the refs list, so the reduction order is fixed
    return ray.get(refs)
