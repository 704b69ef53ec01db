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
Local and global Moran's I with conditional permutation inference.

    z_i = x_i - mean(x)
    m2  = sum(z_k^2) / n
    I_i = (z_i / m2) * sum_j w_ij z_j

With row-standardized weights sum_i I_i = n * I_global. The raw form
z_i * sum_j w_ij z_j is available with `raw=True`.

Permutation p-values are two-sided pseudo p-values,
(#{|I_perm| >= |I_obs|} + 1) / (n_perm + 1). Observation i draws from its own
generator seeded with (seed, i), so p-values do not depend on evaluation order
or the number of workers.
"""

from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from esda.moran import Moran
from pydantic import BaseModel, ConfigDict

from resil_fuse.common.errors import ComputeError
from resil_fuse.common.logging import logger
from resil_fuse.common.parallel import map_ordered, split_range
from resil_fuse.stats.weights import SpatialWeights

MIN_PERMUTATIONS = 99


class Quadrant(str, Enum):
    HH = "HH"
    LL = "LL"
    LH = "LH"
    HL = "HL"
    NS = "NS"
    ISOLATE = "ISOLATE"


class LisaResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    neighborhood_id: int
    name: str = ""
    value: float
    z: float
    lag: float
    local_i: float
    p_value: float
    quadrant: Quadrant


def _check_inputs(values, w: SpatialWeights) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or len(x) != w.n:
        raise ComputeError(f"{len(x)} values for {w.n} observations in the weights")
    if w.n < 3:
        raise ComputeError(f"Moran's I needs at least 3 observations, got {w.n}")
    if not np.all(np.isfinite(x)):
        raise ComputeError("Moran's I needs finite values")
    return x


def local_morans_i(
    values: Sequence[float], w: SpatialWeights, raw: bool = False
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(z, lag, I) per observation."""
    x = _check_inputs(values, w)
    z = x - x.mean()
    lag = w.lag(z)
    if raw:
        return z, lag, z * lag
    m2 = (z * z).sum() / len(z)
    if m2 == 0:
        return z, lag, np.zeros(len(z))
    return z, lag, (z / m2) * lag


def global_morans_i(values: Sequence[float], w: SpatialWeights) -> float:
    x = _check_inputs(values, w)
    z = x - x.mean()
    if not np.any(z != 0) or w.s0 == 0:
        return 0.0
    # keep the transform the weights were built with
    return float(Moran(x, w.w, transformation=w.w.transform, permutations=0).I)


def _permute_chunk(
    start: int,
    end: int,
    z: np.ndarray,
    neighbors: List[List[int]],
    weights: List[np.ndarray],
    n_perm: int,
    seed: int,
) -> List[float]:
    p_values = []
    for i in range(start, end):
        nbrs, w_i = neighbors[i], weights[i]
        k = len(nbrs)
        if k == 0 or z[i] == 0:
            p_values.append(1.0)
            continue
        observed = abs(z[i] * (z[nbrs] * w_i).sum())
        others = np.delete(z, i)
        rng = np.random.default_rng([seed, i])
        draws = rng.permuted(np.tile(others, (n_perm, 1)), axis=1)[:, :k]
        permuted = np.abs(z[i] * (draws * w_i).sum(axis=1))
        larger = int((permuted >= observed).sum())
        p_values.append((larger + 1.0) / (n_perm + 1.0))
    return p_values


def permutation_p(
    values: Sequence[float],
    w: SpatialWeights,
    n_perm: int = 999,
    seed: int = 0,
    workers: int = 1,
) -> np.ndarray:
    """
    Conditional permutation p-values: z_i stays fixed while n_perm random
    permutations of the other n - 1 values fill its neighbor slots.

    m2 is shared by every permutation, so comparing |z_i * lag| orders the
    permuted local I exactly as the normalized statistic would.
    """
    if n_perm < MIN_PERMUTATIONS:
        raise ComputeError(f"n_perm must be >= {MIN_PERMUTATIONS}, got {n_perm}")
    x = _check_inputs(values, w)
    z = x - x.mean()
    if not np.any(z != 0):
        return np.ones(len(z))

    tasks = [
        (a, b, z, w.neighbors, w.weights, n_perm, seed) for a, b in split_range(len(z), workers)
    ]
    chunks = map_ordered(_permute_chunk, tasks, workers)
    return np.array([p for chunk in chunks for p in chunk])


def classify(z: float, lag: float, p: float, alpha: float) -> Quadrant:
    if p > alpha or z == 0 or lag == 0:
        return Quadrant.NS
    if z > 0:
        return Quadrant.HH if lag > 0 else Quadrant.HL
    return Quadrant.LH if lag > 0 else Quadrant.LL


def lisa(
    ids: Sequence[int],
    values: Sequence[float],
    w: SpatialWeights,
    n_perm: int = 999,
    seed: int = 0,
    alpha: float = 0.05,
    names: Optional[Sequence[str]] = None,
    bonferroni: bool = False,
    raw: bool = False,
    workers: int = 1,
) -> List[LisaResult]:
    """Local I, permutation p-values and quadrant for every observation of `w`."""
    if list(ids) != list(w.ids):
        raise ComputeError("observation ids do not match the spatial weights")
    names = list(names) if names is not None else [str(i) for i in ids]
    z, lag, local_i = local_morans_i(values, w, raw=raw)
    p_values = permutation_p(values, w, n_perm=n_perm, seed=seed, workers=workers)
    threshold = alpha / w.n if bonferroni else alpha
    islands = set(w.islands)

    results = []
    for i, hood_id in enumerate(ids):
        quadrant = (
            Quadrant.ISOLATE if i in islands else classify(z[i], lag[i], p_values[i], threshold)
        )
        results.append(
            LisaResult(
                neighborhood_id=hood_id,
                name=names[i],
                value=float(values[i]),
                z=float(z[i]),
                lag=float(lag[i]),
                local_i=float(local_i[i]),
                p_value=float(p_values[i]),
                quadrant=quadrant,
            )
        )
    counts = {q.value: sum(r.quadrant == q for r in results) for q in Quadrant}
    logger.info(f"LISA over {w.n} observations at alpha {threshold}: {counts}")
    return results
