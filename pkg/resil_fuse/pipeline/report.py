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

"""LISA result files and the markdown cluster report."""

import csv
from itertools import zip_longest
from typing import Dict, List, Optional, Sequence

import geojson
from pydantic import BaseModel, ConfigDict
from tabulate import tabulate

from resil_fuse.common.errors import IngestError
from resil_fuse.ingest.structures import read_feature_collection
from resil_fuse.stats.aggregate import NeighborhoodValue
from resil_fuse.stats.lisa import LisaResult, Quadrant, classify

LISA_COLUMNS = ["id", "name", "value", "z", "lag", "local_i", "p_value", "quadrant"]

HIGH_HIGH_HEADER = "Stable (High-High) Neighborhood"
LOW_LOW_HEADER = "Feral (Low-Low) Neighborhood"


class LisaSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    global_i: float
    n: int
    excluded: List[int] = []
    weights: str
    n_perm: int
    seed: int
    alpha_map: float
    alpha_report: float
    bonferroni: bool = False


def write_lisa_csv(results: Sequence[LisaResult], path: str):
    with open(path, mode="w", encoding="utf-8", newline="") as f:
        csv_writer = csv.DictWriter(f, fieldnames=LISA_COLUMNS, lineterminator="\n")
        csv_writer.writeheader()
        for r in results:
            csv_writer.writerow(
                {
                    "id": r.neighborhood_id,
                    "name": r.name,
                    "value": repr(r.value),
                    "z": repr(r.z),
                    "lag": repr(r.lag),
                    "local_i": repr(r.local_i),
                    "p_value": repr(r.p_value),
                    "quadrant": r.quadrant.value,
                }
            )


def read_lisa_csv(path: str) -> List[LisaResult]:
    try:
        with open(path, mode="r", encoding="utf-8", newline="") as f:
            return [
                LisaResult(
                    neighborhood_id=int(row["id"]),
                    name=row["name"],
                    value=float(row["value"]),
                    z=float(row["z"]),
                    lag=float(row["lag"]),
                    local_i=float(row["local_i"]),
                    p_value=float(row["p_value"]),
                    quadrant=Quadrant(row["quadrant"]),
                )
                for row in csv.DictReader(f)
            ]
    except FileNotFoundError:
        raise IngestError(f"{path} does not exist, run the lisa stage first")
    except (KeyError, ValueError) as e:
        raise IngestError(f"cannot read {path}: {e}")


def write_summary(summary: LisaSummary, path: str):
    with open(path, "w") as f:
        f.write(summary.model_dump_json(indent=2))
        f.write("\n")


def read_summary(path: str) -> LisaSummary:
    try:
        with open(path, "r") as f:
            return LisaSummary.model_validate_json(f.read())
    except FileNotFoundError:
        raise IngestError(f"{path} does not exist, run the lisa stage first")
    except ValueError as e:
        raise IngestError(f"cannot read {path}: {e}")


def write_lisa_geojson(
    neighborhoods_path: str,
    values: Sequence[NeighborhoodValue],
    results: Sequence[LisaResult],
    path: str,
):
    """The input neighborhoods with aggregated values and LISA results attached."""
    data = read_feature_collection(neighborhoods_path)
    by_value: Dict[int, NeighborhoodValue] = {v.id: v for v in values}
    by_result: Dict[int, LisaResult] = {r.neighborhood_id: r for r in results}

    features = []
    for feature in data["features"]:
        props = dict(feature.get("properties") or {})
        hood_id = int(props.get("id", feature.get("id")))
        value = by_value.get(hood_id)
        result = by_result.get(hood_id)
        props.update(
            {
                "id": hood_id,
                "cell_count": value.cell_count if value else 0,
                "value": value.value if value else None,
                "bridging": value.bridging if value else None,
                "bonding": value.bonding if value else None,
                "excluded": result is None,
            }
        )
        if result is not None:
            props.update(
                {
                    "z": result.z,
                    "lag": result.lag,
                    "local_i": result.local_i,
                    "p_value": result.p_value,
                    "quadrant": result.quadrant.value,
                }
            )
        features.append(geojson.Feature(geometry=feature["geometry"], properties=props))

    with open(path, "w") as f:
        geojson.dump(geojson.FeatureCollection(features), f)
        f.write("\n")


def report_quadrant(result: LisaResult, alpha: float) -> Quadrant:
    if result.quadrant == Quadrant.ISOLATE:
        return Quadrant.ISOLATE
    return classify(result.z, result.lag, result.p_value, alpha)


def format_p(p: float) -> str:
    return f"{p:.3g}"


def _cell(r: LisaResult) -> str:
    return f"{r.neighborhood_id}: {r.name} (p = {format_p(r.p_value)})"


def _ranked(results: Sequence[LisaResult], quadrant: Quadrant, alpha: float) -> List[LisaResult]:
    members = [r for r in results if report_quadrant(r, alpha) == quadrant]
    return sorted(members, key=lambda r: (r.p_value, r.neighborhood_id))


def render_report(
    results: Sequence[LisaResult], summary: LisaSummary, title: Optional[str] = None
) -> str:
    alpha = summary.alpha_report / summary.n if summary.bonferroni else summary.alpha_report
    high = _ranked(results, Quadrant.HH, alpha)
    low = _ranked(results, Quadrant.LL, alpha)

    lines = [f"# {title or 'Social capital clusters'}", ""]
    lines.append(
        f"{summary.n} neighborhoods analysed, {len(summary.excluded)} excluded; "
        f"{summary.weights} weights, {summary.n_perm} permutations, seed {summary.seed}."
    )
    lines.append("")
    lines.append(f"## Most significant clusters (p <= {format_p(alpha)})")
    lines.append("")
    rows = [
        [_cell(h) if h else "", _cell(l) if l else ""] for h, l in zip_longest(high, low)
    ]
    lines.append(tabulate(rows, headers=[HIGH_HIGH_HEADER, LOW_LOW_HEADER], tablefmt="github"))
    lines.append("")
    lines.append("## Global autocorrelation")
    lines.append("")
    lines.append(f"Moran's I = {summary.global_i:.4f}")
    lines.append("")
    return "\n".join(lines)


def write_report(results: Sequence[LisaResult], summary: LisaSummary, path: str):
    with open(path, "w") as f:
        f.write(render_report(results, summary))
