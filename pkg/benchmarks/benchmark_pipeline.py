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

import argparse
import json
import tempfile
import time
from pathlib import Path
from typing import Dict, List

import numpy as np

from resil_fuse.common.logging import set_level
from resil_fuse.pipeline import stages
from resil_fuse.pipeline.run_config import load_run_config
from resil_fuse.pipeline.toy_city import write_toy_city


def benchmark(
    config_path: str, workers: int, repeats: int, out_root: str
) -> Dict[str, List[float]]:
    """Wall time per stage, and for the whole run, over `repeats` runs."""
    timings: Dict[str, List[float]] = {}
    for i in range(repeats):
        out_dir = f"{out_root}/w{workers}_{i}"
        config = load_run_config(config_path, workers=workers, output_dir=out_dir)
        start = time.perf_counter()
        manifest = stages.run(config)
        total = time.perf_counter() - start
        for name, elapsed in manifest.timings.items():
            timings.setdefault(name, []).append(elapsed)
        timings.setdefault("total", []).append(total)
    return timings


def main(args: argparse.Namespace):
    print(args)
    set_level(args.log_level)

    with tempfile.TemporaryDirectory() as tmp:
        config_path = args.config or write_toy_city(tmp, seed=args.seed)
        summary = {}
        for workers in args.workers:
            timings = benchmark(config_path, workers, args.repeats, tmp)
            summary[workers] = {name: float(f"{np.median(v):.3f}") for name, v in timings.items()}
            line = " ".join(f"{name}={value:.3f}s" for name, value in summary[workers].items())
            print(f"workers={workers}: {line}")

    base = summary[args.workers[0]]["total"]
    for workers, result in summary.items():
        print(f"Speedup with {workers} workers: {base / result['total']:.2f}x")

    if args.results_dir:
        results_dir = Path(args.results_dir)
        if not results_dir.exists():
            results_dir.mkdir(parents=True)
        elif not results_dir.is_dir():
            raise ValueError(f"{args.results_dir} is not a directory")

        timestamp = time.strftime("%Y%m%d-%H%M%S")
        path = results_dir / f"pipeline_summary_{timestamp}.json"
        with open(path, "w") as f:
            json.dump({"repeats": args.repeats, "median_seconds": summary}, f, indent=2)
        print(f'Results saved to "{path}"')


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Benchmark the pipeline stages on the toy city or a given run config."
    )
    parser.add_argument(
        "--config",
        default=None,
        type=str,
        help="Run config to benchmark. Default writes a toy city to a temporary directory.",
    )
    parser.add_argument(
        "--workers",
        default=[1, 2, 4],
        type=int,
        nargs="+",
        help="Worker counts to compare, the first one is the speedup baseline.",
    )
    parser.add_argument("--repeats", default=3, type=int, help="Runs per worker count.")
    parser.add_argument("--seed", default=7, type=int, help="Toy city seed.")
    parser.add_argument("--log-level", default="WARNING", type=str)
    parser.add_argument(
        "--results-dir",
        default=None,
        type=str,
        help="Directory to save the timing summary to.",
    )
    main(parser.parse_args())
