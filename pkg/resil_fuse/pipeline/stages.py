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
Pipeline stages. Each stage reads its inputs from the config and from the files of
the previous stage in the output directory, and writes its own files there:

    validate  ingest only, nothing written
    layers    catchments.csv, layers/<layer>.{asc,bridging.asc,bonding.asc,pgm}, layers/layers.json
    fuse      social_capital_{total,bridging,bonding}.{asc,pgm}
    lisa      lisa.csv, lisa.geojson, lisa_summary.json
    report    report.md

`run` executes all of them in a staging directory and moves it into place with a
manifest once every stage succeeded.
"""

import functools
import os
import shutil
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from resil_fuse import __version__
from resil_fuse.catchment.catchment import CatchmentResult, compute_catchments, write_catchments_csv
from resil_fuse.common.errors import ComputeError, IngestError, ResilFuseError
from resil_fuse.common.logging import logger
from resil_fuse.density.density import render_layers
from resil_fuse.density.fusion import fuse
from resil_fuse.density.layer_io import read_layers, read_surface, write_layers, write_surface
from resil_fuse.ingest.neighborhoods import Neighborhood, load_neighborhoods
from resil_fuse.ingest.raster import (
    PopulationGroupRaster,
    PopulationRaster,
    load_group_raster,
    load_raster,
)
from resil_fuse.ingest.structures import SocialStructure, load_structures
from resil_fuse.ontology.ontology_config import Ontology, load_ontology
from resil_fuse.pipeline.manifest import (
    FlaggedStructure,
    RunManifest,
    hash_tree,
    sha256_file,
    write_manifest,
)
from resil_fuse.pipeline.report import (
    LisaSummary,
    read_lisa_csv,
    read_summary,
    write_lisa_csv,
    write_lisa_geojson,
    write_report,
    write_summary,
)
from resil_fuse.pipeline.run_config import RunConfig
from resil_fuse.stats.aggregate import aggregate
from resil_fuse.stats.lisa import global_morans_i, lisa
from resil_fuse.stats.weights import build_weights

LAYERS_DIR = "layers"
CATCHMENTS_CSV = "catchments.csv"
LISA_CSV = "lisa.csv"
LISA_GEOJSON = "lisa.geojson"
LISA_SUMMARY = "lisa_summary.json"
REPORT_MD = "report.md"


def stage(name: str, error_cls=ComputeError):
    """
    Log start/finish of a stage and record its wall time into the `timings` dict
    passed as keyword, if any. Errors that are not ResilFuseErrors are wrapped into
    `error_cls` naming the stage.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, timings: Optional[Dict[str, float]] = None, **kwargs):
            logger.info(f"{name} start")
            start = time.perf_counter()
            try:
                ret = func(*args, **kwargs)
            except ResilFuseError as e:
                logger.critical(f"{name} failed: {e}", exc_info=True)
                raise
            except Exception as e:
                logger.critical(f"{name} failed: {e}", exc_info=True)
                raise error_cls(f"{name} stage failed: {e}") from e
            elapsed = time.perf_counter() - start
            if timings is not None:
                timings[name] = elapsed
            logger.info(f"{name} finish in {elapsed:.3f}s")
            return ret

        return wrapper

    return decorator


@dataclass
class InputBundle:
    ontology: Ontology
    structures: List[SocialStructure]
    neighborhoods: List[Neighborhood]
    population: PopulationRaster
    group_rasters: Dict[str, PopulationGroupRaster] = field(default_factory=dict)


@stage("validate", IngestError)
def validate(config: RunConfig) -> InputBundle:
    config.check_inputs()
    ontology = load_ontology(config.inputs.ontology)
    origin = config.projection.origin
    structures = load_structures(
        config.inputs.structures, ontology, origin, permissive=config.analysis.permissive
    )
    neighborhoods = load_neighborhoods(config.inputs.neighborhoods, origin)
    population = load_raster(config.inputs.population)
    group_rasters = {
        group: load_group_raster(path, group, population)
        for group, path in config.inputs.group_rasters.items()
    }
    return InputBundle(
        ontology=ontology,
        structures=structures,
        neighborhoods=neighborhoods,
        population=population,
        group_rasters=group_rasters,
    )


def _output_dir(config: RunConfig, out_dir: Optional[str]) -> str:
    out_dir = out_dir or config.output_dir
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


@stage("layers")
def layers(
    config: RunConfig, out_dir: Optional[str] = None, bundle: Optional[InputBundle] = None
) -> List[CatchmentResult]:
    out_dir = _output_dir(config, out_dir)
    bundle = bundle or validate(config)
    catchments = compute_catchments(
        bundle.structures,
        bundle.population,
        bundle.ontology,
        bundle.group_rasters,
        workers=config.workers,
    )
    write_catchments_csv(catchments, os.path.join(out_dir, CATCHMENTS_CSV))
    rendered, _ = render_layers(
        bundle.structures,
        catchments,
        bundle.population.header,
        bundle.ontology,
        workers=config.workers,
    )
    write_layers(rendered, os.path.join(out_dir, LAYERS_DIR), bundle.population.valid)
    return catchments


@stage("fuse")
def fuse_layers(config: RunConfig, out_dir: Optional[str] = None):
    out_dir = _output_dir(config, out_dir)
    ontology = load_ontology(config.inputs.ontology)
    density_layers, valid = read_layers(os.path.join(out_dir, LAYERS_DIR))
    surface = fuse(density_layers, ontology, valid=valid)
    write_surface(surface, out_dir)
    return surface


@stage("lisa")
def run_lisa(config: RunConfig, out_dir: Optional[str] = None) -> LisaSummary:
    out_dir = _output_dir(config, out_dir)
    analysis = config.analysis
    surface = read_surface(out_dir)
    hoods = load_neighborhoods(config.inputs.neighborhoods, config.projection.origin)
    values = aggregate(surface, hoods)
    defined = [v for v in values if v.defined]
    excluded = [v.id for v in values if not v.defined]

    w = build_weights(hoods, analysis.weights, k=analysis.k, ids=[v.id for v in defined])
    observed = [v.value for v in defined]
    results = lisa(
        [v.id for v in defined],
        observed,
        w,
        n_perm=analysis.n_perm,
        seed=analysis.seed,
        alpha=analysis.alpha_map,
        names=[v.name for v in defined],
        bonferroni=analysis.bonferroni,
        raw=analysis.raw_local_i,
        workers=config.workers,
    )
    summary = LisaSummary(
        global_i=global_morans_i(observed, w),
        n=w.n,
        excluded=excluded,
        weights=analysis.weights.value,
        n_perm=analysis.n_perm,
        seed=analysis.seed,
        alpha_map=analysis.alpha_map,
        alpha_report=analysis.alpha_report,
        bonferroni=analysis.bonferroni,
    )
    write_lisa_csv(results, os.path.join(out_dir, LISA_CSV))
    write_lisa_geojson(
        config.inputs.neighborhoods, values, results, os.path.join(out_dir, LISA_GEOJSON)
    )
    write_summary(summary, os.path.join(out_dir, LISA_SUMMARY))
    return summary


@stage("report")
def report(config: RunConfig, out_dir: Optional[str] = None) -> str:
    out_dir = _output_dir(config, out_dir)
    results = read_lisa_csv(os.path.join(out_dir, LISA_CSV))
    summary = read_summary(os.path.join(out_dir, LISA_SUMMARY))
    path = os.path.join(out_dir, REPORT_MD)
    write_report(results, summary, path)
    return path


def run(config: RunConfig) -> RunManifest:
    """
    All stages into `<output_dir>.partial`, then swap it into `output_dir`. On any
    failure the staging directory is removed and the previous output stays as it was.
    """
    out_dir = config.output_dir
    staging = out_dir.rstrip(os.sep) + ".partial"
    if os.path.exists(staging):
        shutil.rmtree(staging)
    os.makedirs(staging)

    timings: Dict[str, float] = {}
    try:
        bundle = validate(config, timings=timings)
        catchments = layers(config, staging, bundle, timings=timings)
        fuse_layers(config, staging, timings=timings)
        summary = run_lisa(config, staging, timings=timings)
        report(config, staging, timings=timings)

        manifest = RunManifest(
            version=__version__,
            config=config.model_dump(mode="json"),
            input_hashes={role: sha256_file(p) for role, p in config.input_files().items()},
            output_hashes=hash_tree(staging),
            counts={
                "structures": len(bundle.structures),
                "neighborhoods": len({h.id for h in bundle.neighborhoods}),
                "analysed_neighborhoods": summary.n,
                "excluded_neighborhoods": len(summary.excluded),
            },
            flagged_structures=[
                FlaggedStructure(id=c.structure_id, flags=list(c.flags))
                for c in catchments
                if c.flags
            ],
            timings=timings,
        )
        write_manifest(manifest, staging)
        if os.path.exists(out_dir):
            shutil.rmtree(out_dir)
        os.replace(staging, out_dir)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    logger.info(f"run finished, outputs in {out_dir}")
    return manifest
