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

import functools
from typing import Optional

import typer

from resil_fuse.common.errors import ResilFuseError
from resil_fuse.common.logging import set_level
from resil_fuse.pipeline import stages
from resil_fuse.pipeline.run_config import load_run_config
from resil_fuse.pipeline.toy_city import TOY_SEED, write_toy_city

app = typer.Typer(
    add_completion=False,
    help="Fuse social structures and population into social capital surfaces and LISA clusters.",
)

ConfigOption = typer.Option(..., "--config", "-c", help="YAML run config")
WorkersOption = typer.Option(None, "--workers", "-w", help="parallel workers, overrides the config")
SeedOption = typer.Option(None, "--seed", help="permutation seed, overrides the config")
OutOption = typer.Option(None, "--out", "-o", help="output directory, overrides the config")


def exit_on_error(func):
    """Turn pipeline errors into their exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ResilFuseError as e:
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code=e.exit_code)

    return wrapper


@app.callback()
def configure(
    log_level: str = typer.Option("INFO", "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    set_level(log_level)


@app.command()
@exit_on_error
def run(
    config: str = ConfigOption,
    workers: Optional[int] = WorkersOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
):
    """Run every stage and write the outputs with a manifest."""
    cfg = load_run_config(config, workers=workers, seed=seed, output_dir=out)
    stages.run(cfg)
    typer.echo(cfg.output_dir)


@app.command()
@exit_on_error
def validate(config: str = ConfigOption):
    """Load and check every input without computing anything."""
    cfg = load_run_config(config)
    bundle = stages.validate(cfg)
    typer.echo(
        f"ok: {len(bundle.structures)} structures, "
        f"{len({h.id for h in bundle.neighborhoods})} neighborhoods, "
        f"population grid {bundle.population.header.ncols}x{bundle.population.header.nrows}"
    )


@app.command()
@exit_on_error
def layers(
    config: str = ConfigOption,
    workers: Optional[int] = WorkersOption,
    out: Optional[str] = OutOption,
):
    """Catchments and per-layer density rasters."""
    cfg = load_run_config(config, workers=workers, output_dir=out)
    stages.layers(cfg)


@app.command()
@exit_on_error
def fuse(config: str = ConfigOption, out: Optional[str] = OutOption):
    """Fuse the layer rasters into total, bridging and bonding surfaces."""
    cfg = load_run_config(config, output_dir=out)
    stages.fuse_layers(cfg)


@app.command()
@exit_on_error
def lisa(
    config: str = ConfigOption,
    workers: Optional[int] = WorkersOption,
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
):
    """Aggregate to neighborhoods and run the LISA analysis."""
    cfg = load_run_config(config, workers=workers, seed=seed, output_dir=out)
    stages.run_lisa(cfg)


@app.command()
@exit_on_error
def report(config: str = ConfigOption, out: Optional[str] = OutOption):
    """Write report.md from the LISA results."""
    cfg = load_run_config(config, output_dir=out)
    typer.echo(stages.report(cfg))


@app.command("toy-city")
@exit_on_error
def toy_city(
    out: str = typer.Argument(..., help="directory to write the toy city into"),
    seed: int = typer.Option(TOY_SEED, "--seed", help="generator seed"),
):
    """Write a synthetic city with a ready-to-run config."""
    typer.echo(write_toy_city(out, seed=seed))


def main():
    app()


if __name__ == "__main__":
    main()
