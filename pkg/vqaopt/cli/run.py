# Copyright 2024 The vqaopt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Experiment CLI"""
import json
import logging
from pathlib import Path

import click

from vqaopt import config, pipeline
from vqaopt.exceptions import ParseError

from .cmds import translate_exceptions
from .io import echo_json
from .options import overrides, pretty

LOGGER = logging.getLogger(__name__)


@click.command(name='run')  # type: ignore
@click.argument('path', type=click.Path(dir_okay=False))
@overrides
@click.option('--dry-run',
              is_flag=True,
              default=False,
              help='Validate and print the plan without solving.')
@click.option('--out',
              type=click.Path(file_okay=False),
              default=None,
              help="""Parent directory for results. Overrides the
              VQAOPT_OUTPUT_DIR environment variable and run.output.""")
@pretty
@click.pass_context
@translate_exceptions
def run(ctx, path, overrides, dry_run, out, pretty):
    """Run the experiment described by the config at PATH.

    Results go to a directory named after the config file, inside the
    output directory.
    """
    data = config.apply_overrides(config.load_config(path), overrides)
    resolved = config.resolve(data)
    experiment = pipeline.Experiment(resolved)
    instances = experiment.load()

    if dry_run:
        echo_json(experiment.plan(instances), pretty)
        return

    directory = pipeline.output_directory(resolved, out) / Path(path).stem
    records = pipeline.write_experiment(experiment,
                                        instances,
                                        directory,
                                        quiet=ctx.obj['QUIET'])
    click.echo(f'{len(records)} records written to {directory}')


def _summaries(root: Path):
    for manifest in sorted(root.glob('*/manifest.json')):
        try:
            data = json.loads(manifest.read_text(encoding='utf-8'))
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f'{manifest}: {e}')
        yield {
            'name': manifest.parent.name,
            'seed': data.get('seed'),
            'instances': len(data.get('instances', [])),
            'records': len(data.get('records', [])),
            'files': data.get('files', [])
        }


@click.command(name='list-results')  # type: ignore
@click.argument('directory',
                type=click.Path(exists=True, file_okay=False),
                default='results')
@pretty
@click.pass_context
@translate_exceptions
def list_results(ctx, directory, pretty):
    """List the experiment directories found in DIRECTORY.

    Prints one JSON object per experiment.
    """
    found = False
    for summary in _summaries(Path(directory)):
        found = True
        echo_json(summary, pretty)
    if not found:
        LOGGER.warning(f'No experiments found in {directory}.')
