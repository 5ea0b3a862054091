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
"""Config CLI"""
import click

from vqaopt import config, specs
from vqaopt.registry import REGISTRY

from .cmds import translate_exceptions
from .io import echo_json
from .options import overrides, pretty
from .types import CommaSeparatedString

ALL_KINDS = list(config.PLUGIN_SECTIONS) + ['reduction', 'result-processor']


def _prompt(label: str, default: str) -> str:
    return click.prompt(label,
                        default=default,
                        show_default=True,
                        type=str,
                        err=True)


@click.group(name='config')  # type: ignore
@click.pass_context
def config_group(ctx):
    """Commands for writing and checking experiment configs"""


@config_group.command(name='wizard')  # type: ignore
@click.option('--out',
              type=click.Path(dir_okay=False, writable=True),
              default='experiment.json',
              show_default=True,
              help='Where to write the config.')
@click.option('--answers',
              type=click.File('r'),
              default=None,
              help="""Answer file with one reply per line, replayed instead of
              prompting. An empty line accepts the default.""")
@pretty
@click.pass_context
@translate_exceptions
def wizard(ctx, out, answers, pretty):
    """Build a config by answering one question per field.

    The config is only written once every answer is valid. Quitting early
    leaves no file behind.
    """
    if answers is not None:
        ask = config.answers_from_lines(answers.readlines(),
                                        echo=lambda m: click.echo(m, err=True))
    else:
        ask = _prompt
    data = config.config_wizard(ask, echo=lambda m: click.echo(m, err=True))
    config.dump_config(data, out)
    click.echo(f'Wrote {out}', err=True)
    if pretty:
        echo_json(data, pretty)


@config_group.command(name='validate')  # type: ignore
@click.argument('path', type=click.Path(dir_okay=False))
@overrides
@click.pass_context
@translate_exceptions
def validate(ctx, path, overrides):
    """Check that the config at PATH is valid."""
    data = config.apply_overrides(config.load_config(path), overrides)
    config.resolve(data)
    click.echo(f'{path} is valid.')


@config_group.command(name='show')  # type: ignore
@click.argument('path', type=click.Path(dir_okay=False))
@overrides
@pretty
@click.pass_context
@translate_exceptions
def show(ctx, path, overrides, pretty):
    """Print the config at PATH with every default filled in."""
    data = config.apply_overrides(config.load_config(path), overrides)
    echo_json(config.resolve(data).to_dict(), pretty)


@config_group.command(name='plugins')  # type: ignore
@click.option('--kind',
              type=CommaSeparatedString(),
              default=None,
              help='Comma-separated plugin kinds to list. Default is all.')
@click.option('--module',
              'modules',
              multiple=True,
              help='Import an extra plugin module first. May be repeated.')
@click.pass_context
@translate_exceptions
def plugins(ctx, kind, modules):
    """List registered plugins by kind."""
    config.activate_plugins(modules)
    try:
        kinds = [specs.get_match(k, ALL_KINDS, 'kind') for k in kind
                 ] if kind else ALL_KINDS
    except specs.SpecificationException as e:
        raise click.BadParameter(str(e), param_hint='--kind')
    for k in kinds:
        click.echo(f'{k}:')
        for name in REGISTRY.names(k):
            doc = (REGISTRY.lookup(k, name).__doc__ or '').strip()
            summary = doc.splitlines()[0] if doc else ''
            click.echo(f'  {name:<20} {summary}'.rstrip())


@config_group.command(name='fields')  # type: ignore
@click.argument('kind')
@click.argument('name')
@pretty
@click.pass_context
@translate_exceptions
def fields(ctx, kind, name, pretty):
    """Describe the configurable fields of plugin NAME of kind KIND."""
    try:
        kind = specs.get_match(kind, ALL_KINDS, 'kind')
    except specs.SpecificationException as e:
        raise click.BadParameter(str(e), param_hint='KIND')
    descriptors = config.describe_fields(kind, name)
    echo_json([d.to_dict() for d in descriptors], pretty)
