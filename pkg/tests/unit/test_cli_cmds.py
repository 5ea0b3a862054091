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
import click
from click.testing import CliRunner
import pytest

from vqaopt import exceptions
from vqaopt.cli.cmds import translate_exceptions


@pytest.mark.parametrize("error, exit_code, prefix", [
    (exceptions.ConfigError('bad field'), 3, 'Error: Configuration error: '),
    (exceptions.UnknownPlugin('no such plugin'),
     3,
     'Error: Configuration error: '),
    (exceptions.ParseError('bad row', line=2), 4, 'Error: I/O error: line 2'),
    (exceptions.WriteError('out.tsv', 'Denied'), 4, 'Error: I/O error: '),
    (exceptions.NoPath('no route'), 1, 'Error: no route'),
    (exceptions.TooLarge('too big'), 1, 'Error: too big'),
])
def test_translate_exceptions(error, exit_code, prefix):

    @click.command()
    @translate_exceptions
    def test():
        raise error

    result = CliRunner().invoke(test)
    assert result.exit_code == exit_code
    assert result.output.startswith(prefix)


def test_translate_aborted():

    @click.command()
    @translate_exceptions
    def test():
        raise exceptions.Aborted('gone')

    result = CliRunner().invoke(test)
    assert result.exit_code == 1
    assert 'Aborted!' in result.output


def test_translate_passes_other_errors():

    @click.command()
    @translate_exceptions
    def test():
        raise KeyError('x')

    result = CliRunner().invoke(test)
    assert isinstance(result.exception, KeyError)
