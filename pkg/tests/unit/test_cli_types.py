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
from contextlib import nullcontext as does_not_raise

import click
from click.testing import CliRunner
from click.exceptions import BadParameter
import pytest

from vqaopt.cli import types


@pytest.mark.parametrize("input,expectation, expected",
                         [('a', does_not_raise(), ['a']),
                          ('a,b', does_not_raise(), ['a', 'b']),
                          ('a, b', does_not_raise(), ['a', 'b']),
                          ('a,,', pytest.raises(BadParameter), None),
                          ('', pytest.raises(BadParameter), None),
                          (['a'], does_not_raise(), ['a'])])  # yapf: disable
def test_cli_CommaSeparatedString(input, expectation, expected):
    with expectation:
        res = types.CommaSeparatedString().convert(input, None, None)

    if expected:
        assert res == expected


@pytest.mark.parametrize("input, expectation, expected",
                         [('ansatz.depth=2', does_not_raise(),
                           ('ansatz.depth', 2)),
                          ('ansatz.depth=[1, 2]', does_not_raise(),
                           ('ansatz.depth', [1, 2])),
                          ('loader.path=a.csv', does_not_raise(),
                           ('loader.path', 'a.csv')),
                          ('loader.path=null', does_not_raise(),
                           ('loader.path', None)),
                          ('run.output=', does_not_raise(),
                           ('run.output', '')),
                          ('a=b=c', does_not_raise(), ('a', 'b=c')),
                          ('depth', pytest.raises(BadParameter), None),
                          ('=2', pytest.raises(BadParameter), None),
                          (('run.seed', 1), does_not_raise(),
                           ('run.seed', 1))])  # yapf: disable
def test_cli_Override(input, expectation, expected):
    with expectation:
        res = types.Override().convert(input, None, None)

    if expected:
        assert res == expected


def test_cli_Override_multiple():

    @click.option('--set', 'overrides', type=types.Override(), multiple=True)
    @click.command()
    def test(overrides):
        click.echo(repr(list(overrides)))

    result = CliRunner().invoke(
        test, args=['--set', 'run.seed=4', '--set', 'ansatz.name=xqaoa'])
    assert result.exit_code == 0
    assert result.output.strip() == ("[('run.seed', 4), "
                                     "('ansatz.name', 'xqaoa')]")
