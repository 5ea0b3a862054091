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
import json

from click.testing import CliRunner
import pytest

from vqaopt.cli import cli
from vqaopt.constants import ENV_OUTPUT_DIR


@pytest.fixture(autouse=True, scope='function')
def test_clear_output_dir(monkeypatch):
    """Keep a user's output directory setting out of the tests"""
    monkeypatch.delenv(ENV_OUTPUT_DIR, raising=False)


@pytest.fixture
def quick_config(tmp_path):
    return {
        'loader': {
            'name': 'maxcut', 'nodes': [3]
        },
        'ansatz': {
            'name': 'qaoa', 'depth': 1
        },
        'optimizer': {
            'name': 'cobyla', 'budget': 40
        },
        'run': {
            'restarts': 1,
            'shots': 100,
            'seed': 11,
            'output': str(tmp_path / 'results')
        }
    }


@pytest.fixture
def write_config(tmp_path):

    def func(data, name='experiment.json'):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return func


@pytest.fixture
def invoke():

    def _invoke(args, runner=None, **kwargs):
        runner = runner or CliRunner()
        return runner.invoke(cli.main, args=['--quiet'] + args, **kwargs)

    return _invoke
