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
import os
from pathlib import Path

import numpy as np
import pytest

from vqaopt import acp, encodings, graphs
from vqaopt.constants import DATA_DIR

_here = Path(os.path.abspath(os.path.dirname(__file__)))
_test_data_path = _here / 'data'


def pytest_addoption(parser):
    parser.addoption('--runslow',
                     action='store_true',
                     default=False,
                     help='run slow benchmark reproductions')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def test_data_path():
    return _test_data_path


@pytest.fixture
def toy_schedule_path():
    return DATA_DIR / 'toy_schedule.csv'


@pytest.fixture
def toy_acp(toy_schedule_path):
    legs, bases = acp.read_legs_csv(toy_schedule_path)
    return acp.build_instance(legs, bases)


@pytest.fixture
def toy_mcec(toy_acp):
    return acp.acp_to_mcec(toy_acp)


@pytest.fixture
def small_mcec():
    """Three elements, four subsets. {s0, s2} costs 5 and {s1, s3} costs 2."""
    membership = np.array([[1, 0, 0, 1],
                           [1, 1, 0, 0],
                           [0, 1, 1, 0]])
    return encodings.McecInstance(membership, [3.0, 1.0, 2.0, 1.0])


@pytest.fixture
def triangle():
    return encodings.MaxCutInstance(3, ((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def square():
    return encodings.MaxCutInstance(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


@pytest.fixture
def write_edge_file(tmp_path):

    def func(graph, name='graph.txt'):
        path = tmp_path / name
        graphs.write_edge_list(graph, path)
        return path

    return func
