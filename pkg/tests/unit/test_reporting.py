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
import logging
import re

from vqaopt import reporting

LOGGER = logging.getLogger(__name__)


def test_ExperimentBar___init__():
    with reporting.ExperimentBar(total=4) as bar:
        assert re.match('solving: +0%', str(bar))
        assert bar.bar.total == 4


def test_ExperimentBar_update():
    with reporting.ExperimentBar(total=4) as bar:
        bar.update()
        bar.update(problem='maxcut-n3-0000')
        assert bar.bar.n == 2
        assert bar.problem == 'maxcut-n3-0000'
        assert 'maxcut-n3-0000' in str(bar)


def test_ExperimentBar_disabled():
    """Make sure it doesn't error out when disabled"""
    with reporting.ExperimentBar(total=2, disable=True) as bar:
        assert bar.bar.disable

        # just make sure this doesn't error out
        bar.update(problem='toy')


def test_ExperimentBar_update_before_open():
    bar = reporting.ExperimentBar(total=1)
    bar.update()
    assert bar.bar is None
