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

import pytest

from vqaopt import exceptions, specs

LOGGER = logging.getLogger(__name__)


def test_get_type_match():
    spec_list = ['COBYLA', 'spsa', 'Genetic']

    test_entry = 'cobyla'
    field_name = 'optimizer'
    assert 'COBYLA' == specs.get_match(test_entry, spec_list, field_name)
    assert 'Genetic' == specs.get_match(' GENETIC ', spec_list, field_name)

    with pytest.raises(specs.SpecificationException):
        specs.get_match('a', ['b'], field_name)


def test_specification_exception_message():
    with pytest.raises(exceptions.ConfigError) as err:
        specs.get_match('nope', ['qaoa', 'xqaoa'], 'ansatz')
    assert str(err.value) == "ansatz - 'nope' is not one of 'qaoa', 'xqaoa'."
    assert err.value.supported == ['qaoa', 'xqaoa']
