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
import sys

import pytest

from vqaopt import exceptions, plugins, registry


class Dummy(registry.Plugin):
    KIND = 'optimizer'
    NAME = 'dummy'
    FIELDS = {
        'steps': {
            'title': 'Steps', 'type': 'integer', 'default': 3
        },
        'options': {
            'title': 'Options', 'type': 'object', 'default': {}
        }
    }


@pytest.fixture
def fresh_registry():
    return registry.PluginRegistry()


def test_plugin_defaults_and_settings():
    plugin = Dummy(steps=5)
    assert plugin.settings == {'steps': 5, 'options': {}}
    assert Dummy().settings == {'steps': 3, 'options': {}}


def test_plugin_defaults_are_copies():
    a, b = Dummy(), Dummy()
    a.settings['options']['x'] = 1
    assert b.settings['options'] == {}


def test_plugin_unknown_field():
    with pytest.raises(exceptions.ConfigError):
        Dummy(stepz=1)


def test_plugin_schema():
    schema = Dummy.schema()
    assert schema['properties']['name'] == {'const': 'dummy'}
    assert schema['additionalProperties'] is False
    assert set(schema['properties']) == {'name', 'steps', 'options'}


def test_register_and_lookup(fresh_registry):
    fresh_registry.register('optimizer', 'dummy', Dummy)
    assert fresh_registry.lookup('optimizer', 'dummy') is Dummy
    assert ('optimizer', 'dummy') in fresh_registry
    assert ('loader', 'dummy') not in fresh_registry
    assert fresh_registry.names('optimizer') == ['dummy']


@pytest.mark.parametrize(
    "kind, name, expectation",
    [
        ('optimizer', 'other', does_not_raise()),
        ('loader', 'dummy', does_not_raise()),
        ('optimizer', 'dummy', pytest.raises(exceptions.DuplicateName)),
        ('optimizer', '', pytest.raises(exceptions.ConfigError)),
        ('widget', 'dummy', pytest.raises(exceptions.UnknownPlugin)),
    ])
def test_register_validation(fresh_registry, kind, name, expectation):
    fresh_registry.register('optimizer', 'dummy', Dummy)
    with expectation:
        fresh_registry.register(kind, name, Dummy)


def test_lookup_unknown_names_options(fresh_registry):
    fresh_registry.register('optimizer', 'dummy', Dummy)
    with pytest.raises(exceptions.UnknownPlugin) as excinfo:
        fresh_registry.lookup('optimizer', 'nope')
    assert str(excinfo.value) == "optimizer - 'nope' is not one of dummy."


def test_duplicate_name_is_config_error(fresh_registry):
    fresh_registry.register('optimizer', 'dummy', Dummy)
    with pytest.raises(exceptions.ConfigError):
        fresh_registry.register('optimizer', 'dummy', Dummy)


def test_builtin_plugins_registered():
    expected = {
        'loader': ['acp', 'maxcut'],
        'reduction': [
            'acp-to-mcec',
            'maxcut-to-ising',
            'mcec-to-ising',
            'mcec-to-qubo',
            'qubo-to-ising'
        ],
        'platform': ['statevector'],
        'ansatz': ['ma-qaoa', 'qaoa', 'qaoa-plus', 'xqaoa'],
        'initializer': ['constant', 'perturbed-constant', 'uniform-random'],
        'optimizer': ['cobyla', 'genetic', 'spsa'],
        'result-processor': [
            'angle-pattern',
            'pairing-report',
            'ratio-table',
            'records',
            'size-distribution'
        ]
    }
    for kind, names in expected.items():
        assert set(names) <= set(registry.REGISTRY.names(kind))
    assert plugins.make('ansatz', {'name': 'qaoa', 'depth': 2}).depths() == [2]


PLUGIN_MODULE = """
from vqaopt.registry import Plugin, plugin


@plugin
class Extra(Plugin):
    KIND = "initializer"
    NAME = "test-extra"
"""


def test_load_plugin_modules(tmp_path, monkeypatch):
    (tmp_path / 'vqaopt_test_extra.py').write_text(PLUGIN_MODULE)
    monkeypatch.syspath_prepend(str(tmp_path))
    try:
        registry.load_plugin_modules(['vqaopt_test_extra'])
        assert ('initializer', 'test-extra') in registry.REGISTRY
        # a second import is a no-op, not a duplicate registration
        registry.load_plugin_modules(['vqaopt_test_extra'])
    finally:
        registry.REGISTRY._plugins['initializer'].pop('test-extra', None)
        sys.modules.pop('vqaopt_test_extra', None)


def test_load_plugin_modules_missing():
    with pytest.raises(exceptions.ConfigError):
        registry.load_plugin_modules(['vqaopt_no_such_module'])


def test_plugin_decorator_on_custom_registry(fresh_registry):
    registry.register_plugin('optimizer', 'dummy', Dummy, fresh_registry)
    assert registry.lookup('optimizer', 'dummy', fresh_registry) is Dummy
    with pytest.raises(exceptions.UnknownPlugin):
        registry.lookup('optimizer', 'dummy')
