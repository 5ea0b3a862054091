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
import json
import math

import pytest

from vqaopt import config, exceptions
from vqaopt.constants import DATA_DIR
from vqaopt.registry import REGISTRY

# one empty answer per question when every default is kept
DEFAULT_ANSWERS = 28


def test_resolve_defaults():
    resolved = config.resolve({})
    assert resolved.loader == {'name': 'maxcut', 'nodes': [3], 'paths': []}
    assert resolved.ansatz == {'name': 'qaoa', 'depth': 1, 'bounds': {}}
    assert resolved.initializer == {'name': 'uniform-random'}
    assert resolved.optimizer['budget'] == 1000
    assert [p['name'] for p in resolved.processors] == [
        'ratio-table', 'records'
    ]
    assert resolved.run['seed'] == 0
    assert resolved.run['brute_force_cap'] == 20
    assert resolved.reductions == {'path': None, 'include': [], 'options': {}}


def test_resolve_keeps_values():
    data = {
        'ansatz': {
            'name': 'xqaoa', 'depth': [1, 2]
        },
        'processors': [{
            'name': 'angle-pattern', 'radius': 0.1
        }],
        'reductions': {
            'options': {
                'mcec-to-qubo': {
                    'penalty': 50
                }
            }
        },
        'run': {
            'restarts': 3
        }
    }
    resolved = config.resolve(data)
    assert resolved.ansatz['strict_parameter_count'] is False
    assert resolved.ansatz['depth'] == [1, 2]
    assert resolved.processors[0]['radius'] == 0.1
    assert resolved.processors[0]['beta_period'] == pytest.approx(math.pi / 2)
    assert resolved.reductions['options'] == {'mcec-to-qubo': {'penalty': 50}}
    assert resolved.run['restarts'] == 3
    assert data['run'] == {'restarts': 3}


@pytest.mark.parametrize(
    "data, message",
    [({
        'optimizer': {
            'name': 'cobyla', 'budget': 0
        }
    }, 'optimizer.budget: 0 is less than the minimum of 1'),
     ({
         'optimizer': {
             'name': 'cobyla', 'speed': 1
         }
     }, "optimizer: Additional properties are not allowed"),
     ({
         'ansatz': {
             'name': 'qaoa', 'depth': 0
         }
     }, 'ansatz.depth: 0 is not valid under any of the given schemas'),
     ({
         'optimizer': {
             'name': 'newton'
         }
     }, "optimizer - 'newton' is not one of cobyla, genetic, spsa"),
     ({
         'processors': [{
             'name': 'records'
         }, {
             'name': 'angle-pattern', 'radius': -1
         }]
     }, 'processors.1.radius: -1 is less than or equal to the minimum of 0'),
     ({
         'processors': [{
             'name': 'records'
         }, {
             'name': 'records'
         }]
     }, 'each processor may appear once'),
     ({
         'run': {
             'seed': -1
         }
     }, 'config.run.seed: -1 is less than the minimum of 0'),
     ({
         'loader': {}
     }, "config.loader: 'name' is a required property"),
     ({
         'extra': 1
     }, 'Additional properties are not allowed'),
     ({
         'reductions': {
             'path': ['mcec-to-qubo', 'teleport']
         }
     }, "reduction - 'teleport' is not one of"),
     ({
         'reductions': {
             'options': {
                 'mcec-to-qubo': {
                     'penalty': 'huge'
                 }
             }
         }
     }, 'reductions.options.mcec-to-qubo.penalty')])
def test_resolve_errors(data, message):
    with pytest.raises(exceptions.ConfigError, match=message):
        config.resolve(data)


def test_validate_is_resolve():
    assert config.validate is config.resolve


@pytest.mark.parametrize("name", ['toy_acp.json', 'maxcut_depth.json'])
def test_bundled_configs_resolve(name):
    resolved = config.resolve(config.load_config(DATA_DIR / name))
    assert resolved.to_dict() == config.resolve(resolved.to_dict()).to_dict()


def test_load_config_errors(tmp_path):
    with pytest.raises(exceptions.ConfigError, match='does not exist'):
        config.load_config(tmp_path / 'missing.json')

    bad = tmp_path / 'bad.json'
    bad.write_text('{\n  "run": \n}')
    with pytest.raises(exceptions.ConfigError, match='line 3'):
        config.load_config(bad)

    listing = tmp_path / 'list.json'
    listing.write_text('[]')
    with pytest.raises(exceptions.ConfigError, match='must be an object'):
        config.load_config(listing)


def test_dump_config(tmp_path):
    path = tmp_path / 'out' / 'experiment.json'
    resolved = config.resolve({})
    config.dump_config(resolved, path)
    assert json.loads(path.read_text()) == resolved.to_dict()


def test_apply_overrides():
    data = {'ansatz': {'name': 'qaoa'}, 'processors': [{'name': 'records'}]}
    updated = config.apply_overrides(data, [
        'ansatz.depth=[1, 2]', ('run.seed', 5), 'processors.0.name=ratio-table'
    ])
    assert updated == {
        'ansatz': {
            'name': 'qaoa', 'depth': [1, 2]
        },
        'processors': [{
            'name': 'ratio-table'
        }],
        'run': {
            'seed': 5
        }
    }
    assert data['ansatz'] == {'name': 'qaoa'}


@pytest.mark.parametrize("override, expectation", [
    ('run.seed=1', does_not_raise()),
    ('processors.5.name=x', pytest.raises(exceptions.ConfigError)),
    ('processors.first=x', pytest.raises(exceptions.ConfigError)),
    ('ansatz.name.inner=x', pytest.raises(exceptions.ConfigError)),
    ('no-equals-sign', pytest.raises(exceptions.ConfigError)),
])
def test_apply_overrides_errors(override, expectation):
    data = {'ansatz': {'name': 'qaoa'}, 'processors': []}
    with expectation:
        config.apply_overrides(data, [override])


def test_overrides_match_file_values(tmp_path):
    base = {
        'ansatz': {
            'name': 'qaoa'
        },
        'optimizer': {
            'name': 'cobyla'
        },
        'run': {
            'seed': 1
        }
    }
    overrides = [('ansatz.depth', [1, 2]), 'run.seed=7',
                 'optimizer.budget=50', 'run.restarts=2']

    path = tmp_path / 'base.json'
    path.write_text(json.dumps(base))
    overridden = config.resolve(
        config.apply_overrides(config.load_config(path), overrides))

    written = {
        'ansatz': {
            'name': 'qaoa', 'depth': [1, 2]
        },
        'optimizer': {
            'name': 'cobyla', 'budget': 50
        },
        'run': {
            'seed': 7, 'restarts': 2
        }
    }
    full = tmp_path / 'full.json'
    full.write_text(json.dumps(written))
    assert overridden.to_dict() == config.resolve(
        config.load_config(full)).to_dict()


def test_describe_fields_covers_every_plugin():
    kinds = list(config.PLUGIN_SECTIONS) + ['reduction', 'result-processor']
    for kind in kinds:
        for name in REGISTRY.names(kind):
            factory = REGISTRY.lookup(kind, name)
            fields = getattr(factory, 'FIELDS', {})
            descriptors = config.describe_fields(kind, name)
            assert [d.key for d in descriptors] == list(fields)
            for d in descriptors:
                assert d.label
                assert d.kind in ('choice', 'integer', 'number', 'boolean',
                                  'list', 'json', 'text')
                assert d.default == fields[d.key].get('default')
                assert d.validate(d.default) is None


def test_describe_fields_details():
    budget, rhobeg = config.describe_fields('optimizer', 'cobyla')[:2]
    assert budget.to_dict() == {
        'key': 'budget',
        'label': 'Max evaluations',
        'kind': 'integer',
        'default': 1000,
        'choices': None,
        'description': '',
        'validation': '>= 1',
        'examples': None
    }
    assert rhobeg.validation == '> 0'
    platform_fields = config.describe_fields('platform', 'statevector')
    assert [d.key for d in platform_fields] == [
        'precision', 'max_shots', 'max_qubits', 'expectation_mode', 'shots'
    ]
    precision = platform_fields[0]
    assert precision.kind == 'choice'
    assert precision.choices == ['double', 'single']


def test_describe_fields_unknown():
    with pytest.raises(exceptions.UnknownPlugin):
        config.describe_fields('optimizer', 'newton')


@pytest.mark.parametrize("kind, name, key, text, expected", [
    ('optimizer', 'cobyla', 'budget', ' 12 ', 12),
    ('optimizer', 'cobyla', 'rhobeg', '0.25', 0.25),
    ('optimizer', 'spsa', 'final_evaluation', 'no', False),
    ('platform', 'statevector', 'precision', 'SINGLE', 'single'),
    ('loader', 'maxcut', 'nodes', '2, 3,4', [2, 3, 4]),
    ('loader', 'maxcut', 'nodes', '[5]', [5]),
    ('loader', 'maxcut', 'paths', 'a.txt,b.txt', ['a.txt', 'b.txt']),
    ('loader', 'acp', 'path', 'null', None),
    ('loader', 'acp', 'path', 'toy.csv', 'toy.csv'),
    ('ansatz', 'qaoa', 'depth', '[1, 2]', [1, 2]),
    ('ansatz', 'qaoa', 'bounds', '{"beta": [0, 1]}', {'beta': [0, 1]}),
    ('reduction', 'mcec-to-qubo', 'penalty', 'auto', 'auto'),
])
def test_field_convert(kind, name, key, text, expected):
    descriptor = {d.key: d for d in config.describe_fields(kind, name)}[key]
    assert descriptor.convert(text) == expected


@pytest.mark.parametrize("kind, name, key, text", [
    ('optimizer', 'cobyla', 'budget', 'many'),
    ('optimizer', 'spsa', 'final_evaluation', 'maybe'),
    ('platform', 'statevector', 'precision', 'quad'),
])
def test_field_convert_errors(kind, name, key, text):
    descriptor = {d.key: d for d in config.describe_fields(kind, name)}[key]
    with pytest.raises((ValueError, exceptions.ConfigError)):
        descriptor.convert(text)


def scripted(lines):
    messages = []
    return config.answers_from_lines(lines, messages.append), messages


def test_wizard_defaults():
    ask, _ = scripted([''] * DEFAULT_ANSWERS)
    data = config.config_wizard(ask, echo=lambda m: None)
    assert data['loader'] == {'name': 'maxcut', 'nodes': [3], 'paths': []}
    assert data['ansatz'] == {'name': 'qaoa', 'depth': 1, 'bounds': {}}
    assert data['initializer'] == {'name': 'uniform-random'}
    assert [p['name'] for p in data['processors']] == ['ratio-table',
                                                       'records']
    assert data['run']['restarts'] == 10
    assert config.resolve(data).to_dict() == config.resolve({}).to_dict()


def test_wizard_reprompts_invalid_answers():
    answers = (
        ['', ''] + ['']  # loader maxcut, two fields
        + [''] * 6  # statevector platform
        + ['XQAOA', '0', '2', '', 'yes']  # ansatz with a bad depth
        + ['constant', '0.5']  # initializer
        + ['newton', 'spsa'] + [''] * 7  # optimizer with a bad name
        + ['records,records', 'records']  # processors
        + [''] * 9)  # run
    ask, _ = scripted(answers)
    echoed = []
    data = config.config_wizard(ask, echo=echoed.append)
    assert data['ansatz'] == {
        'name': 'xqaoa',
        'depth': 2,
        'bounds': {},
        'strict_parameter_count': True
    }
    assert data['initializer'] == {'name': 'constant', 'value': 0.5}
    assert data['optimizer']['name'] == 'spsa'
    assert data['processors'] == [{'name': 'records'}]
    assert any(m.startswith('Invalid value for Circuit depth p')
               for m in echoed)
    assert any("'newton' is not one of" in m for m in echoed)
    assert 'Each result processor may be chosen once.' in echoed


def test_wizard_aborts_when_answers_run_out():
    ask, messages = scripted(['', 'acp'])
    with pytest.raises(exceptions.Aborted):
        config.config_wizard(ask, echo=lambda m: None)
    assert messages[0] == 'loader (acp, maxcut) [maxcut]: '
