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
"""Experiment configuration: schema, defaults, overrides and the wizard.

A config is one JSON document. Plugin sections have the form
`{"name": <plugin>, <field>: <value>, ...}` and are validated against the
JSON Schema the plugin declares for its fields.
"""
import copy
from dataclasses import asdict, dataclass, field
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from jsonschema import Draft7Validator

from . import io, plugins, specs  # noqa: F401
from .constants import BRUTE_FORCE_CAP
from .exceptions import Aborted, ConfigError
from .registry import (REGISTRY,
                       PluginRegistry,
                       load_entry_points,
                       load_plugin_modules)

LOGGER = logging.getLogger(__name__)

PLUGIN_SECTIONS = ('loader', 'platform', 'ansatz', 'initializer', 'optimizer')

DEFAULT_PLUGINS = {
    'loader': 'maxcut',
    'platform': 'statevector',
    'ansatz': 'qaoa',
    'initializer': 'uniform-random',
    'optimizer': 'cobyla'
}

DEFAULT_PROCESSORS = ['ratio-table', 'records']

RUN_FIELDS: Dict[str, dict] = {
    'seed': {
        'title': 'Master seed',
        'type': 'integer',
        'minimum': 0,
        'default': 0
    },
    'restarts': {
        'title': 'Restarts per instance',
        'type': 'integer',
        'minimum': 1,
        'default': 10
    },
    'shots': {
        'title': 'Shots for the final histogram',
        'description': '0 disables sampling.',
        'type': 'integer',
        'minimum': 0,
        'default': 1024
    },
    'top_k': {
        'title': 'Outcomes kept per record',
        'type': 'integer',
        'minimum': 1,
        'default': 8
    },
    'output': {
        'title': 'Output directory',
        'type': 'string',
        'minLength': 1,
        'default': 'results'
    },
    'plugins': {
        'title': 'Extra plugin modules',
        'type': 'array',
        'items': {
            'type': 'string'
        },
        'default': []
    },
    'workers': {
        'title': 'Parallel workers',
        'type': 'integer',
        'minimum': 1,
        'default': 1
    },
    'sampled_metrics': {
        'title': 'Estimate expected ratios from shots',
        'type': 'boolean',
        'default': False
    },
    'brute_force_cap': {
        'title': 'Largest instance with exact optimum',
        'type': 'integer',
        'minimum': 1,
        'maximum': 30,
        'default': BRUTE_FORCE_CAP
    }
}

SECTION_SCHEMA = {
    'type': 'object',
    'properties': {
        'name': {
            'type': 'string', 'minLength': 1
        }
    },
    'required': ['name']
}

REDUCTIONS_FIELDS: Dict[str, dict] = {
    'path': {
        'title': 'Explicit reduction path',
        'type': ['array', 'null'],
        'items': {
            'type': 'string'
        },
        'default': None
    },
    'include': {
        'title': 'Extra reductions',
        'type': 'array',
        'items': {
            'type': 'string'
        },
        'default': []
    },
    'options': {
        'title': 'Reduction fields',
        'type': 'object',
        'additionalProperties': {
            'type': 'object'
        },
        'default': {}
    }
}

CONFIG_SCHEMA = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'type': 'object',
    'properties': {
        'loader': SECTION_SCHEMA,
        'platform': SECTION_SCHEMA,
        'ansatz': SECTION_SCHEMA,
        'initializer': SECTION_SCHEMA,
        'optimizer': SECTION_SCHEMA,
        'processors': {
            'type': 'array', 'items': SECTION_SCHEMA
        },
        'reductions': {
            'type': 'object',
            'properties': REDUCTIONS_FIELDS,
            'additionalProperties': False
        },
        'run': {
            'type': 'object',
            'properties': RUN_FIELDS,
            'additionalProperties': False
        }
    },
    'additionalProperties': False
}


@dataclass
class ExperimentConfig:
    """A fully resolved experiment configuration."""
    loader: dict
    platform: dict
    ansatz: dict
    initializer: dict
    optimizer: dict
    processors: List[dict] = field(default_factory=list)
    reductions: dict = field(default_factory=dict)
    run: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return copy.deepcopy(asdict(self))


@dataclass(frozen=True)
class FieldDescriptor:
    """What a user needs to know to fill one plugin field."""
    key: str
    label: str
    kind: str
    default: Any = None
    choices: Optional[List[Any]] = None
    description: str = ''
    validation: str = ''
    examples: Optional[List[Any]] = None
    schema: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop('schema')
        return data

    def validate(self, value: Any) -> Optional[str]:
        """Error message for an invalid value, None when valid."""
        errors = sorted(Draft7Validator(self.schema).iter_errors(value),
                        key=str)
        return errors[0].message if errors else None

    def convert(self, text: str) -> Any:
        """Parse user text into a value of this field's kind.

        Raises:
            ValueError: If the text cannot be converted.
        """
        text = text.strip()
        nullable = 'null' in _types(self.schema)
        if nullable and text.lower() in ('null', 'none'):
            return None
        if self.kind == 'choice':
            return specs.get_match(text, [str(c) for c in self.choices or []],
                                   self.key)
        if self.kind == 'integer':
            return int(text)
        if self.kind == 'number':
            return float(text)
        if self.kind == 'boolean':
            lowered = text.lower()
            if lowered in ('y', 'yes', 'true', '1'):
                return True
            if lowered in ('n', 'no', 'false', '0'):
                return False
            raise ValueError(f'{text!r} is not yes or no')
        if self.kind == 'list':
            if text.startswith('['):
                return json.loads(text)
            items = [part.strip() for part in text.split(',') if part.strip()]
            item_types = _types(self.schema.get('items', {}))
            if 'integer' in item_types:
                return [int(v) for v in items]
            if 'number' in item_types:
                return [float(v) for v in items]
            return items
        if self.kind == 'json':
            try:
                return json.loads(text)
            except json.JSONDecodeError:
                return text
        return text


def _types(schema: dict) -> List[str]:
    kind = schema.get('type', [])
    return [kind] if isinstance(kind, str) else list(kind)


def _field_kind(schema: dict) -> str:
    if 'enum' in schema:
        return 'choice'
    types = [t for t in _types(schema) if t != 'null']
    if len(types) != 1:
        return 'json'
    return {
        'boolean': 'boolean',
        'integer': 'integer',
        'number': 'number',
        'array': 'list',
        'object': 'json',
        'string': 'text'
    }[types[0]]


def _validation_text(schema: dict) -> str:
    parts = []
    for key, text in (('minimum', '>='), ('exclusiveMinimum', '>'),
                      ('maximum', '<='), ('exclusiveMaximum', '<')):
        if key in schema:
            parts.append(f'{text} {schema[key]}')
    if 'enum' in schema:
        parts.append('one of ' + ', '.join(str(v) for v in schema['enum']))
    if 'anyOf' in schema:
        parts.append('any of ' + ' | '.join(
            json.dumps(s, sort_keys=True) for s in schema['anyOf']))
    return ', '.join(parts)


def describe_schema(properties: Dict[str, dict]) -> List[FieldDescriptor]:
    return [
        FieldDescriptor(key=key,
                        label=prop.get('title', key),
                        kind=_field_kind(prop),
                        default=copy.deepcopy(prop.get('default')),
                        choices=prop.get('enum'),
                        description=prop.get('description', ''),
                        validation=_validation_text(prop),
                        examples=prop.get('examples'),
                        schema=prop) for key, prop in properties.items()
    ]


def describe_fields(kind: str,
                    name: str,
                    registry: Optional[PluginRegistry] = None
                    ) -> List[FieldDescriptor]:
    """Descriptors of every configurable field of a plugin, in order.

    Raises:
        vqaopt.exceptions.UnknownPlugin: If the plugin is not registered.
    """
    factory = (registry or REGISTRY).lookup(kind, name)
    return describe_schema(getattr(factory, 'FIELDS', {}))


def default_config() -> dict:
    data: Dict[str, Any] = {
        kind: {
            'name': name
        }
        for kind, name in DEFAULT_PLUGINS.items()
    }
    data['processors'] = [{'name': n} for n in DEFAULT_PROCESSORS]
    return data


def load_config(path: Union[str, Path]) -> dict:
    """Read a config file.

    Raises:
        vqaopt.exceptions.ConfigError: If the file is missing or not JSON.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except FileNotFoundError:
        raise ConfigError(f'Config file {path} does not exist.')
    except OSError as e:
        raise ConfigError(f'Could not read config file {path}: {e}')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f'{path}: line {e.lineno}: {e.msg}')
    if not isinstance(data, dict):
        raise ConfigError(f'{path}: the top level must be an object.')
    return data


def dump_config(config: Union[ExperimentConfig, dict],
                path: Union[str, Path]):
    data = config.to_dict() if isinstance(config, ExperimentConfig) else config
    io.write_json(path, data)


def parse_override(text: str) -> tuple:
    """Split 'a.b=value'; the value is JSON when it parses, else a string.

    Raises:
        vqaopt.exceptions.ConfigError: If there is no '=' or no key.
    """
    key, sep, raw = text.partition('=')
    if not sep or not key.strip():
        raise ConfigError(f'Override {text!r} is not of the form key=value.')
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def apply_overrides(data: dict, overrides: Sequence[Any]) -> dict:
    """Copy of `data` with dotted-key overrides applied.

    Overrides are 'key.sub=value' strings or (key, value) pairs. Integer
    path components index into lists.

    Raises:
        vqaopt.exceptions.ConfigError: If a path cannot be followed.
    """
    data = copy.deepcopy(data)
    for override in overrides:
        key, value = (parse_override(override)
                      if isinstance(override, str) else override)
        parts = key.split('.')
        node: Any = data
        for i, part in enumerate(parts):
            last = i == len(parts) - 1
            if isinstance(node, list):
                try:
                    index = int(part)
                    if last:
                        node[index] = value
                    else:
                        node = node[index]
                except (ValueError, IndexError):
                    raise ConfigError(f'Override {key}: {part!r} is not an '
                                      'index of the list.')
            elif isinstance(node, dict):
                if last:
                    node[part] = value
                else:
                    node = node.setdefault(part, {})
            else:
                raise ConfigError(f'Override {key}: cannot descend into '
                                  f'{".".join(parts[:i])}.')
        LOGGER.debug(f'Override {key} = {value!r}')
    return data


def _schema_error(validator: Draft7Validator, data: Any,
                  where: str) -> Optional[str]:
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.path))
    if not errors:
        return None
    err = errors[0]
    path = '.'.join([where] + [str(p) for p in err.absolute_path])
    return f'{path}: {err.message}'


def _resolve_section(kind: str, section: dict, where: str,
                     registry: PluginRegistry) -> dict:
    factory = registry.lookup(kind, section['name'])
    error = _schema_error(Draft7Validator(factory.schema()), section, where)
    if error:
        raise ConfigError(error)
    resolved = {'name': section['name']}
    resolved.update(factory.defaults())
    resolved.update({k: v for k, v in section.items() if k != 'name'})
    return resolved


_ENTRY_POINTS_LOADED = False


def activate_plugins(modules: Sequence[str]):
    """Import extra plugin modules and, once, the entry-point group."""
    global _ENTRY_POINTS_LOADED
    if not _ENTRY_POINTS_LOADED:
        _ENTRY_POINTS_LOADED = True
        load_entry_points()
    load_plugin_modules(modules)


def resolve(data: dict,
            registry: Optional[PluginRegistry] = None) -> ExperimentConfig:
    """Validate a config and fill in every default.

    Raises:
        vqaopt.exceptions.ConfigError: On the first invalid entry, naming
            its dotted path.
    """
    registry = registry or REGISTRY
    error = _schema_error(Draft7Validator(CONFIG_SCHEMA), data, 'config')
    if error:
        raise ConfigError(error)

    merged = default_config()
    merged.update(copy.deepcopy(data))

    run = {k: copy.deepcopy(p['default']) for k, p in RUN_FIELDS.items()}
    run.update(merged.get('run', {}))
    activate_plugins(run['plugins'])

    sections = {
        kind: _resolve_section(kind, merged[kind], kind, registry)
        for kind in PLUGIN_SECTIONS
    }
    processors = [
        _resolve_section('result-processor', section, f'processors.{i}',
                         registry)
        for i, section in enumerate(merged['processors'])
    ]
    names = [p['name'] for p in processors]
    if len(set(names)) != len(names):
        raise ConfigError('processors: each processor may appear once.')

    reductions = {
        k: copy.deepcopy(p['default'])
        for k, p in REDUCTIONS_FIELDS.items()
    }
    reductions.update(merged.get('reductions', {}))
    for name in (reductions['path'] or []) + reductions['include']:
        registry.lookup('reduction', name)
    options = {}
    for name, fields in sorted(reductions['options'].items()):
        section = dict(fields, name=name)
        resolved = _resolve_section('reduction', section,
                                    f'reductions.options.{name}', registry)
        resolved.pop('name')
        options[name] = resolved
    reductions['options'] = options

    return ExperimentConfig(processors=processors,
                            reductions=reductions,
                            run=run,
                            **sections)


validate = resolve


Ask = Callable[[str, str], str]


def _default_text(value: Any) -> str:
    if value is None:
        return 'null'
    if isinstance(value, str):
        return value
    return json.dumps(value)


def _ask_field(ask: Ask, echo: Callable[[str], None],
               descriptor: FieldDescriptor) -> Any:
    while True:
        raw = ask(descriptor.label, _default_text(descriptor.default))
        if raw.strip() == '':
            return copy.deepcopy(descriptor.default)
        try:
            value = descriptor.convert(raw)
        except (ValueError, ConfigError) as e:
            echo(f'Invalid value for {descriptor.label}: {e}')
            continue
        error = descriptor.validate(value)
        if error:
            echo(f'Invalid value for {descriptor.label}: {error}')
            continue
        return value


def _ask_choice(ask: Ask, echo: Callable[[str], None], label: str,
                choices: List[str], default: str) -> str:
    while True:
        raw = ask(f'{label} ({", ".join(choices)})', default)
        if raw.strip() == '':
            return default
        try:
            return specs.get_match(raw, choices, label)
        except specs.SpecificationException as e:
            echo(str(e))


def _ask_plugin(ask: Ask, echo: Callable[[str], None], kind: str,
                name: str, registry: PluginRegistry) -> dict:
    section = {'name': name}
    for descriptor in describe_fields(kind, name, registry):
        section[descriptor.key] = _ask_field(ask, echo, descriptor)
    return section


def config_wizard(ask: Ask,
                  echo: Callable[[str], None] = LOGGER.info,
                  registry: Optional[PluginRegistry] = None) -> dict:
    """Build a config by asking for each plugin and field in turn.

    `ask(label, default)` returns the user's answer, with an empty string
    meaning the default, and raises `Aborted` when the user quits. The
    result always passes `resolve`.

    Raises:
        vqaopt.exceptions.Aborted: If the session ends early.
    """
    registry = registry or REGISTRY
    data: Dict[str, Any] = {}
    for kind in PLUGIN_SECTIONS:
        name = _ask_choice(ask, echo, kind, registry.names(kind),
                           DEFAULT_PLUGINS[kind])
        data[kind] = _ask_plugin(ask, echo, kind, name, registry)

    available = registry.names('result-processor')
    while True:
        raw = ask(f'result processors ({", ".join(available)})',
                  ','.join(DEFAULT_PROCESSORS))
        chosen = [p.strip() for p in (raw or ','.join(DEFAULT_PROCESSORS)
                                      ).split(',') if p.strip()]
        try:
            names = [
                specs.get_match(p, available, 'result processor')
                for p in chosen
            ]
        except specs.SpecificationException as e:
            echo(str(e))
            continue
        if len(set(names)) != len(names):
            echo('Each result processor may be chosen once.')
            continue
        break
    data['processors'] = [
        _ask_plugin(ask, echo, 'result-processor', n, registry)
        for n in names
    ]

    data['run'] = {
        d.key: _ask_field(ask, echo, d)
        for d in describe_schema(RUN_FIELDS)
    }
    resolve(data, registry)
    return data


def answers_from_lines(lines: Sequence[str],
                       echo: Callable[[str], None] = LOGGER.info) -> Ask:
    """An `ask` callable replaying scripted answers, one per line."""
    remaining = list(lines)

    def ask(label: str, default: str) -> str:
        if not remaining:
            raise Aborted('Answer file ended before the wizard finished.')
        answer = remaining.pop(0).rstrip('\r\n')
        echo(f'{label} [{default}]: {answer}')
        return answer

    return ask
