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
"""Plugin base class and registry.

Plugins are classes with a `NAME`, a `KIND` and a JSON-Schema `FIELDS`
object describing their configurable fields. Built-in plugins register
themselves with the default registry when `vqaopt.plugins` is imported.
"""
import copy
import importlib
from importlib import metadata
import logging
from typing import Any, Callable, Dict, Iterable, List, Optional

from typing_extensions import Literal

from .constants import ENTRY_POINT_GROUP
from .exceptions import ConfigError, DuplicateName, UnknownPlugin

LOGGER = logging.getLogger(__name__)

PluginKind = Literal['loader',
                     'platform',
                     'ansatz',
                     'reduction',
                     'initializer',
                     'optimizer',
                     'result-processor']

PLUGIN_KINDS = ('loader',
                'platform',
                'ansatz',
                'reduction',
                'initializer',
                'optimizer',
                'result-processor')


class Plugin:
    """Base class for all plugins.

    Subclasses set `NAME`, `KIND` and `FIELDS`. `FIELDS` maps each field
    key to a JSON-Schema property with a `title` (the user-friendly label)
    and a `default`. The keyword arguments of `__init__` are exactly the
    field keys.
    """
    NAME: str = ''
    KIND: str = ''
    FIELDS: Dict[str, dict] = {}

    def __init__(self, **fields):
        settings = self.defaults()
        unknown = set(fields) - set(settings)
        if unknown:
            raise ConfigError(f'{self.KIND} {self.NAME!r} got unknown '
                              f'fields: {", ".join(sorted(unknown))}')
        settings.update(fields)
        self.settings = settings

    def __repr__(self):
        return f'<{self.KIND} {self.NAME}>'

    @classmethod
    def defaults(cls) -> Dict[str, Any]:
        return {
            key: copy.deepcopy(prop.get('default'))
            for key, prop in cls.FIELDS.items()
        }

    @classmethod
    def schema(cls) -> dict:
        """JSON Schema of a config section for this plugin."""
        properties = {'name': {'const': cls.NAME}}
        properties.update(copy.deepcopy(cls.FIELDS))
        return {
            'type': 'object',
            'properties': properties,
            'required': ['name'],
            'additionalProperties': False
        }


PluginFactory = Callable[..., Any]


class PluginRegistry:
    """Per-kind maps from plugin name to factory."""

    def __init__(self):
        self._plugins: Dict[str, Dict[str, PluginFactory]] = {
            kind: {}
            for kind in PLUGIN_KINDS
        }

    def _kind(self, kind: str) -> Dict[str, PluginFactory]:
        try:
            return self._plugins[kind]
        except KeyError:
            raise UnknownPlugin(f'Unknown plugin kind {kind!r}. Kinds are '
                                f'{", ".join(PLUGIN_KINDS)}.')

    def register(self, kind: str, name: str, factory: PluginFactory):
        """Register a plugin factory.

        Raises:
            vqaopt.exceptions.DuplicateName: If (kind, name) is already
                registered.
        """
        if not name:
            raise ConfigError('Plugin name cannot be empty.')

        plugins = self._kind(kind)
        if name in plugins:
            raise DuplicateName(f'{kind} plugin {name!r} is already '
                                'registered.')
        plugins[name] = factory
        LOGGER.debug(f'Registered {kind} plugin {name}.')

    def lookup(self, kind: str, name: str) -> PluginFactory:
        """Get a registered plugin factory.

        Raises:
            vqaopt.exceptions.UnknownPlugin: If nothing is registered under
                (kind, name).
        """
        plugins = self._kind(kind)
        try:
            return plugins[name]
        except KeyError:
            opts = ', '.join(sorted(plugins)) or 'none'
            raise UnknownPlugin(f'{kind} - {name!r} is not one of {opts}.')

    def names(self, kind: str) -> List[str]:
        return sorted(self._kind(kind))

    def __contains__(self, item) -> bool:
        kind, name = item
        return name in self._plugins.get(kind, {})


REGISTRY = PluginRegistry()


def register_plugin(kind: str,
                    name: str,
                    factory: PluginFactory,
                    registry: Optional[PluginRegistry] = None):
    """Register a factory in the default (or given) registry."""
    (registry or REGISTRY).register(kind, name, factory)


def lookup(kind: str,
           name: str,
           registry: Optional[PluginRegistry] = None) -> PluginFactory:
    return (registry or REGISTRY).lookup(kind, name)


def plugin(cls):
    """Class decorator registering a `Plugin` subclass by its KIND and NAME.
    """
    register_plugin(cls.KIND, cls.NAME, cls)
    return cls


def load_plugin_modules(modules: Iterable[str]):
    """Import modules whose decorators register extra plugins.

    Modules already imported are not imported again, so listing a module in
    several configs does not register its plugins twice.
    """
    for module in modules:
        try:
            importlib.import_module(module)
        except ImportError as e:
            raise ConfigError(f'Could not import plugin module {module!r}: '
                              f'{e}')
        LOGGER.info(f'Loaded plugin module {module}.')


def load_entry_points(group: str = ENTRY_POINT_GROUP):
    """Import every module advertised under the plugin entry-point group."""
    try:
        eps = metadata.entry_points()
        if hasattr(eps, 'select'):
            selected = list(eps.select(group=group))
        else:
            selected = list(eps.get(group, []))  # type: ignore
    except Exception as e:  # pragma: no cover
        LOGGER.warning(f'Could not read entry points: {e}')
        return

    for ep in selected:
        LOGGER.debug(f'Loading plugins from entry point {ep.name}.')
        ep.load()
