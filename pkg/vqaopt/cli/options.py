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
"""CLI options"""
import click

from . import types

overrides = click.option(
    '--set',
    'overrides',
    type=types.Override(),
    multiple=True,
    help="""Override a config entry, e.g. --set ansatz.depth=2. Values are
        read as JSON when they parse, otherwise as text. May be
        repeated.""")  # type: ignore

pretty = click.option('--pretty', is_flag=True,
                      help='Format JSON output.')  # type: ignore
