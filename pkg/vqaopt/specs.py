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
"""Functionality for matching user input against supported values."""
import logging
from typing import Iterable

from .exceptions import ConfigError

LOGGER = logging.getLogger(__name__)


class SpecificationException(ConfigError):
    """No match was found"""

    def __init__(self, value, supported, field_name):
        self.value = value
        self.supported = list(supported)
        self.field_name = field_name
        self.opts = ', '.join(["'" + s + "'" for s in self.supported])
        super().__init__(str(self))

    def __str__(self):
        return (f'{self.field_name} - \'{self.value}\' is not one of '
                f'{self.opts}.')


def get_match(test_entry: str, spec_entries: Iterable[str],
              field_name: str) -> str:
    """Find and return matching entry regardless of capitalization.

    Raises:
        SpecificationException: If nothing matches.
    """
    spec_entries = list(spec_entries)
    try:
        match = next(e for e in spec_entries
                     if str(e).lower() == str(test_entry).strip().lower())
    except (StopIteration):
        raise SpecificationException(test_entry, spec_entries, field_name)

    return match
