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
"""Functionality for reporting progress."""
import logging
from typing import Optional

from tqdm.asyncio import tqdm

LOGGER = logging.getLogger(__name__)


class ProgressBar:
    """Abstract base class for progress bar reporters."""

    def __init__(self, disable: bool = False):
        self.bar = None
        self.disable = disable

    def __str__(self):
        return str(self.bar)

    def __enter__(self):
        self.open_bar()
        return self

    def __exit__(self, *args):
        self.bar.close()

    def open_bar(self):
        """Initialize and start the progress bar."""
        raise NotImplementedError


class ExperimentBar(ProgressBar):
    """Bar reporter of finished optimization runs.

    Example:
        ```python
        from vqaopt import reporting

        with reporting.ExperimentBar(total=30) as bar:
            bar.update(problem='maxcut-n3-0000')
            ...
        ```
    """

    def __init__(self,
                 total: int,
                 desc: str = 'solving',
                 disable: bool = False):
        self.total = total
        self.desc = desc
        self.problem = ''
        super().__init__(disable=disable)

    def open_bar(self):
        """Initialize and start the progress bar."""
        self.bar = tqdm(total=self.total,
                        desc=self.desc,
                        unit='run',
                        disable=self.disable)

    def update(self, n: int = 1, problem: Optional[str] = None):
        if self.bar is None:
            return
        if problem:
            self.problem = problem
            self.bar.set_postfix_str(problem, refresh=False)
        self.bar.update(n)
