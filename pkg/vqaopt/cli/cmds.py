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
"""Decorators for Click commands"""
from functools import wraps

import click

from vqaopt import exceptions
from vqaopt.constants import (EXIT_CONFIG_ERROR,
                              EXIT_IO_ERROR,
                              EXIT_SOLVE_ERROR)


class CommandError(click.ClickException):
    """A ClickException carrying the exit code of its error category."""

    def __init__(self, message, exit_code=EXIT_SOLVE_ERROR):
        super().__init__(str(message))
        self.exit_code = exit_code


def translate_exceptions(func):
    """Translate internal exceptions to ClickException.

    Configuration errors exit with 3, input and output errors with 4 and
    everything else raised by the package with 1.

    Parameters:
        func: a Click command function or wrapper around one.

    Returns:
        wrapper function

    Raises:
        CommandError
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            func(*args, **kwargs)
        except exceptions.Aborted as ex:
            raise click.Abort() from ex
        except exceptions.ConfigError as ex:
            raise CommandError(f'Configuration error: {ex}',
                               EXIT_CONFIG_ERROR)
        except (exceptions.ParseError, exceptions.OutputError) as ex:
            raise CommandError(f'I/O error: {ex}', EXIT_IO_ERROR)
        except exceptions.VqaoptError as ex:
            raise CommandError(ex, EXIT_SOLVE_ERROR)

    return wrapper
