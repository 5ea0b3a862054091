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
from typing import Optional


class VqaoptError(Exception):
    """Root for all exceptions thrown by the package"""
    pass


class ConfigError(VqaoptError):
    """Invalid experiment configuration"""
    pass


class PluginError(ConfigError):
    """Errors from the plugin registry"""
    pass


class DuplicateName(PluginError):
    """A plugin with the same kind and name is already registered"""
    pass


class UnknownPlugin(PluginError):
    """No plugin with the given kind and name is registered"""
    pass


class ParseError(VqaoptError):
    """Input file could not be parsed"""

    def __init__(self,
                 message: str,
                 line: Optional[int] = None,
                 field: Optional[str] = None):
        self.message = message
        self.line = line
        self.field = field
        super().__init__(message)

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f'line {self.line}')
        if self.field is not None:
            where.append(f'field {self.field}')
        if where:
            return f'{", ".join(where)}: {self.message}'
        return self.message


class NoPath(VqaoptError):
    """No reduction path connects the requested forms"""
    pass


class EncodingError(VqaoptError):
    """Errors in problem encodings"""
    pass


class InvalidPenalty(EncodingError):
    """Penalty weight is not positive"""
    pass


class BadSpin(EncodingError):
    """Spin value is not -1 or +1"""
    pass


class TooLarge(EncodingError):
    """Instance exceeds the brute-force or simulation cap"""
    pass


class DimensionMismatch(EncodingError):
    """Model and state sizes disagree"""
    pass


class InvalidInstance(EncodingError):
    """Problem data violates an instance invariant"""
    pass


class CircuitError(VqaoptError):
    """Errors in circuit construction or binding"""
    pass


class MissingParameter(CircuitError):
    """A circuit parameter was not assigned a value"""
    pass


class OutOfBounds(CircuitError):
    """A parameter value lies outside its declared bounds"""
    pass


class OptimizerError(VqaoptError):
    """Errors raised by optimizers and initializers"""
    pass


class BudgetZero(OptimizerError):
    """Optimizer was given no evaluation budget"""
    pass


class UnknownStrategy(OptimizerError):
    """Initialization strategy is not registered"""
    pass


class InvalidSchedule(OptimizerError):
    """SPSA gain schedule is outside its valid region"""
    pass


class MetricError(VqaoptError):
    """Errors computing solution-quality metrics"""
    pass


class DegenerateInstance(MetricError):
    """Best and worst objective coincide, ratios are undefined"""
    pass


class OutputError(VqaoptError):
    """Errors writing experiment outputs"""
    pass


class WriteError(OutputError):
    """A result file could not be written"""

    def __init__(self, path, reason: str = ''):
        self.path = path
        self.reason = reason
        super().__init__(f'Could not write {path}. {reason}'.strip())


class Aborted(VqaoptError):
    """The user left the configuration wizard"""
    pass
