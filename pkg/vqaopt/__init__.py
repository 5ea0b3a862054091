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
from . import acp, ansatze, encodings, graphs, optimizers, reporting, simulator
from .__version__ import __version__  # NOQA
from .config import ExperimentConfig, config_wizard, describe_fields, resolve
from .pipeline import (Experiment,
                       SolveRecord,
                       process_results,
                       run_experiment,
                       write_experiment)
from .problem import ProblemInstance, convert, find_reduction_path

__all__ = [
    'acp',
    'ansatze',
    'config_wizard',
    'convert',
    'describe_fields',
    'encodings',
    'Experiment',
    'ExperimentConfig',
    'find_reduction_path',
    'graphs',
    'optimizers',
    'ProblemInstance',
    'process_results',
    'reporting',
    'resolve',
    'run_experiment',
    'simulator',
    'SolveRecord',
    'write_experiment'
]
