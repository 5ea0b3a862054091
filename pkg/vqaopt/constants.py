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
"""Constants used across the code base"""
import os
from pathlib import Path

# NOTE: entries are given in alphabetical order

BRUTE_FORCE_CAP = 20

DATA_DIR = Path(os.path.dirname(__file__)) / 'data'

ENTRY_POINT_GROUP = 'vqaopt.plugins'

ENV_OUTPUT_DIR = 'VQAOPT_OUTPUT_DIR'

EXIT_CONFIG_ERROR = 3

EXIT_IO_ERROR = 4

EXIT_SOLVE_ERROR = 1

MAX_QUBITS = 22

TIE_TOLERANCE = 1e-12
