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
"""Built-in plugins.

Importing this module registers every built-in loader, reduction, platform,
ansatz, initializer and optimizer with the default registry. Result
processors live in `vqaopt.processors` and are registered from there.
"""
import logging
from typing import Any, Callable, List, Optional, Sequence

import numpy as np

from . import acp, ansatze, encodings, graphs, optimizers
from .constants import DATA_DIR, MAX_QUBITS
from .encodings import IsingModel
from .problem import ProblemInstance, ReductionEdge
from .registry import Plugin, lookup, plugin
from .simulator import StatevectorPlatform

LOGGER = logging.getLogger(__name__)

TOY_SCHEDULE = DATA_DIR / 'toy_schedule.csv'

POSITIVE_INTEGER = {'type': 'integer', 'minimum': 1}
PROBABILITY = {'type': 'number', 'minimum': 0, 'maximum': 1}


class Loader(Plugin):
    KIND = 'loader'

    def load(self) -> List[ProblemInstance]:
        raise NotImplementedError


@plugin
class AcpLoader(Loader):
    """Crew pairing schedule from a file or the seeded generator."""
    NAME = 'acp'
    FIELDS = {
        'path': {
            'title': 'Schedule file (.csv or .json)',
            'description': 'The bundled six-leg toy schedule when empty.',
            'type': ['string', 'null'],
            'default': None,
            'examples': ['schedule.csv']
        },
        'seed': {
            'title': 'Generator seed',
            'description': 'Generate a random schedule instead of reading '
            'a file.',
            'type': ['integer', 'null'],
            'default': None
        },
        'home_bases': {
            'title': 'Home bases',
            'description': 'Overrides the bases declared in the schedule.',
            'type': 'array',
            'items': {
                'type': 'string'
            },
            'default': [],
            'examples': [['A', 'B']]
        },
        'rules': {
            'title': 'Duty and pairing rules',
            'type': 'object',
            'properties': {
                'max_flights': POSITIVE_INTEGER,
                'min_connect': {
                    'type': 'number', 'exclusiveMinimum': 0
                },
                'max_duty_duration': {
                    'type': 'number', 'exclusiveMinimum': 0
                },
                'max_duties': POSITIVE_INTEGER,
                'min_rest': {
                    'type': 'number', 'exclusiveMinimum': 0
                },
                'max_pairing_duration': {
                    'type': 'number', 'exclusiveMinimum': 0
                },
                'max_work_time': {
                    'type': 'number', 'exclusiveMinimum': 0
                }
            },
            'additionalProperties': False,
            'default': {}
        },
        'cost': {
            'title': 'Cost parameters',
            'type': 'object',
            'properties': {
                'night_penalty': {
                    'type': 'number', 'minimum': 0
                },
                'offhour_penalty': {
                    'type': 'number', 'minimum': 0
                }
            },
            'additionalProperties': False,
            'default': {}
        },
        'generator': {
            'title': 'Generator sizes',
            'type': 'object',
            'properties': {
                'bases': POSITIVE_INTEGER,
                'outstations': POSITIVE_INTEGER,
                'days': POSITIVE_INTEGER,
                'trips_per_day': POSITIVE_INTEGER,
                'overnight_probability': PROBABILITY
            },
            'additionalProperties': False,
            'default': {}
        }
    }

    def load(self) -> List[ProblemInstance]:
        s = self.settings
        rules = acp.RuleConfig.from_dict(s['rules'])
        cost = acp.CostModel.from_dict(s['cost'])
        bases = s['home_bases'] or None
        if s['seed'] is not None:
            source: Any = int(s['seed'])
        else:
            source = s['path'] or TOY_SCHEDULE
        return [
            acp.load_acp_instance(source, rules, cost, bases, **s['generator'])
        ]


@plugin
class MaxCutLoader(Loader):
    """Edge-list files and/or every connected graph on some node counts."""
    NAME = 'maxcut'
    FIELDS = {
        'nodes': {
            'title': 'Node counts to enumerate',
            'type': 'array',
            'items': POSITIVE_INTEGER,
            'default': [3],
            'examples': [[2, 3, 4, 5, 6]]
        },
        'paths': {
            'title': 'Edge-list files',
            'type': 'array',
            'items': {
                'type': 'string'
            },
            'default': []
        }
    }

    def load(self) -> List[ProblemInstance]:
        return graphs.load_maxcut_instances(self.settings['nodes'],
                                            self.settings['paths'])


PENALTY_FIELD = {
    'title': 'Penalty weight D',
    'description': '"auto" uses 1 + total subset cost.',
    'anyOf': [{
        'type': 'number', 'exclusiveMinimum': 0
    }, {
        'const': 'auto'
    }],
    'default': 'auto'
}


class Reduction(Plugin):
    KIND = 'reduction'
    SOURCE = ''
    TARGET = ''
    DEFAULT = True

    def transform(self, payload: Any) -> Any:
        raise NotImplementedError

    def edge(self) -> ReductionEdge:
        return ReductionEdge(self.SOURCE, self.TARGET, self.transform,
                             self.NAME)


@plugin
class AcpToMcec(Reduction):
    NAME = 'acp-to-mcec'
    SOURCE = 'acp'
    TARGET = 'mcec'

    def transform(self, payload):
        return acp.acp_to_mcec(payload)


@plugin
class McecToQubo(Reduction):
    NAME = 'mcec-to-qubo'
    SOURCE = 'mcec'
    TARGET = 'qubo'
    FIELDS = {'penalty': PENALTY_FIELD}

    def transform(self, payload):
        return encodings.mcec_to_qubo(payload, self.settings['penalty'])


@plugin
class QuboToIsing(Reduction):
    NAME = 'qubo-to-ising'
    SOURCE = 'qubo'
    TARGET = 'ising'

    def transform(self, payload):
        return encodings.qubo_to_ising(payload)


@plugin
class McecToIsing(Reduction):
    """Direct MCEC to Ising coefficients. Not part of the default graph."""
    NAME = 'mcec-to-ising'
    SOURCE = 'mcec'
    TARGET = 'ising'
    DEFAULT = False
    FIELDS = {'penalty': PENALTY_FIELD}

    def transform(self, payload):
        return encodings.mcec_to_ising_direct(payload,
                                              self.settings['penalty'])


@plugin
class MaxCutToIsing(Reduction):
    NAME = 'maxcut-to-ising'
    SOURCE = 'maxcut'
    TARGET = 'ising'

    def transform(self, payload):
        return encodings.maxcut_to_ising(payload)


@plugin
class StatevectorPlatformPlugin(Plugin):
    """Exact local statevector simulator."""
    KIND = 'platform'
    NAME = 'statevector'
    FIELDS = {
        'precision': {
            'title': 'Precision',
            'enum': ['double', 'single'],
            'default': 'double'
        },
        'max_shots': {
            'title': 'Max shots',
            'type': 'integer',
            'minimum': 1,
            'default': 1000000
        },
        'max_qubits': {
            'title': 'Max qubits',
            'type': 'integer',
            'minimum': 1,
            'maximum': 30,
            'default': MAX_QUBITS
        },
        'expectation_mode': {
            'title': 'Expectation value',
            'description': 'exact uses the statevector, sampled estimates '
            'from shots.',
            'enum': ['exact', 'sampled'],
            'default': 'exact'
        },
        'shots': {
            'title': 'Shots per sampled expectation',
            'type': 'integer',
            'minimum': 1,
            'default': 1024
        }
    }

    def create(self) -> StatevectorPlatform:
        s = self.settings
        return StatevectorPlatform(max_qubits=s['max_qubits'],
                                   max_shots=s['max_shots'],
                                   precision=s['precision'],
                                   expectation_mode=s['expectation_mode'],
                                   shots=s['shots'])


DEPTH_FIELD = {
    'title': 'Circuit depth p',
    'description': 'A list solves every instance once per depth.',
    'anyOf': [POSITIVE_INTEGER, {
        'type': 'array', 'items': POSITIVE_INTEGER, 'minItems': 1
    }],
    'default': 1,
    'examples': [1, [1, 2, 3]]
}

BOUNDS_FIELD = {
    'title': 'Parameter bounds',
    'description': 'Parameter name to [lower, upper]; null is unbounded.',
    'type': 'object',
    'additionalProperties': {
        'type': 'array',
        'items': {
            'type': ['number', 'null']
        },
        'minItems': 2,
        'maxItems': 2
    },
    'default': {},
    'examples': [{
        'beta': [0, 3.14159]
    }]
}

STRICT_FIELD = {
    'title': 'Optimize inert parameters',
    'description': 'Keep every slot of the published parameter table.',
    'type': 'boolean',
    'default': False
}


class Ansatz(Plugin):
    KIND = 'ansatz'
    FORM = 'ising'
    FIELDS = {'depth': DEPTH_FIELD, 'bounds': BOUNDS_FIELD}

    def depths(self) -> List[int]:
        depth = self.settings['depth']
        return [depth] if isinstance(depth, int) else list(depth)

    def build(self, model: IsingModel, depth: int) -> ansatze.AnsatzSpec:
        return ansatze.build_ansatz(
            self.NAME,
            model,
            depth,
            self.settings['bounds'],
            self.settings.get('strict_parameter_count', False))


@plugin
class Qaoa(Ansatz):
    NAME = 'qaoa'


@plugin
class MaQaoa(Ansatz):
    NAME = 'ma-qaoa'
    FIELDS = dict(Ansatz.FIELDS, strict_parameter_count=STRICT_FIELD)


@plugin
class QaoaPlus(Ansatz):
    NAME = 'qaoa-plus'
    FIELDS = dict(Ansatz.FIELDS, strict_parameter_count=STRICT_FIELD)


@plugin
class Xqaoa(Ansatz):
    NAME = 'xqaoa'
    FIELDS = dict(Ansatz.FIELDS, strict_parameter_count=STRICT_FIELD)


class Initializer(Plugin):
    KIND = 'initializer'

    def initial(self, bounds: optimizers.Bounds, seed: int) -> np.ndarray:
        return optimizers.initialize(self.NAME, bounds, seed,
                                     **self.settings)


CONSTANT_FIELD = {
    'title': 'Constant value',
    'description': 'Midpoint of each parameter range when empty.',
    'type': ['number', 'null'],
    'default': None
}


@plugin
class UniformRandom(Initializer):
    NAME = 'uniform-random'


@plugin
class Constant(Initializer):
    NAME = 'constant'
    FIELDS = {'value': CONSTANT_FIELD}


@plugin
class PerturbedConstant(Initializer):
    NAME = 'perturbed-constant'
    FIELDS = {
        'value': CONSTANT_FIELD,
        'width': {
            'title': 'Noise half-width',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 0.1
        }
    }


class Optimizer(Plugin):
    KIND = 'optimizer'

    def optimize(self, objective: optimizers.ObjectiveHandle,
                 x0: Sequence[float],
                 seed: Optional[int]) -> optimizers.OptimizationResult:
        raise NotImplementedError


@plugin
class Cobyla(Optimizer):
    """Derivative-free local descent by linear approximation."""
    NAME = 'cobyla'
    FIELDS = {
        'budget': {
            'title': 'Max evaluations',
            'type': 'integer',
            'minimum': 1,
            'default': 1000
        },
        'rhobeg': {
            'title': 'Initial trust-region radius',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 0.5
        },
        'rhoend': {
            'title': 'Final trust-region radius',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 1e-6
        },
        'stagnation_tol': {
            'title': 'Stagnation tolerance',
            'type': 'number',
            'minimum': 0,
            'default': 1e-8
        }
    }

    def optimize(self, objective, x0, seed):
        return optimizers.optimize_local(objective, x0, **self.settings)


@plugin
class Spsa(Optimizer):
    """Simultaneous perturbation stochastic approximation."""
    NAME = 'spsa'
    FIELDS = {
        'iterations': {
            'title': 'Iterations',
            'type': 'integer',
            'minimum': 1,
            'default': 100
        },
        'a': {
            'title': 'Step scale a',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 0.2
        },
        'c': {
            'title': 'Perturbation scale c',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 0.1
        },
        'A': {
            'title': 'Stability offset A',
            'type': 'number',
            'minimum': 0,
            'default': 10.0
        },
        'alpha': {
            'title': 'Step decay exponent',
            'type': 'number',
            'exclusiveMinimum': 0.5,
            'maximum': 1,
            'default': 0.602
        },
        'gamma': {
            'title': 'Perturbation decay exponent',
            'type': 'number',
            'exclusiveMinimum': 0,
            'maximum': 0.5,
            'default': 0.101
        },
        'final_evaluation': {
            'title': 'Evaluate the final iterate',
            'type': 'boolean',
            'default': True
        }
    }

    def optimize(self, objective, x0, seed):
        s = self.settings
        schedule = optimizers.SpsaSchedule(s['a'],
                                           s['c'],
                                           s['A'],
                                           s['alpha'],
                                           s['gamma'])
        return optimizers.optimize_spsa(objective,
                                        x0,
                                        schedule,
                                        s['iterations'],
                                        seed,
                                        s['final_evaluation'])


@plugin
class Genetic(Optimizer):
    """Genetic algorithm with tournament selection and elitism."""
    NAME = 'genetic'
    FIELDS = {
        'population_size': {
            'title': 'Population size',
            'type': 'integer',
            'minimum': 2,
            'default': 20
        },
        'generations': {
            'title': 'Generations',
            'type': 'integer',
            'minimum': 0,
            'default': 50
        },
        'tournament_size': {
            'title': 'Tournament size',
            'type': 'integer',
            'minimum': 1,
            'default': 3
        },
        'crossover_rate': dict(PROBABILITY,
                               title='Crossover rate',
                               default=0.9),
        'mutation_rate': {
            'title': 'Per-gene mutation rate',
            'description': '1 / dimension when empty.',
            'type': ['number', 'null'],
            'minimum': 0,
            'maximum': 1,
            'default': None
        },
        'sigma': {
            'title': 'Mutation width (fraction of range)',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 0.05
        },
        'elitism': {
            'title': 'Elite chromosomes',
            'type': 'integer',
            'minimum': 0,
            'default': 1
        }
    }

    def optimize(self, objective, x0, seed):
        return optimizers.optimize_genetic(objective,
                                           seed=seed,
                                           initial=x0,
                                           **self.settings)


def make(kind: str, section: dict, registry=None) -> Plugin:
    """Instantiate the plugin a config section names."""
    fields = dict(section)
    name = fields.pop('name')
    factory: Callable[..., Plugin] = lookup(kind, name, registry)
    return factory(**fields)


# result processors register on import
from . import processors  # noqa: E402,F401
