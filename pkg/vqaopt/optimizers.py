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
"""Classical optimizers for variational parameters.

All optimizers minimize an `ObjectiveHandle`, which counts evaluations and
refuses points outside the declared bounds. Unbounded dimensions are
sampled from [-pi, pi) wherever a finite range is needed.
"""
from dataclasses import dataclass, field
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize

from .exceptions import (BudgetZero,
                         InvalidSchedule,
                         OptimizerError,
                         OutOfBounds,
                         UnknownStrategy)

LOGGER = logging.getLogger(__name__)

Bounds = Sequence[Tuple[Optional[float], Optional[float]]]

DEFAULT_RANGE = (-np.pi, np.pi)

INITIALIZERS = ('uniform-random', 'constant', 'perturbed-constant')


class ObjectiveHandle:
    """Black-box objective with bounds and an evaluation counter.

    Every call is recorded in `trace` as (evaluation number, value).
    """

    def __init__(self,
                 fn: Callable[[np.ndarray], float],
                 bounds: Bounds,
                 tolerance: float = 1e-12):
        self.fn = fn
        self.bounds = [tuple(b) for b in bounds]
        self.tolerance = tolerance
        self.evaluations = 0
        self.trace: List[Tuple[int, float]] = []
        self.best_x: Optional[np.ndarray] = None
        self.best_value = np.inf

    def __repr__(self):
        return (f'<ObjectiveHandle dim={self.dimension} '
                f'evaluations={self.evaluations}>')

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    def __call__(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        for k, (v, (lo, hi)) in enumerate(zip(x, self.bounds)):
            if ((lo is not None and v < lo - self.tolerance)
                    or (hi is not None and v > hi + self.tolerance)):
                raise OutOfBounds(f'Parameter {k} = {v} is outside '
                                  f'[{lo}, {hi}).')
        value = float(self.fn(x))
        self.evaluations += 1
        self.trace.append((self.evaluations, value))
        if value < self.best_value:
            self.best_value = value
            self.best_x = x.copy()
        return value

    def clip(self, x: Sequence[float]) -> np.ndarray:
        lower, upper = _limits(self.bounds, finite=False)
        return np.clip(np.asarray(x, dtype=float), lower, _below(upper))


@dataclass
class OptimizationResult:
    x: np.ndarray
    value: float
    evaluations: int
    trace: List[Tuple[int, float]] = field(default_factory=list)
    reason: str = ''

    def __repr__(self):
        return (f'<OptimizationResult value={self.value:.6g} '
                f'evaluations={self.evaluations} reason={self.reason}>')

    def to_dict(self) -> dict:
        return {
            'x': [float(v) for v in self.x],
            'value': self.value,
            'evaluations': self.evaluations,
            'reason': self.reason
        }


def _limits(bounds: Bounds, finite: bool = True):
    """Lower and upper arrays; None becomes +-pi if finite else +-inf."""
    lower = np.array([
        lo if lo is not None else
        (DEFAULT_RANGE[0] if finite else -np.inf) for lo, _ in bounds
    ], dtype=float)
    upper = np.array([
        hi if hi is not None else
        (DEFAULT_RANGE[1] if finite else np.inf) for _, hi in bounds
    ], dtype=float)
    return lower, upper


def _below(upper: np.ndarray) -> np.ndarray:
    """Largest values strictly below each upper bound."""
    return np.nextafter(upper, -np.inf)


def _result(objective: ObjectiveHandle, reason: str) -> OptimizationResult:
    return OptimizationResult(np.asarray(objective.best_x),
                              objective.best_value,
                              objective.evaluations,
                              list(objective.trace),
                              reason)


def initialize(strategy: str,
               bounds: Bounds,
               seed: Optional[int] = None,
               value: Optional[float] = None,
               width: float = 0.1) -> np.ndarray:
    """Initial parameter vector.

    Strategies:
        uniform-random: uniform within bounds.
        constant: `value` everywhere, or the midpoint of each range.
        perturbed-constant: constant plus uniform noise in [-width, width],
            clipped to bounds.

    Raises:
        vqaopt.exceptions.UnknownStrategy: If the strategy is not known.
        vqaopt.exceptions.OutOfBounds: If a constant violates a bound.
    """
    if strategy not in INITIALIZERS:
        raise UnknownStrategy(f'strategy - {strategy!r} is not one of '
                              f'{", ".join(INITIALIZERS)}.')
    rng = np.random.default_rng(seed)
    lower, upper = _limits(bounds)

    if strategy == 'uniform-random':
        return np.minimum(rng.uniform(lower, upper), _below(upper))

    if value is None:
        x = (lower + upper) / 2
    else:
        x = np.full(len(bounds), float(value))
        for k, (lo, hi) in enumerate(bounds):
            if (lo is not None and x[k] < lo) or (hi is not None
                                                  and x[k] >= hi):
                raise OutOfBounds(f'Constant {value} is outside bounds '
                                  f'[{lo}, {hi}) of parameter {k}.')
    if strategy == 'perturbed-constant':
        x = x + rng.uniform(-width, width, size=len(x))
        real_lower, real_upper = _limits(bounds, finite=False)
        x = np.clip(x, real_lower, _below(real_upper))
    return x


class _BudgetExhausted(Exception):
    pass


class _Stagnated(Exception):
    pass


def optimize_local(objective: ObjectiveHandle,
                   x0: Sequence[float],
                   budget: int = 1000,
                   rhobeg: float = 0.5,
                   rhoend: float = 1e-6,
                   stagnation_tol: float = 1e-8) -> OptimizationResult:
    """COBYLA through `scipy.optimize.minimize`.

    x0 is evaluated first, so the result is never worse than x0. Stops on
    trust-region radius below `rhoend` ("rhoend"), after `budget`
    evaluations ("budget"), or when the best value improved by less than
    `stagnation_tol` over the last 2 * dim + 1 evaluations ("stagnation").

    Raises:
        vqaopt.exceptions.BudgetZero: If budget < 1.
    """
    if budget < 1:
        raise BudgetZero(f'Evaluation budget must be positive, got {budget}.')
    evaluate = objective
    x0 = objective.clip(x0)
    evaluate(x0)
    if budget == 1:
        return _result(objective, 'budget')

    window = 2 * objective.dimension + 1
    history = [objective.best_value]
    start = objective.evaluations

    def fn(x):
        if objective.evaluations - start + 1 >= budget:
            raise _BudgetExhausted
        value = evaluate(objective.clip(x))
        history.append(objective.best_value)
        if (len(history) > window
                and history[-window - 1] - history[-1] < stagnation_tol):
            raise _Stagnated
        return value

    lower, upper = _limits(objective.bounds, finite=False)
    reason = 'rhoend'
    try:
        res = scipy.optimize.minimize(fn,
                                      x0,
                                      method='COBYLA',
                                      bounds=list(zip(lower, upper)),
                                      tol=rhoend,
                                      options={
                                          'rhobeg': rhobeg,
                                          'maxiter': budget
                                      })
        LOGGER.debug(f'COBYLA finished: {res.message}')
    except _BudgetExhausted:
        reason = 'budget'
    except _Stagnated:
        reason = 'stagnation'
    return _result(objective, reason)


@dataclass(frozen=True)
class SpsaSchedule:
    """Gain sequences a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma.

    Raises:
        vqaopt.exceptions.InvalidSchedule: If alpha is outside (0.5, 1],
            gamma is outside (0, 0.5], a or c is not positive or A is
            negative.
    """
    a: float = 0.2
    c: float = 0.1
    A: float = 10.0
    alpha: float = 0.602
    gamma: float = 0.101

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0):
            raise InvalidSchedule('SPSA gains a and c must be positive.')
        if self.A < 0:
            raise InvalidSchedule('SPSA stability offset A must be '
                                  'nonnegative.')
        if not 0.5 < self.alpha <= 1:
            raise InvalidSchedule(f'SPSA alpha must be in (0.5, 1], got '
                                  f'{self.alpha}.')
        if not 0 < self.gamma <= 0.5:
            raise InvalidSchedule(f'SPSA gamma must be in (0, 0.5], got '
                                  f'{self.gamma}.')
        if self.gamma <= 1 / 6:
            LOGGER.warning(f'SPSA gamma {self.gamma} is at or below 1/6, '
                           'outside the asymptotically optimal region.')

    def a_k(self, k: int) -> float:
        return self.a / (k + 1 + self.A)**self.alpha

    def c_k(self, k: int) -> float:
        return self.c / (k + 1)**self.gamma


def optimize_spsa(objective: ObjectiveHandle,
                  x0: Sequence[float],
                  schedule: Optional[SpsaSchedule] = None,
                  iterations: int = 100,
                  seed: Optional[int] = None,
                  final_evaluation: bool = True) -> OptimizationResult:
    """Simultaneous perturbation stochastic approximation.

    Each iteration evaluates x + c_k d and x - c_k d for a random sign
    vector d and steps along the resulting gradient estimate, clipping to
    bounds. The final iterate is evaluated once more if
    `final_evaluation` is set.

    Raises:
        vqaopt.exceptions.BudgetZero: If iterations < 1.
    """
    if iterations < 1:
        raise BudgetZero(f'SPSA needs at least one iteration, got '
                         f'{iterations}.')
    schedule = schedule or SpsaSchedule()
    rng = np.random.default_rng(seed)
    evaluate = objective
    x = objective.clip(x0)

    for k in range(iterations):
        ck = schedule.c_k(k)
        delta = rng.choice([-1.0, 1.0], size=objective.dimension)
        plus = evaluate(objective.clip(x + ck * delta))
        minus = evaluate(objective.clip(x - ck * delta))
        gradient = (plus - minus) / (2 * ck) * delta
        x = objective.clip(x - schedule.a_k(k) * gradient)

    if final_evaluation:
        evaluate(x)
    LOGGER.debug(f'SPSA finished after {iterations} iterations, best '
                 f'{objective.best_value:.6g}.')
    return _result(objective, 'iterations')


def _tournament(rng: np.random.Generator, fitness: np.ndarray,
                size: int) -> int:
    entrants = rng.choice(len(fitness), size=min(size, len(fitness)),
                          replace=False)
    return int(min(entrants, key=lambda i: (fitness[i], i)))


def optimize_genetic(objective: ObjectiveHandle,
                     population_size: int = 20,
                     generations: int = 50,
                     tournament_size: int = 3,
                     crossover_rate: float = 0.9,
                     mutation_rate: Optional[float] = None,
                     sigma: float = 0.05,
                     elitism: int = 1,
                     seed: Optional[int] = None,
                     initial: Optional[np.ndarray] = None
                     ) -> OptimizationResult:
    """Real-coded genetic algorithm; lower objective is fitter.

    Each generation keeps the `elitism` best chromosomes unchanged (with
    their cached fitness) and fills the rest by tournament selection,
    uniform crossover and per-gene Gaussian mutation with standard
    deviation `sigma` times the bound width. `initial` seeds the first rows
    of the population; the remainder is sampled uniformly.

    Raises:
        vqaopt.exceptions.OptimizerError: If the population has fewer than
            two chromosomes or elitism does not leave room for offspring.
        vqaopt.exceptions.BudgetZero: If generations < 0.
    """
    if population_size < 2:
        raise OptimizerError(f'Population size must be at least 2, got '
                             f'{population_size}.')
    if not 0 <= elitism < population_size:
        raise OptimizerError(f'Elitism must be in [0, {population_size}).')
    if generations < 0:
        raise BudgetZero('Generations must be nonnegative.')

    dim = objective.dimension
    rate = mutation_rate if mutation_rate is not None else 1 / max(dim, 1)
    rng = np.random.default_rng(seed)
    evaluate = objective
    lower, upper = _limits(objective.bounds)
    scale = sigma * (upper - lower)

    population = rng.uniform(lower, upper, size=(population_size, dim))
    if initial is not None:
        seeded = np.atleast_2d(np.asarray(initial, dtype=float))
        count = min(len(seeded), population_size)
        population[:count] = seeded[:count]
    population = np.array([objective.clip(x) for x in population])
    fitness = np.array([evaluate(x) for x in population])

    for generation in range(generations):
        order = sorted(range(population_size),
                       key=lambda i: (fitness[i], i))
        children = [population[i].copy() for i in order[:elitism]]
        child_fitness = [fitness[i] for i in order[:elitism]]
        while len(children) < population_size:
            mother = population[_tournament(rng, fitness, tournament_size)]
            father = population[_tournament(rng, fitness, tournament_size)]
            if rng.random() < crossover_rate:
                mask = rng.random(dim) < 0.5
                child = np.where(mask, mother, father)
            else:
                child = mother.copy()
            mutate = rng.random(dim) < rate
            if mutate.any():
                child = child + mutate * rng.normal(0.0, 1.0, dim) * scale
            child = objective.clip(child)
            children.append(child)
            child_fitness.append(evaluate(child))
        population = np.array(children)
        fitness = np.array(child_fitness)
        LOGGER.debug(f'Generation {generation}: best {fitness.min():.6g}')

    return _result(objective, 'generations')
