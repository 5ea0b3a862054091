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
"""Experiment orchestration.

An experiment loads instances, reduces each one to the form the ansatz
needs, and optimizes the circuit from several random starts. Runs are
independent tasks executed by a bounded worker pool; results are merged
back in config order. Result processors then write their tables.
"""
import asyncio
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import metadata
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import io
from .__version__ import __version__
from .ansatze import AnsatzSpec
from .config import ExperimentConfig
from .constants import ENV_OUTPUT_DIR, TIE_TOLERANCE
from .encodings import (IsingModel,
                        MaxCutInstance,
                        energy_diagonal,
                        evaluate,
                        selection_from_bitstring,
                        spins_from_bitstring)
from .exceptions import ConfigError, DegenerateInstance
from .optimizers import ObjectiveHandle, OptimizationResult
from .plugins import make
from .problem import ProblemInstance, convert
from .processors import ResultProcessor
from .registry import REGISTRY
from .reporting import ExperimentBar
from .simulator import (Statevector,
                        bind,
                        most_likely,
                        sampled_expectation,
                        top_bitstrings)

LOGGER = logging.getLogger(__name__)

DEPENDENCIES = ('click', 'jsonschema', 'networkx', 'numpy', 'scipy', 'tqdm')


@dataclass
class Metrics:
    """Solution quality of one record.

    Ratios are None when the instance is above the brute-force cap
    (status "no-optimum") or has no spread in energy ("degenerate").
    """
    approximation_ratio: Optional[float] = None
    expected_approximation_ratio: Optional[float] = None
    best_energy: Optional[float] = None
    expected_energy: Optional[float] = None
    optimal_energy: Optional[float] = None
    feasible: Optional[bool] = None
    status: str = 'ok'


@dataclass
class SolveRecord:
    """Outcome of optimizing one instance at one depth.

    `result` is the best of `restarts`; ties go to the earlier restart.
    """
    problem: str
    kind: str
    form: str
    size: int
    ansatz: str
    depth: int
    optimizer: str
    seed: int
    result: OptimizationResult
    restarts: List[OptimizationResult]
    parameters: Dict[str, List[float]]
    top_k: List[Tuple[str, float]]
    most_likely: str
    samples: Dict[str, int] = field(default_factory=dict)
    metrics: Metrics = field(default_factory=Metrics)
    instance: Optional[ProblemInstance] = field(default=None,
                                                repr=False,
                                                compare=False)

    def __repr__(self):
        return (f'<SolveRecord {self.problem} {self.ansatz} p={self.depth} '
                f'value={self.result.value:.6g}>')

    def to_dict(self) -> dict:
        return {
            'problem': self.problem,
            'kind': self.kind,
            'form': self.form,
            'size': self.size,
            'ansatz': self.ansatz,
            'depth': self.depth,
            'optimizer': self.optimizer,
            'seed': self.seed,
            'result': self.result.to_dict(),
            'restarts': [r.to_dict() for r in self.restarts],
            'parameters': self.parameters,
            'top_k': [[b, p] for b, p in self.top_k],
            'most_likely': self.most_likely,
            'samples': self.samples,
            'metrics': asdict(self.metrics)
        }


def _spread(optimum: float, worst: float):
    if abs(worst - optimum) <= TIE_TOLERANCE * max(1.0, abs(worst)):
        raise DegenerateInstance('Best and worst energies coincide.')
    return worst - optimum


def approximation_ratio(bitstring: str,
                        model: IsingModel,
                        optimum: float,
                        worst: Optional[float] = None) -> float:
    """(worst - E(bitstring)) / (worst - optimum).

    For a MaxCut model the worst energy is 0 and this equals the cut of
    the bitstring over the maximum cut.

    Raises:
        vqaopt.exceptions.DegenerateInstance: If worst equals optimum.
    """
    if worst is None:
        worst = float(energy_diagonal(model).max())
    spread = _spread(optimum, worst)
    achieved = evaluate(model, spins_from_bitstring(bitstring))
    return (worst - achieved) / spread


def cut_ratio(graph: MaxCutInstance, bitstring: str, maxcut: int) -> float:
    """Cut of the bitstring over the maximum cut.

    Raises:
        vqaopt.exceptions.DegenerateInstance: If the graph has no edges.
    """
    if maxcut <= 0:
        raise DegenerateInstance('Graph has no edges to cut.')
    return graph.cut(bitstring) / maxcut


def expected_approximation_ratio(state: Statevector,
                                 model: IsingModel,
                                 optimum: float,
                                 worst: Optional[float] = None,
                                 diagonal: Optional[np.ndarray] = None,
                                 shots: int = 0,
                                 seed: Optional[int] = None) -> float:
    """Approximation ratio averaged over the output distribution.

    Exact from the statevector, or estimated from `shots` samples when
    `shots` is positive.

    Raises:
        vqaopt.exceptions.DegenerateInstance: If worst equals optimum.
    """
    if diagonal is None:
        diagonal = energy_diagonal(model)
    if worst is None:
        worst = float(diagonal.max())
    spread = _spread(optimum, worst)
    if shots:
        energy = sampled_expectation(state, model, shots, seed, diagonal)
    else:
        energy = float(state.probabilities() @ diagonal)
    return (worst - energy) / spread


@dataclass
class _Task:
    instance: ProblemInstance
    model: IsingModel
    spec: AnsatzSpec
    restart: int
    seed: int


@dataclass
class _Group:
    instance: ProblemInstance
    model: IsingModel
    spec: AnsatzSpec
    tasks: List[_Task] = field(default_factory=list)


def task_seeds(master: int, counter: int) -> Tuple[int, int, int]:
    """Initializer, optimizer and sampling seeds of one run."""
    state = np.random.SeedSequence([master, counter]).generate_state(3)
    return int(state[0]), int(state[1]), int(state[2])


class Experiment:
    """A resolved config with its plugins instantiated.

    Raises:
        vqaopt.exceptions.ConfigError: If any plugin cannot be created.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.loader = make('loader', config.loader)
        self.platform = make('platform', config.platform).create()
        self.ansatz = make('ansatz', config.ansatz)
        self.initializer = make('initializer', config.initializer)
        self.optimizer = make('optimizer', config.optimizer)
        self.processors: List[ResultProcessor] = [
            make('result-processor', p) for p in config.processors
        ]
        self.edges, self.path = self._reductions()
        self.run = config.run

    def _reductions(self):
        reductions = self.config.reductions
        options = reductions['options']
        names = [
            n for n in REGISTRY.names('reduction')
            if getattr(REGISTRY.lookup('reduction', n), 'DEFAULT', False)
        ]
        names += [n for n in reductions['include'] if n not in names]
        edges = {
            n: make('reduction', dict(options.get(n, {}), name=n)).edge()
            for n in names + (reductions['path'] or [])
        }
        path = None
        if reductions['path'] is not None:
            path = [edges[n] for n in reductions['path']]
            for a, b in zip(path, path[1:]):
                if a.target != b.source:
                    raise ConfigError(f'reductions.path: {a.name} ends at '
                                      f'{a.target} but {b.name} starts at '
                                      f'{b.source}.')
        return [edges[n] for n in names], path

    def load(self) -> List[ProblemInstance]:
        instances = self.loader.load()
        if not instances:
            LOGGER.warning('The loader produced no instances.')
        return instances

    def reduce(self, instance: ProblemInstance) -> ProblemInstance:
        """Give the instance the form the ansatz needs.

        Raises:
            vqaopt.exceptions.NoPath: If no reduction reaches it.
        """
        return convert(instance, self.ansatz.FORM, self.edges, self.path)

    def plan(self, instances: Sequence[ProblemInstance]) -> dict:
        """What a run would do, without solving anything."""
        entries = []
        for instance in instances:
            reduced = self.reduce(instance)
            entries.append({
                'name': instance.name,
                'kind': instance.kind,
                'forms': list(reduced.forms),
                'qubits': reduced.form(self.ansatz.FORM).m
            })
        depths = self.ansatz.depths()
        return {
            'instances': entries,
            'depths': depths,
            'restarts': self.run['restarts'],
            'runs': len(entries) * len(depths) * self.run['restarts'],
            'config': self.config.to_dict()
        }

    def _groups(self, instances: Sequence[ProblemInstance]) -> List[_Group]:
        groups = []
        counter = 0
        for instance in instances:
            reduced = self.reduce(instance)
            model = reduced.form(self.ansatz.FORM)
            for depth in self.ansatz.depths():
                spec = self.ansatz.build(model, depth)
                group = _Group(reduced, model, spec)
                for restart in range(self.run['restarts']):
                    group.tasks.append(
                        _Task(reduced, model, spec, restart, counter))
                    counter += 1
                groups.append(group)
        return groups

    def _objective(self, task: _Task,
                   diagonal: np.ndarray) -> ObjectiveHandle:
        spec = task.spec
        rng = np.random.default_rng(task_seeds(self.run['seed'],
                                               task.seed)[2])

        def energy(x):
            state = self.platform.run(bind(spec.circuit, spec.expand(x)))
            return self.platform.energy(state,
                                        task.model,
                                        diagonal,
                                        seed=int(rng.integers(2**32)))

        return ObjectiveHandle(energy, task.spec.bounds())

    def solve(self, task: _Task,
              diagonal: np.ndarray) -> OptimizationResult:
        """One optimization run from a fresh initial point."""
        init_seed, opt_seed, _ = task_seeds(self.run['seed'], task.seed)
        objective = self._objective(task, diagonal)
        if task.spec.dimension == 0:
            value = objective([])
            return OptimizationResult(np.zeros(0), value, 1,
                                      list(objective.trace), 'trivial')
        x0 = self.initializer.initial(task.spec.bounds(), init_seed)
        result = self.optimizer.optimize(objective, x0, opt_seed)
        LOGGER.debug(f'{task.instance.name} p={task.spec.depth} restart '
                     f'{task.restart}: {result}')
        return result

    def _record(self, group: _Group, results: List[OptimizationResult],
                diagonal: np.ndarray) -> SolveRecord:
        best_index = min(range(len(results)),
                         key=lambda i: (results[i].value, i))
        best = results[best_index]
        spec = group.spec
        master = self.run['seed']
        seed = group.tasks[best_index].seed
        sample_seed = task_seeds(master, seed)[2]

        values = spec.expand(best.x)
        bound = bind(spec.circuit, values)
        state = self.platform.run(bound)
        bits = most_likely(state)
        samples = {}
        if self.run['shots']:
            samples = self.platform.sample(bound,
                                           self.run['shots'], sample_seed)
        top = sorted(samples.items(), key=lambda kv: (-kv[1], kv[0]))
        top_samples = dict(top[:self.run['top_k']])

        metrics = self._metrics(group, state, bits, diagonal, sample_seed)
        return SolveRecord(
            problem=group.instance.name,
            kind=group.instance.kind,
            form=self.ansatz.FORM,
            size=_size(group.instance, group.model),
            ansatz=spec.name,
            depth=spec.depth,
            optimizer=self.optimizer.NAME,
            seed=seed,
            result=best,
            restarts=results,
            parameters={k: [float(x) for x in v]
                        for k, v in values.items()},
            top_k=list(top_bitstrings(state, self.run['top_k']).items()),
            most_likely=bits,
            samples=top_samples,
            metrics=metrics,
            instance=group.instance)

    def _metrics(self, group: _Group, state: Statevector, bits: str,
                 diagonal: np.ndarray, seed: int) -> Metrics:
        model = group.model
        metrics = Metrics(
            best_energy=evaluate(model, spins_from_bitstring(bits)),
            expected_energy=float(state.probabilities() @ diagonal))
        instance = group.instance
        if 'mcec' in instance.forms:
            mcec = instance.form('mcec')
            metrics.feasible = mcec.is_exact_cover(
                selection_from_bitstring(bits))

        if model.m > self.run['brute_force_cap']:
            metrics.status = 'no-optimum'
            return metrics

        optimum = float(diagonal.min())
        worst = float(diagonal.max())
        metrics.optimal_energy = optimum
        shots = self.run['shots'] if self.run['sampled_metrics'] else 0
        try:
            if instance.kind == 'maxcut':
                graph = instance.form('maxcut')
                maxcut = int(round(-optimum))
                metrics.approximation_ratio = cut_ratio(graph, bits, maxcut)
                worst = 0.0
            else:
                metrics.approximation_ratio = approximation_ratio(
                    bits, model, optimum, worst)
            metrics.expected_approximation_ratio = \
                expected_approximation_ratio(state, model, optimum, worst,
                                             diagonal, shots, seed)
        except DegenerateInstance as e:
            LOGGER.warning(f'{instance.name}: {e} No ratios reported.')
            metrics.status = 'degenerate'
        return metrics

    async def _run_tasks(self, jobs: List[Tuple[str, Callable[[], Any]]],
                         bar: ExperimentBar) -> List[Any]:
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.run['workers']) as executor:

            async def run(name, job):
                result = await loop.run_in_executor(executor, job)
                bar.update(problem=name)
                return result

            return await asyncio.gather(*(run(n, j) for n, j in jobs))

    def execute(self,
                instances: Optional[Sequence[ProblemInstance]] = None,
                quiet: bool = True,
                on_record: Optional[Callable[[SolveRecord], None]] = None
                ) -> List[SolveRecord]:
        """Solve every instance at every depth.

        Results are deterministic given the master seed, whatever the
        number of workers.
        """
        if instances is None:
            instances = self.load()
        groups = self._groups(instances)
        diagonals = {}
        jobs = []
        for g in groups:
            key = id(g.model)
            if key not in diagonals:
                diagonals[key] = energy_diagonal(g.model)
            for task in g.tasks:
                jobs.append((task.instance.name,
                             lambda t=task, d=diagonals[key]: self.solve(t, d)))

        LOGGER.info(f'Running {len(jobs)} optimizations for '
                    f'{len(instances)} instance(s).')
        with ExperimentBar(total=len(jobs), disable=quiet) as bar:
            results = asyncio.run(self._run_tasks(jobs, bar))

        records = []
        position = 0
        for g in groups:
            chunk = results[position:position + len(g.tasks)]
            position += len(g.tasks)
            record = self._record(g, chunk, diagonals[id(g.model)])
            records.append(record)
            if on_record:
                on_record(record)
        return records


def _size(instance: ProblemInstance, model: IsingModel) -> int:
    """Graph nodes for MaxCut, spins otherwise."""
    if instance.kind == 'maxcut':
        return instance.form('maxcut').n
    return model.m


def run_experiment(config: ExperimentConfig,
                   quiet: bool = True) -> List[SolveRecord]:
    """Load, reduce, optimize and record.

    Raises:
        vqaopt.exceptions.ConfigError: Before any solve if a plugin or a
            field is invalid.
    """
    return Experiment(config).execute(quiet=quiet)


def process_results(records: Sequence[SolveRecord],
                    processors: Sequence[ResultProcessor],
                    directory: Path,
                    rows: Optional[Dict[str, List[list]]] = None
                    ) -> List[Path]:
    """Write per-record rows and aggregate files of every processor.

    Raises:
        vqaopt.exceptions.WriteError: If a file cannot be written.
    """
    if not records:
        LOGGER.warning('No records to process.')
    directory = Path(directory)
    written = []
    for processor in processors:
        if rows is not None and processor.NAME in rows:
            proc_rows = rows[processor.NAME]
        else:
            proc_rows = [r for rec in records for r in processor.extract(rec)]
        target = directory / processor.NAME
        rows_path = target / 'rows.tsv'
        io.write_tsv(rows_path, processor.HEADER, proc_rows)
        written.append(rows_path)
        written.extend(processor.aggregate(proc_rows, target))
    return written


def _versions() -> Dict[str, str]:
    versions = {'vqaopt': __version__}
    for name in DEPENDENCIES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = 'unknown'
    return versions


def output_directory(config: ExperimentConfig,
                     out: Optional[str] = None) -> Path:
    """`out`, else the environment override, else `run.output`."""
    return Path(out or os.environ.get(ENV_OUTPUT_DIR) or config.run['output'])


def write_experiment(experiment: Experiment,
                     instances: Sequence[ProblemInstance],
                     directory: Path,
                     quiet: bool = True) -> List[SolveRecord]:
    """Run an experiment and write its directory.

    Layout: `config.json`, `manifest.json` and one subdirectory per result
    processor holding `rows.tsv` and the aggregate files.
    """
    directory = Path(directory)
    rows: Dict[str, List[list]] = {p.NAME: [] for p in experiment.processors}

    def collect(record):
        for processor in experiment.processors:
            rows[processor.NAME].extend(processor.extract(record))

    records = experiment.execute(instances, quiet=quiet, on_record=collect)

    io.write_json(directory / 'config.json', experiment.config.to_dict())
    files = process_results(records, experiment.processors, directory, rows)

    master = experiment.run['seed']
    seeds = []
    for record in records:
        seeds.append({
            'problem': record.problem,
            'depth': record.depth,
            'best_run': record.seed,
            'runs': len(record.restarts)
        })
    manifest = {
        'versions': _versions(),
        'seed': master,
        'seed_derivation': 'SeedSequence([seed, run counter])',
        'instances': [i.name for i in instances],
        'records': seeds,
        'files': sorted(str(p.relative_to(directory)) for p in files)
    }
    io.write_json(directory / 'manifest.json', manifest)
    LOGGER.info(f'Wrote {len(records)} records to {directory}.')
    return records
