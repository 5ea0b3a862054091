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
"""Parametric circuits and exact statevector simulation.

Conventions:

* |0> is the +1 eigenstate of sigma-z, so a measured bit '0' is spin +1.
* RZ(t) = exp(-i t Z / 2), RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2)
  and RZZ(t) = exp(-i t Z(x)Z / 2).
* Qubit 0 is the least-significant bit of the basis-state index. Bitstrings
  are written with qubit 0 first.
"""
from dataclasses import dataclass, field, replace
import logging
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from typing_extensions import Literal

from .constants import MAX_QUBITS, TIE_TOLERANCE
from .encodings import IsingModel, bitstring_from_index, energy_diagonal
from .exceptions import (CircuitError,
                         DimensionMismatch,
                         MissingParameter,
                         OutOfBounds,
                         TooLarge)

LOGGER = logging.getLogger(__name__)

GateKind = Literal['H', 'RX', 'RY', 'RZ', 'RZZ']

GATE_ARITY = {'H': 1, 'RX': 1, 'RY': 1, 'RZ': 1, 'RZZ': 2}

PRECISIONS = {'double': np.complex128, 'single': np.complex64}

NORM_TOLERANCE = 1e-10

Bound = Optional[float]


@dataclass(frozen=True)
class ParamRef:
    """Entry `index` of parameter `name`, multiplied by `scale`."""
    name: str
    index: int
    scale: float = 1.0


Angle = Union[float, ParamRef, None]


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Angle = None

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise CircuitError(f'Unknown gate {self.kind!r}.')
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != GATE_ARITY[self.kind]:
            raise CircuitError(f'{self.kind} acts on {GATE_ARITY[self.kind]} '
                               f'qubit(s), got {qubits}.')
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f'{self.kind} qubits must be distinct.')
        if self.kind == 'H' and self.angle is not None:
            raise CircuitError('H takes no angle.')
        if self.kind != 'H' and self.angle is None:
            raise CircuitError(f'{self.kind} needs an angle.')
        object.__setattr__(self, 'qubits', qubits)

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.angle, ParamRef)


@dataclass(frozen=True)
class ParameterSpec:
    """A named parameter vector with half-open bounds [lower, upper).

    `active[k]` is False for entries no gate depends on; they are kept in
    the table but left out of optimization.
    """
    name: str
    count: int
    lower: Bound = None
    upper: Bound = None
    active: Tuple[bool, ...] = ()

    def __post_init__(self):
        if self.count < 0:
            raise CircuitError(f'Parameter {self.name} has negative size.')
        if (self.lower is not None and self.upper is not None
                and not self.lower < self.upper):
            raise CircuitError(f'Parameter {self.name}: lower bound must be '
                               'below upper bound.')
        active = tuple(self.active) or (True, ) * self.count
        if len(active) != self.count:
            raise CircuitError(f'Parameter {self.name}: activity mask has '
                               f'{len(active)} entries for {self.count}.')
        object.__setattr__(self, 'active', active)

    @property
    def bounds(self) -> Tuple[Bound, Bound]:
        return self.lower, self.upper

    def contains(self, value: float) -> bool:
        return ((self.lower is None or value >= self.lower)
                and (self.upper is None or value < self.upper))


@dataclass(frozen=True)
class ParametricCircuit:
    num_qubits: int
    gates: Tuple[GateOp, ...] = ()
    parameters: Tuple[ParameterSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        object.__setattr__(self, 'parameters', tuple(self.parameters))
        table = self.table
        if len(table) != len(self.parameters):
            raise CircuitError('Parameter names must be unique.')
        for gate in self.gates:
            if any(not 0 <= q < self.num_qubits for q in gate.qubits):
                raise CircuitError(f'{gate.kind} on {gate.qubits} is outside '
                                   f'the {self.num_qubits}-qubit register.')
            ref = gate.angle
            if isinstance(ref, ParamRef):
                spec = table.get(ref.name)
                if spec is None or not 0 <= ref.index < spec.count:
                    raise CircuitError(f'Gate refers to unknown parameter '
                                       f'{ref.name}[{ref.index}].')

    def __repr__(self):
        return (f'<ParametricCircuit qubits={self.num_qubits} '
                f'gates={len(self.gates)}>')

    @property
    def table(self) -> Dict[str, ParameterSpec]:
        return {p.name: p for p in self.parameters}

    @property
    def is_bound(self) -> bool:
        return not any(g.is_symbolic for g in self.gates)

    def gate_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for gate in self.gates:
            counts[gate.kind] = counts.get(gate.kind, 0) + 1
        return counts


def bind(circuit: ParametricCircuit,
         values: Mapping[str, Sequence[float]]) -> ParametricCircuit:
    """Replace every symbolic angle by scale * value.

    Raises:
        vqaopt.exceptions.MissingParameter: If a parameter is unassigned.
        vqaopt.exceptions.OutOfBounds: If a value violates its bounds.
    """
    arrays = {}
    for spec in circuit.parameters:
        if spec.name not in values:
            if spec.count == 0:
                arrays[spec.name] = np.zeros(0)
                continue
            raise MissingParameter(f'No value for parameter {spec.name}.')
        arr = np.asarray(values[spec.name], dtype=float).reshape(-1)
        if len(arr) != spec.count:
            raise MissingParameter(f'Parameter {spec.name} needs '
                                   f'{spec.count} values, got {len(arr)}.')
        for k, v in enumerate(arr):
            if not spec.contains(v):
                raise OutOfBounds(f'{spec.name}[{k}] = {v} is outside '
                                  f'[{spec.lower}, {spec.upper}).')
        arrays[spec.name] = arr

    gates = []
    for gate in circuit.gates:
        if isinstance(gate.angle, ParamRef):
            ref = gate.angle
            gate = replace(gate,
                           angle=float(ref.scale * arrays[ref.name][ref.index]))
        gates.append(gate)
    return ParametricCircuit(circuit.num_qubits, gates, circuit.parameters)


class Statevector:
    """Amplitudes of an m-qubit state. Gates mutate it in place."""

    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes)
        m = int(np.log2(len(amplitudes))) if len(amplitudes) else -1
        if m < 0 or 2**m != len(amplitudes):
            raise DimensionMismatch('Statevector length must be a power of 2.')
        self.amplitudes = amplitudes
        self.num_qubits = m

    def __repr__(self):
        return f'<Statevector qubits={self.num_qubits}>'

    @classmethod
    def zero(cls, m: int, precision: str = 'double') -> 'Statevector':
        amps = np.zeros(2**m, dtype=PRECISIONS[precision])
        amps[0] = 1.0
        return cls(amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes)**2

    def norm(self) -> float:
        return float(np.sum(self.probabilities()))

    def copy(self) -> 'Statevector':
        return Statevector(self.amplitudes.copy())


def _single_qubit_matrix(kind: str, angle: Optional[float]) -> np.ndarray:
    if kind == 'H':
        return np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if kind == 'RX':
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == 'RY':
        return np.array([[c, -s], [s, c]])
    raise CircuitError(f'{kind} is not a dense single-qubit gate.')


def apply_gate(state: Statevector, gate: GateOp):
    """Apply one bound gate in place."""
    if gate.is_symbolic:
        raise MissingParameter(f'{gate.kind} angle is unbound.')
    m = state.num_qubits
    amps = state.amplitudes
    if gate.kind in ('RZ', 'RZZ'):
        index = np.arange(2**m)
        parity = np.zeros(2**m, dtype=np.int64)
        for q in gate.qubits:
            parity ^= (index >> q) & 1
        half = gate.angle / 2
        phases = np.where(parity == 0, np.exp(-1j * half), np.exp(1j * half))
        amps *= phases.astype(amps.dtype)
        return

    (k, ) = gate.qubits
    u = _single_qubit_matrix(gate.kind, gate.angle).astype(amps.dtype)
    view = amps.reshape(2**(m - 1 - k), 2, 2**k)
    view[...] = np.einsum('ab,ibj->iaj', u, view)


def simulate(circuit: ParametricCircuit,
             precision: str = 'double',
             max_qubits: int = MAX_QUBITS) -> Statevector:
    """Run a bound circuit on |0...0>.

    Raises:
        vqaopt.exceptions.TooLarge: Above `max_qubits`.
        vqaopt.exceptions.MissingParameter: If the circuit is not bound.
    """
    if circuit.num_qubits > max_qubits:
        raise TooLarge(f'{circuit.num_qubits} qubits exceed the cap of '
                       f'{max_qubits}.')
    state = Statevector.zero(circuit.num_qubits, precision)
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state


def expectation(state: Statevector,
                model: IsingModel,
                diagonal: Optional[np.ndarray] = None) -> float:
    """Exact <psi|H|psi> using the diagonal of H, constant included.

    Raises:
        vqaopt.exceptions.DimensionMismatch: If the model has a different
            number of spins than the state has qubits.
    """
    if model.m != state.num_qubits:
        raise DimensionMismatch(f'Model has {model.m} spins, state has '
                                f'{state.num_qubits} qubits.')
    if diagonal is None:
        diagonal = energy_diagonal(model)
    return float(state.probabilities() @ diagonal)


def _sample_indices(state: Statevector, shots: int,
                    seed: Optional[int]) -> np.ndarray:
    if shots < 1:
        raise CircuitError(f'shots must be positive, got {shots}.')
    probs = state.probabilities().astype(float)
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, probs)


def sample(state: Statevector,
           shots: int,
           seed: Optional[int] = None) -> Dict[str, int]:
    """Histogram of `shots` measurements in the computational basis."""
    counts = _sample_indices(state, shots, seed)
    return {
        bitstring_from_index(int(i), state.num_qubits): int(counts[i])
        for i in sorted(np.flatnonzero(counts),
                        key=lambda i: bitstring_from_index(
                            int(i), state.num_qubits))
    }


def sampled_expectation(state: Statevector,
                        model: IsingModel,
                        shots: int,
                        seed: Optional[int] = None,
                        diagonal: Optional[np.ndarray] = None) -> float:
    """Mean energy over `shots` measurements."""
    if model.m != state.num_qubits:
        raise DimensionMismatch(f'Model has {model.m} spins, state has '
                                f'{state.num_qubits} qubits.')
    if diagonal is None:
        diagonal = energy_diagonal(model)
    counts = _sample_indices(state, shots, seed)
    return float(counts @ diagonal / shots)


def most_likely(state: Statevector) -> str:
    """Most probable bitstring; ties go to the lexicographically smallest."""
    probs = state.probabilities()
    best = probs.max()
    ties = np.flatnonzero(probs >= best - TIE_TOLERANCE)
    return min(bitstring_from_index(int(i), state.num_qubits) for i in ties)


def top_bitstrings(state: Statevector, k: int) -> Dict[str, float]:
    """The k most probable bitstrings with their probabilities."""
    probs = state.probabilities()
    m = state.num_qubits
    order = sorted(range(len(probs)),
                   key=lambda i: (-round(float(probs[i]), 12),
                                  bitstring_from_index(i, m)))
    return {bitstring_from_index(i, m): float(probs[i]) for i in order[:k]}


@dataclass
class Platform:
    """Execution target for bound circuits.

    Subclasses implement `run`; sampling and expectation build on it.
    """
    name: str = 'platform'
    max_qubits: int = MAX_QUBITS
    max_shots: int = 10**6
    options: dict = field(default_factory=dict)

    def capabilities(self) -> dict:
        return {
            'name': self.name,
            'max_qubits': self.max_qubits,
            'max_shots': self.max_shots,
            'gates': sorted(GATE_ARITY)
        }

    def build(self, circuit: ParametricCircuit,
              values: Mapping[str, Sequence[float]]) -> ParametricCircuit:
        return bind(circuit, values)

    def run(self, circuit: ParametricCircuit) -> Statevector:
        raise NotImplementedError

    def sample(self,
               circuit: ParametricCircuit,
               shots: int,
               seed: Optional[int] = None) -> Dict[str, int]:
        if shots > self.max_shots:
            raise CircuitError(f'{shots} shots exceed the platform limit of '
                               f'{self.max_shots}.')
        return sample(self.run(circuit), shots, seed)


@dataclass
class StatevectorPlatform(Platform):
    """Local exact simulator.

    With `expectation_mode='sampled'` energies are estimated from `shots`
    measurements instead of computed exactly.
    """
    name: str = 'statevector'
    precision: str = 'double'
    expectation_mode: str = 'exact'
    shots: int = 1024

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise CircuitError(f'Unknown precision {self.precision!r}.')
        if self.expectation_mode not in ('exact', 'sampled'):
            raise CircuitError('expectation mode must be exact or sampled.')

    def capabilities(self) -> dict:
        caps = super().capabilities()
        caps.update(precision=self.precision,
                    expectation_mode=self.expectation_mode)
        return caps

    def run(self, circuit: ParametricCircuit) -> Statevector:
        return simulate(circuit, self.precision, self.max_qubits)

    def energy(self,
               state: Statevector,
               model: IsingModel,
               diagonal: Optional[np.ndarray] = None,
               seed: Optional[int] = None) -> float:
        if self.expectation_mode == 'sampled':
            return sampled_expectation(state, model, self.shots, seed,
                                       diagonal)
        return expectation(state, model, diagonal)
