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
"""Circuit builders for QAOA, ma-QAOA, QAOA+ and XQAOA.

Every builder starts from the uniform superposition and alternates a cost
layer exp(-i g H_C) with a mixer layer. A cost term with a zero coefficient
produces no gate, and a parameter entry that no gate depends on is marked
inactive.

Parameter tables keep the published sizes:

========  ==================  ==========================================
ansatz    table size          layout
========  ==================  ==========================================
qaoa      2p                  gamma[p], beta[p]
ma-qaoa   p(m^2 + 2m)         gamma[p*m*m], theta[p*m], beta[p*m]
qaoa+     2(p + m)            gamma[p], beta[p], nu[m], mu[m]
xqaoa     p(m^2 + 3m)         gamma[p*m*m], theta[p*m], beta[p*m], alpha[p*m]
========  ==================  ==========================================

ma-QAOA and XQAOA index gamma by layer i and qubit pair (j, k) at
i*m*m + j*m + k; only j < k entries can drive gates. QAOA+ uses nu[j] for
the chain coupling (j-1, j), so nu[0] is never used.
"""
from dataclasses import dataclass
import logging
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .encodings import IsingModel
from .exceptions import CircuitError, DimensionMismatch
from .simulator import GateOp, ParametricCircuit, ParameterSpec, ParamRef

LOGGER = logging.getLogger(__name__)

MIXER_BOUNDS = (0.0, np.pi)
COST_BOUNDS = (-np.pi, np.pi)
UNBOUNDED = (None, None)

BoundsOverride = Optional[Mapping[str, Sequence[Optional[float]]]]


@dataclass(frozen=True)
class AnsatzSpec:
    """A built ansatz and the map between its parameter table and the
    flat vector seen by optimizers.

    Unless `strict` is set, only active entries are optimized and inactive
    ones are bound to zero.
    """
    name: str
    depth: int
    circuit: ParametricCircuit
    strict: bool = False

    def __repr__(self):
        return (f'<AnsatzSpec {self.name} p={self.depth} '
                f'params={self.dimension}/{self.total_count}>')

    @property
    def layout(self) -> Tuple[ParameterSpec, ...]:
        return self.circuit.parameters

    @property
    def total_count(self) -> int:
        return sum(p.count for p in self.layout)

    @property
    def active_count(self) -> int:
        return sum(sum(p.active) for p in self.layout)

    def _slots(self) -> List[Tuple[ParameterSpec, int]]:
        return [(p, k) for p in self.layout for k in range(p.count)
                if self.strict or p.active[k]]

    @property
    def dimension(self) -> int:
        return len(self._slots())

    def labels(self) -> List[str]:
        return [f'{p.name}[{k}]' for p, k in self._slots()]

    def bounds(self) -> List[Tuple[Optional[float], Optional[float]]]:
        return [p.bounds for p, _ in self._slots()]

    def expand(self, x: Sequence[float]) -> Dict[str, np.ndarray]:
        """Parameter table values for an optimizer vector.

        Raises:
            vqaopt.exceptions.DimensionMismatch: If len(x) != dimension.
        """
        x = np.asarray(x, dtype=float).reshape(-1)
        slots = self._slots()
        if len(x) != len(slots):
            raise DimensionMismatch(f'{self.name} has {len(slots)} '
                                    f'parameters, got {len(x)}.')
        values = {p.name: np.full(p.count, _rest(p)) for p in self.layout}
        for (p, k), v in zip(slots, x):
            values[p.name][k] = v
        return values

    def compress(self, values: Mapping[str, Sequence[float]]) -> np.ndarray:
        """Optimizer vector for full parameter table values."""
        return np.array(
            [float(values[p.name][k]) for p, k in self._slots()])


def _rest(spec: ParameterSpec) -> float:
    """Value bound to inactive entries: zero, moved inside the bounds."""
    value = 0.0
    if spec.lower is not None:
        value = max(value, spec.lower)
    if spec.upper is not None:
        value = min(value, float(np.nextafter(spec.upper, -np.inf)))
    return value


def _parameter(name: str,
               count: int,
               default: Tuple[Optional[float], Optional[float]],
               bounds: BoundsOverride) -> ParameterSpec:
    lower, upper = default
    if bounds and name in bounds:
        override = list(bounds[name])
        if len(override) != 2:
            raise CircuitError(f'Bounds for {name} must be [lower, upper].')
        lower, upper = override
    return ParameterSpec(name, count, lower, upper)


def _mark_active(num_qubits: int, gates: List[GateOp],
                 parameters: List[ParameterSpec]) -> ParametricCircuit:
    used = {(g.angle.name, g.angle.index)
            for g in gates if isinstance(g.angle, ParamRef)}
    marked = [
        ParameterSpec(p.name,
                      p.count,
                      p.lower,
                      p.upper,
                      tuple((p.name, k) in used for k in range(p.count)))
        for p in parameters
    ]
    return ParametricCircuit(num_qubits, gates, marked)


def _check_depth(p: int):
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise CircuitError(f'Depth must be a positive integer, got {p!r}.')


def _hadamards(m: int) -> List[GateOp]:
    return [GateOp('H', (j, )) for j in range(m)]


def _shared_cost_layer(model: IsingModel, layer: int) -> List[GateOp]:
    gates = [
        GateOp('RZZ', (j, k), ParamRef('gamma', layer, 2 * coupling))
        for j, k, coupling in model.couplings()
    ]
    gates.extend(
        GateOp('RZ', (j, ), ParamRef('gamma', layer, 2 * h))
        for j, h in enumerate(model.h) if h)
    return gates


def _multi_angle_cost_layer(model: IsingModel, layer: int) -> List[GateOp]:
    m = model.m
    gates = [
        GateOp('RZZ', (j, k),
               ParamRef('gamma', layer * m * m + j * m + k, 2 * coupling))
        for j, k, coupling in model.couplings()
    ]
    gates.extend(
        GateOp('RZ', (j, ), ParamRef('theta', layer * m + j, 2 * h))
        for j, h in enumerate(model.h) if h)
    return gates


def build_qaoa(model: IsingModel,
               p: int,
               bounds: BoundsOverride = None) -> ParametricCircuit:
    """Standard QAOA with one (gamma, beta) pair per layer."""
    _check_depth(p)
    m = model.m
    gates = _hadamards(m)
    for i in range(p):
        gates.extend(_shared_cost_layer(model, i))
        gates.extend(
            GateOp('RX', (j, ), ParamRef('beta', i, 2.0)) for j in range(m))
    parameters = [
        _parameter('gamma', p, UNBOUNDED, bounds),
        _parameter('beta', p, MIXER_BOUNDS, bounds)
    ]
    return _mark_active(m, gates, parameters)


def build_ma_qaoa(model: IsingModel,
                  p: int,
                  bounds: BoundsOverride = None) -> ParametricCircuit:
    """Multi-angle QAOA: one angle per cost term and per mixer qubit."""
    _check_depth(p)
    m = model.m
    gates = _hadamards(m)
    for i in range(p):
        gates.extend(_multi_angle_cost_layer(model, i))
        gates.extend(
            GateOp('RX', (j, ), ParamRef('beta', i * m + j, 2.0))
            for j in range(m))
    parameters = [
        _parameter('gamma', p * m * m, COST_BOUNDS, bounds),
        _parameter('theta', p * m, COST_BOUNDS, bounds),
        _parameter('beta', p * m, MIXER_BOUNDS, bounds)
    ]
    return _mark_active(m, gates, parameters)


def build_qaoa_plus(model: IsingModel,
                    p: int,
                    bounds: BoundsOverride = None) -> ParametricCircuit:
    """QAOA followed by a problem-independent layer.

    The extra layer applies RX(mu[j]) on every qubit, then RZZ(nu[j]) on
    each neighboring pair (j-1, j).
    """
    _check_depth(p)
    m = model.m
    if m < 2:
        raise CircuitError('QAOA+ needs at least two qubits.')
    qaoa = build_qaoa(model, p, bounds)
    gates = list(qaoa.gates)
    gates.extend(GateOp('RX', (j, ), ParamRef('mu', j)) for j in range(m))
    gates.extend(
        GateOp('RZZ', (j - 1, j), ParamRef('nu', j)) for j in range(1, m))
    parameters = list(qaoa.parameters) + [
        _parameter('nu', m, COST_BOUNDS, bounds),
        _parameter('mu', m, COST_BOUNDS, bounds)
    ]
    return _mark_active(m, gates, parameters)


def build_xqaoa(model: IsingModel,
                p: int,
                bounds: BoundsOverride = None) -> ParametricCircuit:
    """ma-QAOA cost layers with an X then Y mixer on every qubit."""
    _check_depth(p)
    m = model.m
    gates = _hadamards(m)
    for i in range(p):
        gates.extend(_multi_angle_cost_layer(model, i))
        gates.extend(
            GateOp('RX', (j, ), ParamRef('beta', i * m + j, 2.0))
            for j in range(m))
        gates.extend(
            GateOp('RY', (j, ), ParamRef('alpha', i * m + j, 2.0))
            for j in range(m))
    parameters = [
        _parameter('gamma', p * m * m, COST_BOUNDS, bounds),
        _parameter('theta', p * m, COST_BOUNDS, bounds),
        _parameter('beta', p * m, MIXER_BOUNDS, bounds),
        _parameter('alpha', p * m, MIXER_BOUNDS, bounds)
    ]
    return _mark_active(m, gates, parameters)


BUILDERS: Dict[str, Callable[..., ParametricCircuit]] = {
    'qaoa': build_qaoa,
    'ma-qaoa': build_ma_qaoa,
    'qaoa-plus': build_qaoa_plus,
    'xqaoa': build_xqaoa
}


def table_count(name: str, p: int, m: int) -> int:
    """Published parameter count of an ansatz."""
    return {
        'qaoa': 2 * p,
        'ma-qaoa': p * (m * m + 2 * m),
        'qaoa-plus': 2 * (p + m),
        'xqaoa': p * (m * m + 3 * m)
    }[name]


def build_ansatz(name: str,
                 model: IsingModel,
                 p: int,
                 bounds: BoundsOverride = None,
                 strict: bool = False) -> AnsatzSpec:
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise CircuitError(f'Unknown ansatz {name!r}.')
    circuit = builder(model, p, bounds)
    spec = AnsatzSpec(name, p, circuit, strict)
    LOGGER.debug(f'Built {spec}: {circuit.gate_counts()}')
    return spec
