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
"""Problem forms (MCEC, QUBO, Ising, MaxCut) and reductions between them.

Spin convention: a binary variable x and its spin w are related by
x = (w + 1) / 2, so w = +1 means x = 1. A measured bit b corresponds to the
sigma-z eigenvalue w = 1 - 2b, i.e. bit '0' is w = +1 and therefore x = 1.

QUBO matrices keep linear terms on the diagonal (x_j * x_j = x_j). Ising
models keep the constant offset so that energies equal the original
objective values.
"""
from dataclasses import dataclass, field
import json
import logging
from typing import Sequence, Tuple, Union

import numpy as np
from jsonschema import Draft7Validator

from .constants import BRUTE_FORCE_CAP, DATA_DIR, MAX_QUBITS
from .exceptions import (BadSpin,
                         DimensionMismatch,
                         InvalidInstance,
                         InvalidPenalty,
                         ParseError,
                         TooLarge)

LOGGER = logging.getLogger(__name__)

ISING_SCHEMA_NAME = 'ising_schema.json'

Penalty = Union[float, str, None]


@dataclass(frozen=True, eq=False)
class McecInstance:
    """Minimum Cost Exact Cover.

    `membership[i, j]` is 1 iff subset j contains element i.
    """
    membership: np.ndarray
    costs: np.ndarray
    element_labels: Tuple[str, ...] = ()
    subset_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        b = np.asarray(self.membership, dtype=np.int8)
        c = np.asarray(self.costs, dtype=float).reshape(-1)
        if b.ndim != 2:
            if b.size == 0:
                b = b.reshape(b.size, len(c))
            else:
                raise InvalidInstance('Membership must be a 2-D matrix.')
        if b.shape[1] != len(c):
            raise InvalidInstance(f'Membership has {b.shape[1]} subsets but '
                                  f'{len(c)} costs were given.')
        if not np.isin(b, (0, 1)).all():
            raise InvalidInstance('Membership entries must be 0 or 1.')
        if (c < 0).any():
            raise InvalidInstance('Subset costs must be nonnegative.')

        elements = tuple(self.element_labels) or tuple(
            f'a{i}' for i in range(b.shape[0]))
        subsets = tuple(self.subset_labels) or tuple(
            f's{j}' for j in range(b.shape[1]))
        if len(elements) != b.shape[0] or len(subsets) != b.shape[1]:
            raise InvalidInstance('Label counts do not match the membership '
                                  'matrix.')

        b.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, 'membership', b)
        object.__setattr__(self, 'costs', c)
        object.__setattr__(self, 'element_labels', elements)
        object.__setattr__(self, 'subset_labels', subsets)

    def __repr__(self):
        return f'<McecInstance n={self.n} m={self.m}>'

    @property
    def n(self) -> int:
        return self.membership.shape[0]

    @property
    def m(self) -> int:
        return self.membership.shape[1]

    def coverage(self, selection: Sequence[int]) -> np.ndarray:
        """How many selected subsets contain each element."""
        x = np.asarray(selection, dtype=int)
        return self.membership.astype(int) @ x

    def is_exact_cover(self, selection: Sequence[int]) -> bool:
        return bool((self.coverage(selection) == 1).all())

    def cost(self, selection: Sequence[int]) -> float:
        return float(self.costs @ np.asarray(selection, dtype=float))


@dataclass(frozen=True, eq=False)
class QuboInstance:
    """Minimize x^T Q x + offset over binary x."""
    Q: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        if Q.size == 0:
            Q = Q.reshape(0, 0)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise InvalidInstance('Q must be a square matrix.')
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-12):
            raise InvalidInstance('Q must be symmetric.')
        Q.setflags(write=False)
        object.__setattr__(self, 'Q', Q)
        object.__setattr__(self, 'offset', float(self.offset))

    def __repr__(self):
        return f'<QuboInstance m={self.m}>'

    @property
    def m(self) -> int:
        return self.Q.shape[0]

    def value(self, x: Sequence[int]) -> float:
        xv = np.asarray(x, dtype=float)
        return float(xv @ self.Q @ xv + self.offset)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Energy sum_{j<j'} J w_j w_j' + sum_j h_j w_j + const over spins w.

    Only the strict upper triangle of J is used; anything else is zeroed.
    """
    J: np.ndarray
    h: np.ndarray
    const: float = 0.0

    def __post_init__(self):
        h = np.array(self.h, dtype=float).reshape(-1)
        J = np.array(self.J, dtype=float)
        if J.size == 0:
            J = J.reshape(len(h), len(h))
        if J.shape != (len(h), len(h)):
            raise InvalidInstance(f'J has shape {J.shape} but there are '
                                  f'{len(h)} fields.')
        J = np.triu(J, k=1)
        J.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, 'J', J)
        object.__setattr__(self, 'h', h)
        object.__setattr__(self, 'const', float(self.const))

    def __repr__(self):
        return f'<IsingModel m={self.m}>'

    @property
    def m(self) -> int:
        return len(self.h)

    def couplings(self):
        """Nonzero couplings as (j, j', J) with j < j'."""
        rows, cols = np.nonzero(self.J)
        return [(int(j), int(k), float(self.J[j, k]))
                for j, k in zip(rows, cols)]

    def allclose(self, other: 'IsingModel', atol: float = 1e-9) -> bool:
        return (self.m == other.m
                and np.allclose(self.J, other.J, rtol=0, atol=atol)
                and np.allclose(self.h, other.h, rtol=0, atol=atol)
                and abs(self.const - other.const) <= atol)


@dataclass(frozen=True)
class MaxCutInstance:
    """Unweighted, undirected, simple graph."""
    n: int
    edges: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        normalized = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidInstance(f'Self-loop on node {u}.')
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInstance(f'Edge ({u}, {v}) is outside the '
                                      f'{self.n}-node graph.')
            normalized.append((min(u, v), max(u, v)))
        if len(set(normalized)) != len(normalized):
            raise InvalidInstance('Duplicate edges.')
        object.__setattr__(self, 'edges', tuple(sorted(normalized)))

    def cut(self, bitstring: str) -> int:
        """Number of edges whose endpoints are on different sides."""
        return sum(1 for u, v in self.edges if bitstring[u] != bitstring[v])


def auto_penalty(mcec: McecInstance) -> float:
    """1 + total cost: one violated constraint outweighs any cost."""
    return 1.0 + float(np.sum(mcec.costs))


def _penalty(mcec: McecInstance, D: Penalty) -> float:
    if D is None or D == 'auto':
        return auto_penalty(mcec)
    D = float(D)
    if not D > 0:
        raise InvalidPenalty(f'Penalty weight must be positive, got {D}.')
    return D


def mcec_to_qubo(mcec: McecInstance, D: Penalty = 'auto') -> QuboInstance:
    """QUBO whose value is D * sum_i (1 - sum_j b_ij x_j)^2 + sum_j c_j x_j.

    Raises:
        vqaopt.exceptions.InvalidPenalty: If D is not positive.
    """
    D = _penalty(mcec, D)
    b = mcec.membership.astype(float)
    Q = D * (b.T @ b)
    Q[np.diag_indices_from(Q)] += -2.0 * D * b.sum(axis=0) + mcec.costs
    LOGGER.debug(f'MCEC to QUBO with penalty {D}.')
    return QuboInstance(Q, offset=D * mcec.n)


def qubo_to_ising(qubo: QuboInstance) -> IsingModel:
    """Substitute x = (w + 1) / 2 and collect terms."""
    Q = qubo.Q
    J = Q / 2.0
    h = Q.sum(axis=1) / 2.0
    const = Q.sum() / 4.0 + np.trace(Q) / 4.0 + qubo.offset
    return IsingModel(J, h, const)


def mcec_to_ising_direct(mcec: McecInstance,
                         D: Penalty = 'auto') -> IsingModel:
    """Ising coefficients computed straight from the membership matrix.

    Raises:
        vqaopt.exceptions.InvalidPenalty: If D is not positive.
    """
    D = _penalty(mcec, D)
    b = mcec.membership.astype(float)
    c = mcec.costs
    overlap = b.T @ b
    J = D / 2.0 * overlap
    row_sums = b.sum(axis=1)
    h = D / 2.0 * (b.T @ (row_sums - 2.0)) + c / 2.0
    const = (D / 4.0 * np.sum((row_sums - 2.0)**2) + np.sum(c) / 2.0 +
             np.trace(J) / 2.0)
    return IsingModel(J, h, const)


def maxcut_to_ising(graph: MaxCutInstance) -> IsingModel:
    """Energy equals minus the cut size."""
    J = np.zeros((graph.n, graph.n))
    for u, v in graph.edges:
        J[u, v] = 0.5
    return IsingModel(J, np.zeros(graph.n), -len(graph.edges) / 2.0)


def evaluate(model: IsingModel, spins: Sequence[int]) -> float:
    """Energy of one spin configuration.

    Raises:
        vqaopt.exceptions.BadSpin: If any entry is not -1 or +1.
        vqaopt.exceptions.DimensionMismatch: If the length is not m.
    """
    w = np.asarray(spins)
    if w.shape != (model.m, ):
        raise DimensionMismatch(f'Expected {model.m} spins, got {w.shape}.')
    if not np.isin(w, (-1, 1)).all():
        raise BadSpin(f'Spins must be -1 or +1, got {list(w)}.')
    w = w.astype(float)
    return float(w @ model.J @ w + model.h @ w + model.const)


def spins_from_bitstring(bitstring: str) -> np.ndarray:
    """Bit k of the string is qubit k; bit '0' is spin +1."""
    return np.array([1 - 2 * int(b) for b in bitstring], dtype=int)


def bitstring_from_spins(spins: Sequence[int]) -> str:
    return ''.join('0' if s == 1 else '1' for s in spins)


def selection_from_bitstring(bitstring: str) -> np.ndarray:
    """Binary variables x for a measured bitstring (x = 1 - bit)."""
    return np.array([1 - int(b) for b in bitstring], dtype=int)


def bitstring_from_index(index: int, m: int) -> str:
    """Qubit 0 is the least-significant bit of the basis-state index."""
    return ''.join(str((index >> k) & 1) for k in range(m))


def energy_diagonal(model: IsingModel) -> np.ndarray:
    """Energies of all 2^m basis states, indexed by basis-state number.

    Raises:
        vqaopt.exceptions.TooLarge: Above the simulation qubit cap.
    """
    m = model.m
    if m > MAX_QUBITS:
        raise TooLarge(f'{m} spins exceed the cap of {MAX_QUBITS}.')
    index = np.arange(2**m)
    spins = [1.0 - 2.0 * ((index >> k) & 1) for k in range(m)]
    diag = np.full(2**m, model.const)
    for k in range(m):
        if model.h[k]:
            diag += model.h[k] * spins[k]
    for j, k, coupling in model.couplings():
        diag += coupling * spins[j] * spins[k]
    return diag


def brute_force_ground_state(
        model: IsingModel,
        cap: int = BRUTE_FORCE_CAP) -> Tuple[np.ndarray, float]:
    """Exact minimum energy by enumeration.

    Ties within 1e-9 resolve to the lexicographically smallest bitstring.

    Raises:
        vqaopt.exceptions.TooLarge: If m exceeds `cap`.
    """
    if model.m > cap:
        raise TooLarge(f'{model.m} spins exceed the brute-force cap of '
                       f'{cap}.')
    diag = energy_diagonal(model)
    best = diag.min()
    ties = np.flatnonzero(diag <= best + 1e-9)
    winner = min(bitstring_from_index(int(i), model.m) for i in ties)
    spins = spins_from_bitstring(winner)
    return spins, float(evaluate(model, spins))


def is_mcec_selection_feasible(mcec: McecInstance, bitstring: str) -> bool:
    return mcec.is_exact_cover(selection_from_bitstring(bitstring))


def _ising_validator() -> Draft7Validator:
    with open(DATA_DIR / ISING_SCHEMA_NAME) as f:
        return Draft7Validator(json.load(f))


def ising_to_dict(model: IsingModel) -> dict:
    """Export using the bundled `ising_schema.json` layout."""
    return {
        'num_spins': model.m,
        'couplings': [[j, k, v] for j, k, v in model.couplings()],
        'fields': [float(v) for v in model.h],
        'offset': model.const
    }


def ising_from_dict(data: dict) -> IsingModel:
    """Import a model exported with `ising_to_dict`.

    Raises:
        vqaopt.exceptions.ParseError: If data does not match the schema.
    """
    errors = sorted(_ising_validator().iter_errors(data), key=str)
    if errors:
        err = errors[0]
        field_name = '.'.join(str(p) for p in err.absolute_path) or None
        raise ParseError(err.message, field=field_name)

    m = data['num_spins']
    if len(data['fields']) != m:
        raise ParseError(f'Expected {m} fields.', field='fields')
    J = np.zeros((m, m))
    for j, k, v in data['couplings']:
        if not (0 <= j < k < m):
            raise ParseError(f'Coupling ({j}, {k}) must satisfy '
                             f'0 <= j < k < {m}.',
                             field='couplings')
        J[j, k] = v
    return IsingModel(J, data['fields'], data['offset'])
