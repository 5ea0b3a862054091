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
import numpy as np
import pytest

from vqaopt import ansatze, encodings, exceptions, simulator

ANSATZE = ['qaoa', 'ma-qaoa', 'qaoa-plus', 'xqaoa']


def dense_model(m, seed=0):
    rng = np.random.default_rng(seed)
    return encodings.IsingModel(rng.uniform(0.5, 1.5, (m, m)),
                                rng.uniform(0.5, 1.5, m), 0.0)


@pytest.mark.parametrize("name", ANSATZE)
@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("m", range(2, 9))
def test_table_count(name, p, m):
    spec = ansatze.build_ansatz(name, dense_model(m), p)
    assert spec.total_count == ansatze.table_count(name, p, m)
    assert spec.dimension == spec.active_count


@pytest.mark.parametrize("name, expected", [
    ('qaoa', 2 * 2),
    ('ma-qaoa', 2 * (6 + 2 * 4)),
    ('qaoa-plus', 2 * 2 + 3 + 4),
    ('xqaoa', 2 * (6 + 3 * 4)),
])
def test_active_count_dense(name, expected):
    spec = ansatze.build_ansatz(name, dense_model(4), 2)
    assert spec.active_count == expected


def test_zero_fields_are_pruned(triangle):
    model = encodings.maxcut_to_ising(triangle)
    spec = ansatze.build_ansatz('ma-qaoa', model, 1)
    assert spec.labels() == [
        'gamma[1]', 'gamma[2]', 'gamma[5]', 'beta[0]', 'beta[1]', 'beta[2]'
    ]
    strict = ansatze.build_ansatz('ma-qaoa', model, 1, strict=True)
    assert strict.dimension == strict.total_count == 15


def test_qaoa_without_cost_terms():
    model = encodings.IsingModel(np.zeros((2, 2)), np.zeros(2), 1.0)
    spec = ansatze.build_ansatz('qaoa', model, 1)
    assert spec.labels() == ['beta[0]']
    assert ansatze.build_ansatz('qaoa', model, 1, strict=True).dimension == 2


def test_expand_compress():
    spec = ansatze.build_ansatz('qaoa-plus', dense_model(3), 1)
    assert 'nu[0]' not in spec.labels()
    x = np.arange(spec.dimension) / 10
    values = spec.expand(x)
    assert values['nu'][0] == 0.0
    assert list(values['gamma']) == [0.0]
    assert np.array_equal(spec.compress(values), x)
    with pytest.raises(exceptions.DimensionMismatch):
        spec.expand(x[:-1])


def test_rest_value_is_clipped():
    model = encodings.IsingModel(np.zeros((2, 2)), np.zeros(2))
    spec = ansatze.build_ansatz('qaoa',
                                model,
                                1,
                                bounds={'gamma': [0.5, 1.0]})
    assert spec.expand([0.2])['gamma'][0] == 0.5

    below = ansatze.build_ansatz('qaoa',
                                 model,
                                 1,
                                 bounds={'gamma': [-1.0, 0.0]})
    rest = below.expand([0.2])['gamma'][0]
    assert -1.0 <= rest < 0.0


def test_default_bounds():
    qaoa = ansatze.build_ansatz('qaoa', dense_model(2), 1)
    assert qaoa.bounds() == [(None, None), (0.0, np.pi)]
    xqaoa = ansatze.build_ansatz('xqaoa', dense_model(2), 1)
    table = xqaoa.circuit.table
    assert table['gamma'].bounds == (-np.pi, np.pi)
    assert table['theta'].bounds == (-np.pi, np.pi)
    assert table['alpha'].bounds == (0.0, np.pi)


def test_bounds_override():
    spec = ansatze.build_ansatz('qaoa',
                                dense_model(2),
                                1,
                                bounds={'gamma': [-1.0, None]})
    assert spec.bounds()[0] == (-1.0, None)
    with pytest.raises(exceptions.CircuitError):
        ansatze.build_ansatz('qaoa', dense_model(2), 1, bounds={'gamma': [1]})


@pytest.mark.parametrize("name, p, m", [
    ('qaoa', 0, 2),
    ('qaoa', 1.5, 2),
    ('qaoa-plus', 1, 1),
    ('nope', 1, 2),
])
def test_build_errors(name, p, m):
    with pytest.raises(exceptions.CircuitError):
        ansatze.build_ansatz(name, dense_model(m), p)


def _energy(spec, model, values):
    state = simulator.simulate(simulator.bind(spec.circuit, values))
    return simulator.expectation(state, model)


@pytest.mark.parametrize("gamma, beta", [(0.3, 0.2), (-np.pi / 2, np.pi / 8),
                                         (1.1, 2.5)])
def test_qaoa_single_edge_energy(gamma, beta):
    model = encodings.maxcut_to_ising(encodings.MaxCutInstance(2, ((0, 1), )))
    spec = ansatze.build_ansatz('qaoa', model, 1)
    energy = _energy(spec, model, {'gamma': [gamma], 'beta': [beta]})
    expected = 0.5 * np.sin(4 * beta) * np.sin(gamma) - 0.5
    assert energy == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("name", ANSATZE)
@pytest.mark.parametrize("p", [1, 2])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_zero_angles_give_uniform_state(name, p, m):
    spec = ansatze.build_ansatz(name, dense_model(m, seed=m), p, strict=True)
    values = spec.expand(np.zeros(spec.dimension))
    state = simulator.simulate(simulator.bind(spec.circuit, values))
    uniform = np.full(2**m, 1 / np.sqrt(2**m))
    assert np.allclose(state.amplitudes, uniform, atol=1e-12)


def test_multi_angle_generalizes_qaoa():
    m, p = 3, 2
    model = dense_model(m, seed=4)
    gamma, beta = [0.4, -0.7], [0.3, 1.2]
    qaoa = _energy(ansatze.build_ansatz('qaoa', model, p), model, {
        'gamma': gamma,
        'beta': beta
    })
    table = {
        'gamma': np.repeat(gamma, m * m),
        'theta': np.repeat(gamma, m),
        'beta': np.repeat(beta, m)
    }
    ma = _energy(ansatze.build_ansatz('ma-qaoa', model, p), model, table)
    xq = _energy(ansatze.build_ansatz('xqaoa', model, p), model,
                 dict(table, alpha=np.zeros(p * m)))
    assert ma == pytest.approx(qaoa, abs=1e-10)
    assert xq == pytest.approx(qaoa, abs=1e-10)


def test_qaoa_plus_identity_tail():
    model = dense_model(3, seed=2)
    values = {'gamma': [0.5], 'beta': [0.9]}
    qaoa = _energy(ansatze.build_ansatz('qaoa', model, 1), model, values)
    plus = _energy(ansatze.build_ansatz('qaoa-plus', model, 1), model,
                   dict(values, nu=np.zeros(3), mu=np.zeros(3)))
    assert plus == pytest.approx(qaoa, abs=1e-10)
