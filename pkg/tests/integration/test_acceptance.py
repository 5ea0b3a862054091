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
"""Benchmark reproductions. Run with --runslow."""
import filecmp
import logging

import numpy as np
import pytest

from vqaopt import acp, config, pipeline, processors
from vqaopt.constants import DATA_DIR

LOGGER = logging.getLogger(__name__)

pytestmark = pytest.mark.slow

# published averages for p = 1, 2, 3
APPROX_RATIOS = (0.8515, 0.9099, 0.9269)
EXPECTED_RATIOS = (0.7360, 0.7726, 0.7903)


def bundled(name, overrides=()):
    data = config.load_config(DATA_DIR / name)
    return config.resolve(config.apply_overrides(data, overrides))


@pytest.fixture(scope='module')
def depth_study():
    return pipeline.Experiment(bundled('maxcut_depth.json')).execute()


def _averages(records, attribute):
    by_depth = {}
    for record in records:
        value = getattr(record.metrics, attribute)
        by_depth.setdefault(record.depth, []).append(value)
    return [float(np.mean(by_depth[p])) for p in (1, 2, 3)]


def test_depth_trend(depth_study):
    assert len(depth_study) == 142 * 3
    approx = _averages(depth_study, 'approximation_ratio')
    expected = _averages(depth_study, 'expected_approximation_ratio')
    LOGGER.info(f'approximation ratios {approx}, expected {expected}')

    assert approx[0] < approx[1] < approx[2]
    assert expected[0] < expected[1] < expected[2]
    assert approx == pytest.approx(APPROX_RATIOS, abs=0.05)
    assert expected == pytest.approx(EXPECTED_RATIOS, abs=0.05)


def test_angle_clustering(depth_study):
    proc = processors.AnglePattern()
    rows = [
        row for record in depth_study if record.depth == 1
        for row in proc.extract(record)
    ]
    folded = np.array([[row[5], row[6]] for row in rows])
    center = folded[processors.medoid(folded)]
    within = np.linalg.norm(folded - center, axis=1) <= 0.3
    assert within.mean() >= 0.7


def test_toy_acp_finds_min_cost_cover():
    hits = 0
    for seed in range(10):
        experiment = pipeline.Experiment(
            bundled('toy_acp.json', [('run.seed', seed)]))
        (record, ) = experiment.execute()
        chosen = acp.decode_pairings(record.instance.form('acp'),
                                     record.most_likely)
        cost = sum(p.cost for p in chosen)
        LOGGER.info(f'seed {seed}: {record.most_likely} cost {cost}')
        if record.metrics.feasible and cost == 30.0:
            hits += 1
    assert hits >= 8


@pytest.mark.parametrize("name, overrides", [
    ('toy_acp.json', [('run.restarts', 1)]),
    ('maxcut_depth.json', [('loader.nodes', [2, 3, 4]),
                           ('run.restarts', 2)]),
])
def test_reproducible_outputs(tmp_path, name, overrides):
    for out in ('first', 'second'):
        experiment = pipeline.Experiment(bundled(name, overrides))
        pipeline.write_experiment(experiment, experiment.load(),
                                  tmp_path / out)

    first = sorted(p.relative_to(tmp_path / 'first')
                   for p in (tmp_path / 'first').rglob('*') if p.is_file())
    second = sorted(p.relative_to(tmp_path / 'second')
                    for p in (tmp_path / 'second').rglob('*')
                    if p.is_file())
    assert first == second
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / 'first',
                                               tmp_path / 'second',
                                               [str(p) for p in first],
                                               shallow=False)
    assert mismatch == [] and errors == []
