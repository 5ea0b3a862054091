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
"""Result processors.

Processors work in two rounds. `extract` turns one solve record into table
rows as soon as the record exists. After the experiment, `aggregate`
receives every row and writes summary files. The pipeline stores the rows
of processor X in `X/rows.tsv` and passes `X/` to `aggregate`.
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from . import io
from .acp import decode_pairings
from .registry import Plugin, plugin

LOGGER = logging.getLogger(__name__)

Row = List[Any]


class ResultProcessor(Plugin):
    KIND = 'result-processor'
    HEADER: Tuple[str, ...] = ()

    def extract(self, record) -> List[Row]:
        """Round one: rows for a single solve record."""
        raise NotImplementedError

    def aggregate(self, rows: Sequence[Row], directory: Path) -> List[Path]:
        """Round two: summary files from all rows."""
        return []


def _mean(values: Sequence[float]):
    return float(np.mean(values)) if values else None


@plugin
class RatioTable(ResultProcessor):
    """Average approximation ratios per circuit depth."""
    NAME = 'ratio-table'
    HEADER = ('problem',
              'ansatz',
              'depth',
              'approximation_ratio',
              'expected_approximation_ratio')
    FILE = 'ratio_table.tsv'

    def extract(self, record):
        m = record.metrics
        return [[
            record.problem,
            record.ansatz,
            record.depth,
            m.approximation_ratio,
            m.expected_approximation_ratio
        ]]

    def aggregate(self, rows, directory):
        depths = sorted({int(r[2]) for r in rows})
        approx: Dict[int, List[float]] = {p: [] for p in depths}
        expected: Dict[int, List[float]] = {p: [] for p in depths}
        for _, _, depth, ratio, exp_ratio in rows:
            if ratio is not None:
                approx[int(depth)].append(float(ratio))
            if exp_ratio is not None:
                expected[int(depth)].append(float(exp_ratio))

        header = ['metric'] + [f'p={p}' for p in depths]
        table = [
            ['Avg. approx. ratio'] + [_mean(approx[p]) for p in depths],
            ['Avg. exp. approx. ratio'] + [_mean(expected[p])
                                           for p in depths],
            ['Instances'] + [len(approx[p]) for p in depths]
        ]
        path = directory / self.FILE
        io.write_tsv(path, header, table)
        return [path]


@plugin
class SizeDistribution(ResultProcessor):
    """Expected approximation ratio quartiles per instance size."""
    NAME = 'size-distribution'
    HEADER = ('problem', 'size', 'depth', 'expected_approximation_ratio')
    FILE = 'size_distribution.tsv'

    def extract(self, record):
        return [[
            record.problem,
            record.size,
            record.depth,
            record.metrics.expected_approximation_ratio
        ]]

    def aggregate(self, rows, directory):
        groups: Dict[Tuple[int, int], List[float]] = {}
        for _, size, depth, value in rows:
            if value is None:
                continue
            groups.setdefault((int(size), int(depth)), []).append(float(value))

        table = []
        for (size, depth), values in sorted(groups.items()):
            q = np.percentile(values, [0, 25, 50, 75, 100])
            table.append([size, depth, len(values)] + [float(v) for v in q])
        path = directory / self.FILE
        io.write_tsv(path,
                     ['size', 'depth', 'count', 'min', 'q1', 'median', 'q3',
                      'max'],
                     table)
        return [path]


def fold_angles(gamma: float,
                beta: float,
                gamma_period: float = 2 * math.pi,
                beta_period: float = math.pi / 2) -> Tuple[float, float]:
    """Map (gamma, beta) into one fundamental cell.

    Both angles are reduced to centered periods and the pair is reflected
    to gamma >= 0, since (gamma, beta) and (-gamma, -beta) give the same
    energy for real Hamiltonians.
    """

    def center(x, period):
        return (x + period / 2) % period - period / 2

    gamma = center(gamma, gamma_period)
    beta = center(beta, beta_period)
    if gamma < 0:
        gamma, beta = -gamma, center(-beta, beta_period)
    return gamma, beta


def medoid(points: np.ndarray) -> int:
    """Index of the point with the least total distance to the others."""
    dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    return int(np.argmin(dist.sum(axis=1)))


@plugin
class AnglePattern(ResultProcessor):
    """Converged (gamma, beta) pairs of shared-angle ansaetze."""
    NAME = 'angle-pattern'
    HEADER = ('problem',
              'depth',
              'layer',
              'gamma',
              'beta',
              'gamma_folded',
              'beta_folded')
    FILE = 'angle_clusters.tsv'
    FIELDS = {
        'gamma_period': {
            'title': 'Gamma period',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 2 * math.pi
        },
        'beta_period': {
            'title': 'Beta period',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': math.pi / 2
        },
        'radius': {
            'title': 'Cluster radius',
            'type': 'number',
            'exclusiveMinimum': 0,
            'default': 0.3
        }
    }

    def extract(self, record):
        gammas = record.parameters.get('gamma')
        betas = record.parameters.get('beta')
        if (gammas is None or betas is None or len(gammas) != record.depth
                or len(betas) != record.depth):
            return []
        rows = []
        for layer, (g, b) in enumerate(zip(gammas, betas)):
            fg, fb = fold_angles(g,
                                 b,
                                 self.settings['gamma_period'],
                                 self.settings['beta_period'])
            rows.append([record.problem, record.depth, layer, g, b, fg, fb])
        return rows

    def aggregate(self, rows, directory):
        groups: Dict[Tuple[int, int], List[Tuple[float, float]]] = {}
        for row in rows:
            key = (int(row[1]), int(row[2]))
            groups.setdefault(key, []).append((float(row[5]), float(row[6])))

        table = []
        for (depth, layer), pairs in sorted(groups.items()):
            points = np.array(pairs)
            center = points[medoid(points)]
            within = np.linalg.norm(points - center, axis=1)
            fraction = float(np.mean(within <= self.settings['radius']))
            table.append([
                depth,
                layer,
                len(pairs),
                float(center[0]),
                float(center[1]),
                fraction
            ])
        path = directory / self.FILE
        io.write_tsv(path,
                     ['depth',
                      'layer',
                      'count',
                      'medoid_gamma',
                      'medoid_beta',
                      'within_radius'],
                     table)
        return [path]


@plugin
class PairingReport(ResultProcessor):
    """Leg-by-leg listing of the most likely crew pairing solution."""
    NAME = 'pairing-report'
    HEADER = ('problem',
              'bitstring',
              'exact_cover',
              'total_cost',
              'pairing',
              'home_base',
              'cost',
              'legs')
    FILE = 'pairing_report.txt'

    def extract(self, record):
        if record.instance is None or 'acp' not in record.instance.forms:
            return []
        instance = record.instance.form('acp')
        chosen = decode_pairings(instance, record.most_likely)
        total = float(sum(p.cost for p in chosen))
        feasible = bool(record.metrics.feasible)
        if not chosen:
            return [[record.problem, record.most_likely, feasible, total, '',
                     '', None, '']]
        rows = []
        for pairing in chosen:
            legs = '; '.join(
                f'{leg.id} {leg.departure_airport} '
                f'{io.datetime_to_str(leg.departure_time)} -> '
                f'{leg.arrival_airport} {io.datetime_to_str(leg.arrival_time)}'
                for leg in pairing.legs)
            rows.append([
                record.problem,
                record.most_likely,
                feasible,
                total,
                pairing.label,
                pairing.home_base,
                pairing.cost,
                legs
            ])
        return rows

    def aggregate(self, rows, directory):
        lines: List[str] = []
        current = None
        for problem, bits, feasible, total, label, base, cost, legs in rows:
            if (problem, bits) != current:
                current = (problem, bits)
                if lines:
                    lines.append('')
                cover = 'yes' if str(feasible) == 'True' else 'no'
                lines.append(f'{problem}: most likely {bits}, exact cover: '
                             f'{cover}, total cost {float(total):g}')
            if not label:
                lines.append('  no pairing selected')
                continue
            lines.append(f'  pairing {label} (home {base}, cost '
                         f'{float(cost):g})')
            lines.extend(f'    {leg}' for leg in legs.split('; ') if leg)
        path = directory / self.FILE
        io.write_text(path, '\n'.join(lines) + '\n')
        return [path]


@plugin
class Records(ResultProcessor):
    """One JSON line per solve record."""
    NAME = 'records'
    HEADER = ('record', )
    FILE = 'records.jsonl'

    def extract(self, record):
        return [[json.dumps(record.to_dict(), sort_keys=True)]]

    def aggregate(self, rows, directory):
        path = directory / self.FILE
        io.write_jsonl(path, [json.loads(r[0]) for r in rows])
        return [path]
