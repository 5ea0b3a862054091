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
"""MaxCut graphs: edge-list files, enumeration and exact cuts."""
from itertools import combinations
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import networkx as nx
import numpy as np

from . import io
from .encodings import (MaxCutInstance,
                        bitstring_from_index,
                        energy_diagonal,
                        maxcut_to_ising)
from .exceptions import InvalidInstance, ParseError
from .problem import ProblemInstance

LOGGER = logging.getLogger(__name__)

ATLAS_MAX_NODES = 7


def read_edge_list(path: Union[str, Path]) -> MaxCutInstance:
    """Read an "n m" header line followed by m "u v" lines (0-indexed).

    Blank lines and lines starting with '#' are ignored.

    Raises:
        vqaopt.exceptions.ParseError: With the offending line.
    """
    header = None
    header_line = None
    edges: List[Tuple[int, int]] = []
    try:
        text = Path(path).read_text(encoding='utf-8')
    except FileNotFoundError:
        raise ParseError(f'{path} does not exist')

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f'expected integers, got {line!r}', line=lineno)
        if len(values) != 2:
            raise ParseError(f'expected two integers, got {len(values)}',
                             line=lineno)
        if header is None:
            header = values
            header_line = lineno
        else:
            edges.append((values[0], values[1]))

    if header is None:
        raise ParseError('edge list has no "n m" header')
    n, m = header
    if len(edges) != m:
        raise ParseError(f'header announces {m} edges, found {len(edges)}',
                         line=header_line)
    try:
        return MaxCutInstance(n, tuple(edges))
    except InvalidInstance as e:
        raise ParseError(str(e))


def write_edge_list(graph: MaxCutInstance, path: Union[str, Path]):
    lines = [f'{graph.n} {len(graph.edges)}']
    lines.extend(f'{u} {v}' for u, v in graph.edges)
    io.write_text(path, '\n'.join(lines) + '\n')


def to_networkx(graph: MaxCutInstance) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges)
    return g


def from_networkx(g: nx.Graph) -> MaxCutInstance:
    """Relabel nodes to 0..n-1 in sorted order."""
    nodes = sorted(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    return MaxCutInstance(len(nodes),
                          tuple((index[u], index[v]) for u, v in g.edges))


def _canonical_key(graph: MaxCutInstance):
    return (len(graph.edges), graph.edges)


def _extend_by_one_node(graphs: List[nx.Graph]) -> List[nx.Graph]:
    """Connected graphs with one more node, up to isomorphism.

    Every connected graph has a vertex whose removal leaves it connected,
    so attaching a new vertex to every nonempty neighbor set of every
    smaller connected graph reaches all of them.
    """
    buckets: Dict[str, List[nx.Graph]] = {}
    found = []
    for g in graphs:
        new = g.number_of_nodes()
        for size in range(1, new + 1):
            for neighbors in combinations(range(new), size):
                h = g.copy()
                h.add_node(new)
                h.add_edges_from((v, new) for v in neighbors)
                key = nx.weisfeiler_lehman_graph_hash(h)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(h, other) for other in bucket):
                    continue
                bucket.append(h)
                found.append(h)
    return found


def connected_graphs(n: int) -> List[MaxCutInstance]:
    """All connected n-node graphs, one per isomorphism class.

    Graphs up to seven nodes come from the networkx graph atlas; larger
    ones are grown node by node.
    """
    if n < 1:
        return []
    if n <= ATLAS_MAX_NODES:
        graphs = [
            from_networkx(g) for g in nx.graph_atlas_g()
            if g.number_of_nodes() == n and nx.is_connected(g)
        ]
    else:
        current = [
            to_networkx(g) for g in connected_graphs(ATLAS_MAX_NODES)
        ]
        for _ in range(ATLAS_MAX_NODES, n):
            current = _extend_by_one_node(current)
        graphs = [from_networkx(g) for g in current]

    graphs.sort(key=_canonical_key)
    LOGGER.debug(f'{len(graphs)} connected graphs on {n} nodes.')
    return graphs


def max_cut(graph: MaxCutInstance) -> Tuple[int, str]:
    """Exact maximum cut and the lexicographically smallest bitstring
    achieving it."""
    if graph.n == 0:
        return 0, ''
    cuts = -energy_diagonal(maxcut_to_ising(graph))
    best = int(round(cuts.max()))
    winners = np.flatnonzero(cuts >= best - 1e-9)
    return best, min(bitstring_from_index(int(i), graph.n) for i in winners)


def graph_instance(graph: MaxCutInstance, name: str) -> ProblemInstance:
    return ProblemInstance(name,
                           'maxcut',
                           graph,
                           metadata={
                               'nodes': graph.n, 'edges': len(graph.edges)
                           })


def load_maxcut_instances(nodes: Union[int, List[int], None] = None,
                          paths: Union[List[str], None] = None
                          ) -> List[ProblemInstance]:
    """Edge-list files and/or every connected graph on the given node
    counts."""
    instances = []
    for path in paths or []:
        instances.append(graph_instance(read_edge_list(path), Path(path).stem))

    if isinstance(nodes, int):
        nodes = [nodes]
    for n in nodes or []:
        for k, graph in enumerate(connected_graphs(n)):
            instances.append(graph_instance(graph, f'maxcut-n{n}-{k:04d}'))

    LOGGER.info(f'Loaded {len(instances)} MaxCut instances.')
    return instances
