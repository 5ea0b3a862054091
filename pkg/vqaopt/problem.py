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
"""Problem instances, their forms, and the reduction graph."""
from collections import deque
from dataclasses import dataclass, field
import logging
from types import MappingProxyType
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

from .exceptions import InvalidInstance, NoPath

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemInstance:
    """A named problem and the equivalent forms produced by reductions.

    `kind` is the form name of `payload`. The original payload is always
    present in `forms` under `kind`.
    """
    name: str
    kind: str
    payload: Any
    forms: Mapping[str, Any] = field(default_factory=dict)
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise InvalidInstance('Problem instance name cannot be empty.')
        forms = dict(self.forms)
        forms.setdefault(self.kind, self.payload)
        object.__setattr__(self, 'forms', MappingProxyType(forms))
        object.__setattr__(self, 'metadata',
                           MappingProxyType(dict(self.metadata)))

    def __repr__(self):
        return (f'<ProblemInstance {self.name} ({self.kind}) '
                f'forms={list(self.forms)}>')

    def form(self, name: str) -> Any:
        try:
            return self.forms[name]
        except KeyError:
            raise NoPath(f'Instance {self.name} has no {name!r} form.')

    def with_form(self, name: str, payload: Any) -> 'ProblemInstance':
        """New instance with one more form. Existing forms are kept as is.

        Raises:
            vqaopt.exceptions.InvalidInstance: If the form already exists.
        """
        if name in self.forms:
            raise InvalidInstance(
                f'Instance {self.name} already has a {name!r} form.')
        forms = dict(self.forms)
        forms[name] = payload
        return ProblemInstance(self.name,
                               self.kind,
                               self.payload,
                               forms,
                               self.metadata)


@dataclass(frozen=True)
class ReductionEdge:
    """One-way reduction from one form to another."""
    source: str
    target: str
    transform: Callable[[Any], Any]
    name: str = ''

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f'Reduction {self.name or self.source} maps '
                             f'{self.source!r} onto itself.')

    def __repr__(self):
        return f'<ReductionEdge {self.source} -> {self.target}>'


def find_reduction_path(source: str, target: str,
                        edges: Sequence[ReductionEdge]) -> List[ReductionEdge]:
    """Minimum-hop path of reductions from `source` to `target`.

    Breadth-first search where each node's outgoing edges are expanded in
    lexicographic order of their target form name, so equal-length paths
    are always resolved the same way.

    Raises:
        vqaopt.exceptions.NoPath: If `target` is unreachable.
    """
    if source == target:
        return []

    outgoing: Dict[str, List[ReductionEdge]] = {}
    for edge in edges:
        outgoing.setdefault(edge.source, []).append(edge)
    for out in outgoing.values():
        out.sort(key=lambda e: (e.target, e.name))

    parent: Dict[str, Optional[ReductionEdge]] = {source: None}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for edge in outgoing.get(node, []):
            if edge.target in parent:
                continue
            parent[edge.target] = edge
            if edge.target == target:
                queue.clear()
                break
            queue.append(edge.target)

    if target not in parent:
        raise NoPath(f'No reduction path from {source!r} to {target!r}.')

    path = []
    node = target
    while node != source:
        edge = parent[node]
        assert edge is not None
        path.append(edge)
        node = edge.source
    path.reverse()
    return path


def convert(instance: ProblemInstance,
            target: str,
            edges: Sequence[ReductionEdge],
            path: Optional[Sequence[ReductionEdge]] = None) -> ProblemInstance:
    """Give `instance` the `target` form and every intermediate form.

    Forms the instance already has are reused instead of recomputed. A
    fixed `path` can be given to bypass the shortest-path search.

    Raises:
        vqaopt.exceptions.NoPath: If `target` is unreachable.
    """
    if target in instance.forms:
        return instance

    if path is None:
        path = find_reduction_path(instance.kind, target, edges)
    elif not path or path[0].source != instance.kind \
            or path[-1].target != target \
            or any(a.target != b.source for a, b in zip(path, path[1:])):
        raise NoPath(f'Reduction path {list(path)} does not lead from '
                     f'{instance.kind!r} to {target!r}.')

    converted = instance
    for edge in path:
        if edge.target in converted.forms:
            continue
        LOGGER.debug(f'{instance.name}: reducing {edge.source} to '
                     f'{edge.target}.')
        payload = edge.transform(converted.form(edge.source))
        converted = converted.with_form(edge.target, payload)
    return converted
