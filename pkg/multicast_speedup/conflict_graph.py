"""Enhanced conflict graphs.

One vertex per subflow. Two subflows are adjacent exactly when they belong to
different flows and share an input or an output; subflows of one flow never
conflict because intra-flow coding lets the switch serve them together.

Vertices are labelled `u<i><j>` (unicast), `b<i><j>` (broadcast subflow) and
`m<i><j>[J]` (other multicast subflows), and kept in the canonical order
(input, unicast before multicast before broadcast, destination set, output).

Example usage:

    g = build_conflict_graph(PortShape(2, 3), odd_hole_pattern().structure)
    g.vertices          # ('u11', 'b11', 'b12', 'b13', 'u22', 'u23')
    print(export_dot(g))

"""

from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple
import itertools
import json

import networkx as nx

from .traffic import (BROADCAST, KIND_ORDER, UNICAST, PortShape, flow_kind, subflow_label,
                      validate_shape, validate_structure)


class UnknownVertexError(KeyError):
    pass


class Subflow(NamedTuple):
    flow: int
    input: int
    outputs: Tuple[int, ...]
    output: int
    kind: str

    @property
    def label(self) -> str:
        return subflow_label(self.kind, self.input, self.output, self.outputs)

    @property
    def sort_key(self):
        return (self.input, KIND_ORDER[self.kind], self.outputs, self.output)


class VertexClass(NamedTuple):
    """U_i / B_i group a K x N graph by input, Uo_j / Bo_j by output."""
    tag: str
    index: int


def conflicts(a: Subflow, b: Subflow) -> bool:
    return a.flow != b.flow and (a.input == b.input or a.output == b.output)


class ConflictGraph(object):
    def __init__(self, vertices: Sequence[str], edges: Iterable[Tuple[str, str]],
                 subflows: Optional[Dict[str, Subflow]] = None,
                 classes: Optional[Dict[VertexClass, Tuple[str, ...]]] = None) -> None:
        self.vertices = tuple(vertices)
        self.index = {v: k for k, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise ValueError('duplicate vertex labels')
        self.graph = nx.Graph()
        self.graph.add_nodes_from(self.vertices)
        for a, b in edges:
            for v in (a, b):
                if v not in self.index:
                    raise UnknownVertexError(v)
            if a == b:
                raise ValueError('self-loop at %s' % (a, ))
            self.graph.add_edge(a, b)
        self.subflows = dict(subflows or {})
        self.classes = dict(classes or {})

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConflictGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges() == other.edges()

    def __repr__(self) -> str:
        return 'ConflictGraph(%d vertices, %d edges)' % (len(self), self.number_of_edges())

    def adjacent(self, a: str, b: str) -> bool:
        return self.graph.has_edge(a, b)

    def neighbors(self, v: str) -> FrozenSet[str]:
        return frozenset(self.graph.adj[v])

    def number_of_edges(self) -> int:
        return self.graph.number_of_edges()

    def edges(self) -> List[Tuple[str, str]]:
        pairs = []
        for a, b in self.graph.edges():
            if self.index[a] > self.index[b]:
                a, b = b, a
            pairs.append((a, b))
        return sorted(pairs, key=lambda e: (self.index[e[0]], self.index[e[1]]))

    def sorted_vertices(self, subset: Iterable[str]) -> Tuple[str, ...]:
        return tuple(sorted(subset, key=self.index.__getitem__))

    def class_members(self, tag: str, index: int) -> Tuple[str, ...]:
        return self.classes[VertexClass(tag, index)]

    def vertex_classes(self, v: str) -> List[VertexClass]:
        return [c for c, members in sorted(self.classes.items()) if v in members]


def _graph_from_subflows(subflows: List[Subflow],
                         classes: Optional[Dict[VertexClass, Tuple[str, ...]]] = None) -> ConflictGraph:
    subflows = sorted(subflows, key=lambda s: s.sort_key)
    edges = [(a.label, b.label) for a, b in itertools.combinations(subflows, 2) if conflicts(a, b)]
    return ConflictGraph([s.label for s in subflows], edges,
                         subflows={s.label: s for s in subflows}, classes=classes)


def build_conflict_graph(shape: PortShape, structure: Sequence[Tuple[int, Sequence[int]]]) -> ConflictGraph:
    keys = validate_structure(shape, structure)
    subflows = []
    for flow, key in enumerate(keys):
        kind = flow_kind(key.outputs, shape.N)
        for j in key.outputs:
            subflows.append(Subflow(flow, key.input, key.outputs, j, kind))
    return _graph_from_subflows(subflows)


def build_kn_graph(K: int, N: int) -> ConflictGraph:
    """G_{K,N}: every unicast u_ij plus every subflow b_ij of one broadcast per input."""
    validate_shape(PortShape(K, N))
    outputs = tuple(range(1, N + 1))
    subflows = []
    flow = 0
    for i in range(1, K + 1):
        for j in outputs:
            subflows.append(Subflow(flow, i, (j, ), j, UNICAST))
            flow += 1
        for j in outputs:
            subflows.append(Subflow(flow, i, outputs, j, BROADCAST))
        flow += 1
    classes = {}
    for i in range(1, K + 1):
        classes[VertexClass('U', i)] = tuple(subflow_label(UNICAST, i, j) for j in outputs)
        classes[VertexClass('B', i)] = tuple(subflow_label(BROADCAST, i, j) for j in outputs)
    for j in outputs:
        classes[VertexClass('Uo', j)] = tuple(subflow_label(UNICAST, i, j) for i in range(1, K + 1))
        classes[VertexClass('Bo', j)] = tuple(subflow_label(BROADCAST, i, j) for i in range(1, K + 1))
    return _graph_from_subflows(subflows, classes)


def kn_edge_families(K: int, N: int) -> Dict[str, Set[FrozenSet[str]]]:
    """The unicast-input, broadcast-input and output edge families of G_{K,N}."""
    u = lambda i, j: subflow_label(UNICAST, i, j)
    b = lambda i, j: subflow_label(BROADCAST, i, j)
    inputs = range(1, K + 1)
    outputs = range(1, N + 1)
    families = {'Eu': set(), 'Eb': set(), 'Eo': set()}
    for i in inputs:
        for j, k in itertools.product(outputs, outputs):
            if j != k:
                families['Eu'].add(frozenset((u(i, j), u(i, k))))
            families['Eb'].add(frozenset((b(i, j), u(i, k))))
    for i in outputs:
        for j, k in itertools.product(inputs, inputs):
            if j == k: continue
            families['Eo'].add(frozenset((u(j, i), u(k, i))))
            families['Eo'].add(frozenset((b(j, i), b(k, i))))
            families['Eo'].add(frozenset((b(j, i), u(k, i))))
    return families


def induced_subgraph(g: ConflictGraph, subset: Iterable[str]) -> ConflictGraph:
    subset = set(subset)
    for v in subset:
        if v not in g.index:
            raise UnknownVertexError(v)
    vertices = [v for v in g.vertices if v in subset]
    edges = [(a, b) for a, b in g.graph.subgraph(vertices).edges()]
    classes = {
        c: tuple(v for v in members if v in subset)
        for c, members in g.classes.items()
    }
    return ConflictGraph(vertices, edges,
                         subflows={v: s for v, s in g.subflows.items() if v in subset},
                         classes=classes)


def relaxed_kn_graph(K: int, N: int, multicasts: Sequence[Sequence[int]]) -> ConflictGraph:
    """G_{K,N} relaxed to unicasts plus one multicast per input.

    `multicasts[i - 1]` is the destination set of input i's multicast; the
    broadcast subflows outside it are removed.
    """
    if len(multicasts) != K:
        raise ValueError('%d multicast destination sets for %d inputs' % (len(multicasts), K))
    g = build_kn_graph(K, N)
    keep = [v for v in g.vertices if g.subflows[v].kind == UNICAST]
    for i, destinations in enumerate(multicasts, 1):
        keep += [subflow_label(BROADCAST, i, j) for j in destinations]
    return induced_subgraph(g, keep)


def complement(g: ConflictGraph) -> ConflictGraph:
    edges = nx.complement(g.graph).edges()
    return ConflictGraph(g.vertices, edges, subflows=g.subflows, classes=g.classes)


def export_dot(g: ConflictGraph) -> str:
    lines = ['graph conflict {']
    for v in g.vertices:
        lines.append('  "%s";' % (v, ))
    for a, b in g.edges():
        lines.append('  "%s" -- "%s";' % (a, b))
    lines.append('}')
    return '\n'.join(lines) + '\n'


def graph_to_dict(g: ConflictGraph) -> dict:
    return {'vertices': list(g.vertices), 'edges': [list(e) for e in g.edges()]}


def export_json(g: ConflictGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2)


def graph_from_dict(data) -> ConflictGraph:
    if not isinstance(data, dict) or 'vertices' not in data or 'edges' not in data:
        raise ValueError('graph: expected an object with "vertices" and "edges"')
    vertices = data['vertices']
    if not isinstance(vertices, list):
        raise ValueError('graph.vertices: expected a list, got %s' % (type(vertices).__name__, ))
    for index, v in enumerate(vertices):
        if not isinstance(v, str):
            raise ValueError('graph.vertices[%d]: expected a string, got %r' % (index, v))
    if not isinstance(data['edges'], list):
        raise ValueError('graph.edges: expected a list')
    edges = []
    for index, edge in enumerate(data['edges']):
        if not isinstance(edge, list) or len(edge) != 2:
            raise ValueError('graph.edges[%d]: expected a pair' % (index, ))
        for end, v in enumerate(edge):
            if not isinstance(v, str):
                raise ValueError('graph.edges[%d][%d]: expected a string, got %r' % (index, end, v))
        edges.append(tuple(edge))
    return ConflictGraph(vertices, edges)


def graph_from_json(text: str) -> ConflictGraph:
    return graph_from_dict(json.loads(text))
