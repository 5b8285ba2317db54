"""Perfect covers of the K x N unicast plus broadcast conflict graph.

Covering G_{K,N} p times with q induced perfect subgraphs bounds its
imperfection ratio, and with it the minimum speedup, by q/p. Two covers are
available:

  - input side: K - 1 copies of the all-unicast subgraph Gu plus one Gi per
    input (all broadcast subflows and input i's unicasts), q = 2K - 1, p = K;
  - output side: Go1 and Go2 for every output, q = 2N, p = N + 1.

Example usage:

    report = validated_bound(2, 3)
    report.bound      # Fraction(3, 2)
    report.checked    # True: every member passed the odd-hole search

"""

from typing import Callable, List, NamedTuple, Optional
from fractions import Fraction

import pandas as pd

from .conflict_graph import ConflictGraph, build_kn_graph, induced_subgraph
from .graph_analysis import DEFAULT_VERTEX_LIMIT
from .rational_core import format_rational
from .region_speedup import CoverReport, PerfectCover, validate_cover

GU = 'Gu'
GI = 'Gi'
GO1 = 'Go1'
GO2 = 'Go2'
KINDS = (GU, GI, GO1, GO2)

# Member perfection is searched for up to this many ports per side; beyond it
# the members are taken as perfect without a search.
CHECKED_PORT_LIMIT = 4


class NamedSubgraphError(ValueError):
    pass


class NamedSubgraph(NamedTuple):
    kind: str
    index: Optional[int]
    vertices: tuple

    @property
    def name(self) -> str:
        if self.index is None:
            return self.kind
        return '%s(%d)' % (self.kind, self.index)


class BoundReport(NamedTuple):
    K: int
    N: int
    input_report: CoverReport
    output_report: CoverReport
    checked: bool

    @property
    def bound(self) -> Fraction:
        return min(self.input_report.bound, self.output_report.bound)


def _no_status(message: str) -> None:
    pass


def _members(g: ConflictGraph, tag: str, indices) -> tuple:
    return tuple(v for index in indices for v in g.class_members(tag, index))


def named_subgraph_vertices(g: ConflictGraph, K: int, N: int, kind: str,
                            index: Optional[int] = None) -> NamedSubgraph:
    if kind not in KINDS:
        raise NamedSubgraphError('unknown subgraph kind %r' % (kind, ))
    if kind == GU:
        if index is not None:
            raise NamedSubgraphError('Gu takes no index')
        return NamedSubgraph(kind, None, g.sorted_vertices(_members(g, 'U', range(1, K + 1))))
    limit = K if kind == GI else N
    if index is None or not 1 <= index <= limit:
        raise NamedSubgraphError('%s index %r is outside [1, %d]' % (kind, index, limit))
    if kind == GI:
        vertices = _members(g, 'B', range(1, K + 1)) + g.class_members('U', index)
    elif kind == GO1:
        vertices = g.class_members('Uo', index) + _members(g, 'Bo', range(1, N + 1))
    else:
        vertices = g.class_members('Bo', index) + _members(g, 'Uo', range(1, N + 1))
    return NamedSubgraph(kind, index, g.sorted_vertices(vertices))


def named_subgraph(K: int, N: int, kind: str, index: Optional[int] = None) -> ConflictGraph:
    g = build_kn_graph(K, N)
    return induced_subgraph(g, named_subgraph_vertices(g, K, N, kind, index).vertices)


def _cover(members: List[NamedSubgraph], multiplicity: int) -> PerfectCover:
    return PerfectCover(members=tuple(m.vertices for m in members),
                        multiplicity=multiplicity,
                        names=tuple(m.name for m in members))


def input_cover(K: int, N: int) -> PerfectCover:
    g = build_kn_graph(K, N)
    gu = named_subgraph_vertices(g, K, N, GU)
    members = [gu] * (K - 1)
    members += [named_subgraph_vertices(g, K, N, GI, i) for i in range(1, K + 1)]
    return _cover(members, K)


def output_cover(K: int, N: int) -> PerfectCover:
    g = build_kn_graph(K, N)
    members = [named_subgraph_vertices(g, K, N, GO1, j) for j in range(1, N + 1)]
    members += [named_subgraph_vertices(g, K, N, GO2, j) for j in range(1, N + 1)]
    return _cover(members, N + 1)


def kn_speedup_bound(K: int, N: int) -> Fraction:
    """min((2K - 1)/K, 2N/(N + 1))"""
    if K < 1 or N < 1:
        raise NamedSubgraphError('switch needs at least one input and one output, got %dx%d' % (K, N))
    return min(Fraction(2 * K - 1, K), Fraction(2 * N, N + 1))


def validated_bound(K: int, N: int, check_perfection: Optional[bool] = None,
                    vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                    log_status: Callable[[str], None] = _no_status) -> BoundReport:
    if check_perfection is None:
        check_perfection = K <= CHECKED_PORT_LIMIT and N <= CHECKED_PORT_LIMIT
    g = build_kn_graph(K, N)
    log_status('kn_bounds: validating the input cover of G_{%d,%d}' % (K, N))
    input_report = validate_cover(g, input_cover(K, N), check_perfection, vertex_limit, log_status)
    log_status('kn_bounds: validating the output cover of G_{%d,%d}' % (K, N))
    output_report = validate_cover(g, output_cover(K, N), check_perfection, vertex_limit, log_status)
    report = BoundReport(K=K, N=N, input_report=input_report, output_report=output_report,
                         checked=check_perfection)
    assert report.bound == kn_speedup_bound(K, N), (K, N, report.bound)
    return report


def cover_to_dict(cover: PerfectCover) -> dict:
    return {
        'members': [{'name': name, 'vertices': list(vertices)}
                    for name, vertices in zip(cover.names, cover.members)],
        'p': cover.multiplicity,
        'q': cover.size,
        'bound': format_rational(Fraction(cover.size, cover.multiplicity)),
    }


def bounds_table(K_max: int, N_max: int) -> pd.DataFrame:
    """Input, output and combined bounds for every switch up to K_max x N_max."""
    rows = []
    for K in range(1, K_max + 1):
        for N in range(1, N_max + 1):
            rows.append({
                'K': K,
                'N': N,
                'input_bound': format_rational(Fraction(2 * K - 1, K)),
                'output_bound': format_rational(Fraction(2 * N, N + 1)),
                'bound': format_rational(kn_speedup_bound(K, N)),
            })
    return pd.DataFrame(rows, columns=['K', 'N', 'input_bound', 'output_bound', 'bound'])
