"""Exact combinatorial analyses on small conflict graphs.

All searches are exponential, so every entry point refuses graphs with more
than `vertex_limit` vertices. Results are deterministic: sets are listed in the
graph's canonical vertex order and ties go to the lexicographically least
candidate under that order.
"""

from typing import List, NamedTuple, Optional, Tuple
from fractions import Fraction

import networkx as nx

from .conflict_graph import ConflictGraph, complement
from .rational_core import LimitError
from .traffic import WeightVector

DEFAULT_VERTEX_LIMIT = 40

ODD_HOLE = 'odd_hole'
ODD_ANTIHOLE = 'odd_antihole'


class SizeLimitError(LimitError):
    pass


class MissingWeightError(KeyError):
    pass


class Certificate(NamedTuple):
    kind: str
    cycle: Tuple[str, ...]


class PerfectionVerdict(NamedTuple):
    perfect: bool
    certificate: Optional[Certificate] = None


def check_size(g: ConflictGraph, vertex_limit: int) -> None:
    if len(g) > vertex_limit:
        raise SizeLimitError('graph has %d vertices, above the limit of %d' % (len(g), vertex_limit))


def check_weights(g: ConflictGraph, w: WeightVector) -> None:
    for v in g.vertices:
        if v not in w:
            raise MissingWeightError(v)
        if w[v] < 0:
            raise ValueError('weight of %s is negative' % (v, ))


def is_clique(g: ConflictGraph, vertices) -> bool:
    vertices = list(vertices)
    return all(g.adjacent(a, b) for k, a in enumerate(vertices) for b in vertices[k + 1:])


def is_stable(g: ConflictGraph, vertices) -> bool:
    vertices = list(vertices)
    return not any(g.adjacent(a, b) for k, a in enumerate(vertices) for b in vertices[k + 1:])


def _canonical_sets(g: ConflictGraph, sets) -> List[Tuple[str, ...]]:
    ordered = [g.sorted_vertices(s) for s in sets]
    return sorted(ordered, key=lambda s: [g.index[v] for v in s])


def maximal_cliques(g: ConflictGraph, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> List[Tuple[str, ...]]:
    check_size(g, vertex_limit)
    if len(g) == 0:
        return []
    cliques = _canonical_sets(g, nx.find_cliques(g.graph))
    for clique in cliques:
        assert is_clique(g, clique), clique
    return cliques


def maximal_stable_sets(g: ConflictGraph, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> List[Tuple[str, ...]]:
    check_size(g, vertex_limit)
    if len(g) == 0:
        return []
    stable_sets = _canonical_sets(g, nx.find_cliques(complement(g).graph))
    for stable_set in stable_sets:
        assert is_stable(g, stable_set), stable_set
    return stable_sets


def clique_weight(clique, w: WeightVector) -> Fraction:
    return sum((w[v] for v in clique), Fraction(0))


def max_weight_clique(g: ConflictGraph, w: WeightVector,
                      vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> Tuple[Fraction, Tuple[str, ...]]:
    check_size(g, vertex_limit)
    check_weights(g, w)
    best = (Fraction(0), ())
    for clique in maximal_cliques(g, vertex_limit):
        weight = clique_weight(clique, w)
        if weight > best[0] or not best[1]:
            best = (weight, clique)
    return best


def _least_odd_hole_from(adjacency: List[int], start: int) -> Optional[List[int]]:
    # Grows induced paths start, p1, ..., pk over vertices above `start`.
    # Preorder over ascending neighbors visits paths lexicographically, so the
    # first closing path found is the least odd hole through `start`.
    above = ~((1 << (start + 1)) - 1)
    start_neighbors = adjacency[start]

    def extend(path: List[int], path_mask: int, interior_neighbors: int) -> Optional[List[int]]:
        last = path[-1]
        candidates = adjacency[last] & above & ~path_mask & ~interior_neighbors
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            w = low.bit_length() - 1
            if len(path) > 1 and start_neighbors & low:
                length = len(path) + 1
                if length >= 5 and length % 2 == 1:
                    return path + [w]
                continue
            grown = interior_neighbors | adjacency[last] if len(path) > 1 else interior_neighbors
            found = extend(path + [w], path_mask | low, grown)
            if found is not None:
                return found
        return None

    return extend([start], 1 << start, 0)


def find_odd_hole(g: ConflictGraph, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> Optional[Tuple[str, ...]]:
    """The lexicographically least chordless odd cycle of length >= 5, or None.

    The cycle starts at its least vertex and runs toward the smaller of that
    vertex's two cycle neighbors.
    """
    check_size(g, vertex_limit)
    adjacency = [0] * len(g)
    for a, b in g.graph.edges():
        ia, ib = g.index[a], g.index[b]
        adjacency[ia] |= 1 << ib
        adjacency[ib] |= 1 << ia
    for start in range(len(g)):
        cycle = _least_odd_hole_from(adjacency, start)
        if cycle is not None:
            return tuple(g.vertices[k] for k in cycle)
    return None


def is_chordless_cycle(g: ConflictGraph, cycle) -> bool:
    cycle = list(cycle)
    n = len(cycle)
    if n < 4 or len(set(cycle)) != n:
        return False
    for k in range(n):
        for l in range(k + 1, n):
            consecutive = l == k + 1 or (k == 0 and l == n - 1)
            if g.adjacent(cycle[k], cycle[l]) != consecutive:
                return False
    return True


def verify_certificate(g: ConflictGraph, certificate: Certificate) -> bool:
    cycle = certificate.cycle
    if len(cycle) < 5 or len(cycle) % 2 == 0:
        return False
    if certificate.kind == ODD_HOLE:
        return is_chordless_cycle(g, cycle)
    if certificate.kind == ODD_ANTIHOLE:
        return is_chordless_cycle(complement(g), cycle)
    return False


def is_perfect(g: ConflictGraph, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> PerfectionVerdict:
    """Perfect iff neither g nor its complement has an odd hole."""
    hole = find_odd_hole(g, vertex_limit)
    if hole is not None:
        certificate = Certificate(ODD_HOLE, hole)
    else:
        antihole = find_odd_hole(complement(g), vertex_limit)
        if antihole is None:
            return PerfectionVerdict(perfect=True)
        certificate = Certificate(ODD_ANTIHOLE, antihole)
    assert verify_certificate(g, certificate), certificate
    return PerfectionVerdict(perfect=False, certificate=certificate)


def verdict_to_dict(verdict: PerfectionVerdict) -> dict:
    if verdict.certificate is None:
        return {'perfect': True, 'certificate': None}
    return {
        'perfect': False,
        'certificate': {
            'kind': verdict.certificate.kind,
            'cycle': list(verdict.certificate.cycle),
        },
    }
