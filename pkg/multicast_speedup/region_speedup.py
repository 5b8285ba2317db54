"""Rate regions, speedup and the imperfection ratio.

A schedule is a time-sharing of switch configurations, i.e. a non-negative
combination of stable sets of the enhanced conflict graph. The least total
time that serves the weights w is the weighted fractional chromatic number
chi_f(G, w), and w lies in s * STAB(G) exactly when chi_f(G, w) <= s. Adding
the empty stable set makes a dominating cover and a convex combination the
same thing, so STAB membership is read as chi_f <= 1.

chi_f is a maximum of linear functions of w (LP duality), hence convex, so its
maximum over a polytope is reached at a vertex. Both the class-wide minimum
speedup (over the admissible flow-rate polytope) and the imperfection ratio
(over QSTAB) are therefore exact maxima over enumerated vertices.

Example usage:

    result = pattern_speedup(odd_hole_pattern())
    result.value      # Fraction(5, 4)
    result.schedule   # ((('u11', 'u22'), Fraction(1, 4)), ...)

"""

from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .conflict_graph import ConflictGraph, build_conflict_graph, induced_subgraph
from .graph_analysis import (DEFAULT_VERTEX_LIMIT, MissingWeightError, PerfectionVerdict, check_size,
                             check_weights, is_perfect, is_stable, max_weight_clique,
                             maximal_cliques, maximal_stable_sets)
from .rational_core import (DEFAULT_DIMENSION_LIMIT, GE, MINIMIZE, OPTIMAL, Constraint,
                            DimensionLimitError, LinearProgram, Polytope, enumerate_vertices,
                            solve_lp)
from .traffic import (PortShape, TrafficPattern, WeightVector, admissible_polytope, enhance,
                      flow_kind, pattern_with_rates, subflow_label, validate_pattern,
                      validate_structure)

# QSTAB vertex enumeration works in subflow space, one dimension per vertex.
DEFAULT_QSTAB_VERTEX_LIMIT = 13

Schedule = Tuple[Tuple[Tuple[str, ...], Fraction], ...]


class InvalidCoverError(ValueError):
    def __init__(self, message: str, vertex: Optional[str] = None,
                 verdict: Optional[PerfectionVerdict] = None) -> None:
        super().__init__(message)
        self.vertex = vertex
        self.verdict = verdict


class SpeedupResult(NamedTuple):
    value: Fraction
    schedule: Schedule = ()
    witness: Optional[TrafficPattern] = None
    # One chi_f value per enumerated polytope vertex, for class-wide results.
    vertex_values: Tuple[Fraction, ...] = ()


class ImperfectionResult(NamedTuple):
    value: Fraction
    witness: WeightVector
    schedule: Schedule
    vertex_values: Tuple[Fraction, ...]


class PerfectCover(NamedTuple):
    members: Tuple[Tuple[str, ...], ...]
    multiplicity: int
    names: Tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.members)


class CoverReport(NamedTuple):
    coverage: Dict[str, int]
    verdicts: Tuple[Optional[PerfectionVerdict], ...]
    checked: bool
    bound: Fraction


def _no_status(message: str) -> None:
    pass


class ChromaticSolver(object):
    """chi_f(G, w) for many weight vectors on one graph.

    The columns of the cover LP are the maximal stable sets of the subgraph
    induced by the positive-weight vertices; they are cached per support.
    """

    def __init__(self, g: ConflictGraph, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> None:
        check_size(g, vertex_limit)
        self.g = g
        self.vertex_limit = vertex_limit
        self._stable_sets = {}

    def stable_sets(self, support: Tuple[str, ...]) -> List[Tuple[str, ...]]:
        if support not in self._stable_sets:
            h = induced_subgraph(self.g, support)
            self._stable_sets[support] = maximal_stable_sets(h, self.vertex_limit)
        return self._stable_sets[support]

    def __call__(self, w: WeightVector) -> SpeedupResult:
        check_weights(self.g, w)
        support = tuple(v for v in self.g.vertices if w[v] > 0)
        if not support:
            return SpeedupResult(value=Fraction(0))
        columns = self.stable_sets(support)
        constraints = [
            Constraint([1 if v in s else 0 for s in columns], GE, w[v])
            for v in support
        ]
        lp = LinearProgram(objective=[1] * len(columns), constraints=constraints, sense=MINIMIZE)
        result = solve_lp(lp)
        assert result.status == OPTIMAL, result.status
        schedule = tuple((s, x) for s, x in zip(columns, result.primal) if x > 0)
        speedup = SpeedupResult(value=result.value, schedule=schedule)
        assert verify_schedule(self.g, w, speedup)
        return speedup


def fractional_chromatic(g: ConflictGraph, w: WeightVector,
                         vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> SpeedupResult:
    return ChromaticSolver(g, vertex_limit)(w)


def verify_schedule(g: ConflictGraph, w: WeightVector, result: SpeedupResult) -> bool:
    covered = {v: Fraction(0) for v in g.vertices}
    total = Fraction(0)
    for stable_set, coefficient in result.schedule:
        if coefficient < 0 or not is_stable(g, stable_set):
            return False
        for v in stable_set:
            if v not in covered:
                return False
            covered[v] += coefficient
        total += coefficient
    return total == result.value and all(covered[v] >= w[v] for v in g.vertices)


def in_stab(g: ConflictGraph, w: WeightVector, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> bool:
    return fractional_chromatic(g, w, vertex_limit).value <= 1


def in_qstab(g: ConflictGraph, w: WeightVector, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> bool:
    check_size(g, vertex_limit)
    for v in g.vertices:
        if v not in w:
            raise MissingWeightError(v)
        if w[v] < 0:
            return False
    weight, _ = max_weight_clique(g, w, vertex_limit)
    return weight <= 1


def pattern_speedup(p: TrafficPattern, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> SpeedupResult:
    """Least s with e(r) in s * STAB(G), with a witness schedule."""
    validate_pattern(p)
    g = build_conflict_graph(p.shape, p.structure)
    result = fractional_chromatic(g, enhance(p), vertex_limit)
    return result._replace(witness=p)


def _flow_weights(shape: PortShape, structure, rates) -> WeightVector:
    weights = {}
    for (input, outputs), rate in zip(structure, rates):
        kind = flow_kind(outputs, shape.N)
        for j in outputs:
            weights[subflow_label(kind, input, j, outputs)] = rate
    return weights


def _evaluate_chunk(args) -> List[SpeedupResult]:
    g, vertex_limit, weight_vectors = args
    solver = ChromaticSolver(g, vertex_limit)
    return [solver(w) for w in weight_vectors]


def _sweep(g: ConflictGraph, weight_vectors: List[WeightVector], vertex_limit: int, jobs: int,
           log_status: Callable[[str], None], what: str) -> Tuple[int, List[SpeedupResult]]:
    """chi_f for each weight vector; returns the index of the least maximizer."""
    total = len(weight_vectors)
    chunk_size = max(1, min(64, -(-total // max(1, 4 * jobs))))
    chunks = [(g, vertex_limit, weight_vectors[k:k + chunk_size]) for k in range(0, total, chunk_size)]
    results: List[SpeedupResult] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for found in executor.map(_evaluate_chunk, chunks):
                results.extend(found)
                log_status('region_speedup: %s %d/%d' % (what, len(results), total))
    else:
        for chunk in chunks:
            results.extend(_evaluate_chunk(chunk))
            log_status('region_speedup: %s %d/%d' % (what, len(results), total))
    best = 0
    for k, result in enumerate(results):
        if result.value > results[best].value:
            best = k
    return best, results


def class_min_speedup(K: int, N: int, structure: Sequence[Tuple[int, Sequence[int]]],
                      dimension_limit: int = DEFAULT_DIMENSION_LIMIT,
                      vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                      jobs: int = 1,
                      log_status: Callable[[str], None] = _no_status) -> SpeedupResult:
    """Minimum speedup for every admissible rate vector on `structure`.

    The witness is the lexicographically least admissible-polytope vertex
    attaining the maximum.
    """
    shape = PortShape(K, N)
    keys = validate_structure(shape, structure)
    polytope = admissible_polytope(shape, keys)
    if polytope.dimension > dimension_limit:
        raise DimensionLimitError('%d flows exceed the vertex enumeration limit %d' %
                                  (polytope.dimension, dimension_limit))
    g = build_conflict_graph(shape, keys)
    check_size(g, vertex_limit)
    vertices = enumerate_vertices(polytope, dimension_limit, jobs=jobs, log_status=log_status)
    log_status('region_speedup: %d admissible vertices for %d flows' % (len(vertices), len(keys)))
    weight_vectors = [_flow_weights(shape, keys, rates) for rates in vertices]
    best, results = _sweep(g, weight_vectors, vertex_limit, jobs, log_status, 'rate vertices')
    witness = pattern_with_rates(shape, keys, vertices[best])
    return SpeedupResult(value=results[best].value,
                         schedule=results[best].schedule,
                         witness=witness,
                         vertex_values=tuple(r.value for r in results))


def qstab_polytope(g: ConflictGraph, vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> Polytope:
    """Clique inequalities followed by non-negativity, one variable per vertex."""
    rows = []
    for clique in maximal_cliques(g, vertex_limit):
        rows.append(([1 if v in clique else 0 for v in g.vertices], 1))
    for k in range(len(g)):
        rows.append(([-1 if col == k else 0 for col in range(len(g))], 0))
    return Polytope.from_rows(len(g), rows)


def imperfection_ratio_exact(g: ConflictGraph,
                             qstab_vertex_limit: int = DEFAULT_QSTAB_VERTEX_LIMIT,
                             vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                             jobs: int = 1,
                             log_status: Callable[[str], None] = _no_status) -> ImperfectionResult:
    """imp(G) = max chi_f(G, w) over the vertices w of QSTAB(G).

    Subflow weights are independent here; flow-consistency ties are what
    separate this from `class_min_speedup`.
    """
    if len(g) > qstab_vertex_limit:
        raise DimensionLimitError('graph has %d vertices, above the QSTAB enumeration limit %d' %
                                  (len(g), qstab_vertex_limit))
    polytope = qstab_polytope(g, vertex_limit)
    vertices = enumerate_vertices(polytope, qstab_vertex_limit, jobs=jobs, log_status=log_status)
    log_status('region_speedup: %d QSTAB vertices' % (len(vertices), ))
    weight_vectors = [dict(zip(g.vertices, point)) for point in vertices]
    best, results = _sweep(g, weight_vectors, vertex_limit, jobs, log_status, 'QSTAB vertices')
    return ImperfectionResult(value=results[best].value,
                              witness=weight_vectors[best],
                              schedule=results[best].schedule,
                              vertex_values=tuple(r.value for r in results))


def validate_cover(g: ConflictGraph, cover: PerfectCover, check_perfection: bool = True,
                   vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                   log_status: Callable[[str], None] = _no_status) -> CoverReport:
    if cover.multiplicity < 1:
        raise InvalidCoverError('cover multiplicity must be positive, got %d' % (cover.multiplicity, ))
    coverage = {v: 0 for v in g.vertices}
    for member in cover.members:
        for v in set(induced_subgraph(g, member).vertices):
            coverage[v] += 1
    for v in g.vertices:
        if coverage[v] < cover.multiplicity:
            raise InvalidCoverError('%s is covered %d times, fewer than %d' %
                                    (v, coverage[v], cover.multiplicity), vertex=v)
    verdicts = []
    seen = {}
    for k, member in enumerate(cover.members):
        if not check_perfection:
            verdicts.append(None)
            continue
        key = frozenset(member)
        if key not in seen:
            seen[key] = is_perfect(induced_subgraph(g, member), vertex_limit)
            log_status('region_speedup: cover member %d/%d checked' % (k + 1, cover.size))
        verdict = seen[key]
        if not verdict.perfect:
            name = cover.names[k] if k < len(cover.names) else 'member %d' % (k, )
            raise InvalidCoverError('%s is not perfect: %s %s' %
                                    (name, verdict.certificate.kind, list(verdict.certificate.cycle)),
                                    verdict=verdict)
        verdicts.append(verdict)
    return CoverReport(coverage=coverage, verdicts=tuple(verdicts), checked=check_perfection,
                       bound=Fraction(cover.size, cover.multiplicity))


def cover_bound(g: ConflictGraph, cover: PerfectCover, check_perfection: bool = True,
                vertex_limit: int = DEFAULT_VERTEX_LIMIT) -> Fraction:
    """q/p for a family of q induced perfect subgraphs covering every vertex p times."""
    return validate_cover(g, cover, check_perfection, vertex_limit).bound


def restrict_cover(cover: PerfectCover, vertices) -> PerfectCover:
    """The same cover on an induced subgraph; induced subgraphs of perfect graphs stay perfect."""
    keep = set(vertices)
    members = tuple(tuple(v for v in member if v in keep) for member in cover.members)
    return cover._replace(members=members)


def schedule_to_list(schedule: Schedule) -> List[dict]:
    return [{'vertices': list(s), 'coefficient': str(x)} for s, x in schedule]
