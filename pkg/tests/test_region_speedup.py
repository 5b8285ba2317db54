from fractions import Fraction

import pytest

from multicast_speedup.conflict_graph import (ConflictGraph, build_kn_graph,
                                              induced_subgraph)
from multicast_speedup.graph_analysis import (ODD_HOLE, MissingWeightError, SizeLimitError, is_stable,
                                              max_weight_clique)
from multicast_speedup.kn_bounds import GI, GO1, GO2, GU, input_cover, named_subgraph, output_cover
from multicast_speedup.rational_core import DimensionLimitError, enumerate_vertices
from multicast_speedup.region_speedup import (ChromaticSolver, InvalidCoverError, PerfectCover,
                                              SpeedupResult, class_min_speedup, cover_bound,
                                              fractional_chromatic, imperfection_ratio_exact,
                                              in_qstab, in_stab, pattern_speedup, restrict_cover,
                                              validate_cover, verify_schedule)
from multicast_speedup.traffic import (PortShape, TrafficPattern, admissible_polytope,
                                       coding_benefit_pattern, enhance,
                                       full_structure, is_admissible, make_flow,
                                       pattern_with_rates, unicast_structure)


def uniform(g, value):
    return {v: Fraction(value) for v in g.vertices}


def random_weights(g, rng, scale_to_qstab=False):
    w = {v: Fraction(rng.randint(0, 6), rng.randint(1, 6)) for v in g.vertices}
    if scale_to_qstab:
        heaviest, _ = max_weight_clique(g, w)
        if heaviest > 0:
            w = {v: x / heaviest for v, x in w.items()}
    return w


def test_odd_hole_fractional_chromatic(hole_graph, hole_pattern):
    result = fractional_chromatic(hole_graph, enhance(hole_pattern))
    assert result.value == Fraction(5, 4)
    assert sum(x for _, x in result.schedule) == Fraction(5, 4)
    assert verify_schedule(hole_graph, enhance(hole_pattern), result)
    for stable_set, coefficient in result.schedule:
        assert coefficient > 0
        assert is_stable(hole_graph, stable_set)


def test_documented_odd_hole_schedule_is_feasible(hole_graph, hole_pattern):
    quarter = Fraction(1, 4)
    schedule = tuple((s, quarter) for s in [('u11', 'u22'), ('u11', 'u23'), ('b11', 'b12', 'u23'),
                                            ('b11', 'b13', 'u22'), ('b11', 'b12', 'b13')])
    result = SpeedupResult(value=Fraction(5, 4), schedule=schedule)
    assert verify_schedule(hole_graph, enhance(hole_pattern), result)


def test_zero_weights(kn23):
    result = fractional_chromatic(kn23, uniform(kn23, 0))
    assert result.value == 0
    assert result.schedule == ()


def test_c5_unit_weights(c5):
    assert fractional_chromatic(c5, uniform(c5, 1)).value == Fraction(5, 2)


def test_in_stab(c5):
    assert in_stab(c5, uniform(c5, Fraction(2, 5)))
    assert not in_stab(c5, uniform(c5, Fraction(1, 2)))
    assert in_stab(c5, uniform(c5, 0))


def test_in_qstab(c5, hole_graph, hole_pattern):
    assert in_qstab(c5, uniform(c5, Fraction(1, 2)))
    assert in_qstab(hole_graph, enhance(hole_pattern))
    w = uniform(c5, 0)
    w['c3'] = Fraction(2)
    assert not in_qstab(c5, w)


def test_verify_schedule_rejects_bad_schedules(c5):
    w = uniform(c5, Fraction(1, 2))
    good = fractional_chromatic(c5, w)
    assert verify_schedule(c5, w, good)
    assert not verify_schedule(c5, w, good._replace(value=good.value + 1))
    assert not verify_schedule(c5, w, good._replace(schedule=good.schedule[1:]))
    assert not verify_schedule(c5, w, SpeedupResult(Fraction(1), ((('c0', 'c1'), Fraction(1)), )))


def test_size_limit(kn23):
    with pytest.raises(SizeLimitError):
        fractional_chromatic(kn23, uniform(kn23, 0), vertex_limit=8)


def test_pattern_speedup(hole_pattern):
    result = pattern_speedup(hole_pattern)
    assert result.value == Fraction(5, 4)
    assert result.witness == hole_pattern


@pytest.mark.parametrize('N', range(3, 9))
def test_coding_achieves_full_throughput(N):
    assert pattern_speedup(coding_benefit_pattern(N)).value == 1


def test_zero_and_empty_patterns():
    p = pattern_with_rates(PortShape(2, 3), full_structure(2, 3), [0] * 8)
    assert pattern_speedup(p).value == 0
    assert pattern_speedup(TrafficPattern(PortShape(2, 2), ())).value == 0


def test_multicast_subset_pattern():
    # Input 1 multicasts to outputs 1 and 2 at rate 1; no speedup is needed.
    p = TrafficPattern(PortShape(2, 3), (make_flow(1, [1, 2], 1), make_flow(2, [3], 1)))
    assert pattern_speedup(p).value == 1


def test_class_speedup_2x3():
    messages = []
    result = class_min_speedup(2, 3, full_structure(2, 3), log_status=messages.append)
    assert result.value == Fraction(5, 4)
    assert max(result.vertex_values) == Fraction(5, 4)
    assert pattern_speedup(result.witness).value == Fraction(5, 4)
    assert is_admissible(result.witness).admissible
    assert any(m.startswith('region_speedup: rate vertices') for m in messages)
    # The witness is the least maximizing vertex of the admissible polytope.
    vertices = enumerate_vertices(admissible_polytope(PortShape(2, 3), full_structure(2, 3)))
    assert len(result.vertex_values) == len(vertices)
    assert result.witness.rates == vertices[result.vertex_values.index(Fraction(5, 4))]


@pytest.mark.slow
def test_class_speedup_2x4():
    assert class_min_speedup(2, 4, full_structure(2, 4), jobs=2).value == Fraction(5, 4)


@pytest.mark.parametrize('K,N', [(1, 3), (2, 2), (2, 3), (3, 3)])
def test_unicast_class_needs_no_speedup(K, N):
    assert class_min_speedup(K, N, unicast_structure(K, N)).value == 1


def test_class_sweep_is_independent_of_jobs():
    serial = class_min_speedup(2, 2, full_structure(2, 2))
    parallel = class_min_speedup(2, 2, full_structure(2, 2), jobs=2)
    assert serial == parallel


def test_class_dimension_limit():
    with pytest.raises(DimensionLimitError):
        class_min_speedup(2, 3, full_structure(2, 3), dimension_limit=7)


def test_imperfection_ratio_perfect_graph():
    g = build_kn_graph(2, 2)
    gu = induced_subgraph(g, [v for v in g.vertices if v.startswith('u')])
    assert imperfection_ratio_exact(gu).value == 1


def test_imperfection_ratio_c5(c5):
    result = imperfection_ratio_exact(c5)
    assert result.value == Fraction(5, 4)
    assert result.witness == uniform(c5, Fraction(1, 2))
    assert in_qstab(c5, result.witness)


def test_imperfection_ratio_odd_hole(hole_graph, hole_pattern):
    result = imperfection_ratio_exact(hole_graph)
    assert result.value == Fraction(5, 4)
    assert result.value >= pattern_speedup(hole_pattern).value
    assert fractional_chromatic(hole_graph, result.witness).value == Fraction(5, 4)


def test_imperfection_ratio_limit(kn23):
    with pytest.raises(DimensionLimitError):
        imperfection_ratio_exact(kn23, qstab_vertex_limit=11)


def test_cover_bounds_kn23(kn23):
    assert cover_bound(kn23, input_cover(2, 3)) == Fraction(3, 2)
    assert cover_bound(kn23, output_cover(2, 3)) == Fraction(3, 2)


def test_cover_with_odd_hole_member(c5):
    cover = PerfectCover(members=(c5.vertices, ), multiplicity=1, names=('C5', ))
    with pytest.raises(InvalidCoverError) as excinfo:
        cover_bound(c5, cover)
    assert excinfo.value.verdict.certificate.kind == ODD_HOLE
    assert 'C5 is not perfect' in str(excinfo.value)
    assert cover_bound(c5, cover, check_perfection=False) == 1


def test_under_covered_vertex(c5):
    cover = PerfectCover(members=(('c0', 'c1'), ('c2', 'c3')), multiplicity=1)
    with pytest.raises(InvalidCoverError) as excinfo:
        validate_cover(c5, cover)
    assert excinfo.value.vertex == 'c4'


def test_restricted_cover_bounds_odd_hole(hole_graph):
    cover = restrict_cover(input_cover(2, 3), hole_graph.vertices)
    report = validate_cover(hole_graph, cover)
    assert report.bound == Fraction(3, 2)
    assert set(report.coverage.values()) == {2}
    assert all(v.perfect for v in report.verdicts)


def test_schedule_feasibility_random(rng, kn23):
    solver = ChromaticSolver(kn23)
    for _ in range(20):
        w = random_weights(kn23, rng)
        result = solver(w)
        assert verify_schedule(kn23, w, result)
        assert result.value >= max_weight_clique(kn23, w)[0]


def test_monotonicity(rng, hole_graph):
    for _ in range(20):
        w = random_weights(hole_graph, rng)
        bigger = {v: x + Fraction(rng.randint(0, 2), 3) for v, x in w.items()}
        assert fractional_chromatic(hole_graph, w).value <= fractional_chromatic(hole_graph, bigger).value


def test_convexity(rng, hole_graph):
    for _ in range(20):
        w1 = random_weights(hole_graph, rng, scale_to_qstab=True)
        w2 = random_weights(hole_graph, rng, scale_to_qstab=True)
        alpha = Fraction(rng.randint(1, 9), 10)
        mixed = {v: alpha * w1[v] + (1 - alpha) * w2[v] for v in hole_graph.vertices}
        chi1 = fractional_chromatic(hole_graph, w1).value
        chi2 = fractional_chromatic(hole_graph, w2).value
        assert fractional_chromatic(hole_graph, mixed).value <= alpha * chi1 + (1 - alpha) * chi2


NAMED_SUBGRAPHS = [(K, N, GU, None) for K, N in [(2, 2), (2, 3), (3, 2), (3, 3)]] + [
    (K, N, kind, index)
    for K, N in [(2, 2), (2, 3), (3, 2), (3, 3)]
    for kind, limit in [(GI, K), (GO1, N), (GO2, N)]
    for index in range(1, limit + 1)
]


@pytest.mark.parametrize('K,N,kind,index', NAMED_SUBGRAPHS)
def test_perfect_graphs_meet_the_clique_bound(rng, K, N, kind, index):
    h = named_subgraph(K, N, kind, index)
    solver = ChromaticSolver(h)
    for _ in range(10):
        w = random_weights(h, rng)
        assert solver(w).value == max_weight_clique(h, w)[0]


def test_solver_caches_stable_sets(hole_graph, hole_pattern):
    solver = ChromaticSolver(hole_graph)
    w = enhance(hole_pattern)
    first = solver(w)
    assert solver(w) == first
    assert len(solver._stable_sets) == 1


def test_missing_and_negative_weights(c5):
    with pytest.raises(MissingWeightError):
        fractional_chromatic(c5, {'c0': Fraction(1)})
    with pytest.raises(MissingWeightError):
        in_qstab(c5, {'c0': Fraction(1)})
    w = uniform(c5, 0)
    w['c1'] = Fraction(-1)
    with pytest.raises(ValueError):
        fractional_chromatic(c5, w)
    assert not in_qstab(c5, w)


def test_empty_graph():
    assert fractional_chromatic(ConflictGraph([], []), {}).value == 0
