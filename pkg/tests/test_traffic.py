from fractions import Fraction

import pytest

from multicast_speedup.traffic import (BROADCAST, MULTICAST, UNICAST, DuplicateFlowError,
                                       EmptyOutputsError, FlowKey, NegativeRateError, PatternError,
                                       PortRangeError, PortShape, RateFormatError, ShapeError,
                                       TrafficPattern, admissible_polytope, coding_benefit_pattern,
                                       dump_pattern, enhance, flow_kind, full_structure,
                                       is_admissible, load_pattern, make_flow, odd_hole_pattern,
                                       parse_pattern, pattern_with_rates, subflow_label,
                                       unicast_structure, validate_pattern,
                                       validate_structure)

ODD_HOLE_JSON = '''
{
  "K": 2, "N": 3,
  "flows": [
    {"input": 1, "outputs": [1, 2, 3], "rate": "1/2"},
    {"input": 1, "outputs": [1], "rate": "1/2"},
    {"input": 2, "outputs": [2], "rate": "1/2"},
    {"input": 2, "outputs": [3], "rate": 0.5}
  ]
}
'''


def test_flow_kind():
    assert flow_kind((2, ), 3) == UNICAST
    assert flow_kind((1, 2, 3), 3) == BROADCAST
    assert flow_kind((1, 3), 3) == MULTICAST
    assert flow_kind((1, ), 1) == UNICAST


def test_subflow_labels():
    assert subflow_label(UNICAST, 1, 1) == 'u11'
    assert subflow_label(BROADCAST, 2, 3) == 'b23'
    assert subflow_label(MULTICAST, 1, 2, (1, 2)) == 'm12[1,2]'
    assert subflow_label(UNICAST, 10, 2) == 'u10.2'


def test_odd_hole_pattern_is_tight_and_admissible(hole_pattern):
    result = is_admissible(hole_pattern)
    assert result.admissible
    assert result.input_loads == (1, 1)
    assert result.output_loads == (1, 1, 1)


def test_enhance(hole_pattern):
    weights = enhance(hole_pattern)
    assert sorted(weights) == ['b11', 'b12', 'b13', 'u11', 'u22', 'u23']
    assert set(weights.values()) == {Fraction(1, 2)}


def test_overloaded_input_is_inadmissible():
    p = pattern_with_rates(PortShape(2, 2), [(1, [1]), (1, [2])], ['2/3', '1/2'])
    result = is_admissible(p)
    assert not result.admissible
    assert result.input_loads == (Fraction(7, 6), 0)


def test_rates_above_one_are_accepted_but_inadmissible():
    p = pattern_with_rates(PortShape(1, 1), [(1, [1])], [2])
    assert not is_admissible(p).admissible


def test_validation_errors():
    shape = PortShape(2, 3)
    with pytest.raises(PortRangeError, match=r'flows\[0\]\.input'):
        validate_structure(shape, [(3, [1])])
    with pytest.raises(PortRangeError, match=r'flows\[1\]\.outputs'):
        validate_structure(shape, [(1, [1]), (1, [4])])
    with pytest.raises(EmptyOutputsError):
        validate_structure(shape, [(1, [])])
    with pytest.raises(DuplicateFlowError):
        validate_structure(shape, [(1, [2, 1]), (1, [1, 2])])
    with pytest.raises(ShapeError):
        validate_structure(PortShape(0, 3), [])
    with pytest.raises(NegativeRateError, match=r'flows\[0\]\.rate'):
        pattern_with_rates(shape, [(1, [1])], ['-1/2'])
    assert validate_structure(shape, [(1, [3, 1])]) == [FlowKey(1, (1, 3))]


def test_full_structure():
    assert full_structure(2, 2) == [
        FlowKey(1, (1, )), FlowKey(1, (2, )), FlowKey(1, (1, 2)),
        FlowKey(2, (1, )), FlowKey(2, (2, )), FlowKey(2, (1, 2)),
    ]
    assert len(full_structure(2, 5)) == 12
    assert full_structure(3, 1) == unicast_structure(3, 1)


def test_admissible_polytope_rows():
    p = admissible_polytope(PortShape(2, 3), full_structure(2, 3))
    assert p.dimension == 8
    assert len(p.inequalities) == 2 + 3 + 8
    # Output 1 carries u11, both broadcasts and u21.
    assert p.inequalities[2] == ((1, 0, 0, 1, 1, 0, 0, 1), 1)


def test_coding_benefit_pattern():
    for N in range(3, 9):
        p = coding_benefit_pattern(N)
        result = is_admissible(p)
        assert result.admissible
        assert result.input_loads == (1 - Fraction(1, N), 1)
        assert result.output_loads == (1, ) * N


def test_parse_pattern_reads_rates_exactly():
    p = parse_pattern(ODD_HOLE_JSON)
    assert p == odd_hole_pattern()
    assert parse_pattern(dump_pattern(p)) == p


def test_load_pattern(tmp_path):
    path = tmp_path / 'p.json'
    path.write_text(ODD_HOLE_JSON)
    assert load_pattern(str(path)).rates == (Fraction(1, 2), ) * 4


@pytest.mark.parametrize('text,error,message', [
    ('{"K": 1, "N": 1, "flows": [{"input": 1, "outputs": [1], "rate": "1/0"}]}',
     RateFormatError, r'flows\[0\]\.rate'),
    ('{"K": 1, "N": 1, "flows": [{"input": 1, "outputs": [1], "rate": "abc"}]}',
     RateFormatError, r'flows\[0\]\.rate'),
    ('{"K": 1, "N": 1, "flows": [{"input": 1, "outputs": [1]}]}', PatternError, 'rate'),
    ('{"K": 1, "flows": []}', PatternError, "'N'"),
    ('{"K": 1, "N": 1, "flows": [{"input": "1", "outputs": [1], "rate": 1}]}',
     PatternError, r'flows\[0\]\.input'),
    ('{"K": 1, "N": 1, "flows": [{"input": 1, "outputs": [true], "rate": 1}]}',
     PatternError, r'flows\[0\]\.outputs'),
    ('{"K": 1, "N": 1, "flows": [', PatternError, 'malformed'),
])
def test_parse_errors_name_the_field(text, error, message):
    with pytest.raises(error, match=message):
        parse_pattern(text)


def test_make_flow_normalizes_outputs():
    flow = make_flow(1, [3, 1, 3], '1/4')
    assert flow.outputs == (1, 3)
    assert flow.rate == Fraction(1, 4)
    assert TrafficPattern(PortShape(1, 3), (flow, )).structure == [FlowKey(1, (1, 3))]


def test_validate_pattern():
    shape = PortShape(2, 2)
    p = TrafficPattern(shape, (make_flow(1, [1, 2], '1/2'), make_flow(2, [2], '1/3')))
    assert validate_pattern(p) is p
    with pytest.raises(NegativeRateError, match=r'flows\[1\]\.rate'):
        validate_pattern(TrafficPattern(shape, (make_flow(1, [1]), make_flow(2, [1], -1))))
    with pytest.raises(PortRangeError):
        validate_pattern(TrafficPattern(shape, (make_flow(3, [1], '1/2'), )))
    with pytest.raises(DuplicateFlowError):
        validate_pattern(TrafficPattern(shape, (make_flow(1, [2, 1]), make_flow(1, [1, 2]))))


def random_pattern(rng):
    K, N = rng.randint(1, 3), rng.randint(1, 3)
    structure = set()
    for _ in range(rng.randint(1, 5)):
        outputs = tuple(sorted(rng.sample(range(1, N + 1), rng.randint(1, N))))
        structure.add((rng.randint(1, K), outputs))
    structure = sorted(structure)
    rates = [Fraction(rng.randint(0, 4), rng.randint(1, 5)) for _ in structure]
    return pattern_with_rates(PortShape(K, N), structure, rates)


def test_admissibility_matches_polytope_membership(rng):
    admissible = 0
    for _ in range(200):
        p = random_pattern(rng)
        verdict = is_admissible(p).admissible
        assert admissible_polytope(p.shape, p.structure).contains(p.rates) == verdict
        admissible += verdict
    assert 0 < admissible < 200


def test_enhance_scales_with_rates(rng):
    for _ in range(50):
        p = random_pattern(rng)
        alpha = Fraction(rng.randint(0, 5), rng.randint(1, 5))
        scaled = pattern_with_rates(p.shape, p.structure, [alpha * r for r in p.rates])
        weights = enhance(p)
        assert enhance(scaled) == {v: alpha * x for v, x in weights.items()}
