"""Traffic patterns on a K x N switch.

A flow is a stream from one input to a set of outputs, written (i, J) with
1-indexed ports. Each flow splits into one subflow per destination output.
The canonical on-disk format is JSON with exact rates:

    {
        "K": 2, "N": 3,
        "flows": [
            {"input": 1, "outputs": [1, 2, 3], "rate": "1/2"},
            {"input": 1, "outputs": [1], "rate": "1/2"},
            {"input": 2, "outputs": [2], "rate": "1/2"},
            {"input": 2, "outputs": [3], "rate": "1/2"}
        ]
    }

Rates are strings parsed as fractions; integers and decimal literals are
accepted too and are read exactly, never through a float.

Example usage:

    pattern = load_pattern('data/odd_hole_pattern.json')
    loads = is_admissible(pattern)
    weights = enhance(pattern)   # {'u11': Fraction(1, 2), 'b11': ..., ...}

"""

from typing import Dict, List, NamedTuple, Sequence, Tuple
from fractions import Fraction
import json

from .rational_core import Polytope, format_rational, to_rational

UNICAST = 'u'
MULTICAST = 'm'
BROADCAST = 'b'
KIND_ORDER = {UNICAST: 0, MULTICAST: 1, BROADCAST: 2}

WeightVector = Dict[str, Fraction]


class PatternError(ValueError):
    pass


class ShapeError(PatternError):
    pass


class PortRangeError(PatternError):
    pass


class EmptyOutputsError(PatternError):
    pass


class DuplicateFlowError(PatternError):
    pass


class NegativeRateError(PatternError):
    pass


class RateFormatError(PatternError):
    pass


class PortShape(NamedTuple):
    K: int
    N: int


class FlowKey(NamedTuple):
    input: int
    outputs: Tuple[int, ...]


class Flow(NamedTuple):
    input: int
    outputs: Tuple[int, ...]
    rate: Fraction

    @property
    def key(self) -> FlowKey:
        return FlowKey(self.input, self.outputs)


class TrafficPattern(NamedTuple):
    shape: PortShape
    flows: Tuple[Flow, ...]

    @property
    def structure(self) -> List[FlowKey]:
        return [flow.key for flow in self.flows]

    @property
    def rates(self) -> Tuple[Fraction, ...]:
        return tuple(flow.rate for flow in self.flows)


class Admissibility(NamedTuple):
    admissible: bool
    input_loads: Tuple[Fraction, ...]
    output_loads: Tuple[Fraction, ...]


def flow_kind(outputs: Sequence[int], N: int) -> str:
    if len(outputs) == 1:
        return UNICAST
    if tuple(outputs) == tuple(range(1, N + 1)):
        return BROADCAST
    return MULTICAST


def make_flow(input: int, outputs: Sequence[int], rate=0) -> Flow:
    return Flow(input=input, outputs=tuple(sorted(set(outputs))), rate=to_rational(rate))


def validate_shape(shape: PortShape) -> PortShape:
    if shape.K < 1 or shape.N < 1:
        raise ShapeError('switch shape must have K >= 1 and N >= 1, got %dx%d' % (shape.K, shape.N))
    return shape


def validate_structure(shape: PortShape, structure: Sequence[Tuple[int, Sequence[int]]],
                       allow_duplicates: bool = False) -> List[FlowKey]:
    validate_shape(shape)
    keys = []
    seen = set()
    for index, (input, outputs) in enumerate(structure):
        if not 1 <= input <= shape.K:
            raise PortRangeError('flows[%d].input: %d is outside [1, %d]' % (index, input, shape.K))
        if len(outputs) == 0:
            raise EmptyOutputsError('flows[%d].outputs: destination set is empty' % (index, ))
        for j in outputs:
            if not 1 <= j <= shape.N:
                raise PortRangeError('flows[%d].outputs: %d is outside [1, %d]' % (index, j, shape.N))
        key = FlowKey(input, tuple(sorted(set(outputs))))
        if key in seen and not allow_duplicates:
            raise DuplicateFlowError('flows[%d]: duplicate flow from input %d to %s' %
                                     (index, input, list(key.outputs)))
        seen.add(key)
        keys.append(key)
    return keys


def validate_pattern(p: TrafficPattern) -> TrafficPattern:
    validate_structure(p.shape, p.structure)
    for index, flow in enumerate(p.flows):
        if flow.rate < 0:
            raise NegativeRateError('flows[%d].rate: %s is negative' % (index, format_rational(flow.rate)))
    return p


def input_loads(p: TrafficPattern) -> Tuple[Fraction, ...]:
    loads = [Fraction(0)] * p.shape.K
    for flow in p.flows:
        loads[flow.input - 1] += flow.rate
    return tuple(loads)


def output_loads(p: TrafficPattern) -> Tuple[Fraction, ...]:
    loads = [Fraction(0)] * p.shape.N
    for flow in p.flows:
        for j in flow.outputs:
            loads[j - 1] += flow.rate
    return tuple(loads)


def is_admissible(p: TrafficPattern) -> Admissibility:
    validate_pattern(p)
    ins = input_loads(p)
    outs = output_loads(p)
    admissible = all(load <= 1 for load in ins) and all(load <= 1 for load in outs)
    return Admissibility(admissible=admissible, input_loads=ins, output_loads=outs)


def subflow_label(kind: str, input: int, output: int, outputs: Sequence[int] = ()) -> str:
    ports = '%d%d' % (input, output) if input < 10 and output < 10 else '%d.%d' % (input, output)
    if kind == MULTICAST:
        return '%s%s[%s]' % (kind, ports, ','.join(str(j) for j in outputs))
    return kind + ports


def enhance(p: TrafficPattern) -> WeightVector:
    """The enhanced rate vector: every subflow (i, J, j) weighs the rate of (i, J)."""
    validate_pattern(p)
    weights = {}
    for flow in p.flows:
        kind = flow_kind(flow.outputs, p.shape.N)
        for j in flow.outputs:
            weights[subflow_label(kind, flow.input, j, flow.outputs)] = flow.rate
    return weights


def admissible_polytope(shape: PortShape, structure: Sequence[Tuple[int, Sequence[int]]]) -> Polytope:
    """Flow-rate space: K input-load rows, then N output-load rows, then r >= 0."""
    keys = validate_structure(shape, structure)
    f = len(keys)
    rows = []
    for i in range(1, shape.K + 1):
        rows.append(([1 if key.input == i else 0 for key in keys], 1))
    for j in range(1, shape.N + 1):
        rows.append(([1 if j in key.outputs else 0 for key in keys], 1))
    for k in range(f):
        rows.append(([-1 if col == k else 0 for col in range(f)], 0))
    return Polytope.from_rows(f, rows)


def full_structure(K: int, N: int) -> List[FlowKey]:
    """Every unicast plus one broadcast per input, unicasts first at each input.

    With N = 1 the broadcast is the unicast to the only output, so it is not
    repeated.
    """
    validate_shape(PortShape(K, N))
    structure = []
    for i in range(1, K + 1):
        for j in range(1, N + 1):
            structure.append(FlowKey(i, (j, )))
        if N > 1:
            structure.append(FlowKey(i, tuple(range(1, N + 1))))
    return structure


def unicast_structure(K: int, N: int) -> List[FlowKey]:
    return [FlowKey(i, (j, )) for i in range(1, K + 1) for j in range(1, N + 1)]


def pattern_with_rates(shape: PortShape, structure, rates: Sequence) -> TrafficPattern:
    keys = validate_structure(shape, structure)
    if len(rates) != len(keys):
        raise PatternError('%d rates for %d flows' % (len(rates), len(keys)))
    flows = tuple(Flow(key.input, key.outputs, to_rational(r)) for key, r in zip(keys, rates))
    return validate_pattern(TrafficPattern(shape=shape, flows=flows))


def coding_benefit_pattern(N: int) -> TrafficPattern:
    """Input 1 broadcasts at 1 - 1/N; input 2 sends a 1/N unicast to every output."""
    flows = [make_flow(1, range(1, N + 1), 1 - Fraction(1, N))]
    flows += [make_flow(2, [j], Fraction(1, N)) for j in range(1, N + 1)]
    return validate_pattern(TrafficPattern(shape=PortShape(2, N), flows=tuple(flows)))


def odd_hole_pattern() -> TrafficPattern:
    """2x3 pattern whose conflict graph contains a 5-hole; it needs speedup 5/4."""
    half = Fraction(1, 2)
    flows = (
        make_flow(1, [1, 2, 3], half),
        make_flow(1, [1], half),
        make_flow(2, [2], half),
        make_flow(2, [3], half),
    )
    return validate_pattern(TrafficPattern(shape=PortShape(2, 3), flows=flows))


def _parse_rate(value, field: str) -> Fraction:
    if isinstance(value, bool):
        raise RateFormatError('%s: invalid rate %r' % (field, value))
    try:
        return to_rational(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise RateFormatError('%s: invalid rate %r' % (field, value))


def _require(mapping, key: str, field: str, kind):
    if not isinstance(mapping, dict) or key not in mapping:
        raise PatternError('%s: missing field %r' % (field, key))
    value = mapping[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise PatternError('%s.%s: expected %s, got %r' % (field, key, kind.__name__, value))
    return value


def pattern_from_dict(data) -> TrafficPattern:
    K = _require(data, 'K', 'pattern', int)
    N = _require(data, 'N', 'pattern', int)
    flows = []
    for index, entry in enumerate(_require(data, 'flows', 'pattern', list)):
        field = 'flows[%d]' % (index, )
        input = _require(entry, 'input', field, int)
        outputs = _require(entry, 'outputs', field, list)
        for j in outputs:
            if not isinstance(j, int) or isinstance(j, bool):
                raise PatternError('%s.outputs: expected integers, got %r' % (field, j))
        if 'rate' not in entry:
            raise PatternError('%s: missing field %r' % (field, 'rate'))
        rate = _parse_rate(entry['rate'], field + '.rate')
        flows.append(Flow(input=input, outputs=tuple(sorted(set(outputs))), rate=rate))
    return validate_pattern(TrafficPattern(shape=PortShape(K, N), flows=tuple(flows)))


def parse_pattern(text: str) -> TrafficPattern:
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise PatternError('pattern: malformed JSON: %s' % (e, ))
    return pattern_from_dict(data)


def load_pattern(filename: str) -> TrafficPattern:
    with open(filename) as f:
        return parse_pattern(f.read())


def pattern_to_dict(p: TrafficPattern) -> dict:
    return {
        'K': p.shape.K,
        'N': p.shape.N,
        'flows': [{
            'input': flow.input,
            'outputs': list(flow.outputs),
            'rate': format_rational(flow.rate),
        } for flow in p.flows],
    }


def dump_pattern(p: TrafficPattern) -> str:
    return json.dumps(pattern_to_dict(p), indent=2)
