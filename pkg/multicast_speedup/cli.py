"""Command-line front end.

Every subcommand prints one JSON report:

    {"command": ..., "inputs_digest": <sha256>, "payload": {...}, "wall_time": ...}

Exact values are always "p/q" strings. `--stable-output` drops the wall time
so identical inputs give byte-identical output. The exit code is 0 for success
or an affirmative verdict, 1 for a negative verdict (an imperfect graph, a
conjecture sweep that misses 5/4) and 2 for usage, parse and limit errors.

Example usage:

    multicast-speedup speedup data/odd_hole_pattern.json
    multicast-speedup perfect data/odd_hole_pattern.json --stable-output
    multicast-speedup verify-conjecture --K 2 --N 4 --jobs 4 -v
    multicast-speedup bounds --K 3 --N 2 --grid

Commands can also be run from Python through `load`, the way the example
script does:

    command = load(dict(command='speedup', pattern_file='data/odd_hole_pattern.json'),
                   log_status=print)
    report, exit_code = command.run()

"""

from typing import Callable, List, NamedTuple, Optional, Tuple
import argparse
import hashlib
import json
import logging
import os
import sys
import time
from fractions import Fraction

from .conflict_graph import (ConflictGraph, build_conflict_graph, build_kn_graph, export_dot,
                             export_json, graph_from_dict, graph_to_dict)
from .graph_analysis import DEFAULT_VERTEX_LIMIT, is_perfect, verdict_to_dict
from .kn_bounds import (bounds_table, cover_to_dict, input_cover, kn_speedup_bound, output_cover,
                        validated_bound)
from .rational_core import DEFAULT_DIMENSION_LIMIT, LimitError, format_rational
from .region_speedup import (DEFAULT_QSTAB_VERTEX_LIMIT, class_min_speedup, imperfection_ratio_exact,
                             pattern_speedup, schedule_to_list)
from .report import SweepTable, frame_to_records
from .traffic import full_structure, pattern_from_dict, pattern_to_dict

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

CONJECTURED_SPEEDUP = Fraction(5, 4)
# 2 x N sweeps from this many outputs on take hours.
LONG_RUN_OUTPUTS = 5

logger = logging.getLogger('multicast_speedup')


class LongRunRefusedError(LimitError):
    pass


class RunReport(NamedTuple):
    command: str
    inputs_digest: str
    payload: dict
    wall_time: Optional[float] = None

    def to_dict(self) -> dict:
        result = {
            'command': self.command,
            'inputs_digest': self.inputs_digest,
            'payload': self.payload,
        }
        if self.wall_time is not None:
            result['wall_time'] = round(self.wall_time, 3)
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'


def _no_status(message: str) -> None:
    pass


def _read_json(filename: str):
    with open(filename) as f:
        text = f.read()
    return text, json.loads(text, parse_float=Fraction)


def _graph_from_input(data) -> Tuple[ConflictGraph, str]:
    """Accepts either a graph JSON document or a traffic pattern."""
    if isinstance(data, dict) and 'vertices' in data:
        return graph_from_dict(data), 'graph'
    p = pattern_from_dict(data)
    return build_conflict_graph(p.shape, p.structure), 'pattern'


def _speedup_payload(result) -> dict:
    payload = {
        'value': format_rational(result.value),
        'schedule': schedule_to_list(result.schedule),
    }
    if result.witness is not None:
        payload['witness'] = pattern_to_dict(result.witness)
    return payload


class Config(object):
    def __init__(self,
                 vertex_limit: int = DEFAULT_VERTEX_LIMIT,
                 dimension_limit: int = DEFAULT_DIMENSION_LIMIT,
                 jobs: int = 1,
                 stable_output: bool = False,
                 **kwargs):
        super().__init__(**kwargs)
        self.vertex_limit = vertex_limit
        self.dimension_limit = dimension_limit
        self.jobs = jobs
        self.stable_output = stable_output


class Command(object):
    def __init__(self, log_status: Callable[[str], None] = _no_status) -> None:
        self.log_status = log_status
        self._inputs = {}

    @property
    def name(self) -> str:
        raise NotImplementedError

    def record_input(self, key: str, value) -> None:
        self._inputs[key] = value

    def read_input(self, filename: str):
        self.log_status('%s: reading %s' % (self.name, filename))
        text, data = _read_json(filename)
        self.record_input(os.path.basename(filename), hashlib.sha256(text.encode('utf-8')).hexdigest())
        return data

    def execute(self) -> Tuple[dict, int]:
        raise NotImplementedError

    def run(self) -> Tuple[RunReport, int]:
        start = time.monotonic()
        payload, exit_code = self.execute()
        digest = hashlib.sha256(json.dumps({'command': self.name, 'inputs': self._inputs},
                                           sort_keys=True).encode('utf-8')).hexdigest()
        wall_time = None if self.stable_output else time.monotonic() - start
        return RunReport(self.name, digest, payload, wall_time), exit_code


class BuildCommand(Config, Command):
    def __init__(self, pattern_file: str, dot_file: Optional[str] = None,
                 json_file: Optional[str] = None, **kwargs) -> None:
        super().__init__(**kwargs)
        self.pattern_file = pattern_file
        self.dot_file = dot_file
        self.json_file = json_file

    @property
    def name(self):
        return 'build'

    def execute(self):
        p = pattern_from_dict(self.read_input(self.pattern_file))
        g = build_conflict_graph(p.shape, p.structure)
        if self.dot_file:
            self.log_status('build: writing %s' % (self.dot_file, ))
            with open(self.dot_file, 'w') as f:
                f.write(export_dot(g))
        if self.json_file:
            self.log_status('build: writing %s' % (self.json_file, ))
            with open(self.json_file, 'w') as f:
                f.write(export_json(g))
        return {'graph': graph_to_dict(g)}, EXIT_OK


class PerfectCommand(Config, Command):
    def __init__(self, input_file: str, **kwargs) -> None:
        super().__init__(**kwargs)
        self.input_file = input_file

    @property
    def name(self):
        return 'perfect'

    def execute(self):
        g, source = _graph_from_input(self.read_input(self.input_file))
        self.record_input('vertex_limit', self.vertex_limit)
        verdict = is_perfect(g, self.vertex_limit)
        payload = verdict_to_dict(verdict)
        payload['vertices'] = len(g)
        payload['source'] = source
        return payload, EXIT_OK if verdict.perfect else EXIT_NEGATIVE


class SpeedupCommand(Config, Command):
    def __init__(self, pattern_file: str, **kwargs) -> None:
        super().__init__(**kwargs)
        self.pattern_file = pattern_file

    @property
    def name(self):
        return 'speedup'

    def execute(self):
        p = pattern_from_dict(self.read_input(self.pattern_file))
        result = pattern_speedup(p, self.vertex_limit)
        return _speedup_payload(result), EXIT_OK


class ImpCommand(Config, Command):
    def __init__(self, input_file: str, qstab_vertex_limit: int = DEFAULT_QSTAB_VERTEX_LIMIT,
                 **kwargs) -> None:
        super().__init__(**kwargs)
        self.input_file = input_file
        self.qstab_vertex_limit = qstab_vertex_limit

    @property
    def name(self):
        return 'imp'

    def execute(self):
        g, source = _graph_from_input(self.read_input(self.input_file))
        self.record_input('qstab_vertex_limit', self.qstab_vertex_limit)
        result = imperfection_ratio_exact(g, qstab_vertex_limit=self.qstab_vertex_limit,
                                          vertex_limit=self.vertex_limit, jobs=self.jobs,
                                          log_status=self.log_status)
        payload = {
            'value': format_rational(result.value),
            'witness': {v: format_rational(x) for v, x in result.witness.items()},
            'schedule': schedule_to_list(result.schedule),
            'sweep': SweepTable(result.vertex_values).summary(),
            'source': source,
        }
        return payload, EXIT_OK


class BoundsCommand(Config, Command):
    def __init__(self, K: int, N: int, grid: bool = False, **kwargs) -> None:
        super().__init__(**kwargs)
        self.K = K
        self.N = N
        self.grid = grid

    @property
    def name(self):
        return 'bounds'

    def execute(self):
        self.record_input('K', self.K)
        self.record_input('N', self.N)
        report = validated_bound(self.K, self.N, vertex_limit=self.vertex_limit,
                                 log_status=self.log_status)
        payload = {
            'K': self.K,
            'N': self.N,
            'bound': format_rational(report.bound),
            'closed_form': format_rational(kn_speedup_bound(self.K, self.N)),
            'perfection': 'checked' if report.checked else 'trusted',
            'input_cover': cover_to_dict(input_cover(self.K, self.N)),
            'output_cover': cover_to_dict(output_cover(self.K, self.N)),
            'input_coverage': sorted(set(report.input_report.coverage.values())),
            'output_coverage': sorted(set(report.output_report.coverage.values())),
        }
        if self.grid:
            payload['grid'] = frame_to_records(bounds_table(self.K, self.N))
        return payload, EXIT_OK


class VerifyConjectureCommand(Config, Command):
    def __init__(self, K: int = 2, N: int = 3, allow_long: bool = False, **kwargs) -> None:
        super().__init__(**kwargs)
        self.K = K
        self.N = N
        self.allow_long = allow_long

    @property
    def name(self):
        return 'verify-conjecture'

    def execute(self):
        self.record_input('K', self.K)
        self.record_input('N', self.N)
        if self.N >= LONG_RUN_OUTPUTS and not self.allow_long:
            raise LongRunRefusedError('a %dx%d sweep runs for hours; pass --allow-long to start it' %
                                      (self.K, self.N))
        structure = full_structure(self.K, self.N)
        self.log_status('verify-conjecture: sweeping %d flows on a %dx%d switch' %
                        (len(structure), self.K, self.N))
        result = class_min_speedup(self.K, self.N, structure,
                                   dimension_limit=self.dimension_limit,
                                   vertex_limit=self.vertex_limit,
                                   jobs=self.jobs, log_status=self.log_status)
        payload = _speedup_payload(result)
        payload['conjectured'] = format_rational(CONJECTURED_SPEEDUP)
        payload['confirmed'] = result.value == CONJECTURED_SPEEDUP
        payload['sweep'] = SweepTable(result.vertex_values).summary()
        return payload, EXIT_OK if result.value == CONJECTURED_SPEEDUP else EXIT_NEGATIVE


class ExportCommand(Config, Command):
    def __init__(self, pattern_file: Optional[str] = None, K: Optional[int] = None,
                 N: Optional[int] = None, output_format: str = 'json',
                 out_file: Optional[str] = None, **kwargs) -> None:
        super().__init__(**kwargs)
        self.pattern_file = pattern_file
        self.K = K
        self.N = N
        self.output_format = output_format
        self.out_file = out_file

    @property
    def name(self):
        return 'export'

    def execute(self):
        if self.pattern_file is not None:
            p = pattern_from_dict(self.read_input(self.pattern_file))
            g = build_conflict_graph(p.shape, p.structure)
        elif self.K is not None and self.N is not None:
            self.record_input('K', self.K)
            self.record_input('N', self.N)
            g = build_kn_graph(self.K, self.N)
        else:
            raise ValueError('export: give a pattern file or both --K and --N')
        text = export_dot(g) if self.output_format == 'dot' else export_json(g)
        if self.out_file:
            self.log_status('export: writing %s' % (self.out_file, ))
            with open(self.out_file, 'w') as f:
                f.write(text)
        return {'format': self.output_format, 'vertices': len(g),
                'edges': g.number_of_edges(), 'text': text}, EXIT_OK


COMMANDS = {
    'build': BuildCommand,
    'perfect': PerfectCommand,
    'speedup': SpeedupCommand,
    'imp': ImpCommand,
    'bounds': BoundsCommand,
    'verify-conjecture': VerifyConjectureCommand,
    'export': ExportCommand,
}


def load(spec, log_status):
    spec = dict(spec)
    command = spec.pop('command')
    if command not in COMMANDS:
        raise ValueError('unknown command %r' % (command, ))
    return COMMANDS[command](log_status=log_status, **spec)


def _add_limits(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--limit', dest='vertex_limit', type=int, default=DEFAULT_VERTEX_LIMIT,
                        help='largest graph the exponential searches accept (default: %(default)s)')
    parser.add_argument('--stable-output', action='store_true',
                        help='omit the wall time so reports are byte-identical across runs')
    parser.add_argument('--out', help='write the report here instead of stdout')
    parser.add_argument('-v', '--verbose', action='store_true', help='log progress at DEBUG level')


def _add_sweep(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--jobs', type=int, default=1, help='worker processes for vertex sweeps')


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='multicast-speedup',
        description='Exact speedup analysis of multicast switches with intra-flow network coding.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    p = subparsers.add_parser('build', help='build the conflict graph of a traffic pattern')
    p.add_argument('pattern_file')
    p.add_argument('--dot', dest='dot_file', help='also write the graph as DOT')
    p.add_argument('--json', dest='json_file', help='also write the graph as JSON')
    _add_limits(p)

    p = subparsers.add_parser('perfect', help='test a graph or pattern for perfection')
    p.add_argument('input_file', help='traffic pattern or graph JSON')
    _add_limits(p)

    p = subparsers.add_parser('speedup', help='minimum speedup of one traffic pattern')
    p.add_argument('pattern_file')
    _add_limits(p)

    p = subparsers.add_parser('imp', help='exact imperfection ratio of a small graph')
    p.add_argument('input_file', help='traffic pattern or graph JSON')
    p.add_argument('--dimension-limit', dest='qstab_vertex_limit', type=int,
                   default=DEFAULT_QSTAB_VERTEX_LIMIT,
                   help='largest graph whose QSTAB vertices are enumerated (default: %(default)s)')
    _add_limits(p)
    _add_sweep(p)

    p = subparsers.add_parser('bounds', help='validated cover bounds for the K x N switch')
    p.add_argument('--K', type=int, required=True)
    p.add_argument('--N', type=int, required=True)
    p.add_argument('--grid', action='store_true', help='include the bound for every smaller switch')
    _add_limits(p)

    p = subparsers.add_parser('verify-conjecture',
                              help='class-wide minimum speedup of the unicast plus broadcast structure')
    p.add_argument('--K', type=int, default=2)
    p.add_argument('--N', type=int, required=True)
    p.add_argument('--dimension-limit', dest='dimension_limit', type=int,
                   default=DEFAULT_DIMENSION_LIMIT,
                   help='largest flow count for vertex enumeration (default: %(default)s)')
    p.add_argument('--allow-long', action='store_true',
                   help='permit sweeps with %d or more outputs' % (LONG_RUN_OUTPUTS, ))
    _add_limits(p)
    _add_sweep(p)

    p = subparsers.add_parser('export', help='write a conflict graph as JSON or DOT')
    p.add_argument('pattern_file', nargs='?')
    p.add_argument('--K', type=int)
    p.add_argument('--N', type=int)
    p.add_argument('--format', dest='output_format', choices=['json', 'dot'], default='json')
    p.add_argument('--to', dest='out_file', help='write the graph text here')
    _add_limits(p)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = vars(make_parser().parse_args(argv))
    verbose = args.pop('verbose')
    out = args.pop('out')
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    try:
        command = load(args, log_status=logger.debug)
        report, exit_code = command.run()
    except (ValueError, KeyError, LimitError, OSError) as e:
        logger.error('%s: %s', args['command'], e)
        return EXIT_ERROR
    finally:
        logger.removeHandler(handler)
    text = report.to_json()
    if out:
        with open(out, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return exit_code


if __name__ == '__main__':
    sys.exit(main())
