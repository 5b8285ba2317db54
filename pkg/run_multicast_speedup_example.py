#!/usr/bin/env python3

import os
import sys


def run_examples(extra_args):
    import logging

    import multicast_speedup.cli

    data_dir = os.path.join(os.path.dirname(__file__), 'data')
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format='%(message)s')
    log_status = logging.getLogger('multicast_speedup').info

    commands = [
        dict(
            command='speedup',
            pattern_file=os.path.join(data_dir, 'odd_hole_pattern.json')),
        dict(
            command='perfect',
            input_file=os.path.join(data_dir, 'odd_hole_pattern.json')),
        dict(
            command='speedup',
            pattern_file=os.path.join(data_dir, 'coding_benefit_n3.json')),
        dict(
            command='imp',
            input_file=os.path.join(data_dir, 'odd_hole_pattern.json')),
        dict(
            command='bounds',
            K=2,
            N=3),
        dict(
            command='verify-conjecture',
            K=2,
            N=3,
            jobs=int(extra_args[0]) if extra_args else 1),
    ]

    for spec in commands:
        command = multicast_speedup.cli.load(dict(spec, stable_output=True), log_status)
        report, exit_code = command.run()
        value = report.payload.get('value', report.payload.get('bound', report.payload.get('perfect')))
        print('%-18s %-8s exit %d' % (report.command, value, exit_code))


if __name__ == '__main__':
    run_examples(sys.argv[1:])
