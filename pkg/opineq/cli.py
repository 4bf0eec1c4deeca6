# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Command line front end::

    opineq run [--config PATH] [--seed N] [--out PATH] [--format FMT]
               [--checks id,id] [--dims 2,3,4] [--trials N]
    opineq classify NAME | --inline FORMULA [--domain LO,HI]
    opineq search NAME | --inline FORMULA --predicate P
    opineq replay [PATH]
    opineq gen pd|sandwich|olson [--n N] [--s S] [--t T]

Exit status is 0 on success, 1 on unexpected check failures or a replay
mismatch and 2 on configuration, parse or lookup errors.
"""
import argparse
import contextlib
import csv
import json
import sys
from dataclasses import replace

from opineq.catalog import (INF, INSTANCE_MARGINS, inline, resolve,
                            classify, sample_predicate)
from opineq.checks import replay
from opineq.errors import (ConfigError, OpineqError, ParseError,
                           UnknownFunction)
from opineq.generators import gen_olson_sandwich, gen_pd, gen_sandwich
from opineq.logger import log_module, reset_logger, silence_logger
from opineq.spectral import matrix_to_json
from opineq.suite import (WRITERS, load_config, plan_ids, read_report_lines,
                          resolve_seed, run_suite)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2


def _int_list(text):
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected comma separated integers, got {!r}".format(text))


def _id_list(text):
    return [item.strip() for item in text.split(',') if item.strip()]


def _interval(text):
    lo, sep, hi = text.partition(',')
    try:
        return float(lo), (INF if hi.strip() in ('inf', '') else float(hi))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected LO,HI, got {!r}".format(text))


@contextlib.contextmanager
def _output(path):
    if path is None or path == '-':
        yield sys.stdout
    else:
        with open(path, 'w') as handle:
            yield handle


def _function(args):
    if args.inline is not None:
        return inline(args.inline, args.domain)
    if args.function is None:
        raise UnknownFunction("give a catalog name or --inline FORMULA")
    return resolve(args.function)


VERDICT_FIELDS = ('flag', 'holds', 'trials', 'worst_margin')


def _write_verdict_rows(stream, verdicts):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(VERDICT_FIELDS)
    for flag, verdict in verdicts:
        if verdict is None:
            writer.writerow([flag, '', 0, ''])
        else:
            margin = verdict.worst_margin
            writer.writerow([flag, verdict.holds, verdict.trials,
                             '' if margin is None else repr(margin)])


def _verdict_line(flag, verdict):
    if verdict is None:
        return '{}: not applicable'.format(flag)
    state = 'holds' if verdict.holds else 'fails'
    line = '{}: {} ({} trials, worst margin {!r})'.format(
        flag, state, verdict.trials, verdict.worst_margin)
    if verdict.witness is not None:
        witness = verdict.to_dict()['witness']
        line += '\n    witness A={} B={} v={}'.format(
            json.dumps(witness['A']), json.dumps(witness['B']), witness['v'])
    return line


def cmd_run(args):
    """Runs the suite and writes the SuiteReport."""
    config = load_config(args.config)
    overrides = {'seed': resolve_seed(args.seed, config.seed)}
    if args.checks is not None:
        unknown = sorted(set(args.checks) - set(plan_ids()))
        if unknown:
            raise ConfigError("unknown check ids: {}".format(
                ', '.join(unknown)))
        overrides['checks'] = args.checks
    if args.dims is not None:
        if not args.dims or min(args.dims) < 1:
            raise ConfigError("--dims needs positive integers")
        overrides['dims'] = tuple(args.dims)
    if args.trials is not None:
        if args.trials < 0:
            raise ConfigError("--trials must be nonnegative")
        overrides['trials'] = args.trials
    config = replace(config, **overrides)
    to_stdout = args.out in (None, '-')
    if to_stdout and args.format != 'pretty':
        silence_logger()
    try:
        suite = run_suite(config)
        with _output(args.out) as stream:
            WRITERS[args.format](suite, stream)
    finally:
        reset_logger()
    return suite.exit_code


def cmd_classify(args):
    """Samples every class predicate of one function."""
    f = _function(args)
    result = classify(f, args.n, args.trials, resolve_seed(args.seed),
                      log=args.format == 'pretty')
    with _output(args.out) as stream:
        if args.format == 'json':
            obj = {'function': f.to_dict(),
                   'verdicts': {flag: None if v is None else v.to_dict()
                                for flag, v in result.verdicts.items()},
                   'disagreements': result.disagreements,
                   'unconfirmed': result.unconfirmed}
            stream.write(json.dumps(obj, sort_keys=True) + '\n')
        elif args.format == 'csv':
            _write_verdict_rows(stream, result.verdicts.items())
        else:
            stream.write('{} = {} on ({}, {})\n'.format(
                f.key, f.formula, f.domain[0], f.domain[1]))
            for flag, verdict in result.verdicts.items():
                stream.write(_verdict_line(flag, verdict) + '\n')
    return EXIT_OK


def cmd_search(args):
    """Looks for a counterexample to one predicate; stops at the first."""
    f = _function(args)
    verdict = sample_predicate(args.predicate, f, args.n, args.trials,
                               resolve_seed(args.seed),
                               stop_on_witness=True)
    with _output(args.out) as stream:
        if args.format == 'json':
            stream.write(json.dumps(verdict.to_dict(), sort_keys=True) + '\n')
        elif args.format == 'csv':
            _write_verdict_rows(stream, [(args.predicate, verdict)])
        else:
            stream.write(_verdict_line(args.predicate, verdict) + '\n')
    return EXIT_OK


def cmd_replay(args):
    """Replays every report line; exit 1 on any mismatch."""
    logger = log_module()
    mismatches = 0
    with (open(args.path) if args.path not in (None, '-')
          else contextlib.nullcontext(sys.stdin)) as stream:
        try:
            reports = list(read_report_lines(stream))
        except (ValueError, TypeError, KeyError) as err:
            raise ParseError("cannot read report line: {}".format(err))
    for report in reports:
        try:
            matches, recomputed = replay(report)
        except (ValueError, TypeError, KeyError) as err:
            raise ParseError("cannot replay {} seed={}: bad instance "
                             "{}".format(report.check_id, report.seed, err))
        if not matches:
            mismatches += 1
            logger.error("{} seed={}: recorded {} {!r}, recomputed {} "
                         "{!r}".format(report.check_id, report.seed,
                                       report.verdict, report.margin,
                                       recomputed.verdict,
                                       recomputed.margin))
    logger.info("replayed {} reports, {} mismatches".format(len(reports),
                                                            mismatches))
    return EXIT_FAILURES if mismatches else EXIT_OK


def cmd_gen(args):
    """Prints one generated instance as JSON."""
    seed = resolve_seed(args.seed)
    if args.kind == 'pd':
        obj = {'A': matrix_to_json(gen_pd(args.n, (args.s, args.t), seed))}
    elif args.kind == 'sandwich':
        obj = gen_sandwich(args.n, args.s, args.t, seed).to_dict()
    else:
        obj = gen_olson_sandwich(args.n, args.s, args.t, seed).to_dict()
    with _output(args.out) as stream:
        stream.write(json.dumps(obj, sort_keys=True) + '\n')
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog='opineq',
        description='Randomised checks of operator mean inequalities.')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='seed (overrides the config and $OPINEQ_SEED)')
    common.add_argument('--out', default=None,
                        help='output file, stdout when omitted')
    common.add_argument('--format', choices=sorted(WRITERS), default='pretty')

    run = sub.add_parser('run', parents=[common], help='run the suite')
    run.add_argument('--config', default=None,
                     help='JSON suite config, the bundled default if omitted')
    run.add_argument('--checks', type=_id_list, default=None)
    run.add_argument('--dims', type=_int_list, default=None)
    run.add_argument('--trials', type=int, default=None)
    run.set_defaults(handler=cmd_run)

    function = argparse.ArgumentParser(add_help=False)
    function.add_argument('function', nargs='?', default=None,
                          help='catalog key such as reciprocal or '
                               'a_minus_t[a=2]')
    function.add_argument('--inline', default=None,
                          help='formula in t, e.g. "t^3"')
    function.add_argument('--domain', type=_interval, default=(0.0, INF))
    function.add_argument('--n', type=int, default=3)
    function.add_argument('--trials', type=int, default=1000)

    classify_cmd = sub.add_parser('classify', parents=[common, function],
                                  help='sample every class predicate')
    classify_cmd.set_defaults(handler=cmd_classify)

    search = sub.add_parser('search', parents=[common, function],
                            help='search for a counterexample')
    search.add_argument('--predicate', choices=sorted(INSTANCE_MARGINS),
                        required=True)
    search.set_defaults(handler=cmd_search)

    replay_cmd = sub.add_parser('replay', help='replay JSON report lines')
    replay_cmd.add_argument('path', nargs='?', default=None,
                            help='JSON lines file, stdin when omitted')
    replay_cmd.set_defaults(handler=cmd_replay)

    gen = sub.add_parser('gen', parents=[common], help='generate an instance')
    gen.add_argument('kind', choices=('pd', 'sandwich', 'olson'))
    gen.add_argument('--n', type=int, default=3)
    gen.add_argument('--s', type=float, default=0.5)
    gen.add_argument('--t', type=float, default=2.0)
    gen.set_defaults(handler=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.handler(args)
    except (OpineqError, IOError, OSError) as err:
        if isinstance(err, KeyError) and err.args:
            err = err.args[0]
        sys.stderr.write('opineq: {}\n'.format(err))
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
