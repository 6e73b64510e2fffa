"""
Sub-commands of ``python3 -m mfviability``.

Exit codes: 0 success, 2 scientific negative (not tangent, condition not
found, viability violated, failed certificate), 1 errors.
"""
import argparse
import logging
import os
import sys

from ..config import DEFAULTS, setting
from ..errors import ConfigError, MFViabilityError, ViabilityViolation
from ..lifted import lifted_metric, lifted_metric_joint_oracle
from ..measures import wasserstein1
from ..paths import read_particle_trace, write_particle_trace
from ..solver import SolveResult, make_scheme, run_certificates
from ..viability import tangency_estimate, viability_condition_check
from . import io
from .logs import configure_logging
from .settings import SCHEMA, ExperimentConfig, parse_lifted, parse_measure

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NEGATIVE = 2


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise ConfigError(message)


def _out_dir(args, default='.'):
    return io.ensure_dir(args.out if args.out is not None else default)


def _load_config(args):
    return ExperimentConfig(io.read_json(args.config), seed=args.seed)


def _settings_echo():
    return {key: setting(key) for key in sorted(DEFAULTS)}


def cmd_metric(args):
    m1 = parse_measure(io.measure_literal(io.read_json(args.first)), args.first)
    m2 = parse_measure(io.measure_literal(io.read_json(args.second)), args.second)
    value, plan = wasserstein1(m1, m2)
    io.write_json(os.path.join(_out_dir(args), 'metric.json'),
                  {'schema': SCHEMA, 'W1': value, 'plan': plan.mass.tolist(),
                   'first': m1.to_dict(), 'second': m2.to_dict()})
    print("W1 = {:.12g}".format(value))
    return EXIT_OK


def cmd_lifted_metric(args):
    b1 = parse_lifted(io.measure_literal(io.read_json(args.first)), args.first)
    b2 = parse_lifted(io.measure_literal(io.read_json(args.second)), args.second)
    value = lifted_metric(b1, b2, p=args.p)
    report = {'schema': SCHEMA, 'p': args.p, 'W': value}
    if args.joint:
        report['joint_oracle'] = lifted_metric_joint_oracle(b1, b2, p=args.p)
    io.write_json(os.path.join(_out_dir(args), 'lifted_metric.json'), report)
    print("W_{} = {:.12g}".format(args.p, value))
    return EXIT_OK


def cmd_tangency(args):
    config = _load_config(args)
    config.require('beta', 'oracle', 'tangency')
    block = config.tangency
    try:
        tau0 = float(block['tau0'])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("tangency block needs a numeric 'tau0'")
    report = tangency_estimate(config.beta, config.oracle, tau0,
                               levels=int(block.get('levels', 6)),
                               threshold=block.get('threshold'))
    io.write_json(os.path.join(_out_dir(args), 'tangency.json'), report.to_dict())
    print("verdict = {} (final ratio {:.6g})".format(report.verdict, report.ratios[-1]))
    return EXIT_OK if report.is_tangent else EXIT_NEGATIVE


def cmd_check(args):
    config = _load_config(args)
    config.require('m0', 'oracle', 'system', 'check')
    block = config.check
    try:
        tau0 = float(block['tau0'])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("check block needs a numeric 'tau0'")
    found, witness, score = viability_condition_check(
        config.m0, config.oracle, config.system, tau0,
        levels=int(block.get('levels', 4)), threshold=block.get('threshold'),
        seed=config.seed)
    io.write_json(os.path.join(_out_dir(args), 'check.json'),
                  {'schema': SCHEMA, 'found': found, 'score': score,
                   'witness': witness.to_dict(), 'seed': config.seed})
    print("found = {} (score {:.6g})".format(str(found).lower(), score))
    return EXIT_OK if found else EXIT_NEGATIVE


def _manifest(config, cfg, status, outputs, extra):
    manifest = {
        'schema': SCHEMA,
        'command': 'solve',
        'config': config.document,
        'seed': config.seed,
        'mode': cfg.mode,
        'solve': cfg.to_dict(),
        'settings': _settings_echo(),
        'status': status,
        'outputs': outputs,
    }
    manifest.update(extra)
    return manifest


def cmd_solve(args):
    config = _load_config(args)
    config.require('m0', 'system')
    cfg = config.solve_config()
    out = _out_dir(args)
    scheme = make_scheme(config.system, cfg)
    scheme.subject.subscribe(
        on_next=lambda record: logger.info("step %d (t=%.6g): %d trajectories",
                                           record['step'], record['t'],
                                           record['trajectories']))
    try:
        result = scheme.run(config.m0)
    except ViabilityViolation as e:
        io.write_json(os.path.join(out, io.MANIFEST), _manifest(
            config, cfg, 'violated', [io.MANIFEST],
            {'violation': {'step': e.step, 'score': e.score, 'nu': e.nu.to_dict()}}))
        raise

    write_particle_trace(result.bundle, os.path.join(out, io.PARTICLE_TRACE))
    io.write_flow_trace(result, os.path.join(out, io.FLOW_TRACE))
    io.write_json(os.path.join(out, io.MANIFEST), _manifest(
        config, cfg, 'ok', [io.FLOW_TRACE, io.PARTICLE_TRACE, io.MANIFEST],
        {'diagnostics': result.diagnostics}))
    summary = "solve ok: {} steps, {} trajectories".format(result.steps, result.bundle.size)
    if 'dist_to_K' in result.diagnostics:
        summary += ", max dist_to_K = {:.6g}".format(result.max_dist_to_K())
    print(summary)
    return EXIT_OK


def cmd_verify(args):
    run_dir = args.run_dir
    manifest = io.read_json(os.path.join(run_dir, io.MANIFEST))
    if manifest.get('schema') != SCHEMA or manifest.get('command') != 'solve':
        raise ConfigError("{} does not hold a solve manifest".format(run_dir))
    if manifest.get('status') != 'ok':
        raise ConfigError("run in {} did not finish (status {!r})".format(
            run_dir, manifest.get('status')))
    config = ExperimentConfig(manifest['config'])
    config.require('system')
    bundle = read_particle_trace(os.path.join(run_dir, io.PARTICLE_TRACE))
    result = SolveResult(bundle, manifest['mode'], manifest.get('diagnostics', {}))
    certificates = run_certificates(result, config.system, config.oracle)
    io.write_json(os.path.join(_out_dir(args, default=run_dir), 'verify.json'),
                  {'schema': SCHEMA, 'certificates': [c._asdict() for c in certificates]})
    passed = sum(c.passed for c in certificates)
    print("{} of {} certificates passed".format(passed, len(certificates)))
    return EXIT_OK if passed == len(certificates) else EXIT_NEGATIVE


def build_parser():
    parser = _Parser(prog='python3 -m mfviability',
                     description='Viability tools for mean-field differential inclusions')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Show log. Repeat to get more detailed one.')
    parser.add_argument('--short-log', action='store_true',
                        help='Produce log w/o timestamp and logger name.')

    common = _Parser(add_help=False)
    common.add_argument('--out', default=None, help='Output directory.')
    common.add_argument('--seed', type=int, default=None, help='Override the config seed.')

    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True

    p = commands.add_parser('metric', parents=[common], help='W1 between two measure files')
    p.add_argument('first')
    p.add_argument('second')
    p.set_defaults(handler=cmd_metric)

    p = commands.add_parser('lifted-metric', parents=[common],
                            help='W_p between two lifted measures over the same base')
    p.add_argument('first')
    p.add_argument('second')
    p.add_argument('--p', type=int, choices=(1, 2), default=1)
    p.add_argument('--joint', action='store_true', help='Also solve the joint LP.')
    p.set_defaults(handler=cmd_lifted_metric)

    for name, handler, text in (
            ('tangency', cmd_tangency, 'tangency ladder of beta to K'),
            ('check', cmd_check, 'viability condition at m0'),
            ('solve', cmd_solve, 'forward or viable solve')):
        p = commands.add_parser(name, parents=[common], help=text)
        p.add_argument('--config', required=True, help='Experiment config (JSON).')
        p.set_defaults(handler=handler)

    p = commands.add_parser('verify', parents=[common],
                            help='certificate checks on a finished solve directory')
    p.add_argument('run_dir')
    p.set_defaults(handler=cmd_verify)
    return parser


def run(argv=None):
    """
    Parse argv, run one sub-command and map the outcome to an exit code.
    :return: 0, 1 or 2
    """
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_FAILURE
    configure_logging(args.verbose, args.short_log)
    try:
        return args.handler(args)
    except ViabilityViolation as e:
        print(e)
        return EXIT_NEGATIVE
    except (MFViabilityError, OSError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_FAILURE
