"""Command line interface"""
import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from . import __version__
from .besov import (
    bspline,
    bspline_convolution_check,
    modulus_of_smoothness,
    partition_of_unity_check,
    quasinorm_report,
    read_error_sequence,
    triangle_violation_demo,
)
from .builders import (
    BaseBuilder,
    BumpBuilder,
    InversionBuilder,
    MatrixMultBuilder,
    NeumannBuilder,
    ScalarMultBuilder,
    SquareBuilder,
)
from .config import Settings
from .errors import NNCalcError, VerificationFailure
from .galerkin import assemble_poisson_1d, galerkin_solve_or_skip, write_report, write_solution
from .interface import ErrorCertificate, QuasiNormParams, SolveMethod, TailPolicy
from .network import load_network, network_to_json, realize, save_network, validate

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(threadName)s: %(message)s'

CERTIFICATE_CSV_HEADER = ('kind', 'claimed', 'measured', 'samples', 'seed', 'passed', 'size_law')

# named test functions for the modulus of smoothness
FUNCTIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    'square': lambda x: x ** 2,
    'sin': lambda x: np.sin(2.0 * np.pi * x),
    'abs': lambda x: np.abs(x - 0.5),
    'sqrt': lambda x: np.sqrt(np.abs(x)),
    'step': lambda x: (x >= 0.5).astype(np.float64),
}


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings.from_env()
    if getattr(args, 'max_dim', None) is not None:
        settings = Settings.model_validate({**settings.model_dump(), 'max_dim': args.max_dim})
    return settings


def _builder(args: argparse.Namespace) -> BaseBuilder:
    kind = args.kind
    if kind == 'square':
        return SquareBuilder(args.m)
    if kind == 'mult':
        return ScalarMultBuilder(args.eps, args.bound, args.grid)
    if kind == 'matmul':
        return MatrixMultBuilder(args.d, args.n, args.l, args.eps, args.bound, _settings(args))
    if kind == 'neumann':
        return NeumannBuilder(args.d, args.doublings, args.eps, _settings(args))
    if kind == 'invert':
        return InversionBuilder(args.d, args.eps, args.alpha, args.delta, _settings(args))
    return BumpBuilder(args.r, args.d, args.delta)


def _print_model(model: BaseModel):
    print(model.model_dump_json(by_alias=True))


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, allow_nan=False) + '\n', encoding='utf-8')
    logger.info('wrote %s', path)


def _certificate_exit(certificates: Sequence[ErrorCertificate]) -> int:
    return 0 if all(cert.passed for cert in certificates) else 1


def cmd_build(args: argparse.Namespace) -> int:
    builder = _builder(args)
    net = builder.build()
    if args.out is None:
        print(network_to_json(net))
        return 0
    save_network(net, args.out)
    _print_model(validate(net))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    values = realize(net, np.asarray(args.input, dtype=np.float64))
    print(' '.join(repr(float(value)) for value in values))
    return 0


def cmd_info(args: argparse.Namespace) -> int:
    _print_model(validate(load_network(args.network)))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    builder = _builder(args)
    certificate = builder.certify(args.samples, args.seed)
    size_law = builder.size_bound(builder.size_report())
    payload = {
        'kind': builder.name,
        'certificate': certificate.model_dump(mode='json', by_alias=True),
        'passed': certificate.passed,
        'size_law': size_law,
        'size': builder.size_report().model_dump(mode='json', by_alias=True),
    }
    print(json.dumps(payload, allow_nan=False))
    if args.out is not None:
        _write_json(args.out, payload)
    if args.report is not None:
        with open(args.report, 'w', newline='', encoding='utf-8') as handle:
            writer = csv.writer(handle)
            writer.writerow(CERTIFICATE_CSV_HEADER)
            writer.writerow([
                builder.name,
                certificate.claimed_bound,
                certificate.measured_error,
                certificate.samples,
                '' if certificate.seed is None else certificate.seed,
                certificate.passed,
                size_law,
            ])
    if not size_law:
        raise VerificationFailure(f'{builder.name} network violates its size law')
    return _certificate_exit([certificate])


def cmd_galerkin(args: argparse.Namespace) -> int:
    problem = assemble_poisson_1d(args.d)
    settings = _settings(args)
    methods = args.method or [SolveMethod.direct.value, SolveMethod.neumann.value]
    solutions = [galerkin_solve_or_skip(problem, args.eps, SolveMethod(method), settings) for method in methods]
    reports = [report for _, report in solutions]
    writer = csv.writer(sys.stdout, lineterminator='\n')
    for report in reports:
        writer.writerow(report.csv_row(args.timings))
    if args.report is not None:
        write_report(args.report, reports, args.timings)
    if args.out is not None:
        write_solution(args.out, problem, solutions)
    failed = [report.method.value for report in reports if not report.passed]
    if failed:
        logger.warning('error bound missed by %s', ', '.join(failed))
        return 1
    return 0


def cmd_spline(args: argparse.Namespace) -> int:
    if args.kind == 'eval':
        print(' '.join(repr(float(bspline(args.r, x))) for x in args.x))
        return 0
    if args.kind == 'check-conv':
        certificate = bspline_convolution_check(args.r, args.grid)
    else:
        certificate = partition_of_unity_check(args.r, args.d, args.k, args.samples, args.seed)
    _print_model(certificate)
    return _certificate_exit([certificate])


def cmd_besov(args: argparse.Namespace) -> int:
    if args.kind == 'quasinorm':
        errors = read_error_sequence(args.errors) if args.errors is not None else args.values
        if not errors:
            raise NNCalcError('no error sequence given, use --errors FILE or --values')
        params = QuasiNormParams(alpha=args.alpha, q=args.q)
        _print_model(quasinorm_report(errors, params, TailPolicy(args.tail)))
        return 0
    if args.kind == 'modulus':
        value = modulus_of_smoothness(FUNCTIONS[args.function], r=args.r, p=args.p, t=args.t)
        print(json.dumps({'function': args.function, 'r': args.r, 'p': args.p, 't': args.t, 'modulus': value}))
        return 0
    _print_model(triangle_violation_demo(args.p, args.q, args.alpha))
    return 0


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {value}')
    return number


def _q_value(value: str) -> float:
    return float('inf') if value.lower() in ('inf', 'infinity') else float(value)


def _network_options(parser: argparse.ArgumentParser, kind: str):
    if kind == 'square':
        parser.add_argument('--m', type=int, default=5, help='level, depth of the network (default: 5)')
    elif kind == 'mult':
        parser.add_argument('--eps', type=float, default=1e-3, help='accuracy (default: 1e-3)')
        parser.add_argument('--bound', type=float, default=1.0, help='input box [-bound, bound]^2 (default: 1)')
        parser.add_argument('--grid', type=int, default=201, help='grid points per axis for verify (default: 201)')
    elif kind == 'matmul':
        parser.add_argument('--d', type=_positive_int, default=2)
        parser.add_argument('--n', type=_positive_int, default=2)
        parser.add_argument('--l', type=_positive_int, default=2)
        parser.add_argument('--eps', type=float, default=1e-2)
        parser.add_argument('--bound', type=float, default=1.0, help='spectral norm bound of both factors')
    elif kind == 'neumann':
        parser.add_argument('--d', type=_positive_int, default=2)
        parser.add_argument('--doublings', type=_positive_int, default=2, help='N, the sum has 2^N terms')
        parser.add_argument('--eps', type=float, default=0.1)
        parser.add_argument('--max-dim', type=_positive_int, default=None, dest='max_dim')
    elif kind == 'invert':
        parser.add_argument('--d', type=_positive_int, default=2)
        parser.add_argument('--eps', type=float, default=0.1)
        parser.add_argument('--alpha', type=float, default=1.0)
        parser.add_argument('--delta', type=float, default=0.5)
        parser.add_argument('--max-dim', type=_positive_int, default=None, dest='max_dim',
                            help='override the dimension cap (env NNCALC_MAX_DIM)')
    elif kind == 'bump':
        parser.add_argument('--r', type=_positive_int, default=2)
        parser.add_argument('--d', type=_positive_int, default=1)
        parser.add_argument('--delta', type=float, default=0.25)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='nncalc', description='Constructive ReLU network calculus')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')
    commands = parser.add_subparsers(dest='command', required=True)

    build = commands.add_parser('build', help='build a network and write it as JSON')
    build_kinds = build.add_subparsers(dest='kind', required=True)
    for kind in ('square', 'mult', 'matmul', 'invert', 'neumann', 'bump'):
        sub = build_kinds.add_parser(kind)
        _network_options(sub, kind)
        sub.add_argument('-o', '--out', type=Path, default=None, help='output file, stdout when omitted')
        sub.set_defaults(handler=cmd_build)

    evaluate = commands.add_parser('eval', help='evaluate a network at one input')
    evaluate.add_argument('network', type=Path)
    evaluate.add_argument('--input', type=float, nargs='+', required=True)
    evaluate.set_defaults(handler=cmd_eval)

    info = commands.add_parser('info', help='print the size report of a network')
    info.add_argument('network', type=Path)
    info.set_defaults(handler=cmd_info)

    verify = commands.add_parser('verify', help='measure a construction against its claimed bounds')
    verify_kinds = verify.add_subparsers(dest='kind', required=True)
    for kind in ('square', 'mult', 'matmul', 'invert', 'neumann'):
        sub = verify_kinds.add_parser(kind)
        _network_options(sub, kind)
        sub.add_argument('--samples', type=int, default=0, help='random samples, builder default when 0')
        sub.add_argument('--seed', type=int, default=0)
        sub.add_argument('-o', '--out', type=Path, default=None, help='certificate JSON')
        sub.add_argument('--report', type=Path, default=None, help='certificate CSV')
        sub.set_defaults(handler=cmd_verify)

    galerkin = commands.add_parser('galerkin', help='Galerkin solves of model problems')
    problems = galerkin.add_subparsers(dest='problem', required=True)
    poisson = problems.add_parser('poisson1d', help="-u'' = pi^2 sin(pi x) on (0, 1), hat functions")
    poisson.add_argument('--d', type=_positive_int, default=15, help='interior nodes')
    poisson.add_argument('--eps', type=float, default=0.1)
    poisson.add_argument('--method', choices=[method.value for method in SolveMethod], action='append',
                         help='repeatable, direct and neumann when omitted')
    poisson.add_argument('--max-dim', type=_positive_int, default=None, dest='max_dim')
    poisson.add_argument('--report', type=Path, default=None, help='CSV report')
    poisson.add_argument('-o', '--out', type=Path, default=None, help='problem and solution JSON')
    poisson.add_argument('--timings', action='store_true', help='fill the runtime_ms column')
    poisson.set_defaults(handler=cmd_galerkin)

    spline = commands.add_parser('spline', help='cardinal B-splines')
    spline_kinds = spline.add_subparsers(dest='kind', required=True)
    spline_eval = spline_kinds.add_parser('eval')
    spline_eval.add_argument('--r', type=int, default=1, help='degree')
    spline_eval.add_argument('--x', type=float, nargs='+', required=True)
    conv = spline_kinds.add_parser('check-conv')
    conv.add_argument('--r', type=int, default=1)
    conv.add_argument('--grid', type=int, default=241)
    partition = spline_kinds.add_parser('check-partition')
    partition.add_argument('--r', type=_positive_int, default=2)
    partition.add_argument('--d', type=_positive_int, default=1)
    partition.add_argument('--k', type=int, default=2)
    partition.add_argument('--samples', type=int, default=500)
    partition.add_argument('--seed', type=int, default=0)
    for sub in (spline_eval, conv, partition):
        sub.set_defaults(handler=cmd_spline)

    besov = commands.add_parser('besov', help='approximation classes and smoothness')
    besov_kinds = besov.add_subparsers(dest='kind', required=True)
    quasi = besov_kinds.add_parser('quasinorm')
    quasi.add_argument('--errors', type=Path, default=None, help='CSV with E(f, Sigma_(n-1)) per line')
    quasi.add_argument('--values', type=float, nargs='+', default=None)
    quasi.add_argument('--alpha', type=float, default=1.0)
    quasi.add_argument('--q', type=_q_value, default=1.0)
    quasi.add_argument('--tail', choices=[policy.value for policy in TailPolicy], default=TailPolicy.zero.value)
    modulus = besov_kinds.add_parser('modulus')
    modulus.add_argument('--function', choices=sorted(FUNCTIONS), default='square')
    modulus.add_argument('--r', type=_positive_int, default=1)
    modulus.add_argument('--p', type=float, default=2.0)
    modulus.add_argument('--t', type=float, default=0.1)
    triangle = besov_kinds.add_parser('triangle-demo')
    triangle.add_argument('--p', type=float, default=1.0)
    triangle.add_argument('--q', type=_q_value, default=1.0)
    triangle.add_argument('--alpha', type=float, default=2.0)
    for sub in (quasi, modulus, triangle):
        sub.set_defaults(handler=cmd_besov)
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)


def _one_line(exc: Exception) -> str:
    return ' '.join(str(exc).split())


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point, returns the process exit code"""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except VerificationFailure as exc:
        print(f'nncalc: verification failed: {_one_line(exc)}', file=sys.stderr)
        return 1
    except (NNCalcError, ValidationError, OSError) as exc:
        print(f'nncalc: {type(exc).__name__}: {_one_line(exc)}', file=sys.stderr)
        return 2
