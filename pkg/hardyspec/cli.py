'''
Command-line front end.

    python -m hardyspec.cli gen random-bandlimited --n 2 --dims 32 --seed 7 --out f.cfld
    python -m hardyspec.cli decompose --in f.cfld --out-plus fp.cfld --out-minus fm.cfld
    python -m hardyspec.cli extend --in fp.cfld --x0 0.05 --method cauchy --out F.cfld
    python -m hardyspec.cli riesz --in f.cfld --axis 1 --out r.cfld
    python -m hardyspec.cli hilbert --in f.cfld --out h.cfld
    python -m hardyspec.cli verify --profile quick --seed 0
    python -m hardyspec.cli bergman --density gaussian-ring --n 2 --radius 4 --width 1 --p 1.5

Reports go to stdout (YAML, or key=value lines for verify) and logs to stderr.
Exit status: 0 success, 1 verification failure, 2 invalid input.
'''

import argparse
import logging
import sys

import numpy as np

from hardyspec.bergman import (
    BergmanDensity,
    bergman_norm,
    bergman_slab,
    gaussian_ring_density,
    geometric_x0_grid,
    single_mode_density,
    weighted_spectral_norm,
)
from hardyspec.errors import DomainError, HardyError
from hardyspec.extension import cauchy_extend, poisson_extend, spectral_extend
from hardyspec.field_io import export_csv, read_field, write_field
from hardyspec.generators import GENERATOR_NAMES, synthesize
from hardyspec.numerics_config import PROFILES
from hardyspec.Reports import BergmanReport, OperatorReport
from hardyspec.spectral import FieldHeader, Side
from hardyspec.transforms import (
    hardy_project,
    hilbert,
    hilbert_fixed_point_residual,
    riesz,
    riesz_system_residual,
)
from hardyspec.verify import run_verify

logger = logging.getLogger(__name__)

EXTENSION_METHODS = {
    'spectral': spectral_extend,
    'poisson': poisson_extend,
    'cauchy': cauchy_extend,
}

DENSITIES = ('single-mode', 'gaussian-ring', 'zero')

DEFAULT_POINTS = 32


def int_list(text):
    try:
        return tuple(int(v) for v in text.split(','))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'Expected comma-separated integers, got {text!r}') from e


def float_list(text):
    try:
        return tuple(float(v) for v in text.split(','))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'Expected comma-separated numbers, got {text!r}') from e


def header_from_args(args):
    '''
    Grid from --n, --dims and --extent. A single dims or extent value is repeated on
    every axis; n defaults to the number of dims given.
    '''
    n = args.n or (len(args.dims) if args.dims and len(args.dims) > 1 else 1)
    dims = args.dims or (DEFAULT_POINTS,)
    extent = args.extent or (1.0,)
    if len(dims) == 1:
        dims = dims * n
    if len(extent) == 1:
        extent = extent * n
    try:
        return FieldHeader(n=n, dims=dims, extent=extent)
    except ValueError as e:
        raise DomainError(f'Invalid grid: {e}') from e


def relative_residual(difference, reference):
    scale = reference.l2_norm()
    return difference.l2_norm() / scale if scale > 0 else difference.l2_norm()


def emit(text, path=None):
    '''Report text to stdout, or to a file when a path is given'''
    if path:
        with open(path, 'w') as f:
            f.write(text)
        logger.info(f'Wrote report to {path}')
    else:
        sys.stdout.write(text)


def write_output(args, path, field):
    write_field(path, field)
    if args.csv:
        export_csv(f'{path}.csv', field)


def cmd_gen(args):
    params = {'generator': args.generator}
    optional = {
        'value': args.value,
        'm': args.m,
        'radius_fraction': args.radius,
        'width_fraction': args.width,
        'band_fraction': args.band,
        'seed': args.seed,
    }
    params.update({k: v for k, v in optional.items() if v is not None})
    if args.scalar_only:
        params['scalar_only'] = True
    field = synthesize(header_from_args(args), params)
    write_output(args, args.out, field)
    return 0


def cmd_decompose(args):
    f = read_field(args.input)
    plus, minus = hardy_project(Side.PLUS, f), hardy_project(Side.MINUS, f)
    write_output(args, args.out_plus, plus)
    write_output(args, args.out_minus, minus)
    report = OperatorReport(
        operator='decompose',
        input_header=f.header,
        output_header=plus.header,
        residuals={
            'reconstruction': relative_residual(f - (plus + minus), f),
            'minus_fraction': relative_residual(minus, f),
        },
    )
    emit(report.to_yaml(), args.report)
    return 0


def cmd_extend(args):
    f = read_field(args.input)
    logger.info(f'Extending {args.input} to x0 = {args.x0} with the {args.method} route')
    extended = EXTENSION_METHODS[args.method](f, args.x0)
    write_output(args, args.out, extended)
    report = OperatorReport(
        operator=f'extend/{args.method} x0={args.x0}',
        input_header=f.header,
        output_header=extended.header,
        residuals={
            'minus_fraction': relative_residual(hardy_project(Side.MINUS, extended), extended)
        },
    )
    emit(report.to_yaml(), args.report)
    return 0


def cmd_riesz(args):
    f = read_field(args.input)
    transformed = riesz(args.axis, f)
    write_output(args, args.out, transformed)
    report = OperatorReport(
        operator=f'riesz/{args.axis}',
        input_header=f.header,
        output_header=transformed.header,
        residuals={'riesz_system': riesz_system_residual(f)},
    )
    emit(report.to_yaml(), args.report)
    return 0


def cmd_hilbert(args):
    f = read_field(args.input)
    transformed = hilbert(f)
    write_output(args, args.out, transformed)
    report = OperatorReport(
        operator='hilbert',
        input_header=f.header,
        output_header=transformed.header,
        residuals={
            'involution': relative_residual(hilbert(transformed) - f, f),
            'fixed_point': hilbert_fixed_point_residual(f),
        },
    )
    emit(report.to_yaml(), args.report)
    return 0


def cmd_verify(args):
    if args.seed is not None and args.seed < 0:
        raise DomainError(f'Seed must be nonnegative, got {args.seed}')
    report = run_verify(args.profile, args.seed or 0)
    sys.stdout.write(report.machine_lines())
    if args.report:
        emit(report.to_yaml(), args.report)
    failures = report.failures()
    if failures:
        logger.error(f'{len(failures)} check(s) failed: {", ".join(c.name for c in failures)}')
        return 1
    logger.info(f'All {len(report.checks)} checks passed')
    return 0


def density_from_args(args, header):
    value = args.value if args.value is not None else 1.0
    if args.density == 'single-mode':
        if args.m is None:
            raise DomainError('single-mode density needs --m')
        return single_mode_density(header, args.m, value)
    if args.density == 'gaussian-ring':
        if args.radius is None or args.width is None:
            raise DomainError('gaussian-ring density needs --radius and --width')
        return gaussian_ring_density(header, args.radius, args.width, value)
    return BergmanDensity(header, np.zeros(header.shape))


def cmd_bergman(args):
    header = header_from_args(args)
    density = density_from_args(args, header)
    sup_form = args.p == 1
    left = weighted_spectral_norm(density, args.p, sup_form=sup_form)
    x0_values = geometric_x0_grid(density)
    estimate = bergman_norm(bergman_slab(density, x0_values), args.p)
    if estimate.value > 0:
        ratio = left / estimate.value
    elif left == 0:
        ratio = 0.0
    else:
        raise DomainError('Bergman norm vanished for a nonzero density')
    report = BergmanReport(
        density=args.density,
        p=args.p,
        sup_form=sup_form,
        weighted_spectral_norm=left,
        bergman_norm=estimate.value,
        ratio=ratio,
        truncation_bound=estimate.truncation_bound,
        x0_range=(float(x0_values[0]), float(x0_values[-1])),
        x0_nodes=len(x0_values),
    )
    emit(report.to_yaml(), args.report)
    return 0


def add_grid_arguments(parser):
    parser.add_argument('--n', type=int, help='Clifford dimension (number of axes)')
    parser.add_argument('--dims', type=int_list, help='Points per axis, e.g. 32 or 64,32')
    parser.add_argument('--extent', type=float_list, help='Box length per axis (default 1)')


def build_parser():
    verbose = argparse.ArgumentParser(add_help=False)
    verbose.add_argument('--verbose', action='store_true', help='Log at DEBUG level')
    csv = argparse.ArgumentParser(add_help=False)
    csv.add_argument('--csv', action='store_true', help='Also write <out>.csv (lossy)')
    report = argparse.ArgumentParser(add_help=False)
    report.add_argument('--report', help='Write the report here instead of stdout')

    parser = argparse.ArgumentParser(
        prog='hardyspec', description='Numerical Clifford harmonic analysis on periodic grids'
    )
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen', parents=[verbose, csv], help='Synthesize a field')
    gen.add_argument('generator', choices=GENERATOR_NAMES)
    add_grid_arguments(gen)
    gen.add_argument('--value', type=complex, help='Scalar value or amplitude')
    gen.add_argument('--m', type=int_list, help='plane-wave lattice frequency, e.g. 3,0')
    gen.add_argument('--radius', type=float, help='gaussian-ring radius, fraction of Nyquist')
    gen.add_argument('--width', type=float, help='gaussian-ring width, fraction of Nyquist')
    gen.add_argument('--band', type=float, help='random-bandlimited band, fraction of Nyquist')
    gen.add_argument('--scalar-only', action='store_true', help='random-bandlimited scalar field')
    gen.add_argument('--seed', type=int)
    gen.add_argument('--out', required=True)
    gen.set_defaults(handler=cmd_gen)

    decompose = commands.add_parser(
        'decompose', parents=[verbose, csv, report], help='Split into Hardy parts'
    )
    decompose.add_argument('--in', dest='input', required=True)
    decompose.add_argument('--out-plus', required=True)
    decompose.add_argument('--out-minus', required=True)
    decompose.set_defaults(handler=cmd_decompose)

    extend = commands.add_parser(
        'extend', parents=[verbose, csv, report], help='Extend to height x0'
    )
    extend.add_argument('--in', dest='input', required=True)
    extend.add_argument('--x0', type=float, required=True)
    extend.add_argument('--method', choices=list(EXTENSION_METHODS), default='spectral')
    extend.add_argument('--out', required=True)
    extend.set_defaults(handler=cmd_extend)

    riesz_parser = commands.add_parser(
        'riesz', parents=[verbose, csv, report], help='j-th Riesz transform'
    )
    riesz_parser.add_argument('--in', dest='input', required=True)
    riesz_parser.add_argument('--axis', type=int, default=1)
    riesz_parser.add_argument('--out', required=True)
    riesz_parser.set_defaults(handler=cmd_riesz)

    hilbert_parser = commands.add_parser(
        'hilbert', parents=[verbose, csv, report], help='Clifford Hilbert transform'
    )
    hilbert_parser.add_argument('--in', dest='input', required=True)
    hilbert_parser.add_argument('--out', required=True)
    hilbert_parser.set_defaults(handler=cmd_hilbert)

    verify = commands.add_parser(
        'verify', parents=[verbose, report], help='Run the acceptance suite'
    )
    verify.add_argument('--profile', choices=list(PROFILES), default='quick')
    verify.add_argument('--seed', type=int, default=0)
    verify.set_defaults(handler=cmd_verify)

    bergman = commands.add_parser(
        'bergman', parents=[verbose, report], help='Weighted spectral norm against A^p norm'
    )
    bergman.add_argument('--density', choices=DENSITIES, default='gaussian-ring')
    add_grid_arguments(bergman)
    bergman.add_argument('--m', type=int_list, help='single-mode lattice frequency')
    bergman.add_argument('--radius', type=float, help='gaussian-ring radius in frequency units')
    bergman.add_argument('--width', type=float, help='gaussian-ring width in frequency units')
    bergman.add_argument('--value', type=complex)
    bergman.add_argument('--p', type=float, required=True)
    bergman.set_defaults(handler=cmd_bergman)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except HardyError as e:
        logger.error(f'{type(e).__name__}: {e.message}')
        return 2


if __name__ == '__main__':
    sys.exit(main())
