"""
Command line for the Toeplitz Commutant Lab.

    python -m src classify --symbol "(z+0.5)^2" --format text
    python -m src winding --example cardioid --at 0,0
    python -m src plot --example cardioid --out cardioid.svg

Exit codes: 0 ok, 2 usage or input error, 3 measurement failure.
"""

import argparse
import json
import logging
import sys

import numpy as np

from data.registry import list_examples, resolve_example

from .classify import classify, classify_powers, explain
from .config import MAX_ORDER, RunConfig
from .curvegeom import BoundaryCurve, valence, winding_number, winding_profile
from .exceptions import InputError, MeasurementError
from .factor import bdu_crosscheck, bdu_factor, fit_through_blaschke, tc_inner_part
from .opspace import (
    DensityWitness, commutant_basis, commutation_spectrum, density_witness, double_commutant_basis,
    fejer_polynomial, fejer_supnorm_check, fejer_wot_gap, malmquist_basis, polynomial_algebra_dim,
    toeplitz_truncation, wold_components, wold_reconstruct,
)
from .symbol_parser import symbol_from_text
from .symbolcore import BlaschkeProduct, TaylorSymbol, complex_pair, format_complex, format_real
from .visualization import plot

logger = logging.getLogger(__name__)


def parse_point(text):
    """``re,im`` -> complex"""
    try:
        re_part, im_part = text.split(',')
        return complex(float(re_part), float(im_part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None


def parse_blaschke(text):
    """``a1re,a1im;a2re,a2im`` -> BlaschkeProduct"""
    try:
        zeros = tuple(parse_point(part) for part in text.split(';') if part.strip())
        if not zeros:
            raise ValueError("no zeros given")
        return BlaschkeProduct(zeros)
    except (ValueError, argparse.ArgumentTypeError) as err:
        raise argparse.ArgumentTypeError(f"bad Blaschke zeros {text!r}: {err}") from None


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group('symbol input')
    source.add_argument('--symbol', help='symbol in the DSL, e.g. "(z+0.5)^2"')
    source.add_argument('--coeffs', metavar='PATH', help='JSON file with a serialized symbol')
    source.add_argument('--example', help='registry name, see the examples subcommand')

    sizes = common.add_argument_group('sizes (defaults from config.env)')
    sizes.add_argument('--order', type=int, help='truncation order N (default 256)')
    sizes.add_argument('--nodes', type=int, help='boundary curve nodes M, a power of two (default 4096)')
    sizes.add_argument('--grid', type=int, help='polar grid size K (default 24)')
    sizes.add_argument('--depth', type=int, help='Krylov depth m (default 6)')

    common.add_argument('--at', type=parse_point, metavar='RE,IM', help='point as a re,im pair')
    common.add_argument('--blaschke', type=parse_blaschke, metavar='A1RE,A1IM;...', help='Blaschke zeros')
    common.add_argument('--degree', type=int, help='fit degree d')
    common.add_argument('--format', choices=('json', 'text', 'svg'), help='output format (default json)')
    common.add_argument('--out', metavar='PATH', help='write the report to a file instead of stdout')
    common.add_argument('--config', default='config.env', help='dotenv file (default config.env)')
    common.add_argument('--verbose', action='store_true', help='debug logging on stderr')
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='python -m src',
        description='Minimal and double commutant evidence for analytic Toeplitz operators',
    )
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    def add(name, help_text):
        return commands.add_parser(name, parents=[common], help=help_text, description=help_text,
                                   formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    add('classify', 'MCP/DCP verdict with the fired rules')
    add('winding', 'winding number of the boundary curve about --at')
    add('valence', 'number of preimages of --at in the disk')
    add('profile', 'windings over the polar grid')
    add('factor', 'phi = h(z^k); with --at, the inner part of phi - phi(at) and the fit through it')
    add('fit', 'least-squares h with phi = h(B) for --blaschke')
    for name, help_text in (('commutant', 'commutant and double commutant dimensions'),
                            ('density', 'Krylov density witness')):
        sub = add(name, help_text)
        sub.add_argument('--dim', type=int, help='matrix size (default from config)')
    sub = add('wold', 'split phi into F_1..F_n with phi = sum z^j F_(j+1)(z^n)')
    sub.add_argument('--index', type=int, default=2, help='n')
    sub = add('fejer', 'Cesaro mean sigma_n and its sup-norm bound')
    sub.add_argument('--index', type=int, default=8, help='n')
    sub = add('malmquist', 'Takenaka-Malmquist vectors for --blaschke')
    sub.add_argument('--dim', type=int, default=16, help='vector length')
    add('plot', 'SVG winding raster of the boundary curve')
    add('examples', 'list the named example symbols')
    sub = add('powers', 'classify phi, phi^2, ..., phi^p')
    sub.add_argument('--count', type=int, default=3, help='p')
    return parser


class CommandRunner:
    def __init__(self, args, cfg):
        self.args = args
        self.cfg = cfg

    # Inputs

    def symbol(self):
        args, order = self.args, self.cfg.order
        given = [flag for flag in ('symbol', 'coeffs', 'example') if getattr(args, flag)]
        if len(given) != 1:
            raise InputError("give exactly one of --symbol, --coeffs or --example")
        if args.symbol:
            return symbol_from_text(args.symbol, order)
        if args.example:
            return resolve_example(args.example, order)
        with open(args.coeffs) as handle:
            payload = json.load(handle)
        s = TaylorSymbol.from_dict(payload)
        if args.order:
            return s.with_order(order)
        if not 1 <= s.order <= MAX_ORDER or 2 * s.order > self.cfg.nodes:
            raise InputError(
                f"{args.coeffs}: order {s.order} must lie in [1, {MAX_ORDER}] and be at most half "
                f"the {self.cfg.nodes} curve nodes"
            )
        return s

    def point(self):
        if self.args.at is None:
            raise InputError(f"the {self.args.command} subcommand needs --at re,im")
        return self.args.at

    def blaschke(self):
        if self.args.blaschke is None:
            raise InputError(f"the {self.args.command} subcommand needs --blaschke")
        return self.args.blaschke

    # Subcommands: each returns (json payload, text report)

    def run_classify(self):
        verdict = classify(self.symbol(), self.cfg)
        return verdict.to_dict(), explain(verdict)

    def run_winding(self):
        s = self.symbol()
        n = winding_number(BoundaryCurve.from_symbol(s, self.cfg.nodes), self.point())
        return n, str(n)

    def run_valence(self):
        n = valence(self.symbol(), self.point(), self.cfg.nodes)
        return n, str(n)

    def run_profile(self):
        profile = winding_profile(self.symbol(), self.cfg.grid, self.cfg.nodes)
        frame = profile.to_frame()
        counts = frame.groupby('n').size()
        text = '\n'.join(f"winding {n}: {count} samples" for n, count in counts.items())
        return profile.to_dict(), text + f"\nexcluded: {len(profile.excluded)} samples"

    def run_factor(self):
        s = self.symbol()
        if self.args.at is not None:
            B = tc_inner_part(s, self.args.at)
            fit = fit_through_blaschke(s, B, self.args.degree)
            return fit.to_dict(), self._fit_text(fit)
        factorization = bdu_factor(s, self.cfg.noise_floor)
        check = bdu_crosscheck(s, self.cfg.grid, M=self.cfg.nodes)
        payload = dict(factorization.to_dict(), crosscheck=check.to_dict())
        text = (f"k = {factorization.k}\nh = {factorization.h.to_text()}\n"
                f"residual = {format_real(factorization.residual)}\n"
                f"k from windings = {check.k_wind} ({'agrees' if check.agree else 'disagrees'})")
        return payload, text

    def _fit_text(self, fit):
        zeros = ', '.join(format_complex(a) for a in fit.B.zeros)
        return f"B zeros = [{zeros}]\nh = {fit.h.to_text()}\nresidual = {format_real(fit.residual)}"

    def run_fit(self):
        fit = fit_through_blaschke(self.symbol(), self.blaschke(), self.args.degree)
        return fit.to_dict(), self._fit_text(fit)

    def run_commutant(self):
        N = self.args.dim or self.cfg.commutant_dim
        T = toeplitz_truncation(self.symbol(), N)
        basis = commutant_basis(T, self.cfg.svd_tol)
        double = double_commutant_basis(basis, self.cfg.svd_tol)
        algebra = polynomial_algebra_dim(T, self.cfg.svd_tol)
        tail = commutation_spectrum(T)[-(len(basis) + 2):]
        payload = {
            'n': N,
            'commutant_dim': len(basis),
            'double_commutant_dim': len(double),
            'polynomial_algebra_dim': algebra,
            'singular_tail': [float(x) for x in tail],
        }
        text = (f"N = {N}\ncommutant dimension = {len(basis)}\n"
                f"double commutant dimension = {len(double)}\npolynomial algebra dimension = {algebra}\n"
                f"singular tail = {' '.join(format_real(x) for x in tail)}")
        return payload, text

    def run_density(self):
        s = self.symbol()
        N = self.args.dim or min(self.cfg.witness_dim, s.order + 1)
        result = density_witness(s, N, self.cfg.depth, self.args.blaschke, self.cfg.svd_tol)
        if isinstance(result, DensityWitness):
            text = (f"witness f0 (rank {result.rank} of {N}, m = {result.m})\n"
                    f"max pairing with phi^j = {format_real(result.max_pairing)}\n"
                    f"separating h = {result.separating_h.to_text()}, pairing = {format_real(result.pairing)}")
        else:
            text = f"dense at this truncation (rank {result.rank} of {result.N}): {result.reason}"
        return result.to_dict(), text

    def run_wold(self):
        s = self.symbol()
        components = wold_components(s, self.args.index)
        exact = bool(np.array_equal(wold_reconstruct(components, s.order).coeffs, s.coeffs))
        payload = {'n': self.args.index, 'components': [F.to_dict() for F in components], 'exact': exact}
        text = '\n'.join(f"{F.label} = {F.to_text()}" for F in components) + f"\nreconstruction exact: {exact}"
        return payload, text

    def run_fejer(self):
        s, n = self.symbol(), self.args.index
        sigma = fejer_polynomial(s, n)
        bound = fejer_supnorm_check(s, n)
        payload = {'n': n, 'fejer': sigma.to_dict(), 'fejer_norm': bound.fejer_norm,
                   'symbol_norm': bound.symbol_norm, 'ok': bound.ok}
        text = (f"sigma_{n} = {sigma.to_text()}\n"
                f"sup norms: {format_real(bound.fejer_norm)} <= {format_real(bound.symbol_norm)}: {bound.ok}")
        if self.args.at is not None:
            one = TaylorSymbol.constant(1, s.order)
            gap = fejer_wot_gap(s, n, self.args.at, one)
            payload['wot_gap'] = gap
            text += f"\ngap at {format_complex(self.args.at)} = {format_real(gap)}"
        return payload, text

    def run_malmquist(self):
        vectors = malmquist_basis(self.blaschke(), self.args.dim)
        payload = {'vectors': [[complex_pair(x) for x in v] for v in vectors]}
        text = '\n'.join(f"e_{i + 1} = " + ' '.join(format_complex(x) for x in v) for i, v in enumerate(vectors))
        return payload, text

    def run_plot(self):
        svg = plot(self.symbol(), self.cfg)
        return None, svg

    def run_examples(self):
        rows = list_examples()
        return [{'name': name, 'description': text} for name, text in rows], '\n'.join(
            f"{name}\t{text}" for name, text in rows)

    def run_powers(self):
        report = classify_powers(self.symbol(), self.args.count, self.cfg)
        blocks = [f"power {p}\n{explain(verdict)}" for p, verdict in report.verdicts]
        blocks.append(f"first power without the double commutant property: {report.first_loss}")
        return report.to_dict(), '\n'.join(blocks)

    def execute(self):
        payload, text = getattr(self, 'run_' + self.args.command)()
        if self.args.command == 'plot' or self.cfg.output_format == 'svg':
            if self.args.command != 'plot':
                raise InputError("svg output is only available for the plot subcommand")
            return text
        if self.cfg.output_format == 'text':
            return text if text.endswith('\n') else text + '\n'
        return json.dumps(payload, sort_keys=True, indent=2) + '\n'


def run(argv=None, stdout=None):
    """Parse ``argv``, run one subcommand and return the exit code"""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return 0 if exit_.code in (0, None) else 2

    try:
        cfg = RunConfig.from_env(args.config).replace(
            order=args.order, nodes=args.nodes, grid=args.grid, depth=args.depth, output_format=args.format,
        )
        if args.command == 'commutant' and args.dim is not None:
            cfg = cfg.replace(commutant_dim=args.dim)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else cfg.log_level,
            stream=sys.stderr,
            format='%(levelname)s %(name)s: %(message)s',
        )
        output = CommandRunner(args, cfg).execute()
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except MeasurementError as err:
        print(f"measurement failed: {err}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    if args.out:
        with open(args.out, 'w') as handle:
            handle.write(output)
    else:
        stdout.write(output)
    return 0


def main():
    sys.exit(run())
