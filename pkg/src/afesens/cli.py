"""Command-line interface: afesens <command> [options]."""

import argparse
import logging
import sys
from collections.abc import Sequence

from .client import AFeSensClient
from .errors import ConfigError, DomainError, StudyValidationError
from .inference.attributable import StudyData
from .inference.combiners import COMBINERS, MERGED, combine
from .simulation.config import GroupDGP, PairedDGPConfig, load_config
from .utils.data_utils import DataUtils
from .utils.report_writer import ReportWriter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DOMAIN = 3


class _ArgumentParser(argparse.ArgumentParser):
	"""Argument parser that exits with EXIT_USAGE on bad arguments."""

	def error(self, message: str) -> None:
		self.print_usage(sys.stderr)
		self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def float_list(text: str) -> list[float]:
	"""Parses a comma-separated list of numbers."""
	try:
		return DataUtils.parse_float_list(text)
	except ValueError as e:
		raise argparse.ArgumentTypeError(str(e)) from e


def int_list(text: str) -> list[int]:
	"""Parses a comma-separated list of integers."""
	values = float_list(text)
	if any(not v.is_integer() for v in values):
		raise argparse.ArgumentTypeError(f'expected integers, got {text!r}')
	return [int(v) for v in values]


def method_list(text: str) -> list[str]:
	"""Parses a comma-separated list of method names."""
	methods = DataUtils.parse_str_list(text)
	if not methods:
		raise argparse.ArgumentTypeError('expected at least one method')
	return methods


def _add_data_arguments(parser: argparse.ArgumentParser) -> None:
	source = parser.add_mutually_exclusive_group(required=True)
	source.add_argument('--study', help='Long-format study file (.csv or .xlsx)')
	source.add_argument('--summary', help='Summary file subtype,a,b,c,d (.csv or .xlsx)')
	parser.add_argument('--sheet', help='Worksheet of an .xlsx file')
	parser.add_argument('--labels', type=method_list, help='Declared subtype labels')


def build_parser() -> argparse.ArgumentParser:
	"""Builds the argument parser of every sub-command."""
	parser = _ArgumentParser(
		prog='afesens',
		description='Sensitivity analysis for the attributable fraction among exposed cases',
	)
	parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
	parser.add_argument('-q', '--quiet', action='store_true', help='Warnings only')
	parser.add_argument(
		'--threads', type=int, help='Worker threads (default: AFESENS_THREADS or cpu count)'
	)
	commands = parser.add_subparsers(dest='command', required=True)

	analyze = commands.add_parser('analyze', help='Minimum confidence intervals for AFe')
	_add_data_arguments(analyze)
	analyze.add_argument('--gamma', type=float_list, default=[1.0])
	analyze.add_argument('--theta', type=float_list, default=[1.0])
	analyze.add_argument('--alpha', type=float, default=0.05)
	analyze.add_argument('--methods', type=method_list, default=[MERGED])
	analyze.add_argument('--trunc', type=float, default=0.10)
	analyze.add_argument('--exact', action='store_true', help='Exact Poisson-binomial tail')
	analyze.add_argument('--max', action='store_true', help='Also report the maximum interval')
	analyze.add_argument('--output', '-o', help='Grid CSV path (default: standard output)')

	simulate = commands.add_parser('simulate', help='Monte Carlo power study')
	simulate.add_argument('--config', help='key = value simulation config file')
	simulate.add_argument('--seed', type=int, required=True)
	simulate.add_argument('--n', type=int)
	simulate.add_argument('--delta1', type=float)
	simulate.add_argument('--delta2', type=float)
	simulate.add_argument('--baseline', type=float)
	simulate.add_argument('--reps', type=int)
	simulate.add_argument('--alpha', type=float)
	simulate.add_argument('--trunc', type=float)
	simulate.add_argument('--gamma', type=float_list)
	simulate.add_argument('--theta', type=float_list)
	simulate.add_argument('--methods', type=method_list)
	simulate.add_argument('--output', '-o', help='Power CSV path (default: standard output)')

	power = commands.add_parser('power', help='Power of the sensitivity analysis')
	_add_data_arguments(power)
	power.add_argument('--gamma', type=float_list, default=[1.0])
	power.add_argument('--theta', type=float_list, default=[1.0])
	power.add_argument(
		'--a-star', type=int_list, default=[0], help='Attributable effect, total or per subtype'
	)
	power.add_argument('--methods', type=method_list, default=[MERGED])
	power.add_argument('--alpha', type=float, default=0.05)
	power.add_argument('--reps', type=int, default=0, help='Monte Carlo replicates')
	power.add_argument('--seed', type=int, default=0)
	power.add_argument('--output', '-o')

	design = commands.add_parser('design-sensitivity', help='Monte Carlo design sensitivity')
	design.add_argument(
		'--group',
		type=float_list,
		action='append',
		required=True,
		help='share,discordant_prob,case_exposed_prob (repeat per subtype)',
	)
	design.add_argument('--seed', type=int, required=True)
	design.add_argument('--theta', type=float, default=1.0)
	design.add_argument('--method', default=MERGED)
	design.add_argument('--alpha', type=float, default=0.05)
	design.add_argument('--n-sets', type=int, default=10_000)
	design.add_argument('--reps', type=int, default=100)
	design.add_argument('--tol', type=float, default=0.02)
	design.add_argument('--gamma-range', type=float_list, default=[1.0, 10.0])
	design.add_argument('--trunc', type=float, default=0.05)

	combine_cmd = commands.add_parser('combine', help='Combine independent P-values')
	combine_cmd.add_argument('--p', type=float_list, required=True)
	combine_cmd.add_argument('--method', choices=COMBINERS, required=True)
	combine_cmd.add_argument('--weights', type=float_list)
	combine_cmd.add_argument('--trunc', type=float, default=0.05)

	summarize = commands.add_parser('summarize', help='Pair counts and odds ratios')
	_add_data_arguments(summarize)
	return parser


def _configure_logging(args: argparse.Namespace) -> None:
	if args.verbose:
		logging.getLogger().setLevel(logging.DEBUG)
	elif args.quiet:
		logging.getLogger().setLevel(logging.WARNING)


def _load(client: AFeSensClient, args: argparse.Namespace) -> StudyData:
	if args.summary:
		return client.load_summary(args.summary)
	return client.load_study(args.study, args.sheet)


def _run_analyze(args: argparse.Namespace, writer: ReportWriter) -> None:
	client = AFeSensClient(
		subtype_labels=args.labels,
		alpha=args.alpha,
		trunc=args.trunc,
		exact=args.exact,
		workers=args.threads,
	)
	reports = client.analyze(
		_load(client, args), args.gamma, args.theta, args.methods, include_max=args.max
	)
	writer.write(writer.grid_csv(reports), args.output)
	if not args.quiet:
		sys.stderr.write(writer.grid_table(reports))


def _run_simulate(args: argparse.Namespace, writer: ReportWriter) -> None:
	overrides = {
		'seed': args.seed,
		'n': args.n,
		'delta1': args.delta1,
		'delta2': args.delta2,
		'baseline': args.baseline,
		'reps': args.reps,
		'alpha': args.alpha,
		'trunc': args.trunc,
		'gammas': args.gamma,
		'thetas': args.theta,
		'methods': args.methods,
	}
	config = load_config(args.config, overrides)
	rows = AFeSensClient(workers=args.threads).simulate(config)
	writer.write(writer.power_table_csv(rows), args.output)


def _run_power(args: argparse.Namespace, writer: ReportWriter) -> None:
	client = AFeSensClient(subtype_labels=args.labels, alpha=args.alpha, workers=args.threads)
	a_star = args.a_star[0] if len(args.a_star) == 1 else args.a_star
	points = client.power(
		_load(client, args),
		args.gamma,
		args.theta,
		a_star,
		args.methods,
		reps=args.reps,
		seed=args.seed,
	)
	writer.write(writer.power_curve_csv(points), args.output)


def _run_design_sensitivity(args: argparse.Namespace, writer: ReportWriter) -> None:
	groups = []
	for index, values in enumerate(args.group, start=1):
		if len(values) != 3:
			raise ConfigError(
				f'--group {index}: expected share,discordant_prob,case_exposed_prob'
			)
		groups.append(GroupDGP(*values))
	if len(args.gamma_range) != 2:
		raise ConfigError('--gamma-range expects low,high')

	client = AFeSensClient(alpha=args.alpha, trunc=args.trunc, workers=args.threads)
	estimate = client.design_sensitivity(
		PairedDGPConfig(groups=tuple(groups)),
		theta=args.theta,
		method=args.method,
		n_sets=args.n_sets,
		reps=args.reps,
		tol=args.tol,
		gamma_range=(args.gamma_range[0], args.gamma_range[1]),
		seed=args.seed,
	)
	number = writer.format_value
	writer.write(
		f'method: {estimate.method}\n'
		f'theta: {number(estimate.theta)}\n'
		f'design_sensitivity: {number(estimate.estimate)}\n'
		f'bracket: [{number(estimate.lower)}, {number(estimate.upper)}]\n'
		f'mc_stderr: {number(estimate.mc_stderr)}\n'
	)


def _run_combine(args: argparse.Namespace, writer: ReportWriter) -> None:
	p = combine(args.method, args.p, args.weights, args.trunc)
	writer.write(f'{DataUtils.format_number(p)}\n')


def _run_summarize(args: argparse.Namespace, writer: ReportWriter) -> None:
	client = AFeSensClient(subtype_labels=args.labels)
	data = _load(client, args)
	lines = ['subtype        a      b      c      d  odds_ratio  95% interval']
	for label, table in client.summarize(data).items():
		row = f'{label:<12} {table.a:>4} {table.b:>6} {table.c:>6} {table.d:>6}'
		if table.b and table.c:
			ratio = table.odds_ratio()
			row += f'  {ratio.estimate:10.3f}  [{ratio.lower:.3f}, {ratio.upper:.3f}]'
		else:
			row += f'  {"undefined":>10}'
		lines.append(row)
	writer.write('\n'.join(lines) + '\n')


_COMMANDS = {
	'analyze': _run_analyze,
	'simulate': _run_simulate,
	'power': _run_power,
	'design-sensitivity': _run_design_sensitivity,
	'combine': _run_combine,
	'summarize': _run_summarize,
}


def main(argv: Sequence[str] | None = None) -> int:
	"""Runs the command line and returns the exit code.

	Exit codes: 0 success, 1 usage or configuration error (including a
	missing file), 2 invalid study data, 3 numeric domain error.
	"""
	args = build_parser().parse_args(argv)
	_configure_logging(args)
	writer = ReportWriter()

	try:
		_COMMANDS[args.command](args, writer)
	except StudyValidationError as e:
		sys.stderr.write(f'afesens: invalid data: {e}\n')
		return EXIT_DATA
	except DomainError as e:
		sys.stderr.write(f'afesens: {e}\n')
		return EXIT_DOMAIN
	except (ConfigError, OSError) as e:
		sys.stderr.write(f'afesens: {e}\n')
		return EXIT_USAGE
	return EXIT_OK


if __name__ == '__main__':
	sys.exit(main())
