"""
Command-line entry point ``swipt``.

Examples:
    swipt stats
    swipt harvest-cdf --config table1.toml --trials 10000 --out results/cdf
    swipt rates --sweep load.1=0.25:32:15:log
    swipt reproduce-figure 5a --out results/fig5a
    swipt validate --trials 5000 -v
"""
import argparse
import sys

from swipt._version import __version__
from swipt.core.exceptions import SWIPTConfigException
from swipt.core.experiments import COMMANDS, EXIT_CONFIG, FIGURES, ExperimentSpec, run
from swipt.core.link_rates import INTERFERENCE_FORMS
from swipt.core.repositories import CSV_FLOAT_FORMAT, OUTPUT_FORMATS
from swipt.utils.calc import parse_sweep
from swipt.utils.log import configure_logging


def build_parser():
    parser = argparse.ArgumentParser(
        prog='swipt',
        description='Energy harvesting, link rates and energy efficiency of multi-tier SWIPT networks.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split('Examples:')[1]
    )
    parser.add_argument('command', choices=COMMANDS, help='what to compute')
    parser.add_argument('figure', nargs='?', choices=FIGURES, help='figure preset of reproduce-figure')
    parser.add_argument('--config', default=None, help='TOML or JSON config, defaults to the bundled two-tier network')
    parser.add_argument('--seed', type=int, default=0, help='experiment seed')
    parser.add_argument('--trials', type=int, default=0, help='Monte Carlo trials, 0 for analytical curves only')
    parser.add_argument('--out', default=None, help='output directory for tables and manifest.json')
    parser.add_argument('--format', dest='fmt', choices=OUTPUT_FORMATS, default='csv', help='table format')
    parser.add_argument('--threads', type=int, default=1, help='worker processes of the Monte Carlo runs')
    parser.add_argument('--sweep', default=None, metavar='FIELD=start:stop:points[:log]',
                        help='config field swept instead of the default abscissa')
    parser.add_argument('--interference', choices=INTERFERENCE_FORMS, default='normalized',
                        help='downlink interference form of rates and ee-optimize')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug messages')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        sweep = parse_sweep(args.sweep) if args.sweep else None
        spec = ExperimentSpec(command=args.command, config_path=args.config, figure=args.figure, sweep=sweep,
                              trials=args.trials, seed=args.seed, out=args.out, fmt=args.fmt, threads=args.threads,
                              interference=args.interference)
    except SWIPTConfigException as e:
        print(f'swipt: {e}', file=sys.stderr)
        return EXIT_CONFIG
    result = run(spec)
    if result.exit_code != 0 and result.message:
        print(f'swipt: {result.message}', file=sys.stderr)
    if args.out is None:
        for name, table in result.tables.items():
            df = table.to_dataframe() if hasattr(table, 'to_dataframe') else table
            print(f'# {name}')
            print(df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT), end='')
    return result.exit_code


if __name__ == '__main__':
    sys.exit(main())
