#!/usr/bin/env python3
"""
icckit - Main Script

Command-line front end for the interference-channel-with-common-information
toolkit:
1. Build rate regions from a channel and an input factorization
2. Project regions with Fourier-Motzkin elimination and prune them
3. Query membership, compare regions on a grid, test sampled unions
4. Simulate the superposition code and check strong interference / time sharing

Usage:
    icckit region --channel ch.json --dist p.json --kind EXPLICIT --out out/explicit
    icckit member out/explicit.csv --point R0=0.1,R1=0.2,R2=0.3

Exit codes: 0 success, 1 negative verdict, 2 usage or validation error.
"""

import logging
import sys
import argparse
from dataclasses import replace
from pathlib import Path

import numpy as np

# Try to import optional styling libraries
try:
    from rich.console import Console
    from rich.logging import RichHandler
    from rich.panel import Panel
    RICH_AVAILABLE = True
    console = Console()
except ImportError:
    RICH_AVAILABLE = False
    console = None

try:
    from colorama import init, Fore, Style
    init()  # Initialize colorama
    COLORAMA_AVAILABLE = True
except ImportError:
    COLORAMA_AVAILABLE = False

from channel import Family, aux_cards, strong_interference_sweep, uniform_factorization
from coding_sim import estimate_errors
from config import ConfigManager, set_config, get_config
from errors import IcckitError, UsageError
from file_formats import (RunManifest, fmt, load_channel, load_factorization, load_sim_config, read_region,
                          save_factorization, write_json, write_region)
from polytope import RatePoint, fourier_motzkin, grid_diff, member, prune
from regions import RegionKind, UnionOracle, region_for, timeshare_check

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

_styling = True


def setup_logging(log_level=logging.INFO, use_rich=False):
    """Configure logging for the application with optional rich formatting."""
    if use_rich and RICH_AVAILABLE:
        logging.basicConfig(
            level=log_level,
            format="%(message)s",
            handlers=[RichHandler(console=console, rich_tracebacks=True)],
            force=True
        )
    else:
        logging.basicConfig(
            level=log_level,
            format=get_config().log_format,
            handlers=[logging.StreamHandler()],
            force=True
        )


def print_styled(text, style="info"):
    """Print styled text using available styling libraries."""
    if RICH_AVAILABLE and _styling:
        if style == "success":
            console.print(text, style="bold green")
        elif style == "error":
            console.print(text, style="bold red")
        elif style == "warning":
            console.print(text, style="bold yellow")
        elif style == "header":
            console.print(Panel(text, style="bold blue"))
        else:
            console.print(text, highlight=False)
    elif COLORAMA_AVAILABLE and _styling:
        if style == "success":
            print(f"{Fore.GREEN}{Style.BRIGHT}{text}{Style.RESET_ALL}")
        elif style == "error":
            print(f"{Fore.RED}{Style.BRIGHT}{text}{Style.RESET_ALL}")
        elif style == "warning":
            print(f"{Fore.YELLOW}{Style.BRIGHT}{text}{Style.RESET_ALL}")
        elif style == "header":
            print(f"{Fore.BLUE}{Style.BRIGHT}{'='*60}")
            print(f"{text}")
            print(f"{'='*60}{Style.RESET_ALL}")
        else:
            print(text)
    else:
        print(text)


def parse_bbox(text):
    """Parse 'lo:hi'."""
    try:
        lo, hi = (float(v) for v in text.split(':'))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bbox must look like lo:hi, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"bbox upper bound {hi} is below lower bound {lo}")
    return (lo, hi)


def parse_cards(text):
    """Parse 'U0=2,U1=3'."""
    cards = {}
    for part in filter(None, (p.strip() for p in (text or '').split(','))):
        name, _, value = part.partition('=')
        try:
            cards[name.strip()] = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"Bad cardinality {part!r}; expected NAME=INT")
    return cards


def parse_sum(text):
    """Parse 'R1=R12+R11' into ('R1', ['R12', 'R11'])."""
    total, _, parts = text.partition('=')
    names = [p.strip() for p in parts.split('+') if p.strip()]
    if not total.strip() or not names:
        raise argparse.ArgumentTypeError(f"Bad sum {text!r}; expected NAME=PART+PART")
    return total.strip(), names


def parse_arguments(argv=None):
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        prog="icckit",
        description="icckit - rate regions and coding simulations for interference channels with common information",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  icckit region --channel xor.json --dist uniform.json --kind DICC --out out/dicc
  icckit fme out/implicit.json --eliminate R12,R11,R21,R22 --sum R1=R12+R11 --sum R2=R21+R22 --out out/fme
  icckit diff out/explicit.csv out/fme.csv --grid-step 0.05 --bbox 0:2
  icckit simulate sim.json --out out/sim
        """
    )
    parser.add_argument('--config', help='YAML configuration file (default: ./icckit.yaml or $ICCKIT_CONFIG)')
    parser.add_argument('--log-level', help='Logging level (DEBUG, INFO, WARNING, ...)')
    parser.add_argument('--no-styling', action='store_true', help='Disable colored output')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('region', help='Build a rate region')
    p.add_argument('--channel', required=True, help='Channel JSON file')
    p.add_argument('--dist', required=True, help='Input factorization JSON file')
    p.add_argument('--kind', required=True, choices=[k.value for k in RegionKind])
    p.add_argument('--complete', action='store_true', help='Append the rows the 13-row explicit listing omits')
    p.add_argument('--out', required=True, help='Output base path (writes .csv, .json, .manifest.json)')

    p = sub.add_parser('fme', help='Project a region with Fourier-Motzkin elimination')
    p.add_argument('region', help='Region CSV or JSON file')
    p.add_argument('--eliminate', default='', help='Comma-separated coordinates to eliminate')
    p.add_argument('--sum', action='append', type=parse_sum, default=[],
                   help='Add a coordinate equal to a sum, e.g. R1=R12+R11 (repeatable)')
    p.add_argument('--no-prune', action='store_true', help='Skip LP redundancy pruning')
    p.add_argument('--out', required=True, help='Output base path')

    p = sub.add_parser('member', help='Test whether a rate point lies in a region')
    p.add_argument('region', help='Region CSV or JSON file')
    p.add_argument('--point', required=True, help='Rate point, e.g. R0=0.1,R1=0.2,R2=0')
    p.add_argument('--tol', type=float, help='Membership tolerance in bits')

    p = sub.add_parser('diff', help='Compare two regions on a grid')
    p.add_argument('a', help='Region A')
    p.add_argument('b', help='Region B')
    p.add_argument('--grid-step', type=float, help='Grid step in bits')
    p.add_argument('--bbox', type=parse_bbox, help='Bounding box lo:hi applied to every coordinate')
    p.add_argument('--tol', type=float, help='Membership tolerance in bits')
    p.add_argument('--out', help='Write the report as JSON to <out>.json')

    p = sub.add_parser('union', help='Test a rate triple against the sampled union of explicit regions')
    p.add_argument('--channel', required=True, help='Channel JSON file')
    p.add_argument('--point', required=True, help='Rate triple, e.g. R0=0,R1=1,R2=1')
    p.add_argument('--family', default=Family.GENERAL_EQ1.value, choices=[f.value for f in Family])
    p.add_argument('--cards', type=parse_cards, default={}, help='Auxiliary cardinalities, e.g. U0=2,U1=2')
    p.add_argument('--samples', type=int, help='Number of Dirichlet samples')
    p.add_argument('--seed', type=int, help='Random seed')
    p.add_argument('--include-uniform', action='store_true', help='Also try the all-uniform factorization')
    p.add_argument('--tol', type=float, help='Membership tolerance in bits')
    p.add_argument('--out', help='Write the witness factorization to <out>.json')

    p = sub.add_parser('simulate', help='Estimate decoding error rates by Monte Carlo')
    p.add_argument('sim_config', metavar='CONFIG', help='Simulation config JSON file')
    p.add_argument('--seed', type=int, help='Override the seed in the config file')
    p.add_argument('--out', required=True, help='Output base path (writes .csv)')

    p = sub.add_parser('strongcheck', help='Sweep the strong-interference conditions')
    p.add_argument('--channel', required=True, help='Channel JSON file')
    p.add_argument('--cards', type=parse_cards, default={}, help='U0 cardinality, e.g. U0=2')
    p.add_argument('--samples', type=int, help='Number of Dirichlet samples')
    p.add_argument('--grid-step', type=float, help='Simplex grid step')
    p.add_argument('--seed', type=int, help='Random seed')
    p.add_argument('--out', help='Write the report to <out>.json')

    p = sub.add_parser('timeshare', help='Check convex combinations against the time-shared region')
    p.add_argument('--channel', required=True, help='Channel JSON file')
    p.add_argument('--dist', required=True, action='append', help='Factorization JSON file (give twice)')
    p.add_argument('--alpha', required=True, type=float, help='Weight of the first factorization')
    p.add_argument('--pairs', type=int, default=200, help='Number of sampled member pairs')
    p.add_argument('--seed', type=int, help='Random seed')
    p.add_argument('--tol', type=float, help='Membership tolerance in bits')
    p.add_argument('--out', help='Write the report to <out>.json and the augmented factorization')

    return parser.parse_args(argv)


def print_region(s, title):
    print_styled(title, "header")
    for i, label in enumerate(s.labels):
        print(f"  {s.describe_row(i):<40}  [{label}]")


def _tolerances():
    config = get_config()
    return {'member_tol': config.member_tol, 'pmf_tol': config.pmf_tol,
            'independence_tol': config.independence_tol}


def cmd_region(args):
    ch, d = load_channel(args.channel)
    f = load_factorization(args.dist)
    s = region_for(args.kind, f, ch, d, complete=args.complete)
    outputs = write_region(args.out, s, kind=args.kind)
    manifest = RunManifest('region', [args.channel, args.dist], outputs, None, _tolerances(),
                           {'kind': args.kind, 'complete': args.complete})
    manifest.write(args.out)
    print_region(s, f"{args.kind} region, {len(s)} rows")
    print_styled(f"Wrote {', '.join(outputs)}", "success")
    return EXIT_OK


def cmd_fme(args):
    s = read_region(args.region)
    eliminate = [c.strip() for c in args.eliminate.split(',') if c.strip()]
    for total, parts in args.sum:
        s = s.add_coords([total])
        coeffs = {c: 1.0 for c in parts}
        coeffs[total] = -1.0
        s = s.with_equality(coeffs, 0.0, label=f"{total}=sum")
    for c in eliminate:
        s.index(c)

    result = fourier_motzkin(s, eliminate) if eliminate else s
    if not args.no_prune:
        result = prune(result)
    outputs = write_region(args.out, result)
    manifest = RunManifest('fme', [args.region], outputs, None, _tolerances(),
                           {'eliminate': eliminate, 'sums': [f"{t}={'+'.join(p)}" for t, p in args.sum],
                            'prune': not args.no_prune})
    manifest.write(args.out)
    print_region(result, f"Projection onto {', '.join(result.coords)}, {len(result)} rows")
    return EXIT_OK


def cmd_member(args):
    s = read_region(args.region)
    point = RatePoint.parse(args.point)
    tol = get_config().member_tol if args.tol is None else args.tol
    slacks = s.slacks(point)
    print_styled(f"Point {args.point}", "header")
    for i, slack in enumerate(slacks):
        style = "error" if slack < -tol else "info"
        print_styled(f"  {s.describe_row(i):<40}  slack {fmt(slack)}  [{s.labels[i]}]", style)
    if member(s, point, tol):
        print_styled("member", "success")
        return EXIT_OK
    violated = [s.labels[i] for i in np.flatnonzero(slacks < -tol)]
    print_styled(f"not a member; violated rows: {', '.join(violated) or 'nonnegativity'}", "warning")
    return EXIT_NEGATIVE


def cmd_diff(args):
    a = read_region(args.a)
    b = read_region(args.b)
    config = get_config()
    step = config.grid_step if args.grid_step is None else args.grid_step
    bbox = config.bbox if args.bbox is None else args.bbox
    report = grid_diff(a, b, step, bbox, args.tol)
    print_styled(f"A only: {report.a_only}  B only: {report.b_only}  both: {report.both}  "
                 f"grid points: {report.total}", "info")
    if args.out:
        write_json(f"{Path(args.out).with_suffix('')}.json",
                   {'a': args.a, 'b': args.b, 'a_only': report.a_only, 'b_only': report.b_only,
                    'both': report.both, 'total': report.total, 'grid_step': step, 'bbox': list(bbox)})
        RunManifest('diff', [args.a, args.b], [f"{Path(args.out).with_suffix('')}.json"], None,
                    _tolerances(), {'grid_step': step, 'bbox': list(bbox)}).write(args.out)
    if report.equivalent:
        print_styled("regions agree on the grid", "success")
        return EXIT_OK
    print_styled("regions differ", "warning")
    return EXIT_NEGATIVE


def cmd_union(args):
    ch, d = load_channel(args.channel)
    family = Family(args.family)
    extra = [uniform_factorization(family, aux_cards(family, ch, args.cards))] if args.include_uniform else []
    oracle = UnionOracle(ch, family, args.samples, args.seed, cards=args.cards, extra=extra, d=d)
    verdict = oracle.accepts(RatePoint.parse(args.point), args.tol)
    print_styled(f"Union of {len(oracle)} sampled {family.value} regions ({verdict.label})", "header")
    if args.out:
        outputs = []
        if verdict.accepted:
            path = f"{Path(args.out).with_suffix('')}.json"
            save_factorization(path, verdict.witness)
            outputs.append(path)
        RunManifest('union', [args.channel], outputs, get_config().seed if args.seed is None else args.seed,
                    _tolerances(), {'family': family.value, 'point': args.point,
                                    'samples': len(oracle) - len(extra)}).write(args.out)
    if verdict.accepted:
        print_styled(f"accepted; witness is candidate {verdict.witness_index}", "success")
        return EXIT_OK
    print_styled("not accepted by any sampled distribution", "warning")
    return EXIT_NEGATIVE


def cmd_simulate(args):
    cfg = load_sim_config(args.sim_config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    report = estimate_errors(cfg)
    path = f"{Path(args.out).with_suffix('')}.csv"
    report.to_csv(path)
    RunManifest('simulate', [args.sim_config], [path], cfg.seed, _tolerances(),
                {'epsilon': cfg.epsilon, 'typicality': cfg.typicality, 'trials': cfg.trials,
                 'blocklengths': list(cfg.blocklengths), 'rates': list(cfg.rates)}).write(args.out)
    print_styled("Simulation report", "header")
    print(report.to_frame().to_string(index=False, float_format=fmt))
    print_styled(f"Wrote {path}", "success")
    return EXIT_OK


def cmd_strongcheck(args):
    ch, _ = load_channel(args.channel)
    report = strong_interference_sweep(ch, args.cards, args.grid_step, args.samples, args.seed)
    if args.out:
        path = f"{Path(args.out).with_suffix('')}.json"
        write_json(path, {'holds': report.holds, 'checked': report.checked,
                          'min_slack': float(fmt(report.min_slack))})
        RunManifest('strongcheck', [args.channel], [path], args.seed, _tolerances()).write(args.out)
    if report.holds:
        print_styled(f"Strong interference {report.summary()}", "success")
        return EXIT_OK
    print_styled(f"Strong interference {report.summary()}", "warning")
    return EXIT_NEGATIVE


def cmd_timeshare(args):
    if len(args.dist) != 2:
        raise UsageError(f"timeshare needs exactly two --dist files, got {len(args.dist)}")
    ch, _ = load_channel(args.channel)
    f1, f2 = (load_factorization(path) for path in args.dist)
    report = timeshare_check(f1, f2, args.alpha, ch, count=args.pairs, seed=args.seed, tol=args.tol)
    if args.out:
        base = Path(args.out).with_suffix('')
        path = f"{base}.json"
        write_json(path, {'alpha': args.alpha, 'checked': report.checked,
                          'failures': [{'index': fail.index, 'combined': [float(fmt(v)) for v in fail.combined],
                                        'violated': fail.violated} for fail in report.failures]})
        save_factorization(f"{base}.augmented.json", report.augmented)
        RunManifest('timeshare', [args.channel] + list(args.dist), [path, f"{base}.augmented.json"],
                    args.seed, _tolerances(), {'alpha': args.alpha, 'pairs': args.pairs}).write(args.out)
    if report.ok:
        print_styled(f"All {report.checked} convex combinations are members", "success")
        return EXIT_OK
    print_styled(f"{len(report.failures)} of {report.checked} convex combinations failed", "warning")
    return EXIT_NEGATIVE


COMMANDS = {
    'region': cmd_region,
    'fme': cmd_fme,
    'member': cmd_member,
    'diff': cmd_diff,
    'union': cmd_union,
    'simulate': cmd_simulate,
    'strongcheck': cmd_strongcheck,
    'timeshare': cmd_timeshare,
}


def main(argv=None):
    """Run one subcommand and return its exit code."""
    global _styling
    args = parse_arguments(argv)
    _styling = not args.no_styling

    try:
        manager = ConfigManager(args.config)
        overrides = {}
        if args.log_level:
            overrides['log_level'] = args.log_level
        if getattr(args, 'tol', None) is not None:
            overrides['member_tol'] = args.tol
        if getattr(args, 'seed', None) is not None:
            overrides['seed'] = args.seed
        set_config(manager.get_config(**overrides))
        config = get_config()
        setup_logging(getattr(logging, config.log_level.upper()), RICH_AVAILABLE and _styling)

        if getattr(args, 'out', None):
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)

        return COMMANDS[args.command](args)
    except IcckitError as e:
        print_styled(f"Error: {e}", "error")
        return EXIT_ERROR
    except OSError as e:
        print_styled(f"Error: {e}", "error")
        return EXIT_ERROR
    finally:
        set_config(None)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print_styled("Interrupted by user", "warning")
        sys.exit(EXIT_ERROR)
