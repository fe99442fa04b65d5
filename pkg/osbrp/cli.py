"""
Command-Line Interface
osbrp solve | simulate | oracle | gen | bench | export-lp | validate
"""

import argparse
import json
import logging
import statistics
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .exceptions import (
    ConfigError,
    ContractError,
    InputError,
    InvariantViolation,
    OsbrpError,
    SearchSpaceTooLarge,
)
from .global_solver import solve, solve_uncapacitated, verify_solution
from .instance_io import GeneratorConfig, generate, load_instance, write_instance, write_trajectory
from .milp_export import export_lp
from .model import null_trajectory, simulate
from .oracle import brute_force, wide_bracket, widen_windows
from .settings import load_settings, log_level
from .validation import print_validation_results, run_oracle_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3


def parse_int_list(text: str, name: str) -> List[int]:
    """'a,b,c' -> [a, b, c]; the empty string is the empty list"""
    if text.strip() == "":
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise InputError(f"{name} must be a comma-separated list of integers, got {text!r}") from e


def parse_range(text: str, name: str) -> tuple:
    values = parse_int_list(text, name)
    if len(values) != 2:
        raise InputError(f"{name} must be two integers A,B, got {text!r}")
    return values[0], values[1]


def _banner(title: str):
    print(f"\n{'='*80}")
    print(title)
    print(f"{'='*80}")


def _format_list(values: Sequence[int]) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def cmd_solve(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    instance = load_instance(args.instance)

    if args.uncapacitated:
        loss, interventions = solve_uncapacitated(instance)
        if args.trajectory:
            # the vehicle windows are widened to admit the unbounded moves
            relaxed = widen_windows(instance, [(x, x) for x in interventions])
            trajectory, _ = simulate(relaxed, interventions)
            write_trajectory(trajectory, args.trajectory)
        if args.json:
            print(json.dumps({'interventions': interventions, 'uncapacitated_loss': loss}))
        else:
            _banner(f"UNCAPACITATED SOLUTION: {args.instance}")
            print(f"interventions: {_format_list(interventions)}")
            print(f"uncapacitated_loss: {loss}")
            if args.trajectory:
                print(f"\n✓ Trajectory written: {args.trajectory}")
        return EXIT_OK

    solution = solve(instance)
    verify_solution(instance, solution)

    if args.trajectory:
        trajectory, _ = simulate(instance, solution.interventions)
        write_trajectory(trajectory, args.trajectory)

    if args.json:
        print(json.dumps(solution.to_dict()))
        return EXIT_OK

    _banner(f"SOLUTION: {args.instance}")
    for key, value in solution.to_dict().items():
        print(f"{key}: {_format_list(value) if isinstance(value, list) else value}")
    if args.trajectory:
        print(f"\n✓ Trajectory written: {args.trajectory}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    instance = load_instance(args.instance)
    interventions = parse_int_list(args.interventions, "--interventions")
    trajectory, loss = simulate(instance, interventions)
    null_loss = null_trajectory(instance).total_loss

    if args.trajectory:
        write_trajectory(trajectory, args.trajectory)

    _banner(f"SIMULATION: {args.instance}")
    print(f"interventions: {_format_list(interventions)}")
    print(f"total_loss: {loss}")
    print(f"surplus_loss: {sum(trajectory.surplus_loss)}")
    print(f"stockout_loss: {sum(trajectory.stockout_loss)}")
    print(f"null_loss: {null_loss}")
    print(f"terminal_stock: {trajectory.stock[-1]}")
    if args.trajectory:
        print(f"\n✓ Trajectory written: {args.trajectory}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    instance = load_instance(args.instance)
    oracle_settings = settings.get('oracle', {})
    limit = args.limit if args.limit is not None else oracle_settings.get('search_limit', 200000)
    max_vectors = oracle_settings.get('max_best_vectors', 64)

    if args.uncapacitated:
        solver_loss, _ = solve_uncapacitated(instance)
        result = brute_force(instance, bounds_override=wide_bracket(instance),
                             limit=limit, max_vectors=max_vectors)
    else:
        solution = solve(instance)
        solver_loss = solution.total_loss
        result = brute_force(instance, limit=limit, max_vectors=max_vectors)

    passed = solver_loss == result.best_loss
    _banner(f"ORACLE: {args.instance}{' (uncapacitated)' if args.uncapacitated else ''}")
    print(f"search_space: {result.search_space_size}")
    print(f"oracle_best_loss: {result.best_loss}")
    print(f"solver_total_loss: {solver_loss}")
    print(f"optimal_vectors: {len(result.best_vectors)}{'+' if result.overflow else ''}")
    print(f"{'✓' if passed else '✗'} {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_INVARIANT


def cmd_gen(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    overrides = {
        'epochs': args.epochs,
        'visit_count': args.visits,
        'station_capacity': args.capacity,
        'seed': args.seed,
    }
    if args.demand_range:
        overrides['demand_range'] = parse_range(args.demand_range, "--demand-range")
    if args.vehicle_capacity_range:
        overrides['vehicle_capacity_range'] = parse_range(args.vehicle_capacity_range,
                                                          "--vehicle-capacity-range")
    if args.initial_stock is not None:
        overrides['initial_stock_policy'] = args.initial_stock
    config = GeneratorConfig.from_settings(settings.get('generator', {}), **overrides)
    instance = generate(config)

    with open(args.output, 'w', encoding='utf-8', newline='\n') as f:
        f.write(write_instance(instance))
    print(f"✓ Instance written: {args.output} (m={instance.m}, w={instance.w}, seed={config.seed})")
    return EXIT_OK


@dataclass
class BenchReport:
    """Solve times per horizon length; ratio is median(t(m_k)) / median(t(m_(k-1)))"""
    visits: int
    repeats: int
    frame: pd.DataFrame = field(default_factory=pd.DataFrame)

    @property
    def ratios(self) -> List[float]:
        if len(self.frame) < 2:
            return []
        return [float(r) for r in self.frame['ratio'].iloc[1:]]

    def within(self, band: Sequence[float]) -> bool:
        lo, hi = band
        return all(lo <= r <= hi for r in self.ratios)


def run_bench(sizes: Sequence[int], visits: int, repeats: int, seed: int,
              bench_settings: Dict[str, Any]) -> BenchReport:
    """
    Time `solve` only, `repeats` times on one generated instance per size.

    Generation happens outside the timed region; every repeat solves the
    same instance.
    """
    if repeats < 3:
        raise ConfigError(f"--repeats must be >= 3, got {repeats}")
    if not sizes:
        raise ConfigError("--sizes must name at least one size")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError(f"--sizes must be strictly increasing, got {list(sizes)}")
    if any(size < visits for size in sizes):
        raise ConfigError(f"every size must be >= --visits ({visits})")

    rows = []
    previous: Optional[float] = None
    for size in sizes:
        config = GeneratorConfig(
            epochs=size,
            visit_count=visits,
            station_capacity=bench_settings.get('station_capacity', 30),
            demand_range=tuple(bench_settings.get('demand_range', [-6, 6])),
            vehicle_capacity_range=tuple(bench_settings.get('vehicle_capacity_range', [5, 25])),
            seed=seed,
        )
        instance = generate(config)
        timings = []
        for _ in range(repeats):
            start = time.perf_counter()
            solve(instance)
            timings.append(time.perf_counter() - start)
        median = statistics.median(timings)
        rows.append({
            'm': size,
            'visits': visits,
            'median_s': median,
            'min_s': min(timings),
            'max_s': max(timings),
            'ratio': median / previous if previous else float('nan'),
        })
        logger.info("bench m=%d median %.4fs", size, median)
        previous = median

    return BenchReport(visits=visits, repeats=repeats, frame=pd.DataFrame(rows))


def cmd_bench(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    bench = settings.get('bench', {})
    sizes = parse_int_list(args.sizes, "--sizes") if args.sizes else bench.get('sizes', [])
    visits = args.visits if args.visits is not None else bench.get('visits', 50)
    repeats = args.repeats if args.repeats is not None else bench.get('repeats', 5)
    seed = args.seed if args.seed is not None else bench.get('seed', 7)
    band = bench.get('ratio_band', [1.3, 3.0])

    report = run_bench(sizes, visits, repeats, seed, bench)

    _banner(f"BENCHMARK: {len(sizes)} sizes, w={visits}, {repeats} repeats")
    print(report.frame.to_string(index=False))
    if report.ratios:
        ok = report.within(band)
        print(f"\n{'✓' if ok else '✗'} doubling ratios {[round(r, 2) for r in report.ratios]} "
              f"{'within' if ok else 'outside'} [{band[0]}, {band[1]}]")
    return EXIT_OK


def cmd_export_lp(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    instance = load_instance(args.instance)
    text = export_lp(instance, relax=args.relax)
    with open(args.output, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    print(f"✓ LP model written: {args.output} ({'relaxed' if args.relax else 'integer'})")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    family = dict(settings.get('validation', {}))
    limit = settings.get('oracle', {}).get('search_limit', 200000)
    if args.uncapacitated:
        family.update(family.get('uncapacitated', {}))
    count = args.count if args.count is not None else family.get('count', 500)
    seed = args.seed if args.seed is not None else family.get('seed', 11)

    results = run_oracle_suite(count, seed, family, uncapacitated=args.uncapacitated, limit=limit)
    print_validation_results(results)
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            json.dump(results, f, indent=2, default=str)
        print(f"✓ Results written: {args.output}")
    return EXIT_OK if results['summary']['failed'] == 0 else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='osbrp',
        description='Exact linear-time repositioning for a single bike-sharing station',
    )
    parser.add_argument('--rules', help='rules YAML file (default: config/osbrp_rules.yml)')
    parser.add_argument('--log-level', help='DEBUG, INFO, WARNING or ERROR')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='optimal interventions for every visit')
    p.add_argument('instance')
    p.add_argument('--trajectory', help='write the induced trajectory as CSV')
    p.add_argument('--json', action='store_true', help='machine-readable output')
    p.add_argument('--uncapacitated', action='store_true', help='ignore vehicle loads and capacities')
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser('simulate', help='loss of a given intervention vector')
    p.add_argument('instance')
    p.add_argument('--interventions', required=True, help='comma-separated, one per visit')
    p.add_argument('--trajectory', help='write the trajectory as CSV')
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser('oracle', help='compare the solver with exhaustive search')
    p.add_argument('instance')
    p.add_argument('--limit', type=int, help='largest search space to enumerate')
    p.add_argument('--uncapacitated', action='store_true')
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser('gen', help='write a seeded random instance')
    p.add_argument('--epochs', type=int)
    p.add_argument('--visits', type=int)
    p.add_argument('--capacity', type=int)
    p.add_argument('--demand-range', help='A,B')
    p.add_argument('--vehicle-capacity-range', help='A,B')
    p.add_argument('--initial-stock', type=int, help='fixed initial stock (default: uniform)')
    p.add_argument('--seed', type=int)
    p.add_argument('-o', '--output', required=True)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser('bench', help='time solve on doubling horizons')
    p.add_argument('--sizes', help='S1,S2,...')
    p.add_argument('--visits', type=int)
    p.add_argument('--repeats', type=int)
    p.add_argument('--seed', type=int)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser('export-lp', help='write the LP file of an instance')
    p.add_argument('instance')
    p.add_argument('--relax', action='store_true', help='omit the Generals section')
    p.add_argument('-o', '--output', required=True)
    p.set_defaults(handler=cmd_export_lp)

    p = sub.add_parser('validate', help='batch oracle comparison on random instances')
    p.add_argument('--count', type=int)
    p.add_argument('--seed', type=int)
    p.add_argument('--uncapacitated', action='store_true')
    p.add_argument('-o', '--output', help='write the results as JSON')
    p.set_defaults(handler=cmd_validate)
    return parser


def exit_code_for(error: Exception) -> int:
    if isinstance(error, SearchSpaceTooLarge):
        return EXIT_LIMIT
    if isinstance(error, (InvariantViolation, ContractError)):
        return EXIT_INVARIANT
    return EXIT_INPUT


LIST_FLAGS = ('--interventions', '--demand-range', '--vehicle-capacity-range', '--sizes')


def join_list_values(argv: Sequence[str]) -> List[str]:
    """
    Rewrite `--flag -2,0` as `--flag=-2,0` for the list-valued flags.

    argparse reads a separate token like -2,0 as an option, not a value.
    """
    joined: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        following = tokens[i + 1] if i + 1 < len(tokens) else None
        if (token in LIST_FLAGS and following is not None
                and len(following) > 1 and following[0] == '-' and following[1].isdigit()):
            joined.append(f"{token}={following}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(join_list_values(sys.argv[1:] if argv is None else argv))
    logging.basicConfig(
        level=(args.log_level or log_level()).upper(),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )

    try:
        settings = load_settings(args.rules)
        return args.handler(args, settings)
    except (OsbrpError, OSError) as e:
        print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == '__main__':
    sys.exit(main())
