"""
Oracle Validation Suite
Batch comparison of the linear-time solver against exhaustive search
"""

import logging
from datetime import datetime
from typing import Any, Dict, List, Optional

import numpy as np

from .exceptions import InvariantViolation
from .global_solver import solve, solve_uncapacitated, verify_solution
from .instance_io import GeneratorConfig, generate, instance_to_document
from .model import Instance
from .oracle import brute_force, wide_bracket

logger = logging.getLogger(__name__)


def random_family(rng: np.random.Generator, family: Dict[str, Any]) -> Instance:
    """One instance drawn from the small-instance family described by `family`"""
    m = int(rng.integers(1, family.get('max_epochs', 12) + 1))
    w = int(rng.integers(0, min(family.get('max_visits', 3), m) + 1))
    C = int(rng.integers(0, family.get('max_station_capacity', 6) + 1))
    a, b = family.get('demand_range', [-8, 8])
    config = GeneratorConfig(
        epochs=m,
        visit_count=w,
        station_capacity=C,
        demand_range=(a, b),
        vehicle_capacity_range=(0, family.get('max_vehicle_capacity', 4)),
        seed=int(rng.integers(0, 2 ** 62)),
    )
    return generate(config)


def _check(check_name: str, index: int, ok: bool, message: str,
           instance: Optional[Instance] = None) -> Dict[str, Any]:
    record = {
        'check_name': check_name,
        'instance': index,
        'status': 'passed' if ok else 'failed',
        'severity': 'info' if ok else 'error',
        'message': message,
    }
    if instance is not None and not ok:
        record['document'] = instance_to_document(instance)
    return record


def run_oracle_suite(count: int, seed: int, family: Optional[Dict[str, Any]] = None,
                     uncapacitated: bool = False, limit: int = 200000) -> Dict[str, Any]:
    """
    Solve `count` seeded random instances and compare each with brute force.

    Capacitated runs also replay the solution through verify_solution.
    Returns the checks, the failing ones and a summary {total_checks, passed, failed}.
    """
    family = family or {}
    rng = np.random.Generator(np.random.PCG64(seed))
    results = {
        'suite': 'uncapacitated' if uncapacitated else 'capacitated',
        'timestamp': datetime.now().isoformat(),
        'count': count,
        'seed': seed,
        'checks': [],
        'summary': {'total_checks': 0, 'passed': 0, 'failed': 0},
    }

    for index in range(count):
        instance = random_family(rng, family)
        if uncapacitated:
            loss, _ = solve_uncapacitated(instance)
            oracle = brute_force(instance, bounds_override=wide_bracket(instance), limit=limit)
            results['checks'].append(_check(
                'uncapacitated_matches_oracle', index, loss == oracle.best_loss,
                f"solver {loss}, oracle {oracle.best_loss}", instance))
            continue

        solution = solve(instance)
        oracle = brute_force(instance, limit=limit)
        results['checks'].append(_check(
            'optimal_loss_matches_oracle', index, solution.total_loss == oracle.best_loss,
            f"solver {solution.total_loss}, oracle {oracle.best_loss}", instance))
        try:
            verify_solution(instance, solution)
            results['checks'].append(_check('solution_invariants', index, True, "replay consistent"))
        except InvariantViolation as e:
            results['checks'].append(_check('solution_invariants', index, False, str(e), instance))

    for check in results['checks']:
        results['summary']['total_checks'] += 1
        if check['status'] == 'passed':
            results['summary']['passed'] += 1
        else:
            results['summary']['failed'] += 1
    results['failures'] = failures(results)

    logger.info("%s suite: %d/%d checks passed", results['suite'],
                results['summary']['passed'], results['summary']['total_checks'])
    return results


def failures(results: Dict[str, Any]) -> List[Dict[str, Any]]:
    return [c for c in results['checks'] if c['status'] != 'passed']


def print_validation_results(results: Dict[str, Any]):
    """Print the suite results"""
    summary = results['summary']
    print(f"\n{'='*80}")
    print(f"ORACLE VALIDATION: {results['suite']} ({results['count']} instances, seed {results['seed']})")
    print(f"{'='*80}")

    print(f"\n📊 Summary:")
    print(f"   Total checks: {summary['total_checks']}")
    print(f"   ✓ Passed: {summary['passed']}")
    print(f"   ✗ Failed: {summary['failed']}")

    failed = failures(results)
    if failed:
        print(f"\n🔍 Failures:")
        for check in failed[:20]:
            print(f"   ✗ instance {check['instance']} {check['check_name']}: {check['message']}")
        if len(failed) > 20:
            print(f"   ... {len(failed) - 20} more")
    else:
        print(f"\n✅ All validation cases passed!")

    print(f"\n{'='*80}\n")
