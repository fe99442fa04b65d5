"""
Brute-Force Oracle
Exhaustive enumeration of integer intervention vectors on small instances
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import ContractError, InputError, SearchSpaceTooLarge
from .model import Instance, Visit, null_trajectory, simulate_loss

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 200000
DEFAULT_MAX_VECTORS = 64


@dataclass
class OracleResult:
    """Exact minimum over the searched box and (some of) the vectors reaching it"""
    best_loss: int
    best_vectors: List[Tuple[int, ...]] = field(default_factory=list)
    overflow: bool = False
    search_space_size: int = 0


def feasible_box(instance: Instance) -> List[Tuple[int, int]]:
    return [(v.lower, v.upper) for v in instance.visits]


def wide_bracket(instance: Instance) -> List[Tuple[int, int]]:
    """
    Per-visit bracket [-(C + sum|d|), C + sum|d|]: no intervention larger in
    magnitude than the station capacity plus the total absolute demand helps.
    """
    radius = instance.capacity + sum(abs(d) for d in instance.demand)
    return [(-radius, radius)] * instance.w


def search_space_size(bounds: Sequence[Tuple[int, int]]) -> int:
    return math.prod(hi - lo + 1 for lo, hi in bounds)


def brute_force(
    instance: Instance,
    bounds_override: Optional[Sequence[Tuple[int, int]]] = None,
    limit: int = DEFAULT_LIMIT,
    max_vectors: int = DEFAULT_MAX_VECTORS,
) -> OracleResult:
    """
    Simulate every integer vector of the box and keep the minimum full-horizon loss.

    The box is the feasible one, [q_i - Q_i, q_i] per visit, unless
    `bounds_override` replaces it (e.g. `wide_bracket` for uncapacitated
    checks). Optimal vectors are collected in lexicographic order up to
    `max_vectors`; `overflow` tells whether more exist.
    """
    bounds = list(bounds_override) if bounds_override is not None else feasible_box(instance)
    if len(bounds) != instance.w:
        raise InputError(f"expected {instance.w} bounds, got {len(bounds)}")
    if any(lo > hi for lo, hi in bounds):
        raise InputError(f"empty interval in bounds {bounds}")
    size = search_space_size(bounds)
    if size > limit:
        raise SearchSpaceTooLarge(size, limit)

    if instance.w == 0:
        loss = null_trajectory(instance).total_loss
        return OracleResult(best_loss=loss, best_vectors=[()], search_space_size=1)

    # the override box may leave the feasible window, so evaluate on a relaxed copy
    relaxed = widen_windows(instance, bounds) if bounds_override is not None else instance
    best = None
    vectors: List[Tuple[int, ...]] = []
    overflow = False
    for x in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)):
        loss = simulate_loss(relaxed, x)
        if best is None or loss < best:
            best = loss
            vectors = [x]
            overflow = False
        elif loss == best:
            if len(vectors) < max_vectors:
                vectors.append(x)
            else:
                overflow = True

    logger.debug("oracle enumerated %d vectors, best loss %d", size, best)
    return OracleResult(best_loss=best, best_vectors=vectors, overflow=overflow, search_space_size=size)


def widen_windows(instance: Instance, bounds: Sequence[Tuple[int, int]]) -> Instance:
    """Copy whose vehicle windows contain `bounds` (load = upper end, capacity = width)"""
    visits = []
    for visit, (lo, hi) in zip(instance.visits, bounds):
        top = max(hi, visit.upper, 0)
        bottom = min(lo, visit.lower, 0)
        visits.append(Visit(visit.epoch, top, top - bottom))
    return Instance(instance.capacity, instance.initial_stock, instance.demand, visits)


def sweep_1d(instance: Instance, bracket: Tuple[int, int]) -> Dict[int, int]:
    """
    Loss on [e_1, m] for every x of `bracket` at the single visit of `instance`.

    Used to read off the V-shaped loss profile around the optimal interval.
    """
    if instance.w != 1:
        raise ContractError(f"sweep_1d needs exactly one visit, instance has {instance.w}")
    lo, hi = bracket
    if lo > hi:
        raise InputError(f"empty bracket [{lo}, {hi}]")
    relaxed = widen_windows(instance, [bracket])
    start = instance.visits[0].epoch
    return {x: simulate_loss(relaxed, [x], from_epoch=start) for x in range(lo, hi + 1)}
