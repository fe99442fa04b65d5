"""
Single Intervention Optimizer
Best loading/unloading quantity for one visit on an epoch interval
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .exceptions import ContractError, EpochRangeError, InputError
from .model import BaseTrajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AugmentationOverride:
    """
    Fictitious loss placed on the last scanned epoch.

    delta > 0 turns that epoch into a stockout of |delta| (stock 0),
    delta < 0 into a surplus of |delta| (stock C), delta == 0 leaves it alone.
    """
    delta: int = 0


NO_AUGMENTATION = AugmentationOverride(0)


@dataclass(frozen=True)
class ScanStep:
    """State of the forward scan right after one epoch"""
    epoch: int
    recovered_surplus: int
    recovered_stockout: int
    x: int
    loss: int


@dataclass(frozen=True)
class LocalResult:
    """
    Minimum-modulus optimal interventions and losses on [from_epoch, to_epoch].

    loss_unaugmented is the uncapacitated loss accumulated before the
    fictitious epoch (equal to loss_unconstrained when delta == 0).
    """
    x_unconstrained: int
    loss_unconstrained: int
    x_constrained: int
    loss_constrained: int
    from_epoch: int = 1
    to_epoch: int = 1
    delta: int = 0
    loss_unaugmented: int = 0
    trace: Tuple[ScanStep, ...] = ()


@dataclass(frozen=True)
class OptimalInterval:
    """Closed integer range of interventions that all attain the minimal loss"""
    lower: int
    upper: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ContractError(f"empty interval [{self.lower}, {self.upper}]")

    def __contains__(self, x: int) -> bool:
        return self.lower <= x <= self.upper

    @property
    def is_singleton(self) -> bool:
        return self.lower == self.upper

    def distance(self, x: int) -> int:
        """Distance from x to the nearest endpoint, 0 inside"""
        return max(0, self.lower - x, x - self.upper)


def intervention_box(load: Optional[int], vehicle_capacity: Optional[int]) -> Tuple[float, float]:
    """
    Feasible window [q - Q, q]. None stands for an unbounded quantity: an
    unbounded capacity opens the lower side, an unbounded load opens both.
    """
    if load is None:
        return -math.inf, math.inf
    if vehicle_capacity is None:
        return -math.inf, load
    if not (0 <= load <= vehicle_capacity):
        raise InputError(f"vehicle load {load} must lie in [0, {vehicle_capacity}]")
    return load - vehicle_capacity, load


def _check_interval(base: BaseTrajectory, capacity: int, from_epoch: int, to_epoch: int,
                    override: AugmentationOverride):
    if not (1 <= from_epoch <= to_epoch <= base.m):
        raise EpochRangeError(f"interval [{from_epoch}, {to_epoch}] is not inside [1, {base.m}]")
    if override.delta and to_epoch == from_epoch:
        raise EpochRangeError("an augmented interval needs at least two epochs")
    if not base.is_null:
        raise ContractError("the base trajectory must come from the null intervention")
    if base.capacity != capacity:
        raise ContractError(f"base trajectory capacity {base.capacity} differs from {capacity}")


def _augmented_entry(capacity: int, delta: int) -> Tuple[int, int, int]:
    """(surplus, stockout, stock) the fictitious demand produces under the null vector"""
    if delta > 0:
        return 0, delta, 0
    return -delta, 0, capacity


def vehicle_intervention(
    base: BaseTrajectory,
    capacity: int,
    from_epoch: int,
    to_epoch: int,
    load: Optional[int],
    vehicle_capacity: Optional[int],
    override: AugmentationOverride = NO_AUGMENTATION,
    record_trace: bool = False,
) -> LocalResult:
    """
    Solve the single-intervention problem on [from_epoch, to_epoch] in one scan.

    Starting from x = 0, every surplus met is recovered by a downshift bounded
    by the lowest stock seen so far (alpha), every stockout by an upshift
    bounded by the headroom above the highest stock seen so far (C - beta).
    Both trackers follow the stock of the current intervention, so the stock
    at the scanned epoch always equals the null stock there.

    Args:
        base: null trajectory of the instance
        capacity: station capacity C
        from_epoch: visit epoch (first scanned epoch)
        to_epoch: last scanned epoch; carries the fictitious loss when override.delta != 0
        load: bikes on board q, None for unbounded
        vehicle_capacity: vehicle capacity Q, None for unbounded
        override: augmentation applied at to_epoch
        record_trace: keep one ScanStep per epoch

    Returns:
        LocalResult with (x_inf, L_inf) and the clamped (x_Q, L_Q)
    """
    _check_interval(base, capacity, from_epoch, to_epoch, override)
    lower, upper = intervention_box(load, vehicle_capacity)

    surplus = base.surplus_loss
    stockout = base.stockout_loss
    stock = base.stock
    aug_index = to_epoch - 1 if override.delta else -1
    aug_entry = _augmented_entry(capacity, override.delta) if override.delta else None

    alpha = math.inf   # min stock under current x
    beta = -math.inf   # max stock under current x
    x = 0
    loss = 0
    loss_before_aug = 0
    trace: Optional[List[ScanStep]] = [] if record_trace else None

    for h in range(from_epoch - 1, to_epoch):
        if h == aug_index:
            loss_before_aug = loss
            lp, lm, s = aug_entry
        else:
            lp = surplus[h]
            lm = stockout[h]
            s = stock[h]

        if lp == 0 and lm == 0:
            if s < alpha:
                alpha = s
            if s > beta:
                beta = s
            if trace is not None:
                trace.append(ScanStep(h + 1, 0, 0, x, loss))
            continue

        dp = lp if lp < alpha else alpha
        headroom = capacity - beta
        dm = lm if lm < headroom else headroom
        x += dm - dp
        loss += (lp - dp) + (lm - dm)
        alpha -= dp
        if s < alpha:
            alpha = s
        beta += dm
        if s > beta:
            beta = s
        if trace is not None:
            trace.append(ScanStep(h + 1, int(dp), int(dm), x, loss))

    if aug_index < 0:
        loss_before_aug = loss

    x = int(x)
    loss = int(loss)
    if x < lower:
        x_q = int(lower)
        loss_q = loss + x_q - x
    elif x > upper:
        x_q = int(upper)
        loss_q = loss + x - x_q
    else:
        x_q = x
        loss_q = loss

    logger.debug("interval [%d, %d] delta=%d: x_inf=%d L_inf=%d x_Q=%d L_Q=%d",
                 from_epoch, to_epoch, override.delta, x, loss, x_q, loss_q)
    return LocalResult(
        x_unconstrained=x,
        loss_unconstrained=loss,
        x_constrained=x_q,
        loss_constrained=loss_q,
        from_epoch=from_epoch,
        to_epoch=to_epoch,
        delta=override.delta,
        loss_unaugmented=int(loss_before_aug),
        trace=tuple(trace) if trace is not None else (),
    )


def evaluate_intervention(
    base: BaseTrajectory,
    capacity: int,
    from_epoch: int,
    to_epoch: int,
    x: int,
    override: AugmentationOverride = NO_AUGMENTATION,
) -> Tuple[int, List[int]]:
    """
    Loss and stock levels on [from_epoch, to_epoch] when x is applied at
    from_epoch and the interval starts from the null stock.

    The fictitious demand of an augmented interval is the one that makes the
    null vector lose exactly |delta| at to_epoch.
    """
    _check_interval(base, capacity, from_epoch, to_epoch, override)
    aug_index = to_epoch - 1 if override.delta else -1
    if override.delta > 0:
        aug_demand = -base.stock_before(to_epoch) - override.delta
    else:
        aug_demand = capacity - base.stock_before(to_epoch) - override.delta

    s = base.stock_before(from_epoch)
    loss = 0
    stocks = []
    for h in range(from_epoch - 1, to_epoch):
        d = aug_demand if h == aug_index else base.demand[h]
        v = s + d
        if h == from_epoch - 1:
            v += x
        if v > capacity:
            loss += v - capacity
            s = capacity
        elif v < 0:
            loss -= v
            s = 0
        else:
            s = v
        stocks.append(s)
    return loss, stocks


def optimal_interval(
    base: BaseTrajectory,
    capacity: int,
    from_epoch: int,
    to_epoch: int,
    local: LocalResult,
    load: Optional[int] = None,
    vehicle_capacity: Optional[int] = None,
    override: AugmentationOverride = NO_AUGMENTATION,
) -> OptimalInterval:
    """
    Every optimal intervention of the interval as a closed range.

    A positive uncapacitated loss leaves x_inf as the only optimum. A zero
    loss admits any shift that keeps the induced stock inside [0, C]:
    [x_inf - min stock, x_inf + C - max stock]. With load/capacity given the
    range is clamped to the vehicle window (a single endpoint when disjoint).
    """
    if (local.from_epoch, local.to_epoch, local.delta) != (from_epoch, to_epoch, override.delta):
        raise ContractError(
            f"local result covers [{local.from_epoch}, {local.to_epoch}] delta={local.delta}, "
            f"asked for [{from_epoch}, {to_epoch}] delta={override.delta}"
        )

    x = local.x_unconstrained
    if local.loss_unconstrained > 0:
        lo = hi = x
    else:
        _, stocks = evaluate_intervention(base, capacity, from_epoch, to_epoch, x, override)
        lo = x - min(stocks)
        hi = x + capacity - max(stocks)

    if load is None and vehicle_capacity is None:
        return OptimalInterval(lo, hi)

    box_lo, box_hi = intervention_box(load, vehicle_capacity)
    if lo > box_hi:
        return OptimalInterval(int(box_hi), int(box_hi))
    if hi < box_lo:
        return OptimalInterval(int(box_lo), int(box_lo))
    return OptimalInterval(int(max(lo, box_lo)), int(min(hi, box_hi)))
