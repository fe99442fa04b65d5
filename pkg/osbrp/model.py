"""
Station Model
Problem data and the deterministic stock/loss dynamics of a single station
"""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exceptions import EpochRangeError, FeasibilityError, InputError, InstanceValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Visit:
    """A scheduled vehicle visit: epoch, bikes on board, vehicle capacity"""
    epoch: int
    load: int
    vehicle_capacity: int

    @property
    def lower(self) -> int:
        """Largest pickup expressed as a (negative) intervention"""
        return self.load - self.vehicle_capacity

    @property
    def upper(self) -> int:
        return self.load


@dataclass(frozen=True)
class Instance:
    """
    One station over a discrete horizon.

    Epochs are 1-based everywhere in the public interface: demand[0] is the
    net flow of epoch 1. Positive demand adds bikes to the station, a positive
    intervention unloads bikes from the vehicle.
    """
    capacity: int
    initial_stock: int
    demand: Tuple[int, ...]
    visits: Tuple[Visit, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'demand', tuple(self.demand))
        object.__setattr__(self, 'visits', tuple(self.visits))
        checks = check_instance(self.capacity, self.initial_stock, self.demand, self.visits)
        failed = [c for c in checks if c['status'] == 'failed']
        if failed:
            raise InstanceValidationError(failed[0]['field'], failed[0]['message'], checks)

    @property
    def m(self) -> int:
        return len(self.demand)

    @property
    def w(self) -> int:
        return len(self.visits)

    @property
    def visit_epochs(self) -> Tuple[int, ...]:
        return tuple(v.epoch for v in self.visits)


@dataclass(frozen=True)
class BaseTrajectory:
    """
    Per-epoch stock and losses of one simulated intervention vector.

    Besides the four state vectors it keeps the inputs that produced them
    (initial stock, capacity, demand and the per-epoch intervention, 0 off
    visit), so a trajectory can be exported or re-simulated on its own.
    """
    virtual_stock: Tuple[int, ...]
    surplus_loss: Tuple[int, ...]
    stockout_loss: Tuple[int, ...]
    stock: Tuple[int, ...]
    initial_stock: int = 0
    capacity: int = 0
    demand: Tuple[int, ...] = ()
    intervention: Tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.stock)

    @property
    def total_loss(self) -> int:
        return sum(self.surplus_loss) + sum(self.stockout_loss)

    @property
    def is_null(self) -> bool:
        return not any(self.intervention)

    def loss_between(self, from_epoch: int, to_epoch: int) -> int:
        """Total loss on the closed epoch range [from_epoch, to_epoch]; empty range gives 0"""
        if to_epoch < from_epoch:
            return 0
        _check_range(from_epoch, to_epoch, self.m)
        lo, hi = from_epoch - 1, to_epoch
        return sum(self.surplus_loss[lo:hi]) + sum(self.stockout_loss[lo:hi])

    def stock_before(self, epoch: int) -> int:
        """Stock at the end of epoch - 1 (the initial stock for epoch 1)"""
        if epoch == 1:
            return self.initial_stock
        return self.stock[epoch - 2]


@dataclass(frozen=True)
class TrajectoryDiagnostics:
    """First-loss epochs and stock extremes over an epoch range (None: no such loss)"""
    from_epoch: int
    to_epoch: int
    first_surplus_epoch: Optional[int]
    first_stockout_epoch: Optional[int]
    running_min_stock: int
    running_max_stock: int


def _record(check_name: str, field: str, ok: bool, message: str) -> Dict[str, Any]:
    return {
        'check_name': check_name,
        'field': field,
        'status': 'passed' if ok else 'failed',
        'severity': 'info' if ok else 'error',
        'message': message,
    }


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def check_instance(capacity: Any, initial_stock: Any, demand: Sequence[Any],
                   visits: Sequence[Any]) -> List[Dict[str, Any]]:
    """
    Run every instance invariant and return one check record per invariant.

    Records follow the sanity-check layout: check_name, field, status
    ('passed'/'failed'), severity and a message.
    """
    checks = []

    ok = _is_int(capacity) and capacity >= 0
    checks.append(_record('capacity_non_negative', 'capacity', ok,
                          f"capacity must be a non-negative integer, got {capacity!r}"
                          if not ok else "capacity is valid"))
    cap_ok = ok

    ok = _is_int(initial_stock) and initial_stock >= 0
    if ok and cap_ok:
        ok = initial_stock <= capacity
        msg = (f"initial_stock {initial_stock} exceeds capacity {capacity}"
               if not ok else "initial_stock is within [0, capacity]")
    else:
        msg = (f"initial_stock must be a non-negative integer, got {initial_stock!r}"
               if not ok else "initial_stock is valid")
    checks.append(_record('initial_stock_in_range', 'initial_stock', ok, msg))

    m = len(demand)
    checks.append(_record('horizon_not_empty', 'demand', m >= 1,
                          "demand must contain at least one epoch" if m < 1 else f"{m} epochs"))
    bad = next((i for i, d in enumerate(demand) if not _is_int(d)), None)
    checks.append(_record('demand_integers', f'demand[{bad}]' if bad is not None else 'demand',
                          bad is None,
                          f"demand entries must be integers, got {demand[bad]!r}"
                          if bad is not None else "all demand entries are integers"))

    previous = 0
    for i, visit in enumerate(visits):
        prefix = f'visits[{i}]'
        epoch = getattr(visit, 'epoch', None)
        load = getattr(visit, 'load', None)
        vcap = getattr(visit, 'vehicle_capacity', None)

        ok = _is_int(epoch) and 1 <= epoch <= m
        checks.append(_record('visit_epoch_in_horizon', f'{prefix}.epoch', ok,
                              f"epoch must lie in [1, {m}], got {epoch!r}"
                              if not ok else "epoch in horizon"))
        if ok:
            increasing = epoch > previous
            checks.append(_record('visit_epochs_increasing', f'{prefix}.epoch', increasing,
                                  f"visit epochs must be strictly increasing, {epoch} follows {previous}"
                                  if not increasing else "epoch increases"))
            previous = epoch

        ok = _is_int(vcap) and vcap >= 0
        checks.append(_record('vehicle_capacity_non_negative', f'{prefix}.capacity', ok,
                              f"vehicle capacity must be a non-negative integer, got {vcap!r}"
                              if not ok else "vehicle capacity is valid"))
        if ok:
            load_ok = _is_int(load) and 0 <= load <= vcap
            checks.append(_record('visit_load_feasible', f'{prefix}.load', load_ok,
                                  f"load must satisfy q in [0, Q] = [0, {vcap}], got {load!r}"
                                  if not load_ok else "load within [0, Q]"))

    return checks


def _check_range(from_epoch: int, to_epoch: int, m: int):
    if not (1 <= from_epoch <= to_epoch <= m):
        raise EpochRangeError(f"epoch range [{from_epoch}, {to_epoch}] is not inside [1, {m}]")


def with_initial_stock(instance: Instance, initial_stock: int) -> Instance:
    """Copy of `instance` starting from another stock level"""
    return dataclasses.replace(instance, initial_stock=initial_stock)


def epoch_interventions(instance: Instance, interventions: Sequence[int]) -> List[int]:
    """
    Spread a per-visit intervention vector over the horizon (0 off visit).

    Raises InputError on a length mismatch and FeasibilityError (1-based visit
    index) when an entry leaves [q_i - Q_i, q_i].
    """
    if len(interventions) != instance.w:
        raise InputError(f"expected {instance.w} interventions, got {len(interventions)}")
    applied = [0] * instance.m
    for i, (visit, x) in enumerate(zip(instance.visits, interventions), start=1):
        if not (visit.lower <= x <= visit.upper):
            logger.debug("visit %d at epoch %d: intervention %s outside [%d, %d]",
                         i, visit.epoch, x, visit.lower, visit.upper)
            raise FeasibilityError(i, x, visit.lower, visit.upper)
        applied[visit.epoch - 1] = int(x)
    return applied


def _run(instance: Instance, applied: List[int]) -> BaseTrajectory:
    C = instance.capacity
    demand = instance.demand
    m = len(demand)
    virtual = [0] * m
    surplus = [0] * m
    stockout = [0] * m
    stock = [0] * m
    s = instance.initial_stock
    for h, (d, x) in enumerate(zip(demand, applied)):
        v = s + d + x
        virtual[h] = v
        if v > C:
            surplus[h] = v - C
            s = C
        elif v < 0:
            stockout[h] = -v
            s = 0
        else:
            s = v
        stock[h] = s
    return BaseTrajectory(
        virtual_stock=tuple(virtual),
        surplus_loss=tuple(surplus),
        stockout_loss=tuple(stockout),
        stock=tuple(stock),
        initial_stock=instance.initial_stock,
        capacity=C,
        demand=demand,
        intervention=tuple(applied),
    )


def simulate(instance: Instance, interventions: Sequence[int]) -> Tuple[BaseTrajectory, int]:
    """
    Apply a feasible intervention vector and return (trajectory, total loss).

    At a visit epoch the virtual stock is s_prev + d + x, elsewhere s_prev + d;
    anything above the capacity is a surplus loss, anything below zero a
    stockout loss, and the stock is clamped to [0, C].
    """
    trajectory = _run(instance, epoch_interventions(instance, interventions))
    return trajectory, trajectory.total_loss


def simulate_loss(instance: Instance, interventions: Sequence[int], from_epoch: int = 1) -> int:
    """Loss of `interventions` on [from_epoch, m] without building a trajectory"""
    applied = epoch_interventions(instance, interventions)
    C = instance.capacity
    s = instance.initial_stock
    loss = 0
    start = from_epoch - 1
    for h, d in enumerate(instance.demand):
        v = s + d + applied[h]
        if v > C:
            if h >= start:
                loss += v - C
            s = C
        elif v < 0:
            if h >= start:
                loss -= v
            s = 0
        else:
            s = v
    return loss


def null_trajectory(instance: Instance) -> BaseTrajectory:
    """Trajectory of the all-zero intervention vector"""
    return _run(instance, [0] * instance.m)


def diagnostics(trajectory: BaseTrajectory, from_epoch: int, to_epoch: int) -> TrajectoryDiagnostics:
    """First surplus/stockout epochs and min/max stock on [from_epoch, to_epoch]"""
    _check_range(from_epoch, to_epoch, trajectory.m)
    lo, hi = from_epoch - 1, to_epoch
    first_surplus = next((h + 1 for h in range(lo, hi) if trajectory.surplus_loss[h] > 0), None)
    first_stockout = next((h + 1 for h in range(lo, hi) if trajectory.stockout_loss[h] > 0), None)
    window = trajectory.stock[lo:hi]
    return TrajectoryDiagnostics(
        from_epoch=from_epoch,
        to_epoch=to_epoch,
        first_surplus_epoch=first_surplus,
        first_stockout_epoch=first_stockout,
        running_min_stock=min(window),
        running_max_stock=max(window),
    )
