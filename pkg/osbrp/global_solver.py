"""
Global Solver
Optimal interventions for every scheduled visit in O(m)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from .exceptions import EpochRangeError, InvariantViolation
from .model import BaseTrajectory, Instance, null_trajectory, simulate
from .one_intervention import AugmentationOverride, LocalResult, vehicle_intervention

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StagePlan:
    """One stage of the backward pass: visit i on its (possibly augmented) interval"""
    stage: int
    interval_start: int
    interval_end: int
    local: LocalResult
    delegated_delta: int


@dataclass
class Solution:
    """Optimal intervention vector and its loss breakdown"""
    interventions: List[int]
    total_loss: int
    systemic_pre_visit_loss: int
    null_loss: int
    recovered_loss: int
    uncapacitated_loss: int
    stage_plans: List[StagePlan] = field(default_factory=list)

    @property
    def timing_limited_loss(self) -> int:
        """Loss caused only by vehicle loads and capacities"""
        return self.total_loss - self.uncapacitated_loss

    def to_dict(self) -> Dict[str, Any]:
        return {
            'interventions': list(self.interventions),
            'total_loss': self.total_loss,
            'null_loss': self.null_loss,
            'recovered_loss': self.recovered_loss,
            'systemic_pre_visit_loss': self.systemic_pre_visit_loss,
            'uncapacitated_loss': self.uncapacitated_loss,
            'timing_limited_loss': self.timing_limited_loss,
        }


def _pre_visit_loss(instance: Instance, base: BaseTrajectory) -> int:
    if instance.w == 0:
        return base.total_loss
    return base.loss_between(1, instance.visits[0].epoch - 1)


def _stage_bounds(instance: Instance) -> List[int]:
    # H_{w+1} = m + 1
    return [v.epoch for v in instance.visits] + [instance.m + 1]


def solve(instance: Instance) -> Solution:
    """
    Backward pass over the visits, last one first.

    Stage i solves its single-intervention problem on [e_i, e_{i+1} - 1],
    extended by the epoch e_{i+1} carrying a fictitious loss when the stage
    above could not apply its uncapacitated optimum (delta = x_inf - x_Q).
    The visit keeps x_Q; stages i > 1 book L_inf and hand delta down, stage 1
    books L_Q. Losses before the first visit are added as systemic loss.
    """
    base = null_trajectory(instance)
    systemic = _pre_visit_loss(instance, base)
    null_loss = base.total_loss

    if instance.w == 0:
        return Solution(
            interventions=[],
            total_loss=null_loss,
            systemic_pre_visit_loss=systemic,
            null_loss=null_loss,
            recovered_loss=0,
            uncapacitated_loss=null_loss,
        )

    bounds = _stage_bounds(instance)
    w = instance.w
    interventions = [0] * w
    plans: List[StagePlan] = []
    loss = 0
    uncapacitated = 0
    delta = 0
    for i in range(w - 1, -1, -1):
        visit = instance.visits[i]
        start = bounds[i]
        end = bounds[i + 1] if delta else bounds[i + 1] - 1
        local = vehicle_intervention(base, instance.capacity, start, end, visit.load,
                                     visit.vehicle_capacity, AugmentationOverride(delta))
        interventions[i] = local.x_constrained
        uncapacitated += local.loss_unaugmented
        loss += local.loss_unconstrained if i > 0 else local.loss_constrained
        delta = local.x_unconstrained - local.x_constrained
        plans.append(StagePlan(i + 1, start, end, local, delta))

    plans.reverse()
    total = loss + systemic
    logger.info("solved m=%d w=%d: total_loss=%d null_loss=%d", instance.m, w, total, null_loss)
    return Solution(
        interventions=interventions,
        total_loss=total,
        systemic_pre_visit_loss=systemic,
        null_loss=null_loss,
        recovered_loss=null_loss - total,
        uncapacitated_loss=uncapacitated + systemic,
        stage_plans=plans,
    )


def solve_uncapacitated(instance: Instance) -> Tuple[int, List[int]]:
    """
    Loss left when every vehicle can load or unload any amount.

    Nothing is ever delegated, so the visits decouple into independent
    single-intervention problems on [e_i, e_{i+1} - 1].
    """
    base = null_trajectory(instance)
    loss = _pre_visit_loss(instance, base)
    bounds = _stage_bounds(instance)
    interventions = []
    for i in range(instance.w):
        local = vehicle_intervention(base, instance.capacity, bounds[i], bounds[i + 1] - 1, None, None)
        interventions.append(local.x_unconstrained)
        loss += local.loss_unconstrained
    return loss, interventions


def prefix_loss(instance: Instance, interventions: Sequence[int], upto_stage: int) -> int:
    """Loss on [e_1, e_{i+1} - 1] ([e_1, m] for the last stage) under `interventions`"""
    if not (1 <= upto_stage <= instance.w):
        raise EpochRangeError(f"stage {upto_stage} is not inside [1, {instance.w}]")
    trajectory, _ = simulate(instance, interventions)
    bounds = _stage_bounds(instance)
    return trajectory.loss_between(bounds[0], bounds[upto_stage] - 1)


def verify_solution(instance: Instance, solution: Solution) -> None:
    """
    Replay the solution and check its post-conditions: feasibility, replayed
    loss equal to the reported one, terminal stock equal to the null one, and
    uncapacitated <= total <= null.
    """
    try:
        trajectory, replayed = simulate(instance, solution.interventions)
    except ValueError as e:
        raise InvariantViolation(f"solution is not feasible: {e}") from e
    if replayed != solution.total_loss:
        raise InvariantViolation(f"replayed loss {replayed} differs from reported {solution.total_loss}")
    base = null_trajectory(instance)
    if trajectory.stock[-1] != base.stock[-1]:
        raise InvariantViolation(
            f"terminal stock {trajectory.stock[-1]} differs from null terminal stock {base.stock[-1]}"
        )
    if not (solution.uncapacitated_loss <= solution.total_loss <= solution.null_loss):
        raise InvariantViolation(
            f"loss ordering broken: uncapacitated={solution.uncapacitated_loss} "
            f"total={solution.total_loss} null={solution.null_loss}"
        )
