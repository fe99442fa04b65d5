import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from helpers import single_visit_instance
from osbrp.exceptions import ContractError, EpochRangeError, InputError
from osbrp.model import Instance, Visit, null_trajectory, simulate, with_initial_stock
from osbrp.one_intervention import (
    AugmentationOverride,
    OptimalInterval,
    evaluate_intervention,
    intervention_box,
    optimal_interval,
    vehicle_intervention,
)
from osbrp.oracle import sweep_1d, wide_bracket


def local_for(instance, record_trace=False):
    """Single-visit problem on [e, m] for a one-visit instance"""
    visit = instance.visits[0]
    base = null_trajectory(instance)
    local = vehicle_intervention(base, instance.capacity, visit.epoch, instance.m,
                                 visit.load, visit.vehicle_capacity, record_trace=record_trace)
    return base, local


class TestVehicleIntervention:
    def test_no_losses(self):
        base = null_trajectory(Instance(10, 5, [1, -1, 2]))
        local = vehicle_intervention(base, 10, 1, 3, 2, 4)
        assert (local.x_unconstrained, local.loss_unconstrained) == (0, 0)
        assert (local.x_constrained, local.loss_constrained) == (0, 0)

    def test_surplus_recovered_by_pickup(self):
        base = null_trajectory(Instance(10, 10, [2, 0, 0]))
        local = vehicle_intervention(base, 10, 1, 3, 0, 1)
        assert (local.x_unconstrained, local.loss_unconstrained) == (-2, 0)
        assert (local.x_constrained, local.loss_constrained) == (-1, 1)

    def test_surplus_after_empty_station_is_lost(self):
        base = null_trajectory(Instance(5, 1, [-1, 6]))
        local = vehicle_intervention(base, 5, 1, 2, 5, 5)
        assert (local.x_unconstrained, local.loss_unconstrained) == (0, 1)
        assert (local.x_constrained, local.loss_constrained) == (0, 1)

    def test_stockout_recovered_by_unload(self):
        base = null_trajectory(Instance(10, 0, [-3, 0]))
        local = vehicle_intervention(base, 10, 1, 2, 5, 5)
        assert (local.x_unconstrained, local.loss_unconstrained) == (3, 0)
        assert (local.x_constrained, local.loss_constrained) == (3, 0)

    def test_unbounded_vehicle(self):
        base = null_trajectory(Instance(10, 10, [2, 0, 0]))
        local = vehicle_intervention(base, 10, 1, 3, None, None)
        assert local.x_constrained == local.x_unconstrained == -2

    def test_augmented_stockout_is_recovered_early(self):
        instance = Instance(10, 5, [0, 0, -8, 0])
        base = null_trajectory(instance)
        local = vehicle_intervention(base, 10, 1, 3, 5, 10, AugmentationOverride(3))
        assert (local.x_unconstrained, local.loss_unconstrained) == (3, 0)
        assert local.loss_unaugmented == 0
        assert local.delta == 3

    def test_bad_ranges(self):
        base = null_trajectory(Instance(10, 5, [0, 0, 0]))
        with pytest.raises(EpochRangeError):
            vehicle_intervention(base, 10, 2, 1, 0, 0)
        with pytest.raises(EpochRangeError):
            vehicle_intervention(base, 10, 1, 4, 0, 0)
        with pytest.raises(EpochRangeError):
            vehicle_intervention(base, 10, 2, 2, 0, 0, AugmentationOverride(1))

    def test_non_null_base_rejected(self):
        instance = Instance(10, 5, [0, 0], [Visit(1, 2, 2)])
        trajectory, _ = simulate(instance, [2])
        with pytest.raises(ContractError):
            vehicle_intervention(trajectory, 10, 1, 2, 0, 0)

    def test_infeasible_load(self):
        with pytest.raises(InputError):
            intervention_box(3, 2)
        assert intervention_box(2, None)[1] == 2


class TestAgainstSweep:
    """Seeded single-visit instances checked against the exhaustive 1-D sweep"""

    def test_constrained_optimum_matches_sweep(self):
        rng = np.random.Generator(np.random.PCG64(2024))
        for _ in range(500):
            instance = single_visit_instance(rng)
            visit = instance.visits[0]
            base, local = local_for(instance)

            feasible = sweep_1d(instance, (visit.lower, visit.upper))
            assert local.loss_constrained == min(feasible.values())
            assert feasible[local.x_constrained] == local.loss_constrained

            wide = sweep_1d(instance, wide_bracket(instance)[0])
            assert local.loss_unconstrained == min(wide.values())
            assert wide[local.x_unconstrained] == local.loss_unconstrained

            # scan invariant after the last epoch
            assert (local.loss_unconstrained + abs(local.x_unconstrained)
                    == base.loss_between(visit.epoch, instance.m))

            null_end = base.stock[-1]
            for x in (local.x_unconstrained, local.x_constrained):
                relaxed = Instance(instance.capacity, instance.initial_stock, instance.demand,
                                   [Visit(visit.epoch, max(x, 0), abs(x))])
                trajectory, _ = simulate(relaxed, [x])
                assert trajectory.stock[-1] == null_end

    def test_minimum_modulus_choice(self):
        rng = np.random.Generator(np.random.PCG64(77))
        for _ in range(200):
            instance = single_visit_instance(rng)
            _, local = local_for(instance)
            wide = sweep_1d(instance, wide_bracket(instance)[0])
            best = min(wide.values())
            smallest = min((x for x, loss in wide.items() if loss == best), key=abs)
            assert abs(local.x_unconstrained) == abs(smallest)

    def test_interval_geometry(self):
        rng = np.random.Generator(np.random.PCG64(99))
        loss_free = lossy = 0
        for _ in range(5000):
            if loss_free >= 100 and lossy >= 100:
                break
            instance = single_visit_instance(rng)
            visit = instance.visits[0]
            base, local = local_for(instance)
            interval = optimal_interval(base, instance.capacity, visit.epoch, instance.m, local)
            wide = sweep_1d(instance, wide_bracket(instance)[0])
            best = local.loss_unconstrained
            for x, loss in wide.items():
                assert loss == best + interval.distance(x)
            if best > 0:
                assert interval.is_singleton
                lossy += 1
            else:
                loss_free += 1

            capped = optimal_interval(base, instance.capacity, visit.epoch, instance.m, local,
                                      visit.load, visit.vehicle_capacity)
            feasible = sweep_1d(instance, (visit.lower, visit.upper))
            optimal = {x for x, loss in feasible.items() if loss == local.loss_constrained}
            assert optimal == set(range(capped.lower, capped.upper + 1))
        assert loss_free >= 100 and lossy >= 100

    def test_initial_stock_shifts_interval(self):
        rng = np.random.Generator(np.random.PCG64(5))
        checked = 0
        while checked < 120:
            instance = single_visit_instance(rng)
            instance = Instance(instance.capacity, instance.initial_stock, instance.demand,
                                [Visit(1, 0, 0)])
            shifted_stock = int(rng.integers(0, instance.capacity + 1))
            shift = shifted_stock - instance.initial_stock
            moved = with_initial_stock(instance, shifted_stock)

            base, local = local_for(instance)
            base_moved, local_moved = local_for(moved)
            assert local.loss_unconstrained == local_moved.loss_unconstrained

            interval = optimal_interval(base, instance.capacity, 1, instance.m, local)
            interval_moved = optimal_interval(base_moved, moved.capacity, 1, moved.m, local_moved)
            assert (interval_moved.lower, interval_moved.upper) == (interval.lower - shift,
                                                                    interval.upper - shift)
            checked += 1

    def test_initial_stock_shift_keeps_pinned_intervention(self):
        rng = np.random.Generator(np.random.PCG64(13))
        pinned_instances = 0
        for _ in range(5000):
            if pinned_instances >= 100:
                break
            drawn = single_visit_instance(rng)
            Q = int(rng.integers(1, 6))
            q = int(rng.integers(0, Q + 1))
            instance = Instance(drawn.capacity, drawn.initial_stock, drawn.demand, [Visit(1, q, Q)])
            _, local = local_for(instance)

            for stock in range(instance.capacity + 1):
                _, moved = local_for(with_initial_stock(instance, stock))
                assert moved.loss_unconstrained == local.loss_unconstrained

            x_inf = local.x_unconstrained
            if x_inf >= q:
                shifts, pin = range(0, x_inf - q + 1), q
            elif x_inf <= q - Q:
                shifts, pin = range(x_inf - (q - Q), 1), q - Q
            else:
                continue
            assert local.x_constrained == pin

            walked = 0
            for delta in shifts:
                stock = instance.initial_stock + delta
                if not 0 <= stock <= instance.capacity:
                    continue
                _, moved = local_for(with_initial_stock(instance, stock))
                assert moved.x_unconstrained == x_inf - delta
                assert moved.x_constrained == pin
                walked += 1
            if walked > 1:
                pinned_instances += 1
        assert pinned_instances >= 100


class TestTrace:
    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=100)
    def test_scan_invariant_every_epoch(self, seed):
        instance = single_visit_instance(np.random.Generator(np.random.PCG64(seed)))
        visit = instance.visits[0]
        base, local = local_for(instance, record_trace=True)
        assert len(local.trace) == instance.m - visit.epoch + 1
        for step in local.trace:
            assert step.loss + abs(step.x) == base.loss_between(visit.epoch, step.epoch)

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=100)
    def test_sign_purity(self, seed):
        instance = single_visit_instance(np.random.Generator(np.random.PCG64(seed)))
        base, local = local_for(instance, record_trace=True)
        surplus_exhausted = stockout_exhausted = False
        for step in local.trace:
            assert not (step.recovered_surplus > 0 and step.recovered_stockout > 0)
            if surplus_exhausted:
                assert step.recovered_surplus == 0
            if stockout_exhausted:
                assert step.recovered_stockout == 0
            h = step.epoch - 1
            if base.surplus_loss[h] > step.recovered_surplus:
                surplus_exhausted = True
            if base.stockout_loss[h] > step.recovered_stockout:
                stockout_exhausted = True


class TestOptimalInterval:
    def test_flat_stock(self):
        base = null_trajectory(Instance(10, 5, [0]))
        local = vehicle_intervention(base, 10, 1, 1, None, None)
        assert optimal_interval(base, 10, 1, 1, local) == OptimalInterval(-5, 5)

    def test_full_station(self):
        base = null_trajectory(Instance(10, 10, [2, 0, 0]))
        local = vehicle_intervention(base, 10, 1, 3, None, None)
        interval = optimal_interval(base, 10, 1, 3, local)
        assert (interval.lower, interval.upper) == (-12, -2)
        assert -7 in interval
        assert interval.distance(-15) == 3
        assert interval.distance(5) == 7

    def test_positive_loss_is_singleton(self):
        base = null_trajectory(Instance(5, 1, [-1, 6]))
        local = vehicle_intervention(base, 5, 1, 2, None, None)
        interval = optimal_interval(base, 5, 1, 2, local)
        assert interval.is_singleton
        assert interval.lower == local.x_unconstrained

    def test_capacitated_clamp(self):
        base = null_trajectory(Instance(10, 10, [2, 0, 0]))
        local = vehicle_intervention(base, 10, 1, 3, 0, 1)
        assert optimal_interval(base, 10, 1, 3, local, 0, 1) == OptimalInterval(-1, -1)
        local = vehicle_intervention(base, 10, 1, 3, 0, 20)
        assert optimal_interval(base, 10, 1, 3, local, 0, 20) == OptimalInterval(-12, -2)

    def test_mismatched_local_rejected(self):
        base = null_trajectory(Instance(10, 10, [2, 0, 0]))
        local = vehicle_intervention(base, 10, 1, 3, None, None)
        with pytest.raises(ContractError):
            optimal_interval(base, 10, 1, 2, local)

    def test_empty_interval_rejected(self):
        with pytest.raises(ContractError):
            OptimalInterval(3, 2)


class TestEvaluateIntervention:
    def test_matches_simulation_on_interval(self):
        instance = Instance(5, 2, [3, -4, 1, 2], [Visit(2, 1, 3)])
        base = null_trajectory(instance)
        for x in range(-2, 2):
            loss, stocks = evaluate_intervention(base, 5, 2, 4, x)
            trajectory, _ = simulate(instance, [x])
            assert loss == trajectory.loss_between(2, 4)
            assert stocks == list(trajectory.stock[1:])

    def test_augmented_epoch_loses_delta(self):
        base = null_trajectory(Instance(10, 5, [0, 0, -8, 0]))
        assert evaluate_intervention(base, 10, 1, 3, 0, AugmentationOverride(3))[0] == 3
        assert evaluate_intervention(base, 10, 1, 3, 3, AugmentationOverride(3))[0] == 0
        loss, stocks = evaluate_intervention(base, 10, 1, 3, 0, AugmentationOverride(-2))
        assert loss == 2
        assert stocks[-1] == 10
