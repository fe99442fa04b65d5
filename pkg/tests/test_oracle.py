import pytest

from osbrp.exceptions import ContractError, InputError, SearchSpaceTooLarge
from osbrp.model import Instance, Visit, null_trajectory
from osbrp.oracle import brute_force, search_space_size, sweep_1d, wide_bracket


class TestBruteForce:
    def test_no_visits(self):
        instance = Instance(3, 1, [4, -6])
        result = brute_force(instance)
        assert result.best_loss == null_trajectory(instance).total_loss
        assert result.best_vectors == [()]

    def test_two_visits(self, two_visits):
        result = brute_force(two_visits)
        assert result.best_loss == 1
        assert (-2, 0) in result.best_vectors
        assert result.search_space_size == 121

    def test_zero_box_gives_null_loss(self, two_visits):
        result = brute_force(two_visits, bounds_override=[(0, 0), (0, 0)])
        assert result.best_loss == null_trajectory(two_visits).total_loss
        assert result.best_vectors == [(0, 0)]

    def test_override_may_leave_vehicle_window(self, two_visits):
        result = brute_force(two_visits, bounds_override=wide_bracket(two_visits))
        assert result.best_loss == 0
        assert (-2, 1) in result.best_vectors

    def test_limit(self, two_visits):
        with pytest.raises(SearchSpaceTooLarge) as err:
            brute_force(two_visits, limit=10)
        assert err.value.size == 121
        assert err.value.limit == 10

    def test_overflow_flag(self):
        instance = Instance(10, 5, [0, 0], [Visit(1, 2, 4), Visit(2, 2, 4)])
        result = brute_force(instance, max_vectors=10)
        assert result.best_loss == 0
        assert len(result.best_vectors) == 10
        assert result.best_vectors[0] == (-2, -2)
        assert result.overflow

    def test_bad_bounds(self, two_visits):
        with pytest.raises(InputError):
            brute_force(two_visits, bounds_override=[(0, 0)])
        with pytest.raises(InputError):
            brute_force(two_visits, bounds_override=[(1, 0), (0, 0)])

    def test_wide_bracket(self, two_visits):
        assert wide_bracket(two_visits) == [(-18, 18), (-18, 18)]
        assert search_space_size(wide_bracket(two_visits)) == 37 ** 2


class TestSweep:
    def test_full_station(self):
        instance = Instance(10, 10, [2, 0, 0], [Visit(1, 0, 0)])
        profile = sweep_1d(instance, (-15, 5))
        for x, loss in profile.items():
            assert loss == max(0, -12 - x, x + 2)

    def test_zero_demand_profile(self):
        instance = Instance(4, 1, [0, 0], [Visit(1, 0, 0)])
        profile = sweep_1d(instance, (-6, 6))
        assert profile == {x: max(0, x - 3, -(x + 1)) for x in range(-6, 7)}

    def test_single_entry(self):
        instance = Instance(4, 1, [0, 0], [Visit(2, 0, 0)])
        assert sweep_1d(instance, (2, 2)) == {2: 0}

    def test_losses_before_visit_excluded(self):
        instance = Instance(4, 0, [-3, 0], [Visit(2, 0, 0)])
        assert sweep_1d(instance, (0, 0)) == {0: 0}

    def test_needs_single_visit(self, two_visits):
        with pytest.raises(ContractError):
            sweep_1d(two_visits, (0, 1))
