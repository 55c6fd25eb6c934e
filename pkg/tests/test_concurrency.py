from __future__ import annotations

import math

import pytest

from fabcarbon import (
    GridSpec,
    KernelProfile,
    ScaleMode,
    average_utilization,
    fabric_footprint,
    packing_feasible,
    scale_factor,
)
from fabcarbon.concurrency import pe_demand
from fabcarbon.errors import EmptyKernelSet, InvalidScale


def _kernel(name, util):
    return KernelProfile(name, "test", 0.3, 0.3, util, 1.0)


GRID_8X8 = GridSpec(8, 8)


class TestAverageUtilization:
    def test_builtin_dataset_mean(self, dataset):
        assert average_utilization(list(dataset.kernels)) == pytest.approx(0.64, abs=1e-12)

    def test_saturated_kernels(self):
        kernels = [_kernel(f"k{i}", 1.0) for i in range(3)]
        assert average_utilization(kernels) == 1.0

    def test_two_kernel_mean(self):
        assert average_utilization([_kernel("a", 1.0), _kernel("b", 0.26)]) == pytest.approx(0.63)

    def test_empty_rejected(self):
        with pytest.raises(EmptyKernelSet):
            average_utilization([])


class TestScaleFactor:
    def test_displayed_reference_factors(self, dataset):
        # 1.28 / 1.92 / 2.56, shown as 1.3x / 1.9x / 2.6x at one decimal
        kernels = list(dataset.kernels)
        mode = ScaleMode.average_utilization()
        for n, expected in ((2, 1.28), (3, 1.92), (4, 2.56)):
            assert scale_factor(n, mode, kernels) == pytest.approx(expected, abs=1e-12)

    def test_single_kernel_clamps_to_one(self, dataset):
        assert scale_factor(1, ScaleMode.average_utilization(), list(dataset.kernels)) == 1.0

    def test_conservative_equals_n(self):
        for n in range(1, 6):
            assert scale_factor(n, ScaleMode.conservative()) == float(n)

    def test_explicit_override_wins(self):
        assert scale_factor(4, ScaleMode.explicit(1.9), mean_utilization=0.2) == 1.9

    def test_explicit_below_one_rejected(self):
        with pytest.raises(InvalidScale):
            ScaleMode.explicit(0.5)

    def test_monotone_in_n_and_utilization(self):
        mode = ScaleMode.average_utilization()
        values = [scale_factor(n, mode, mean_utilization=0.6) for n in range(1, 8)]
        assert values == sorted(values)
        by_util = [scale_factor(3, mode, mean_utilization=u) for u in (0.2, 0.5, 0.8, 1.0)]
        assert by_util == sorted(by_util)
        assert all(v >= 1.0 for v in values + by_util)

    def test_never_exceeds_conservative_fabric(self, dataset):
        kernels = list(dataset.kernels)
        for n in range(1, 6):
            avg = fabric_footprint(scale_factor(n, ScaleMode.average_utilization(), kernels))
            cons = fabric_footprint(scale_factor(n, ScaleMode.conservative()))
            assert avg <= cons


class TestPacking:
    def test_exact_fit(self):
        result = packing_feasible([_kernel("a", 0.5), _kernel("b", 0.5)], GRID_8X8, 1.0)
        assert result.feasible
        assert result.allocations == (("a", 32), ("b", 32))
        assert result.allocated_pes == 64 == result.budget_pes

    def test_two_saturated_kernels_overflow(self):
        result = packing_feasible([_kernel("GeMM", 1.0), _kernel("FIR", 1.0)], GRID_8X8, 1.0)
        assert not result.feasible
        assert result.allocated_pes == 128 > result.budget_pes

    def test_ceil_and_floor_are_pessimistic(self):
        # 64 + ceil(28.8) = 93 demands vs floor(1.45 * 64) = 92 budget
        kernels = [_kernel("GeMM", 1.0), _kernel("Conv2D", 0.45)]
        tight = packing_feasible(kernels, GRID_8X8, 1.45)
        assert not tight.feasible and tight.budget_pes == 92
        roomy = packing_feasible(kernels, GRID_8X8, 1.5)
        assert roomy.feasible and roomy.allocated_pes == 93

    def test_constructive_witness_scale_is_feasible(self, dataset):
        kernels = list(dataset.kernels)
        demand = sum(pe_demand(k, GRID_8X8) for k in kernels)
        result = packing_feasible(kernels, GRID_8X8, demand / GRID_8X8.pe_count)
        assert result.feasible
        assert result.allocated_pes == demand == result.budget_pes

    def test_feasibility_implies_budget_respected(self):
        kernels = [_kernel(f"k{i}", 0.3) for i in range(5)]
        result = packing_feasible(kernels, GridSpec(4, 4), 2.0)
        if result.feasible:
            assert result.allocated_pes <= result.budget_pes

    def test_demand_rounds_up(self):
        assert pe_demand(_kernel("x", 0.45), GRID_8X8) == math.ceil(0.45 * 64)
        assert pe_demand(_kernel("x", 0.45), GridSpec(10, 10)) == 45  # not 46 from float noise
