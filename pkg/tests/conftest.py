from __future__ import annotations

import pytest

from fabcarbon import AggregateRatios, FootprintWeights, builtin_dataset
from fabcarbon.scenarios import calibrated_aggregates


@pytest.fixture(scope="session")
def dataset():
    return builtin_dataset()


@pytest.fixture(scope="session")
def arithmetic_agg(dataset):
    from fabcarbon import aggregate

    return aggregate(list(dataset.kernels))


@pytest.fixture(scope="session")
def calibrated_agg():
    return calibrated_aggregates("I")


@pytest.fixture
def half_weights():
    return FootprintWeights(0.5)


@pytest.fixture
def unit_agg():
    # DSA identical to the fabric on both axes
    return AggregateRatios(area=1.0, energy=1.0, utilization=1.0, kernel_count=1)
