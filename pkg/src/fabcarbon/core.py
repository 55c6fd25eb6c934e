"""Domain types and the two footprint functions.

Everything is expressed in units of one unscaled fabric: a kernel's
``area_norm``/``energy_norm`` are the dedicated accelerator's chip area and
energy divided by the fabric's, so the fabric itself scores 1.0 on both axes.
The combined footprint weighs the embodied share (chip area proxy) against
the operational share (energy proxy) with ``alpha_e2o`` in [0, 1].
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum

from .errors import (
    ConcurrencyExceedsPopulation,
    EmptyKernelSet,
    InvalidBreakdown,
    InvalidScale,
    InvalidTechNode,
    UnknownDeviceClass,
)


class MeanKind(str, Enum):
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"


class AlphaSource(str, Enum):
    EXPLICIT = "explicit"
    DEVICE_PRESET = "device_preset"
    BREAKDOWN = "breakdown"


class DeviceClass(str, Enum):
    WATCH = "watch"
    SMARTPHONE = "smartphone"
    LAPTOP = "laptop"
    MEDIUM_DESKTOP = "medium_desktop"
    HIGH_END_DESKTOP = "high_end_desktop"
    CONSOLE = "console"


# Embodied-footprint share bands per device class, from vendor lifecycle
# reports: battery-operated devices are embodied-dominated, always-on
# desktops and consoles operational-dominated.
DEVICE_ALPHA_BANDS: dict[DeviceClass, tuple[float, float]] = {
    DeviceClass.WATCH: (0.80, 0.85),
    DeviceClass.SMARTPHONE: (0.80, 0.85),
    DeviceClass.LAPTOP: (0.70, 0.75),
    DeviceClass.MEDIUM_DESKTOP: (0.55, 0.60),
    DeviceClass.HIGH_END_DESKTOP: (0.20, 0.25),
    DeviceClass.CONSOLE: (0.20, 0.25),
}

# Lifecycle percentages may carry report rounding; the sum check absorbs it.
BREAKDOWN_SUM_TOLERANCE = 0.5


@dataclass(frozen=True)
class KernelProfile:
    """One accelerated kernel, normalized against the fabric.

    ``utilization`` is the fraction of fabric compute resources the kernel
    occupies when mapped; ``estimated`` flags values that are constrained
    estimates rather than direct measurements.
    """

    name: str
    domain: str
    area_norm: float
    energy_norm: float
    utilization: float
    memory_kb: float
    estimated: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("kernel name must be non-empty")
        if not self.area_norm > 0:
            raise ValueError(f"kernel {self.name!r}: area_norm out of (0, inf): {self.area_norm!r}")
        if not self.energy_norm > 0:
            raise ValueError(
                f"kernel {self.name!r}: energy_norm out of (0, inf): {self.energy_norm!r}"
            )
        if not 0 < self.utilization <= 1:
            raise ValueError(
                f"kernel {self.name!r}: utilization out of (0, 1]: {self.utilization!r}"
            )
        if self.memory_kb < 0:
            raise ValueError(f"kernel {self.name!r}: memory_kb must be >= 0: {self.memory_kb!r}")
        if not isinstance(self.estimated, bool):
            raise ValueError(f"kernel {self.name!r}: estimated must be boolean: {self.estimated!r}")


@dataclass(frozen=True)
class AggregateRatios:
    """Scenario-level mean relative area, energy, and utilization."""

    area: float
    energy: float
    utilization: float
    kernel_count: int
    mean_kind: MeanKind = MeanKind.ARITHMETIC

    def __post_init__(self) -> None:
        if self.kernel_count < 1:
            raise ValueError(f"kernel_count must be >= 1: {self.kernel_count!r}")
        if not self.area > 0 or not self.energy > 0:
            raise ValueError("aggregate area and energy must be > 0")
        if not 0 < self.utilization <= 1:
            raise ValueError(f"aggregate utilization out of (0, 1]: {self.utilization!r}")


@dataclass(frozen=True)
class FootprintWeights:
    """Embodied-to-operational weight and where it came from."""

    alpha_e2o: float
    source: AlphaSource = AlphaSource.EXPLICIT

    def __post_init__(self) -> None:
        if not 0 <= self.alpha_e2o <= 1:
            raise ValueError(f"alpha_e2o out of [0, 1]: {self.alpha_e2o!r}")


@dataclass(frozen=True)
class DeviceBreakdown:
    """Lifecycle footprint percentages for one device, summing to 100."""

    production_pct: float
    transport_pct: float
    use_pct: float
    eol_pct: float
    device: str = ""

    def __post_init__(self) -> None:
        parts = (self.production_pct, self.transport_pct, self.use_pct, self.eol_pct)
        if any(p < 0 for p in parts):
            raise InvalidBreakdown(f"breakdown {self.device!r}: negative percentage in {parts}")
        total = sum(parts)
        if abs(total - 100.0) > BREAKDOWN_SUM_TOLERANCE:
            raise InvalidBreakdown(
                f"breakdown {self.device!r}: percentages sum to {total}, expected 100"
                f" +/- {BREAKDOWN_SUM_TOLERANCE}"
            )


@dataclass(frozen=True)
class TechNodeRecord:
    """Per-standard-cell area and embodied-footprint ratios, anchor node = 1."""

    node_name: str
    rel_area_per_cell: float
    rel_embodied_per_cell: float

    def __post_init__(self) -> None:
        if not self.rel_area_per_cell > 0 or not self.rel_embodied_per_cell > 0:
            raise InvalidTechNode(
                f"tech node {self.node_name!r}: ratios must be > 0, got "
                f"({self.rel_area_per_cell!r}, {self.rel_embodied_per_cell!r})"
            )


def aggregate(kernels: list[KernelProfile], mean_kind: MeanKind = MeanKind.ARITHMETIC) -> AggregateRatios:
    """Mean relative area, energy, and utilization over a kernel set."""
    if not kernels:
        raise EmptyKernelSet("cannot aggregate an empty kernel set")
    if mean_kind is MeanKind.ARITHMETIC:
        # exact-rational mean: identical inputs aggregate to themselves, bit for bit
        mean = statistics.mean
    else:
        mean = statistics.geometric_mean
    return AggregateRatios(
        area=mean([k.area_norm for k in kernels]),
        energy=mean([k.energy_norm for k in kernels]),
        utilization=mean([k.utilization for k in kernels]),
        kernel_count=len(kernels),
        mean_kind=mean_kind,
    )


def dsa_footprint(
    dsa_count: float,
    concurrency: int,
    weights: FootprintWeights,
    agg: AggregateRatios,
) -> float:
    """Combined footprint of a sea of DSAs, in unscaled-fabric units.

    The embodied term charges chip area for every integrated DSA; the
    operational term charges energy only for the concurrently active ones.
    ``dsa_count`` is an integer in practice, but real values are admitted so
    threshold analyses can evaluate the footprint at the break-even point.
    """
    if dsa_count <= 0:
        raise ValueError(f"dsa_count must be positive: {dsa_count!r}")
    if concurrency < 1:
        raise ValueError(f"concurrency must be >= 1: {concurrency!r}")
    if concurrency > dsa_count:
        raise ConcurrencyExceedsPopulation(
            f"concurrency {concurrency} exceeds DSA population {dsa_count}"
        )
    alpha = weights.alpha_e2o
    return alpha * dsa_count * agg.area + (1.0 - alpha) * concurrency * agg.energy


def fabric_footprint(scale: float) -> float:
    """Footprint of the fabric scaled by n' (area and energy scale together)."""
    if scale < 1:
        raise InvalidScale(f"fabric scale must be >= 1: {scale!r}")
    return float(scale)


def alpha_from_breakdown(breakdown: DeviceBreakdown) -> FootprintWeights:
    """Embodied share of a lifecycle breakdown.

    Everything except the use phase counts as embodied: production,
    transportation, and end-of-life processing.
    """
    embodied = breakdown.production_pct + breakdown.transport_pct + breakdown.eol_pct
    total = embodied + breakdown.use_pct
    return FootprintWeights(alpha_e2o=embodied / total, source=AlphaSource.BREAKDOWN)


def device_preset(device: DeviceClass | str) -> tuple[float, float]:
    """[low, high] embodied-share band for a device class."""
    try:
        cls = DeviceClass(device)
    except ValueError:
        raise UnknownDeviceClass(f"unknown device class: {device!r}") from None
    return DEVICE_ALPHA_BANDS[cls]


def weights_for_device(device: DeviceClass | str) -> FootprintWeights:
    """Band midpoint as ready-to-use weights."""
    low, high = device_preset(device)
    return FootprintWeights(alpha_e2o=(low + high) / 2.0, source=AlphaSource.DEVICE_PRESET)


def embodied_intensity(record: TechNodeRecord) -> float:
    """Embodied footprint per unit chip area, relative to the anchor node."""
    return record.rel_embodied_per_cell / record.rel_area_per_cell
