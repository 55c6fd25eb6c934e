"""Fabric scaling for concurrent kernels and discrete PE packing checks.

Running n kernels at once needs a bigger fabric. The conservative rule
charges a full fabric per kernel (n' = n); the average-utilization rule
scales by the mean fraction of compute resources the kernels actually
occupy (n' = n * mean utilization, never below one full fabric).
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from enum import Enum

from .core import KernelProfile
from .errors import EmptyKernelSet, InvalidScale

# Counteract binary float noise only (e.g. 0.45 * 100 = 45.000000000000007);
# demands stay ceiled and the budget floored, so the check never overpromises.
_GRID_EPS = 1e-9


class ScaleKind(str, Enum):
    CONSERVATIVE = "conservative"
    AVERAGE_UTILIZATION = "average_utilization"


@dataclass(frozen=True)
class ScaleMode:
    """How to derive n' from the concurrency level.

    ``explicit_scale``, when set, wins over the rule and is used verbatim.
    """

    kind: ScaleKind = ScaleKind.CONSERVATIVE
    explicit_scale: float | None = None

    def __post_init__(self) -> None:
        if self.explicit_scale is not None and self.explicit_scale < 1:
            raise InvalidScale(f"explicit scale must be >= 1: {self.explicit_scale!r}")

    @classmethod
    def conservative(cls) -> ScaleMode:
        return cls(kind=ScaleKind.CONSERVATIVE)

    @classmethod
    def average_utilization(cls) -> ScaleMode:
        return cls(kind=ScaleKind.AVERAGE_UTILIZATION)

    @classmethod
    def explicit(cls, scale: float) -> ScaleMode:
        return cls(explicit_scale=float(scale))


@dataclass(frozen=True)
class GridSpec:
    """Processing-element grid of the fabric."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid dimensions must be >= 1: {self.rows}x{self.cols}")

    @property
    def pe_count(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class PackingResult:
    """Outcome of a first-fit PE allocation against a scaled grid."""

    feasible: bool
    budget_pes: int
    allocations: tuple[tuple[str, int], ...]

    @property
    def allocated_pes(self) -> int:
        return sum(pes for _, pes in self.allocations)


def average_utilization(kernels: list[KernelProfile]) -> float:
    """Arithmetic mean of per-kernel fabric utilization."""
    if not kernels:
        raise EmptyKernelSet("cannot average utilization over an empty kernel set")
    # statistics.mean, not fmean: must stay bit-identical to aggregate()
    return statistics.mean([k.utilization for k in kernels])


def scale_factor(
    n: int,
    mode: ScaleMode | None = None,
    kernels: list[KernelProfile] | None = None,
    mean_utilization: float | None = None,
) -> float:
    """Fabric scaling factor n' for n concurrent kernels.

    Under average utilization the result is clamped to 1: the fabric is
    sized to host the largest kernel in full, so it never shrinks below one.
    ``mean_utilization`` short-circuits the kernel average when the caller
    already aggregated it.
    """
    if n < 1:
        raise ValueError(f"concurrency must be >= 1: {n!r}")
    mode = mode or ScaleMode.conservative()
    if mode.explicit_scale is not None:
        return mode.explicit_scale
    if mode.kind is ScaleKind.CONSERVATIVE:
        return float(n)
    if mean_utilization is None:
        if kernels is None:
            raise EmptyKernelSet("average-utilization scaling needs kernels or a mean utilization")
        mean_utilization = average_utilization(kernels)
    return max(1.0, n * mean_utilization)


def pe_demand(kernel: KernelProfile, grid: GridSpec) -> int:
    """PEs a kernel occupies on the grid, rounded up."""
    return math.ceil(kernel.utilization * grid.pe_count - _GRID_EPS)


def packing_feasible(
    selected: list[KernelProfile],
    grid: GridSpec,
    scale: float,
) -> PackingResult:
    """First-fit PE allocation of the selected kernels on a scaled grid.

    Demands are rounded up and the budget rounded down, so a feasible
    verdict is a safe one. Infeasibility is a valid result, not an error.
    """
    if not selected:
        raise EmptyKernelSet("cannot pack an empty kernel selection")
    if scale < 1:
        raise InvalidScale(f"fabric scale must be >= 1: {scale!r}")
    budget = math.floor(scale * grid.pe_count + _GRID_EPS)
    allocations: list[tuple[str, int]] = []
    used = 0
    feasible = True
    for kernel in selected:
        demand = pe_demand(kernel, grid)
        if used + demand > budget:
            feasible = False
        allocations.append((kernel.name, demand))
        used += demand
    return PackingResult(feasible=feasible, budget_pes=budget, allocations=tuple(allocations))
