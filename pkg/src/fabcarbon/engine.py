"""Critical DSA count: threshold, decision, sweeps, and calibration.

The critical DSA count (CDC) is the break-even population: integrate more
DSAs than that and the reconfigurable fabric has the smaller combined
footprint. Closed form, with n concurrent kernels and a fabric scaled by n':

    CDC = (n' - (1 - alpha) * n * E) / (alpha * A)

At n' = n this reduces to n * (E/A + (1 - E) / (alpha * A)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .concurrency import ScaleMode, scale_factor
from .core import AggregateRatios, FootprintWeights, MeanKind, dsa_footprint, fabric_footprint
from .errors import AlphaPole, DegenerateModel, InfeasibleFit, InvalidRange, InvalidScale, SingularFit

# Tolerance for inclusive endpoints when stepping a float range.
_RANGE_EPS = 1e-9


@dataclass(frozen=True)
class CdcQuery:
    """One point in the model's parameter space.

    ``scale`` is the fabric scaling factor n'; ``None`` means the
    conservative n' = n.
    """

    weights: FootprintWeights
    agg: AggregateRatios
    n: int = 1
    scale: float | None = None

    def __post_init__(self) -> None:
        if self.weights.alpha_e2o == 0:
            raise AlphaPole("alpha_e2o = 0 is a pole: the threshold diverges")
        if self.n < 1:
            raise ValueError(f"concurrency must be >= 1: {self.n!r}")
        if self.scale is not None and self.scale < 1:
            raise InvalidScale(f"fabric scale must be >= 1: {self.scale!r}")

    @property
    def effective_scale(self) -> float:
        return float(self.n) if self.scale is None else self.scale


@dataclass(frozen=True)
class SweepResult:
    """Sampled (parameter, CDC) curve plus the parameters held fixed."""

    axis_name: str
    samples: tuple[tuple[float, float], ...]
    metadata: Mapping[str, object]

    def __post_init__(self) -> None:
        params = [p for p, _ in self.samples]
        if any(b <= a for a, b in zip(params, params[1:])):
            raise ValueError("sweep parameters must be strictly increasing")
        for p, v in self.samples:
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"sweep value at {p!r} is not finite and positive: {v!r}")

    @property
    def parameters(self) -> tuple[float, ...]:
        return tuple(p for p, _ in self.samples)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.samples)


def cdc(query: CdcQuery) -> float:
    """Break-even DSA population for the queried parameters.

    Returned as a real number; a population strictly above it makes the
    fabric the greener option. Raises ``DegenerateModel`` when the fabric's
    operational deficit alone outweighs its budget, i.e. no population is
    large enough.
    """
    alpha = query.weights.alpha_e2o
    scale = query.effective_scale
    numerator = scale - (1.0 - alpha) * query.n * query.agg.energy
    if numerator <= 0:
        raise DegenerateModel(
            "fabric is never greener: operational term "
            f"{(1.0 - alpha) * query.n * query.agg.energy:.6g} >= fabric budget {scale:.6g}"
        )
    return numerator / (alpha * query.agg.area)


def cdc_limit_embodied(agg: AggregateRatios, n: int = 1) -> float:
    """Limit of the threshold as the embodied share dominates: n / A."""
    if n < 1:
        raise ValueError(f"concurrency must be >= 1: {n!r}")
    return n / agg.area


def min_dsas_to_replace(query: CdcQuery) -> int:
    """Smallest integer population strictly above the threshold."""
    return math.floor(cdc(query)) + 1


def is_fabric_greener(dsa_count: int, query: CdcQuery) -> bool:
    """True when the sea of DSAs out-pollutes the scaled fabric.

    Evaluated from the footprints themselves; ties favor the DSAs.
    """
    if dsa_count < 1:
        raise ValueError(f"dsa_count must be >= 1: {dsa_count!r}")
    dsa = dsa_footprint(dsa_count, query.n, query.weights, query.agg)
    return dsa > fabric_footprint(query.effective_scale)


def float_steps(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive [lo, hi] samples at the given step, robust to float drift."""
    count = math.floor((hi - lo) / step + _RANGE_EPS) + 1
    return [lo + i * step for i in range(count)]


def sweep_alpha(
    alpha_range: tuple[float, float, float],
    agg: AggregateRatios,
    n: int = 1,
    scale_mode: ScaleMode | None = None,
) -> SweepResult:
    """CDC sampled over an inclusive [lo, hi] range of alpha_e2o."""
    lo, hi, step = alpha_range
    if not 0 < lo <= hi <= 1:
        raise InvalidRange(f"alpha range must satisfy 0 < lo <= hi <= 1: {alpha_range!r}")
    if step <= 0:
        raise InvalidRange(f"alpha step must be > 0: {step!r}")
    scale = scale_factor(n, scale_mode, mean_utilization=agg.utilization)
    samples = []
    for alpha in float_steps(lo, hi, step):
        query = CdcQuery(FootprintWeights(alpha), agg, n=n, scale=scale)
        samples.append((alpha, cdc(query)))
    return SweepResult(
        axis_name="alpha_e2o",
        samples=tuple(samples),
        metadata={
            "area": agg.area,
            "energy": agg.energy,
            "utilization": agg.utilization,
            "mean_kind": agg.mean_kind.value,
            "n": n,
            "scale": scale,
        },
    )


def sweep_grid(
    alphas: Sequence[float],
    areas: Sequence[float],
    energies: Sequence[float],
    n: int = 1,
    scale_mode: ScaleMode | None = None,
) -> list[SweepResult]:
    """One alpha curve per (area, energy) pair of the Cartesian grid."""
    if not alphas or not areas or not energies:
        raise InvalidRange("grid axes must be non-empty")
    if any(not 0 < a <= 1 for a in alphas):
        raise InvalidRange(f"alphas must lie in (0, 1]: {list(alphas)!r}")
    curves = []
    for area in areas:
        for energy in energies:
            agg = AggregateRatios(area=area, energy=energy, utilization=1.0, kernel_count=1)
            scale = scale_factor(n, scale_mode, mean_utilization=agg.utilization)
            samples = tuple(
                (alpha, cdc(CdcQuery(FootprintWeights(alpha), agg, n=n, scale=scale)))
                for alpha in alphas
            )
            curves.append(
                SweepResult(
                    axis_name="alpha_e2o",
                    samples=samples,
                    metadata={"area": area, "energy": energy, "n": n, "scale": scale},
                )
            )
    return curves


def fit_aggregates(
    points: Sequence[tuple[float, float]],
    n: int = 1,
    scale: float | None = None,
    *,
    utilization: float = 1.0,
    kernel_count: int | None = None,
) -> AggregateRatios:
    """Recover (A, E) from two (alpha, CDC) observations.

    Inverts the closed form: with x = 1/A and y = E/A, each observation is
    linear, alpha * CDC = n' * x - (1 - alpha) * n * y. The returned
    aggregates are a calibration artifact, not kernel means; ``utilization``
    and ``kernel_count`` describe the population the curve summarizes.
    """
    if len(points) != 2:
        raise SingularFit(f"exactly two calibration points required, got {len(points)}")
    (a1, c1), (a2, c2) = points
    for alpha, value in points:
        if not 0 < alpha <= 1:
            raise InvalidRange(f"calibration alpha out of (0, 1]: {alpha!r}")
        if value <= 0:
            raise InvalidRange(f"calibration CDC must be > 0: {value!r}")
    if a1 == a2:
        raise SingularFit(f"calibration points share alpha = {a1!r}")
    n_prime = float(n) if scale is None else float(scale)
    # Eliminate x between the two linear observations.
    y = (a2 * c2 - a1 * c1) / (n * (a2 - a1))
    x = (a1 * c1 + (1.0 - a1) * n * y) / n_prime
    if x <= 0:
        raise InfeasibleFit(f"fit implies non-positive 1/A = {x!r}")
    area = 1.0 / x
    energy = y / x
    if not 0 < energy < 1:
        raise InfeasibleFit(f"fit implies energy ratio out of (0, 1): {energy!r}")
    return AggregateRatios(
        area=area,
        energy=energy,
        utilization=utilization,
        kernel_count=len(points) if kernel_count is None else kernel_count,
        mean_kind=MeanKind.ARITHMETIC,
    )


def fit_scale(
    points: Sequence[tuple[float, float]],
    n: int,
    agg: AggregateRatios,
) -> float:
    """Least-squares fabric scale n' explaining (alpha, CDC) observations.

    With (A, E) known, each observation pins n' directly; the least-squares
    solution of the one-parameter linear model is their mean.
    """
    if not points:
        raise InvalidRange("at least one observation required to fit a scale")
    estimates = [
        value * alpha * agg.area + (1.0 - alpha) * n * agg.energy for alpha, value in points
    ]
    fitted = math.fsum(estimates) / len(estimates)
    if fitted < 1:
        raise InfeasibleFit(f"fitted scale below 1: {fitted!r}")
    return fitted
