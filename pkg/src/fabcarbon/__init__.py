"""Carbon-footprint modeling for accelerator-rich chips.

Answers one question with a first-order model: given a chip with N
dedicated accelerators (DSAs), is a single reconfigurable fabric the
greener design? The break-even population is the critical DSA count (CDC);
everything else in the package feeds, sweeps, or reports that threshold.
"""

from .engine import (
    CdcQuery,
    SweepResult,
    cdc,
    cdc_limit_embodied,
    fit_aggregates,
    fit_scale,
    is_fabric_greener,
    min_dsas_to_replace,
    sweep_alpha,
    sweep_grid,
)
from .concurrency import (
    GridSpec,
    PackingResult,
    ScaleKind,
    ScaleMode,
    average_utilization,
    packing_feasible,
    scale_factor,
)
from .core import (
    AggregateRatios,
    AlphaSource,
    DeviceBreakdown,
    DeviceClass,
    FootprintWeights,
    KernelProfile,
    MeanKind,
    TechNodeRecord,
    aggregate,
    alpha_from_breakdown,
    device_preset,
    dsa_footprint,
    embodied_intensity,
    fabric_footprint,
    weights_for_device,
)
from .dataset import (
    FabricSpec,
    KernelDataset,
    builtin_dataset,
    dump_dataset,
    load_breakdowns,
    load_dataset,
    load_tech_nodes,
    validate_dataset,
)
from .scenarios import (
    SavingsResult,
    ScenarioSpec,
    builtin_case,
    calibrated_aggregates,
    evaluate_cdc_table,
    hybrid_retained_savings,
    savings_factor,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateRatios",
    "AlphaSource",
    "CdcQuery",
    "DeviceBreakdown",
    "DeviceClass",
    "FabricSpec",
    "FootprintWeights",
    "GridSpec",
    "KernelDataset",
    "KernelProfile",
    "MeanKind",
    "PackingResult",
    "SavingsResult",
    "ScaleKind",
    "ScaleMode",
    "ScenarioSpec",
    "SweepResult",
    "TechNodeRecord",
    "aggregate",
    "alpha_from_breakdown",
    "average_utilization",
    "builtin_case",
    "builtin_dataset",
    "calibrated_aggregates",
    "cdc",
    "cdc_limit_embodied",
    "device_preset",
    "dsa_footprint",
    "dump_dataset",
    "embodied_intensity",
    "evaluate_cdc_table",
    "fabric_footprint",
    "fit_aggregates",
    "fit_scale",
    "hybrid_retained_savings",
    "is_fabric_greener",
    "load_breakdowns",
    "load_dataset",
    "load_tech_nodes",
    "min_dsas_to_replace",
    "packing_feasible",
    "savings_factor",
    "scale_factor",
    "sweep_alpha",
    "sweep_grid",
    "validate_dataset",
    "weights_for_device",
]
