"""Exception types raised by the model and the dataset loaders."""

from __future__ import annotations


class ModelError(ValueError):
    """Base class for violations of the footprint model's domain."""


class EmptyKernelSet(ModelError):
    """An aggregation was requested over zero kernels."""


class ConcurrencyExceedsPopulation(ModelError):
    """More concurrently active DSAs than the chip integrates."""


class InvalidScale(ModelError):
    """Fabric scaling factor below 1 (the fabric must fit one kernel)."""


class InvalidBreakdown(ModelError):
    """Lifecycle percentages are negative or do not sum to 100."""


class UnknownDeviceClass(ModelError):
    """No embodied-share band is defined for the requested device class."""


class InvalidTechNode(ModelError):
    """Technology-node ratios must be strictly positive."""


class AlphaPole(ModelError):
    """The critical DSA count is undefined at alpha_e2o = 0."""


class DegenerateModel(ModelError):
    """Operational costs alone exceed the fabric budget; no finite threshold exists."""


class InvalidRange(ModelError):
    """A sweep range is empty, inverted, or outside the parameter domain."""


class SingularFit(ModelError):
    """Calibration points do not determine a unique solution."""


class InfeasibleFit(ModelError):
    """Calibration solved, but the implied aggregates are out of range."""


class UnknownScenario(ModelError):
    """No built-in scenario with the requested identifier."""


class NoFabricWorkload(ModelError):
    """Every concurrent slot is retained as a dedicated DSA; nothing runs on the fabric."""


class DatasetError(ValueError):
    """Base class for dataset ingestion failures."""


class ParseError(DatasetError):
    """Malformed input document.

    Carries ``line`` (1-based, 0 when unknown) and ``column`` (field name or
    empty) so callers can point at the offending cell.
    """

    def __init__(self, message: str, *, line: int = 0, column: str = ""):
        self.line = line
        self.column = column
        where = []
        if line:
            where.append(f"line {line}")
        if column:
            where.append(f"column {column!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class DatasetValidationError(DatasetError):
    """Input parsed, but one or more records violate an invariant."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class EmptyInput(DatasetError):
    """The input document contains no records."""
