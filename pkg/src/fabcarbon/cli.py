"""Command-line front end.

Exit codes: 0 on success, 1 on data or validation errors, 2 on usage
errors. Flags are validated before any computation; diagnostics go to the
error stream, data to stdout or the --out path.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from pathlib import Path
from typing import IO, Sequence

from . import scenarios as scen_mod
from .concurrency import ScaleMode, average_utilization
from .core import (
    AggregateRatios,
    DeviceBreakdown,
    FootprintWeights,
    aggregate,
    alpha_from_breakdown,
    device_preset,
)
from .dataset import KernelDataset, builtin_dataset, load_dataset, validate_dataset
from .engine import (
    CdcQuery,
    SweepResult,
    cdc as compute_cdc,
    fit_aggregates,
    float_steps,
    min_dsas_to_replace,
    sweep_grid,
)
from .errors import DatasetError, ModelError
from .report import (
    Column,
    RenderedReport,
    emit_curve_csv,
    emit_table,
    estimated_inputs_footnote,
    sweep_report,
)
from .svg import grouped_bar_chart, line_chart

DATASET_ENV_VAR = "FABCARBON_DATASET"

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Flag combination or value rejected before computation."""


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("table", "csv", "json"), default="table")
    parser.add_argument("--out", metavar="PATH", help="write data here instead of stdout")
    parser.add_argument("--plot", metavar="PATH.svg", help="also render an SVG chart")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fabcarbon",
        description=(
            "Decide whether replacing dedicated accelerators with a reconfigurable "
            "fabric lowers a device's carbon footprint."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cdc", help="critical DSA count for explicit parameters")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--area", type=float, required=True)
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--scale", type=float, help="explicit fabric scaling factor n'")
    group.add_argument("--util-mode", choices=("avg", "conservative"), default="conservative")
    p.add_argument("--dataset", metavar="PATH", help="kernel dataset for --util-mode avg")
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="CDC curves over an alpha range")
    p.add_argument("--alpha", metavar="LO:HI:STEP", required=True)
    p.add_argument("--areas", metavar="LIST", default="0.35")
    p.add_argument("--energies", metavar="LIST", default="0.35")
    p.add_argument("--n", type=int, default=1)
    _add_output_flags(p)

    p = sub.add_parser("scenario", help="CDC table for the built-in cases")
    p.add_argument("--case", metavar="I|II|III", default="I", help="one case or a comma list")
    p.add_argument("--dataset", metavar="PATH")
    p.add_argument("--alphas", metavar="LIST", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--calibrated", action="store_true", help="use curve-fitted aggregates")
    p.add_argument("--util-mode", choices=("avg", "conservative"), default="conservative")
    _add_output_flags(p)

    p = sub.add_parser("savings", help="footprint improvement over a DSA population")
    p.add_argument("--dsas", type=int, default=scen_mod.DEFAULT_DSA_POPULATION)
    p.add_argument("--alpha", type=float, default=scen_mod.DEFAULT_ALPHA)
    p.add_argument("--n", metavar="LO:HI", default="1:5")
    p.add_argument("--dataset", metavar="PATH")
    p.add_argument("--calibrated", action="store_true")
    _add_output_flags(p)

    p = sub.add_parser("hybrid", help="savings when some kernels stay dedicated")
    p.add_argument("--retain", metavar="NAMES", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dsas", type=int, default=scen_mod.DEFAULT_DSA_POPULATION)
    p.add_argument("--alpha", type=float, default=scen_mod.DEFAULT_ALPHA)
    p.add_argument("--dataset", metavar="PATH")
    p.add_argument("--calibrated", action="store_true")
    _add_output_flags(p)

    p = sub.add_parser("alpha", help="embodied weight from a breakdown or device class")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--breakdown", metavar="K=V,...")
    group.add_argument("--device", metavar="CLASS")
    _add_output_flags(p)

    p = sub.add_parser("calibrate", help="fit aggregates to two (alpha, CDC) points")
    p.add_argument("--points", metavar="A1:C1,A2:C2", required=True)
    p.add_argument("--n", type=int, default=1)
    _add_output_flags(p)

    p = sub.add_parser("dataset", help="inspect or validate a kernel dataset")
    p.add_argument("action", choices=("validate", "show"))
    p.add_argument("path", nargs="?", metavar="PATH")
    _add_output_flags(p)

    return parser


def _parse_float_list(raw: str, flag: str) -> list[float]:
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected a comma-separated number list, got {raw!r}") from None
    if not values:
        raise UsageError(f"{flag}: empty list")
    return values


def _parse_span(raw: str, flag: str) -> tuple[float, float, float]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise UsageError(f"{flag}: expected LO:HI:STEP, got {raw!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"{flag}: expected numbers in LO:HI:STEP, got {raw!r}") from None
    return lo, hi, step


def _parse_int_span(raw: str, flag: str) -> tuple[int, int]:
    parts = raw.split(":")
    if len(parts) == 1:
        parts = [parts[0], parts[0]]
    if len(parts) != 2:
        raise UsageError(f"{flag}: expected LO:HI, got {raw!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"{flag}: expected integers in LO:HI, got {raw!r}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"{flag}: need 1 <= LO <= HI, got {raw!r}")
    return lo, hi


def _parse_points(raw: str) -> list[tuple[float, float]]:
    points = []
    for chunk in raw.split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise UsageError(f"--points: expected ALPHA:CDC pairs, got {chunk!r}")
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise UsageError(f"--points: expected numbers in {chunk!r}") from None
    return points


def _parse_breakdown(raw: str) -> DeviceBreakdown:
    expected = {"production", "transport", "use", "eol"}
    values: dict[str, float] = {}
    for chunk in raw.split(","):
        if "=" not in chunk:
            raise UsageError(f"--breakdown: expected K=V, got {chunk!r}")
        key, _, value = chunk.partition("=")
        key = key.strip()
        if key not in expected:
            raise UsageError(f"--breakdown: unknown phase {key!r} (expected {sorted(expected)})")
        try:
            values[key] = float(value)
        except ValueError:
            raise UsageError(f"--breakdown: {key} is not a number: {value!r}") from None
    missing = expected - values.keys()
    if missing:
        raise UsageError(f"--breakdown: missing phase(s): {sorted(missing)}")
    return DeviceBreakdown(
        production_pct=values["production"],
        transport_pct=values["transport"],
        use_pct=values["use"],
        eol_pct=values["eol"],
    )


def _check_alpha(alpha: float) -> None:
    if alpha == 0:
        raise UsageError("alpha=0 is a pole of the model; the critical DSA count is undefined")
    if not 0 < alpha <= 1:
        raise UsageError(f"alpha must lie in (0, 1]: {alpha!r}")


def _dataset_format(path: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix == ".json":
        return "json"
    raise DatasetError(f"cannot infer dataset format from {path!r} (expected .csv or .json)")


def _resolve_dataset(path: str | None) -> KernelDataset:
    path = path or os.environ.get(DATASET_ENV_VAR)
    if not path:
        return builtin_dataset()
    try:
        return load_dataset(path, _dataset_format(path))
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path!r}: {exc}") from None


def _scale_mode(util_mode: str) -> ScaleMode:
    if util_mode == "avg":
        return ScaleMode.average_utilization()
    return ScaleMode.conservative()


def _cmd_cdc(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    _check_alpha(args.alpha)
    if args.area <= 0 or args.energy <= 0:
        raise UsageError("--area and --energy must be > 0")
    if args.n < 1:
        raise UsageError(f"--n must be >= 1: {args.n!r}")
    footnotes: tuple[str, ...] = ()
    if args.scale is not None:
        if args.scale < 1:
            raise UsageError(f"--scale must be >= 1: {args.scale!r}")
        scale = float(args.scale)
        utilization = 1.0
    elif args.util_mode == "avg":
        ds = _resolve_dataset(args.dataset)
        utilization = average_utilization(list(ds.kernels))
        scale = max(1.0, args.n * utilization)
        note = estimated_inputs_footnote(sorted(k.name for k in ds.kernels if k.estimated))
        footnotes = (note,) if note else ()
    else:
        scale = float(args.n)
        utilization = 1.0
    agg = AggregateRatios(area=args.area, energy=args.energy, utilization=utilization, kernel_count=1)
    query = CdcQuery(FootprintWeights(args.alpha), agg, n=args.n, scale=scale)
    value = compute_cdc(query)
    record = {
        "alpha_e2o": args.alpha,
        "area": args.area,
        "energy": args.energy,
        "n": args.n,
        "scale": scale,
        "cdc": value,
        "min_replace": min_dsas_to_replace(query),
    }
    report = RenderedReport(
        title="",
        columns=(
            Column("alpha_e2o", "alpha_e2o", "num"),
            Column("area", "area", "num"),
            Column("energy", "energy", "num"),
            Column("n", "n", "int"),
            Column("n_prime", "scale", "scale"),
            Column("cdc", "cdc", "ratio"),
            Column("min_replace", "min_replace", "int"),
        ),
        records=(record,),
        footnotes=footnotes,
    )
    return report, []


def _cmd_sweep(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    lo, hi, step = _parse_span(args.alpha, "--alpha")
    if not 0 < lo <= hi <= 1 or step <= 0:
        raise UsageError(f"--alpha: need 0 < LO <= HI <= 1 and STEP > 0, got {args.alpha!r}")
    areas = _parse_float_list(args.areas, "--areas")
    energies = _parse_float_list(args.energies, "--energies")
    if any(v <= 0 for v in areas + energies):
        raise UsageError("--areas and --energies must be > 0")
    if args.n < 1:
        raise UsageError(f"--n must be >= 1: {args.n!r}")
    alphas = float_steps(lo, hi, step)
    sweeps = sweep_grid(alphas, areas, energies, n=args.n)
    return sweep_report(sweeps), sweeps


def _cmd_scenario(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    alphas = _parse_float_list(args.alphas, "--alphas")
    for alpha in alphas:
        _check_alpha(alpha)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1: {args.n!r}")
    cases = [c.strip() for c in args.case.split(",") if c.strip()]
    if not cases:
        raise UsageError("--case: empty case list")
    ds = _resolve_dataset(args.dataset)
    mode = _scale_mode(args.util_mode)
    sweeps = []
    for case in cases:
        spec = scen_mod.builtin_case(case, n=args.n, scale_mode=mode)
        agg = scen_mod.calibrated_aggregates(spec, ds) if args.calibrated else None
        sweeps.append(scen_mod.evaluate_cdc_table(spec, alphas, dataset=ds, aggregates=agg))
    return sweep_report(sweeps), sweeps


def _cmd_savings(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    _check_alpha(args.alpha)
    n_lo, n_hi = _parse_int_span(args.n, "--n")
    if args.dsas < n_hi:
        raise UsageError(f"--dsas {args.dsas} is below the highest concurrency {n_hi}")
    ds = _resolve_dataset(args.dataset)
    records = []
    estimated: tuple[str, ...] = ()
    for n in range(n_lo, n_hi + 1):
        spec = scen_mod.builtin_case("I", n=n, alpha=args.alpha, dsa_population=args.dsas)
        agg = scen_mod.calibrated_aggregates(spec, ds) if args.calibrated else None
        result = scen_mod.savings_factor(spec, dataset=ds, aggregates=agg)
        estimated = result.inputs.get("estimated_kernels", ())
        records.append(
            {
                "n": result.n,
                "scale_avg_util": result.scale_avg_util,
                "improvement_avg_util": result.improvement_avg_util,
                "improvement_conservative": result.improvement_conservative,
            }
        )
    note = estimated_inputs_footnote(list(estimated))
    report = RenderedReport(
        title="",
        columns=(
            Column("n", "n", "int"),
            Column("n_prime_avg", "scale_avg_util", "scale"),
            Column("improvement_avg_util", "improvement_avg_util", "ratio"),
            Column("improvement_conservative", "improvement_conservative", "ratio"),
        ),
        records=tuple(records),
        footnotes=(note,) if note else (),
    )
    return report, []


def _cmd_hybrid(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    _check_alpha(args.alpha)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1: {args.n!r}")
    retained = [name.strip() for name in args.retain.split(",") if name.strip()]
    ds = _resolve_dataset(args.dataset)
    spec = scen_mod.builtin_case(
        "I",
        n=args.n,
        alpha=args.alpha,
        dsa_population=args.dsas,
        scale_mode=ScaleMode.average_utilization(),
    )
    agg = scen_mod.calibrated_aggregates(spec, ds) if args.calibrated else None
    improvement = scen_mod.hybrid_retained_savings(spec, retained, dataset=ds, aggregates=agg)
    baseline = scen_mod.savings_factor(spec, dataset=ds, aggregates=agg)
    note = estimated_inputs_footnote(list(baseline.inputs.get("estimated_kernels", ())))
    record = {
        "retained": ",".join(sorted(retained)),
        "n": args.n,
        "dsa_population": args.dsas,
        "alpha_e2o": args.alpha,
        "improvement": improvement,
        "baseline_avg_util": baseline.improvement_avg_util,
    }
    report = RenderedReport(
        title="",
        columns=(
            Column("retained", "retained"),
            Column("n", "n", "int"),
            Column("dsas", "dsa_population", "int"),
            Column("alpha_e2o", "alpha_e2o", "num"),
            Column("improvement", "improvement", "ratio"),
            Column("baseline_avg_util", "baseline_avg_util", "ratio"),
        ),
        records=(record,),
        footnotes=(note,) if note else (),
    )
    return report, []


def _cmd_alpha(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    if args.breakdown:
        breakdown = _parse_breakdown(args.breakdown)
        weights = alpha_from_breakdown(breakdown)
        record = {
            "source": "breakdown",
            "alpha_e2o": weights.alpha_e2o,
            "alpha_low": None,
            "alpha_high": None,
        }
    else:
        try:
            low, high = device_preset(args.device)
        except ModelError:
            raise UsageError(f"unknown device class: {args.device!r}") from None
        record = {
            "source": args.device,
            "alpha_e2o": (low + high) / 2.0,
            "alpha_low": low,
            "alpha_high": high,
        }
    report = RenderedReport(
        title="",
        columns=(
            Column("source", "source"),
            Column("alpha_e2o", "alpha_e2o", "num"),
            Column("alpha_low", "alpha_low", "num"),
            Column("alpha_high", "alpha_high", "num"),
        ),
        records=(record,),
    )
    return report, []


def _cmd_calibrate(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    points = _parse_points(args.points)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1: {args.n!r}")
    agg = fit_aggregates(points, n=args.n)
    record = {
        "area": agg.area,
        "energy": agg.energy,
        "points": ";".join(f"{a:g}:{c:g}" for a, c in points),
    }
    report = RenderedReport(
        title="",
        columns=(
            Column("area", "area", "num"),
            Column("energy", "energy", "num"),
            Column("points", "points"),
        ),
        records=(record,),
    )
    return report, []


def _cmd_dataset(args: argparse.Namespace) -> tuple[RenderedReport, list[SweepResult]]:
    ds = _resolve_dataset(args.path)
    if args.action == "validate":
        violations = validate_dataset(ds)
        if violations:
            raise DatasetError("; ".join(violations))
        report = RenderedReport(
            title="",
            columns=(Column("dataset", "dataset"), Column("status", "status")),
            records=({"dataset": ds.provenance or "(unnamed)", "status": "ok"},),
        )
        return report, []
    agg = aggregate(list(ds.kernels))
    records = tuple(
        {
            "name": k.name,
            "domain": k.domain,
            "area_norm": k.area_norm,
            "energy_norm": k.energy_norm,
            "utilization": k.utilization,
            "memory_kb": k.memory_kb,
            "estimated": "yes" if k.estimated else "no",
        }
        for k in ds.kernels
    )
    fabric = ds.fabric
    notes = [
        f"fabric: {fabric.grid.rows}x{fabric.grid.cols} PEs, {fabric.memory_banks} banks, "
        f"{fabric.memory_kb:g} KB, {fabric.clock_mhz:g} MHz",
        f"means: area {agg.area:g}, energy {agg.energy:g}, utilization {agg.utilization:g}",
    ]
    estimated_note = estimated_inputs_footnote(sorted(k.name for k in ds.kernels if k.estimated))
    if estimated_note:
        notes.append(estimated_note)
    report = RenderedReport(
        title="",
        columns=(
            Column("name", "name"),
            Column("domain", "domain"),
            Column("area_norm", "area_norm", "num"),
            Column("energy_norm", "energy_norm", "num"),
            Column("utilization", "utilization", "num"),
            Column("memory_kb", "memory_kb", "num"),
            Column("estimated", "estimated"),
        ),
        records=records,
        footnotes=tuple(notes),
    )
    return report, []


_COMMANDS = {
    "cdc": _cmd_cdc,
    "sweep": _cmd_sweep,
    "scenario": _cmd_scenario,
    "savings": _cmd_savings,
    "hybrid": _cmd_hybrid,
    "alpha": _cmd_alpha,
    "calibrate": _cmd_calibrate,
    "dataset": _cmd_dataset,
}


def _render_plot(report: RenderedReport, sweeps: list[SweepResult]) -> str:
    if sweeps:
        if len(sweeps) > 1 and all("scenario" in s.metadata for s in sweeps):
            groups = [str(s.metadata["scenario"]) for s in sweeps]
            alphas = sweeps[0].parameters
            series = [
                (f"alpha={alpha:g}", [s.values[i] for s in sweeps])
                for i, alpha in enumerate(alphas)
            ]
            return grouped_bar_chart(groups, series)
        return line_chart(sweeps)
    numeric = [c for c in report.columns if c.kind == "ratio"]
    label_col = report.columns[0]
    groups = [report.cell(r, label_col) for r in report.records]
    series = []
    for column in numeric:
        values = [r.get(column.key) for r in report.records]
        if any(v is None for v in values):
            continue
        series.append((column.header, [float(v) for v in values]))
    if not series:
        raise ModelError("nothing to plot for this report")
    return grouped_bar_chart(groups, series, y_label="improvement (x)", x_label=label_col.header)


def run(argv: Sequence[str], stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    """Parse and execute one invocation; returns the process exit code."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        # argparse prints usage and help itself; route it to the given streams
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, sweeps = _COMMANDS[args.command](args)
        if args.format == "csv" and sweeps:
            payload = emit_curve_csv(sweeps)
        else:
            payload = emit_table(report, args.format)
        if getattr(args, "plot", None):
            Path(args.plot).write_text(_render_plot(report, sweeps), encoding="utf-8")
        if getattr(args, "out", None):
            Path(args.out).write_text(payload, encoding="utf-8")
        else:
            out.write(payload)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except (ModelError, DatasetError, KeyError, ValueError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=err)
        return EXIT_DATA_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))
