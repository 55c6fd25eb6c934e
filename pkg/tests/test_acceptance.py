"""Acceptance gate: every release criterion at its pinned tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion. Randomized checks use a fixed seed and at least 1000
draws each, so the gate is deterministic.
"""

from __future__ import annotations

import io
import json
import math
import random


from fabcarbon import (
    AggregateRatios,
    CdcQuery,
    FootprintWeights,
    ScaleMode,
    aggregate,
    builtin_case,
    builtin_dataset,
    cdc,
    dsa_footprint,
    dump_dataset,
    evaluate_cdc_table,
    fabric_footprint,
    fit_aggregates,
    fit_scale,
    hybrid_retained_savings,
    is_fabric_greener,
    load_dataset,
    min_dsas_to_replace,
    savings_factor,
    validate_dataset,
)
from fabcarbon.cli import run
from fabcarbon.errors import DatasetValidationError, EmptyInput, ParseError
from fabcarbon.scenarios import calibrated_aggregates

RANDOM_DRAWS = 1000

# Reference CDC values for the three concurrent full-set curves
# (alpha -> threshold), used to fit the per-concurrency fabric scale.
CONCURRENT_CDC_REFERENCE = {
    2: [(0.3, 10.34286399), (0.5, 7.119223161), (0.7, 5.737662805), (0.9, 4.970129273)],
    3: [(0.3, 15.51429599), (0.5, 10.67883474), (0.7, 8.606494207), (0.9, 7.45519391)],
    4: [(0.3, 20.68572799), (0.5, 14.23844632), (0.7, 11.47532561), (0.9, 9.940258547)],
}

SERIAL_CDC_REFERENCE = {
    "I": {0.3: 9.773, 0.5: 6.32, 0.7: 4.84, 0.9: 4.01},
    "II": {0.3: 7.66, 0.5: 5.04, 0.7: 3.91, 0.9: 3.29},
    "III": {0.3: 6.59, 0.5: 4.21, 0.7: 3.39, 0.9: 2.93},
}

SAVINGS_REFERENCE_CONSERVATIVE = {1: 7.60, 2: 3.84, 3: 2.59, 4: 1.97, 5: 1.59}
SAVINGS_REFERENCE_AVG_UTIL = {2: 6.10, 3: 4.12, 4: 3.12, 5: 2.53}


def _report(criterion: str, failures: list[str]) -> None:
    state = "FAIL" if failures else "PASS"
    print(f"[{state}] {criterion}")
    assert not failures, f"{criterion}: " + "; ".join(failures)


def _query(alpha, agg, n=1, scale=None):
    return CdcQuery(FootprintWeights(alpha), agg, n=n, scale=scale)


def _rel_err(got, expected):
    return abs(got - expected) / abs(expected)


def test_criterion_1_worked_threshold_cases():
    """Serial and concurrent worked cases at A = E = 0.35, 2-decimal exact."""
    failures = []
    agg = AggregateRatios(area=0.35, energy=0.35, utilization=1.0, kernel_count=1)
    cases = [
        (0.25, 1, None, 8.43),
        (0.8, 1, None, 3.32),
        (0.25, 3, 3.0, 25.29),
        (0.8, 3, 3.0, 9.96),
    ]
    for alpha, n, scale, expected in cases:
        got = round(cdc(_query(alpha, agg, n=n, scale=scale)), 2)
        if got != expected:
            failures.append(f"alpha={alpha} n={n}: {got} != {expected}")

    # same numbers through the CLI surface
    out = io.StringIO()
    code = run(
        ["cdc", "--alpha", "0.25", "--area", "0.35", "--energy", "0.35", "--format", "json"],
        out,
        io.StringIO(),
    )
    if code != 0:
        failures.append(f"cli exit code {code}")
    else:
        reported = json.loads(out.getvalue())["records"][0]["cdc"]
        if round(reported, 2) != 8.43:
            failures.append(f"cli reports {reported}")
    _report("criterion 1: worked serial/concurrent threshold cases", failures)


def test_criterion_2_calibrated_curve_reproduction():
    """Two-point fit recovers the reference aggregates and the full curve."""
    failures = []
    fit = fit_aggregates([(0.3, 9.773), (0.9, 4.01)])
    if abs(fit.area - 0.2687) > 0.001:
        failures.append(f"area {fit.area}")
    if abs(fit.energy - 0.3032) > 0.001:
        failures.append(f"energy {fit.energy}")
    table = evaluate_cdc_table(
        builtin_case("I"), [0.3, 0.5, 0.7, 0.9], aggregates=calibrated_aggregates("I")
    )
    expected = [9.77, 6.32, 4.84, 4.01]
    for (alpha, got), want in zip(table.samples, expected):
        if _rel_err(got, want) > 0.005:
            failures.append(f"alpha={alpha}: {got:.4f} vs {want} ({_rel_err(got, want):.2%})")
    _report("criterion 2: calibrated serial curve within 0.5%", failures)


def test_criterion_3_arithmetic_curve_reproduction():
    """All twelve reference cells from raw kernel means, within 10%."""
    failures = []
    for case, row in SERIAL_CDC_REFERENCE.items():
        table = evaluate_cdc_table(builtin_case(case), sorted(row))
        for (alpha, got), want in zip(table.samples, [row[a] for a in sorted(row)]):
            if _rel_err(got, want) > 0.10:
                failures.append(f"{case} alpha={alpha}: {got:.3f} vs {want} ({_rel_err(got, want):.2%})")
    _report("criterion 3: arithmetic serial curves within 10%", failures)


def test_criterion_4_savings_table_reproduction():
    """Reference savings table at N=40, alpha=0.7, calibrated triple, within 2%."""
    failures = []
    agg = calibrated_aggregates("I")
    if agg.utilization != 0.63:
        failures.append(f"calibrated utilization {agg.utilization}")
    for n, want in SAVINGS_REFERENCE_CONSERVATIVE.items():
        result = savings_factor(builtin_case("I", n=n, alpha=0.7, dsa_population=40), aggregates=agg)
        if _rel_err(result.improvement_conservative, want) > 0.02:
            failures.append(f"conservative n={n}: {result.improvement_conservative:.4f} vs {want}")
        if n == 1:
            if result.improvement_avg_util is not None:
                failures.append("avg-util cell present at n=1")
        else:
            got = result.improvement_avg_util
            want_avg = SAVINGS_REFERENCE_AVG_UTIL[n]
            if _rel_err(got, want_avg) > 0.02:
                failures.append(f"avg-util n={n}: {got:.4f} vs {want_avg}")
    _report("criterion 4: savings table within 2%", failures)


def test_criterion_5_concurrent_curve_spot_checks():
    """Concurrent thresholds with fitted and closed-form fabric scales."""
    failures = []
    agg = calibrated_aggregates("I")
    spots = [(2, 0.3, 10.343), (3, 0.9, 7.455), (4, 0.3, 20.686)]

    for n, alpha, want in spots:
        fitted = fit_scale(CONCURRENT_CDC_REFERENCE[n], n, agg)
        got = cdc(_query(alpha, agg, n=n, scale=fitted))
        if _rel_err(got, want) > 0.03:
            failures.append(f"fitted n={n} alpha={alpha}: {got:.3f} vs {want}")

    for n, alpha, want in spots:
        got = cdc(_query(alpha, agg, n=n, scale=n * 0.64))
        if _rel_err(got, want) > 0.05:
            failures.append(f"closed-form n={n} alpha={alpha}: {got:.3f} vs {want}")
    _report("criterion 5: concurrent spot checks (3% fitted, 5% closed form)", failures)


def test_criterion_6_hybrid_retained_accelerator():
    """Keeping the smallest kernel dedicated at n=4 lands near 4.05x."""
    failures = []
    spec = builtin_case("I", n=4, alpha=0.7, dsa_population=40, scale_mode=ScaleMode.average_utilization())
    got = hybrid_retained_savings(spec, ["AESEncrypt"], aggregates=calibrated_aggregates("I"))
    if _rel_err(got, 4.05) > 0.05:
        failures.append(f"{got:.4f} vs 4.05 ({_rel_err(got, 4.05):.2%})")
    _report("criterion 6: hybrid retained-DSA improvement within 5%", failures)


def test_criterion_7_randomized_property_suite():
    """Model identities over >= 1000 randomized valid inputs each."""
    failures = []
    rng = random.Random(20260809)

    def draw():
        alpha = rng.uniform(0.05, 1.0)
        area = rng.uniform(0.05, 1.0)
        energy = rng.uniform(0.05, 1.0)
        n = rng.randint(1, 4)
        return alpha, area, energy, n

    fixed_point_bad = 0
    monotone_bad = 0
    limit_bad = 0
    concurrent_bad = 0
    scan_bad = 0
    fit_bad = 0
    ratio_bad = 0

    for _ in range(RANDOM_DRAWS):
        alpha, area, energy, n = draw()
        agg = AggregateRatios(area=area, energy=energy, utilization=1.0, kernel_count=1)
        query = _query(alpha, agg, n=n)
        threshold = cdc(query)

        dsa = dsa_footprint(threshold, n, query.weights, agg)
        if abs(dsa - fabric_footprint(query.effective_scale)) >= 1e-9:
            fixed_point_bad += 1

        d = 1e-3
        if alpha + d <= 1.0 and not cdc(_query(alpha + d, agg, n=n)) < threshold:
            monotone_bad += 1
        bigger_area = AggregateRatios(area=area * 1.01, energy=energy, utilization=1.0, kernel_count=1)
        if not cdc(_query(alpha, bigger_area, n=n)) < threshold:
            monotone_bad += 1
        bigger_energy = AggregateRatios(area=area, energy=energy * 1.01, utilization=1.0, kernel_count=1)
        if not cdc(_query(alpha, bigger_energy, n=n)) < threshold:
            monotone_bad += 1

        if not math.isclose(cdc(_query(1.0, agg, n=n)), n / area, rel_tol=1e-12):
            limit_bad += 1

        if not math.isclose(threshold, n * cdc(_query(alpha, agg, n=1)), rel_tol=1e-12):
            concurrent_bad += 1

    for _ in range(RANDOM_DRAWS):
        alpha, area, energy, n = draw()
        agg = AggregateRatios(area=area, energy=energy, utilization=1.0, kernel_count=1)
        query = _query(alpha, agg, n=n)
        answer = min_dsas_to_replace(query)
        scan = next(N for N in range(n, 100_000) if is_fabric_greener(N, query))
        if answer != scan:
            scan_bad += 1

    for _ in range(RANDOM_DRAWS):
        _, area, energy, _ = draw()
        a1 = rng.uniform(0.05, 0.45)
        a2 = rng.uniform(0.55, 1.0)
        points = [(a, cdc(_query(a, AggregateRatios(area=area, energy=energy, utilization=1.0, kernel_count=1)))) for a in (a1, a2)]
        fit = fit_aggregates(points)
        if not (math.isclose(fit.area, area, rel_tol=1e-9) and math.isclose(fit.energy, energy, rel_tol=1e-9)):
            fit_bad += 1

    for _ in range(RANDOM_DRAWS):
        alpha = rng.uniform(0.05, 1.0)
        n = rng.randint(2, 5)
        result = savings_factor(builtin_case("I", n=n, alpha=alpha))
        lhs = result.improvement_avg_util * result.scale_avg_util
        rhs = result.improvement_conservative * n
        if not math.isclose(lhs, rhs, rel_tol=5e-16):
            ratio_bad += 1

    for name, bad in [
        ("fixed point", fixed_point_bad),
        ("monotonicity", monotone_bad),
        ("embodied limit", limit_bad),
        ("conservative concurrency", concurrent_bad),
        ("linear-scan oracle", scan_bad),
        ("calibration round-trip", fit_bad),
        ("savings column ratio", ratio_bad),
    ]:
        if bad:
            failures.append(f"{name}: {bad}/{RANDOM_DRAWS} draws failed")
    _report("criterion 7: randomized property suite (1000 draws each)", failures)


def test_criterion_8_dataset_io_suite():
    """Built-in data pins, round trips, and named errors with exit code 1."""
    failures = []
    ds = builtin_dataset()

    if validate_dataset(ds):
        failures.append("builtin dataset has violations")

    agg = aggregate(list(ds.kernels))
    for name, got, want in [
        ("area", agg.area, 0.275),
        ("energy", agg.energy, 0.34375),
        ("utilization", agg.utilization, 0.64),
    ]:
        if abs(got - want) > 1e-12:
            failures.append(f"{name} mean {got} != {want}")

    if load_dataset(io.StringIO(dump_dataset(ds, "json")), "json") != ds:
        failures.append("json round trip not identity")
    csv_loaded = load_dataset(
        io.StringIO(dump_dataset(ds, "csv")), "csv", fabric=ds.fabric, provenance=ds.provenance
    )
    if csv_loaded != ds:
        failures.append("csv round trip not identity")

    header = "name,domain,area_norm,energy_norm,utilization,memory_kb,estimated\n"
    malformed = [
        (header + "X,t,0.3,0.3,1.2,10,0\n", DatasetValidationError, "utilization out of (0, 1]"),
        (header + "X,t,0.3,0.3,0.5,10,0\nX,t,0.3,0.3,0.5,10,0\n", DatasetValidationError, "duplicate kernel name"),
        (header + "X,t,0,0.3,0.5,10,0\n", DatasetValidationError, "area_norm"),
        (header + "X,t,oops,0.3,0.5,10,0\n", ParseError, "not a number"),
        (header, EmptyInput, "no records"),
    ]
    for text, exc_type, fragment in malformed:
        try:
            load_dataset(io.StringIO(text), "csv")
            failures.append(f"accepted malformed input ({fragment})")
        except exc_type as exc:
            if fragment not in str(exc):
                failures.append(f"error lacks {fragment!r}: {exc}")
        except Exception as exc:  # noqa: BLE001 - the gate reports any wrong type
            failures.append(f"wrong error type {type(exc).__name__} for {fragment!r}")

    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / "bad.csv"
        bad.write_text(header + "X,t,0.3,0.3,1.2,10,0\n")
        err = io.StringIO()
        code = run(["dataset", "validate", str(bad)], io.StringIO(), err)
        if code != 1:
            failures.append(f"cli exit {code} for invalid dataset")
        if "utilization out of (0, 1]" not in err.getvalue():
            failures.append("cli diagnostic lacks the violated invariant")
    _report("criterion 8: dataset and IO suite", failures)
