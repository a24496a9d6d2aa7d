"""Acceptance gate: one test per shipping criterion.

Each test prints a single ACCEPTANCE line with the measured numbers and
asserts the criterion at its stated tolerance and runtime budget.  The
rank sweep shared by the expectation, variance, second-moment, and class
criteria is computed once per module.
"""

import math
import time

import pytest

from ym2d import oracle
from ym2d.cli import main as cli_main
from ym2d.tails import euler_phi, theta
from ym2d.weights import CompositeWeight, casimir_u
from ym2d.yangmills import (
    SurfaceSpec,
    TruncationPolicy,
    partition_function,
    plane_wilson,
    sphere_wilson,
    wilson_expectation,
    wilson_second_moment,
    wilson_variance,
)

POLICY = TruncationPolicy(k_max=14, n_max=12)
RANKS = (8, 16, 32, 64)
COMBOS = tuple((g, h) for g in ("u", "su") for h in (1, 2))


def report(num, ok, detail):
    line = f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    return line


def run_verify(capsys, suite):
    code = cli_main(["verify", "--suite", suite])
    out = capsys.readouterr().out
    rows = [ln.split(",") for ln in out.strip().splitlines()[1:]]
    table = {r[1]: (int(r[2]), int(r[3])) for r in rows}
    return code, table


@pytest.fixture(scope="module")
def wilson_sweep():
    data = {}
    start = time.perf_counter()
    for group, genus in COMBOS:
        surface = SurfaceSpec(genus, 2.0, 0.7)
        for rank in RANKS:
            e = wilson_expectation(group, surface, rank, POLICY)
            m = wilson_second_moment(group, surface, rank, POLICY)
            v = wilson_variance(group, surface, rank, POLICY)
            data[(group, genus, rank)] = (e, m, v)
    data["elapsed"] = time.perf_counter() - start
    return data


def test_criterion_01_plane_exactness():
    start = time.perf_counter()
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        target = math.exp(-0.5 * t)
        for rank in (3, 7, 20):
            c2 = casimir_u(CompositeWeight((1,), (), 0, rank))
            single = math.exp(-0.5 * t * float(c2))
            worst = max(
                worst,
                abs(single - target) / target,
                abs(plane_wilson(t) - target) / target,
            )
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    line = report(1, ok, f"plane loop vs exp(-t/2): worst rel err "
                         f"{worst:.2e}, {elapsed:.2f}s (budget 1s)")
    assert ok, line


def test_criterion_02_identity_suite(capsys):
    start = time.perf_counter()
    code, table = run_verify(capsys, "identities")
    elapsed = time.perf_counter() - start
    required = {
        "coordinate-round-trip",
        "dimension-factorization",
        "hook-content-dimension",
        "casimir-closed-forms",
        "casimir-shift-law",
        "single-box-casimir-step",
        "pieri-dimension-sum",
        "tableau-branching-sums",
        "box-path-count",
        "schur-box-branching",
        "schur-power-sum",
    }
    failures = sum(f for _, f in table.values())
    cases = sum(p for p, _ in table.values())
    ok = (code == 0 and failures == 0 and required <= set(table)
          and elapsed < 60.0)
    line = report(2, ok, f"identity suite: {cases} cases, {failures} "
                         f"failures, {len(table)} checks, {elapsed:.1f}s "
                         f"(budget 60s)")
    assert ok, line


def test_criterion_03_inequality_suite(capsys):
    start = time.perf_counter()
    code, table = run_verify(capsys, "inequalities")
    elapsed = time.perf_counter() - start
    required = {
        "casimir-window",
        "casimir-half-floor",
        "flat-casimir-gap",
        "move-exponent-decay",
        "stretched-dimension-sandwich",
        "composite-dimension-sandwich",
        "sim-ratio-cap",
    }
    failures = sum(f for _, f in table.values())
    cases = sum(p for p, _ in table.values())
    ok = (code == 0 and failures == 0 and required <= set(table)
          and elapsed < 60.0)
    line = report(3, ok, f"inequality suite: {cases} cases, {failures} "
                         f"violations, {elapsed:.1f}s (budget 60s)")
    assert ok, line


def test_criterion_04_partition_function_limits():
    start = time.perf_counter()
    th = theta(1.0)
    phi = euler_phi(math.exp(-1.0))
    targets = {
        ("su", 2): 1.0,
        ("u", 2): th,
        ("su", 1): 1.0 / (phi * phi),
        ("u", 1): th / (phi * phi),
    }
    parts = []
    all_ok = True
    for (group, genus), target in targets.items():
        errs = [
            abs(partition_function(group, genus, 2.0, n, POLICY).value - target)
            for n in (10, 20, 40)
        ]
        decreasing = errs[0] > errs[1] > errs[2]
        small = errs[2] < 1e-2
        all_ok = all_ok and decreasing and small
        parts.append(
            f"{group} g{genus}: {errs[0]:.3e}/{errs[1]:.3e}/{errs[2]:.3e} "
            f"dec={decreasing} lt1e-2={small}"
        )
    elapsed = time.perf_counter() - start
    all_ok = all_ok and elapsed < 120.0
    line = report(4, all_ok, "; ".join(parts) + f"; {elapsed:.0f}s (budget 120s)")
    assert all_ok, line


def test_criterion_05_expectation_limit(wilson_sweep):
    target = math.exp(-0.35)
    parts = []
    all_ok = True
    for group, genus in COMBOS:
        errs = [
            abs(wilson_sweep[(group, genus, r)][0].value - target)
            for r in RANKS
        ]
        ok = all(a > b for a, b in zip(errs, errs[1:])) and errs[-1] < 2e-2
        all_ok = all_ok and ok
        parts.append(f"{group} g{genus}: err64 {errs[-1]:.2e} dec={ok}")
    elapsed = wilson_sweep["elapsed"]
    all_ok = all_ok and elapsed < 300.0
    line = report(5, all_ok, "; ".join(parts)
                  + f"; sweep {elapsed:.0f}s (budget 300s)")
    assert all_ok, line


def test_criterion_06_variance_limit(wilson_sweep):
    parts = []
    all_ok = True
    for group, genus in COMBOS:
        var = [wilson_sweep[(group, genus, r)][2].value for r in RANKS]
        positive = all(v > 0 for v in var)
        decreasing = all(a > b for a, b in zip(var, var[1:]))
        halved = var[2] / var[0] < 0.5
        all_ok = all_ok and positive and decreasing and halved
        parts.append(
            f"{group} g{genus}: var8 {var[0]:.2e} var32/var8 "
            f"{var[2] / var[0]:.3f} pos={positive} dec={decreasing}"
        )
    line = report(6, all_ok, "; ".join(parts))
    assert all_ok, line


def test_criterion_07_second_moment_target(wilson_sweep):
    target = math.exp(-0.7)
    parts = []
    all_ok = True
    for group, genus in COMBOS:
        errs = [
            abs(wilson_sweep[(group, genus, r)][1].value - target)
            for r in RANKS
        ]
        ok = all(a > b for a, b in zip(errs, errs[1:]))
        all_ok = all_ok and ok
        parts.append(f"{group} g{genus}: err64 {errs[-1]:.2e} dec={ok}")
    line = report(7, all_ok, "; ".join(parts))
    assert all_ok, line


def test_criterion_08_oracle_equivalence():
    start = time.perf_counter()
    pol = TruncationPolicy(k_max=3, n_max=2)
    worst = 0.0
    for rank in (3, 4, 5):
        for genus in (1, 2):
            for group in ("u", "su"):
                z = partition_function(group, genus, 2.0, rank, pol).value
                oz = oracle.oracle_partition_function(
                    group, genus, 2.0, rank, 3, 2
                )
                worst = max(worst, abs(z - oz) / abs(oz))
                surface = SurfaceSpec(genus, 2.0, 0.7)
                e = wilson_expectation(group, surface, rank, pol).value
                m = wilson_second_moment(group, surface, rank, pol).value
                oe, om = oracle.oracle_wilson(
                    group, genus, 2.0, 0.7, rank, 3, 2
                )
                worst = max(
                    worst, abs(e - oe) / abs(oe), abs(m - om) / abs(om)
                )
        w = sphere_wilson(2.0, 0.7, rank, pol).value
        ow = oracle.oracle_sphere(2.0, 0.7, rank, 3, 2)
        worst = max(worst, abs(w - ow) / abs(ow))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 60.0
    line = report(8, ok, f"engine vs tuple oracle: worst rel err "
                         f"{worst:.2e}, {elapsed:.1f}s (budget 60s)")
    assert ok, line


def test_criterion_09_class_dominance(wilson_sweep):
    parts = []
    all_ok = True
    for group in ("u", "su"):
        rep = wilson_sweep[(group, 2, 64)][0]
        ratios = [
            rep.class2 / rep.class1,
            rep.class3 / rep.class1,
            rep.class4 / rep.class1,
        ]
        ok = all(abs(r) < 0.01 for r in ratios)
        all_ok = all_ok and ok
        parts.append(
            f"{group}: class2-4/class1 = "
            + "/".join(f"{r:.2e}" for r in ratios)
        )
    line = report(9, all_ok, "; ".join(parts))
    assert all_ok, line


def test_criterion_10_worker_determinism(tmp_path):
    args = [
        "wilson-exp", "--group", "u,su", "--genus", "1,2", "--area", "2",
        "--loop-area", "0.7", "--N", "8,16,32,64", "--kmax", "14",
        "--nmax", "12",
    ]
    one = tmp_path / "workers1.csv"
    two = tmp_path / "workers2.csv"
    code1 = cli_main(args + ["--workers", "1", "--out", str(one)])
    code2 = cli_main(args + ["--workers", "2", "--out", str(two)])
    blob1, blob2 = one.read_bytes(), two.read_bytes()
    ok = code1 == 0 and code2 == 0 and blob1 == blob2 and len(blob1) > 0
    line = report(10, ok, f"sweep CSV identical across workers: "
                          f"{len(blob1)} bytes, match={blob1 == blob2}")
    assert ok, line
