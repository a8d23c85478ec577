"""Acceptance suite: one test per numbered criterion, each printing a
single PASS/FAIL line.

The heavy experiment modes (criteria 8-10) run twice inside module-scoped
fixtures; criterion 11 compares the two runs' report files byte for byte.
"""

import json
import time

import numpy as np
import pytest

from projlab.dimest import box_counting_dim, correlation_dim
from projlab.family import (
    disjoint_slot_family,
    extended_plane_derivative_check,
    family_jacobian,
    family_rows,
    p_of_l,
    p_oracle_dots,
    save_family,
)
from projlab.fractal import SampledMeasure, four_corner_cantor, line_cantor
from projlab.grassmann import (
    ChartPoint,
    Frame,
    chart_point_frame,
    chart_rows,
    complement,
    span_frame,
    span_projector,
    tangent_projection_derivative,
)
from projlab.lab import (
    ExperimentConfig,
    run_bound_check,
    run_sharpness,
    run_transversality,
)
from projlab.multivec import (
    cauchy_binet_norm,
    gram_norm,
    wedge_operator_norm,
)


def _report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion-{num:02d}: {detail}")
    assert ok, detail


def _full_range():
    for n in range(2, 9):
        for m in range(1, n):
            for k in range(1, m * (n - m)):
                for l in range(m):
                    yield n, m, k, l


# --- criterion 1: p(l) vs the dot-filling oracle ---------------------------

def test_criterion_01_p_correctness():
    t0 = time.time()
    checked = 0
    for n, m, k, l in _full_range():
        assert p_of_l(n, m, k, l) == p_oracle_dots(n, m, k, l), (n, m, k, l)
        if l > 0:
            assert p_of_l(n, m, k, l) >= p_of_l(n, m, k, l - 1)
        checked += 1
    elapsed = time.time() - t0
    _report(1, elapsed < 1.0,
            f"{checked} tuples agree with the dot oracle, nondecreasing "
            f"in l ({elapsed:.2f}s)")


# --- criterion 2: parameter-count bracket ----------------------------------

def test_criterion_02_parameter_bracket_scan():
    # The upper bound holds for every tuple.  The strict lower bound is a
    # consequence of the standing hypothesis p < n-m; when k <= l(n-m) the
    # clamp forces p = n-m and the literal lower bound fails, so those
    # tuples are checked to be exactly the clamped ones and excluded.
    t0 = time.time()
    checked = excluded = 0
    for n, m, k, l in _full_range():
        p = p_of_l(n, m, k, l)
        lhs = l * (n - m) + (n - m - p - 1) * (m - l)
        rhs = l * (n - m) + (n - m - p) * (m - l)
        assert k <= rhs, (n, m, k, l)
        if p < n - m:
            assert lhs < k, (n, m, k, l)
            checked += 1
        else:
            assert k <= l * (n - m), (n, m, k, l)
            excluded += 1
    elapsed = time.time() - t0
    _report(2, elapsed < 1.0,
            f"bracket exact on {checked} tuples with p < n-m; "
            f"{excluded} clamped tuples (p = n-m) verified degenerate "
            f"({elapsed:.2f}s)")


# --- criterion 3: exterior-algebra oracle ----------------------------------

def test_criterion_03_multivec_oracle():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    worst_gram = worst_det = 0.0
    for _ in range(10_000):
        n = int(rng.integers(1, 7))
        r = int(rng.integers(1, n + 1))
        D = rng.integers(-3, 4, size=(r, n)).astype(float)
        g = gram_norm(D)
        cb = cauchy_binet_norm(D)
        worst_gram = max(worst_gram, abs(g - cb) / (1.0 + g))
        if r == n:
            d = abs(np.linalg.det(D))
            worst_det = max(worst_det,
                            abs(wedge_operator_norm(D, n) - d) / (1.0 + d))
    elapsed = time.time() - t0
    ok = worst_gram <= 1e-9 and worst_det <= 1e-9 and elapsed < 10.0
    _report(3, ok,
            f"10000 matrices: max gram/Cauchy-Binet gap {worst_gram:.2e}, "
            f"max wedge/det gap {worst_det:.2e} ({elapsed:.1f}s)")


# --- criterion 4: analytic tangent map vs central differences --------------

def test_criterion_04_derivative_order():
    t0 = time.time()
    rng = np.random.default_rng(77)
    hs = np.array([1e-2, 1e-3, 1e-4])
    worst = np.inf
    for _ in range(100):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(1, n))
        base = span_frame(rng.standard_normal((m, n)))
        c0 = ChartPoint(base, np.zeros((m, n - m)))
        B = np.vstack([c0.base.basis, c0.comp.basis])
        i = int(rng.integers(1, m + 1))
        j = int(rng.integers(m + 1, n + 1))
        z = rng.standard_normal(n)
        an = B @ tangent_projection_derivative(c0, i, j, z)
        zeta = B @ z
        errs = []
        for h in hs:
            a = np.zeros((m, n - m))
            a[i - 1, j - m - 1] = h
            Pp = span_projector(chart_rows(ChartPoint(base, a, c0.comp)))
            Pm = span_projector(chart_rows(ChartPoint(base, -a, c0.comp)))
            fd = (Pp - Pm) @ zeta / (2 * h)
            errs.append(np.linalg.norm(fd - an))
        errs = np.maximum(errs, 1e-15)
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        worst = min(worst, slope)
    elapsed = time.time() - t0
    ok = worst >= 1.9 and elapsed < 5.0
    _report(4, ok,
            f"100 cases: min central-difference convergence order "
            f"{worst:.2f} >= 1.9 ({elapsed:.1f}s)")


# --- criterion 5: second-order agreement of extended projections -----------

def test_criterion_05_extended_projection_order():
    t0 = time.time()
    rng = np.random.default_rng(303)
    orders = []
    while len(orders) < 20:
        n = int(rng.integers(3, 6))
        m = int(rng.integers(1, n - 1))
        p = int(rng.integers(1, n - m))
        if m + p >= n:
            continue
        base = span_frame(rng.standard_normal((m, n)))
        comp = complement(base)
        direction = rng.standard_normal((m, n - m))

        def path(sv, base=base, comp=comp, direction=direction):
            ang = np.clip(sv * direction, -0.7, 0.7)
            return chart_point_frame(ChartPoint(base, ang, comp))

        U = Frame(comp.basis[:p])
        res = extended_plane_derivative_check(path, 0.0, U,
                                              seed=len(orders))
        orders.append(res["order"])
    worst = min(orders)
    elapsed = time.time() - t0
    ok = worst >= 1.9 and elapsed < 5.0
    _report(5, ok,
            f"20 random paths: min log-log slope {worst:.2f} >= 1.9 "
            f"({elapsed:.1f}s)")


# --- criterion 6: wedge norm can only grow under perpendicular splits ------

def test_criterion_06_wedge_split_inequality():
    # The derivative columns split into a part inside V (from the V^perp
    # component z2 of z) and a part inside V^perp (from z1 = z - z2); the
    # orthogonality makes every wedge norm of the sum dominate that of the
    # z2 part alone.
    from projlab.family import projection_derivative_matrix
    from projlab.grassmann import projector
    from projlab.family import family_frame

    t0 = time.time()
    rng = np.random.default_rng(555)
    worst = np.inf
    for _ in range(100):
        n = int(rng.integers(3, 6))
        m = int(rng.integers(1, n))
        kmax = m * (n - m)
        if kmax < 2:
            continue
        k = int(rng.integers(1, kmax))
        base = span_frame(rng.standard_normal((m, n)))
        spec = disjoint_slot_family(n, m, k, base=base)
        lam0 = rng.uniform(-0.2, 0.2, size=k)
        frame = family_frame(spec, lam0)
        P = projector(frame)
        z = rng.standard_normal(n)
        z2 = z - P @ z
        r = int(rng.integers(1, min(k, m) + 1))
        full = wedge_operator_norm(
            projection_derivative_matrix(spec, lam0, z), r)
        part = wedge_operator_norm(
            projection_derivative_matrix(spec, lam0, z2), r)
        worst = min(worst, full - part)
    elapsed = time.time() - t0
    ok = worst >= -1e-9 and elapsed < 10.0
    _report(6, ok,
            f"100 random splits: min wedge-norm margin {worst:.2e} "
            f">= -1e-9 ({elapsed:.1f}s)")


# --- criterion 7: estimator calibration ------------------------------------

def test_criterion_07_estimator_calibration():
    t0 = time.time()
    b = box_counting_dim(four_corner_cantor(8)).value
    c = correlation_dim(line_cantor(np.log(2) / np.log(3), 10)).value
    rng = np.random.default_rng(9)
    pts = rng.random((100_000, 2))
    sq = SampledMeasure(pts, np.full(100_000, 1e-5), 2.0, {})
    u = box_counting_dim(sq).value
    elapsed = time.time() - t0
    ok = (0.9 <= b <= 1.1 and 0.58 <= c <= 0.68 and 1.9 <= u <= 2.1
          and elapsed < 60.0)
    _report(7, ok,
            f"four-corner box {b:.3f} in [0.9,1.1], line-Cantor corr "
            f"{c:.3f} in [0.58,0.68], square box {u:.3f} in [1.9,2.1] "
            f"({elapsed:.1f}s)")


# --- criteria 8-11: experiment modes, run twice for determinism ------------

@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance")
    fam3 = root / "family_n3m2k1.json"
    save_family(disjoint_slot_family(3, 2, 1), fam3)
    fam4 = root / "family_n4m2k3.json"
    save_family(disjoint_slot_family(4, 2, 3), fam4)
    return root


@pytest.fixture(scope="module")
def transversality_runs(workdir):
    outs = []
    for tag in ("a", "b"):
        out = {}
        for name, fam, l in (("base", "family_n3m2k1.json", None),
                             ("ext", "family_n4m2k3.json", 1)):
            cfg = ExperimentConfig(
                mode="transversality",
                family=str(workdir / fam),
                seed=2718,
                l=l,
                mc_samples=1_000_000,
                n_directions=8,
            )
            report, _ = run_transversality(cfg)
            path = workdir / f"transversality_{name}_{tag}.json"
            path.write_text(
                json.dumps(report, indent=2, sort_keys=True) + "\n")
            out[name] = (report, path)
        outs.append(out)
    return outs


@pytest.fixture(scope="module")
def bound_runs(workdir):
    cfg = ExperimentConfig(
        mode="bound_check",
        family=str(workdir / "family_n3m2k1.json"),
        seed=11,
        measure={
            "variant": "embedded",
            "inner": {"variant": "four_corner_cantor", "level": 8},
            "frame": [[1.0, 0.4, 0.2], [0.1, 1.0, -0.3]],
        },
        lambda_grid=(64,),
        tolerance=0.12,
    )
    dirs = []
    for tag in ("a", "b"):
        out = workdir / f"bound_{tag}"
        run_bound_check(cfg).save(out)
        dirs.append(out)
    return dirs


@pytest.fixture(scope="module")
def sharpness_runs(workdir):
    from projlab.lab import sharpness_family

    fam = workdir / "sharp_family.json"
    save_family(sharpness_family(3, 2, 1, l=1, p=1), fam)
    cfg = ExperimentConfig(
        mode="sharpness",
        family=str(fam),
        seed=12,
        l=1,
        s=float(np.log(2) / np.log(3)),
        level=14,
        sample_count=200_000,
        lambda_grid=(64,),
        tolerance=0.14,
    )
    dirs = []
    for tag in ("a", "b"):
        out = workdir / f"sharp_{tag}"
        run_sharpness(cfg).save(out)
        dirs.append(out)
    return dirs


def test_criterion_08_transversality_exponents(transversality_runs):
    base_report = transversality_runs[0]["base"][0]
    ext_report = transversality_runs[0]["ext"][0]
    r_base = base_report["summary"]["median_exponent"]
    r_ext = ext_report["summary"]["median_exponent"]
    ok = (r_base is not None and 0.85 <= r_base <= 1.15
          and r_ext is not None and 2.6 <= r_ext <= 3.4)
    _report(8, ok,
            f"base family exponent {r_base:.3f} in [0.85,1.15]; extended "
            f"family exponent {r_ext:.3f} in [2.6,3.4] (target 3)")


def test_criterion_09_bound_check(bound_runs):
    report = json.loads((bound_runs[0] / "report.json").read_text())
    rows = report["rows"]
    frac = np.mean([r["est_dim"] >= 0.88 for r in rows])
    ok = len(rows) == 64 and frac >= 0.95
    _report(9, ok,
            f"{frac * 100:.1f}% of {len(rows)} grid rows have estimated "
            f"projected dimension >= 0.88 (bound 1)")


def test_criterion_10_sharpness_pinch(sharpness_runs):
    report = json.loads((sharpness_runs[0] / "report.json").read_text())
    rows = report["rows"]
    frac = np.mean([1.50 <= r["est_dim"] <= 1.78 for r in rows])
    ok = len(rows) == 64 and frac >= 0.90
    _report(10, ok,
            f"{frac * 100:.1f}% of {len(rows)} grid rows inside "
            f"[1.50,1.78] around target 1.631")


def test_criterion_11_determinism(transversality_runs, bound_runs,
                                  sharpness_runs):
    mismatches = []
    for name in ("base", "ext"):
        a = transversality_runs[0][name][1].read_bytes()
        b = transversality_runs[1][name][1].read_bytes()
        if a != b:
            mismatches.append(f"transversality/{name}")
    for label, (da, db) in (("bound", bound_runs),
                            ("sharpness", sharpness_runs)):
        for f in ("report.json", "per-lambda.csv"):
            if (da / f).read_bytes() != (db / f).read_bytes():
                mismatches.append(f"{label}/{f}")
    ok = not mismatches
    _report(11, ok,
            "criteria 8-10 reruns byte-identical"
            if ok else f"mismatched files: {mismatches}")
