import json
import os

import numpy as np
import pytest

from projlab.family import disjoint_slot_family, p_of_l, save_family
from projlab.lab import (
    ExperimentConfig,
    build_measure,
    lambda_grid,
    resolve_family,
    run_bound_check,
    run_sharpness,
    run_transversality,
    run_verify_suite,
    sharpness_family,
    sharpness_measure,
)


def _tiny_bound_cfg(tmp_path, seed=11, grid=4):
    fam = tmp_path / "fam.json"
    save_family(disjoint_slot_family(3, 2, 1), fam)
    return ExperimentConfig(
        mode="bound_check",
        family=str(fam),
        seed=seed,
        measure={
            "variant": "embedded",
            "inner": {"variant": "four_corner_cantor", "level": 6},
            "frame": [[1.0, 0.4, 0.2], [0.1, 1.0, -0.3]],
        },
        lambda_grid=(grid,),
        tolerance=0.15,
    )


def test_config_round_trip_and_hash(tmp_path):
    cfg = _tiny_bound_cfg(tmp_path)
    path = tmp_path / "exp.json"
    path.write_text(cfg.canonical_json())
    cfg2 = ExperimentConfig.load(path)
    assert cfg2.content_hash() == cfg.content_hash()
    cfg2.seed += 1
    assert cfg2.content_hash() != cfg.content_hash()


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"mode": "bound_check", "family": {},
                                    "seed": 0, "typo_key": 1})


def test_build_measure_variants():
    m = build_measure({"variant": "line_cantor", "s": 0.5, "level": 6},
                      seed=0)
    assert m.count == 64
    b = build_measure({"variant": "lebesgue_ball", "dim": 2, "N": 100},
                      seed=1)
    assert b.ambient_dim == 2
    e = build_measure({
        "variant": "embedded",
        "inner": {"variant": "four_corner_cantor", "level": 3},
        "frame": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
    }, seed=2)
    assert e.ambient_dim == 3
    with pytest.raises(ValueError):
        build_measure({"variant": "nonsense"}, seed=0)


def test_lambda_grid_shapes():
    spec = disjoint_slot_family(4, 2, 2, radius=0.2)
    grid = lambda_grid(spec, (3,))
    assert len(grid) == 9
    arr = np.array(grid)
    assert np.all(np.abs(arr) <= 0.9 * 0.2 + 1e-12)
    with pytest.raises(ValueError):
        lambda_grid(spec, (3, 3, 3))


def test_run_bound_check_tiny(tmp_path):
    cfg = _tiny_bound_cfg(tmp_path)
    report = run_bound_check(cfg)
    assert report.mode == "bound_check"
    assert len(report.rows) == 4
    assert report.summary["bound"] == pytest.approx(1.0)
    # no violations for the four-corner measure in a 1-parameter family
    assert report.summary["violation_fraction"] == 0.0


def test_report_save_layout_and_determinism(tmp_path):
    cfg = _tiny_bound_cfg(tmp_path)
    out1 = tmp_path / "out1"
    out2 = tmp_path / "out2"
    run_bound_check(cfg).save(out1)
    run_bound_check(cfg).save(out2)
    for name in ("report.json", "per-lambda.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    fits = sorted(os.listdir(out1 / "fitdata"))
    assert fits == [f"row{i:04d}.csv" for i in range(4)]
    rep = json.loads((out1 / "report.json").read_text())
    assert "runtime_seconds" not in json.dumps(rep)
    meta = json.loads((out1 / "run_meta.json").read_text())
    assert meta["runtime_seconds"] >= 0.0


def test_bound_check_gates_degenerate_family(tmp_path):
    from projlab.family import FamilySpec
    from projlab.grassmann import standard_frame

    fam = tmp_path / "degenerate.json"
    schedule = ((1, 1, 3, 1.0), (2, 1, 3, 2.0))  # parallel parameters
    save_family(FamilySpec(4, 2, 2, standard_frame(4, 2), schedule,
                           (0.2, 0.2)), fam)
    cfg = _tiny_bound_cfg(tmp_path)
    cfg.family = str(fam)
    cfg.measure["frame"] = [[1.0, 0.4, 0.2, 0.0], [0.1, 1.0, -0.3, 0.2]]
    with pytest.raises(RuntimeError):
        run_bound_check(cfg)
    cfg.force = True
    report = run_bound_check(cfg)  # runs, but records the tiny wedge norm
    assert report.summary["nondegeneracy_wedge_norm"] < 1e-8


def test_sharpness_family_schedule():
    # (n, m, k) = (3, 2, 1) at l = 1: p(1) = 1; the single slot sits in
    # row 1 (the filled row); row 2 never rotates toward column n
    spec = sharpness_family(3, 2, 1, l=1, p=1)
    assert spec.schedule == ((1, 1, 3, 1.0),)
    with pytest.raises(ValueError):
        sharpness_family(3, 2, 3, l=1, p=1)  # only 1 admissible slot


def test_sharpness_measure_dimension():
    s = 0.6
    m = sharpness_measure(3, 1, 1, s, level=8, N=2000, seed=0)
    assert m.ambient_dim == 3
    assert m.nominal_dim == pytest.approx(1.0 + s + 1.0)


def test_run_sharpness_validates_bracket(tmp_path):
    fam = tmp_path / "fam.json"
    save_family(disjoint_slot_family(4, 2, 1), fam)  # p(1) = 2 = n - m
    cfg = ExperimentConfig(mode="sharpness", family=str(fam), seed=1,
                           l=1, s=0.5, sample_count=1000)
    with pytest.raises(ValueError):
        run_sharpness(cfg)


def test_run_transversality_base_family(tmp_path):
    fam = tmp_path / "fam.json"
    save_family(disjoint_slot_family(3, 2, 1), fam)
    cfg = ExperimentConfig(
        mode="transversality", family=str(fam), seed=5,
        deltas=tuple(np.geomspace(1e-3, 0.2, 8)),
        mc_samples=60_000, n_directions=3,
    )
    report, runtime = run_transversality(cfg)
    assert report["summary"]["target_order"] == 1
    assert not report["summary"]["extended"]
    med = report["summary"]["median_exponent"]
    assert med == pytest.approx(1.0, abs=0.15)
    assert runtime >= 0.0


def test_verify_suite_filter():
    rows, ok = run_verify_suite("p_enumeration")
    assert len(rows) == 1
    assert rows[0]["pass"]
    assert ok


def test_resolve_family_accepts_spec_dict_and_path(tmp_path):
    spec = disjoint_slot_family(3, 2, 1)
    assert resolve_family(spec) is spec
    from projlab.family import family_to_dict
    spec2 = resolve_family(family_to_dict(spec))
    assert spec2.schedule == spec.schedule
    path = tmp_path / "fam.json"
    save_family(spec, path)
    spec3 = resolve_family(str(path))
    assert spec3.schedule == spec.schedule
