import math
import os
from pathlib import Path

import numpy as np
import pytest

import semijulia as sj
from semijulia.cli import FINITE_VIEWPORT_NOTE, main
from semijulia.imaging import emit_mask_image, emit_report, format_value
from semijulia.scenarios import load_config, preset_config, run_scenario


def tiny_vp(n=8):
    return sj.Viewport(0j, 1.0, 1.0, n, n)


# ---------------------------------------------------------------- pgm

def test_pgm_empty_and_full(tmp_path):
    vp = tiny_vp(4)
    p = tmp_path / "empty.pgm"
    emit_mask_image(sj.SetMask.empty(vp), p)
    data = p.read_bytes()
    assert data.startswith(b"P5\n4 4\n255\n")
    assert data[len(b"P5\n4 4\n255\n"):] == b"\xff" * 16
    emit_mask_image(sj.SetMask.full(vp), p)
    assert p.read_bytes().endswith(b"\x00" * 16)


def test_pgm_single_marked_cell(tmp_path):
    vp = tiny_vp(2)
    bits = np.zeros((2, 2), dtype=bool)
    bits[0, 1] = True  # top row, right column
    p = tmp_path / "one.pgm"
    emit_mask_image(sj.SetMask(vp, bits), p)
    payload = p.read_bytes()[len(b"P5\n2 2\n255\n"):]
    assert payload == bytes([255, 0, 255, 255])


def test_pgm_row_zero_is_top(tmp_path):
    vp = tiny_vp(2)
    z = vp.centers()
    bits = z.imag > 0  # upper half marked
    p = tmp_path / "top.pgm"
    emit_mask_image(sj.SetMask(vp, bits), p)
    payload = p.read_bytes()[len(b"P5\n2 2\n255\n"):]
    assert payload == bytes([0, 0, 255, 255])


def test_pgm_io_error():
    vp = tiny_vp(2)
    with pytest.raises(OSError, match="no/such"):
        emit_mask_image(sj.SetMask.empty(vp), "/no/such/dir/x.pgm")


# ---------------------------------------------------------------- csv

def test_report_rows_and_six_digits(tmp_path):
    p = tmp_path / "r.csv"
    emit_report([("stage", "metric", 0.123456789), ("s2", "flag", True)], p)
    lines = p.read_text().splitlines()
    assert lines[0] == "stage,metric,value"
    assert lines[1] == "stage,metric,0.123457"
    assert lines[2] == "s2,flag,true"


def test_empty_report_is_header_only(tmp_path):
    p = tmp_path / "r.csv"
    emit_report([], p)
    assert p.read_text() == "stage,metric,value\n"


def test_format_value():
    assert format_value(1234567.0) == "1.23457e+06"
    assert format_value(3) == "3"
    assert format_value(False) == "false"


# ---------------------------------------------------------------- config

def test_preset_validation():
    with pytest.raises(ValueError):
        preset_config("exp-pair", lam=0.5)  # needs 0 < lam < 1/e
    with pytest.raises(ValueError):
        preset_config("sine-pair", lam=1.2)
    with pytest.raises(ValueError):
        preset_config("rational-pair", a=0.5)
    with pytest.raises(ValueError):
        preset_config("mystery")


def test_load_config_overrides(tmp_path):
    cfg_text = """
[scenario]
name = rational-pair
a = 3

[viewport]
cols = 64
rows = 48

[classify]
max_iter = 77

[hull]
max_generations = 9
word_len = 4
seed_word_len = 1

[invariance]
samples = 123
seed = 5

[outputs]
sets = julia-single, reports
"""
    p = tmp_path / "cfg.ini"
    p.write_text(cfg_text)
    cfg = load_config(p)
    assert cfg.generators[1].a == 3
    assert (cfg.viewport.cols, cfg.viewport.rows) == (64, 48)
    assert cfg.classify.max_iter == 77
    assert cfg.hull.max_generations == 9
    assert cfg.word_len == 4 and cfg.seed_word_len == 1
    assert cfg.invariance_samples == 123
    assert cfg.outputs == ("julia-single", "reports")


def test_load_config_custom_generators(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("""
[scenario]
name = custom

[generators]
g0 = scaled_sine 0.8 0
g1 = scaled_sine 0.8 6.283185307179586

[viewport]
cols = 32
rows = 32
""")
    cfg = load_config(p)
    assert len(cfg.generators) == 2
    assert cfg.generators[0].lam == 0.8


def test_load_config_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "absent.ini")


# ---------------------------------------------------------------- run

RUN_CFG = """
[scenario]
name = rational-pair

[viewport]
cols = 96
rows = 96

[hull]
word_len = 4
seed_word_len = 1

[invariance]
samples = 300
"""


def test_run_scenario_manifest_lists_files(tmp_path):
    cfg = load_config(_write(tmp_path, RUN_CFG))
    man = run_scenario(cfg, out_dir=tmp_path / "out")
    assert man.failed_stage is None
    for f in man.artifacts:
        assert Path(f).exists()
    on_disk = sorted(str(q) for q in (tmp_path / "out").iterdir())
    assert sorted(man.artifacts) == on_disk
    stages = {s for s, _, _ in man.metric_rows}
    assert {"julia-semigroup", "e-hull", "j-hull", "invariance", "subset"} <= stages
    assert any(m == "hausdorff_vs_analytic_annulus" for _, m, _ in man.metric_rows)
    # negative control present and substantial for this scenario
    neg = [v for s, m, v in man.metric_rows if m == "fatou_backward_violation_fraction"]
    assert neg and neg[0] > 0.05


def _write(tmp_path, text, name="cfg.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_run_reruns_byte_identical(tmp_path):
    cfg = load_config(_write(tmp_path, RUN_CFG))
    run_scenario(cfg, out_dir=tmp_path / "a")
    run_scenario(cfg, out_dir=tmp_path / "b")
    for fa in sorted((tmp_path / "a").iterdir()):
        fb = tmp_path / "b" / fa.name
        assert fa.read_bytes() == fb.read_bytes(), fa.name


def test_run_failure_still_emits_manifest(tmp_path):
    # a viewport deep inside the attracting basin yields an empty
    # semigroup Julia mask, so the invariance stage cannot sample it
    p = _write(tmp_path, """
[scenario]
name = custom

[generators]
g0 = scaled_sine 0.5 0

[viewport]
cols = 24
rows = 24
half_width = 0.4
half_height = 0.4

[outputs]
sets = julia-semigroup, invariance, reports
""", name="fail.ini")
    cfg = load_config(p)
    with pytest.raises(ValueError):
        run_scenario(cfg, out_dir=tmp_path / "out")
    manifest = (tmp_path / "out" / "manifest.csv").read_text()
    assert "run,failed_stage,invariance" in manifest


def test_run_empty_outputs(tmp_path):
    cfg = load_config(_write(tmp_path, RUN_CFG))
    from dataclasses import replace

    cfg = replace(cfg, outputs=())
    man = run_scenario(cfg, out_dir=tmp_path / "out")
    assert man.artifacts == []
    assert man.metric_rows == []
    assert any(s == "config" for s, _, _ in man.config_rows)


# ---------------------------------------------------------------- cli

def test_cli_run(tmp_path, capsys):
    p = _write(tmp_path, RUN_CFG)
    rc = main(["run", "--config", str(p), "--out-dir", str(tmp_path / "o")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "j-hull/status" in out


def test_cli_render(tmp_path):
    out = tmp_path / "jf.pgm"
    rc = main(["render", "--scenario", "rational-pair", "--set", "jf",
               "--out", str(out), "--size", "64"])
    assert rc == 0
    assert out.read_bytes().startswith(b"P5\n64 64\n255\n")


def test_cli_verify_passes_and_prints_note(tmp_path, capsys):
    rc = main(["verify", "--scenario", "rational-pair", "--size", "128",
               "--out-dir", str(tmp_path / "v")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS fatou-backward-negative-control" in out
    assert FINITE_VIEWPORT_NOTE in out
    assert (tmp_path / "v" / "verify_report.csv").exists()


def test_cli_verify_deterministic(tmp_path):
    main(["verify", "--scenario", "rational-pair", "--size", "96",
          "--out-dir", str(tmp_path / "v1")])
    main(["verify", "--scenario", "rational-pair", "--size", "96",
          "--out-dir", str(tmp_path / "v2")])
    for f1 in sorted((tmp_path / "v1").iterdir()):
        f2 = tmp_path / "v2" / f1.name
        assert f1.read_bytes() == f2.read_bytes(), f1.name


def test_cli_threads_env(tmp_path, monkeypatch):
    # requests beyond the machine's core budget are clamped, not fatal
    monkeypatch.setenv("SJ_THREADS", "64")
    out = tmp_path / "jf.pgm"
    rc = main(["render", "--scenario", "rational-pair", "--set", "jf",
               "--out", str(out), "--size", "32"])
    assert rc == 0
    import numba

    assert 1 <= numba.get_num_threads() <= numba.config.NUMBA_NUM_THREADS
