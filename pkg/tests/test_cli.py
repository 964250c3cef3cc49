"""Command-line verbs, exit codes, and end-to-end CSV output."""

import numpy as np
import pytest

from patchrad.cli import main
from patchrad.harness import load_error_curve_csv

MINI_INI = """\
[array]
geometry = linear
cols = 2
segments_per_element = 6
[sweep]
distance_min = 2
distance_max = 20
distance_count = 5
"""


@pytest.fixture()
def mini_ini(tmp_path):
    path = tmp_path / "mini.ini"
    path.write_text(MINI_INI)
    return str(path)


def test_sweep_writes_csv(tmp_path, mini_ini, capsys):
    out = tmp_path / "curve.csv"
    assert main(["sweep", "--config", mini_ini, "--output", str(out)]) == 0
    captured = capsys.readouterr().out
    assert "rayleigh distance" in captured
    d, e1, e2, meta = load_error_curve_csv(out)
    assert d.shape == (5,)
    assert meta["cols"] == "2"


def test_sweep_stdout_table(mini_ini, capsys):
    assert main(["sweep", "--config", mini_ini]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "distance_m,rel_err_point_source,rel_err_patch"
    assert len([l for l in lines if "," in l]) == 6  # header + 5 rows


def test_sweep_deterministic_across_runs(tmp_path, mini_ini):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", mini_ini, "--output", str(a)]) == 0
    assert main(["sweep", "--config", mini_ini, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_set_override_changes_output(tmp_path, mini_ini):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sweep", "--config", mini_ini, "--output", str(a)])
    main(["sweep", "--config", mini_ini, "--output", str(b),
          "--set", "sweep.n_q=4"])
    _, _, patch_a, meta_a = load_error_curve_csv(a)
    _, _, patch_b, meta_b = load_error_curve_csv(b)
    assert meta_a["n_q"] == "2" and meta_b["n_q"] == "4"
    assert not np.array_equal(patch_a, patch_b)


def test_missing_config_is_usage_error(tmp_path, capsys):
    missing = tmp_path / "nope.ini"
    assert main(["sweep", "--config", str(missing)]) == 2
    err = capsys.readouterr().err
    assert str(missing) in err


def test_malformed_set_is_usage_error(mini_ini, capsys):
    assert main(["sweep", "--config", mini_ini, "--set", "nodots"]) == 2
    assert "--set" in capsys.readouterr().err


def test_unknown_verb_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["transmogrify"])
    assert exc.value.code == 2


def test_runtime_failure_is_exit_one(mini_ini, capsys):
    code = main(["sweep", "--config", mini_ini,
                 "--set", "array.geometry=hexagonal"])
    assert code == 1
    assert "geometry" in capsys.readouterr().err


def test_validate_greens(capsys):
    assert main(["validate-greens", "--pairs", "100"]) == 0
    out = capsys.readouterr().out
    assert "ok" in out and "100 pairs" in out
    # unattainable tolerance flips the verdict
    assert main(["validate-greens", "--pairs", "50", "--tol", "1e-12"]) == 1


def test_validate_greens_seed_changes_sample(capsys):
    main(["validate-greens", "--pairs", "50", "--seed", "1"])
    out1 = capsys.readouterr().out
    main(["validate-greens", "--pairs", "50", "--seed", "2"])
    out2 = capsys.readouterr().out
    assert out1 != out2


def test_validate_quadrature(capsys):
    assert main(["validate-quadrature"]) == 0
    assert "orders 1..8" in capsys.readouterr().out
    assert main(["validate-quadrature", "--max-order", "12",
                 "--tol", "1e-16"]) == 1


def test_export_mesh(tmp_path, mini_ini, capsys):
    out = tmp_path / "mesh.csv"
    assert main(["export-mesh", "--config", mini_ini,
                 "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "sx,sy,sz,area,nx,ny,nz,element_index"
    assert len(lines) == 1 + 12  # header + 2 elements x 6 patches


def test_subspace(mini_ini, capsys):
    assert main(["subspace", "--config", mini_ini]) == 0
    assert "current subspace dimension: 2" in capsys.readouterr().out


def test_subspace_default_config(capsys):
    assert main(["subspace"]) == 0
    assert "current subspace dimension: 8" in capsys.readouterr().out


def test_bench_small(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--ports", "2,4", "--segments", "12",
                 "--repeats", "3", "--output", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "backend:" in stdout
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 3  # header + 2 port counts
    assert rows[1].split(",")[4] == "4"
