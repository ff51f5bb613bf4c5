import subprocess
import sys

import numpy as np
import pytest

from ptstark.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, run
from ptstark.io import CSV_COLUMNS, export_csv, export_svg, format_float, read_csv, scan_to_text
from ptstark.scan import GScan, scan
from ptstark.slater import MatrixPencil

HEADER = ",".join(CSV_COLUMNS)


def data_rows(path):
    with open(path) as fh:
        return [line.rstrip("\n").split(",") for line in fh
                if not line.startswith("#") and not line.startswith(HEADER)]


def comments(path):
    with open(path) as fh:
        return [line.rstrip("\n") for line in fh if line.startswith("#")]


def two_level_scan():
    p = MatrixPencil.from_arrays(np.eye(2), np.diag([0.0, 1.0]), [[0, 1], [1, 0]], [0, 1])
    return scan(p, np.linspace(0, 1, 11))


def test_format_float():
    assert format_float(-0.0) == format_float(0.0) == "0.00000000000e+00"
    assert format_float(np.nan) == "nan"
    assert format_float(1 / 3) == "3.33333333333e-01"


def test_empty_scan_is_header_only(tmp_path):
    empty = GScan(np.array([]), np.zeros((0, 0), complex), np.zeros((0, 0), object))
    path = tmp_path / "empty.csv"
    export_csv(empty, path)
    assert path.read_text() == HEADER + "\n"


def test_roundtrip(tmp_path):
    gs = two_level_scan()
    path = tmp_path / "s.csv"
    export_csv(gs, path, {"command": "test", "alpha": 2.0}, ["ep pair=0-1 x=1"])
    assert len(data_rows(path)) == 2 * 11
    back, meta = read_csv(path)
    assert meta == {"alpha": "2.0", "command": "test"}
    np.testing.assert_allclose(back.g_grid, gs.g_grid, rtol=1e-11)
    np.testing.assert_allclose(back.values, gs.values, rtol=1e-11, atol=1e-300)
    assert (back.flags == gs.flags).all()
    assert scan_to_text(back, meta, ["ep pair=0-1 x=1"]) == path.read_text()


def test_svg(tmp_path):
    path = tmp_path / "s.svg"
    export_svg(two_level_scan(), path, title="two level")
    text = path.read_text()
    assert text.startswith("<svg") and text.count("<polyline") == 4


def test_write_failure_names_path(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        export_csv(two_level_scan(), bad)


def test_linear_command(tmp_path):
    out = tmp_path / "lin.csv"
    assert run(["linear", "--m", "0", "--g-min", "0", "--g-max", "2", "--g-steps", "101",
                "--n-radial", "6", "-o", str(out)]) == EXIT_OK
    rows = data_rows(out)
    assert len(rows) == 101 * 8
    g0 = [r for r in rows if float(r[0]) == 0.0]
    assert len(g0) == 8 and all(abs(float(r[3])) <= 1e-8 for r in g0)
    meta = "\n".join(comments(out))
    for key in ("alpha=2.0", "l_max=6", "n_radial=6", "m=0", "potential=linear"):
        assert f"# {key}" in meta


def test_ho_command(tmp_path):
    out = tmp_path / "ho.csv"
    assert run(["ho", "--g", "1", "--levels", "5", "--n-radial", "12", "--l-max", "8", "--alpha", "3",
                "-o", str(out)]) == EXIT_OK
    e = sorted(float(r[2]) for r in data_rows(out))
    np.testing.assert_allclose(e, [2.0, 3.0, 4.0, 4.0, 5.0], atol=5e-3)


def test_perturb_command(tmp_path):
    out = tmp_path / "p.csv"
    assert run(["perturb", "--model", "hydrogen", "--n", "2", "-o", str(out)]) == EXIT_OK
    w = sorted(float(r[2]) for r in data_rows_report(out))
    np.testing.assert_allclose(w, [-3, 0, 0, 3], atol=1e-6)


def data_rows_report(path):
    with open(path) as fh:
        return [line.strip().split(",") for line in fh
                if not line.startswith("#") and not line.startswith("group,")]


def test_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["scan", "--model", "linear", "--n-radial", "5", "--g-steps", "41"]
    assert run(argv + ["-o", str(a)]) == EXIT_OK
    assert run(argv + ["-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert any(c.startswith("# g_c=") for c in comments(a))


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nn-radial = 4\ng_steps=5\nl_max=2\n")
    out = tmp_path / "c.csv"
    assert run(["--config", str(cfg), "coulomb", "--g-steps", "3", "-o", str(out)]) == EXIT_OK
    meta = comments(out)
    assert "# n_radial=4" in meta and "# g_steps=3" in meta and "# l_max=2" in meta


@pytest.mark.parametrize(
    "argv",
    [
        ["ho", "--n-radial", "0"],
        ["ho", "--alpha", "-1"],
        ["ho", "--g-min", "1", "--g-max", "0"],
        ["nosuch"],
        ["ho", "--bogus"],
    ],
)
def test_config_errors_exit_2(argv, tmp_path):
    assert run(argv + ["-o", str(tmp_path / "x.csv")]) == EXIT_CONFIG


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    assert run(["--config", str(cfg), "ho"]) == EXIT_CONFIG
    assert run(["--config", str(tmp_path / "absent.cfg"), "ho"]) == EXIT_CONFIG


def test_unwritable_output_exit_2(tmp_path):
    assert run(["ho", "--g", "0", "-o", str(tmp_path / "no" / "x.csv")]) == EXIT_CONFIG


def test_numerical_failure_exit_3(tmp_path):
    # overlap loses positive definiteness in double precision
    assert run(["linear", "--l-max", "4", "--n-radial", "22", "--g", "0.1",
                "-o", str(tmp_path / "x.csv")]) == EXIT_NUMERIC


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ptstark.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "ptstark" in proc.stdout
