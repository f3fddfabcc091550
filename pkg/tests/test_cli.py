from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spheroidal import cli
from spheroidal.lattice import TransportAmbiguityError
from spheroidal.spectral import SpectralConvergenceError


def run(argv, capsys=None):
    code = cli.main(argv)
    out = capsys.readouterr() if capsys is not None else None
    return code, out


def test_spectrum_spherical_rows(tmp_path, capsys):
    code, _ = run(["spectrum", "--gamma", "0", "--mmax", "3", "--lmax", "5", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "spectrum_gamma0.csv").read_text())))
    assert len(rows) == sum(6 - abs(m) for m in range(-3, 4))
    for r in rows:
        l = int(r["l"])
        assert float(r["g"]) == l * (l + 1)
    svg = (tmp_path / "spectrum_gamma0.svg").read_text()
    assert svg.startswith("<svg") and "<circle" in svg and "<polyline" in svg


def test_spectrum_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["spectrum", "--gamma", "3.5", "--mmax", "4", "--lmax", "9", "--out", str(d)], capsys)[0] == 0
    for name in ("spectrum_gamma3p5.csv", "spectrum_gamma3p5.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_spectrum_hbar_columns(tmp_path, capsys):
    code, _ = run(["spectrum", "--gamma", "18", "--mmax", "3", "--lmax", "6", "--hbar", "0.5",
                   "--no-svg", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "spectrum_gamma18.csv").read_text())))
    for r in rows:
        assert float(r["hbar_m"]) == 0.5 * int(r["m"])
        assert float(r["hbar2_g"]) == pytest.approx(0.25 * float(r["g"]), rel=1e-15)
    assert not (tmp_path / "spectrum_gamma18.svg").exists()


def test_output_directory_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SPHEROIDAL_OUT", str(tmp_path / "env"))
    assert run(["spectrum", "--gamma", "1", "--mmax", "1", "--lmax", "2", "--no-svg"], capsys)[0] == 0
    assert (tmp_path / "env" / "spectrum_gamma1.csv").exists()


def test_no_temporary_files_left(tmp_path, capsys):
    run(["spectrum", "--gamma", "1", "--mmax", "1", "--lmax", "2", "--out", str(tmp_path)], capsys)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["spectrum_gamma1.csv", "spectrum_gamma1.svg"]


@pytest.mark.parametrize("symmetry,matrix", [("all", [[1, 0], [2, 1]]), ("s2even", [[1, 0], [1, 1]])])
def test_monodromy_gamma16(tmp_path, capsys, symmetry, matrix):
    code, out = run(["monodromy", "--gamma", "16", "--symmetry", symmetry, "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / f"monodromy_gamma16_{symmetry}.json").read_text())
    assert doc["matrix"] == matrix and doc["index"] == matrix[1][0]
    assert doc["l_star"] == 20
    assert f"index {matrix[1][0]}" in out.out
    assert (tmp_path / f"monodromy_gamma16_{symmetry}.svg").exists()


def test_monodromy_refuses_small_gamma(tmp_path, capsys):
    code, out = run(["monodromy", "--gamma", "2", "--out", str(tmp_path)], capsys)
    assert code == 4
    assert "not constructible" in out.err
    assert not any(tmp_path.iterdir())


def test_monodromy_transport_failure_exit_code(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise TransportAmbiguityError("two candidates")

    monkeypatch.setattr(cli, "transport_cell", boom)
    code, out = run(["monodromy", "--gamma", "6", "--no-svg", "--out", str(tmp_path)], capsys)
    assert code == 3 and "two candidates" in out.err


def test_solver_failure_exit_code(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise SpectralConvergenceError("K_max reached")

    monkeypatch.setattr(cli, "build_joint_spectrum", boom)
    code, out = run(["spectrum", "--gamma", "3", "--out", str(tmp_path)], capsys)
    assert code == 2 and "K_max" in out.err


@pytest.mark.parametrize("argv", [
    ["spectrum"],
    ["spectrum", "--gamma", "x"],
    ["spectrum", "--gamma", "1", "--mmax", "5", "--lmax", "2"],
    ["spectrum", "--gamma", "-1"],
    ["monodromy", "--gamma", "16", "--symmetry", "bogus"],
    ["monodromy", "--gamma", "0"],
    ["classical", "teleport"],
    ["classical", "action", "--m", "1", "--g", "-100", "--gamma", "4"],
    ["nonsense"],
])
def test_bad_flags_exit_4(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(argv))
    assert exc.value.code == 4


def test_classical_action(tmp_path, capsys):
    code, out = run(["classical", "action", "--m", "0", "--g", "0", "--gamma", "16", "--out", str(tmp_path)], capsys)
    assert code == 0
    val = float(out.out.strip().splitlines()[-1])
    assert abs(val - 10.18592) < 1e-5 and abs(val - 32 / math.pi) < 1e-8
    doc = json.loads((tmp_path / "action_m0_g0.json").read_text())
    assert doc["action"] == val


def test_classical_classify_pole(tmp_path, capsys):
    code, out = run(["classical", "classify", "--point", "pole", "--E", "1", "--a", "1", "--beta", "1",
                     "--out", str(tmp_path)], capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert "FocusFocus" in lines
    doc = json.loads((tmp_path / "classify_pole.json").read_text())
    quad = [complex(*z) for z in doc["eigenvalues"] if abs(complex(*z)) > 1e-6]
    assert len(quad) == 4
    for z in quad:
        assert abs(abs(z.real) - math.sqrt(2)) < 1e-8 and abs(abs(z.imag) - 1) < 1e-8


def test_classical_classify_equator(tmp_path, capsys):
    code, out = run(["classical", "classify", "--point", "equator", "--m", "2", "--gamma", "3",
                     "--out", str(tmp_path)], capsys)
    assert code == 0 and "EllipticTransversal" in out.out


def test_classical_bifurcation(tmp_path, capsys):
    code, _ = run(["classical", "bifurcation", "--gamma", "4", "--mrange", "2", "--samples", "5",
                   "--out", str(tmp_path)], capsys)
    assert code == 0
    lines = (tmp_path / "bifurcation_gamma4.csv").read_text().splitlines()
    assert lines[0] == "m,g,kind"
    assert "0,-16,elliptic-transversal" in lines
    assert lines[-1] == "0,0,focus-focus"


def test_classical_orbit_and_pinched(tmp_path, capsys):
    code, out = run(["classical", "orbit", "--t", "1", "--dt", "0.01", "--every", "10", "--out", str(tmp_path)], capsys)
    assert code == 0 and "max invariant drift" in out.out
    assert len((tmp_path / "orbit_G.csv").read_text().splitlines()) == 12
    code, _ = run(["classical", "pinched", "--samples", "5", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "pinched_torus.csv").read_text())))
    assert len(rows) == 50
    assert max(abs(float(r["G"])) for r in rows) < 1e-12


def test_validate_brackets(capsys):
    code, out = run(["validate", "--suite", "brackets"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["passed"]
    assert all(c["value"] < 1e-10 for c in doc["checks"])


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "spheroidal.cli", "spectrum", "--gamma", "0", "--mmax", "0",
                          "--lmax", "1", "--no-svg", "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0
    assert (tmp_path / "spectrum_gamma0.csv").read_text().splitlines()[1] == "0,0,0,0,even,even,even"
