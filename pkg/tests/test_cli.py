from __future__ import annotations

import json

import numpy as np
import pytest

from discfrac.cli import EXIT_FAILED, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_USAGE, main
from discfrac.kernel import kernel_recurrence


@pytest.fixture
def signal(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("n,value\n-2,0\n-1,0\n0,1\n1,0\n2,0\n")
    return path


def _csv(text):
    lines = text.strip().splitlines()
    return lines[0], [tuple(float(c) for c in line.split(",")) for line in lines[1:]]


def test_kernel_table(capsys):
    assert main(["kernel", "--alpha", "0.5", "--max-index", "4"]) == EXIT_OK
    header, rows = _csv(capsys.readouterr().out)
    assert header == "n,lambda"
    assert [r[0] for r in rows] == [0, 1, 2, 3, 4]
    np.testing.assert_array_equal([r[1] for r in rows], kernel_recurrence(0.5, 4).values)


def test_kernel_methods_agree(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["kernel", "--alpha", "-0.3", "--max-index", "50", "--out", str(a)]) == EXIT_OK
    assert main(["kernel", "--alpha", "-0.3", "--max-index", "50", "--method", "loggamma", "--out", str(b)]) == EXIT_OK
    va = np.array([r[1] for r in _csv(a.read_text())[1]])
    vb = np.array([r[1] for r in _csv(b.read_text())[1]])
    np.testing.assert_allclose(va, vb, rtol=1e-12)


def test_apply_first_difference(signal, capsys):
    assert main(["apply", "--order", "1", "--input", str(signal)]) == EXIT_OK
    header, rows = _csv(capsys.readouterr().out)
    assert header == "n,value"
    assert dict(rows) == {-2: 0.0, -1: -1.0, 0: 1.0, 1: 0.0, 2: 0.0}


def test_apply_global_flags_either_side(signal, capsys):
    main(["--h", "1/2", "apply", "--order", "0.5", "--input", str(signal)])
    before = capsys.readouterr().out
    main(["apply", "--order", "0.5", "--input", str(signal), "--h", "0.5"])
    assert capsys.readouterr().out == before


def test_apply_fft_matches_series(signal, capsys):
    main(["apply", "--order", "0.5", "--input", str(signal)])
    series = np.array(_csv(capsys.readouterr().out)[1])
    main(["apply", "--order", "0.5", "--input", str(signal), "--method", "fft"])
    fft = np.array(_csv(capsys.readouterr().out)[1])
    np.testing.assert_allclose(fft, series, atol=1e-12)


def test_evolve_conserves_mass(tmp_path, capsys):
    path = tmp_path / "s.csv"
    path.write_text("n,value\n" + "".join(f"{n},0\n" for n in range(-80, 0)) + "0,1\n")
    assert main(["evolve", "--t", "2", "--input", str(path)]) == EXIT_OK
    rows = _csv(capsys.readouterr().out)[1]
    assert sum(v for _, v in rows) == pytest.approx(1.0, abs=1e-12)


def test_holder_report(signal, tmp_path):
    out = tmp_path / "h.json"
    assert main(["holder", "--beta", "0.5", "--input", str(signal), "--report", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert set(data) == {"command", "parameters", "results", "tolerances", "flags"}
    assert data["command"] == "holder"
    assert data["results"]["norm"] == 2.0
    assert data["results"]["stability"] <= 1e-3


def test_schauder_report(tmp_path):
    out = tmp_path / "s.json"
    argv = ["schauder", "--case", "iv", "--alpha-list", "0.5", "--h-list", "1,1/2", "--families", "impulse,bump"]
    assert main(argv + ["--report", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["parameters"]["h_list"] == [1.0, 0.5]
    assert len(data["results"]["ratios"]) == 4
    assert data["flags"]["all_finite"] is True


def test_schauder_is_deterministic(tmp_path):
    argv = ["schauder", "--case", "i", "--alpha-list", "0.3", "--beta-list", "0.4", "--h-list", "1,1/4",
            "--families", "random", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(argv + ["--report", str(a)])
    main(argv + ["--report", str(b)])
    assert a.read_text() == b.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["kernel", "--alpha", "0.5"],
        ["schauder", "--case", "i", "--alpha-list", "0.6", "--beta-list", "0.5"],
        ["schauder", "--case", "ii", "--alpha-list", "0.6"],
        ["schauder", "--case", "iv", "--alpha-list", "0.5", "--families", "nope"],
        ["selftest", "--filter", "nope"],
    ],
)
def test_usage_errors(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse exits directly
        code = exc.code
    assert code == EXIT_USAGE


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("n,value\n0,1\n0,2\n")
    assert main(["apply", "--order", "0.5", "--input", str(bad)]) == EXIT_USAGE
    assert main(["apply", "--order", "0.5", "--input", str(tmp_path / "missing.csv")]) == EXIT_USAGE


def test_zero_fill_warns(tmp_path, capsys):
    path = tmp_path / "gap.csv"
    path.write_text("n,value\n0,1\n2,1\n")
    assert main(["holder", "--beta", "0.5", "--input", str(path)]) == EXIT_OK
    assert "zero-filled indices [1]" in capsys.readouterr().err


def test_nonconvergence_exit(signal, capsys):
    # a slowly decaying extension leaves a series tail above tolerance
    assert main(["apply", "--order", "0.5", "--input", str(signal), "--extension", "decay:0.8:1"]) == EXIT_NONCONVERGENCE
    assert "tail" in capsys.readouterr().err


def test_selftest_filtered(tmp_path, capsys):
    out = tmp_path / "st.json"
    assert main(["selftest", "--filter", "kernel", "--report", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.count("[PASS]") == 5 and "5/5 criteria passed" in text
    assert json.loads(out.read_text())["flags"]["passed"] is True


def test_selftest_detects_injected_fault(capsys):
    assert main(["selftest", "--filter", "kernel", "--inject-fault", "kernel"]) == EXIT_FAILED
    text = capsys.readouterr().out
    assert "FAILED" in text and "convolution" in text
