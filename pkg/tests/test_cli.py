"""Command-line behavior: formats, exit codes, and the verify/oracle suites."""

import json

import pytest

from nilspectrum.cli import main
from nilspectrum.intmat import Matrix
from nilspectrum.reidemeister import AutoSpec, reidemeister_number


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_finite(capsys):
    code, out, _ = run(
        capsys, "compute", "--rank", "2", "--class", "2", "--matrix", "1,1;1,0"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["R"] == 2
    assert payload["layers"][0]["q"] == 1
    assert payload["layers"][1]["q"] == 2


def test_compute_infinite(capsys):
    code, out, _ = run(
        capsys, "compute", "--rank", "2", "--class", "4", "--matrix", "1,1;1,0"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["R"] == "infinity"
    assert payload["layers"][3]["q"] == "infinity"


def test_compute_rejects_bad_input(capsys):
    code, _, err = run(
        capsys, "compute", "--rank", "2", "--class", "2", "--matrix", "2,0;0,2"
    )
    assert code == 2
    assert "error:" in err
    code, _, err = run(
        capsys, "compute", "--rank", "2", "--class", "2", "--matrix", "1,1;x,0"
    )
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "compute", "--rank", "2")[0] == 2
    assert run(capsys, "verify", "eq99")[0] == 2
    assert run(capsys, "oracle", "tarot")[0] == 2


def test_spectrum_csv(capsys):
    code, out, _ = run(
        capsys, "spectrum", "--rank", "2", "--class", "2", "--bound", "2"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "value,witness"
    values = [int(line.split(",", 1)[0]) for line in lines[1:]]
    assert values and all(v % 2 == 0 for v in values)


def test_spectrum_json_round_trip(capsys):
    code, out, _ = run(
        capsys,
        "spectrum",
        "--rank",
        "2",
        "--class",
        "3",
        "--bound",
        "2",
        "--format",
        "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 2 and payload["class"] == 3
    assert payload["violations"] == []
    for row in payload["attained"]:
        witness = Matrix.from_text(row["witness"])
        result = reidemeister_number(AutoSpec(2, 3, witness))
        assert result.r_value == row["value"]


def test_spectrum_det_filter_flag(capsys):
    code, out, _ = run(
        capsys,
        "spectrum",
        "--rank",
        "2",
        "--class",
        "2",
        "--bound",
        "1",
        "--det",
        "1",
    )
    assert code == 0
    assert out.strip().splitlines() == ["value,witness"]
    code, out, _ = run(
        capsys,
        "spectrum",
        "--rank",
        "2",
        "--class",
        "2",
        "--bound",
        "1",
        "--det",
        "-1",
    )
    assert code == 0
    assert len(out.strip().splitlines()) > 1


def test_spectrum_writes_report_and_figure(tmp_path, capsys):
    out_file = tmp_path / "spread.csv"
    code, _, err = run(
        capsys,
        "spectrum",
        "--rank",
        "2",
        "--class",
        "2",
        "--bound",
        "1",
        "--out",
        str(out_file),
    )
    assert code == 0
    assert out_file.exists()
    figure = tmp_path / "spread.png"
    assert figure.exists() and figure.stat().st_size > 0
    assert "spread.png" in err


def test_spectrum_no_plot(tmp_path, capsys):
    out_file = tmp_path / "flat.csv"
    code, _, _ = run(
        capsys,
        "spectrum",
        "--rank",
        "2",
        "--class",
        "2",
        "--bound",
        "1",
        "--out",
        str(out_file),
        "--no-plot",
    )
    assert code == 0
    assert out_file.exists()
    assert not (tmp_path / "flat.png").exists()


def test_spectrum_unsupported_pair(capsys):
    code, _, err = run(
        capsys, "spectrum", "--rank", "3", "--class", "3", "--bound", "1"
    )
    assert code == 2
    assert "error:" in err
    code, out, _ = run(
        capsys,
        "spectrum",
        "--rank",
        "3",
        "--class",
        "3",
        "--bound",
        "1",
        "--no-predict",
    )
    assert code == 0


def test_spectrum_guard(capsys):
    code, _, err = run(
        capsys, "spectrum", "--rank", "3", "--class", "2", "--bound", "9"
    )
    assert code == 2
    assert "guard" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "theorem1", "--bound", "1"),
        ("verify", "eq19", "--bound", "2"),
        ("verify", "eq20", "--bound", "2"),
        ("verify", "eq23", "--samples", "5", "--seed", "3"),
        ("verify", "eq24", "--samples", "60", "--seed", "7"),
        ("verify", "eq25", "--samples", "60", "--seed", "7"),
        ("verify", "eq28"),
        ("verify", "witnesses", "--n-max", "3"),
        ("verify", "closed-forms", "--bound", "2"),
    ],
)
def test_verify_checks_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert "pass" in out


def test_oracle_index(capsys):
    code, out, _ = run(capsys, "oracle", "index", "--matrix", "-5,1;1,-1")
    assert code == 0
    assert "4" in out
    code, out, _ = run(capsys, "oracle", "index", "--samples", "30", "--seed", "1")
    assert code == 0
    assert "30 matrices agree" in out


def test_oracle_magnus(capsys):
    code, out, _ = run(
        capsys, "oracle", "magnus", "--rank", "2", "--class", "3", "--bound", "1"
    )
    assert code == 0
    assert "agree" in out
    code, out, _ = run(
        capsys, "oracle", "magnus", "--matrix", "1,1;1,0", "--class", "4"
    )
    assert code == 0


def test_oracle_heisenberg(capsys):
    code, out, _ = run(capsys, "oracle", "heisenberg", "--matrix", "1,1;1,0")
    assert code == 0
    assert "both sides 2" in out
    code, out, _ = run(
        capsys, "oracle", "heisenberg", "--samples", "5", "--seed", "2"
    )
    assert code == 0
    assert "5 matrices agree" in out


def test_oracle_heisenberg_rejects_degenerate(capsys):
    code, _, err = run(capsys, "oracle", "heisenberg", "--matrix", "0,1;1,0")
    assert code == 2
    assert "error:" in err
