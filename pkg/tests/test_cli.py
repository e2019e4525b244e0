import csv
import io
import json
import math

import pytest

from canonsys.cli import main, parse_real
from canonsys.convergence import example_delta_plus_lebesgue, one_plus_cos_measure
from canonsys.measure import measure_to_dict


@pytest.fixture
def write_measure(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return _write


@pytest.fixture
def cos_json(write_measure):
    return write_measure("cos.json", measure_to_dict(one_plus_cos_measure()))


@pytest.fixture
def dpl_json(write_measure):
    return write_measure("dpl.json", measure_to_dict(example_delta_plus_lebesgue()))


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_real():
    assert parse_real("pi") == math.pi
    assert parse_real("2pi") == 2 * math.pi
    assert parse_real("8*pi") == 8 * math.pi
    assert parse_real("pi/2") == math.pi / 2
    assert parse_real("3pi/4") == 3 * math.pi / 4
    assert parse_real("2.5") == 2.5


def test_recover_example(cos_json, tmp_path):
    out = tmp_path / "h11.csv"
    svg = tmp_path / "h11.svg"
    assert main(["recover", "--measure", cos_json, "--T", "3.141592653589793", "--tmax", "2.5",
                 "--out", str(out), "--svg", str(svg)]) == 0
    text = out.read_text()
    assert text.splitlines()[0] == "t_left,t_right,h11,h22"
    values = [float(r["h11"]) for r in read_csv(text)]
    for got, want in zip(values, [1, 1 / 3, 2 / 3, 2 / 5, 3 / 5]):
        assert got == pytest.approx(want, rel=1e-12)
    assert "0.33333333333333331" in text  # 17 significant digits
    assert svg.read_text().startswith("<?xml")


def test_moments_and_opuc(cos_json, capsys):
    assert main(["moments", "--measure", cos_json, "--T", "2pi", "--N", "3"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert [round(float(r["a_n"]), 12) for r in rows] == [1, 0, 1, 0]
    assert rows[0]["provenance"] == "closed-form"
    assert main(["opuc", "--measure", cos_json, "--N", "20"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert len(rows) == 21 and max(float(r["rel_dev"]) for r in rows) < 1e-10


def test_kernel(cos_json, capsys, tmp_path):
    svg = tmp_path / "k.svg"
    assert main(["kernel", "--measure", cos_json, "--t", "0.75", "--svg", str(svg)]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert [(float(r["s_left"]), float(r["s_right"])) for r in rows] == [(-0.75, -0.25), (-0.25, 0.25), (0.25, 0.75)]
    assert svg.exists()


def test_converge_example(dpl_json, tmp_path, capsys):
    out, summary = tmp_path / "c.csv", tmp_path / "c.json"
    args = ["converge", "--measure", dpl_json, "--Ts", "pi,2pi,4pi,8pi", "--intervals", "0:1,0.1:0.7",
            "--hats", "0:0.5:1", "--out", str(out), "--summary", str(summary)]
    assert main(args) == 0
    rows = read_csv(out.read_text())
    assert out.read_text().splitlines()[0] == "T,a,b,integral,reference,abs_dev"
    dev = {(float(r["a"]), float(r["T"])): float(r["abs_dev"]) for r in rows}
    assert dev[(0.1, 8 * math.pi)] < dev[(0.1, math.pi)]
    assert dev[(0.0, 8 * math.pi)] <= dev[(0.0, math.pi)]
    data = json.loads(summary.read_text())
    assert data["label"] == "decay"
    # identical inputs give byte-identical output
    first = out.read_text(), summary.read_text()
    assert main(args) == 0
    assert (out.read_text(), summary.read_text()) == first


def test_converge_period_multiple_of_c(dpl_json, capsys):
    assert main(["converge", "--measure", dpl_json, "--Ts", "pi,2pi", "--intervals", "0:1", "--c", "1"]) == 1
    assert "multiples" in capsys.readouterr().err


def test_converge_breakdown_exit(write_measure, capsys):
    path = write_measure("atoms.json", {"even": True, "atoms": [{"x": -0.5, "mass": 1}, {"x": 0.5, "mass": 1}],
                                        "density": None})
    assert main(["converge", "--measure", path, "--Ts", "pi", "--intervals", "0:2"]) == 2
    assert main(["recover", "--measure", path, "--tmax", "2"]) == 2
    assert "breakdown" in capsys.readouterr().err


def test_check_pw(cos_json, write_measure, capsys):
    assert main(["check-pw", "--measure", cos_json, "--range", "10", "--delta", "0.1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert "not a proof" in data["label"] and data["sup_unit_mass"] <= 2
    assert min(w["count"] for w in data["windows"]) > 0
    odd = write_measure("odd.json", {"even": True, "atoms": [{"x": 1, "mass": 1}], "density": None})
    assert main(["check-pw", "--measure", odd, "--range", "5"]) == 1


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [], ["recover"], ["recover", "--measure", "x.json", "--tmax", "1", "--bogus"],
    ["recover", "--measure", "x.json", "--tmax", "-1"], ["converge", "--measure", "x", "--Ts", "pi", "--intervals", "2:1"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 1
    text = capsys.readouterr().err
    assert "measure JSON" in text and "--tmax" in text


def test_validation_errors(write_measure, tmp_path, capsys):
    bad = write_measure("bad.json", {"even": True, "atoms": [], "density": {"kind": "expr", "source": "1 + "}})
    assert main(["recover", "--measure", bad, "--tmax", "1"]) == 1
    neg = write_measure("neg.json", {"even": True, "atoms": [], "density": {"kind": "expr", "source": "cos(x)"}})
    assert main(["recover", "--measure", neg, "--tmax", "1"]) == 1
    assert main(["recover", "--measure", str(tmp_path / "missing.json"), "--tmax", "1"]) == 1
