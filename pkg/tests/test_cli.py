import csv
import io
import json
import math
import subprocess
import sys

import pytest

from smirnov import __version__
from smirnov.cli import main, parse_points, polar_grid


@pytest.fixture(autouse=True)
def _isolate_env(monkeypatch):
    monkeypatch.delenv("SMIRNOV_GRID_N", raising=False)


def write(tmp_path, obj, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    rc = main(argv)
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


KOEBE_Z = {
    "kind": "smirnov",
    "inner": {"power": 1},
    "outer": {"factors": [{"inner": {"power": 1}, "a": 1, "s": -2}], "scale": 4, "gamma": math.pi},
}


def test_eval_javad_points(tmp_path, capsys):
    path = write(tmp_path, {"kind": "named-example", "name": "javad"})
    rc, out, _ = run(["eval", "--input", path, "--points", "0.5,0;0,0.5"], capsys)
    assert rc == 0
    assert out.splitlines()[0] == f"# smirnov {__version__} seed=0"
    r = rows(out)
    # javad(z) = 3iz / (2(1 - z^2))
    for row in r:
        z = complex(float(row["x"]), float(row["y"]))
        want = 3j * z / (2 * (1 - z * z))
        assert complex(float(row["re"]), float(row["im"])) == pytest.approx(want, abs=1e-13)


def test_eval_polar_grid_shape(tmp_path, capsys):
    path = write(tmp_path, {"kind": "inner", "zeros": [[0.5, 0.0]]})
    rc, out, _ = run(["eval", "--input", path, "--rings", "3", "--angles", "8"], capsys)
    assert rc == 0
    assert len(rows(out)) == 1 + 3 * 8 == len(polar_grid(0.9, 3, 8))


def test_eval_marks_poles(tmp_path, capsys):
    path = write(tmp_path, {"kind": "named-example", "name": "javad"})
    _, out, _ = run(["eval", "--input", path, "--points", "1,0;0.2,0"], capsys)
    r = rows(out)
    assert r[0]["pole"] == "1" and r[0]["re"] == "nan"
    assert r[1]["pole"] == "0"


def test_output_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, {"kind": "named-example", "name": "koebe-singular"})
    outs = []
    for k in range(2):
        target = str(tmp_path / f"o{k}.csv")
        assert main(["eval", "--input", path, "--rings", "4", "--angles", "16", "--output", target]) == 0
        outs.append(open(target, "rb").read())
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "desc",
    [
        {"kind": "inner", "zeros": [[1.5, 0.0]]},
        {"kind": "nonsense"},
        {"kind": "named-example", "name": "unknown"},
        {"kind": "inner", "zeros": [[0.1]]},
        {"kind": "expr", "op": "quotient", "args": [{"kind": "inner"}]},
        {"name": "javad"},
    ],
)
def test_bad_descriptor_exit_2(tmp_path, capsys, desc):
    rc, out, err = run(["eval", "--input", write(tmp_path, desc)], capsys)
    assert rc == 2 and "schema error" in err


def test_invalid_json_and_grid(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["eval", "--input", str(p)], capsys)[0] == 2
    good = write(tmp_path, {"kind": "inner"})
    assert run(["eval", "--input", good, "--grid-n", "100"], capsys)[0] == 2


def test_factor_modes(tmp_path, capsys):
    path = write(tmp_path, {"kind": "named-example", "name": "javad"})
    for mode in ("helson", "koebe"):
        rc, out, _ = run(["factor", "--mode", mode, "--input", path], capsys)
        assert rc == 0
        rep = json.loads(out)
        assert rep["mode"] == mode and rep["residuals"]["reconstruction"] < 1e-9
    rc, out, _ = run(["factor", "--mode", "squares", "--input", write(tmp_path, KOEBE_Z, "k.json")], capsys)
    assert rc == 0 and json.loads(out)["residuals"]["reconstruction"] < 1e-6


def test_factor_negative_is_runtime_error(tmp_path, capsys):
    path = write(tmp_path, {"kind": "named-example", "name": "javad"})
    rc, _, err = run(["factor", "--mode", "squares", "--input", path], capsys)
    assert rc == 1 and "NegativityError" in err


def test_product_trace(tmp_path, capsys):
    path = write(tmp_path, {"family": "geometric-arcs", "ratio": 0.5})
    rc, out, err = run(["product", "--input", path, "--truncation", "20", "--points", "0.1,0.2"], capsys)
    assert rc == 0 and "verdict=converges" in err
    r = rows(out)
    assert [int(x["n"]) for x in r] == list(range(1, 21))
    bounds = [float(x["tail_bound"]) for x in r]
    assert all(b >= a for a, b in zip(bounds[1:], bounds))
    assert bounds[-1] < 1e-5


def test_product_divergent_has_infinite_bounds(tmp_path, capsys):
    path = write(tmp_path, {"family": "harmonic-arcs"})
    rc, out, err = run(["product", "--input", path, "--truncation", "8"], capsys)
    assert rc == 0 and "verdict=diverges" in err
    assert all(x["tail_bound"] == "inf" for x in rows(out))


def test_aintegral_staircase(tmp_path, capsys):
    path = write(tmp_path, {"kind": "staircase", "alphas": [1.0, 0.5, 0.25]})
    rc, out, _ = run(["aintegral", "--input", path, "--ladder", "3:6", "--points", "0.2,0.1"], capsys)
    assert rc == 0
    r = rows(out)
    assert [float(x["A"]) for x in r] == [8, 16, 32, 64]
    inc = [float(x["increment"]) for x in r[1:]]
    assert all(b <= a for a, b in zip(inc, inc[1:])) and inc[-1] < 1e-3


def test_hp_columns(tmp_path, capsys):
    path = write(tmp_path, {"kind": "named-example", "name": "javad"})
    rc, out, _ = run(["hp", "--input", path, "--p", "0.5"], capsys)
    r = rows(out)
    assert rc == 0 and len(r) == 4 and {x["verdict"] for x in r} == {"bounded"}


def test_verify_suite(capsys):
    rc, out, _ = run(["verify", "--suite", "t-identities"], capsys)
    assert rc == 0 and out.rstrip().endswith("ALL PASS")
    assert run(["verify", "--suite", "nope"], capsys)[0] == 2


def test_parse_points():
    assert list(parse_points("0.5,0; 0,-0.25")) == [0.5, -0.25j]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "smirnov.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == f"smirnov {__version__}"
