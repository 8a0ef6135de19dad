import json

import pytest

from pwdyn.cli import dispatch
from pwdyn.maps import parse_map
from pwdyn.pinned import pinned_text


@pytest.fixture
def shift_path(tmp_path):
    path = tmp_path / "shift.map"
    path.write_text(pinned_text("shift"))
    return str(path)


@pytest.fixture
def hat_path(tmp_path):
    path = tmp_path / "hat.map"
    path.write_text(pinned_text("hat"))
    return str(path)


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_special_format(capsys, shift_path):
    code, out, _ = run(capsys, "special", shift_path)
    assert code == 0
    assert out == "S = {1/2}\nT = {}\nD = {1/2}\n"


def test_iterate_emit_map_round_trip(capsys, shift_path):
    code, out, _ = run(capsys, "iterate", shift_path, "-n", "2", "--emit-map")
    assert code == 0
    f2 = parse_map(out)
    assert len(f2.pieces) == 3
    code, out2, _ = run(capsys, "iterate", shift_path, "-n", "2", "--emit-map")
    assert out2 == out  # deterministic emission


def test_bound_format(capsys, hat_path):
    code, out, _ = run(capsys, "bound", hat_path, "--horizon", "8")
    assert code == 0
    assert out.splitlines()[0] == "count=1 N_T=1 N_D=0 bound=3 HOLDS"


def test_eval_undefined(capsys, shift_path):
    code, out, _ = run(capsys, "eval", shift_path, "--x", "1/2")
    assert code == 0
    assert "undefined" in out


def test_usage_errors(capsys, shift_path, tmp_path):
    code, _, err = run(capsys, "eval", shift_path, "--x", "1.5")
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.map"
    bad.write_text("interval 0 1\npiece 0 1 : slope 0 intercept 1/2\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "zero slope" in err
    code, _, _ = run(capsys, "nosuchcommand")
    assert code == 2


def test_orbit_selector(capsys, shift_path):
    code, out, _ = run(capsys, "orbit", shift_path, "--x", "1/2",
                       "--selector", "1")
    assert code == 0
    assert "cycle = (1/2, 3/8) (period 2)" in out
    code, _, err = run(capsys, "orbit", shift_path, "--x", "1/2",
                       "--selector", "11")
    assert code == 2


def test_structure_and_classify(capsys, shift_path):
    code, out, _ = run(capsys, "structure", shift_path, "--x", "1/2")
    assert code == 0
    assert "nodes = {3/8, 1/2, 5/8}" in out
    assert "closed = yes" in out
    code, out, _ = run(capsys, "classify", shift_path, "--x", "1/2")
    assert code == 0 and out.splitlines()[0] == "unstable"


def test_theorem5_and_regular(capsys, hat_path):
    code, out, _ = run(capsys, "regular", hat_path)
    assert code == 0 and "1/2: yes" in out
    code, out, _ = run(capsys, "theorem5", hat_path)
    assert code == 0
    assert "forward 1/2: orbit (7/12) stable" in out
    assert "reverse (7/12): w=1/2 regular=yes" in out


def test_plot_csv_and_svg(capsys, shift_path, hat_path):
    code, out, _ = run(capsys, "plot", shift_path, "--mode", "graph")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "segment,x1,y1,x2,y2"
    names = [ln.split(",")[0] for ln in lines[1:]]
    assert names == ["piece0", "piece1", "jump0"]
    assert "precision" in out.splitlines()[1]
    code, out, _ = run(capsys, "plot", hat_path, "--mode", "cobweb",
                       "--x0", "5/8", "-n", "20", "--format", "svg")
    assert code == 0
    assert out.startswith("<svg") and out.rstrip().endswith("</svg>")
    code, _, err = run(capsys, "plot", hat_path, "--mode", "cobweb")
    assert code == 2  # cobweb needs a start


def test_suite_json_and_exit(capsys):
    code, out, _ = run(capsys, "suite", "--seed", "3", "--which",
                       "pinned_double_shift", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["properties"]["pinned_double_shift"]["fails"] == 0
    code, _, err = run(capsys, "suite", "--which", "no_such_property")
    assert code == 2


def test_compose_command(capsys, shift_path):
    code, out, _ = run(capsys, "compose", shift_path, shift_path,
                       "--emit-map")
    assert code == 0
    composed = parse_map(out)
    assert len(composed.pieces) == 3
    assert [str(b) for b in composed.breakpoints] == ["3/8", "5/8"]
