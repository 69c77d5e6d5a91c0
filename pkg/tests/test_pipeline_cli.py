import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import ALL_FIXTURES, CP_A_POINTS, FIXTURES, cp_a, cp_b, cp_d
from twocover import cli
from twocover.branch_data import INF, render_cover_spec
from twocover.errors import NotSemistableError
from twocover.pipeline import (
    NormalizationInputs,
    hitchin_discriminant_points,
    normalized_volume,
    run_pipeline,
    tamagawa_number,
    volume_report,
)

EXPECTED_TAM = {"cp_a": 2, "cp_b": 1, "cp_c_plus": 4, "cp_c_minus": 2, "cp_d": 4, "cp_d_swap": 2}


@pytest.mark.parametrize("name", sorted(EXPECTED_TAM))
def test_tamagawa_fixtures(name):
    assert tamagawa_number(ALL_FIXTURES[name]()) == EXPECTED_TAM[name]


def test_non_semistable_pipeline():
    with pytest.raises(NotSemistableError):
        run_pipeline(cp_b(v_phi=1))


@pytest.mark.parametrize("tam,n,expected", [
    (2, NormalizationInputs(3, 2, 9), 2),
    (1, NormalizationInputs(5, 1, 5), 1),
    (4, NormalizationInputs(3, 2, 9, Fraction(1, 2)), 2),
])
def test_normalized_volume(tam, n, expected):
    assert normalized_volume(tam, n) == expected


@pytest.mark.parametrize("args", [(6, 1, 1), (3, 0, 1), (3, 1, 0), (3, 1, 1, Fraction(-1))])
def test_bad_normalization(args):
    with pytest.raises(ValueError):
        NormalizationInputs(*args)


def test_volume_report():
    rep = volume_report(cp_a(), NormalizationInputs(3, 1, 3))
    assert rep.tamagawa == 2 and rep.volume == 2
    assert volume_report(cp_a()).volume is None
    assert rep.to_json()["invariant_factors"] == [2]


def test_hitchin_points():
    assert hitchin_discriminant_points(CP_A_POINTS, [], 3) == CP_A_POINTS
    with pytest.raises(ValueError):
        hitchin_discriminant_points([0, 1, 1, 2], [], 3)
    with pytest.raises(ValueError):
        hitchin_discriminant_points([], [], 3)
    with pytest.raises(ValueError):
        hitchin_discriminant_points([0, 1], [], 9)


def run_cli(*argv, capsys=None):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_check_cp_b(capsys):
    code, out = run_cli("check", str(FIXTURES / "cp_b.json"), capsys=capsys)
    assert code == 0 and "GOOD" in out


def test_check_non_semistable(tmp_path, capsys):
    p = tmp_path / "odd.json"
    p.write_text(render_cover_spec(cp_b(v_phi=1)))
    code, out = run_cli("check", str(p), capsys=capsys)
    assert code == 2 and "V_PHI_ODD" in out
    for cmd in ("graph", "tamagawa"):
        assert run_cli(cmd, str(p), capsys=capsys)[0] == 2
    assert run_cli("volume", str(p), "--q", "3", "--dim", "1", "--a0", "3", capsys=capsys)[0] == 2


def test_bad_input_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    for cmd in ("check", "picture", "graph", "tamagawa"):
        code, out = run_cli(cmd, str(p), capsys=capsys)
        assert code == 1 and "error" in out
    assert run_cli("check", str(tmp_path / "missing.json"), capsys=capsys)[0] == 1


def test_tamagawa_cp_c_minus(capsys):
    code, out = run_cli("tamagawa", str(FIXTURES / "cp_c_minus.json"), capsys=capsys)
    assert code == 0 and "Phi = Z/4, fixed = 2" in out


def test_tamagawa_limit(capsys):
    code, out = run_cli("tamagawa", "--max-enum", "1", str(FIXTURES / "cp_a.json"), capsys=capsys)
    assert code == 1 and "enumeration bound" in out


def test_graph_dot(tmp_path, capsys):
    dot = tmp_path / "a.dot"
    code, out = run_cli("graph", str(FIXTURES / "cp_a.json"), "--dot", str(dot), capsys=capsys)
    assert code == 0
    text = dot.read_text()
    assert text.count("shape=") == 4 and text.count(" -- ") == 4


def test_picture(capsys):
    code, out = run_cli("picture", str(FIXTURES / "cp_a.json"), capsys=capsys)
    assert code == 0
    assert out.splitlines()[0] == "(((r1 r6 r7)_3 r5)_1 (r2 r3 r4)_2 r8)_0"
    assert "D[r2,r3,r4]@1 v=3" in out


def test_volume_json(capsys):
    code, out = run_cli("--json", "volume", str(FIXTURES / "cp_d_swap.json"),
                        "--q", "3", "--dim", "2", "--a0", "9", "--conductor", "1/2", capsys=capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc == {"verdict": {"semistable": True, "violations": []}, "reduction": "SEMISTABLE",
                   "invariant_factors": [4], "tamagawa": 2, "volume": "1"}


def test_batch_order(capsys):
    files = [str(FIXTURES / f"{n}.json") for n in ("cp_d", "cp_a")]
    code, out = run_cli("--json", "tamagawa", *files, capsys=capsys)
    doc = json.loads(out)
    assert code == 0 and [d["tamagawa"] for d in doc] == [4, 2]


@pytest.mark.parametrize("name", sorted(ALL_FIXTURES))
def test_reports_deterministic(name, capsys):
    path = str(FIXTURES / f"{name}.json")
    first = run_cli("volume", path, "--q", "3", "--dim", "1", "--a0", "3", capsys=capsys)
    second = run_cli("volume", path, "--q", "3", "--dim", "1", "--a0", "3", capsys=capsys)
    assert first == second and first[0] == 0


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "twocover.cli", "check", str(FIXTURES / "cp_a.json")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "SEMISTABLE" in out.stdout
