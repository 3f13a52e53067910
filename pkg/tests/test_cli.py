import io
import json
from pathlib import Path

import pytest

from TriTensorKit.cli import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, main
from TriTensorKit.generators import cayley6
from TriTensorKit.tensor import TriTensor

DATA = Path(__file__).parent / "data"


@pytest.fixture
def cayley6_file(tmp_path):
    path = tmp_path / "cayley6.json"
    path.write_text(json.dumps(cayley6().to_json()), encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_gen_fixture(capsys):
    code, out = run(capsys, "gen", "--fixture", "cayley6")
    assert code == EXIT_OK
    assert TriTensor.from_json(json.loads(out)) == cayley6()


def test_gen_is_deterministic(capsys):
    _, first = run(capsys, "gen", "--seed", "7")
    _, second = run(capsys, "gen", "--seed", "7")
    assert first == second
    assert json.loads(first)["dims"] == [3, 3, 4]


def test_gen_points_to_file(capsys, tmp_path):
    target = tmp_path / "points.json"
    code, out = run(capsys, "gen", "--points", "(1:0:0),(0:1:0),(0:0:1),(1:1:1),(1:2:3),(1:4:9)", "--out", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert TriTensor.from_json(json.loads(target.read_text(encoding="utf-8"))) == cayley6()


def test_gen_bad_field(capsys):
    code, _ = run(capsys, "gen", "--field", "Fp:10")
    assert code == EXIT_INPUT


@pytest.mark.parametrize("content", ["{not json", '{"dims": [3, 3, 4], "entries": []}'])
def test_analyze_malformed_input(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    code, out = run(capsys, "analyze", str(path))
    assert code == EXIT_INPUT
    assert out == ""


def test_analyze_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == EXIT_INPUT


def test_analyze_from_stdin(capsys, mocker):
    mocker.patch("sys.stdin", io.StringIO(json.dumps(TriTensor.zeros().to_json())))
    code, out = run(capsys, "analyze", "-", "--scan-prime", "11", "--no-timing", "--skip", "moduli")
    report = json.loads(out)
    assert code == EXIT_FAILURE
    assert report["checks"]["moduli"]["reason"] == "skipped on request"
    assert "elapsed_ms" not in report["checks"]["slice_rank"]


def test_analyze_output_is_byte_stable(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(TriTensor.zeros().to_json()), encoding="utf-8")
    _, first = run(capsys, "analyze", str(path), "--scan-prime", "11", "--no-timing")
    _, second = run(capsys, "analyze", str(path), "--scan-prime", "11", "--no-timing")
    assert first == second


def test_cremona_trace(capsys):
    code, out = run(capsys, "cremona", "10:4,4,4,4,4,4")
    result = json.loads(out)
    assert code == EXIT_OK
    assert result["terminal"] == "(2;0,0,0,0,0,0)"
    assert len(result["steps"]) == 3
    assert (result["DH"], result["D2"]) == (3, -5)


@pytest.mark.parametrize("argv", [["cremona", "5:1,1,1,1,1,1"], ["cremona"], ["cremona", "4:1,2"]])
def test_cremona_bad_input(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_cremona_enumerate(capsys):
    code, out = run(capsys, "cremona", "--enumerate", "4")
    result = json.loads(out)
    assert code == EXIT_OK
    assert len(result["classes"]) == 4
    assert result["ok"]


def test_en(capsys, cayley6_file):
    code, out = run(capsys, "en", cayley6_file, "--order", "0,1,2", "--degrees", "0:3", "--samples", "5")
    result = json.loads(out)
    assert code == EXIT_OK
    assert result["regime"] == "split"
    assert result["dd_zero"]
    assert result["hilbert_function"] == {"0": 3, "1": 5, "2": 6, "3": 6}
    assert result["cokernel_dimensions"] == {"0": 3, "1": 5, "2": 6, "3": 6}


def test_en_bad_twist(capsys, cayley6_file):
    code, _ = run(capsys, "en", cayley6_file, "--twist", "0")
    assert code == EXIT_INPUT


def test_missing_command():
    with pytest.raises(SystemExit):
        main([])


@pytest.mark.parametrize("name", ["doubleline-1", "doubleline-2"])
def test_gen_fixture_matches_golden(capsys, name):
    _, out = run(capsys, "gen", "--fixture", name)
    assert out == (DATA / f"{name}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "name, prime",
    [("doubleline-1", "11"), ("doubleline-2", "11"), pytest.param("cayley6", "101", marks=pytest.mark.slow)],
)
def test_analyze_fixture_is_byte_stable(capsys, tmp_path, name, prime):
    path = tmp_path / f"{name}.json"
    _, generated = run(capsys, "gen", "--fixture", name)
    path.write_text(generated, encoding="utf-8")
    code, first = run(capsys, "analyze", str(path), "--scan-prime", prime, "--no-timing")
    _, second = run(capsys, "analyze", str(path), "--scan-prime", prime, "--no-timing")
    assert code == EXIT_OK
    assert first == second
    assert "elapsed_ms" not in first


def test_analyze_prime_dividing_denominator(capsys, tmp_path):
    data = json.loads((DATA / "doubleline-1.json").read_text(encoding="utf-8"))
    data["entries"][0][0][0] = "1/11"
    path = tmp_path / "denominator.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, out = run(capsys, "analyze", str(path), "--scan-prime", "11", "--no-timing")
    report = json.loads(out)
    assert code in (EXIT_OK, EXIT_FAILURE)
    assert report["checks"]["slice_rank"]["status"] == "skip"
    assert "divides a denominator" in report["checks"]["slice_rank"]["reason"]


@pytest.mark.parametrize("prime", ["12", "2", "1"])
def test_bad_scan_prime(capsys, tmp_path, prime):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(TriTensor.zeros().to_json()), encoding="utf-8")
    code, out = run(capsys, "analyze", str(path), "--scan-prime", prime)
    assert code == EXIT_INPUT
    assert out == ""
    code, _ = run(capsys, "verify", "--suite", "cremona", "--scan-prime", prime)
    assert code == EXIT_INPUT
