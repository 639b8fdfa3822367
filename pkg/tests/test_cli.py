import json

import pytest

from artifact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def rect_file(tmp_path, w, h):
    path = tmp_path / f"rect-{w}x{h}.json"
    path.write_text(json.dumps({"outer": [[0, 0], [w, 0], [w, h], [0, h]], "holes": []}))
    return str(path)


def test_diameter_of_the_unit_square(capsys):
    code, out = run(capsys, "diameter", "unit-square", "--algo", "both")
    doc = json.loads(out)
    assert code == 0
    assert doc["value"] == "2" and doc["agree"] is True
    assert doc["results"]["prelim"]["decimal"] == "2"


def test_center_of_a_rectangle_file(capsys, tmp_path):
    code, out = run(capsys, "center", rect_file(tmp_path, 3, 1), "--algo", "prelim")
    doc = json.loads(out)
    assert code == 0
    assert doc["center"] == ["3/2", "1/2"] and doc["radius"] == "2"
    assert doc["domain"] == "rect-3x1"


def test_oracle_check_on_hole1(capsys):
    code, out = run(capsys, "oracle-check", "HOLE1", "--pairs", "500", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True and doc["mismatches"] == []


def test_distance_with_witness_path(capsys):
    code, out = run(capsys, "distance", "HOLE1", "5,0", "5,10")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "12"
    assert doc["path"][0] == ["5", "0"] and doc["path"][-1] == ["5", "10"]


def test_decompose_reports_cells(capsys):
    code, out = run(capsys, "decompose", "HOLE1", "--flavor", "D")
    assert code == 0
    assert len(json.loads(out)["cells"]) == 8


@pytest.mark.parametrize("argv", [["diameter", "L-shape"], ["center", "HOLE1"], ["gen", "pinch", "--seed", "3"]])
def test_output_is_deterministic(capsys, argv):
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


@pytest.mark.parametrize("kind", ["random-holes", "pinch", "comb"])
def test_generated_domains_validate(capsys, tmp_path, kind):
    path = tmp_path / f"{kind}.json"
    code, _ = run(capsys, "gen", kind, "--seed", "4", "--out", str(path))
    assert code == 0
    code, out = run(capsys, "validate", str(path))
    assert code == 0
    assert json.loads(out)["domain"] == kind


def test_generator_options(capsys):
    code, out = run(capsys, "gen", "random-holes", "--seed", "1", "--h", "3")
    assert code == 0 and json.loads(out)["h"] == 3


@pytest.mark.parametrize(
    "argv,error",
    [
        (["validate", "/no/such/file.json"], "parse_error"),
        (["distance", "HOLE1", "5,5", "1,1"], None),
        (["distance", "HOLE1", "five", "1,1"], "parse_error"),
    ],
)
def test_errors_exit_with_status_1(capsys, argv, error):
    code, out = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 1 and "error" in doc
    if error:
        assert doc["error"] == error


def test_invalid_domain_file(capsys, tmp_path):
    path = tmp_path / "bowtie.json"
    path.write_text(json.dumps({"outer": [[0, 0], [4, 4], [4, 0], [0, 5]], "holes": []}))
    code, out = run(capsys, "validate", str(path))
    doc = json.loads(out)
    assert code == 1 and doc["accepted"] is False
    assert doc["problems"] == ["ring 0 is not simple"]


def test_bench_writes_csv(capsys):
    code, out = run(capsys, "bench", "unit-square", "--tasks", "diameter", "--algo", "prelim")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("domain,n,h,task")
    assert lines[1].split(",")[5] == "2"


def test_render_writes_svg(capsys):
    code, out = run(capsys, "render", "HOLE1", "--flavor", "D")
    assert code == 0 and "<svg" in out and out.rstrip().endswith("</svg>")
