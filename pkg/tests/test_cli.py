import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from telescope.cli import main
from telescope.suite import corpus


@pytest.fixture(scope="module")
def inputs(tmp_path_factory):
    d = tmp_path_factory.mktemp("inputs")
    for name, text in corpus().items():
        (d / name).write_text(text)
    return d


def schema(name):
    return json.loads(resources.files("telescope").joinpath(f"schemas/{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, name, *argv):
    code, out, err = run(capsys, name, *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, schema(name))
    return data, out


def test_homology(capsys, inputs):
    data, _ = run_json(capsys, "homology", str(inputs / "rp2.complex"))
    assert data == {"betti": [1, 0, 0], "torsion": [[], [2], []], "euler": 1}


def test_mcomplex(capsys, inputs):
    data, _ = run_json(capsys, "mcomplex", "--poset", str(inputs / "fig2.poset"), "--caps", "2,2",
                       "--check-connectivity", "2", "--collapse")
    assert data["f_vector"] == [6, 9, 4]
    assert data["connectivity_ok"] is True
    assert data["collapsible"] == "Collapsible"
    data, _ = run_json(capsys, "mcomplex", "--poset", str(inputs / "fig2.poset"), "--caps", "2,2")
    assert data["connectivity_ok"] is None and data["collapsible"] is None


def test_telescope(capsys, inputs, tmp_path):
    boxes, image = tmp_path / "q.boxes", tmp_path / "q.ppm"
    data, _ = run_json(capsys, "telescope", "--formula", str(inputs / "quadrant.formula"), "--box", "-2,2x-2,2",
                       "--depth", "5", "--emit-boxes", str(boxes), "--emit-image", str(image))
    assert data["betti"] == [1, 0] and data["stable"] is True
    assert data["eta_used"] == "1/100"
    assert boxes.read_text().startswith("dim 2\n")
    assert image.read_bytes().startswith(b"P6\n256 256\n255\n")


def test_telescope_image_needs_the_plane(capsys, inputs, tmp_path):
    code, _, err = run(capsys, "telescope", "--formula", str(inputs / "two_intervals.formula"), "--box", "-4,4",
                       "--depth", "3", "--emit-image", str(tmp_path / "x.ppm"))
    assert code == 2 and "2D" in err
    code, _, _ = run(capsys, "telescope", "--formula", str(inputs / "quadrant.formula"), "--box", "-4,4")
    assert code == 2


def test_fibred(capsys, inputs):
    data, _ = run_json(capsys, "fibred", "--boxes", str(inputs / "worked.boxes"), "--n", "1", "--k", "1")
    assert (data["lhs"], data["rhs"], data["holds"]) == (0, 4, True)


@pytest.mark.parametrize("argv, value", [
    (["--variant", "equations", "--n", "3", "--d", "2"], 18),
    (["--variant", "nonstrict", "--n", "2", "--s", "2"], 9),
    (["--variant", "mixed", "--n", "2", "--c", "3/2"], "9/4"),
    (["--variant", "projection", "--n", "2", "--r", "1", "--k", "1", "--s", "2", "--d", "2"], 66048),
    (["--variant", "pfaffian_total", "--n", "3", "--s", "2", "--ell", "0", "--alpha", "5", "--beta", "2"], 1728),
])
def test_bounds(capsys, argv, value):
    data, _ = run_json(capsys, "bounds", *argv)
    assert data["value"] == value
    assert data["constants_note"]


def test_bounds_projection_extras(capsys):
    data, _ = run_json(capsys, "bounds", "--variant", "projection", "--n", "2", "--r", "1", "--k", "1",
                       "--s", "2", "--d", "2")
    assert data["terms"] == [512, 65536] and data["quantifier_elimination"] == 256


def test_suite_subset(capsys):
    data, _ = run_json(capsys, "suite", "--only", "1,9")
    assert data["passed"] is True
    assert [c["number"] for c in data["criteria"]] == [1, 9]


def test_suite_text(capsys):
    code, out, _ = run(capsys, "suite", "--only", "1", "--output", "text")
    assert code == 0 and out.startswith("[PASS]")


def test_examples(capsys, tmp_path):
    data, _ = run_json(capsys, "examples", "--out", str(tmp_path / "ex"))
    assert sorted(p.split("/")[-1] for p in data["written"]) == sorted(corpus())
    assert (tmp_path / "ex" / "rp2.complex").exists()


def test_output_is_byte_identical(capsys, inputs):
    argv = ["mcomplex", "--poset", str(inputs / "fig2.poset"), "--caps", "2,2", "--collapse", "--seed", "7"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_text_output(capsys, inputs):
    code, out, _ = run(capsys, "homology", str(inputs / "rp2.complex"), "--output", "text")
    assert code == 0
    assert out.splitlines()[0].split() == ["betti", "[1,", "0,", "0]"]


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["homology", "/no/such/file"],
    ["mcomplex", "--poset", "/no/such/file", "--caps", "1"],
    ["mcomplex", "--caps", "1,x", "--poset", "p"],
    ["bounds", "--variant", "pfaffian_projection", "--ell", "1", "--alpha", "1", "--beta", "1", "--r", "1"],
    ["bounds", "--variant", "pfaffian_total"],
    ["bounds", "--variant", "equations", "--n", "0"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_error_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.formula"
    bad.write_text("p1: x0\n(> p1")
    assert run(capsys, "telescope", "--formula", str(bad), "--box", "0,1")[0] == 2


def test_computation_failure_exits_one(capsys, inputs):
    code, _, err = run(capsys, "telescope", "--formula", str(inputs / "quadrant.formula"), "--box", "-2,2x-2,2",
                       "--depth", "2", "--policy", "strict")
    assert code == 1 and "DepthExceeded" in err


def test_module_entry_point(inputs):
    r = subprocess.run([sys.executable, "-m", "telescope", "homology", str(inputs / "rp2.complex")],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["torsion"] == [[], [2], []]
