import io
import json
import subprocess
import sys

import pytest

from polyexcess import cli, harness
from polyexcess.lattice import load


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_build_then_analyze(tmp_path):
    target = tmp_path / "m34.json"
    assert run("build", "M(3,4)", "-o", str(target))[0] == 0
    assert load(target).provenance == "M(3,4)"
    code, out, _ = run("analyze", str(target))
    assert code == 0
    assert "excess degree: 8" in out.splitlines()
    code, out, _ = run("analyze", str(target), "--json")
    assert json.loads(out)["excess"]["xi"] == 8


def test_build_to_stdout():
    code, out, _ = run("build", "simplex(2)")
    assert code == 0 and json.loads(out)["facets"] == [[0, 1], [0, 2], [1, 2]]


def test_verify_expression():
    code, out, _ = run("verify", "simplex(8)")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run("verify", "cyclic(9,11)", "--checks", "XI-D+2", "--json")
    data = json.loads(out)
    assert code == 0 and data["checks"][0]["pass"] == 1


def test_verify_must_hit():
    assert run("verify", "simplex(5)", "--must-hit", "XI-D+2")[0] == 1
    assert run("verify", "cyclic(9,11)", "--must-hit", "XI-D+2")[0] == 0


def test_verify_failure_exits_1(monkeypatch):
    wrong = harness.TheoremCheck("WRONG", "always false",
                                 lambda P, p, r: True, lambda P, p, r: "no")
    monkeypatch.setattr(harness, "select_checks", lambda ids=None: [wrong])
    code, out, _ = run("verify", "simplex(3)")
    assert code == 1 and "witness: simplex(3)" in out


def test_corpus_then_verify(tmp_path):
    out_dir = tmp_path / "c"
    code, out, _ = run("corpus", "--seed", "1", "--count", "50", "--out", str(out_dir))
    assert code == 0 and "wrote 50 polytopes" in out
    index = json.loads((out_dir / "index.json").read_text())
    assert len(index["members"]) == 50 and index["spec"]["seed"] == 1
    code, out, _ = run("verify", str(out_dir), "--json")
    assert code == 0
    assert json.loads(out)["corpus_fingerprint"] == index["fingerprint"]


def test_corpus_directory_without_index(tmp_path):
    for i, expr in enumerate(("simplex(3)", "M(2,3)")):
        run("build", expr, "-o", str(tmp_path / f"x{i}.json"))
    code, out, _ = run("verify", str(tmp_path), "--json")
    assert code == 0 and json.loads(out)["size"] == 2


def test_corpus_is_byte_deterministic(tmp_path):
    for name in ("a", "b"):
        run("corpus", "--seed", "0x2a", "--count", "20", "--max-dim", "6", "--out",
            str(tmp_path / name))
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_corpus_rewrite_removes_stale_members(tmp_path):
    run("corpus", "--seed", "3", "--count", "12", "--max-dim", "5", "--out", str(tmp_path))
    run("corpus", "--seed", "3", "--count", "5", "--max-dim", "5", "--out", str(tmp_path))
    assert len(list(tmp_path.glob("p*.json"))) == 5


def test_identify():
    assert run("identify", "J(3)") == (0, "FiveWedge\n", "")
    assert run("identify", "prism(simplex(4))")[1] == "Delta(1,4)\n"
    assert run("identify", "cyclic(4,8)")[1] == "Unknown\n"


@pytest.mark.parametrize("argv", [
    ("analyze", "delta(2,)"),
    ("analyze", "missing-file.json"),
    ("build", "prism(polygon(2))"),
    ("verify", "simplex(3)", "--checks", "NOPE"),
    ("corpus", "--seed", "x", "--count", "1", "--out", "z"),
    ("frobnicate",),
    (),
])
def test_input_errors_exit_2(argv, capsys):
    code, _, err = run(*argv)
    assert code == 2


def test_parse_error_message():
    code, _, err = run("analyze", "delta(2,)")
    assert code == 2 and "line 1, column 9" in err


def test_malformed_and_insane_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("analyze", str(bad))[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"dim": 5, "n_vertices": 6,
                                  "facets": [[0, 1, 2, 3, 4], [0, 1, 2, 3, 5]]}))
    code, _, err = run("verify", str(broken))
    assert code == 2 and err.startswith("error:")


def test_text_output_is_deterministic():
    assert run("analyze", "glue(simplex(5),facet(0),simplex(5),facet(0))") == \
        run("analyze", "glue(simplex(5),facet(0),simplex(5),facet(0))")
    code, out, _ = run("analyze", "pyramid(delta(2,4))")
    assert code == 0
    assert "properties: semisimple, super_kirkman, pyramidal" in out.splitlines()
    assert "nonsimple vertices: [15]" in out.splitlines()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polyexcess", "identify", "J(3)"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "FiveWedge\n"
