import io
import json
import subprocess
import sys

import pytest

from xover import cli
from xover.distance import DistanceValue


def write(path, *lines):
    path.write_text("\n".join(lines) + "\n")
    return path


def run(*argv):
    out = io.StringIO()
    code = cli.main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def pops(tmp_path):
    return {
        "src": write(tmp_path / "src.txt", "11100111", "00011000"),
        "opt": write(tmp_path / "opt.txt", "11111111"),
        "zero": write(tmp_path / "zero.txt", "00000000"),
        "a": write(tmp_path / "a.txt", "010", "101"),
        "short": write(tmp_path / "short.txt", "0101"),
        "bad": write(tmp_path / "bad.txt", "01x1"),
        "empty": write(tmp_path / "empty.txt", "# nothing"),
    }


def test_distance_example(pops):
    code, text = run("distance", pops["src"], pops["opt"], "-n", 2)
    assert code == 0
    assert "f(P1,P2) = 1" in text
    code, text = run("distance", pops["src"], pops["opt"], "-n", 1, "--engine", "both")
    assert code == 0 and "f(P1,P2) = 2" in text


def test_distance_identical_files(pops):
    code, text = run("distance", pops["src"], pops["src"], "-n", 3, "--engine", "both")
    assert code == 0
    assert "f(P1,P2) = 0" in text and "f(P2,P1) = 0" in text and "d(P1,P2) = 0" in text


def test_distance_unreachable(pops):
    for engine in ("fast", "oracle", "both"):
        code, text = run("distance", pops["zero"], pops["opt"], "-n", 5, "--engine", engine)
        assert code == 0
        assert "f(P1,P2) = Unreachable(k*=4)" in text


def test_distance_closure_semantics(pops, tmp_path):
    sub = write(tmp_path / "sub.txt", "00011000")
    code, text = run("distance", pops["src"], sub, "-n", 1, "--semantics", "closure", "--engine", "both")
    assert code == 0 and "f(P1,P2) = 1" in text
    code, text = run("distance", pops["src"], sub, "-n", 1)
    assert code == 0 and "f(P1,P2) = 0" in text


def test_distance_other_alphabet(tmp_path):
    p = write(tmp_path / "p.txt", "acg", "gca")
    q = write(tmp_path / "q.txt", "aca")
    code, text = run("distance", p, q, "-n", 2, "--alphabet", "acg", "--engine", "both")
    assert code == 0 and "f(P1,P2) = 1" in text


def test_data_errors(pops, capsys):
    assert run("distance", pops["src"], pops["short"], "-n", 1)[0] == 3
    assert run("distance", pops["bad"], pops["opt"], "-n", 1)[0] == 3
    assert run("distance", pops["empty"], pops["opt"], "-n", 1)[0] == 3
    assert run("distance", pops["src"], pops["opt"], "-n", 9)[0] == 3
    assert run("distance", pops["src"], pops["src"].with_name("missing.txt"), "-n", 1)[0] == 3
    assert "error:" in capsys.readouterr().err


def test_oracle_limit_is_data_error(tmp_path):
    big = write(tmp_path / "big.txt", "0" * 17, "1" * 17)
    assert run("distance", big, big, "-n", 1, "--engine", "oracle")[0] == 3


def test_usage_errors(pops):
    for argv in ([], ["distance", pops["src"]], ["distance", pops["src"], pops["opt"], "-n", "x"],
                 ["experiment", "--kstar", "0"], ["frobnicate"]):
        with pytest.raises(SystemExit) as exc:
            run(*argv)
        assert exc.value.code == 2


def test_disagreement_exit_code(pops, monkeypatch, capsys):
    monkeypatch.setattr(cli, "directed_distance", lambda *a, **k: DistanceValue.finite(3, 4))
    code, _ = run("distance", pops["src"], pops["opt"], "-n", 2, "--engine", "both")
    assert code == 4
    assert "disagree" in capsys.readouterr().err


def test_closure_examples(pops, tmp_path):
    code, text = run("closure", pops["a"], "-n", 2)
    assert code == 0
    assert "S_1 size=8" in text and "fixed point at index 1" in text
    code, text = run("closure", write(tmp_path / "z.txt", "000"), "-n", 1)
    assert "fixed point at index 0" in text
    code, text = run("closure", pops["src"], "-n", 1)
    lines = text.splitlines()
    assert "11111111" not in lines[1] and "11111111" in lines[2]
    code, text = run("closure", pops["src"], "-n", 1, "--max-gen", 1)
    assert code == 0 and "stopped at max-gen 1" in text


def test_experiment_outputs_and_rerun(tmp_path):
    args = ["experiment", "--length", 4, "--n-list", "1-3", "--samples", 3, "--seed", 7]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(*args, "--out-dir", a)[0] == 0
    assert run(*args, "--out-dir", b, "--workers", 2)[0] == 0
    for name in ("results.csv", "summary.csv", "histogram.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["seed"] == 7 and manifest["kstar"] == {"1": 3, "2": 3, "3": 3}
    assert manifest["config"]["n_values"] == [1, 2, 3]
    rows = (a / "results.csv").read_text().splitlines()
    assert "1111,1,0.000000,3,0.000000" in rows

    c = tmp_path / "c"
    assert run("experiment", "--from-manifest", a / "manifest.json", "--out-dir", c)[0] == 0
    for name in ("results.csv", "summary.csv", "histogram.csv"):
        assert (a / name).read_bytes() == (c / name).read_bytes()


def test_experiment_errors(tmp_path):
    blocker = write(tmp_path / "file", "x")
    assert run("experiment", "--length", 4, "--n-list", "1", "--out-dir", blocker / "sub")[0] == 3
    assert run("experiment", "--length", 4, "--target", "111", "--out-dir", tmp_path)[0] == 3
    assert run("experiment", "--length", 4, "--n-list", "5", "--out-dir", tmp_path)[0] == 3
    bad = write(tmp_path / "m.json", "{not json")
    assert run("experiment", "--from-manifest", bad, "--out-dir", tmp_path)[0] == 3


def test_module_entry_point(pops):
    proc = subprocess.run([sys.executable, "-m", "xover", "distance", str(pops["src"]), str(pops["opt"]), "-n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "f(P1,P2) = 1" in proc.stdout
