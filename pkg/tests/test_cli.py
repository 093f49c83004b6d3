import json

import pytest

from supportvar.cli import main


@pytest.fixture(scope="module")
def gen_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    assert main(["gen", "group-algebra", "--p", "2", "--type", "2,2", "--out", str(out)]) == 0
    return out


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_gen_files(gen_dir):
    names = sorted(p.name for p in gen_dir.iterdir())
    assert names == ["algebra.json", "simple_0.json", "unit.json"]


def test_gen_invalid(capsys, tmp_path):
    code, _, err = run(capsys, ["gen", "sweedler", "--p", "2", "--out", str(tmp_path)])
    assert code == 2 and json.loads(err)["type"] == "InvalidParams"


def test_complexity(capsys, gen_dir):
    code, out, _ = run(capsys, ["complexity", str(gen_dir / "algebra.json"), "--depth", "12"])
    rep = json.loads(out)
    assert code == 0 and rep["agree"]
    assert rep["complexity"]["gamma"] == rep["variety_dim"]["gamma"] == 2
    assert rep["seed"] == 0 and rep["depth"] == 12 and rep["algebra_hash"]


def test_deterministic(capsys, gen_dir):
    argv = ["ring", str(gen_dir / "algebra.json"), "--depth", "4"]
    _, a, _ = run(capsys, argv)
    _, b, _ = run(capsys, argv)
    assert a == b


def test_split(capsys, gen_dir):
    alg = str(gen_dir / "algebra.json")
    code, out, _ = run(capsys, ["split", alg, "--module", "L:h1_0*h1_1", "--z1", "h1_0", "--z2", "h1_1"])
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "split"
    assert rep["dims"] == [4, 2, 2] and rep["complexities"] == [1, 1]
    code, out, _ = run(capsys, ["split", alg, "--z1", "h1_0", "--z2", "h1_1"])
    assert code == 0 and json.loads(out)["status"] == "cannot-split"


def test_fixture(capsys):
    from supportvar.acceptance import fixture_path
    code, out, _ = run(capsys, ["fpdim", "--fixture", str(fixture_path())])
    g = json.loads(out)["gamma"]
    assert code == 0 and g["V_fpdims"]["gamma"] == 1 and g["unit_ext_hilbert"]["gamma"] == 2


def test_resolve_cache(capsys, gen_dir, tmp_path):
    alg = str(gen_dir / "algebra.json")
    run(capsys, ["resolve", alg, "--depth", "5", "--cache-dir", str(tmp_path)])
    code, out, _ = run(capsys, ["resolve", alg, "--depth", "8", "--cache-dir", str(tmp_path), "--format", "text"])
    assert code == 0 and "dims: [4, 8, 12, 16, 20, 24, 28, 32, 36]" in out


def test_lzeta_writes_module(capsys, gen_dir, tmp_path):
    target = tmp_path / "lx.json"
    code, out, _ = run(capsys, ["lzeta", str(gen_dir / "algebra.json"), "--class", "h1_0", "--out", str(target)])
    assert code == 0 and json.loads(out)["module_dim"] == 2
    assert json.loads(target.read_text())["dim"] == 2


def test_usage_errors(capsys, gen_dir, tmp_path):
    assert run(capsys, ["resolve", str(tmp_path / "missing.json")])[0] == 2
    assert run(capsys, ["complexity", str(gen_dir / "algebra.json"), "--depth", "4"])[0] == 2
    assert run(capsys, ["ext", str(gen_dir / "algebra.json"), "--module", "simple:7"])[0] == 2
    assert run(capsys, ["nonsense"])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, ["ring", str(bad)])[0] == 2
