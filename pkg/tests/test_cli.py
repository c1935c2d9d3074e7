import json

import numpy as np
import pytest

from polytverb.cli import main
from polytverb.geometry import PlaneFrame
from polytverb.io import save_frame


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def test_generate_solve_verify(tmp_path, run):
    inst, res = tmp_path / "f.json", tmp_path / "res.json"
    assert run("generate", "--dim", 2, "--count", 5, "--seed", 1, "--out", inst)[0] == 0
    code, out, _ = run("solve", "--in", inst, "--kind", "polygon", "--r", 3, "--out", res)
    assert code == 0 and out.startswith("VALID")
    code, out, _ = run("verify", "--in", inst, "--result", res)
    assert code == 0 and out.strip().endswith("VALID")
    assert "kill" in out


def test_verify_rejects_other_instance(tmp_path, run):
    a, b, res = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "r.json"
    run("generate", "--dim", 2, "--count", 5, "--seed", 1, "--out", a)
    run("generate", "--dim", 2, "--count", 5, "--seed", 2, "--out", b)
    run("solve", "--in", a, "--kind", "polygon", "--r", 3, "--out", res)
    code, out, _ = run("verify", "--in", b, "--result", res)
    assert code == 1 and "INVALID" in out


def test_oracle_exit_codes(tmp_path, run):
    four, five, ex = tmp_path / "4.json", tmp_path / "5.json", tmp_path / "ex.json"
    run("generate", "--dim", 2, "--count", 4, "--seed", 1, "--out", four)
    run("generate", "--dim", 2, "--count", 5, "--seed", 1, "--out", five)
    code, out, _ = run("oracle", "--in", four, "--kind", "polygon", "--r", 3)
    assert code == 1 and "found=false" in out
    code, out, _ = run("oracle", "--in", five, "--kind", "polygon", "--r", 3, "--out", ex)
    assert code == 0 and "found=true" in out
    assert run("verify", "--in", five, "--result", ex)[0] == 0
    code, out, _ = run("oracle", "--in", five, "--kind", "polygon", "--r", 3, "--no-dedup")
    assert code == 0
    assert run("oracle", "--in", five, "--kind", "polygon", "--r", 3,
               "--max-labelings", 10)[0] == 65


def test_solve_exit_codes(tmp_path, run):
    four, bad, line = tmp_path / "4.json", tmp_path / "bad.json", tmp_path / "line.json"
    run("generate", "--dim", 2, "--count", 4, "--seed", 1, "--out", four)
    assert run("solve", "--in", four, "--kind", "polygon", "--r", 3)[0] == 4
    assert run("solve", "--in", four, "--kind", "orthotope", "--k", 3)[0] == 65
    assert run("solve", "--in", four, "--kind", "multiprism", "--factors", "3,3")[0] == 65
    bad.write_text("{")
    assert run("solve", "--in", bad, "--kind", "polygon", "--r", 3)[0] == 64
    assert run("solve", "--in", tmp_path / "missing.json", "--kind", "polygon", "--r", 3)[0] == 64
    pts = [[x * x, 0.0] for x in np.linspace(0, 1, 5)]
    line.write_text(json.dumps({"dimension": 2, "points": pts}))
    assert run("solve", "--in", line, "--kind", "polygon", "--r", 3, "--retries", 1)[0] == 2
    inst = tmp_path / "p.json"
    run("generate", "--dim", 4, "--count", 37, "--seed", 1, "--out", inst)
    assert run("solve", "--in", inst, "--kind", "multiprism", "--factors", "3,3",
               "--max-iter", 2, "--retries", 0)[0] == 3


def test_usage_errors_exit_64(run):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--kind", "polygon"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--in", "x", "--kind", "polygon", "--plane", "0"])
    assert exc.value.code == 64


def test_frame_and_plane(tmp_path, run):
    inst, fr, res = tmp_path / "i.json", tmp_path / "fr.json", tmp_path / "r.json"
    run("generate", "--dim", 3, "--count", 7, "--seed", 3, "--out", inst)
    save_frame(fr, PlaneFrame.random(3, 9))
    assert run("solve", "--in", inst, "--kind", "polygon", "--r", 3, "--frame", fr,
               "--out", res)[0] == 0
    assert run("verify", "--in", inst, "--result", res)[0] == 0
    assert run("solve", "--in", inst, "--kind", "polygon", "--r", 3, "--plane", "0,2",
               "--out", res)[0] == 0
    data = json.loads(res.read_text())
    assert data["kind"]["name"] == "polygon-in-plane"
    assert data["kind"]["frame"]["u"] == [1.0, 0.0, 0.0]


def test_determinism(tmp_path, run, monkeypatch):
    inst = tmp_path / "i.json"
    run("generate", "--dim", 3, "--count", 18, "--seed", 5, "--out", inst)
    outs = []
    for name in ("a.json", "b.json"):
        run("solve", "--in", inst, "--kind", "prism", "--factors", 3, "--seed", 2,
            "--out", tmp_path / name)
        data = json.loads((tmp_path / name).read_text())
        data.pop("created")
        outs.append(json.dumps(data))
    assert outs[0] == outs[1]
    code, out1, _ = run("solve", "--in", inst, "--kind", "prism", "--factors", 3, "--no-timestamp")
    monkeypatch.setenv("POLYTVERB_SEED", "0")
    code, out2, _ = run("solve", "--in", inst, "--kind", "prism", "--factors", 3, "--no-timestamp")
    assert out1 == out2


def test_seed_env(tmp_path, run, monkeypatch):
    monkeypatch.setenv("POLYTVERB_SEED", "17")
    run("generate", "--dim", 2, "--count", 5, "--out", tmp_path / "a.json")
    run("generate", "--dim", 2, "--count", 5, "--seed", 17, "--out", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()


def test_colored_generate(tmp_path, run):
    inst, res = tmp_path / "c.json", tmp_path / "r.json"
    assert run("generate", "--dim", 2, "--count", 9, "--color-classes", 3, "--seed", 4,
               "--out", inst)[0] == 0
    assert json.loads(inst.read_text())["colors"] == [0, 0, 0, 1, 1, 1, 2, 2, 2]
    assert run("solve", "--in", inst, "--kind", "colored-polygon", "--r", 3, "--out", res)[0] == 0
    code, out, _ = run("verify", "--in", inst, "--result", res)
    assert code == 0 and "rainbow" in out
    assert run("generate", "--dim", 2, "--count", 8, "--color-classes", 3)[0] == 65


def test_tightness(run):
    code, out, _ = run("tightness", "--kind", "polygon", "--r", 3, "--trials", 10, "--seed", 1)
    assert code == 0
    fields = dict(tok.split("=") for tok in out.split())
    assert float(fields["rate"]) == 1.0 and fields["points"] == "4"
    code, out, _ = run("tightness", "--kind", "polygon", "--r", 3, "--trials", 6,
                       "--deficit", 0, "--jobs", 2)
    assert "rate=0.0" in out


def test_render(tmp_path, run):
    inst, res, fig = tmp_path / "i.json", tmp_path / "r.json", tmp_path / "f.svg"
    run("generate", "--dim", 3, "--count", 18, "--seed", 1, "--out", inst)
    run("solve", "--in", inst, "--kind", "prism", "--factors", 3, "--out", res)
    assert run("render", "--in", inst, "--result", res, "--proj", "0,2", "--out", fig)[0] == 0
    assert fig.read_text().startswith("<?xml")
    assert run("render", "--in", inst, "--result", res, "--proj", "0,5")[0] == 65
