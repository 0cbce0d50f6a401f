import importlib.util
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_stabilization_sweep(capsys):
    assert load("stabilization_sweep").main(["--n-max", "2", "--scales", "1,2"]) == 0
    out = capsys.readouterr().out
    assert "S2" in out and "False" not in out


def test_reproduce_table_small(capsys, tmp_path):
    out_file = tmp_path / "t.json"
    assert load("reproduce_table").main(["--n-max", "2", "--samples", "1", "--out", str(out_file)]) == 0
    assert out_file.exists() and "0 problems" in capsys.readouterr().out
