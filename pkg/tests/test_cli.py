import subprocess
import sys

import pytest

from iree.cli import main
from iree.report import read_csv


def test_presets(capsys):
    assert main(["presets"]) == 0
    assert "sec6-type1" in capsys.readouterr().out.split()


def test_eval_both_modes(capsys):
    assert main(["eval", "table1-terrestrial", "--grid", "8"]) == 0
    out = capsys.readouterr().out
    assert "numeric" in out and "closed-form" in out and "iree" in out


def test_eval_random_needs_seed(capsys):
    assert main(["eval", "random"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("iree: error:") and err.count("\n") == 1
    assert main(["eval", "random", "--seed", "5", "--grid", "6", "--mode", "numeric"]) == 0


def test_sweep_csv(tmp_path):
    out = tmp_path / "s.csv"
    rc = main(["sweep", "sec6-type1", "--grid", "8", "--kind", "placement-sweep", "--axis", "x",
               "--start", "0", "--stop", "1000", "--steps", "3", "--asset", "ris", "--output", str(out)])
    assert rc == 0
    assert [r["axis"] for r in read_csv(out)] == [0, 500, 1000]


def test_sweep_spec_file(tmp_path, capsys):
    spec = tmp_path / "spec.ini"
    spec.write_text("[sweep]\nkind = se-sweep\nstart = 0\nstop = 50\nsteps = 6\n")
    assert main(["sweep", "table1-terrestrial", "--grid", "8", "--spec", str(spec),
                 "--steps", "3", "--format", "human-summary"]) == 0
    assert capsys.readouterr().out.startswith("3 sweep points, 0 failed")


def test_unknown_asset(capsys):
    rc = main(["sweep", "sec6-type1", "--kind", "placement-sweep", "--start", "0", "--stop", "1",
               "--steps", "2", "--asset", "blimp"])
    assert rc == 1
    assert "blimp" in capsys.readouterr().err


def test_missing_range(capsys):
    assert main(["sweep", "sec6-type1", "--kind", "se-sweep"]) == 1
    assert "--start" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "iree", "eval", "nope"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stderr.strip().startswith("iree: error: no such file or preset")
