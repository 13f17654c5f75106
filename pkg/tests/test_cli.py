import csv
import json
import subprocess
import sys

import pytest

from dicke_atlas.cli import BOUNDARY_HEADER, SWEEP_HEADER, fmt, main, num


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_num_and_fmt():
    assert num(1 / 3) == 0.333333333333
    assert num(float("nan")) is None
    assert num(-0.0) == 0.0
    assert fmt(None) == ""
    assert fmt(0.1 + 0.2) == "0.3"


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", "--lambda", "1", "--kappa", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["phase"] == "X_SP"
    assert doc["ground_energy"] == -1.0625
    assert doc["manifest"]["command"] == "solve"


def test_solve_coexistence(capsys):
    code, out, _ = run(capsys, "solve", "--lambda", "1", "--kappa", "-0.5")
    assert code == 0 and json.loads(out)["phase"] == "COEX_PSP_NP"


def test_solve_oracle(capsys):
    code, out, _ = run(capsys, "solve", "--lambda", "1", "--kappa", "1", "--oracle")
    assert code == 0 and json.loads(out)["ground_energy"] == pytest.approx(-1.0625, abs=1e-10)


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--lambda", "1"])
    assert exc.value.code == 2
    assert run(capsys, "solve", "--lambda", "1", "--kappa", "1", "--omega", "-1")[0] == 2


def test_sweep_csv_and_manifest(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "sweep", "--axis1", "lambda:-1:1:3", "--axis2", "kappa:0:1:2",
                     "--out", str(out))
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert tuple(rows[0]) == SWEEP_HEADER
    assert len(rows) == 1 + 6
    t_col = SWEEP_HEADER.index("t")
    lam_col = SWEEP_HEADER.index("lambda")
    for r in rows[1:]:
        if float(r[lam_col]) == 0.0:
            assert r[t_col] == ""
    side = json.loads((tmp_path / "grid.csv.manifest.json").read_text())
    assert side["command"] == "sweep"


def test_sweep_is_reproducible(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(capsys, "sweep", "--axis1", "lambda:-2:2:9", "--axis2", "t:-1:1:5", "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_t_conflict_leaves_no_file(tmp_path, capsys):
    out = tmp_path / "x.csv"
    code, _, err = run(capsys, "sweep", "--axis1", "lambda:0:1:2", "--axis2", "t:0:1:2",
                       "--t", "0.5", "--out", str(out))
    assert code == 2 and "error" in err
    assert not out.exists()


def test_boundaries(capsys):
    code, out, _ = run(capsys, "boundaries", "--t-range", "-0.5:1:4")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert tuple(rows[0]) == BOUNDARY_HEADER
    found = {(float(r[0]), r[1]): float(r[3]) for r in rows[1:] if r[3]}
    assert found[(1.0, "np_boundary")] == 0.5
    assert found[(-0.5, "np_boundary")] == 2.0
    assert found[(-0.5, "sp_threshold")] == pytest.approx(2 / 3)


def test_symmetry_relations(capsys):
    code, out, _ = run(capsys, "symmetry", "--check", "relations")
    assert code == 0 and json.loads(out)["passed"]


def test_symmetry_all(capsys):
    code, out, _ = run(capsys, "symmetry", "--check", "all", "--samples", "200")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert set(doc["checks"]) == {"relations", "invariance", "table2", "exchange"}


def test_exact(capsys):
    code, out, _ = run(capsys, "exact", "--N", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["results"][0]["e0_per_atom"] == -0.5


def test_exact_dimension_guard(capsys):
    assert run(capsys, "exact", "--lambda", "1", "--kappa", "1", "--N", "400", "--nmax", "400")[0] == 5


def test_exact_bad_list(capsys):
    assert run(capsys, "exact", "--N-list", "4,x")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dicke_atlas", "solve", "--lambda", "0.2",
                           "--kappa", "0.1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["phase"] == "NP"
