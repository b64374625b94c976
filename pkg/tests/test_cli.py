import json
import math
import subprocess
import sys

import numpy as np
import pytest

from symperm import MultisetColumns, ProductState, SymmetricState, ghz, w_state
from symperm.io import load, object_from_json, object_to_json, save


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "symperm.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


@pytest.fixture
def files(tmp_path):
    save(np.eye(3), tmp_path / "id3.json")
    save(np.ones((4, 4)), tmp_path / "ones4.json")
    v = np.full(4, 0.5)
    w = np.array([0.5, -0.5, 0.5, -0.5])
    save(MultisetColumns(4, ((v, 2), (w, 2))), tmp_path / "ms.json")
    save(ghz(3), tmp_path / "ghz.json")
    save(w_state(3), tmp_path / "w.json")
    save(ProductState(np.array([[1, 0], [1, 0], [0, 1]], dtype=complex)), tmp_path / "prod.json")
    return tmp_path


# ---------------------------------------------------------------- round trips


def test_roundtrip_matrix():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    back = object_from_json(object_to_json(m))
    assert np.array_equal(back, m)


def test_roundtrip_multiset():
    v = np.array([1 + 2j, 3 - 1j])
    ms = MultisetColumns(2, ((v, 2),))
    back = object_from_json(object_to_json(ms))
    assert back.dimension == 2
    assert np.array_equal(back.columns[0][0], v)
    assert back.columns[0][1] == 2


def test_roundtrip_symmetric_state():
    s = SymmetricState(3, 2, {(2, 1): 0.6, (1, 2): 0.8j})
    back = object_from_json(object_to_json(s))
    assert back.n == 3 and back.d == 2
    for k, c in s.terms.items():
        assert back.terms[k] == c


def test_roundtrip_product_state():
    rng = np.random.default_rng(5)
    rows = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    p = ProductState(rows)
    back = object_from_json(object_to_json(p))
    assert np.array_equal(back.rows, p.rows)


def test_save_load_file(tmp_path):
    s = ghz(4)
    save(s, tmp_path / "s.json")
    back = load(tmp_path / "s.json")
    assert back.terms == s.terms


# ----------------------------------------------------------------- commands


def test_perm_identity(files):
    r = run_cli("perm", str(files / "id3.json"), "--algorithm", "naive")
    assert r.returncode == 0
    assert r.stdout.strip() == "1 + 0i"


def test_perm_all_ones(files):
    r = run_cli("perm", str(files / "ones4.json"), "--algorithm", "ryser")
    assert r.returncode == 0
    assert r.stdout.strip() == "24 + 0i"


def test_perm_multiset_matches_expanded_ryser(files):
    r1 = run_cli("perm", str(files / "ms.json"), "--algorithm", "multiset")
    r2 = run_cli("perm", str(files / "ms.json"), "--algorithm", "ryser")
    assert r1.returncode == 0 and r2.returncode == 0
    assert r1.stdout == r2.stdout


def test_perm_guard_exit_code(tmp_path):
    save(np.eye(11), tmp_path / "big.json")
    r = run_cli("perm", str(tmp_path / "big.json"), "--algorithm", "naive")
    assert r.returncode == 1
    r = run_cli(
        "perm", str(tmp_path / "big.json"), "--algorithm", "naive", "--guard-override", "11"
    )
    assert r.returncode == 0


def test_perm_missing_file(tmp_path):
    r = run_cli("perm", str(tmp_path / "nope.json"))
    assert r.returncode == 1


def test_perm_malformed_file(tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    r = run_cli("perm", str(tmp_path / "bad.json"))
    assert r.returncode == 1


def test_lambda_dicke(files):
    r = run_cli("lambda", "dicke", "--n", "3", "--k", "2,1")
    assert r.returncode == 0
    assert "lambda_max = 0.666666666667" in r.stdout


def test_lambda_dicke_three_level():
    r = run_cli("lambda", "dicke", "--n", "3", "--k", "1,1,1")
    assert "lambda_max = 0.471404520791" in r.stdout


def test_lambda_qubit():
    r = run_cli("lambda", "qubit", "--n", "4", "--k", "2")
    assert "lambda_max = 0.612372435696" in r.stdout


def test_lambda_bad_composition():
    r = run_cli("lambda", "dicke", "--n", "3", "--k", "9,9")
    assert r.returncode == 1


def test_optimize_ghz_symmetric(files):
    r = run_cli(
        "optimize", str(files / "ghz.json"), "--ansatz", "symmetric", "--restarts", "5"
    )
    assert r.returncode == 0
    lam = float(r.stdout.splitlines()[0].split("=")[1])
    assert lam == pytest.approx(1 / math.sqrt(2), abs=1e-8)


def test_optimize_w_general(files):
    r = run_cli("optimize", str(files / "w.json"), "--ansatz", "general", "--restarts", "5")
    assert r.returncode == 0
    lam = float(r.stdout.splitlines()[0].split("=")[1])
    assert lam == pytest.approx(2 / 3, abs=1e-6)


def test_optimize_product_state(files):
    r = run_cli("optimize", str(files / "prod.json"), "--ansatz", "general", "--restarts", "3")
    assert r.returncode == 0
    lam = float(r.stdout.splitlines()[0].split("=")[1])
    assert lam == pytest.approx(1.0, abs=1e-10)


def test_optimize_nonconvergence_exit_2(files):
    r = run_cli(
        "optimize",
        str(files / "ghz.json"),
        "--ansatz",
        "symmetric",
        "--restarts",
        "1",
        "--max-iter",
        "2",
        "--tol",
        "1e-15",
    )
    assert r.returncode == 2
    assert "lambda_max" in r.stdout  # values still printed


def test_optimize_report_file(files):
    out = files / "report.json"
    r = run_cli(
        "optimize",
        str(files / "ghz.json"),
        "--ansatz",
        "symmetric",
        "--restarts",
        "3",
        "--output",
        str(out),
    )
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["lambda_max"] == pytest.approx(1 / math.sqrt(2), abs=1e-8)
    manifest = json.loads((files / "report.json.manifest.json").read_text())
    assert manifest["command"] == "optimize"
    assert "output_checksum" in manifest


def test_verify_maclaurin(tmp_path):
    r = run_cli("verify", "maclaurin", "--trials", "300", "--seed", "7")
    assert r.returncode == 0
    assert "violations = 0" in r.stdout


def test_verify_cll_with_report(tmp_path):
    out = tmp_path / "viol.jsonl"
    r = run_cli(
        "verify", "cll", "--n", "5", "--trials", "200", "--output", str(out), cwd=tmp_path
    )
    assert r.returncode == 0
    assert out.exists()
    assert (tmp_path / "viol.png").exists()
    assert out.read_text() == ""  # no violations recorded


def test_verify_probe_exit_zero(tmp_path):
    out = tmp_path / "probe.jsonl"
    r = run_cli(
        "verify",
        "probe",
        "--n",
        "3",
        "--trials",
        "50",
        "--restarts",
        "4",
        "--output",
        str(out),
        cwd=tmp_path,
    )
    assert r.returncode == 0
    assert "violations =" in r.stdout
    assert "violations_optimized = 0" in r.stdout
    for line in out.read_text().splitlines():
        rec = json.loads(line)
        assert rec["lhs"] > rec["rhs"] + 1e-12


def test_sweep_wwbar(tmp_path):
    out = tmp_path / "sweep.csv"
    r = run_cli("sweep-wwbar", "--steps", "11", "--output", str(out), cwd=tmp_path)
    assert r.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "s,tan_theta,theta,lambda_direct,lambda_paper_prefactor,e_sin2"
    assert len(lines) == 12
    first = lines[1].split(",")
    assert float(first[3]) == pytest.approx(2 / 3, abs=1e-9)
    # constant-factor relation between the two overlap conventions
    for line in lines[1:]:
        vals = [float(v) for v in line.split(",")]
        assert vals[4] == pytest.approx(vals[3] / math.sqrt(3), abs=1e-12)
    assert (tmp_path / "sweep.png").exists()
    assert (tmp_path / "sweep.csv.manifest.json").exists()


def test_cli_determinism(files, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    r1 = run_cli("sweep-wwbar", "--steps", "21", "--output", str(out1), cwd=tmp_path)
    r2 = run_cli("sweep-wwbar", "--steps", "21", "--output", str(out2), cwd=tmp_path)
    assert r1.stdout.replace("a.csv", "") == r2.stdout.replace("b.csv", "")
    assert out1.read_bytes() == out2.read_bytes()

    o1 = run_cli("optimize", str(files / "ghz.json"), "--seed", "3", "--restarts", "4")
    o2 = run_cli("optimize", str(files / "ghz.json"), "--seed", "3", "--restarts", "4")
    assert o1.stdout == o2.stdout
