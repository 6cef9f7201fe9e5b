import json
import os
import subprocess
import sys
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"
SRC = Path(__file__).parent.parent / "src"


def run_cli(*args, cwd=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "corpoly", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        env=env,
    )


def test_membership_yes():
    result = run_cli("membership", "--set", "conx", "--matrix", str(FIXTURES / "ones2.mat"))
    assert result.returncode == 0
    assert "yes" in result.stdout


def test_membership_no():
    result = run_cli("membership", "--set", "cor", "--matrix", str(FIXTURES / "id2.mat"))
    assert result.returncode == 1
    assert "no (lp-infeasible)" in result.stdout


def test_membership_screen_failure_is_a_no():
    result = run_cli("membership", "--set", "conx", "--matrix", str(FIXTURES / "notdnn.mat"))
    assert result.returncode == 1
    assert "failed-screen" in result.stdout


def test_membership_missing_rho_is_usage_error():
    result = run_cli("membership", "--set", "rho-cor", "--matrix", str(FIXTURES / "ones2.mat"))
    assert result.returncode == 2
    assert "--rho" in result.stderr


def test_membership_certificate_document(tmp_path):
    out = tmp_path / "cert.json"
    result = run_cli(
        "membership", "--set", "conx",
        "--matrix", str(FIXTURES / "ones2.mat"),
        "--certificate", str(out),
    )
    assert result.returncode == 0
    document = json.loads(out.read_text())
    assert document["answer"] == "yes"
    assert document["problem"]["family"] == "conx"
    assert document["terms"] == [{"k": 3, "bits": [1, 1], "weight": "1"}]
    verify = run_cli("verify", "--matrix", str(FIXTURES / "ones2.mat"),
                     "--certificate", str(out))
    assert verify.returncode == 0


def test_scaled_membership_certificate_verifies(tmp_path):
    out = tmp_path / "scaled.json"
    result = run_cli(
        "membership", "--set", "rho-cor", "--rho", "2",
        "--matrix", str(FIXTURES / "ones2.mat"),
        "--certificate", str(out),
    )
    assert result.returncode == 0
    document = json.loads(out.read_text())
    assert document["problem"]["rho"] == "2"
    verify = run_cli("verify", "--matrix", str(FIXTURES / "ones2.mat"),
                     "--certificate", str(out))
    assert verify.returncode == 0


def test_verify_rejects_tampered_certificate(tmp_path):
    out = tmp_path / "cert.json"
    result = run_cli("membership", "--set", "conx",
                     "--matrix", str(FIXTURES / "ones2.mat"),
                     "--certificate", str(out))
    assert result.returncode == 0
    document = json.loads(out.read_text())
    document["terms"][0]["weight"] = "2"
    out.write_text(json.dumps(document))
    verify = run_cli("verify", "--matrix", str(FIXTURES / "ones2.mat"),
                     "--certificate", str(out))
    assert verify.returncode == 1


def test_rank_prints_minimum():
    result = run_cli("rank", "--set", "conx", "--matrix", str(FIXTURES / "ones4.mat"))
    assert result.returncode == 0
    assert "rank = 1" in result.stdout


def test_rank_not_member_exit_code():
    result = run_cli("rank", "--set", "conx", "--matrix", str(FIXTURES / "notdnn.mat"))
    assert result.returncode == 3


def test_relaxed_rank_threshold():
    result = run_cli("relaxed-rank", "--matrix", str(FIXTURES / "ones2.mat"),
                     "--threshold", "1")
    assert result.returncode == 0
    result = run_cli("relaxed-rank", "--matrix", str(FIXTURES / "ones2.mat"),
                     "--threshold", "1/2")
    assert result.returncode == 1


def test_check_reports_psd_failure():
    result = run_cli("check", "--matrix", str(FIXTURES / "notdnn.mat"))
    assert result.returncode == 0
    assert "psd: no" in result.stdout
    assert "first violation: psd" in result.stdout


def test_generators_listing():
    result = run_cli("generators", "--n", "2")
    assert result.returncode == 0
    assert "n=2: 4 generators" in result.stdout
    assert "k=3 x=(1,1)" in result.stdout


def test_poly_forest():
    result = run_cli("poly", "--method", "forest", "--matrix", str(FIXTURES / "tree.mat"))
    assert result.returncode == 0
    assert "edge (0,1): 1" in result.stdout
    assert "loop (0): 1" in result.stdout
    assert "loop (1): 0" in result.stdout


def test_poly_clique_with_bags_file():
    result = run_cli(
        "poly", "--method", "clique", "--mode", "relaxed-rank",
        "--matrix", str(FIXTURES / "path3.mat"),
        "--cliques", str(FIXTURES / "path3.cliques"),
    )
    assert result.returncode == 0
    assert "relaxed rank (clique system) = 4" in result.stdout


def test_reduce_x3c(tmp_path):
    out = tmp_path / "tiny.mat"
    result = run_cli("reduce", "--from", "x3c", "--in", str(FIXTURES / "tiny.x3c"),
                     "--out", str(out))
    assert result.returncode == 0
    assert out.read_text() == "4\n1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1\n"
    assert (tmp_path / "tiny.mat.threshold").read_text() == "threshold = 1\n"


def test_reduce_fcc(tmp_path):
    out = tmp_path / "k1.mat"
    result = run_cli("reduce", "--from", "fcc", "--in", str(FIXTURES / "k1.fcc"),
                     "--out", str(out))
    assert result.returncode == 0
    assert out.read_text() == "2\n1/2 1/4\n1/4 1/4\n"
    assert (tmp_path / "k1.mat.threshold").read_text() == "threshold = 7/4\n"


def test_reduce_cut_round_trip_is_byte_identical(tmp_path):
    middle = tmp_path / "y.mat"
    back = tmp_path / "z.mat"
    first = run_cli("reduce", "--from", "cor-to-cut", "--in", str(FIXTURES / "z2.mat"),
                    "--out", str(middle))
    assert first.returncode == 0
    second = run_cli("reduce", "--from", "cut-to-cor", "--in", str(middle),
                     "--out", str(back))
    assert second.returncode == 0
    assert back.read_bytes() == (FIXTURES / "z2.mat").read_bytes()


def test_parse_error_reports_location(tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text("2\n1 2\n3 4.5\n")
    result = run_cli("check", "--matrix", str(bad))
    assert result.returncode == 2
    assert "line 3" in result.stderr


def test_missing_file_is_input_error():
    result = run_cli("check", "--matrix", "/nonexistent/zz.mat")
    assert result.returncode == 2


def test_dimension_cap_is_input_error(tmp_path):
    big = tmp_path / "big.mat"
    n = 5
    rows = ["1" + " 0" * (n - 1)]
    for i in range(1, n):
        rows.append(" ".join("1" if j == i else "0" for j in range(n)))
    big.write_text(f"{n}\n" + "\n".join(rows) + "\n")
    result = run_cli("membership", "--set", "conx", "--matrix", str(big), "--max-n", "4")
    assert result.returncode == 2
    assert "cap" in result.stderr


def test_documents_are_deterministic(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    for out in (first, second):
        result = run_cli(
            "membership", "--set", "cut",
            "--matrix", str(FIXTURES / "id2.mat"),
            "--certificate", str(out),
        )
        assert result.returncode == 0
    assert first.read_bytes() == second.read_bytes()
