"""End-to-end checks of the loem binary: exit codes, determinism, pipes."""

import os
import subprocess

import pytest

CLI = os.environ.get("LOEM_CLI", "build/tools/loem")

K5 = "points 5\nlabels a b c d e\n" + "\n".join(
    " ".join("0" if i == j else "1" for j in range(5)) for i in range(5)
) + "\n"

BAD_TRIANGLE = "points 3\nlabels p q r\n0 1 3\n1 0 1\n3 1 0\n"


def run(*args, stdin=None):
    return subprocess.run(
        [CLI, *args], input=stdin, capture_output=True, text=True, timeout=300
    )


@pytest.fixture
def k5_path(tmp_path):
    path = tmp_path / "k5.txt"
    path.write_text(K5)
    return str(path)


def test_validate_exit_codes(tmp_path, k5_path):
    assert run("validate", k5_path).returncode == 0
    bad = tmp_path / "bad.txt"
    bad.write_text(BAD_TRIANGLE)
    proc = run("validate", str(bad))
    assert proc.returncode == 2
    assert "violation triangle" in proc.stdout
    assert run("validate", str(tmp_path / "missing.txt")).returncode == 1
    assert run().returncode == 1


def test_embed_dichotomy(k5_path):
    low = run("embed", k5_path, "--dim", "3")
    assert low.returncode == 3
    assert "verdict Obstructed" in low.stdout
    assert "dim-lower-bound 4" in low.stdout
    high = run("embed", k5_path, "--dim", "4")
    assert high.returncode == 0
    assert "verdict Embedded" in high.stdout


def test_reports_are_byte_deterministic(k5_path):
    args = ("embed", k5_path, "--dim", "4", "--seed", "13")
    first, second = run(*args), run(*args)
    assert first.stdout == second.stdout
    sample = ("manifold", "sample", "--model", "sphere", "--n", "10", "--seed", "7")
    assert run(*sample).stdout == run(*sample).stdout


def test_wall_time_stays_on_stderr(k5_path):
    proc = run("obstruct", k5_path)
    assert "wall-time-ms" not in proc.stdout
    assert "wall-time-ms" in proc.stderr


def test_sample_pipes_into_validate_and_embed():
    sample = run("manifold", "sample", "--model", "circle", "--n", "8", "--seed", "3")
    assert sample.returncode == 0
    assert run("validate", "-", stdin=sample.stdout).returncode == 0
    embed = run("embed", "-", "--dim", "2", stdin=sample.stdout)
    assert embed.returncode == 0
    assert "verdict Embedded" in embed.stdout


def test_net_limit_chain():
    proc = run(
        "manifold", "net-limit", "--model", "circle",
        "--chain", "4,8,16", "--dim", "2",
    )
    assert proc.returncode == 0
    assert "failed-stage none" in proc.stdout
    assert "final-weak-le true" in proc.stdout
    assert proc.stdout.count("verdict Embedded") == 3


def test_unsupported_model_combination(tmp_path):
    obj = tmp_path / "tri.obj"
    obj.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")
    proc = run("manifold", "search-simplex", "--model", "mesh",
               "--mesh", str(obj), "--k", "3")
    assert proc.returncode == 1
    assert "error:" in proc.stderr
