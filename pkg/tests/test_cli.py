import json
import subprocess
import sys

import numpy as np
import pytest

from sympsig.cli import main
from sympsig.io import format_matrix, format_monodromy
from sympsig.sampling import random_k_member, random_theta_monodromy, trivial_monodromy
from sympsig.symplectic import SymplecticIntegerMatrix, make_J, make_UB


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_member_examples(capsys, write):
    ident = write("i.txt", format_matrix(SymplecticIntegerMatrix.identity(2)))
    J = write("j.txt", format_matrix(make_J(2)))
    U2 = write("u.txt", format_matrix(make_UB(2 * np.eye(2, dtype=int))))
    assert run(capsys, "member", ident, "--group", "k")[:2] == (0, "yes\n")
    # A B^t = C D^t = 0 for J, so both diagonals are even
    assert run(capsys, "member", J, "--group", "theta")[:2] == (0, "yes\n")
    assert run(capsys, "member", U2, "--group", "gamma", "--n", "2")[:2] == (0, "yes\n")
    assert run(capsys, "member", U2, "--group", "gamma", "--n", "4")[:2] == (1, "no\n")
    assert run(capsys, "member", U2, "--group", "igusa", "--n", "2")[:2] == (1, "no\n")
    assert run(capsys, "member", J, "--group", "remark3")[:2] == (1, "no\n")


def test_member_usage_errors(capsys, write):
    ident = write("i.txt", format_matrix(SymplecticIntegerMatrix.identity(1)))
    code, _, err = run(capsys, "member", ident, "--group", "gamma")
    assert code == 2 and "--n" in err
    code, _, err = run(capsys, "member", ident, "--group", "gamma", "--n", "0")
    assert code == 2
    mod2 = write("m.txt", "g 1 mod 2\n1 0\n0 1\n")
    assert run(capsys, "member", mod2, "--group", "k")[0] == 2
    bad = write("b.txt", "g 1 mod 0\n1 1\n1 1\n")
    code, _, err = run(capsys, "member", bad, "--group", "k")
    assert code == 2 and "line 2" in err
    assert run(capsys, "member", "/nonexistent/file", "--group", "k")[0] == 2
    code, _, err = run(capsys, "member", write("j.txt", format_matrix(make_J(1))), "--group", "igusa", "--n", "2")
    assert code == 2


def test_member_json(capsys, write):
    ident = write("i.txt", format_matrix(SymplecticIntegerMatrix.identity(1)))
    code, out, _ = run(capsys, "--json", "member", ident, "--group", "gamma", "--n", "3")
    assert code == 0
    assert json.loads(out) == {"group": "gamma", "n": 3, "member": True}


def test_sigma_entries(capsys, write):
    ident = write("i.txt", format_matrix(SymplecticIntegerMatrix.identity(1)))
    assert run(capsys, "sigma", ident)[1] == "1 0 0\n0 0 0\n0 0 0\n1 0 0\n"
    J = write("j.txt", format_matrix(make_J(1)))
    assert run(capsys, "sigma", J)[1] == "1 1 1\n1 1 1\n1 1 1\n-1 -1 1\n"


def test_sigma_of_kernel_member_is_identity(capsys, write, rng):
    X = random_k_member(2, rng)
    path = write("k.txt", format_matrix(X))
    lines = run(capsys, "sigma", path)[1].splitlines()
    want = ["1 0 0" if r == c else "0 0 0" for r in range(4) for c in range(4)]
    assert lines == want


def test_sigma_word_and_json(capsys, write):
    J = write("j.txt", format_matrix(make_J(2)))
    code, out, _ = run(capsys, "sigma", J, "--out", "word")
    assert code == 0 and out.strip()
    code, out, _ = run(capsys, "--json", "sigma", J)
    payload = json.loads(out)
    assert payload["dim"] == 4 and len(payload["entries"]) == 16


def test_signature(capsys, write, rng):
    triv = write("t.txt", format_monodromy(trivial_monodromy(2, 2)))
    assert run(capsys, "signature-mod8", triv)[:2] == (0, "0\n")
    theta = write("th.txt", format_monodromy(random_theta_monodromy(2, rng, handles=2)))
    assert run(capsys, "signature-mod8", theta)[:2] == (0, "0\n")
    bad = write("bad.txt", format_monodromy([(make_UB([[1]]), make_J(1))]))
    code, _, err = run(capsys, "signature-mod8", bad)
    assert code == 2 and "not a surface-bundle monodromy" in err


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("g 1 mod 0\n1 0\n0 1\n"))
    assert run(capsys, "member", "-", "--group", "theta")[:2] == (0, "yes\n")


def test_verify_coinv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "coinv", "--g-max", "4")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("seed ")
    assert lines[1:] and all(line.startswith("PASS ") for line in lines[1:])


def test_verify_is_deterministic(capsys):
    args = ["verify", "--suite", "rep", "--g-max", "2", "--seed", "7", "--samples", "20"]
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second
    assert first[0] == 0
    assert "seed 7" in first[1]


def test_verify_json(capsys):
    code, out, _ = run(capsys, "--json", "verify", "--suite", "forms", "--g-max", "2")
    payload = json.loads(out)
    assert code == 0 and payload["ok"]
    assert all(r["status"] == "PASS" for r in payload["results"])


def test_verify_bad_gmax(capsys):
    assert run(capsys, "verify", "--g-max", "0")[0] == 2


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "sympsig", "--version"], capture_output=True, text=True, check=True
    )
    assert out.stdout.startswith("sympsig ")
