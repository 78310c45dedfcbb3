import json
import subprocess
import sys

import pytest

from freefix.cli import corpus_dir, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "aAbBBab", "--json")
    assert code == 0
    assert json.loads(out)["word"] == "Bab"


def test_fix_inversion(capsys):
    code, out, _ = run(capsys, "fix", "examples/inversion.json")
    assert code == 0 and out.startswith("Fix = 1")


def test_fix_ex1(capsys):
    code, out, err = run(capsys, "fix", "--max-len", "12", "--disp-cap", "64", "--json", "examples/ex1.json")
    data = json.loads(out)
    assert code == 0
    assert data["rank"] == 4 and data["matches_expected"]
    assert data["budget"] == {"max_len": 12, "displacement_cap": 64, "eigenvalue_len": 2}
    assert "[fix]" in err and "[fix]" not in out


def test_verify_cormain_ex1(capsys):
    code, out, _ = run(capsys, "verify", "cormain", "examples/ex1.json", "examples/ex1.cert.json")
    assert code == 0 and out.startswith("cormain certificate: PASS")


def test_verification_failure_exit_code(capsys, tmp_path):
    cert = json.loads((corpus_dir() / "ex1.cert.json").read_text())
    cert["w"][1] = "cd"
    p = tmp_path / "bad.cert.json"
    p.write_text(json.dumps(cert))
    code, out, _ = run(capsys, "verify", "cormain", "examples/ex1.json", str(p))
    assert code == 1 and "FAIL" in out


def test_input_errors(capsys):
    assert run(capsys, "fix", "missing.json")[0] == 2
    assert run(capsys, "apply", "a,ab", "c")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_member_and_intersect(capsys):
    assert run(capsys, "member", "a,Bab", "Baab")[0] == 0
    assert run(capsys, "member", "a,Bab", "b")[0] == 1
    code, out, _ = run(capsys, "intersect", "a,b", "b,c", "--json")
    assert json.loads(out)["intersection"] == ["b"]


def test_ffs_commands(capsys):
    code, out, _ = run(capsys, "ffs", "cx", "a,b;c;d", "--json")
    assert json.loads(out)["cx"] == [2, 1, 1]
    code, out, _ = run(capsys, "ffs", "wedge", "a,b", "b,c", "--json")
    assert json.loads(out)["cx"] == [1]
    assert run(capsys, "ffs", "invariant", "a,b;c,d", "examples/ex1.json", "--rank", "6")[0] == 0
    assert run(capsys, "ffs", "is-free-factor", "a,Bab")[0] == 1
    assert run(capsys, "ffs", "is-free-factor", "ab,Cbc")[0] == 0


def test_construct_and_verify(capsys):
    code, out, _ = run(capsys, "construct", "stable", "a,ab,dc,dcd", "--h", "BabCDcd", "--h-prime", "BabCDcd",
                       "--r", "0")
    assert out.strip() == "a, ab, dc, dcd, BabCDcde"
    code, out, _ = run(capsys, "construct", "good-r", "a", "--h", "a", "--h-prime", "a", "--json")
    assert [row["r"] for row in json.loads(out)["r"] if not row["good"]] == [-1]
    assert run(capsys, "verify", "collins-turner", "a,ab", "--H", "a", "--y", "b", "--h", "a", "--r", "1")[0] == 0
    assert run(capsys, "verify", "collins-turner", "a,ab", "--H", "a", "--y", "b")[0] == 1
    assert run(capsys, "verify", "imagey", "a,ab,c", "--H", "a,b", "--y", "c", "--h", "b",
               "--assume-fixed")[0] == 1
    assert run(capsys, "verify", "mainconnex", "examples/ex1_ab.json", "examples/ex1_ab.case_iii.json")[0] == 0


def test_checks(capsys):
    assert run(capsys, "check", "pure", "aa")[0] == 1
    assert run(capsys, "check", "pure", "ABab,ACac")[0] == 0
    code, out, _ = run(capsys, "check", "inert", "a,Bab", "--trials", "30", "--seed", "4", "--json")
    assert code == 0 and json.loads(out)["seed"] == 4
    assert run(capsys, "check", "coset-bound", "a", "a", "b")[0] == 2


def test_eigengroup_commands(capsys):
    code, out, err = run(capsys, "isogredience", "a,ab", "--max-len", "6", "--json")
    data = json.loads(out)
    assert code == 0 and len(data["classes"]) == 1
    assert "[eigengroups]" in err
    assert run(capsys, "bh-check", "a,ab", "--max-len", "6")[0] == 0


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "freefix.cli", "eigengroups", "BAbaBab,BAbabABab,BAbaaabbc", "--max-len", "8",
            "--eig-len", "1", "--json"]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout


def test_corpus_run(capsys):
    code, out, _ = run(capsys, "corpus", "run")
    assert code == 0
    assert out.strip().endswith("corpus checks passed")
    assert "FAIL" not in out
