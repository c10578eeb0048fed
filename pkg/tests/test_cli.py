import subprocess
import sys

import pytest

from mallbes.cli import main

UMBRELLA = "l |- r.\nr |- p.\nl |- p ==> |- u.\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def lines(out, key):
    return [l[len(key) + 2:] for l in out.splitlines() if l.startswith(key + ":")]


def test_prove_double_negation(capsys, tmp_path):
    f = tmp_path / "nn.nd"
    code, out, _ = run(capsys, "prove", "~~p |- p", "--out", str(f))
    assert code == 0
    assert lines(out, "VERDICT") == ["provable"]
    assert "(Raa " in lines(out, "ND")[0]
    assert lines(out, "DERIVATION-FILE") == [str(f)]
    code, out, _ = run(capsys, "check-nd", str(f), "--normal-form")
    assert code == 0 and lines(out, "VERDICT") == ["valid"]
    code, out, _ = run(capsys, "check-nd", str(f), "--no-raa")
    assert code == 1 and lines(out, "VIOLATION")


@pytest.mark.parametrize("sequent", ["|- p | ~p", "p * q |- q * p", "p + q |- q + p", "0, r |- p & q",
                                     "p & q |- q + r"])
def test_emitted_derivations_recheck(capsys, tmp_path, sequent):
    f = tmp_path / "d.nd"
    assert run(capsys, "prove", sequent, "--out", str(f))[0] == 0
    code, out, _ = run(capsys, "check-nd", str(f))
    assert code == 0, out


def test_base_derive_umbrella(capsys, tmp_path):
    b = tmp_path / "umbrella.base"
    b.write_text(UMBRELLA)
    code, out, _ = run(capsys, "base-derive", str(b), "|- u")
    assert code == 0 and lines(out, "VERDICT") == ["found"]
    assert lines(out, "DERIVATION")[0].startswith("(rule2")
    code, out, _ = run(capsys, "base-derive", str(b), "|- l")
    assert code == 1 and lines(out, "VERDICT") == ["refuted"]


def test_oracle(capsys):
    assert run(capsys, "oracle", "p |- p * p")[0] == 1
    assert run(capsys, "oracle", "p, q |- p * q")[0] == 0
    code, out, _ = run(capsys, "oracle", "p, p, q |- (p * q) * p", "--budget-nodes", "2")
    assert code == 2 and lines(out, "VERDICT") == ["inconclusive"]


def test_prove_exit_codes(capsys):
    assert run(capsys, "prove", "p |- p * p")[0] == 1
    code, out, _ = run(capsys, "prove", "p * q, r |- r * (q * p)", "--budget-depth", "2")
    assert code == 2 and lines(out, "VERDICT") == ["not-found-within-budget"]


def test_support(capsys, tmp_path):
    code, out, _ = run(capsys, "support", "||- bot")
    assert code == 1 and lines(out, "VERDICT") == ["refuted"]
    assert lines(out, "WITNESS") and lines(out, "WITNESS-VERIFIED") == ["true"]
    b = tmp_path / "cex.base"
    b.write_text("?T, p |- bot ==> ?T |- bot.\n")
    code, out, _ = run(capsys, "support", "||- p", "--base", str(b), "--fam-size", "3", "--seed", "4")
    assert code == 0 and lines(out, "VERDICT") == ["holds-relative-to-family"]
    assert "size=3" in lines(out, "FAMILY")[0] and "seed=4" in lines(out, "FAMILY")[0]


def test_translate(capsys, tmp_path):
    code, out, _ = run(capsys, "prove", "~~p |- p")
    atomic = tmp_path / "nn.ad"
    atomic.write_text(lines(out, "ATOMIC")[0])
    code, out, _ = run(capsys, "translate", str(atomic), "~~p |- p")
    assert code == 0 and lines(out, "VERDICT") == ["valid"]
    assert lines(out, "NORMAL-FORM") == ["true"]
    # the same derivation does not conclude a different sequent
    code, out, _ = run(capsys, "translate", str(atomic), "~~q |- q")
    assert code == 1


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "p*q -o r")
    assert code == 0 and lines(out, "FORMULA") == ["p * q -o r"]
    code, out, _ = run(capsys, "parse", "p * ")
    assert code == 1 and "position 4" in lines(out, "ERROR")[0]
    code, out, _ = run(capsys, "parse", "!p")
    assert code == 1 and "exponentials out of scope" in out


def test_lemmas(capsys):
    code, out, _ = run(capsys, "lemmas", "bottom-special", "--trials", "5")
    assert code == 0 and lines(out, "VERDICT") == ["pass"]
    assert run(capsys, "lemmas", "nope")[0] == 64


@pytest.mark.parametrize("argv", [["bogus"], ["prove"], ["prove", "p |- q", "--budget-depth", "x"],
                                  ["check-nd", "/nonexistent.nd"], ["prove", "p |-"],
                                  ["base-derive", "/nonexistent.base", "|- u"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        sys.exit(main(argv))
    assert e.value.code == 64
    assert "ERROR" in capsys.readouterr().err


def test_console_entry_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "mallbes.cli", "support", "p ||- p * top", "--seed", "9"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == b.returncode
    assert a.stdout == b.stdout and a.stdout.startswith("VERDICT:")
