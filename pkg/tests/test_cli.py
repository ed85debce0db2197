import json
import subprocess
import sys

import pytest

from twovalued.cli import main


@pytest.fixture
def files(tmp_path):
    for name, out in (("dia", "dia.scf"), ("anti", "anti.scf"), ("dia-spec", "dia.psi")):
        assert main(["fixture", name, "-o", str(tmp_path / out)]) == 0
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("command", ["check-csp", "check-compat", "check-bbm", "roundtrip"])
def test_dia_passes_every_check(files, capsys, command):
    code, out, _ = run(capsys, command, str(files / "dia.scf"))
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_anti_rule_fails_with_witness(files, capsys):
    code, out, _ = run(capsys, "check-csp", str(files / "anti.scf"), "--machine")
    assert code == 1
    report = json.loads(out)
    assert report["counts"]["failures"] == 1
    assert set(report["witnesses"]) == {"P", "Q", "D"}
    assert report["witnesses"]["D"] == "{v0}"


@pytest.mark.parametrize("command", ["check-compat", "check-bbm", "roundtrip", "decompose"])
def test_anti_rule_fails_other_checks(files, capsys, command):
    code, out, _ = run(capsys, command, str(files / "anti.scf"))
    assert code == 1
    assert "FAIL" in out


def test_machine_output_is_byte_stable(files, capsys):
    outs = [run(capsys, "check-csp", str(files / "anti.scf"), "--machine")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert "elapsed" not in outs[0]
    _, timed, _ = run(capsys, "check-csp", str(files / "anti.scf"), "--machine", "--timing")
    assert "elapsed" in json.loads(timed)


def test_machine_field_order(files, capsys):
    _, out, _ = run(capsys, "check-csp", str(files / "dia.scf"), "--machine")
    assert list(json.loads(out)) == ["command", "instance", "counts", "checks", "witnesses"]


def test_decompose_then_tabulate_reproduces_input(files, capsys):
    spec = files / "out.psi"
    code, _, _ = run(capsys, "decompose", str(files / "dia.scf"), "-o", str(spec))
    assert code == 0
    table = files / "back.scf"
    assert run(capsys, "psi-to-table", str(spec), "-o", str(table))[0] == 0
    assert table.read_text() == (files / "dia.scf").read_text()


def test_decompose_to_stdout(files, capsys):
    code, out, _ = run(capsys, "decompose", str(files / "dia.scf"))
    assert code == 0
    assert out.startswith("universe: a b c\n")
    assert "default: a;" in out


def test_decompose_with_chosen_pi(files, capsys):
    pi = files / "pi.txt"
    pi.write_text("v0: c>a~b\nv1: a~b>c\n")
    code, out, _ = run(capsys, "roundtrip", str(files / "dia.scf"), "--pi", str(pi))
    assert code == 0
    assert "default: b" in out


def test_bad_pi_is_input_error(files, capsys):
    pi = files / "pi.txt"
    pi.write_text("v0: a>b>c\nv1: a~b>c\n")
    code, _, err = run(capsys, "roundtrip", str(files / "dia.scf"), "--pi", str(pi))
    assert code == 2 and "error" in err


def test_dia_spec_table_matches_dia(files, capsys):
    code, out, _ = run(capsys, "psi-to-table", str(files / "dia.psi"))
    assert code == 0
    assert out == (files / "dia.scf").read_text()


@pytest.mark.parametrize(
    "profile, value",
    [("(a~b>c, a>b>c)", "a"), ("(c>a~b, c>a~b)", "b"), ("(c>a~b, a>b>c)", "b")],
)
def test_eval_psi_inline(files, capsys, profile, value):
    code, out, _ = run(capsys, "eval-psi", str(files / "dia.psi"), profile)
    assert code == 0 and out.strip() == value


def test_eval_psi_profile_file(files, capsys):
    p = files / "p.txt"
    p.write_text("v0: a~b>c\nv1: b>a>c\n")
    assert run(capsys, "eval-psi", str(files / "dia.psi"), str(p))[1].strip() == "b"


def test_parse_error_reports_line_and_column(files, capsys):
    path = files / "dia.scf"
    lines = path.read_text().splitlines()
    lines[4] = lines[4].replace("a~b>c)", "a~x>c)")
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "check-csp", str(path))
    assert code == 2
    assert "line 5, column 16" in err


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "check-csp", str(tmp_path / "nope.scf"))
    assert code == 2 and "cannot read" in err


def test_pair_must_be_given_for_wide_range(capsys, tmp_path):
    from twovalued.profiles import get_domain
    from twovalued.scf import dictatorship, format_scf

    path = tmp_path / "dict.scf"
    path.write_text(format_scf(dictatorship(get_domain(3, 1), 0)))
    assert run(capsys, "check-compat", str(path))[0] == 2
    assert run(capsys, "check-csp", str(path))[0] == 0


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "orders", "--alternatives", "3", "--machine")
    assert code == 0 and json.loads(out)["counts"]["orders"] == 13
    _, out, _ = run(capsys, "enumerate", "committees", "--voters", "3", "--machine")
    assert json.loads(out)["counts"]["committees"] == 20
    _, out, _ = run(capsys, "enumerate", "profiles", "--voters", "2", "--alternatives", "3", "--strict", "--machine")
    assert json.loads(out)["counts"]["profiles"] == 36
    _, out, _ = run(capsys, "enumerate", "csp", "--voters", "2", "--alternatives", "2", "--machine")
    data = json.loads(out)
    assert data["counts"]["tables scanned"] == 510 and data["counts"]["CSP found"] == 18


def test_enumerate_csp_resource_bound(capsys):
    code, _, err = run(capsys, "enumerate", "csp", "--voters", "2", "--alternatives", "3")
    assert code == 3 and "bound" in err


def test_verify_theorems_small(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--voters", "1", "--alternatives", "2", "--machine")
    assert code == 0
    report = json.loads(out)
    assert report["counts"]["CSP found"] == 2
    assert report["counts"]["failures"] == 0


def test_verify_theorems_two_by_two(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--voters", "2", "--alternatives", "2", "--seed", "0", "--machine")
    assert code == 0
    report = json.loads(out)
    assert report["instance"]["mode"] == "exhaustive"
    assert report["counts"]["tables scanned"] == 510
    assert report["counts"]["CSP found"] == 18


def test_verify_theorems_is_deterministic(capsys):
    argv = ("verify-theorems", "--voters", "2", "--alternatives", "3", "--seed", "4", "--samples", "30", "--psi-specs", "20", "--machine")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[0] == 0
    assert json.loads(first[1])["instance"]["mode"] == "sampled"


def test_verify_theorems_bound(capsys):
    assert run(capsys, "verify-theorems", "--voters", "4", "--alternatives", "2")[0] == 3


def test_console_script_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "twovalued.cli", "check-csp", str(files / "dia.scf")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "coalitionally strategy-proof" in proc.stdout
