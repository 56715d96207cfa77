import json
import subprocess
import sys

import pytest

from conslaws import parse, parse_context
from conslaws.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_construct_ode(capsys):
    assert run(capsys, "construct-ode", "--factors", "1;t", "--H", "u") == (0, "u_tt", "")


def test_zero_wronskian_exit_code(capsys):
    code, out, err = run(capsys, "construct-ode", "--factors", "0;0", "--H", "u")
    assert code == 2 and "Wronskian" in err and out == ""


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "construct-ode", "--factors", "1;W(u)", "--H", "u")
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "construct-ode", "--factors", "1;;t", "--H", "u")
    assert code == 2
    code, _, _ = run(capsys, "euler", "--f", "u", "--context", "vars t; unknowns t")
    assert code == 2


def test_missing_input(capsys):
    code, _, err = run(capsys, "flux", "--rho", "u")
    assert code == 2 and "G" in err


def test_verify_current(capsys):
    args = ["verify-current", "--G", "-(u*u_x + u_xxx)", "--rho", "u^2/2"]
    assert run(capsys, *args, "--sigma", "u^3/3 + u*u_xx - u_x^2/2") == (0, "true", "")
    assert run(capsys, *args, "--sigma", "0") == (1, "false", "")


def test_flux_and_evolution(capsys):
    assert run(capsys, "flux", "--G", "-(u*u_x + u_xxx)", "--rho", "u")[1] == "u^2/2 + u_xx"
    code, out, _ = run(capsys, "construct-evolution", "--densities", "u;u^2/2",
                       "--H", "-u_x/2 - u^3/(6*u_x)")
    assert (code, out) == (0, "-u*u_x - u_xxx")


def test_degenerate_evolution_note(capsys):
    code, out, _ = run(capsys, "construct-evolution", "--densities", "u", "--H", "u")
    assert code == 0 and "note:" in out


def test_first_integrals(capsys):
    assert run(capsys, "first-integrals", "--factors", "1;t", "--H", "u")[1].splitlines() == ["u_t", "-u + t*u_t"]


def test_verify_factor(capsys):
    code, out, _ = run(capsys, "verify-factor", "--L", "u''", "--factors", "1;t;u")
    assert code == 1
    assert out.splitlines() == ["1: true", "t: true", "u: false"]


def test_euler_and_totald(capsys):
    assert run(capsys, "euler", "--f", "u*u_xx")[1] == "2*u_xx"
    assert run(capsys, "totald", "--f", "u^2", "--var", "x")[1] == "2*u*u_x"
    assert run(capsys, "totald", "--f", "u^2", "--var", "z")[0] == 2


def test_families(capsys):
    code, out, _ = run(capsys, "construct-family", "--family", "omega", "--G", "0;y;-psi",
                       "--omega", "psi_xx + psi_yy")
    lines = out.splitlines()
    assert code == 0
    assert lines[1] == "family_omega: true"
    assert "-(vorticity" in lines[2]
    code, out, _ = run(capsys, "verify-family", "--L", "psi_t", "--family", "h", "--args", "t")
    assert (code, out) == (1, "false")
    code, out, _ = run(capsys, "verify-family", "--L", "psi_xx + psi_xy", "--family", "affine", "--base", "t")
    assert (code, out) == (0, "true")
    code, out, _ = run(capsys, "construct-family", "--family", "affine", "--K", "psi;0;psi_t", "--base", "t")
    assert code == 0 and out.splitlines()[0] == "psi_xx + psi_tyy"
    assert run(capsys, "construct-family", "--family", "affine", "--K", "psi", "--base", "t")[0] == 2
    assert run(capsys, "verify-family", "--L", "psi", "--family", "zeta")[0] == 2


def test_vorticity_closure_job(tmp_path, capsys):
    job = tmp_path / "closure.job"
    job.write_text("# averaged closure\nP1 = psi_x\nP2 = 0\nP3 = psi\nS1 = 0\nS2 = psi_y\nS3 = 1\n")
    code, out, _ = run(capsys, "vorticity-closure", "--job", str(job))
    assert code == 0
    assert out.splitlines()[-4:] == ["circulation: true", "momentum_x: true", "momentum_y: true", "energy: true"]


def test_job_file_with_context(tmp_path, capsys):
    job = tmp_path / "ode.job"
    job.write_text("vars s; unknowns v\nfactors = 1;s\nH = v\n")
    assert run(capsys, "construct-ode", "--job", str(job)) == (0, "v_ss", "")
    # flags override file bindings
    assert run(capsys, "construct-ode", "--job", str(job), "--H", "s*v")[1] == "2*v_s + s*v_ss"
    bad = tmp_path / "bad.job"
    bad.write_text("vars t; unknowns u\n1x = u\n")
    assert run(capsys, "construct-ode", "--job", str(bad))[0] == 2
    assert run(capsys, "construct-ode", "--job", str(tmp_path / "missing.job"))[0] == 2


def test_structured_output_round_trips(capsys):
    args = ["construct-ode", "--factors", "1;u'", "--H", "u'^2/2", "--alt", "--format", "structured"]
    code, out, _ = run(capsys, *args)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"command", "inputs", "result", "verdicts", "sign_note", "order_report"}
    ctx = parse_context(doc["inputs"][0].split("=", 1)[1])
    assert parse(doc["result"], ctx) == parse("u_tt", ctx)
    assert dict(doc["order_report"])["q"] == 1
    assert all(v is True for _, v in doc["verdicts"])
    # determinism
    assert run(capsys, *args)[1] == out


def test_structured_verdicts(capsys):
    code, out, _ = run(capsys, "verify-current", "--G", "-(u*u_x + u_xxx)", "--rho", "u", "--sigma", "0",
                       "--format", "structured")
    doc = json.loads(out)
    assert code == 1 and doc["verdicts"] == [["conserved", False]] and doc["result"] == ""


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "conslaws.cli", "construct-ode", "--factors", "1;t", "--H", "u"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "u_tt"


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2
