"""Command-line interface: output formats, exit codes, remote mode."""

import json
import socket
import subprocess
import sys
import threading
import time

import pytest

from rankin.cli import main
from rankin.eisenstein import VerifyCase


def run_cli(monkeypatch, capsys, *args):
    """Invoke the CLI in-process and capture (exit_code, stdout, stderr)."""
    monkeypatch.setattr(sys, "argv", ["rankin", *args])
    code = 0
    try:
        main()
    except SystemExit as exc:
        code = exc.code or 0
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def server_url():
    import uvicorn

    from rankin.service.app import create_app

    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    config = uvicorn.Config(create_app(), host="127.0.0.1", port=port,
                            log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("service did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def test_qexp_json(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys,
                           "qexp", "eisE", "k=2", "N=4", "p=3", "--prec", "6")
    assert code == 0
    data = json.loads(out)
    assert data["coefficients"] == [0, 0, -4, 0, 4, 0]
    assert data["level"] == 12


def test_qexp_pretty(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "qexp", "form", "11.2.a.a",
                           "--prec", "4", "--format", "pretty")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "spec: form 11.2.a.a"
    assert "a_2 = -2" in lines
    assert len([l for l in lines if l.startswith("a_")]) == 4


def test_qexp_bad_spec_exits_1(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "qexp", "bogus", "k=2")
    assert code == 1
    assert "error:" in err and "expect eisE" in err


def test_unknown_label_exits_2(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "lvalue", "9.9.z.z",
                           "11.2.a.a", "--j", "10")
    assert code == 2
    assert "unknown eigenform label" in err


def test_region_error_exits_2(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "lvalue", "1.12.a.a",
                           "11.2.a.a", "--j", "6")
    assert code == 2
    assert "convergence region" in err


def test_bad_integer_list_exits_1(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "verify", "slice",
                           "--k1", "4..x")
    assert code == 1
    assert "bad integer list" in err


def test_verify_json_lines(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "verify", "euler",
                           "--f1", "11.2.a.a", "--f2", "11.2.a.a",
                           "--lmax", "20", "--chi", "triv")
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    summary = lines[-1]
    assert summary == {"suite": "euler", "total": 7, "passed": 7, "ok": True}
    assert all(l["ok"] for l in lines[:-1])


def test_verify_pretty(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "verify", "slice",
                           "--k1", "8", "--k2", "2", "--tau", "0,1",
                           "--p", "3", "--prec", "40", "--format", "pretty")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "4/4 cases pass"
    assert all(l.startswith("PASS") for l in lines[:-1])


def test_verify_failure_exits_3(monkeypatch, capsys):
    bad = VerifyCase("euler", {"l": 2}, 100, False, 8, "forced mismatch")
    monkeypatch.setattr("rankin.verify.euler_cases",
                        lambda *a, **k: [bad])
    code, out, _ = run_cli(monkeypatch, capsys, "verify", "euler",
                           "--chi", "triv", "--format", "pretty")
    assert code == 3
    assert "FAIL" in out
    assert "0/1 cases pass" in out


def test_lvalue_pretty(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "lvalue", "1.12.a.a",
                           "11.2.a.a", "--j", "10", "--digits", "15",
                           "--nmax", "2000", "--format", "pretty")
    assert code == 0
    assert out.startswith("L(10) = 1.0445")
    assert "certified tail bound:" in out


def test_interp_json_and_pretty(monkeypatch, capsys):
    args = ("interp", "1.12.a.a", "11.2.a.a", "--j", "10", "--p", "5",
            "--digits", "15", "--lvalue", "1.0445638331334",
            "--petersson", "1.0")
    code, out, _ = run_cli(monkeypatch, capsys, *args)
    assert code == 0
    data = json.loads(out)
    assert data["regime"] == "crystalline"
    assert data["total"]["re"].startswith("3.5523526468")
    code, out, _ = run_cli(monkeypatch, capsys, *args, "--format", "pretty")
    assert code == 0
    assert "euler_ratio:" in out and "[exact]" in out
    assert "lvalue:" in out and "[numeric]" in out
    assert "regime: crystalline" in out


def test_interp_route_mismatch_exits_3(monkeypatch, capsys):
    monkeypatch.setattr("rankin.service.handlers.prefactor_routes",
                        lambda *a, **k: (1, 2))
    code, out, _ = run_cli(monkeypatch, capsys, "interp", "1.12.a.a",
                           "11.2.a.a", "--j", "10", "--chi", "quad3",
                           "--p", "3", "--digits", "15", "--lvalue", "1.0",
                           "--petersson", "1.0", "--format", "pretty")
    assert code == 3
    assert "prefactor route equality: FAIL" in out


def test_interp_route_match_reported(monkeypatch, capsys):
    monkeypatch.setattr("rankin.service.handlers.prefactor_routes",
                        lambda *a, **k: (5, 5))
    code, out, _ = run_cli(monkeypatch, capsys, "interp", "1.12.a.a",
                           "11.2.a.a", "--j", "10", "--chi", "quad3",
                           "--p", "3", "--digits", "15", "--lvalue", "1.0",
                           "--petersson", "1.0", "--format", "pretty")
    assert code == 0
    assert "prefactor route equality: PASS" in out


def test_interp_foreign_fields_warn_instead_of_comparing(monkeypatch, capsys):
    # the two stabilisations live in different quadratic fields, so route
    # equality cannot be decided exactly; the CLI reports that and exits 0
    code, out, _ = run_cli(monkeypatch, capsys, "interp", "1.12.a.a",
                           "11.2.a.a", "--j", "10", "--chi", "quad3",
                           "--p", "3", "--digits", "15", "--lvalue", "1.0",
                           "--petersson", "1.0", "--format", "pretty")
    assert code == 0
    assert "prefactor route equality" not in out
    assert "equality not checked exactly" in out


def test_forms_listing_and_record(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "forms", "--format", "pretty")
    assert code == 0
    assert out.splitlines() == ["1.12.a.a", "11.2.a.a"]
    code, out, _ = run_cli(monkeypatch, capsys, "forms", "11.2.a.a")
    assert code == 0
    assert json.loads(out)["record"]["k"] == 2


def test_remote_qexp_matches_local(monkeypatch, capsys, server_url):
    local = run_cli(monkeypatch, capsys, "qexp", "eisE", "k=2", "N=4", "p=3",
                    "--prec", "6")
    remote = run_cli(monkeypatch, capsys, "qexp", "eisE", "k=2", "N=4",
                     "p=3", "--prec", "6", "--server", server_url)
    assert local[0] == remote[0] == 0
    assert json.loads(local[1]) == json.loads(remote[1])


def test_remote_exit_codes_match_local(monkeypatch, capsys, server_url):
    # spec error: HTTP 400 -> exit 1, same as local
    code, _, err = run_cli(monkeypatch, capsys, "qexp", "bogus", "k=2",
                           "--server", server_url)
    assert code == 1
    assert "expect eisE" in err
    # data error: HTTP 422 -> exit 2
    code, _, err = run_cli(monkeypatch, capsys, "lvalue", "9.9.z.z",
                           "11.2.a.a", "--j", "10", "--server", server_url)
    assert code == 2
    assert "unknown eigenform label" in err


def test_unreachable_server_exits_2(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "forms",
                           "--server", "http://127.0.0.1:1")
    assert code == 2
    assert "cannot reach" in err


def test_console_script_installed():
    out = subprocess.run(["rankin", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "qexp" in out.stdout and "verify" in out.stdout
    run = subprocess.run(["rankin", "forms"], capture_output=True, text=True)
    assert run.returncode == 0
    assert json.loads(run.stdout)["labels"] == ["1.12.a.a", "11.2.a.a"]
