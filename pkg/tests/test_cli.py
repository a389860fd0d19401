# -*- coding: utf-8 -*-
"""End-to-end tests of the abelian-mops command line through typer's CliRunner."""
import sys
import os
import json

import numpy as np
import pytest
import typer
from typer.testing import CliRunner

# Add parent to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from main import app
from abelian_mops._errors import SingularPointError
from abelian_mops.polyalg import MatPoly
from abelian_mops.report import Report, emit_report
from tools.utils import execute

runner = CliRunner()


def _invoke(*args):
    return runner.invoke(app, ["--log-level", "CRITICAL", *args])


def _checks(doc):
    return {c["name"]: c for c in doc["checks"]}


# ── commands ─────────────────────────────────────────────────────────────────

def test_classical_hermite_json():
    """classical --kind hermite --c 0 prints P_1 = diag(4z - 2, 4z - 6) and passes."""
    result = _invoke("classical", "--kind", "hermite", "--c", "0", "--n", "2", "--emit", "json")
    assert result.exit_code == 0, result.stdout
    doc = json.loads(result.stdout)
    assert all(c["pass"] for c in doc["checks"])
    P1 = MatPoly.from_json(doc["P"][1])
    for z in (0.0, 1.5, -0.5 + 1j):
        assert np.allclose(P1(z), np.diag([4 * z - 2, 4 * z - 6]), atol=1e-10)
    print("[PASS] classical hermite")


def test_torsion_find_dk():
    """torsion find on the DK curve lists the six quarter periods."""
    result = _invoke("torsion", "find", "--alpha", "1.2", "--R", "2", "--emit", "json")
    assert result.exit_code == 0, result.stdout
    doc = json.loads(result.stdout)
    assert len(doc["torsion_points"]) == 6
    assert "torsion_values" in _checks(doc)
    print("[PASS] torsion find")


def test_runs_are_deterministic():
    """Two identical invocations print identical bytes."""
    args = ("biortho", "--weight", "legendre", "--N", "4", "--emit", "json")
    first, second = _invoke(*args), _invoke(*args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    print("[PASS] deterministic output")


def test_csv_output_rows():
    """CSV output starts with check rows and carries data rows."""
    result = _invoke("biortho", "--N", "3", "--emit", "csv")
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0].startswith("check,")
    assert any(line.startswith("data,h,") for line in lines)
    print("[PASS] csv rows")


# ── tolerances and configuration errors ─────────────────────────────────────

def test_tol_override_only_loosens():
    """--tol raises a tolerance; a tighter value leaves the default in place."""
    loose = json.loads(_invoke("classical", "--n", "2", "--emit", "json", "--tol", "norms=1e-3").stdout)
    assert _checks(loose)["norms"]["tolerance"] == 1e-3
    tight = json.loads(_invoke("classical", "--n", "2", "--emit", "json", "--tol", "norms=1e-9").stdout)
    assert _checks(tight)["norms"]["tolerance"] == 1e-8
    print("[PASS] tolerance override")


@pytest.mark.parametrize("tol", ["nonsense=1e-3", "norms", "norms=abc", "norms=1e-20"])
def test_bad_tol_exits_2(tol):
    """Unknown names, malformed values and values under the floor are configuration errors."""
    result = _invoke("classical", "--n", "2", "--emit", "json", "--tol", tol)
    assert result.exit_code == 2
    print("[PASS] bad --tol {}".format(tol))


def test_bad_emit_exits_2():
    """An unknown --emit format is refused before any work."""
    result = _invoke("classical", "--emit", "yaml")
    assert result.exit_code == 2
    print("[PASS] bad --emit")


def test_bad_parameters_exit_2():
    """Invalid family parameters are configuration errors, not numerical failures."""
    assert _invoke("classical", "--kind", "jacobi", "--emit", "json").exit_code == 2
    assert _invoke("torsion", "find", "--R", "2", "--emit", "json").exit_code == 2
    print("[PASS] bad parameters")


# ── config files ─────────────────────────────────────────────────────────────

def test_run_missing_config_exits_2(tmp_path):
    """A missing config file is reported and exits 2."""
    result = _invoke("run", "--config", str(tmp_path / "missing.json"))
    assert result.exit_code == 2
    assert "config file not found" in result.stdout
    print("[PASS] missing config")


def test_run_config_file(tmp_path):
    """A config file selects the command, its parameters and tolerance overrides."""
    path = tmp_path / "biortho.json"
    path.write_text(json.dumps({
        "command": "biortho",
        "params": {"weight": "legendre", "N": 4},
        "emit": "json",
        "tolerances": {"biorthogonality": 1e-6},
    }), encoding="utf-8")
    result = _invoke("run", "--config", str(path))
    assert result.exit_code == 0, result.stdout
    doc = json.loads(result.stdout)
    assert _checks(doc)["biorthogonality"]["tolerance"] == 1e-6
    assert len(doc["h"]) == 4
    print("[PASS] config file run")


@pytest.mark.parametrize("payload", [
    {"command": "nope"},
    {"command": "biortho", "emit": "yaml"},
    {"command": "biortho", "colour": "red"},
    {"command": "biortho", "tolerances": {"biorthogonality": -1.0}},
    {"command": "biortho", "params": {"N": 4, "colour": 1}},
    {"command": "biortho", "params": {"N": "four"}},
    {"command": "pade", "params": {"nodes": {"z": 2}}},
])
def test_run_invalid_config_exits_2(tmp_path, payload):
    """Unknown commands, formats, keys and bad tolerances in a config are rejected."""
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert _invoke("run", "--config", str(path)).exit_code == 2
    print("[PASS] invalid config {}".format(sorted(payload)))


def test_run_pade_config_with_string_nodes(tmp_path):
    """Pade params accept the node list as the same comma string the --nodes option takes."""
    path = tmp_path / "pade.json"
    path.write_text(json.dumps({"command": "pade", "params": {"n": 3, "nodes": "2,3j"}}), encoding="utf-8")
    result = _invoke("run", "--config", str(path))
    assert result.exit_code == 0, result.stdout
    doc = json.loads(result.stdout)
    assert _checks(doc)["pade_nodes"]["pass"]
    assert len(doc["rho_at_nodes"]) == 2
    print("[PASS] pade config")


# ── exit codes of the shared command body ────────────────────────────────────

def _raises(exc):
    def handler(params, tolerances):
        raise exc
    return handler


def test_numerical_singularity_exits_1(capsys):
    """A singular evaluation is a failing check (exit 1), not a configuration error."""
    with pytest.raises(typer.Exit) as info:
        execute("elliptic", _raises(SingularPointError("szego kernel evaluated on the diagonal")), {})
    assert info.value.exit_code == 1
    doc = json.loads(capsys.readouterr().out)
    assert _checks(doc)["SingularPointError"]["pass"] is False
    print("[PASS] singular point exits 1")


def test_plain_value_error_exits_2():
    """A ValueError outside the library's error hierarchy is a configuration error."""
    with pytest.raises(typer.Exit) as info:
        execute("elliptic", _raises(ValueError("unknown mode 'x'")), {"mode": "x"})
    assert info.value.exit_code == 2
    print("[PASS] plain ValueError exits 2")


def test_empty_report_json():
    """A report with no checks and no data serializes to an empty check list."""
    assert emit_report(Report("classical"), "json") == '{"checks":[]}\n'
    with pytest.raises(ValueError):
        emit_report(Report("classical"), "xml")
    print("[PASS] empty report")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
