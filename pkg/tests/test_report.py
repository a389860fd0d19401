# -*- coding: utf-8 -*-
"""Unit tests for report: repeated checks, failures and tolerance overrides."""
import sys
import os
import json

import pytest

# Add parent to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from abelian_mops._constants import DEFAULT_TOLERANCES
from abelian_mops._errors import ConfigError, SingularPointError
from abelian_mops.report import Report, emit_report, resolve_tolerances

NAN = float("nan")
INF = float("inf")


# ── repeated checks keep the worst value ─────────────────────────────────────

def test_larger_finite_value_wins():
    """The second value replaces the first only when it is larger."""
    report = Report("biortho")
    report.check("biorthogonality", 1e-12)
    report.check("biorthogonality", 1e-6, "row 3")
    report.check("biorthogonality", 1e-14)
    assert len(report.checks) == 1
    assert report.checks[0].value == 1e-6
    assert report.checks[0].detail == "row 3"
    assert not report.passed
    print("[PASS] worst finite value kept")


def test_nan_is_never_replaced():
    """A NaN followed by a small value stays failing."""
    report = Report("biortho")
    report.check("biorthogonality", NAN)
    report.check("biorthogonality", 1e-12)
    assert report.checks[0].value != report.checks[0].value
    assert not report.passed
    assert report.exit_code == 1
    print("[PASS] NaN kept")


@pytest.mark.parametrize("bad", [NAN, INF])
def test_non_finite_replaces_finite(bad):
    """A passing value followed by NaN or inf turns the check into a failure."""
    report = Report("pade")
    report.check("pade_orthogonality", 1e-12)
    assert report.passed
    report.check("pade_orthogonality", bad)
    assert not report.checks[0].passed
    report.check("pade_orthogonality", 1e-15)
    assert not report.passed
    doc = json.loads(emit_report(report, "json"))
    assert doc["checks"][0]["value"] is None
    assert doc["checks"][0]["pass"] is False
    print("[PASS] non-finite {} kept".format(bad))


def test_fail_adds_failing_check():
    """A numerical exception becomes a failing check named after its type."""
    report = Report("elliptic")
    report.check("fay", 1e-12)
    report.fail(SingularPointError("szego kernel evaluated on the diagonal"))
    assert [c.name for c in report.failing] == ["SingularPointError"]
    assert "diagonal" in report.failing[0].detail
    assert report.exit_code == 1
    print("[PASS] fail()")


# ── tolerance overrides ──────────────────────────────────────────────────────

def test_resolve_tolerances_only_loosens():
    """Overrides below the default keep the default; larger ones apply."""
    out = resolve_tolerances({"fay": 1e-6, "wp_ode": 1e-12})
    assert out["fay"] == 1e-6
    assert out["wp_ode"] == DEFAULT_TOLERANCES["wp_ode"]
    assert resolve_tolerances() == DEFAULT_TOLERANCES
    print("[PASS] tolerances only loosen")


@pytest.mark.parametrize("overrides", [{"nope": 1e-3}, {"fay": -1.0}, {"fay": NAN}, {"fay": 1e-20},
                                       {"fay": "big"}])
def test_resolve_tolerances_rejects(overrides):
    """Unknown names, non-positive, NaN, below-floor and non-numeric values are config errors."""
    with pytest.raises(ConfigError):
        resolve_tolerances(overrides)
    print("[PASS] rejected {}".format(overrides))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
