# -*- coding: utf-8 -*-
"""Torsion points and the finite matrix orthogonality they carry"""

import logging
from typing import List, Optional

import numpy as np
import typer

from abelian_mops._validation import parse_complex_list
from abelian_mops.elliptic1 import curve_periods
from abelian_mops.report import Report
from abelian_mops.torsion import (
    DK_DIVISOR,
    TorsionSpec,
    dk_curve,
    dk_fixture,
    dk_quarter_periods,
    dk_torsion_spec,
    finite_orthogonality,
    finite_pairing_rank,
    pairing_kernel_residuals,
    second_sheet_pairing,
    sqrtW,
    torsion_condition_residual,
    torsion_points,
    torsion_PR,
    torsion_PRminus1,
)
from .utils import execute, require

logger = logging.getLogger(__name__)

SAMPLE_POINTS = 20


def _curve(params):
    if params.get("alpha") is not None:
        return dk_curve(float(params["alpha"]))
    if not params.get("curve"):
        raise ValueError("give --curve e1,e2,e3 or --alpha")
    roots, error = parse_complex_list(params["curve"], 3)
    require(error)
    return curve_periods(*roots)


def _point_rows(points):
    return [{"a": p.a, "b": p.b, "z": p.z, "prime": p.prime} for p in points]


def run_torsion_find(params, tolerances):
    R = int(params.get("R", 2))
    if R < 2:
        raise ValueError("R must be ≥ 2")
    curve = _curve(params)
    report = Report("torsion", tolerances)

    points = torsion_points(curve, R)
    report.check("torsion_count", abs(len(points) - (2 * R * R - 2)))
    conditions = [abs(torsion_condition_residual(curve, p.z, R)) for p in points]
    report.check("torsion_condition", max(conditions))

    if params.get("alpha") is not None and R == 2:
        expected = dk_quarter_periods(float(params["alpha"]))
        found = np.array([p.z for p in points])
        gap = max(float(np.min(np.abs(found - z))) for z in expected)
        report.check("torsion_values", gap / max(1.0, float(np.max(np.abs(expected)))))

    report.data["tau"] = curve.tau
    report.data["torsion_points"] = _point_rows(points)
    report.data["condition_residuals"] = np.array(conditions)
    return report


def _random_points(spec, count=SAMPLE_POINTS, seed=0):
    """Sample z away from the branch points and the poles of sqrt W."""
    rng = np.random.default_rng(seed)
    avoid = np.concatenate([spec.curve.branch_points, np.array(spec.z_poles)])
    spread = 2.0 * max(1.0, float(np.max(np.abs(avoid))))
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        if np.min(np.abs(avoid - z)) > 0.05 * spread:
            out.append(z)
    return np.array(out)


def run_torsion_mop(params, tolerances):
    R = int(params.get("R", 2))
    alpha = params.get("alpha")
    if alpha is not None:
        spec = dk_torsion_spec(float(alpha), R)
    else:
        spec = TorsionSpec.from_label(_curve(params), R, int(params.get("a", 1)), int(params.get("b", 0)))
    N = int(params.get("N") or 2 * R + 4)
    report = Report("torsion", tolerances)

    z = _random_points(spec)
    half = sqrtW(spec, z)
    det_residual = float(np.max(np.abs(np.linalg.det(half) - 1.0)))
    report.check("sqrtw_det", det_residual)
    swapped = sqrtW(spec, z, swap=True)
    report.check("sqrtw_single_valued", float(np.max(np.abs(half - swapped)) / np.max(np.abs(half))))

    P_R, fit_R = torsion_PR(spec)
    P_R1, fit_R1 = torsion_PRminus1(spec)
    report.check("polynomial_fit", fit_R, detail="P_R")
    report.check("polynomial_fit", fit_R1, detail="P_R-1")

    annihilation = finite_orthogonality(spec, P_R, (0, 1))
    orthogonality = finite_orthogonality(spec, P_R1, range(R - 1))
    report.check("finite_orthogonality", float(np.max(np.concatenate([annihilation, orthogonality]))))

    rank = finite_pairing_rank(spec, N)
    report.check("pairing_rank", abs(rank - 2 * R))
    report.check("pairing_kernel", float(np.max(pairing_kernel_residuals(spec, N))))
    report.check("second_sheet", second_sheet_pairing(spec, N))

    if alpha is not None:
        dk = dk_fixture(float(alpha))
        report.check("dk_det", dk.det_residual)
        report.check("dk_charpoly", dk.charpoly_residual)
        orders = [abs(dk.zero_order - 2.0), abs(dk.pole_order + 2.0)]
        orders += [abs(dk.divisor_orders[k] - v) for k, v in DK_DIVISOR.items()]
        report.check("dk_order", max(orders))
        report.data["dk_orders"] = dict(dk.divisor_orders, zero_at_1=dk.zero_order, pole_at_1=dk.pole_order)

    report.data["label"] = {"a": spec.a, "b": spec.b, "R": R, "z": spec.z_poles[0], "prime": spec.prime}
    report.data["torsion_points"] = _point_rows(torsion_points(spec.curve, R))
    report.data["rank"] = rank
    report.data["det_residual"] = det_residual
    report.data["orthogonality_residuals"] = np.concatenate([annihilation, orthogonality])
    report.data["P_R"] = P_R
    report.data["P_R_minus_1"] = P_R1
    return report


def run_torsion(params, tolerances):
    mode = params.get("mode", "find")
    if mode == "find":
        return run_torsion_find(params, tolerances)
    if mode == "mop":
        return run_torsion_mop(params, tolerances)
    raise ValueError("torsion mode must be 'find' or 'mop', got '{}'".format(mode))


def register_torsion_tools(app):
    """Register the torsion command group"""
    torsion_app = typer.Typer(help="Torsion points and finite orthogonality", no_args_is_help=True)

    @torsion_app.command("find")
    def find(
        curve: Optional[str] = typer.Option(None, "--curve", help="branch points e1,e2,e3"),
        alpha: Optional[float] = typer.Option(None, "--alpha", help="use the DK curve z(z+alpha^2)(z+alpha^-2)"),
        R: int = typer.Option(2, "--R", help="torsion order 2R"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Enumerate 2R-torsion classes and certify them with the determinant condition."""
        execute("torsion", run_torsion,
                {"mode": "find", "curve": curve, "alpha": alpha, "R": R}, emit, tol)

    @torsion_app.command("mop")
    def mop(
        alpha: Optional[float] = typer.Option(None, "--alpha", help="DK curve, pole at z = 1"),
        curve: Optional[str] = typer.Option(None, "--curve", help="branch points e1,e2,e3"),
        a: int = typer.Option(1, "--a", help="torsion label a"),
        b: int = typer.Option(0, "--b", help="torsion label b"),
        R: int = typer.Option(2, "--R", help="pole order R"),
        N: Optional[int] = typer.Option(None, "--N", help="pairing size (≥ 2R + 2)"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Build sqrt W, P_R, P_{R-1} and the pairing for a torsion label and check them."""
        execute("torsion", run_torsion,
                {"mode": "mop", "alpha": alpha, "curve": curve, "a": a, "b": b, "R": R, "N": N}, emit, tol)

    app.add_typer(torsion_app, name="torsion")
