# -*- coding: utf-8 -*-
"""Genus-one analytics: theta1, periods, wp, Szegő kernel, Phi and Fay"""

import logging
from typing import List, Optional

import numpy as np
import typer

from abelian_mops._validation import parse_complex_list
from abelian_mops.elliptic1 import (
    J,
    Character,
    curve_periods,
    fay_check,
    fay_degenerate_check,
    half_period_residuals,
    phi_matrices_at,
    phi_phi_vee,
    szego1,
    theta1,
    wp,
)
from abelian_mops.report import Report
from .utils import execute, require

logger = logging.getLogger(__name__)

SAMPLE_POINTS = 10
DEFAULT_CHARACTER = "0.25,0.35"


def sample_lattice_points(tau, count=SAMPLE_POINTS, seed=0, low=0.05, high=0.45):
    """Points x + y tau with x, y uniform in [low, high), away from the lattice."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(low, high, count)
    y = rng.uniform(low, high, count)
    return x + y * complex(tau)


def _parse_character(text):
    values, error = parse_complex_list(text, 2)
    require(error)
    return Character(float(values[0].real), float(values[1].real))


def run_elliptic_theta(params, tolerances):
    tau = complex(str(params.get("tau", "1j")).replace(" ", ""))
    report = Report("elliptic", tolerances)
    v = sample_lattice_points(tau, seed=1)
    if params.get("v"):
        points, error = parse_complex_list(params["v"])
        require(error)
        v = np.array(points)

    th = theta1(v, tau)
    size = np.abs(th)
    shift_1 = np.abs(theta1(v + 1, tau) + th) / size
    shift_tau = np.abs(theta1(v + tau, tau) + np.exp(-1j * np.pi * tau - 2j * np.pi * v) * th) / size
    odd = np.abs(theta1(-v, tau) + th) / size
    report.check("theta_quasiperiod", float(max(shift_1.max(), shift_tau.max(), odd.max())))

    report.data["tau"] = tau
    report.data["v"] = v
    report.data["theta1"] = th
    return report


def run_elliptic_periods(params, tolerances):
    roots, error = parse_complex_list(params.get("curve"), 3)
    require(error)
    X = _parse_character(params.get("character") or DEFAULT_CHARACTER)
    data = curve_periods(*roots)
    X.check(data.tau)
    report = Report("elliptic", tolerances)

    report.check("half_periods", float(np.max(half_period_residuals(data)))
                 / max(1.0, float(np.max(np.abs(data.branch_points)))))

    v = sample_lattice_points(data.tau)
    p, dp = wp(v, data)
    rhs = 4 * p ** 3 - data.g2 * p - data.g3
    report.check("wp_ode", float(np.max(np.abs(dp ** 2 - rhs) / (np.abs(dp) ** 2 + np.abs(4 * p ** 3)))))

    w = sample_lattice_points(data.tau, seed=2, low=-0.45, high=-0.05)
    S = szego1(v, w, X, data)
    m_a, m_b = X.multipliers
    mono = max(np.max(np.abs(szego1(v + 1, w, X, data) - m_a * S) / np.abs(S)),
               np.max(np.abs(szego1(v + data.tau, w, X, data) - m_b * S) / np.abs(S)))
    report.check("szego_monodromy", float(mono))

    Phi, Phi_vee, Phi_inv = phi_matrices_at(v, X, data)
    target = -(2.0 * data.omega1) ** 2 * J
    const = np.max(np.abs(phi_phi_vee(Phi, Phi_vee, v, data) - target)) / np.max(np.abs(target))
    inverse = np.max(np.abs(Phi @ Phi_inv - np.eye(2)))
    report.check("phi_identities", float(max(const, inverse)))

    rng = np.random.default_rng(3)
    fay = []
    for _ in range(SAMPLE_POINTS):
        pts = sample_lattice_points(data.tau, count=4, seed=int(rng.integers(1 << 30)), low=-0.45, high=0.45)
        fay.append(fay_check(pts[:2], pts[2:], X, data))
        fay.append(fay_degenerate_check(pts[0], pts[1], pts[2], X, data))
    report.check("fay", float(max(fay)))

    report.data["omega1"] = data.omega1
    report.data["omega2"] = data.omega2
    report.data["tau"] = data.tau
    report.data["g2"] = data.curve_g2
    report.data["g3"] = data.curve_g3
    report.data["shift"] = data.shift
    return report


def run_elliptic(params, tolerances):
    mode = params.get("mode", "periods")
    if mode == "theta":
        return run_elliptic_theta(params, tolerances)
    if mode == "periods":
        return run_elliptic_periods(params, tolerances)
    raise ValueError("elliptic mode must be 'theta' or 'periods', got '{}'".format(mode))


def register_elliptic_tools(app):
    """Register the elliptic command group"""
    elliptic_app = typer.Typer(help="Genus-one curve and theta function checks", no_args_is_help=True)

    @elliptic_app.command("theta")
    def theta(
        tau: str = typer.Option("1j", "--tau", help="modulus with Im tau > 0, e.g. 0.2+1.1j"),
        v: Optional[str] = typer.Option(None, "--v", help="evaluation points v1,v2,..."),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Evaluate theta1 and check its quasi-periodicity."""
        execute("elliptic", run_elliptic, {"mode": "theta", "tau": tau, "v": v}, emit, tol)

    @elliptic_app.command("periods")
    def periods(
        curve: str = typer.Option(..., "--curve", help="branch points e1,e2,e3 of y^2 = 4(z-e1)(z-e2)(z-e3)"),
        character: str = typer.Option(DEFAULT_CHARACTER, "--character", help="alpha,beta of the character"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Periods and modulus of the curve, with wp, Szegő, Phi and Fay checks."""
        execute("elliptic", run_elliptic,
                {"mode": "periods", "curve": curve, "character": character}, emit, tol)

    app.add_typer(elliptic_app, name="elliptic")
