# -*- coding: utf-8 -*-
"""Multipoint Padé approximants of the Stieltjes transform (guide example)"""

import logging
from typing import List, Optional

import numpy as np
import typer

from abelian_mops._validation import parse_complex_list
from abelian_mops.biortho import multipoint_pade
from abelian_mops.report import Report
from .biortho_tools import scalar_weight
from .utils import execute, require

logger = logging.getLogger(__name__)

DECAY_RADII = np.array([10.0, 30.0, 100.0, 300.0])


def _decay_slope(fn, direction=np.exp(0.7j)):
    values = np.array([abs(fn(r * direction)) for r in DECAY_RADII])
    return float(np.polyfit(np.log(DECAY_RADII), np.log(values), 1)[0])


def run_pade(params, tolerances):
    n = int(params.get("n", 5))
    nodes = params.get("nodes") or ()
    if isinstance(nodes, str):
        nodes, error = parse_complex_list(nodes, n - 1)
        require(error)
    Y, contour = scalar_weight(params.get("weight", "legendre"), params.get("quad_nodes"))
    report = Report("pade", tolerances)

    result = multipoint_pade(n, nodes, Y, contour)
    report.check("pade_orthogonality", float(np.max(result.relative_residuals)))

    w = contour.nodes
    node_values = []
    for z in result.nodes:
        value = result.transform(z)
        size = float(np.sum(np.abs(result.measure * result.P(w) / ((z - w) * result.node_product(w)))))
        node_values.append(value)
        report.check("pade_nodes", abs(value) / size, detail="z = {}".format(z))

    report.data["P"] = result.P.coeffs
    report.data["Q"] = result.Q.coeffs
    report.data["rho_at_nodes"] = np.array(node_values, dtype=complex)
    report.data["decay_slope_rho"] = _decay_slope(result.transform)
    report.data["decay_slope_remainder"] = _decay_slope(result.remainder)
    return report


def register_pade_tools(app):
    """Register the multipoint Padé command"""

    @app.command("pade")
    def pade(
        n: int = typer.Option(5, "--n", help="degree of the denominator P_n"),
        nodes: Optional[str] = typer.Option(None, "--nodes", help="n-1 interpolation nodes z1,z2,..."),
        weight: str = typer.Option("legendre", "--weight", help="legendre or hermite"),
        quad_nodes: Optional[int] = typer.Option(None, "--quad-nodes", help="segment quadrature nodes"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Solve for the multipoint Padé denominator and check its orthogonality conditions."""
        execute("pade", run_pade,
                {"n": n, "nodes": nodes, "weight": weight, "quad_nodes": quad_nodes}, emit, tol)
