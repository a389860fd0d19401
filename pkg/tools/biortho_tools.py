# -*- coding: utf-8 -*-
"""Scalar biorthogonal engine: bimoments, families, determinant and Heine cross-checks"""

import logging
from typing import List, Optional

import numpy as np
import typer

from abelian_mops._constants import DEFAULT_SEGMENT_NODES
from abelian_mops.biortho import (
    biorthogonalize,
    bimoments,
    heine_oracle,
    monomial_basis,
    verify_orthogonality,
)
from abelian_mops.quadcontour import make_contour
from abelian_mops.report import Report
from .utils import execute

logger = logging.getLogger(__name__)

HERMITE_HALF_WIDTH = 10.0

# weight name -> (Y on the line, segment end points)
SCALAR_WEIGHTS = {
    "legendre": (lambda x: np.ones_like(np.asarray(x, dtype=complex)), (-1.0, 1.0)),
    "hermite": (lambda x: np.exp(-np.asarray(x, dtype=complex) ** 2), (-HERMITE_HALF_WIDTH, HERMITE_HALF_WIDTH)),
}


def scalar_weight(name, node_count=None):
    """(Y, contour) of a named scalar weight on a segment."""
    if name not in SCALAR_WEIGHTS:
        raise ValueError("unknown weight '{}'. Valid: {}".format(name, sorted(SCALAR_WEIGHTS)))
    Y, (a, b) = SCALAR_WEIGHTS[name]
    return Y, make_contour("segment", {"a": a, "b": b}, node_count or DEFAULT_SEGMENT_NODES)


def _relative(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


def _collinearity_defect(a, b):
    """Distance of a from the line through b, relative to |a|."""
    proj = (np.vdot(b, a) / np.vdot(b, b)) * b
    return float(np.linalg.norm(a - proj) / np.linalg.norm(a))


def run_biortho(params, tolerances):
    N = int(params.get("N", 6))
    if N < 1:
        raise ValueError("N must be ≥ 1")
    Y, contour = scalar_weight(params.get("weight", "legendre"), params.get("nodes"))
    basis = monomial_basis(N)
    report = Report("biortho", tolerances)

    bm = bimoments(basis, basis, Y, contour, N)
    family = biorthogonalize(bm)
    check = verify_orthogonality(family, basis, basis, Y, contour)
    report.check("biorthogonality", check.max_relative)

    # h_n = D_{n+1}/D_n for monic sections, D_n D_{n+1} for the determinant ones
    report.check("determinant_norms", _relative(family.h, bm.D[1:] / bm.D[:-1]))
    det_gram = np.diag(family.det_coeffs @ bm.mu @ family.det_dual_coeffs.T)
    report.check("determinant_norms", _relative(det_gram, family.h_det))

    for n in (1, 2):
        if n < N:
            oracle = heine_oracle(basis, basis, Y, contour, n)
            report.check("heine_collinearity", _collinearity_defect(oracle, family.det_coeffs[n, : n + 1]),
                         detail="n = {}".format(n))

    report.data["mu"] = bm.mu
    report.data["D"] = bm.D
    report.data["h"] = family.h
    report.data["coeffs"] = family.coeffs
    report.data["condition_number"] = bm.condition_number
    return report


def register_biortho_tools(app):
    """Register the scalar biorthogonality command"""

    @app.command("biortho")
    def biortho(
        weight: str = typer.Option("legendre", "--weight", help="legendre or hermite"),
        N: int = typer.Option(6, "--N", help="number of basis sections"),
        nodes: Optional[int] = typer.Option(None, "--nodes", help="segment quadrature nodes"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Biorthogonalize the monomials against a scalar weight and cross-check the family."""
        execute("biortho", run_biortho, {"weight": weight, "N": N, "nodes": nodes}, emit, tol)
