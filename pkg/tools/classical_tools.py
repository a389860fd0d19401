# -*- coding: utf-8 -*-
"""Hermite and Laguerre matrix families (genus-0 cover z = (t - c)**2)"""

import logging
from typing import List, Optional

import numpy as np
import typer

from abelian_mops._constants import ORTHOGONALITY_NODES
from abelian_mops.classical import (
    ClassicalFamilySpec,
    classical_basis,
    classical_cover,
    classical_mop_family,
    classical_weight,
    cover_weight,
    family_orthogonality,
    hermite_reference,
    phi_phi_constant,
    support_start,
)
from abelian_mops.cover0 import phi_phi_vee
from abelian_mops.report import Report
from .utils import execute

logger = logging.getLogger(__name__)

SAMPLE_POINTS = 20


def _sample_z(spec, count=SAMPLE_POINTS, seed=0):
    rng = np.random.default_rng(seed)
    return support_start(spec) + rng.uniform(0.05, 6.0, count)


def run_classical(params, tolerances):
    spec = ClassicalFamilySpec(kind=params.get("kind", "hermite"), c=float(params.get("c", 0.0)),
                               alpha=float(params.get("alpha", 0.0)), N=int(params.get("n", 4)))
    nodes = int(params.get("nodes") or ORTHOGONALITY_NODES)
    report = Report("classical", tolerances)

    family = classical_mop_family(spec)
    report.check("projection_agreement", family.metadata["projection_gap"])

    if spec.kind == "hermite":
        for j in range(1, min(spec.N, 4)):
            ref = hermite_reference(j, spec.c)
            report.check("printed_matrices", family.P[j].max_distance(ref) / max(1.0, ref.norm()),
                         detail="P_{}".format(j))

    _, errors = family_orthogonality(spec, family, nodes)
    off = errors - np.diag(np.diag(errors))
    report.check("matrix_orthogonality", float(np.max(off)))
    report.check("norms", float(np.max(np.diag(errors))))

    z = _sample_z(spec)
    closed = classical_weight(spec, z)
    assembled = cover_weight(spec, z)
    report.check("weight_closed_form",
                 float(np.max(np.abs(closed - assembled)) / np.max(np.abs(closed))))

    cover, basis = classical_cover(spec), classical_basis(spec)
    target = phi_phi_constant(spec)
    worst = max(float(np.max(np.abs(phi_phi_vee(cover, basis, basis, zz) - target))) for zz in z)
    report.check("phi_phi_constant", worst / max(1.0, float(np.max(np.abs(target)))))

    report.data["P"] = list(family.P)
    report.data["H"] = [np.diag(h).real for h in family.H]
    report.data["residual_max"] = float(np.max(errors))
    return report


def register_classical_tools(app):
    """Register the classical family command"""

    @app.command("classical")
    def classical(
        kind: str = typer.Option("hermite", "--kind", help="hermite or laguerre"),
        c: float = typer.Option(0.0, "--c", help="shift of the cover z = (t - c)**2"),
        alpha: float = typer.Option(0.0, "--alpha", help="Laguerre parameter (> -1)"),
        n: int = typer.Option(4, "--n", help="number of matrix polynomials P_0..P_{n-1}"),
        nodes: Optional[int] = typer.Option(None, "--nodes", help="half-line quadrature nodes"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Build P_0..P_{n-1} with norms and verify them against the closed forms."""
        execute("classical", run_classical,
                {"kind": kind, "c": c, "alpha": alpha, "n": n, "nodes": nodes}, emit, tol)
