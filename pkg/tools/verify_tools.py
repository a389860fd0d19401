# -*- coding: utf-8 -*-
"""Band structure of multiplication by Z and the block Christoffel–Darboux identity"""

import logging
from typing import List, Optional

import numpy as np
import typer

from abelian_mops.biortho import (
    bimoments,
    biorthogonalize,
    block_recurrence,
    cd_identity_terms,
    monomial_basis,
)
from abelian_mops.classical import ClassicalFamilySpec, classical_cover, classical_Y
from abelian_mops.quadcontour import make_contour
from abelian_mops.report import Report
from .utils import execute

logger = logging.getLogger(__name__)

T_HALF_WIDTH = 10.0


def _t_contour(spec, node_count):
    if spec.kind == "hermite":
        return make_contour("segment", {"a": -T_HALF_WIDTH, "b": T_HALF_WIDTH}, node_count)
    return make_contour("ray", {"start": 0.0, "direction": 1.0, "decay": 1.0}, node_count)


def _random_pairs(cover, count, seed=0):
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        p, q = rng.normal(size=2) + 1j * rng.normal(size=2)
        if abs(cover.Z(p) - cover.Z(q)) > 1e-3:
            pairs.append((complex(p), complex(q)))
    return pairs


def run_verify_cd(params, tolerances):
    ell_max = int(params.get("ell", 2))
    if ell_max < 0:
        raise ValueError("ell must be ≥ 0")
    spec = ClassicalFamilySpec(kind=params.get("kind", "hermite"), c=float(params.get("c", 0.0)),
                               alpha=float(params.get("alpha", 0.0)), N=ell_max + 2)
    cover = classical_cover(spec)
    r = cover.r
    N = r * (ell_max + 2)
    report = Report("verify-cd", tolerances)

    contour = _t_contour(spec, params.get("nodes") or 200)
    Y = classical_Y(spec)
    basis = monomial_basis(N)
    family = biorthogonalize(bimoments(basis, basis, Y, contour, N))
    blocks = block_recurrence(family, cover.Z, contour, Y, r)
    report.check("band_structure", blocks.band_violation)

    residuals = []
    for ell in range(ell_max + 1):
        for p, q in _random_pairs(cover, int(params.get("pairs", 10)), seed=ell):
            kernel, rhs = cd_identity_terms(blocks, ell, p, q)
            scale = max(abs(kernel), abs(rhs), 1e-300)
            residuals.append(abs(kernel - rhs) / scale if ell else abs(kernel - rhs))
    report.check("cd_identity", max(residuals))

    report.data["Zmat"] = blocks.Zmat
    report.data["h"] = family.h
    report.data["cd_residuals"] = np.array(residuals)
    return report


def register_verify_tools(app):
    """Register the CD identity verification command"""

    @app.command("verify-cd")
    def verify_cd(
        kind: str = typer.Option("hermite", "--kind", help="scalar weight of the cover: hermite or laguerre"),
        c: float = typer.Option(0.0, "--c", help="shift of the cover z = (t - c)**2"),
        alpha: float = typer.Option(0.0, "--alpha", help="Laguerre parameter"),
        ell: int = typer.Option(2, "--ell", help="largest block index l"),
        pairs: int = typer.Option(10, "--pairs", help="random point pairs per l"),
        nodes: Optional[int] = typer.Option(None, "--nodes", help="quadrature nodes in t"),
        emit: str = typer.Option("pretty", "--emit", help="json, csv or pretty"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Check the band structure of Z and the block CD identity on random point pairs."""
        execute("verify-cd", run_verify_cd,
                {"kind": kind, "c": c, "alpha": alpha, "ell": ell, "pairs": pairs, "nodes": nodes},
                emit, tol)
