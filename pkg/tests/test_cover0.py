# -*- coding: utf-8 -*-
"""Unit tests for cover0: sheets, weights, Phi matrices and the long-division projection."""
import sys
import os

import numpy as np
import pytest

# Add parent to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from abelian_mops._errors import BranchPointError, PolynomialError
from abelian_mops.cover0 import (
    CoverG0,
    SectionBasisG0,
    build_Phi,
    critical_ratio_check,
    phi_phi_vee,
    reconstruct_scalar,
    scalar_to_matrix_poly,
    sheets,
    track_sheets,
    weight_matrix,
)
from abelian_mops.classical import classical_scalar
from abelian_mops.polyalg import CPoly

SQUARE = CoverG0(CPoly([0.0, 0.0, 1.0]))
HERMITE_BASIS = SectionBasisG0((CPoly([1.0]), CPoly([0.0, 2.0])))


def test_cover_validation():
    """Covers must be monic of degree ≥ 1."""
    with pytest.raises(PolynomialError):
        CoverG0(CPoly([3.0]))
    with pytest.raises(ValueError):
        CoverG0(CPoly([0.0, 0.0, 2.0]))
    assert SQUARE.r == 2
    assert np.allclose(SQUARE.critical_values, [0.0])
    print("[PASS] cover validation")


def test_sheets_square_and_shifted():
    """Z = t**2 over z = 4 gives 2, -2; Z = (t - c)**2 gives c ± sqrt(z)."""
    assert np.allclose(sheets(SQUARE, 4.0), [2.0, -2.0])
    c = 0.7
    shifted = CoverG0(CPoly([c * c, -2 * c, 1.0]))
    assert np.allclose(sheets(shifted, 2.25), [c + 1.5, c - 1.5])
    print("[PASS] sheets")


def test_sheets_forward_evaluation():
    """Roots of t**3 + t - z satisfy Z(t) = z."""
    cubic = CoverG0(CPoly([0.0, 1.0, 0.0, 1.0]))
    rng = np.random.default_rng(3)
    for z in rng.normal(size=5) + 1j * rng.normal(size=5):
        roots = sheets(cubic, z)
        assert roots.size == 3
        assert np.max(np.abs(cubic.Z(roots) - z)) < 1e-10
    print("[PASS] cubic sheets")


def test_track_sheets_monodromy():
    """A loop around the branch point of t**2 exchanges the two sheets."""
    theta = np.linspace(0.0, 2.0 * np.pi, 200)
    tracked = track_sheets(SQUARE, np.exp(1j * theta))
    assert np.allclose(tracked[-1], tracked[0][::-1], atol=1e-10)
    print("[PASS] sheet monodromy")


def test_weight_matrix_hermite():
    """Hermite c = 0: W(x) = exp(-x) diag(x**-1/2, 4 x**1/2) in the basis 1, 2t."""
    Y = lambda t: np.exp(-t ** 2)
    for x in (0.3, 1.0, 2.5):
        W = weight_matrix(SQUARE, HERMITE_BASIS, Y, sheet_mask=[1, -1], z=x)
        expected = np.exp(-x) * np.diag([x ** -0.5, 4.0 * x ** 0.5])
        assert np.allclose(W, expected, atol=1e-14)
    stacked = weight_matrix(SQUARE, HERMITE_BASIS, Y, sheet_mask=[1, -1], z=np.array([0.3, 1.0]))
    assert stacked.shape == (2, 2, 2)
    with pytest.raises(BranchPointError):
        weight_matrix(SQUARE, HERMITE_BASIS, Y, z=0.0)
    with pytest.raises(ValueError):
        weight_matrix(SQUARE, HERMITE_BASIS, Y, sheet_mask=[1, 1, 1], z=1.0)
    print("[PASS] Hermite weight matrix")


def test_phi_phi_transpose_is_constant():
    """Phi Phi^t is the same constant matrix at every regular z."""
    basis = SectionBasisG0((CPoly([1.0]), CPoly([0.0, 1.0])))
    for z in (0.5, -2.0 + 1j, 3j):
        Phi = build_Phi(SQUARE, basis, z)
        assert np.allclose(Phi @ Phi.T, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)
        assert np.allclose(phi_phi_vee(SQUARE, basis, basis, z), Phi @ Phi.T, atol=1e-12)
    with pytest.raises(ValueError):
        build_Phi(SQUARE, basis, 1.0, branch_rule="secondary")
    print("[PASS] Phi Phi^t constant")


def test_scalar_to_matrix_poly_hermite():
    """(h0, h1) -> identity and (h2, h3) -> diag(4z - 2, 4z - 6)."""
    h = [classical_scalar("hermite", n) for n in range(4)]
    P0 = scalar_to_matrix_poly(SQUARE, HERMITE_BASIS, h[0:2])
    assert np.allclose(P0(1.7), np.eye(2))
    P1 = scalar_to_matrix_poly(SQUARE, HERMITE_BASIS, h[2:4])
    for z in (0.0, 1.0, -0.4 + 2j):
        assert np.allclose(P1(z), np.diag([4 * z - 2, 4 * z - 6]), atol=1e-12)
    assert reconstruct_scalar(SQUARE, HERMITE_BASIS, P1, 1).allclose(h[3])
    with pytest.raises(PolynomialError):
        scalar_to_matrix_poly(SQUARE, SectionBasisG0((CPoly([1.0]), CPoly([2.0]))), h[2:4])
    print("[PASS] Hermite projection")


def test_critical_ratio_basis_is_trivial():
    """Sections equal to the basis give F identically 1."""
    report = critical_ratio_check(SQUARE, HERMITE_BASIS, HERMITE_BASIS.polys, 0.0)
    assert abs(report.max_abs - 1.0) < 1e-10
    assert report.single_valued_defect < 1e-10
    assert report.pole_defect < 1e-10
    assert abs(report.center_value - 1.0) < 1e-10
    print("[PASS] critical ratio, trivial sections")


def test_critical_ratio_multiplicative():
    """Multiplying every section by g(Z(t)) scales F by g(z)**r."""
    g = CPoly([2.0, 1.0])
    lifted = g.compose(SQUARE.Z)
    sections = [lifted * p for p in HERMITE_BASIS.polys]
    report = critical_ratio_check(SQUARE, HERMITE_BASIS, sections, 0.0, radius=0.1)
    assert abs(report.center_value - 4.0) < 1e-10
    assert abs(report.max_abs - 2.1 ** 2) < 1e-10
    assert report.single_valued_defect < 1e-10
    assert report.pole_defect < 1e-10
    print("[PASS] critical ratio, multiplicative")


if __name__ == "__main__":
    tests = [
        test_cover_validation,
        test_sheets_square_and_shifted,
        test_sheets_forward_evaluation,
        test_track_sheets_monodromy,
        test_weight_matrix_hermite,
        test_phi_phi_transpose_is_constant,
        test_scalar_to_matrix_poly_hermite,
        test_critical_ratio_basis_is_trivial,
        test_critical_ratio_multiplicative,
    ]
    failed = 0
    for t in tests:
        try:
            t()
        except Exception as e:
            print("[FAIL] {}: {}".format(t.__name__, e))
            failed += 1
    print("\n{}/{} tests passed".format(len(tests) - failed, len(tests)))
    sys.exit(failed)
