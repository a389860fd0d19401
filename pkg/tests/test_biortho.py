# -*- coding: utf-8 -*-
"""Unit tests for the scalar biorthogonal engine."""
import sys
import os
import dataclasses
from math import factorial, sqrt, pi

import numpy as np
import pytest

# Add parent to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from abelian_mops._errors import BandStructureError, DegenerateMinorError
from abelian_mops.biortho import (
    bimoments,
    biorthogonalize,
    block_recurrence,
    cd_identity_residual,
    cd_identity_terms,
    cds_kernel,
    heine_oracle,
    monomial_basis,
    multipoint_pade,
    verify_orthogonality,
)
from abelian_mops.classical import ClassicalFamilySpec, classical_cover, classical_scalar, classical_Y
from abelian_mops.polyalg import CPoly
from abelian_mops.quadcontour import make_contour

LEGENDRE_Y = lambda x: np.ones_like(np.asarray(x, dtype=complex))
LEGENDRE_SEGMENT = make_contour("segment", {"a": -1.0, "b": 1.0}, 32)


def _collinear(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    proj = (np.vdot(b, a) / np.vdot(b, b)) * b
    return np.linalg.norm(a - proj) / np.linalg.norm(a)


def _legendre_family(N=5):
    basis = monomial_basis(N)
    bm = bimoments(basis, basis, LEGENDRE_Y, LEGENDRE_SEGMENT)
    return basis, bm, biorthogonalize(bm)


def test_legendre_moments():
    """mu[a][b] = 2/(a+b+1) for a+b even and 0 otherwise; D_1 = mu[0][0]."""
    _, bm, _ = _legendre_family(5)
    for a in range(5):
        for b in range(5):
            expected = 2.0 / (a + b + 1) if (a + b) % 2 == 0 else 0.0
            assert abs(bm.mu[a, b] - expected) < 1e-12
    assert abs(bm.D[1] - bm.mu[0, 0]) < 1e-15
    assert abs(bm.D[3] - np.linalg.det(bm.mu[:3, :3])) < 1e-10 * abs(bm.D[3])
    assert bm.degenerate == ()
    print("[PASS] Legendre moments")


def test_legendre_family_is_monic_legendre():
    """psi_2 = x**2 - 1/3, psi_3 = x**3 - 3x/5 and h_n = D_{n+1}/D_n."""
    _, bm, family = _legendre_family(5)
    assert np.allclose(family.coeffs[2, :3], [-1.0 / 3.0, 0.0, 1.0], atol=1e-12)
    assert np.allclose(family.coeffs[3, :4], [0.0, -0.6, 0.0, 1.0], atol=1e-12)
    assert np.allclose(family.h[:4], [2.0, 2.0 / 3.0, 8.0 / 45.0, 8.0 / 175.0], rtol=1e-10)
    assert np.allclose(family.h, bm.D[1:] / bm.D[:-1], rtol=1e-10)
    assert np.allclose(family.dual_coeffs, family.coeffs, atol=1e-12)
    assert np.max(family.collinearity_defects()) < 1e-8
    zeros = np.sort(np.roots(family.coeffs[3, :4][::-1]).real)
    assert np.allclose(zeros, [-sqrt(0.6), 0.0, sqrt(0.6)], atol=1e-8)
    print("[PASS] Legendre family")


def test_determinant_convention_norms():
    """Determinant sections pair to D_n D_{n+1}."""
    _, bm, family = _legendre_family(5)
    gram = np.diag(family.det_coeffs @ bm.mu @ family.det_dual_coeffs.T)
    assert np.allclose(gram, family.h_det, rtol=1e-8)
    print("[PASS] determinant convention")


def test_hermite_basis_is_already_orthogonal():
    """With phi_a = h_a and Y = exp(-t**2) the moments are 2**a a! sqrt(pi) on the diagonal."""
    basis = [classical_scalar("hermite", a) for a in range(5)]
    segment = make_contour("segment", {"a": -10.0, "b": 10.0}, 200)
    bm = bimoments(basis, basis, lambda x: np.exp(-x ** 2), segment)
    expected = np.diag([2.0 ** a * factorial(a) * sqrt(pi) for a in range(5)])
    assert np.allclose(bm.mu, expected, rtol=1e-12, atol=1e-9)
    family = biorthogonalize(bm)
    assert np.allclose(family.coeffs, np.eye(5), atol=1e-10)
    print("[PASS] Hermite idempotence")


def test_degenerate_minor_raises_with_index():
    """An odd weight makes D_1 vanish."""
    basis = monomial_basis(3)
    bm = bimoments(basis, basis, lambda x: np.asarray(x, dtype=complex), LEGENDRE_SEGMENT)
    assert 1 in bm.degenerate
    with pytest.raises(DegenerateMinorError) as info:
        biorthogonalize(bm)
    assert info.value.index == 1
    assert len(info.value.partial) == 0
    assert len(biorthogonalize(bm, allow_partial=True)) == 0
    print("[PASS] degenerate minor")


def test_heine_oracle():
    """n = 1 is proportional to x, n = 2 to x**2 - 1/3; n = 3 is refused."""
    basis = monomial_basis(3)
    segment = make_contour("segment", {"a": -1.0, "b": 1.0}, 16)
    one = heine_oracle(basis, basis, LEGENDRE_Y, segment, 1)
    assert _collinear(one, [0.0, 1.0]) < 1e-10
    two = heine_oracle(basis, basis, LEGENDRE_Y, segment, 2)
    assert _collinear(two, [-1.0 / 3.0, 0.0, 1.0]) < 1e-6
    with pytest.raises(ValueError):
        heine_oracle(basis, basis, LEGENDRE_Y, segment, 3)
    print("[PASS] Heine oracle")


def test_verify_orthogonality_detects_perturbation():
    """A constructed family passes; a 1e-3 coefficient change is visible."""
    basis, _, family = _legendre_family(5)
    report = verify_orthogonality(family, basis, basis, LEGENDRE_Y, LEGENDRE_SEGMENT)
    assert report.max_relative < 1e-10
    assert report.residuals[0].tolist() == [0.0] * 5
    coeffs = family.coeffs.copy()
    coeffs[2, 0] += 1e-3
    broken = dataclasses.replace(family, coeffs=coeffs)
    report = verify_orthogonality(broken, basis, basis, LEGENDRE_Y, LEGENDRE_SEGMENT)
    assert report.max_relative > 1e-4
    print("[PASS] orthogonality detector")


def test_cds_kernel_small_orders():
    """K_0 = 0 and K_1 = 1/h_0."""
    _, _, family = _legendre_family(3)
    assert cds_kernel(family, 0, 0.2, 0.7) == 0
    assert abs(cds_kernel(family, 1, 0.2, 0.7) - 0.5) < 1e-14
    with pytest.raises(ValueError):
        cds_kernel(family, 4, 0.2, 0.7)
    print("[PASS] CDS kernel")


def test_cds_kernel_reproduces_and_traces():
    """int K_n(p, q) Y(q) psi_j(q) dq = psi_j(p) for j < n, 0 for j ≥ n; int K_n(p, p) Y(p) dp = n."""
    _, _, family = _legendre_family(6)
    nodes = LEGENDRE_SEGMENT.nodes
    measure = LEGENDRE_SEGMENT.weights
    n = 4
    p = 0.3 + 0.2j
    kernel = cds_kernel(family, n, np.full(nodes.shape, p), nodes)
    for j in range(len(family)):
        projected = np.sum(kernel * measure * family.psi(j, nodes))
        expected = family.psi(j, np.array([p]))[0] if j < n else 0.0
        assert abs(projected - expected) < 1e-10 * max(1.0, abs(expected))
    trace = np.sum(cds_kernel(family, n, nodes, nodes) * measure)
    assert abs(trace - n) < 1e-10
    print("[PASS] CDS reproducing and trace")


@pytest.mark.parametrize("c", [0.0, 0.5])
def test_hermite_cover_band_and_cd_identity(c):
    """Z = (t - c)**2 on the Hermite weight: band half-width 2 and the block CD identity for l ≤ 2."""
    spec = ClassicalFamilySpec(kind="hermite", c=c, N=4)
    cover = classical_cover(spec)
    r = cover.r
    assert r == 2
    N = r * 4
    contour = make_contour("segment", {"a": -10.0, "b": 10.0}, 200)
    Y = classical_Y(spec)
    basis = monomial_basis(N)
    family = biorthogonalize(bimoments(basis, basis, Y, contour, N))
    blocks = block_recurrence(family, cover.Z, contour, Y, r)
    assert blocks.band_violation < 1e-8
    rng = np.random.default_rng(7)
    for ell in (1, 2):
        for _ in range(10):
            p, q = rng.normal(size=2) + 1j * rng.normal(size=2)
            if abs(cover.Z(p) - cover.Z(q)) < 1e-3:
                continue
            kernel, rhs = cd_identity_terms(blocks, ell, p, q)
            assert abs(kernel - rhs) < 1e-8 * max(abs(kernel), abs(rhs))
    print("[PASS] Hermite cover band and CD identity, c = {}".format(c))


def test_block_recurrence_and_cd_identity():
    """Scalar case r = 1: tridiagonal Z matrix and the classical CD identity."""
    _, _, family = _legendre_family(6)
    blocks = block_recurrence(family, lambda x: x, LEGENDRE_SEGMENT, LEGENDRE_Y, 1)
    assert blocks.band_violation < 1e-10
    assert abs(blocks.A(2)[0, 0] - 1.0) < 1e-12
    rng = np.random.default_rng(11)
    for ell in (1, 2, 4):
        p, q = rng.uniform(-1, 1, size=2) + 0.3j * rng.normal(size=2)
        kernel, _ = cd_identity_terms(blocks, ell, p, q)
        assert cd_identity_residual(family, blocks, ell, p, q) < 1e-10 * max(1.0, abs(kernel))
    assert cd_identity_terms(blocks, 0, 0.1, 0.4) == (0j, 0j)
    with pytest.raises(ValueError):
        cd_identity_terms(blocks, 1, 0.3, 0.3)
    print("[PASS] block recurrence and CD identity")


def test_block_recurrence_constant_and_violation():
    """Constant Z gives a multiple of the identity; Z = x**3 breaks the r = 1 band."""
    _, _, family = _legendre_family(6)
    blocks = block_recurrence(family, lambda x: 3.0 + 0.0 * x, LEGENDRE_SEGMENT, LEGENDRE_Y, 1)
    assert np.allclose(blocks.Zmat, 3.0 * np.eye(6), atol=1e-10)
    with pytest.raises(BandStructureError):
        block_recurrence(family, lambda x: x ** 3, LEGENDRE_SEGMENT, LEGENDRE_Y, 1)
    print("[PASS] band structure")


def test_multipoint_pade():
    """No nodes: monic Legendre. With nodes: orthogonality system and vanishing transform."""
    plain = multipoint_pade(2, (), LEGENDRE_Y, LEGENDRE_SEGMENT)
    assert plain.P.allclose(CPoly([-1.0 / 3.0, 0.0, 1.0]))
    result = multipoint_pade(3, (2.0, -1.5 + 1j), LEGENDRE_Y, LEGENDRE_SEGMENT)
    assert result.P.degree == 3
    assert np.max(result.relative_residuals) < 1e-8
    for z in result.nodes:
        assert abs(result.transform(z)) < 1e-8
    with pytest.raises(ValueError):
        multipoint_pade(3, (2.0,), LEGENDRE_Y, LEGENDRE_SEGMENT)
    with pytest.raises(ValueError):
        multipoint_pade(2, (LEGENDRE_SEGMENT.nodes[3],), LEGENDRE_Y, LEGENDRE_SEGMENT)
    print("[PASS] multipoint Padé")


def test_multipoint_pade_sweep():
    """n = 1..5 on the Legendre weight: orthogonality system, rho_n at the nodes, decaying remainder."""
    pool = (2.0, -1.5 + 1j, 3j, -2.5)
    for n in range(1, 6):
        result = multipoint_pade(n, pool[: n - 1], LEGENDRE_Y, LEGENDRE_SEGMENT)
        assert result.P.degree == n
        assert np.max(result.relative_residuals) < 1e-8
        for z in result.nodes:
            assert abs(result.transform(z)) < 1e-8
        direction = np.exp(0.7j)
        near, far = (abs(result.remainder(R * direction)) for R in (10.0, 100.0))
        assert far < 0.1 * near
        print("[PASS] multipoint Padé n = {}".format(n))


if __name__ == "__main__":
    tests = [
        test_legendre_moments,
        test_legendre_family_is_monic_legendre,
        test_determinant_convention_norms,
        test_hermite_basis_is_already_orthogonal,
        test_degenerate_minor_raises_with_index,
        test_heine_oracle,
        test_verify_orthogonality_detects_perturbation,
        test_cds_kernel_small_orders,
        test_cds_kernel_reproduces_and_traces,
        lambda: test_hermite_cover_band_and_cd_identity(0.0),
        lambda: test_hermite_cover_band_and_cd_identity(0.5),
        test_block_recurrence_and_cd_identity,
        test_block_recurrence_constant_and_violation,
        test_multipoint_pade,
        test_multipoint_pade_sweep,
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
