# -*- coding: utf-8 -*-
"""
classical.py — Hermite and Laguerre matrix families on the cover z = (t - c)**2.

Each 2 x 2 family is produced twice: by long division of the scalar
polynomials p_{2j}, p_{2j+1} in Z (cover0) and by the residue formulas at
t = infinity, evaluated as exact series coefficients. The two must agree.
"""

import logging
from dataclasses import dataclass
from math import factorial, sqrt, pi

import numpy as np
from scipy import special

from ._constants import ORTHOGONALITY_NODES
from ._errors import PolynomialError
from .cover0 import CoverG0, SectionBasisG0, scalar_to_matrix_poly, weight_matrix
from .polyalg import CPoly, MatPoly, MOPFamily
from .quadcontour import make_contour

logger = logging.getLogger(__name__)

CLASSICAL_KINDS = ("hermite", "laguerre")
PROJECTION_TOL = 1e-10
T_PLANE_HALF_WIDTH = 10.0

# Ray parameters of the half-line z >= support start (see make_contour)
HERMITE_RAY_DECAY = 1.0
LAGUERRE_RAY_DECAY = 1.0 / 16.0


@dataclass(frozen=True)
class ClassicalFamilySpec:
    kind: str
    c: float = 0.0
    alpha: float = 0.0
    N: int = 4

    def __post_init__(self):
        if self.kind not in CLASSICAL_KINDS:
            raise ValueError("kind must be one of {}, got '{}'".format(CLASSICAL_KINDS, self.kind))
        if self.N < 1:
            raise ValueError("N must be ≥ 1, got {}".format(self.N))
        if self.kind == "laguerre":
            if self.c > 0:
                raise ValueError("laguerre requires c ≤ 0, got {}".format(self.c))
            if self.alpha <= -1:
                raise ValueError("laguerre requires alpha > -1, got {}".format(self.alpha))

    @property
    def r(self):
        return 2


def classical_scalar(kind, n, alpha=0.0):
    """Physicists' Hermite h_n or generalized Laguerre L_n^alpha by three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be ≥ 0")
    t = CPoly.identity()
    if kind == "hermite":
        prev, cur = CPoly.constant(1.0), 2 * t
        if n == 0:
            return prev
        for k in range(1, n):
            prev, cur = cur, 2 * t * cur - 2 * k * prev
        return cur
    if kind == "laguerre":
        prev, cur = CPoly.constant(1.0), (1.0 + alpha) - t
        if n == 0:
            return prev
        for k in range(1, n):
            prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) * (1.0 / (k + 1))
        return cur
    raise ValueError("unknown kind '{}'".format(kind))


def scalar_norm(kind, n, alpha=0.0):
    """int p_n**2 Y dt over the real support."""
    if kind == "hermite":
        return 2.0 ** n * factorial(n) * sqrt(pi)
    return float(special.gamma(n + alpha + 1) / factorial(n))


def printed_norms(spec, j):
    return np.diag([scalar_norm(spec.kind, 2 * j, spec.alpha), scalar_norm(spec.kind, 2 * j + 1, spec.alpha)])


def hermite_reference(j, c):
    """Closed-form Hermite P_1, P_2, P_3 on z = (t - c)**2, entries as polynomials in z."""
    if j == 1:
        rows = [[[-4 * c**2 - 2, 4], [4 * c]],
                [[-16 * c**3, 16 * c], [12 * c**2 - 6, 4]]]
    elif j == 2:
        rows = [[[-48 * c**4 + 48 * c**2 + 12, 32 * c**2 - 48, 16], [32 * c**3 - 48 * c, 32 * c]],
                [[-128 * c**5 + 320 * c**3, -320 * c, 128 * c],
                 [80 * c**4 - 240 * c**2 + 60, 160 * c**2 - 80, 16]]]
    elif j == 3:
        rows = [[[-320 * c**6 + 1440 * c**4 - 720 * c**2 - 120, -320 * c**4 - 960 * c**2 + 720,
                  576 * c**2 - 480, 64],
                 [192 * c**5 - 960 * c**3 + 720 * c, 640 * c**3 - 960 * c, 192 * c]],
                [[-768 * c**7 + 5376 * c**5 - 6720 * c**3, -1792 * c**5 + 6720 * c,
                  1792 * c**3 - 5376 * c, 768 * c],
                 [448 * c**6 - 3360 * c**4 + 5040 * c**2 - 840, 2240 * c**4 - 6720 * c**2 + 1680,
                  1344 * c**2 - 672, 64]]]
    else:
        raise ValueError("closed forms exist for j = 1, 2, 3")
    return MatPoly([[CPoly(e) for e in row] for row in rows])


def classical_cover(spec):
    return CoverG0(CPoly([spec.c ** 2, -2.0 * spec.c, 1.0]))


def classical_basis(spec):
    return SectionBasisG0([classical_scalar(spec.kind, 0, spec.alpha), classical_scalar(spec.kind, 1, spec.alpha)])


def classical_sheet_mask(spec):
    """Hermite uses both preimages of the half-line, the second against z; Laguerre only t >= 0."""
    return (1.0, -1.0) if spec.kind == "hermite" else (1.0, 0.0)


def classical_Y(spec):
    if spec.kind == "hermite":
        return lambda t: np.exp(-np.asarray(t, dtype=complex) ** 2)
    alpha = spec.alpha
    return lambda t: np.asarray(t, dtype=complex) ** alpha * np.exp(-np.asarray(t, dtype=complex))


def support_start(spec):
    """Left end of the z-support: 0 for Hermite, c**2 for Laguerre."""
    return 0.0 if spec.kind == "hermite" else spec.c ** 2


# ============================================================
# Residue formulas
# ============================================================

def _series_inverse(c, order):
    """Power series 1/c(w) to w**order (c[0] != 0)."""
    out = np.zeros(order + 1, dtype=complex)
    out[0] = 1.0 / c[0]
    for k in range(1, order + 1):
        acc = sum(c[i] * out[k - i] for i in range(1, min(k, len(c) - 1) + 1))
        out[k] = -acc / c[0]
    return out


def _series_mul(a, b, order):
    return np.convolve(a, b)[: order + 1]


def residue_at_infinity(num, Z):
    """Polynomial R(z) = res_{s=inf} num(s) ds / (z - Z(s)).

    With w = 1/s and Zrev(w) = w**r Z(1/w), the coefficient of z**m is the
    w**1 coefficient of num(1/w) w**(r(m+1)) Zrev(w)**-(m+1).
    """
    r = Z.degree
    d = max(num.degree, 0)
    order = d + 1
    inv = _series_inverse(Z.coeffs[::-1], order)
    power = np.zeros(order + 1, dtype=complex)
    power[0] = 1.0
    coeffs = []
    m = 0
    while r * (m + 1) - d <= 1:
        power = _series_mul(power, inv, order)
        total = 0j
        for k in range(num.coeffs.size):
            idx = 1 - r * (m + 1) + k
            if 0 <= idx <= order:
                total += num.coeffs[k] * power[idx]
        coeffs.append(total)
        m += 1
    return CPoly(coeffs) if coeffs else CPoly.zero()


def residue_row(spec, p):
    """Row [f_0(z), f_1(z)] with p(t) = f_0(Z(t)) p_0(t) + f_1(Z(t)) p_1(t)."""
    cover = classical_cover(spec)
    s = CPoly.identity()
    if spec.kind == "hermite":
        first = residue_at_infinity(p * (s - 2.0 * spec.c), cover.Z)
        second = residue_at_infinity(p * 0.5, cover.Z)
    else:
        first = residue_at_infinity(p * (s + (1.0 + spec.alpha - 2.0 * spec.c)), cover.Z)
        second = -residue_at_infinity(p, cover.Z)
    return [first, second]


# ============================================================
# Families
# ============================================================

def classical_mop_family(spec):
    """P_0..P_{N-1}, built by projection and by residues, with printed norms."""
    cover = classical_cover(spec)
    basis = classical_basis(spec)
    P, worst = [], 0.0
    for j in range(spec.N):
        scalars = [classical_scalar(spec.kind, 2 * j + a, spec.alpha) for a in range(2)]
        projected = scalar_to_matrix_poly(cover, basis, scalars)
        residues = MatPoly([residue_row(spec, p) for p in scalars])
        gap = projected.max_distance(residues)
        scale = max(1.0, projected.norm())
        worst = max(worst, gap / scale)
        if gap > PROJECTION_TOL * scale:
            raise PolynomialError("projection mismatch at j = {}: {:.3e}".format(j, gap))
        P.append(projected)
    H = tuple(printed_norms(spec, j) for j in range(spec.N))
    logger.info("%s family with N=%d (c=%g, alpha=%g), projection gap %.2e",
                spec.kind, spec.N, spec.c, spec.alpha, worst)
    return MOPFamily(
        P=tuple(P),
        P_dual=tuple(p.transpose() for p in P),
        H=H,
        metadata={"kind": spec.kind, "c": spec.c, "alpha": spec.alpha, "projection_gap": worst},
    )


def classical_weight(spec, z):
    """Closed-form W(z) for real z beyond the support start; arrays give stacks."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= support_start(spec)):
        raise ValueError("off support: z must exceed {}".format(support_start(spec)))
    c = spec.c
    rz = np.sqrt(z)
    if spec.kind == "hermite":
        ch = np.cosh(2 * c * rz)[..., None, None]
        sh = np.sinh(2 * c * rz)[..., None, None]
        first = np.stack([np.stack([np.ones_like(z), 2 * c * np.ones_like(z)], -1),
                          np.stack([2 * c * np.ones_like(z), 4 * c * c + 4 * z], -1)], -2)
        second = np.array([[0.0, 1.0], [1.0, 4 * c]])
        W = (ch / rz[..., None, None] * first - 2.0 * sh * second) * np.exp(-z - c * c)[..., None, None]
    else:
        L = spec.alpha + 1 - c - rz
        ones = np.ones_like(z)
        block = np.stack([np.stack([ones, L], -1), np.stack([L, L * L], -1)], -2)
        W = block * ((c + rz) ** spec.alpha * np.exp(-c - rz) / (2 * rz))[..., None, None]
    return W.astype(complex)


def cover_weight(spec, z):
    """The same weight assembled sheet by sheet on the cover."""
    return weight_matrix(classical_cover(spec), classical_basis(spec), classical_Y(spec),
                         sheet_mask=classical_sheet_mask(spec), z=z)


def phi_phi_constant(spec):
    c, a = spec.c, spec.alpha
    if spec.kind == "hermite":
        return np.array([[0.0, 2.0], [2.0, 8.0 * c]], dtype=complex)
    return np.array([[0.0, -1.0], [-1.0, 2.0 * (c - 1.0 - a)]], dtype=complex)


def half_line_contour(spec, node_count=ORTHOGONALITY_NODES):
    decay = HERMITE_RAY_DECAY if spec.kind == "hermite" else LAGUERRE_RAY_DECAY
    return make_contour("ray", {"start": support_start(spec), "direction": 1.0, "decay": decay,
                                "endpoint": "sqrt"}, node_count)


def family_orthogonality(spec, family, node_count=ORTHOGONALITY_NODES, plane="z"):
    """Gram blocks G[j][k] = int P_j W P_k^t dz and the relative error against delta_jk H_j.

    plane="z" integrates the assembled weight along the half-line; plane="t"
    integrates the scalar products on the real t-line (Hermite only).
    """
    N = len(family)
    if plane == "z":
        contour = half_line_contour(spec, node_count)
        W = cover_weight(spec, contour.nodes.real)
        values = [p(contour.nodes) for p in family.P]
        duals = [p(contour.nodes) for p in family.P_dual]
        gram = np.array([[np.einsum("nab,nbc,ncd,n->ad", values[j], W, duals[k],
                                    contour.weights) for k in range(N)] for j in range(N)])
    elif plane == "t":
        if spec.kind != "hermite":
            raise ValueError("t-plane quadrature is implemented for Hermite only")
        line = make_contour("segment", {"a": -T_PLANE_HALF_WIDTH, "b": T_PLANE_HALF_WIDTH}, node_count)
        t = line.nodes
        zt = classical_cover(spec).Z(t)
        B = classical_basis(spec).evaluate(t)
        # scalars[j, a, n] = p_{2j+a}(t_n) recovered from P_j(Z(t)) times the basis
        scalars = np.array([np.einsum("nab,bn->an", family.P[j](zt), B) for j in range(N)])
        yw = classical_Y(spec)(t) * line.weights
        gram = np.einsum("jan,kbn,n->jkab", scalars, scalars, yw)
    else:
        raise ValueError("plane must be 'z' or 't'")
    errors = np.zeros((N, N))
    for j in range(N):
        for k in range(N):
            target = family.H[j] if j == k else np.zeros((2, 2))
            scale = np.sqrt(np.outer(np.diag(family.H[j]).real, np.diag(family.H[k]).real))
            errors[j, k] = float(np.max(np.abs(gram[j, k] - target) / scale))
    logger.debug("%s orthogonality (%s-plane): max relative error %.2e", spec.kind, plane, errors.max())
    return gram, errors
