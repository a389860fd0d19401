# -*- coding: utf-8 -*-
"""
cover0.py — genus-0 branched covers z = Z(t) with Z a monic polynomial.

Sheets over z are the r roots of Z(t) - z. The matrix weight is assembled
from the section basis evaluated on every sheet, with the Jacobian
dt = dz / Z'(t) absorbed, so no square-root branch enters W or P_k.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.polynomial.polynomial as npoly
from scipy import linalg, optimize

from ._constants import BASIS_DET_TOL
from ._errors import BranchPointError, PolynomialError
from .polyalg import CPoly, MatPoly, tower_decompose
from .quadcontour import make_contour

logger = logging.getLogger(__name__)

BRANCH_RULES = ("principal",)
CRITICAL_REL_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class CoverG0:
    Z: CPoly

    def __post_init__(self):
        if self.Z.degree < 1:
            raise PolynomialError("cover degree must be ≥ 1")
        if abs(self.Z.leading - 1.0) > 1e-12:
            raise ValueError("cover polynomial must be monic, leading coefficient {}".format(self.Z.leading))

    @property
    def r(self):
        return self.Z.degree

    @cached_property
    def dZ(self):
        return self.Z.deriv()

    @cached_property
    def critical_points(self):
        if self.dZ.degree < 1:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(self.dZ.coeffs)

    @cached_property
    def critical_values(self):
        return np.array([self.Z(t) for t in self.critical_points], dtype=complex)

    def is_critical(self, z):
        cv = self.critical_values
        if cv.size == 0:
            return False
        return bool(np.any(np.abs(cv - z) <= CRITICAL_REL_TOL * np.maximum(1.0, np.abs(cv))))


@dataclass(frozen=True, eq=False)
class SectionBasisG0:
    """Polynomials p_0..p_{r-1}; the sections are p_l(t) sqrt(dt)."""

    polys: tuple

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))

    def __len__(self):
        return len(self.polys)

    def coefficient_matrix(self, r=None):
        r = r or len(self.polys)
        B = np.zeros((len(self.polys), r), dtype=complex)
        for j, p in enumerate(self.polys):
            if p.degree >= r:
                raise PolynomialError("basis polynomial {} has degree {} ≥ {}".format(j, p.degree, r))
            B[j, : p.coeffs.size] = p.coeffs
        return B

    def evaluate(self, t):
        t = np.asarray(t, dtype=complex)
        return np.array([p(t) for p in self.polys])


def _ordered(roots):
    scale = max(1.0, float(np.max(np.abs(roots))))
    re = np.round(roots.real / scale, 12)
    im = np.round(roots.imag / scale, 12)
    return roots[np.lexsort((-im, -re))]


def sheets(cover, z):
    """The r roots of Z(t) = z, sorted by descending (real, imag)."""
    c = np.array(cover.Z.coeffs, dtype=complex)
    c[0] -= z
    return _ordered(npoly.polyroots(c))


def track_sheets(cover, path):
    """Sheet labels continued along sampled path points by nearest-neighbour matching.

    Row k holds the roots over path[k]; row 0 uses the deterministic order.
    """
    path = np.asarray(path, dtype=complex)
    rows = [sheets(cover, path[0])]
    for z in path[1:]:
        new = sheets(cover, z)
        cost = np.abs(rows[-1][:, None] - new[None, :])
        _, cols = optimize.linear_sum_assignment(cost)
        rows.append(new[cols])
    return np.array(rows)


def _require_regular(cover, z):
    if cover.is_critical(z):
        raise BranchPointError("evaluate away from branch points (z = {})".format(z))


def weight_matrix(cover, basis, Y, sheet_mask=None, z=0.0, dual_basis=None):
    """W(z)_{ac} = sum_b m_b p_a(t_b) q_c(t_b) Y(t_b) / Z'(t_b).

    sheet_mask holds one orientation multiplier per sheet: 1 carries the
    measure along increasing z, -1 against it, 0 not at all. Array z gives
    an array of matrices.
    """
    dual_basis = dual_basis or basis
    mask = np.ones(cover.r) if sheet_mask is None else np.asarray(sheet_mask, dtype=float)
    if mask.size != cover.r:
        raise ValueError("sheet_mask needs {} entries, got {}".format(cover.r, mask.size))
    zs = np.asarray(z, dtype=complex)
    if zs.ndim:
        return np.array([weight_matrix(cover, basis, Y, mask, zz, dual_basis) for zz in zs.ravel()]
                        ).reshape(zs.shape + (len(basis), len(dual_basis)))
    _require_regular(cover, complex(zs))
    t = sheets(cover, complex(zs))
    active = np.nonzero(mask)[0]
    tb = t[active]
    factor = mask[active] * np.asarray(Y(tb), dtype=complex) / cover.dZ(tb)
    left = basis.evaluate(tb)
    right = dual_basis.evaluate(tb)
    return (left * factor) @ right.T


def build_Phi(cover, basis, z, branch_rule="principal"):
    """Phi_{ab} = p_a(t_b) / sqrt(Z'(t_b)), principal square root.

    Branch dependent column by column; Phi Lambda Phi^t is not.
    """
    if branch_rule not in BRANCH_RULES:
        raise ValueError("unknown branch_rule '{}'".format(branch_rule))
    _require_regular(cover, z)
    t = sheets(cover, z)
    return basis.evaluate(t) / np.sqrt(cover.dZ(t))[None, :]


def phi_phi_vee(cover, basis, dual_basis, z):
    """Phi(z) Phi_vee(z)^t written without square roots: sum_b p_a q_c / Z'(t_b)."""
    _require_regular(cover, z)
    t = sheets(cover, z)
    return (basis.evaluate(t) / cover.dZ(t)) @ dual_basis.evaluate(t).T


def scalar_to_matrix_poly(cover, basis, scalar_polys):
    """Rows f_a(z) with p_{kr+a}(t) = sum_l f_{a,l}(Z(t)) basis_l(t)."""
    r = cover.r
    if len(basis) != r or len(scalar_polys) != r:
        raise ValueError("need {} basis and scalar polynomials".format(r))
    B = basis.coefficient_matrix(r)
    scale = max(1.0, float(np.max(np.abs(B)))) ** r
    if abs(linalg.det(B)) < BASIS_DET_TOL * scale:
        raise PolynomialError("basis not spanning")
    rows = []
    for p in scalar_polys:
        pieces = tower_decompose(p, cover.Z)
        R = np.zeros((len(pieces), r), dtype=complex)
        for j, piece in enumerate(pieces):
            R[j, : piece.coeffs.size] = piece.coeffs
        # g[j, l]: coefficient of basis_l in R_j
        g = linalg.solve(B.T, R.T).T
        rows.append([CPoly(g[:, l]) for l in range(r)])
    return MatPoly(rows)


def reconstruct_scalar(cover, basis, matpoly, row):
    """sum_l f_{row,l}(Z(t)) basis_l(t) as a polynomial in t."""
    total = CPoly.zero()
    for f, p in zip(matpoly.entries[row], basis.polys):
        total = total + f.compose(cover.Z) * p
    return total


@dataclass(frozen=True)
class CriticalRatioReport:
    critical_value: complex
    radius: float
    max_abs: float
    single_valued_defect: float
    pole_coefficients: tuple
    center_value: complex

    @property
    def pole_defect(self):
        return max((abs(a) * self.radius ** (k + 1) for k, a in enumerate(self.pole_coefficients)), default=0.0)


def critical_ratio_check(cover, basis, sections, critical_value, radius=None, node_count=128,
                         laurent_orders=3):
    """F(z) = det[s_j(t_a)] / det[p_j(t_a)] on a circle around a critical value.

    Reports max |F|, the defect between the start and the end of the tracked
    loop, and the negative Laurent coefficients of F at the critical value;
    all small certifies that the section determinant is divisible by det Phi.
    """
    c = complex(critical_value)
    if radius is None:
        others = [abs(v - c) for v in cover.critical_values if abs(v - c) > 1e-12]
        radius = 0.25 * min(others) if others else 0.1
    circle = make_contour("circle", {"center": c, "radius": radius}, node_count)
    path = np.append(circle.nodes, circle.nodes[0])
    tracked = track_sheets(cover, path)

    def ratio(t):
        num = np.array([np.asarray(s(t), dtype=complex) for s in sections])
        den = basis.evaluate(t)
        return linalg.det(num) / linalg.det(den)

    F = np.array([ratio(t) for t in tracked])
    values, closing = F[:-1], F[-1]
    shift = circle.nodes - c
    poles = tuple(complex(values @ (circle.weights * shift ** (k - 1)) / (2j * np.pi))
                  for k in range(1, laurent_orders + 1))
    center_value = complex(values @ (circle.weights / shift) / (2j * np.pi))
    report = CriticalRatioReport(
        critical_value=c,
        radius=float(radius),
        max_abs=float(np.max(np.abs(values))),
        single_valued_defect=float(abs(closing - values[0])),
        pole_coefficients=poles,
        center_value=center_value,
    )
    logger.debug("critical ratio at %s: max %.3e defect %.3e", c, report.max_abs, report.single_valued_defect)
    return report
