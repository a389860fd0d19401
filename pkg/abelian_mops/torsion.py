# -*- coding: utf-8 -*-
"""
torsion.py — finite matrix orthogonality from 2R-torsion points of an elliptic curve.

The scalar weight Y(v) = e^{2 i pi a v} prod_j theta1(v + v_j) / theta1(v - v_j)
is elliptic when sum v_j = (b + a tau)/2. For a torsion label all v_j equal
v_* = (b + a tau)/(2R). The matrix data (sqrt W, P_R, P_{R-1}) are
assembled from Phi of elliptic1 and checked by polynomial fits and contour
integrals around the poles z_j.
"""

import logging
from dataclasses import dataclass, field
from math import factorial, gcd

import numpy as np

from ._constants import (
    DEFAULT_CIRCLE_NODES,
    PAIRING_RADIUS_SCALE,
    RANK_REL_TOL,
)
from ._errors import BranchPointError, FitError, SingularPointError
from .biortho import bimoments, basis_values
from .elliptic1 import (
    Character,
    basis_sections1,
    curve_periods,
    lattice_distance,
    phi_matrices_at,
    reduce_to_domain,
    theta1,
    wp_inverse,
)
from .polyalg import CPoly, fit_matrix_polynomial
from .quadcontour import join_contours, make_contour

logger = logging.getLogger(__name__)

POLE_SUM_TOL = 1e-10
PR_FIT_TOL = 1e-8
PR_MINUS1_FIT_TOL = 1e-6
RING_SCALE = 0.25
SAMPLE_RING_FACTOR = 2.0


# ============================================================
# Torsion data
# ============================================================

@dataclass(frozen=True)
class TorsionPoint:
    a: int
    b: int
    v: complex
    z: complex
    prime: bool


@dataclass(frozen=True, eq=False)
class TorsionSpec:
    """A torsion label (a, b) with R, or explicit poles v_j with sum v_j = (b + a tau)/2."""

    curve: object = field(repr=False)
    R: int
    a: int
    b: int
    poles: tuple = ()
    character: Character = None

    def __post_init__(self):
        if self.R < 2:
            raise ValueError("R must be ≥ 2, got {}".format(self.R))
        tau = self.curve.tau
        target = (self.b + self.a * tau) / 2.0
        if self.poles:
            poles = tuple(complex(v) for v in self.poles)
            if len(poles) != self.R:
                raise ValueError("expected {} poles, got {}".format(self.R, len(poles)))
            if abs(sum(poles) - target) > POLE_SUM_TOL * max(1.0, abs(target)):
                raise ValueError("poles must sum to (b + a tau)/2 = {}".format(target))
        else:
            if self.a % self.R == 0 and self.b % self.R == 0:
                raise ValueError("torsion label ({}, {}) is a period or half-period".format(self.a, self.b))
            poles = (target / self.R,) * self.R
        object.__setattr__(self, "poles", poles)
        if self.character is None:
            object.__setattr__(self, "character", Character(self.a / self.R, -self.b / self.R))
        self.character.check(tau)

    @property
    def v_star(self):
        return self.poles[0]

    @property
    def distinct_poles(self):
        out = []
        for v in self.poles:
            if all(lattice_distance(v - u, self.curve.tau) > 1e-12 for u in out):
                out.append(v)
        return out

    @property
    def z_poles(self):
        return [complex(self.curve.z_of_v(v)) for v in self.distinct_poles]

    @property
    def q_R(self):
        return CPoly.from_roots([complex(self.curve.z_of_v(v)) for v in self.poles])

    @property
    def prime(self):
        return gcd(gcd(self.a, self.b), 2 * self.R) == 1

    @classmethod
    def from_label(cls, curve, R, a, b):
        return cls(curve=curve, R=R, a=a, b=b)


def torsion_points(curve, R):
    """Classes of 2R-torsion points that are not half periods, modulo v -> -v (2R**2 - 2 of them)."""
    if R < 2:
        raise ValueError("R must be ≥ 2")
    m = 2 * R
    seen = set()
    points = []
    for a in range(m):
        for b in range(m):
            if a % R == 0 and b % R == 0:
                continue
            partner = ((-a) % m, (-b) % m)
            label = min((a, b), partner)
            if label in seen:
                continue
            seen.add(label)
            v = (label[1] + label[0] * curve.tau) / m
            points.append(TorsionPoint(a=label[0], b=label[1], v=complex(v),
                                       z=complex(curve.z_of_v(v)),
                                       prime=gcd(gcd(label[0], label[1]), m) == 1))
    points.sort(key=lambda p: (p.a, p.b))
    logger.info("found %d torsion classes for R=%d", len(points), R)
    return points


def torsion_weight(spec):
    """Y(v) = e^{2 i pi a v} prod_j theta1(v + v_j) / theta1(v - v_j); Y(-v) Y(v) = 1."""
    tau = spec.curve.tau
    poles = np.array(spec.poles)

    def Y(v):
        v = reduce_to_domain(np.asarray(v, dtype=complex), tau)
        if np.any(lattice_distance(v[..., None] - poles, tau) < 1e-14):
            raise SingularPointError("weight evaluated on its pole divisor")
        out = np.exp(2j * np.pi * spec.a * v)
        for vj in poles:
            out = out * theta1(v + vj, tau) / theta1(v - vj, tau)
        return out

    return Y


# ============================================================
# Torsion determinant
# ============================================================

def _series_sqrt(c, order, sign=1.0):
    s = np.zeros(order + 1, dtype=complex)
    s[0] = sign * np.sqrt(c[0])
    for k in range(1, order + 1):
        acc = sum(s[i] * s[k - i] for i in range(1, k))
        ck = c[k] if k < len(c) else 0.0
        s[k] = (ck - acc) / (2.0 * s[0])
    return s


def curve_roots(curve):
    if hasattr(curve, "branch_points"):
        return np.asarray(curve.branch_points, dtype=complex)
    return np.asarray(curve, dtype=complex)


def torsion_condition_residual(curve, z_star, R, sheet=0):
    """(R-1) x (R-1) determinant of derivatives of y = sqrt(prod (z - e_i)) at z_*, normalized.

    Row l = 1..R-1, column k = 0..R-2 holds (R+l)!/(R+l-k)! y^{(R+l-k)}(z_*).
    The value is divided by the product of row norms of the typical entry
    sizes (R+l)! |y| / rho**(R+l-k), rho the distance to the nearest branch point.
    """
    roots = curve_roots(curve)
    z_star = complex(z_star)
    rho = float(np.min(np.abs(roots - z_star)))
    if rho < 1e-12 * max(1.0, abs(z_star)):
        raise BranchPointError("torsion condition at a branch point")
    cubic = CPoly.from_roots(roots).compose(CPoly([z_star, 1.0]))
    order = 2 * R + 4
    s = _series_sqrt(cubic.coeffs, order, 1.0 if sheet == 0 else -1.0)
    y = [factorial(m) * s[m] for m in range(order + 1)]
    size = R - 1
    M = np.zeros((size, size), dtype=complex)
    typical = np.zeros((size, size))
    for row, ell in enumerate(range(1, R)):
        for k in range(size):
            n = R + ell - k
            M[row, k] = factorial(R + ell) / factorial(n) * y[n]
            typical[row, k] = factorial(R + ell) * abs(s[0]) / rho ** n
    scale = float(np.prod(np.linalg.norm(typical, axis=1)))
    value = complex(np.linalg.det(M)) / scale
    logger.debug("torsion condition at z=%s R=%d: %.3e", z_star, R, abs(value))
    return value


# ============================================================
# sqrt W and the matrix polynomials
# ============================================================

def _check_regular(spec, z):
    z = np.asarray(z, dtype=complex)
    bp = spec.curve.branch_points
    if np.any(np.abs(z[..., None] - bp) <= 1e-12 * np.maximum(1.0, np.abs(z))[..., None]):
        raise BranchPointError("evaluate away from branch points")
    zp = np.array(spec.z_poles)
    if np.any(np.abs(z[..., None] - zp) <= 1e-12 * np.maximum(1.0, np.abs(z))[..., None]):
        raise SingularPointError("sqrtW has a pole at z = {}".format(zp))


def _sheet_values(spec, z, swap=False):
    v = wp_inverse(z, spec.curve, 0)
    if swap:
        v = -v
    Phi, _, Phi_inv = phi_matrices_at(v, spec.character, spec.curve)
    Y = torsion_weight(spec)
    return v, Phi, Phi_inv, Y(v), Y(-v)


def sqrtW(spec, z, swap=False, inverse=False):
    """Phi(z) diag(Y(v), Y(-v)) Phi(z)^{-1}; inverse=True swaps the diagonal (Y(-v) = 1/Y(v))."""
    _check_regular(spec, z)
    _, Phi, Phi_inv, y0, y1 = _sheet_values(spec, z, swap)
    diag = np.stack([y1, y0], axis=-1) if inverse else np.stack([y0, y1], axis=-1)
    return (Phi * diag[..., None, :]) @ Phi_inv


def _ring_geometry(spec):
    """(center, eps) per distinct pole z_j with eps clear of branch points and other poles."""
    bp = spec.curve.branch_points
    zp = spec.z_poles
    rings = []
    for j, zj in enumerate(zp):
        d = float(np.min(np.abs(bp - zj)))
        others = [abs(zj - zk) for k, zk in enumerate(zp) if k != j]
        if others:
            d = min(d, min(others))
        rings.append((zj, RING_SCALE * d))
    return rings


def pole_contour(spec, node_count=DEFAULT_CIRCLE_NODES, factor=1.0):
    parts = [make_contour("circle", {"center": c, "radius": factor * eps}, node_count)
             for c, eps in _ring_geometry(spec)]
    return parts[0] if len(parts) == 1 else join_contours(*parts)


def _sample_points(spec, count, factor):
    per_ring = []
    for c, eps in _ring_geometry(spec):
        theta = 2.0 * np.pi * (np.arange(count) + 0.5) / count
        per_ring.append(c + factor * eps * np.exp(1j * theta))
    return np.concatenate(per_ring)


def _fit(points, values, degree, tol, what):
    P, residual = fit_matrix_polynomial(points, values, degree)
    scale = float(np.max(np.abs(values))) or 1.0
    relative = residual / scale
    if relative > tol:
        raise FitError("{} is not a polynomial: torsion data inconsistent (fit residual {:.3e})".format(what, relative))
    return P, relative


def torsion_PR(spec, sample_count=None):
    """P_R(z) = q_R(z) sqrt(W^{-1})(z) fitted at degree R; returns (MatPoly, relative residual)."""
    count = sample_count or 2 * spec.R + 8
    points = _sample_points(spec, count, SAMPLE_RING_FACTOR)
    values = spec.q_R(points)[:, None, None] * sqrtW(spec, points, inverse=True)
    P, residual = _fit(points, values, spec.R, PR_FIT_TOL, "P_R")
    logger.info("P_R of degree %d, fit residual %.2e", P.degree, residual)
    return P, residual


def _pole_sheet_outer(spec, w):
    """Phi[:, 0] Phi^{-1}[0, :] with column 0 on the sheet where Y has its poles."""
    tau = spec.curve.tau
    v = wp_inverse(w, spec.curve, 0)
    poles = np.array(spec.distinct_poles)
    dist_plus = np.min(lattice_distance(v[..., None] - poles, tau), axis=-1)
    dist_minus = np.min(lattice_distance(-v[..., None] - poles, tau), axis=-1)
    v = np.where(dist_plus <= dist_minus, v, -v)
    Phi, _, Phi_inv = phi_matrices_at(v, spec.character, spec.curve)
    return Phi[..., :, 0, None] * Phi_inv[..., None, 0, :]


def torsion_PRminus1(spec, node_count=DEFAULT_CIRCLE_NODES, sample_count=None):
    """P_{R-1}(z) = q_R(z) [(1/2 i pi) oint G(w) dw / (q_R(w)**2 (w - z))] sqrt(W^{-1})(z).

    G(w) = Phi E_11 Phi^{-1}; the w-contour circles the poles at radius eps
    and z is sampled at radius 2 eps. Returns (MatPoly, relative residual).
    """
    contour = pole_contour(spec, node_count)
    w = contour.nodes
    G = _pole_sheet_outer(spec, w)
    qw = spec.q_R(w)
    kernel = G * (contour.weights / qw ** 2)[:, None, None] / (2j * np.pi)

    count = sample_count or 2 * spec.R + 8
    points = _sample_points(spec, count, SAMPLE_RING_FACTOR)
    inner = np.einsum("nab,sn->sab", kernel, 1.0 / (w[None, :] - points[:, None]))
    values = spec.q_R(points)[:, None, None] * (inner @ sqrtW(spec, points, inverse=True))
    P, residual = _fit(points, values, spec.R - 1, PR_MINUS1_FIT_TOL, "P_{R-1}")
    logger.info("P_{R-1} of degree %d, fit residual %.2e", P.degree, residual)
    return P, residual


def finite_orthogonality(spec, P, powers, node_count=DEFAULT_CIRCLE_NODES):
    """Relative size of oint P(z) W(z) z**l dz around the poles, one value per l in powers."""
    contour = pole_contour(spec, node_count)
    z = contour.nodes
    half = sqrtW(spec, z)
    PW = P(z) @ half @ half
    out = []
    for ell in powers:
        integrand = PW * (z ** ell)[:, None, None]
        total = np.einsum("nab,n->ab", integrand, contour.weights)
        scale = float(np.max(np.einsum("nab,n->ab", np.abs(integrand), np.abs(contour.weights))))
        out.append(float(np.max(np.abs(total))) / scale)
    return np.array(out)


# ============================================================
# Scalar pairing around the poles in the v-plane
# ============================================================

def _v_radius(spec):
    tau = spec.curve.tau
    poles = spec.distinct_poles
    specials = [0.0] + [-u for u in poles]
    eps = []
    for i, v in enumerate(poles):
        d = [float(lattice_distance(v - s, tau)) for s in specials]
        d += [float(lattice_distance(v - u, tau)) for k, u in enumerate(poles) if k != i]
        d = [x for x in d if x > 1e-12]
        eps.append(PAIRING_RADIUS_SCALE * min(d))
    return eps


def pairing_contour(spec, node_count=DEFAULT_CIRCLE_NODES, sheet=0):
    """Circles around v_j (sheet 0) or around -v_j (sheet 1)."""
    sign = 1.0 if sheet == 0 else -1.0
    parts = [make_contour("circle", {"center": sign * v, "radius": eps}, node_count)
             for v, eps in zip(spec.distinct_poles, _v_radius(spec))]
    return parts[0] if len(parts) == 1 else join_contours(*parts)


def pairing_matrix(spec, N, sheet=0, node_count=DEFAULT_CIRCLE_NODES):
    """mu_ab = oint phi_a phi_b^vee Y**2 dv, a, b < N."""
    sections = basis_sections1(spec.character, spec.curve, count=N)
    Y = torsion_weight(spec)
    contour = pairing_contour(spec, node_count, sheet)
    return bimoments(sections[:N], sections[N:], lambda v: Y(v) ** 2, contour, N)


def numerical_rank(mu, rel_tol=RANK_REL_TOL):
    rows = np.linalg.norm(mu, axis=1)
    cols = np.linalg.norm(mu, axis=0)
    rows[rows == 0] = 1.0
    cols[cols == 0] = 1.0
    sv = np.linalg.svd(mu / np.outer(rows, cols), compute_uv=False)
    return int(np.sum(sv > rel_tol * sv[0])) if sv.size and sv[0] > 0 else 0


def finite_pairing_rank(spec, N=None):
    N = N or 2 * spec.R + 4
    if N < 2 * spec.R + 2:
        raise ValueError("N must be ≥ 2R + 2 = {}".format(2 * spec.R + 2))
    rank = numerical_rank(pairing_matrix(spec, N).mu)
    logger.info("pairing rank %d for R=%d, N=%d", rank, spec.R, N)
    return rank


def pairing_kernel_residuals(spec, N=None, node_count=DEFAULT_CIRCLE_NODES):
    """Relative pairings of psi_{2R+l} = q_R(z)/Y phi_l (l = 0, 1) with phi_j^vee, j < N."""
    N = N or 2 * spec.R + 4
    sections = basis_sections1(spec.character, spec.curve, count=N)
    Y = torsion_weight(spec)
    contour = pairing_contour(spec, node_count)
    v = contour.nodes
    duals = basis_values(sections[N:], v)
    y = Y(v)
    qz = spec.q_R(spec.curve.z_of_v(v))
    out = []
    for ell in (0, 1):
        psi = qz / y * sections[ell](v)
        integrand = psi * duals * y ** 2
        total = integrand @ contour.weights
        scale = float(np.max(np.abs(integrand) @ np.abs(contour.weights)))
        out.append(float(np.max(np.abs(total))) / scale)
    return np.array(out)


def second_sheet_pairing(spec, N=None):
    """max |mu| on the circles around -v_j relative to max |mu| around v_j."""
    N = N or 2 * spec.R + 4
    first = pairing_matrix(spec, N, sheet=0).mu
    second = pairing_matrix(spec, N, sheet=1).mu
    return float(np.max(np.abs(second)) / np.max(np.abs(first)))


# ============================================================
# Duits–Kuijlaars weight
# ============================================================

@dataclass(frozen=True)
class DKReport:
    alpha: float
    det_residual: float
    charpoly_residual: float
    zero_order: float
    pole_order: float
    divisor_orders: dict


DK_DIVISOR = {
    "pole_at_minus1_sheet_plus_c": -1.0,
    "zero_at_minus1_sheet_minus_c": 1.0,
    "pole_at_0": -1.0,
    "zero_at_infinity": 1.0,
}


def dk_roots(alpha):
    return np.array([0.0, -alpha ** 2, -alpha ** -2], dtype=complex)


def dk_quarter_periods(alpha):
    """z-values of the quarter periods: e_i ± sqrt((e_i - e_j)(e_i - e_k)) over the roots."""
    e = dk_roots(alpha)
    out = []
    for i in range(3):
        j, k = [m for m in range(3) if m != i]
        root = np.sqrt((e[i] - e[j]) * (e[i] - e[k]))
        out += [e[i] + root, e[i] - root]
    return np.array(out)


def dk_curve(alpha):
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if abs(alpha - 1.0) < 1e-12:
        raise ValueError("degenerate (coincident branch points)")
    return curve_periods(*dk_roots(alpha))


def dk_W1_numerator(alpha, z):
    """(z - 1)**2 W_1(z): the polynomial part of the DK weight, with det equal to (z - 1)**4."""
    z = np.asarray(z, dtype=complex)
    a = alpha
    N = np.empty(z.shape + (2, 2), dtype=complex)
    N[..., 0, 0] = (z + 1) ** 2 + 4 * a ** 2 * z
    N[..., 0, 1] = 2 * a * (a + 1 / a) * (z + 1)
    N[..., 1, 0] = 2 / a * (a + 1 / a) * z * (z + 1)
    N[..., 1, 1] = (z + 1) ** 2 + 4 * a ** -2 * z
    return N


def dk_W1(alpha, z):
    z = np.asarray(z, dtype=complex)
    return dk_W1_numerator(alpha, z) / ((z - 1) ** 2)[..., None, None]


def dk_det_residual(alpha, z):
    """|det N - (z-1)**4| / (|N00 N11| + |N01 N10|) for the numerator N of W_1."""
    z = np.asarray(z, dtype=complex)
    N = dk_W1_numerator(alpha, z)
    ad = N[..., 0, 0] * N[..., 1, 1]
    bc = N[..., 0, 1] * N[..., 1, 0]
    return np.abs(ad - bc - (z - 1) ** 4) / (np.abs(ad) + np.abs(bc))


def dk_y(alpha, z, near=None):
    """A root of y**2 = z (z + alpha**2)(z + alpha**-2); the one nearest `near` if given."""
    z = np.asarray(z, dtype=complex)
    y = np.sqrt(z * (z + alpha ** 2) * (z + alpha ** -2))
    if near is None:
        return y
    return np.where(np.abs(y - near) <= np.abs(y + near), y, -y)


def dk_eigenvalue(alpha, z, y):
    a = alpha
    z = np.asarray(z, dtype=complex)
    return (2 * (a ** 4 + 1) * z + a ** 2 * (z + 1) ** 2 - 2 * a * (a ** 2 + 1) * y) / (a ** 2 * (z - 1) ** 2)


def dk_divisor_function(alpha, z, y):
    c = (alpha ** 2 - 1) / alpha
    z = np.asarray(z, dtype=complex)
    return (z * c - y) / (z * (z + 1))


def _slope(fn, deltas):
    values = np.abs(fn(deltas))
    return float(np.polyfit(np.log(deltas), np.log(values), 1)[0])


def dk_fixture(alpha, samples=20, seed=0):
    """Checks on the Duits–Kuijlaars weight W_1 and its spectral curve."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if abs(alpha - 1.0) < 1e-12:
        raise ValueError("degenerate (coincident branch points)")
    rng = np.random.default_rng(seed)
    z = rng.uniform(-3, 3, samples) + 1j * rng.uniform(-3, 3, samples)

    det_residual = float(np.max(dk_det_residual(alpha, z)))

    W = dk_W1(alpha, z)
    worst = 0.0
    for sign in (1.0, -1.0):
        y = sign * dk_y(alpha, z)
        Y1 = dk_eigenvalue(alpha, z, y)
        tr = W[..., 0, 0] + W[..., 1, 1]
        det = np.linalg.det(W)
        res = np.abs(Y1 ** 2 - tr * Y1 + det) / (np.abs(Y1) ** 2 + np.abs(tr * Y1) + np.abs(det))
        worst = max(worst, float(np.max(res)))

    y_star = (1 + alpha ** 2) / alpha
    deltas = np.geomspace(1e-3, 1e-2, 8)
    direction = np.exp(0.3j)
    zero_side = lambda d: dk_eigenvalue(alpha, 1 + d * direction, dk_y(alpha, 1 + d * direction, y_star))
    pole_side = lambda d: dk_eigenvalue(alpha, 1 + d * direction, dk_y(alpha, 1 + d * direction, -y_star))

    c = (alpha ** 2 - 1) / alpha
    f = lambda zz, near: dk_divisor_function(alpha, zz, dk_y(alpha, zz, near))
    # orders in local uniformizers; z = s**2 at the branch points 0 and infinity
    divisor_orders = {
        "pole_at_minus1_sheet_plus_c": _slope(lambda d: f(-1 + d * direction, c), deltas),
        "zero_at_minus1_sheet_minus_c": _slope(lambda d: f(-1 + d * direction, -c), deltas),
        "pole_at_0": 2.0 * _slope(lambda d: f(d * direction, None), deltas),
        "zero_at_infinity": 2.0 * _slope(lambda d: f(direction / d, None), deltas),
    }
    report = DKReport(
        alpha=alpha,
        det_residual=det_residual,
        charpoly_residual=worst,
        zero_order=_slope(zero_side, deltas),
        pole_order=_slope(pole_side, deltas),
        divisor_orders=divisor_orders,
    )
    logger.info("DK fixture alpha=%g: det %.2e, charpoly %.2e, orders %.3f / %.3f",
                alpha, det_residual, worst, report.zero_order, report.pole_order)
    return report


def dk_torsion_spec(alpha, R=2, curve=None):
    """Torsion data whose pole sits at z = 1 on the DK curve (a quarter period, scaled for even R)."""
    if R % 2:
        raise ValueError("z = 1 is a quarter period; R must be even")
    curve = curve or dk_curve(alpha)
    quarter = min(torsion_points(curve, 2), key=lambda p: abs(p.z - 1.0))
    if abs(quarter.z - 1.0) > 1e-6:
        raise ValueError("no quarter period at z = 1 (closest {})".format(quarter.z))
    k = R // 2
    return TorsionSpec.from_label(curve, R, quarter.a * k, quarter.b * k)
