# -*- coding: utf-8 -*-
"""
biortho.py — scalar biorthogonalization over a section basis and a contour.

A basis is a sequence of vectorized callables phi_a(x). Everything is
computed from the bimoment matrix mu_ab = int Y phi_a phi_b^vee on the
quadrature nodes of one ContourSpec, so the engine does not care whether
the sections live on a genus-0 cover or on an elliptic curve.
"""

import logging
from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy import linalg

from ._constants import DEGENERACY_REL_TOL
from ._errors import BandStructureError, DegenerateMinorError, PolynomialError, SingularPointError
from .polyalg import CPoly
from .quadcontour import check_finite, evaluate_on_nodes

logger = logging.getLogger(__name__)

BAND_REL_TOL = 1e-8
PADE_COND_LIMIT = 1e13


def monomial_basis(N):
    return [CPoly.monomial(k) for k in range(N)]


def basis_values(basis, x):
    """Matrix (len(basis), len(x)) of basis functions at the points x."""
    x = np.asarray(x, dtype=complex)
    return np.array([np.broadcast_to(np.asarray(phi(x), dtype=complex), x.shape) for phi in basis])


def _weighted_measure(Y, contour):
    yw = np.asarray(Y(contour.nodes), dtype=complex) * contour.weights
    yw = np.broadcast_to(yw, contour.nodes.shape)
    check_finite(yw, contour.nodes)
    return yw


# ============================================================
# Bimoments
# ============================================================

@dataclass(frozen=True, eq=False)
class BimomentData:
    mu: np.ndarray
    D: np.ndarray
    scale: np.ndarray
    degenerate: tuple
    basis: tuple = field(repr=False, default=())
    dual_basis: tuple = field(repr=False, default=())

    @property
    def N(self):
        return self.mu.shape[0]

    @property
    def condition_number(self):
        return float(np.linalg.cond(self.mu))


def leading_minors(mu):
    """D_0 = 1, D_n = det mu[:n,:n] (LU), and the running scale each D_n is judged against.

    scale[n] = |D_{n-1}| times the larger norm of row and column n-1 of mu,
    so the test compares the pivot D_n / D_{n-1} with the size of its row.
    """
    N = mu.shape[0]
    D = np.ones(N + 1, dtype=complex)
    scale = np.ones(N + 1)
    for n in range(1, N + 1):
        D[n] = linalg.det(mu[:n, :n])
        line = max(np.linalg.norm(mu[n - 1, :]), np.linalg.norm(mu[:, n - 1]))
        scale[n] = abs(D[n - 1]) * float(line)
    return D, scale


def bimoments(basis, dual_basis, Y, contour, N=None):
    N = N or len(basis)
    basis = tuple(basis[:N])
    dual_basis = tuple(dual_basis[:N])
    F = evaluate_on_nodes(lambda x: basis_values(basis, x), contour.nodes)
    G = evaluate_on_nodes(lambda x: basis_values(dual_basis, x), contour.nodes)
    check_finite(F, contour.nodes)
    check_finite(G, contour.nodes)
    yw = _weighted_measure(Y, contour)
    mu = (F * yw) @ G.T
    D, scale = leading_minors(mu)
    degenerate = tuple(n for n in range(1, N + 1) if abs(D[n]) <= DEGENERACY_REL_TOL * scale[n])
    if degenerate:
        logger.warning("degenerate leading minors at n = %s", degenerate)
    logger.debug("bimoments N=%d over %d nodes", N, contour.node_count)
    return BimomentData(mu=mu, D=D, scale=scale, degenerate=degenerate,
                        basis=basis, dual_basis=dual_basis)


# ============================================================
# Biorthogonal family
# ============================================================

@dataclass(frozen=True, eq=False)
class BiorthFamily:
    """psi_n = sum_j coeffs[n, j] phi_j (monic: coeffs[n, n] = 1), same for duals.

    det_coeffs / det_dual_coeffs hold the determinant-formula sections,
    which equal D_n times the monic ones; h_det[n] = D_n D_{n+1}.
    """

    coeffs: np.ndarray
    dual_coeffs: np.ndarray
    h: np.ndarray
    det_coeffs: np.ndarray
    det_dual_coeffs: np.ndarray
    h_det: np.ndarray
    basis: tuple = field(repr=False, default=())
    dual_basis: tuple = field(repr=False, default=())

    def __len__(self):
        return self.h.size

    def values(self, x):
        return self.coeffs @ basis_values(self.basis[: len(self)], x)

    def dual_values(self, x):
        return self.dual_coeffs @ basis_values(self.dual_basis[: len(self)], x)

    def psi(self, n, x):
        return self.coeffs[n, : n + 1] @ basis_values(self.basis[: n + 1], x)

    def psi_dual(self, n, x):
        return self.dual_coeffs[n, : n + 1] @ basis_values(self.dual_basis[: n + 1], x)

    def collinearity_defects(self):
        """Per row: distance of the determinant coefficients from the monic line."""
        return np.array([_collinearity(self.det_coeffs[n, : n + 1], self.coeffs[n, : n + 1])
                         for n in range(len(self))])

    def truncated(self, n):
        return BiorthFamily(self.coeffs[:n, :n], self.dual_coeffs[:n, :n], self.h[:n],
                            self.det_coeffs[:n, :n], self.det_dual_coeffs[:n, :n], self.h_det[:n],
                            self.basis, self.dual_basis)


def _collinearity(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na = np.linalg.norm(a)
    if na == 0:
        return 0.0
    proj = (np.vdot(b, a) / np.vdot(b, b)) * b
    return float(np.linalg.norm(a - proj) / na)


def _determinant_rows(mu, n):
    """Cofactor coefficients of the bordered determinants for psi_n and psi_n^vee."""
    primal = np.zeros(n + 1, dtype=complex)
    dual = np.zeros(n + 1, dtype=complex)
    if n == 0:
        primal[0] = dual[0] = 1.0
        return primal, dual
    rows = mu[: n + 1, :n]
    cols = mu[:n, : n + 1]
    for j in range(n + 1):
        sign = (-1.0) ** (j + n)
        primal[j] = sign * linalg.det(np.delete(rows, j, axis=0))
        dual[j] = sign * linalg.det(np.delete(cols, j, axis=1))
    return primal, dual


def biorthogonalize(bm, allow_partial=False):
    """Monic Gram–Schmidt from the bimoments, cross-checked by cofactors.

    A vanishing minor D_n raises DegenerateMinorError carrying n and the
    family built so far; with allow_partial the partial family is returned.
    """
    mu = bm.mu
    N = bm.N
    coeffs = np.zeros((N, N), dtype=complex)
    dual_coeffs = np.zeros((N, N), dtype=complex)
    det_coeffs = np.zeros((N, N), dtype=complex)
    det_dual = np.zeros((N, N), dtype=complex)
    h = np.zeros(N, dtype=complex)

    def family(n):
        return BiorthFamily(coeffs[:n, :n].copy(), dual_coeffs[:n, :n].copy(), h[:n].copy(),
                            det_coeffs[:n, :n].copy(), det_dual[:n, :n].copy(),
                            (bm.D[:n] * bm.D[1 : n + 1]).copy(), bm.basis, bm.dual_basis)

    for n in range(N):
        if n + 1 in bm.degenerate:
            partial = family(n)
            if allow_partial:
                logger.warning("family truncated at %d: D_%d vanishes", n, n + 1)
                return partial
            raise DegenerateMinorError("leading minor D_{} vanishes".format(n + 1), index=n + 1, partial=partial)
        coeffs[n, n] = dual_coeffs[n, n] = 1.0
        if n:
            block = mu[:n, :n]
            coeffs[n, :n] = linalg.solve(block.T, -mu[n, :n])
            dual_coeffs[n, :n] = linalg.solve(block, -mu[:n, n])
        h[n] = mu[n, n] + coeffs[n, :n] @ mu[:n, n]
        det_coeffs[n, : n + 1], det_dual[n, : n + 1] = _determinant_rows(mu, n)

    result = family(N)
    logger.info("biorthogonal family of length %d, max collinearity defect %.2e",
                N, float(np.max(result.collinearity_defects(), initial=0.0)))
    return result


def heine_oracle(basis, dual_basis, Y, contour, n):
    """Coefficients of psi_n in the phi basis from the n-fold integral of determinants.

    psi_n(p) = (1/n!) int det[phi_a(p_b)]_{a,b=0..n} det[phi^vee_k(p_b)]_{k<n, b=1..n} prod Y(p_b),
    with p_0 = p, expanded along the p_0 column.
    """
    if n not in (1, 2):
        raise ValueError("oracle limited to n ≤ 2")
    F = basis_values(basis[: n + 1], contour.nodes)
    G = basis_values(dual_basis[:n], contour.nodes)
    yw = _weighted_measure(Y, contour)
    M = contour.node_count
    grid = np.array(np.meshgrid(*([np.arange(M)] * n), indexing="ij")).reshape(n, -1)
    weight = np.prod(yw[grid], axis=0)
    dual_det = np.linalg.det(np.transpose(G[:, grid], (2, 0, 1)))
    result = np.zeros(n + 1, dtype=complex)
    for a in range(n + 1):
        rows = [i for i in range(n + 1) if i != a]
        minor = np.linalg.det(np.transpose(F[rows][:, grid], (2, 0, 1)))
        result[a] = (-1.0) ** a * np.sum(minor * dual_det * weight) / factorial(n)
    return result


# ============================================================
# Verification
# ============================================================

@dataclass(frozen=True, eq=False)
class OrthogonalityReport:
    residuals: np.ndarray
    dual_residuals: np.ndarray
    gram: np.ndarray
    max_residual: float
    max_relative: float

    @property
    def max_off_diagonal(self):
        off = self.gram - np.diag(np.diag(self.gram))
        return float(np.max(np.abs(off), initial=0.0))


def verify_orthogonality(family, basis, dual_basis, Y, contour):
    """residual[n, j] = <psi_n, phi_j^vee> and dual_residual[n, j] = <phi_j, psi_n^vee> for j < n."""
    N = len(family)
    F = basis_values(basis[:N], contour.nodes)
    G = basis_values(dual_basis[:N], contour.nodes)
    yw = _weighted_measure(Y, contour)
    Psi = family.coeffs @ F
    Psi_dual = family.dual_coeffs @ G
    raw = (Psi * yw) @ G.T
    raw_dual = ((F * yw) @ Psi_dual.T).T
    gram = (Psi * yw) @ Psi_dual.T
    # Cauchy–Schwarz sizes of each pairing
    ayw = np.abs(yw)
    size_psi = np.sqrt((np.abs(Psi) ** 2) @ ayw)
    size_g = np.sqrt((np.abs(G) ** 2) @ ayw)
    size_f = np.sqrt((np.abs(F) ** 2) @ ayw)
    size_psi_dual = np.sqrt((np.abs(Psi_dual) ** 2) @ ayw)
    lower = np.tril(np.ones((N, N), dtype=bool), k=-1)
    residuals = np.where(lower, raw, 0.0)
    dual_residuals = np.where(lower, raw_dual, 0.0)
    rel = np.where(lower, np.abs(raw) / np.outer(size_psi, size_g), 0.0)
    rel_dual = np.where(lower, np.abs(raw_dual) / np.outer(size_psi_dual, size_f), 0.0)
    return OrthogonalityReport(
        residuals=residuals,
        dual_residuals=dual_residuals,
        gram=gram,
        max_residual=float(max(np.max(np.abs(residuals), initial=0.0),
                               np.max(np.abs(dual_residuals), initial=0.0))),
        max_relative=float(max(np.max(rel, initial=0.0), np.max(rel_dual, initial=0.0))),
    )


def cds_kernel(family, n, p, q):
    """K_n(p, q) = sum_{j<n} psi_j(p) psi_j^vee(q) / h_j (broadcast over p, q)."""
    if n > len(family):
        raise ValueError("kernel order {} exceeds family length {}".format(n, len(family)))
    if n == 0:
        return np.zeros(np.broadcast(np.asarray(p), np.asarray(q)).shape, dtype=complex)
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    P = family.values(p.ravel())[:n].reshape((n,) + p.shape)
    Q = family.dual_values(q.ravel())[:n].reshape((n,) + q.shape)
    h = family.h[:n].reshape((n,) + (1,) * max(p.ndim, q.ndim))
    total = np.sum(P * Q / h, axis=0)
    return complex(total) if np.ndim(total) == 0 else total


# ============================================================
# Multiplication by Z: band matrix and CD identity
# ============================================================

@dataclass(frozen=True, eq=False)
class BlockRecurrence:
    """Z psi_n = sum_m Zmat[n, m] psi_m with G[n, m] = <Z psi_n, psi_m^vee>."""

    Zmat: np.ndarray
    G: np.ndarray
    h: np.ndarray
    r: int
    band_violation: float
    family: BiorthFamily = field(repr=False)
    Zfunc: object = field(repr=False)

    @property
    def block_count(self):
        return self.Zmat.shape[0] // self.r

    def _block(self, k):
        return slice(k * self.r, (k + 1) * self.r)

    def A(self, k):
        """Coupling of block k-1 to block k (k >= 1)."""
        return self.Zmat[self._block(k - 1), self._block(k)]

    def B(self, k):
        return self.Zmat[self._block(k), self._block(k)]

    def C(self, k):
        """Coupling of block k+1 back to block k."""
        return self.Zmat[self._block(k + 1), self._block(k)]

    def H(self, k):
        return np.diag(self.h[self._block(k)])


def block_recurrence(family, Zfunc, contour, Y, r, band_tol=BAND_REL_TOL):
    N = len(family)
    nodes = contour.nodes
    yw = _weighted_measure(Y, contour)
    Psi = family.values(nodes)
    Psi_dual = family.dual_values(nodes)
    zvals = np.broadcast_to(np.asarray(Zfunc(nodes), dtype=complex), nodes.shape)
    G = (Psi * zvals * yw) @ Psi_dual.T
    Zmat = G / family.h[None, :]

    ayw = np.abs(yw)
    size_z = np.sqrt((np.abs(Psi * zvals) ** 2) @ ayw)
    size_dual = np.sqrt((np.abs(Psi_dual) ** 2) @ ayw)
    idx = np.arange(N)
    outside = np.abs(idx[:, None] - idx[None, :]) > r
    rel = np.where(outside, np.abs(G) / np.outer(size_z, size_dual), 0.0)
    violation = float(np.max(rel, initial=0.0))
    if violation > band_tol:
        raise BandStructureError("band structure violated: off-band entry {:.3e} (r = {})".format(violation, r))
    logger.debug("block recurrence N=%d r=%d off-band %.2e", N, r, violation)
    return BlockRecurrence(Zmat=Zmat, G=G, h=family.h.copy(), r=r, band_violation=violation,
                           family=family, Zfunc=Zfunc)


def cd_identity_terms(blocks, ell, p, q):
    """(K_{l r}(p, q), boundary expression) of the block Christoffel–Darboux identity.

    K_{l r}(p,q) (Z(p) - Z(q)) = Psi^vee_{l-1}(q) H_{l-1}^{-1} A_l Psi_l(p)
                                - Psi^vee_l(q) H_l^{-1} C_{l-1} Psi_{l-1}(p)
    """
    family = blocks.family
    r = blocks.r
    zp = complex(blocks.Zfunc(np.asarray(p)))
    zq = complex(blocks.Zfunc(np.asarray(q)))
    scale = max(1.0, abs(zp), abs(zq))
    if abs(zp - zq) < 1e-12 * scale:
        raise SingularPointError("points in same fiber; identity degenerate")
    if ell == 0:
        return 0j, 0j
    if (ell + 1) * r > len(family):
        raise ValueError("family too short for l = {} (need {} members)".format(ell, (ell + 1) * r))
    kernel = cds_kernel(family, ell * r, p, q)
    psi_p = family.values(np.array([p]))[:, 0]
    psi_q = family.dual_values(np.array([q]))[:, 0]
    prev, cur = blocks._block(ell - 1), blocks._block(ell)
    first = psi_q[prev] @ np.linalg.solve(blocks.H(ell - 1), blocks.A(ell) @ psi_p[cur])
    second = psi_q[cur] @ np.linalg.solve(blocks.H(ell), blocks.C(ell - 1) @ psi_p[prev])
    return kernel, (first - second) / (zp - zq)


def cd_identity_residual(family, blocks, ell, p, q):
    if blocks.family is not family:
        blocks = BlockRecurrence(blocks.Zmat, blocks.G, blocks.h, blocks.r, blocks.band_violation,
                                 family, blocks.Zfunc)
    kernel, rhs = cd_identity_terms(blocks, ell, p, q)
    return float(abs(kernel - rhs))


# ============================================================
# Multipoint Padé
# ============================================================

@dataclass(frozen=True, eq=False)
class PadeResult:
    P: CPoly
    Q: CPoly
    residuals: np.ndarray
    relative_residuals: np.ndarray
    nodes: tuple
    contour: object = field(repr=False)
    measure: np.ndarray = field(repr=False)

    def node_product(self, w):
        out = np.ones_like(np.asarray(w, dtype=complex))
        for z in self.nodes:
            out = out * (w - z)
        return out

    def stieltjes(self, z):
        """int Y(w) dw / (z - w)."""
        w = self.contour.nodes
        return complex(np.sum(self.measure / (z - w)))

    def remainder(self, z):
        """Q(z)/P(z) - int Y(w) dw/(z - w)."""
        return self.Q(z) / self.P(z) - self.stieltjes(z)

    def transform(self, z):
        """rho_n(z) = int P(w) Y(w) dw / ((z - w) prod_l (w - z_l))."""
        w = self.contour.nodes
        return complex(np.sum(self.measure * self.P(w) / ((z - w) * self.node_product(w))))


def multipoint_pade(n, nodes, Y, contour):
    """Monic P_n orthogonal to 1/Pi and 1/((w - z_k) Pi), Pi = prod (w - z_l).

    With no nodes this is ordinary orthogonality against w^k, k < n.
    """
    nodes = tuple(complex(z) for z in (nodes or ()))
    if n < 1:
        raise ValueError("multipoint_pade needs n ≥ 1")
    if nodes and len(nodes) != n - 1:
        raise ValueError("expected {} nodes for n = {}, got {}".format(n - 1, n, len(nodes)))
    w = contour.nodes
    if nodes and min(np.min(np.abs(w - z)) for z in nodes) < 1e-8:
        raise ValueError("interpolation nodes must lie off the contour")
    measure = _weighted_measure(Y, contour)

    if nodes:
        Pi = np.ones_like(w)
        for z in nodes:
            Pi = Pi * (w - z)
        tests = [1.0 / Pi] + [1.0 / ((w - z) * Pi) for z in nodes]
    else:
        tests = [w ** k for k in range(n)]
    tests = np.array(tests)
    powers = np.array([w ** j for j in range(n + 1)])
    system = (tests * measure) @ powers.T
    A, b = system[:, :n], -system[:, n]
    if np.linalg.cond(A) > PADE_COND_LIMIT:
        raise PolynomialError("degenerate node configuration")
    c = linalg.solve(A, b)
    P = CPoly(np.append(c, 1.0))

    moments = powers[:n] @ measure
    p = np.append(c, 1.0)
    Q = CPoly([sum(p[k] * moments[k - 1 - i] for k in range(i + 1, n + 1)) for i in range(n)])

    Pw = P(w)
    residuals = (tests * measure) @ Pw
    sizes = np.sqrt((np.abs(tests) ** 2) @ np.abs(measure)) * np.sqrt((np.abs(Pw) ** 2) @ np.abs(measure))
    logger.debug("multipoint Padé n=%d nodes=%s max residual %.2e", n, nodes, float(np.max(np.abs(residuals))))
    return PadeResult(P=P, Q=Q, residuals=residuals, relative_residuals=np.abs(residuals) / sizes,
                      nodes=nodes, contour=contour, measure=measure)
