# -*- coding: utf-8 -*-
"""
elliptic1.py — genus-one analytic core.

The curve y**2 = 4 (z - e1)(z - e2)(z - e3) is uniformized by the lattice
Z + tau Z through z = (2 omega1)**-2 wp(v) + shift and
y = (2 omega1)**-3 wp'(v). Half-differentials are reported as values in
the coordinate v.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import special

from ._constants import (
    CAUCHY_RADIUS_SCALE,
    LATTICE_POLE_TOL,
    NEWTON_MAX_ITER,
    NEWTON_TOL,
    PERIOD_NODES,
    SEED_GRID_SIZE,
    THETA_DIVISOR_TOL,
    THETA_TAIL_BUDGET,
)
from ._errors import BranchPointError, ConvergenceError, SingularPointError, ThetaDivisorError
from .quadcontour import cauchy_derivatives

logger = logging.getLogger(__name__)

RAY_DIRECTIONS = 16
DEGENERATE_CURVE_TOL = 1e-10
BRANCH_POINT_TOL = 1e-12
J = np.array([[0.0, 1.0], [1.0, 0.0]])


# ============================================================
# Theta function
# ============================================================

def _check_tau(tau):
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("Im tau must be positive, got {}".format(tau))
    return tau


def theta_terms(tau, v_imag_max=0.0):
    """Summation range |n| <= N for theta1 at the given tau and |Im v|."""
    tau = _check_tau(tau)
    n = int(np.ceil(np.sqrt(THETA_TAIL_BUDGET / (np.pi * tau.imag)))) + 2
    return n + int(np.ceil(abs(v_imag_max) / tau.imag))


def theta1(v, tau, derivs=0):
    """Jacobi theta1(v; tau) = sum_n exp(i pi tau (n+1/2)**2 + 2 i pi (n+1/2)(v+1/2)).

    derivs=0 returns the values; derivs=m returns an array whose leading
    axis holds the v-derivatives of orders 0..m.
    """
    tau = _check_tau(tau)
    v = np.asarray(v, dtype=complex)
    N = theta_terms(tau, float(np.max(np.abs(v.imag), initial=0.0)))
    k = np.arange(-N, N + 1) + 0.5
    phase = np.exp(1j * np.pi * tau * k ** 2 + 2j * np.pi * np.multiply.outer(v + 0.5, k))
    if derivs == 0:
        return phase.sum(axis=-1)
    factor = 2j * np.pi * k
    return np.array([(phase * factor ** m).sum(axis=-1) for m in range(derivs + 1)])


def theta1_prime0(tau):
    return complex(theta1(0.0, tau, derivs=1)[1])


def prime_form(v, w, tau):
    """Genus-one prime form in the coordinate v: theta1(v - w) / theta1'(0)."""
    return theta1(np.asarray(v) - np.asarray(w), tau) / theta1_prime0(tau)


# ============================================================
# Lattice helpers and the Weierstrass function
# ============================================================

def lattice_coordinates(v, tau):
    """Real (x, y) with v = x + y tau."""
    v = np.asarray(v, dtype=complex)
    y = v.imag / tau.imag
    return v.real - y * tau.real, y


def reduce_to_domain(v, tau):
    """Representative of v mod Z + tau Z with both lattice coordinates in [-1/2, 1/2)."""
    tau = complex(tau)
    x, y = lattice_coordinates(v, tau)
    x = x - np.floor(x + 0.5)
    y = y - np.floor(y + 0.5)
    return x + y * tau


def lattice_distance(v, tau):
    tau = complex(tau)
    u = reduce_to_domain(v, tau)
    shifts = np.array([m + n * tau for m in (-1, 0, 1) for n in (-1, 0, 1)])
    return np.min(np.abs(np.asarray(u)[..., None] - shifts), axis=-1)


def _theta_stack(v, tau):
    th = theta1(v, tau, derivs=3)
    d0 = theta1(0.0, tau, derivs=3)
    return th, complex(d0[3] / (3.0 * d0[1]))


def _wp_normalized(v, tau, derivative=True):
    v = np.asarray(v, dtype=complex)
    if np.any(lattice_distance(v, tau) < LATTICE_POLE_TOL):
        raise SingularPointError("pole of wp at a lattice point")
    u = reduce_to_domain(v, tau)
    (t0, t1, t2, t3), const = _theta_stack(u, tau)
    r1 = t1 / t0
    value = r1 ** 2 - t2 / t0 + const
    if not derivative:
        return value
    prime = -(t3 / t0 - 3.0 * t1 * t2 / t0 ** 2 + 2.0 * r1 ** 3)
    return value, prime


# ============================================================
# Curve data
# ============================================================

@dataclass(frozen=True)
class Character:
    """Unitary character with multipliers exp(2 i pi alpha) on v -> v+1 and exp(2 i pi beta) on v -> v+tau."""

    alpha: float
    beta: float

    def X(self, tau):
        return complex(self.beta - tau * self.alpha)

    @property
    def multipliers(self):
        return np.exp(2j * np.pi * self.alpha), np.exp(2j * np.pi * self.beta)

    def dual(self):
        return Character(-self.alpha, -self.beta)

    def check(self, tau):
        value = abs(complex(theta1(self.X(tau), tau))) / abs(theta1_prime0(tau))
        if value < THETA_DIVISOR_TOL:
            raise ThetaDivisorError("character on theta divisor: |theta1(X)| = {:.3e}".format(value))
        return value


@dataclass(frozen=True, eq=False)
class EllipticData:
    e1: complex
    e2: complex
    e3: complex
    omega1: complex
    omega2: complex
    tau: complex
    eta1: complex
    shift: complex = 0j
    seeds: np.ndarray = field(default=None, repr=False)

    @property
    def roots(self):
        return np.array([self.e1, self.e2, self.e3])

    @property
    def branch_points(self):
        """Branch points in the coordinate the curve was given in."""
        return self.roots + self.shift

    @property
    def scale(self):
        return (2.0 * self.omega1) ** -2

    @cached_property
    def g2(self):
        """Invariants of the unit lattice Z + tau Z."""
        e = self.roots / self.scale
        return complex(-4.0 * (e[0] * e[1] + e[0] * e[2] + e[1] * e[2]))

    @cached_property
    def g3(self):
        e = self.roots / self.scale
        return complex(4.0 * e[0] * e[1] * e[2])

    @property
    def curve_g2(self):
        return complex(-4.0 * (self.e1 * self.e2 + self.e1 * self.e3 + self.e2 * self.e3))

    @property
    def curve_g3(self):
        return complex(4.0 * self.e1 * self.e2 * self.e3)

    @property
    def half_periods(self):
        return np.array([0.5, self.tau / 2.0, (1.0 + self.tau) / 2.0])

    def z_of_v(self, v):
        return self.scale * _wp_normalized(v, self.tau, derivative=False) + self.shift

    def y_of_v(self, v):
        _, prime = _wp_normalized(v, self.tau)
        return (2.0 * self.omega1) ** -3 * prime

    def dz_dv(self, v):
        _, prime = _wp_normalized(v, self.tau)
        return self.scale * prime

    def curve_y(self, z):
        """Principal square root of 4 prod (z - e_i)."""
        z = np.asarray(z, dtype=complex) - self.shift
        return np.sqrt(4.0 * (z - self.e1) * (z - self.e2) * (z - self.e3))


def wp(v, data):
    """(wp(v), wp'(v)) on the unit lattice Z + tau Z."""
    value, prime = _wp_normalized(v, data.tau)
    if np.ndim(value) == 0:
        return complex(value), complex(prime)
    return value, prime


def _tracked_sqrt(values):
    """Square roots continued along the sequence (no sign jump between neighbours)."""
    roots = np.sqrt(values)
    for k in range(1, roots.size):
        if abs(roots[k] - roots[k - 1]) > abs(roots[k] + roots[k - 1]):
            roots[k] = -roots[k]
    return roots


def _distance_to_ray(point, start, direction):
    t = ((point - start) * np.conj(direction)).real
    if t <= 0:
        return abs(point - start)
    return abs(point - (start + t * direction))


def _ray_period(e, n):
    """omega1 = int_{e1}^{inf} dz/y along z = e1 + s**2 d, s = u/(1-u)."""
    e1, e2, e3 = e
    candidates = np.exp(2j * np.pi * np.arange(RAY_DIRECTIONS) / RAY_DIRECTIONS)
    d = max(candidates, key=lambda c: min(_distance_to_ray(e2, e1, c), _distance_to_ray(e3, e1, c)))
    x, w = special.roots_legendre(n)
    u = (x + 1.0) / 2.0
    s = u / (1.0 - u)
    q = (e1 - e2 + s * s * d) * (e1 - e3 + s * s * d)
    integrand = np.sqrt(d) / _tracked_sqrt(q) / (1.0 - u) ** 2
    return complex(np.sum(integrand * w / 2.0)), d


def _segment_period(e, k, n):
    """int_{e1}^{e_k} dz/y with z = e1 + (e_k - e1) sin(theta)**2, i.e. -i int dtheta / sqrt(z - e_other)."""
    e1 = e[0]
    ek = e[k]
    eo = e[3 - k]
    x, w = special.roots_legendre(n)
    theta = (x + 1.0) * np.pi / 4.0
    z = e1 + (ek - e1) * np.sin(theta) ** 2
    integrand = -1j / _tracked_sqrt(z - eo)
    return complex(np.sum(integrand * w) * np.pi / 4.0)


def _segment_clearance(e, k):
    a, b, o = e[0], e[k], e[3 - k]
    d = b - a
    t = np.clip(((o - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return abs(o - (a + t * d))


def curve_periods(e1, e2, e3, node_count=PERIOD_NODES):
    """Periods and modulus of y**2 = 4 (z-e1)(z-e2)(z-e3).

    The roots are shifted to sum to zero (shift recorded). tau is oriented
    into the upper half plane, chosen so that e2 sits at the half period
    tau/2, and moved by even integers so that -1 < Re tau <= 1.
    """
    roots = np.array([complex(e1), complex(e2), complex(e3)])
    scale = max(1.0, float(np.max(np.abs(roots))))
    gaps = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
    if min(gaps) < DEGENERATE_CURVE_TOL * scale:
        raise ValueError("degenerate curve: coincident branch points")
    shift = complex(roots.mean())
    e = roots - shift

    omega1, direction = _ray_period(e, node_count)
    k = max((1, 2), key=lambda j: _segment_clearance(e, j))
    second = _segment_period(e, k, node_count)
    tau = second / omega1
    if tau.imag < 0:
        tau = -tau
    if abs(tau.imag) < 1e-12:
        raise ValueError("degenerate curve: periods are collinear")

    target = e[1] * (2.0 * omega1) ** 2
    options = [tau, tau + 1.0]
    tau = min(options, key=lambda t: abs(_wp_normalized(t / 2.0, t, derivative=False) - target))
    tau -= 2.0 * np.floor((tau.real + 1.0) / 2.0)
    if tau.real <= -1.0:
        tau += 2.0

    d0 = theta1(0.0, tau, derivs=3)
    eta1 = complex(-d0[3] / (3.0 * d0[1]))
    data = EllipticData(e1=e[0], e2=e[1], e3=e[2], omega1=omega1, omega2=tau * omega1, tau=tau,
                        eta1=eta1, shift=shift, seeds=_seed_table(tau))
    logger.info("curve periods: omega1=%s tau=%s (ray direction %s, second cycle via e%d)",
                omega1, tau, direction, k + 1)
    return data


def half_period_residuals(data):
    """|z(half period_i) - e_i| for i = 1, 2, 3."""
    values = data.z_of_v(data.half_periods)
    return np.abs(values - data.branch_points)


# ============================================================
# Inverse of the uniformization
# ============================================================

def _seed_table(tau):
    g = (np.arange(SEED_GRID_SIZE) + 0.5) / SEED_GRID_SIZE - 0.5
    x, y = np.meshgrid(g, g, indexing="ij")
    v = (x + y * tau).ravel()
    return np.stack([v, _wp_normalized(v, tau, derivative=False)])


def wp_inverse(z, data, sheet=0):
    """v with z_of_v(v) = z; sheet 0 matches y_of_v(v) to the principal curve_y(z), sheet 1 is -v.

    Newton iteration on wp(v) - z in the unit lattice, seeded from a grid on
    the fundamental domain and from the pole expansion v ~ 1/sqrt(wp).
    """
    if sheet not in (0, 1):
        raise ValueError("sheet must be 0 or 1")
    z_in = np.asarray(z, dtype=complex)
    scalar = z_in.ndim == 0
    z_arr = np.atleast_1d(z_in).ravel()
    tau = data.tau
    target = (z_arr - data.shift) / data.scale
    out = np.empty_like(target)

    # branch points map to half periods exactly
    bp = data.branch_points
    zscale = np.maximum(1.0, np.abs(z_arr))
    hit = np.abs(z_arr[:, None] - bp[None, :]) <= BRANCH_POINT_TOL * zscale[:, None]
    on_branch = hit.any(axis=1)
    out[on_branch] = data.half_periods[np.argmax(hit[on_branch], axis=1)]

    todo = ~on_branch
    if np.any(todo):
        out[todo] = _newton_inverse(target[todo], tau, data.seeds)
        v = out[todo]
        y = data.y_of_v(v)
        principal = data.curve_y(z_arr[todo])
        flip = np.abs(y - principal) > np.abs(y + principal)
        out[todo] = np.where(flip, -v, v)

    if sheet == 1:
        out = -out
    out = np.where(on_branch, out, reduce_to_domain(out, tau))
    return complex(out[0]) if scalar else out.reshape(z_in.shape)


def _newton_inverse(target, tau, seeds):
    grid_v, grid_wp = seeds
    idx = np.argmin(np.abs(grid_wp[None, :] - target[:, None]), axis=1)
    v = grid_v[idx].copy()
    large = np.abs(target) > np.max(np.abs(grid_wp))
    if np.any(large):
        # wp(v) ~ 1/v**2 near the pole
        v[large] = 1.0 / np.sqrt(target[large])

    tol = NEWTON_TOL * np.maximum(1.0, np.abs(target))
    value, prime = _wp_normalized(v, tau)
    residual = np.abs(value - target)
    history = []
    for it in range(NEWTON_MAX_ITER):
        active = residual > tol
        history.append(float(np.max(residual)))
        if not active.any():
            break
        step = (value - target) / prime
        lam = np.ones(v.shape)
        for _ in range(30):
            trial = v - lam * step
            t_value = _wp_normalized(trial, tau, derivative=False)
            better = np.abs(t_value - target) < residual
            if np.all(better | ~active):
                break
            lam = np.where(better | ~active, lam, lam / 2.0)
        v = np.where(active, v - lam * step, v)
        value, prime = _wp_normalized(v, tau)
        residual = np.abs(value - target)
    else:
        if np.any(residual > 1e3 * tol):
            raise ConvergenceError("wp_inverse did not converge in {} iterations".format(NEWTON_MAX_ITER),
                                   diagnostics={"residual_history": history,
                                                "worst_target": complex(target[np.argmax(residual)])})
    logger.debug("wp_inverse: %d targets, %d iterations, residual %.2e",
                 target.size, len(history), float(np.max(residual, initial=0.0)))
    return v


# ============================================================
# Szegő kernel and section bases
# ============================================================

def szego1(v, w, X, data):
    """S(v, w) = e^{2 i pi alpha (v-w)} theta1'(0) theta1(v-w-X) / (theta1(X) theta1(w-v))."""
    tau = data.tau
    Xv = X.X(tau)
    th_X = complex(theta1(Xv, tau))
    if abs(th_X) / abs(theta1_prime0(tau)) < THETA_DIVISOR_TOL:
        raise ThetaDivisorError("character on theta divisor")
    d = np.asarray(v, dtype=complex) - np.asarray(w, dtype=complex)
    if np.any(lattice_distance(d, tau) < LATTICE_POLE_TOL):
        raise SingularPointError("szego kernel evaluated on the diagonal")
    return (np.exp(2j * np.pi * X.alpha * d) * theta1_prime0(tau) * theta1(d - Xv, tau)
            / (th_X * theta1(-d, tau)))


def szego_dual(v, w, X, data):
    """Kernel of the dual character with arguments exchanged: S_{-X}(w, v)."""
    return szego1(w, v, X.dual(), data)


def szego_dw(v, w, X, data):
    """dS/dw from the logarithmic derivatives of theta1."""
    tau = data.tau
    Xv = X.X(tau)
    d = np.asarray(v, dtype=complex) - np.asarray(w, dtype=complex)
    a = theta1(d - Xv, tau, derivs=1)
    b = theta1(-d, tau, derivs=1)
    log_dw = -2j * np.pi * X.alpha - a[1] / a[0] - b[1] / b[0]
    return szego1(v, w, X, data) * log_dw


def cauchy_radius(v, tau):
    base = CAUCHY_RADIUS_SCALE * min(1.0, tau.imag)
    near = float(np.min(lattice_distance(v, tau), initial=np.inf))
    return min(base, 0.5 * near)


def phi_values(v, X, data, count=2, dual=False):
    """Rows phi_0..phi_{count-1} at v (or the dual sections), from w-derivatives at w = 0.

    phi_l(v) = d^l/dw^l S(v, w) at w = 0; phi_l^vee(v) = -d^l/dw^l S(w, v) at w = 0.
    """
    v = np.asarray(v, dtype=complex)
    radius = cauchy_radius(v, data.tau)
    if dual:
        f = lambda w: szego1(w, v[..., None], X, data)
        sign = -1.0
    else:
        f = lambda w: szego1(v[..., None], w, X, data)
        sign = 1.0
    coeffs = cauchy_derivatives(f, 0.0, radius, count)
    factorials = special.factorial(np.arange(count)).reshape((count,) + (1,) * v.ndim)
    return sign * coeffs * factorials


def basis_sections1(X, data, count=2):
    """(phi_0, .., phi_{count-1}, phi_0^vee, .., phi_{count-1}^vee) as callables of v."""
    X.check(data.tau)

    def primal(ell):
        return lambda v: phi_values(v, X, data, ell + 1)[ell]

    def dual(ell):
        return lambda v: phi_values(v, X, data, ell + 1, dual=True)[ell]

    return tuple(primal(l) for l in range(count)) + tuple(dual(l) for l in range(count))


def phi_matrices_at(v, X, data):
    """(Phi, Phi_vee, Phi_inv) for sheets v and -v, stacked over the shape of v."""
    v = np.asarray(v, dtype=complex)
    both = np.stack([v, -v], axis=-1)
    P = phi_values(both, X, data, 2)
    Pv = phi_values(both, X, data, 2, dual=True)
    # P[l, ..., b] = phi_l(v_b)
    Phi = np.moveaxis(P, 0, -2)
    Phi_vee = np.moveaxis(Pv, 0, -1)
    dz = data.dz_dv(both)
    Phi_inv = -(2.0 * data.omega1) ** -2 * (Phi_vee / dz[..., :, None]) @ J
    return Phi, Phi_vee, Phi_inv


def build_Phi1(z, X, data):
    """Phi(z) = [[phi_0(v), phi_0(-v)], [phi_1(v), phi_1(-v)]], its dual and its inverse."""
    z = np.asarray(z, dtype=complex)
    bp = data.branch_points
    if np.any(np.abs(z[..., None] - bp) <= BRANCH_POINT_TOL * np.maximum(1.0, np.abs(z))[..., None]):
        raise BranchPointError("Phi is singular at a branch point")
    v = wp_inverse(z, data, 0)
    return phi_matrices_at(v, X, data)


def phi_phi_vee(Phi, Phi_vee, v, data):
    """Phi diag(1/Z'(v_b)) Phi_vee; constant -(2 omega1)**2 J."""
    v = np.asarray(v, dtype=complex)
    dz = data.dz_dv(np.stack([v, -v], axis=-1))
    return (Phi / dz[..., None, :]) @ Phi_vee


# ============================================================
# Fay identity
# ============================================================

def _fay_F(u, X, data):
    tau = data.tau
    Xv = X.X(tau)
    return np.exp(2j * np.pi * X.alpha * u) * theta1(Xv - u, tau) / theta1(Xv, tau)


def _distinct(points, tau):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if lattice_distance(points[i] - points[j], tau) < 1e-10:
                raise SingularPointError("fay points must be pairwise distinct mod the lattice")


def fay_check(p, q, X, data):
    """Relative residual of the genus-one Fay identity for K = len(p) in {1, 2}.

    det[S(p_a, q_b)] = F(sum p - sum q) prod_{a<b} E(p_a, p_b) E(q_b, q_a) / prod_{a,b} E(p_a, q_b)
    """
    p = [complex(x) for x in p]
    q = [complex(x) for x in q]
    if len(p) != len(q) or len(p) not in (1, 2):
        raise ValueError("fay_check supports K = 1 or 2 point pairs")
    tau = data.tau
    _distinct(p + q, tau)
    S = np.array([[szego1(a, b, X, data) for b in q] for a in p])
    lhs = complex(np.linalg.det(S))
    E = lambda a, b: complex(prime_form(a, b, tau))
    rhs = complex(_fay_F(sum(p) - sum(q), X, data))
    if len(p) == 2:
        rhs *= E(p[0], p[1]) * E(q[1], q[0])
    for a in p:
        for b in q:
            rhs /= E(a, b)
    if len(p) == 2:
        scale = abs(S[0, 0] * S[1, 1]) + abs(S[0, 1] * S[1, 0])
    else:
        scale = abs(S[0, 0])
    return abs(lhs - rhs) / scale


def fay_degenerate_check(p1, p2, q1, X, data):
    """Fay identity in the limit q2 -> q1, relative residual."""
    tau = data.tau
    _distinct([p1, p2, q1], tau)
    M = np.array([[szego1(p1, q1, X, data), szego1(p2, q1, X, data)],
                  [szego_dw(p1, q1, X, data), szego_dw(p2, q1, X, data)]], dtype=complex)
    lhs = complex(np.linalg.det(M))
    E = lambda a, b: complex(prime_form(a, b, tau))
    rhs = complex(_fay_F(p1 + p2 - 2 * q1, X, data)) * E(p1, p2) / (E(p1, q1) ** 2 * E(p2, q1) ** 2)
    scale = abs(M[0, 0] * M[1, 1]) + abs(M[0, 1] * M[1, 0])
    return abs(lhs - rhs) / scale
