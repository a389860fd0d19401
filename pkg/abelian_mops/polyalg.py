# -*- coding: utf-8 -*-
"""
polyalg.py — dense complex polynomials and matrix polynomials.

Coefficients are stored lowest degree first in complex double precision.
Trailing coefficients below TRIM_REL_TOL relative to the largest one are
dropped, so degree detection is stable under quadrature noise.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npoly
from scipy import linalg

from ._constants import TRIM_REL_TOL, FIT_MIN_EXTRA_SAMPLES
from ._errors import FitError, PolynomialError

logger = logging.getLogger(__name__)


def trim_coeffs(coeffs, rel_tol=TRIM_REL_TOL):
    """Drop negligible trailing coefficients; the zero polynomial becomes [0]."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0.0 or not np.isfinite(scale):
        return c[:1] * 0 if scale == 0.0 else c
    keep = np.nonzero(np.abs(c) >= rel_tol * scale)[0]
    return c[: keep[-1] + 1]


class CPoly:
    """Univariate polynomial with complex coefficients (index = power)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0.0,)):
        c = trim_coeffs(coeffs)
        c.setflags(write=False)
        self.coeffs = c

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls([0.0])

    @classmethod
    def constant(cls, value):
        return cls([value])

    @classmethod
    def monomial(cls, k, scale=1.0):
        c = np.zeros(k + 1, dtype=complex)
        c[k] = scale
        return cls(c)

    @classmethod
    def identity(cls):
        return cls([0.0, 1.0])

    @classmethod
    def from_roots(cls, roots):
        return cls(npoly.polyfromroots(np.asarray(roots, dtype=complex)))

    # -- basic properties ---------------------------------------------------
    @property
    def is_zero(self):
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return -1 if self.is_zero else self.coeffs.size - 1

    @property
    def leading(self):
        return complex(self.coeffs[-1])

    def coefficient(self, k):
        return complex(self.coeffs[k]) if 0 <= k < self.coeffs.size else 0j

    def norm(self):
        return float(np.max(np.abs(self.coeffs)))

    # -- evaluation and calculus --------------------------------------------
    def __call__(self, x):
        values = npoly.polyval(np.asarray(x, dtype=complex), self.coeffs)
        return complex(values) if np.ndim(values) == 0 else values

    def deriv(self, m=1):
        if self.coeffs.size <= m:
            return CPoly.zero()
        return CPoly(npoly.polyder(self.coeffs, m))

    def compose(self, inner):
        """self(inner(t)) by Horner's rule."""
        result = CPoly.zero()
        for c in self.coeffs[::-1]:
            result = result * inner + complex(c)
        return result

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, CPoly):
            return other
        if np.isscalar(other):
            return CPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CPoly(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return CPoly(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CPoly(npoly.polysub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CPoly(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        result = CPoly.constant(1.0)
        for _ in range(int(k)):
            result = result * self
        return result

    def allclose(self, other, rtol=1e-10):
        other = self._coerce(other)
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        scale = max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))
        return bool(np.max(np.abs(a - b)) <= rtol * scale)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __repr__(self):
        return "CPoly({})".format(np.array2string(self.coeffs, precision=6))

    # -- serialization --------------------------------------------------------
    def to_json(self):
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, pairs):
        return cls([complex(re, im) for re, im in pairs])


def poly_divmod(P, D):
    """Euclidean division P = Q*D + R with deg R < deg D."""
    if D.is_zero:
        raise PolynomialError("division by zero polynomial")
    if P.degree < D.degree:
        return CPoly.zero(), P
    q, r = npoly.polydiv(P.coeffs, D.coeffs)
    return CPoly(q), CPoly(r)


def tower_decompose(P, Z):
    """Write P = sum_j R_j * Z**j with deg R_j < deg Z (long division in Z)."""
    r = Z.degree
    if r < 1:
        raise PolynomialError("cover degree must be ≥ 1")
    if P.is_zero:
        return [CPoly.zero()]
    k = P.degree // r
    pieces = []
    rest = P
    for _ in range(k + 1):
        rest, remainder = poly_divmod(rest, Z)
        pieces.append(remainder)
    if not rest.is_zero:
        logger.warning("tower_decompose left a nonzero quotient of degree %d", rest.degree)
    return pieces


def fit_polynomial(samples, deg):
    """Least-squares polynomial of the given degree through (x, y) samples.

    Returns (CPoly, residual) with residual the largest absolute deviation
    at the samples. Fitting is done in the centred and scaled variable
    (x - c)/s and converted back by composition.
    """
    xs = np.array([complex(x) for x, _ in samples])
    ys = np.array([complex(y) for _, y in samples])
    if xs.size < deg + 1:
        raise FitError("underdetermined fit: {} samples for degree {}".format(xs.size, deg))
    if xs.size < deg + 1 + FIT_MIN_EXTRA_SAMPLES:
        logger.warning("fit of degree %d with %d samples is not over-determined", deg, xs.size)
    center = xs.mean()
    spread = float(np.max(np.abs(xs - center))) or 1.0
    u = (xs - center) / spread
    vander = npoly.polyvander(u, deg)
    coef, _, _, _ = linalg.lstsq(vander, ys)
    poly = CPoly(coef).compose(CPoly([-center / spread, 1.0 / spread]))
    residual = float(np.max(np.abs(poly(xs) - ys)))
    logger.debug("fit degree %d over %d samples: residual %.3e", deg, xs.size, residual)
    return poly, residual


class MatPoly:
    """r x r matrix whose entries are CPoly in one indeterminate."""

    __slots__ = ("entries", "r")

    def __init__(self, entries):
        rows = [[e if isinstance(e, CPoly) else CPoly([e]) for e in row] for row in entries]
        r = len(rows)
        if r == 0 or any(len(row) != r for row in rows):
            raise PolynomialError("MatPoly entries must form a nonempty square array")
        self.entries = tuple(tuple(row) for row in rows)
        self.r = r

    @classmethod
    def identity(cls, r):
        return cls([[1.0 if a == b else 0.0 for b in range(r)] for a in range(r)])

    @classmethod
    def from_coefficients(cls, stack):
        """stack[j] is the r x r coefficient matrix of z**j."""
        stack = np.asarray(stack, dtype=complex)
        r = stack.shape[1]
        return cls([[CPoly(stack[:, a, b]) for b in range(r)] for a in range(r)])

    @property
    def degree(self):
        return max(e.degree for row in self.entries for e in row)

    def coefficient(self, j):
        return np.array([[e.coefficient(j) for e in row] for row in self.entries])

    def leading_matrix(self):
        return self.coefficient(max(self.degree, 0))

    def coefficient_stack(self):
        return np.array([self.coefficient(j) for j in range(max(self.degree, 0) + 1)])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        values = np.empty(z.shape + (self.r, self.r), dtype=complex)
        for a, row in enumerate(self.entries):
            for b, e in enumerate(row):
                values[..., a, b] = e(z)
        return values

    def transpose(self):
        return MatPoly([[self.entries[b][a] for b in range(self.r)] for a in range(self.r)])

    def __matmul__(self, other):
        r = self.r
        return MatPoly([[sum((self.entries[a][k] * other.entries[k][b] for k in range(r)), CPoly.zero())
                         for b in range(r)] for a in range(r)])

    def max_distance(self, other):
        """Largest coefficient difference, entrywise."""
        worst = 0.0
        for row_a, row_b in zip(self.entries, other.entries):
            for a, b in zip(row_a, row_b):
                d = a - b
                worst = max(worst, 0.0 if d.is_zero else d.norm())
        return worst

    def norm(self):
        return max(e.norm() for row in self.entries for e in row)

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, data):
        return cls([[CPoly.from_json(e) for e in row] for row in data])

    def __repr__(self):
        return "MatPoly(r={}, degree={})".format(self.r, self.degree)


def fit_matrix_polynomial(points, values, deg):
    """Entrywise fit_polynomial of sampled r x r matrices; returns (MatPoly, residual)."""
    values = np.asarray(values, dtype=complex)
    r = values.shape[-1]
    entries = []
    residual = 0.0
    for a in range(r):
        row = []
        for b in range(r):
            poly, res = fit_polynomial(list(zip(points, values[:, a, b])), deg)
            row.append(poly)
            residual = max(residual, res)
        entries.append(row)
    return MatPoly(entries), residual


@dataclass(frozen=True)
class MOPFamily:
    """Matrix polynomials P_k, their duals, norm matrices H_k and provenance."""

    P: tuple
    P_dual: tuple
    H: tuple
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.P)

    def to_json(self):
        return {
            "P": [p.to_json() for p in self.P],
            "H": [np.asarray(h, dtype=complex) for h in self.H],
        }
