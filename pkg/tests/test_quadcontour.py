# -*- coding: utf-8 -*-
"""Unit tests for quadcontour: segments, rays, circles and Cauchy coefficients."""
import sys
import os

import numpy as np
import pytest

# Add parent to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from abelian_mops._errors import QuadratureError
from abelian_mops.quadcontour import (
    cauchy_derivatives,
    contour_from_config,
    integrate,
    join_contours,
    make_contour,
)


def test_segment_weights():
    """Gauss–Legendre weights on [-1, 1] sum to the length."""
    seg = make_contour("segment", {"a": -1.0, "b": 1.0}, 20)
    assert abs(seg.weights.sum() - 2.0) < 1e-14
    assert abs(integrate(lambda z: z ** 2, seg) - 2.0 / 3.0) < 1e-14
    print("[PASS] segment weights")


def test_circle_residue():
    """Trapezoid rule on a circle: integral of 1 is 0, of 1/z is 2*pi*i."""
    circle = make_contour("circle", {"center": 0.0, "radius": 1.0}, 64)
    assert abs(circle.weights.sum()) < 1e-13
    assert abs(integrate(lambda z: 1.0 / z, circle) - 2j * np.pi) < 1e-13
    reverse = make_contour("circle", {"center": 0.0, "radius": 1.0, "orientation": -1}, 64)
    assert abs(integrate(lambda z: 1.0 / z, reverse) + 2j * np.pi) < 1e-13
    print("[PASS] circle residue")


def test_ray_exponential():
    """Integral of exp(-z) along the positive real axis from 0.25."""
    ray = make_contour("ray", {"start": 0.25, "direction": 1.0, "decay": 1.0}, 64)
    assert abs(integrate(lambda z: np.exp(-z), ray) - np.exp(-0.25)) < 1e-10
    print("[PASS] ray exponential")


def test_ray_sqrt_endpoint():
    """sqrt endpoint mapping integrates z**(-1/2) exp(-z) over (0, inf) to sqrt(pi)."""
    ray = make_contour("ray", {"start": 0.0, "direction": 1.0, "decay": 1.0, "endpoint": "sqrt"}, 160)
    value = integrate(lambda z: np.exp(-z) / np.sqrt(z), ray)
    assert abs(value - np.sqrt(np.pi)) < 1e-6
    print("[PASS] ray sqrt endpoint")


def test_gaussian_on_truncated_segment():
    """exp(-z**2) on [-8, 8] gives sqrt(pi)."""
    seg = make_contour("segment", {"a": -8.0, "b": 8.0}, 120)
    assert abs(integrate(lambda z: np.exp(-z ** 2), seg) - np.sqrt(np.pi)) < 1e-12
    print("[PASS] truncated Gaussian")


def test_matrix_valued_integrand():
    """Extra leading axes are kept."""
    seg = make_contour("segment", {"a": 0.0, "b": 1.0}, 16)
    value = integrate(lambda z: np.array([np.ones_like(z), z, z ** 2]), seg)
    assert np.allclose(value, [1.0, 0.5, 1.0 / 3.0], atol=1e-14)
    print("[PASS] matrix-valued integrand")


def test_join_and_config():
    """Composite contours add; config mappings accept [re, im] pairs."""
    left = make_contour("segment", {"a": -1.0, "b": 0.0}, 10)
    right = make_contour("segment", {"a": 0.0, "b": 1.0}, 10)
    both = join_contours(left, right)
    assert both.node_count == 20
    assert abs(integrate(lambda z: z ** 2, both) - 2.0 / 3.0) < 1e-14
    circle = contour_from_config({"kind": "circle", "center": [1.0, 0.5], "radius": 0.5, "nodes": 32})
    assert abs(circle.nodes.mean() - (1.0 + 0.5j)) < 1e-14
    print("[PASS] join and config")


def test_cauchy_derivatives():
    """Taylor coefficients of exp at 0 are 1, 1, 1/2."""
    coeffs = cauchy_derivatives(np.exp, 0.0, 1.0, 3, 64)
    assert np.allclose(coeffs, [1.0, 1.0, 0.5], atol=1e-13)
    print("[PASS] cauchy_derivatives")


def test_invalid_contours():
    """Bad parameters are ValueErrors, non-finite integrands QuadratureErrors."""
    with pytest.raises(ValueError):
        make_contour("spiral", {}, 10)
    with pytest.raises(ValueError):
        make_contour("circle", {"radius": -1.0}, 10)
    with pytest.raises(ValueError):
        make_contour("ray", {"decay": 0.0}, 10)
    with pytest.raises(ValueError):
        make_contour("segment", {"a": 0, "b": 1}, 1)
    seg = make_contour("segment", {"a": -1.0, "b": 1.0}, 11)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda z: np.where(z.real > 0.5, np.nan, z), seg)
    assert info.value.node.real > 0.5
    print("[PASS] invalid contours")


if __name__ == "__main__":
    tests = [
        test_segment_weights,
        test_circle_residue,
        test_ray_exponential,
        test_ray_sqrt_endpoint,
        test_gaussian_on_truncated_segment,
        test_matrix_valued_integrand,
        test_join_and_config,
        test_cauchy_derivatives,
        test_invalid_contours,
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
