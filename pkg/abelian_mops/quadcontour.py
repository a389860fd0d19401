# -*- coding: utf-8 -*-
"""
quadcontour.py — integration paths with quadrature nodes and weights.

Weights already contain the dz/dparam Jacobian, so an integral is the dot
product of integrand values with the weights. Segments and rays use
Gauss–Legendre nodes; circles use the equispaced trapezoid rule.
"""

import logging
from dataclasses import dataclass, field

import anyio
import numpy as np
from scipy import special

from ._constants import (
    DEFAULT_CIRCLE_NODES,
    DEFAULT_RAY_NODES,
    DEFAULT_SEGMENT_NODES,
    MIN_NODE_COUNT,
    PARALLEL_MIN_NODES,
)
from ._errors import QuadratureError
from .settings import get_settings

logger = logging.getLogger(__name__)

CONTOUR_KINDS = ("segment", "ray", "circle")
RAY_ENDPOINTS = ("regular", "sqrt")


@dataclass(frozen=True, eq=False)
class ContourSpec:
    kind: str
    params: dict
    nodes: np.ndarray
    weights: np.ndarray = field(repr=False)

    @property
    def node_count(self):
        return int(self.nodes.size)


def _gauss_legendre(n):
    x, w = special.roots_legendre(n)
    return x, w


def _segment(params, n):
    a = complex(params["a"])
    b = complex(params["b"])
    x, w = _gauss_legendre(n)
    half = (b - a) / 2.0
    return (a + b) / 2.0 + half * x, half * w


def _ray(params, n):
    start = complex(params.get("start", 0.0))
    direction = complex(params.get("direction", 1.0))
    decay = float(params.get("decay", 1.0))
    endpoint = params.get("endpoint", "regular")
    if decay <= 0:
        raise ValueError("ray decay rate must be positive, got {}".format(decay))
    if direction == 0:
        raise ValueError("ray direction must be nonzero")
    if endpoint not in RAY_ENDPOINTS:
        raise ValueError("ray endpoint must be one of {}".format(RAY_ENDPOINTS))
    direction /= abs(direction)

    x, w = _gauss_legendre(n)
    u = (x + 1.0) / 2.0
    wu = w / 2.0
    p = -np.log(u) / decay
    dp = wu / (decay * u)
    if endpoint == "sqrt":
        return start + direction * p ** 2, direction * 2.0 * p * dp
    return start + direction * p, direction * dp


def _circle(params, n):
    center = complex(params.get("center", 0.0))
    radius = float(params["radius"])
    orientation = int(params.get("orientation", 1))
    if radius <= 0:
        raise ValueError("circle radius must be positive, got {}".format(radius))
    if orientation not in (1, -1):
        raise ValueError("circle orientation must be +1 or -1")
    theta = 2.0 * np.pi * np.arange(n) / n
    e = np.exp(1j * theta)
    return center + radius * e, orientation * 1j * radius * e * (2.0 * np.pi / n)


_BUILDERS = {"segment": (_segment, DEFAULT_SEGMENT_NODES),
             "ray": (_ray, DEFAULT_RAY_NODES),
             "circle": (_circle, DEFAULT_CIRCLE_NODES)}


def make_contour(kind, params, node_count=None):
    """Build a ContourSpec.

    segment: {"a", "b"}
    ray:     {"start", "direction", "decay", "endpoint"} with z = start + d*p
             ("regular") or z = start + d*p**2 ("sqrt"), u = exp(-decay*p)
    circle:  {"center", "radius", "orientation"}
    """
    if kind not in _BUILDERS:
        raise ValueError("unknown contour kind '{}'. Valid: {}".format(kind, CONTOUR_KINDS))
    builder, default_n = _BUILDERS[kind]
    n = int(node_count or default_n)
    if n < MIN_NODE_COUNT:
        raise ValueError("node_count must be ≥ {}, got {}".format(MIN_NODE_COUNT, n))
    nodes, weights = builder(params, n)
    nodes = np.asarray(nodes, dtype=complex)
    weights = np.asarray(weights, dtype=complex)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return ContourSpec(kind=kind, params=dict(params), nodes=nodes, weights=weights)


def join_contours(*contours):
    """Composite path: the integral over the union is the sum of the parts."""
    nodes = np.concatenate([c.nodes for c in contours])
    weights = np.concatenate([c.weights for c in contours])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return ContourSpec(kind="composite", params={"parts": [c.kind for c in contours]},
                       nodes=nodes, weights=weights)


def contour_from_config(cfg):
    """Contour from a config mapping such as {"kind":"circle","center":[re,im],"radius":r,"nodes":n}."""
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    n = cfg.pop("nodes", None)
    params = {}
    for key, value in cfg.items():
        if isinstance(value, (list, tuple)) and len(value) == 2:
            value = complex(value[0], value[1])
        params[key] = value
    return make_contour(kind, params, n)


async def _evaluate_chunks(f, chunks, threads):
    limiter = anyio.CapacityLimiter(threads)
    results = [None] * len(chunks)

    async def _one(i, chunk):
        results[i] = await anyio.to_thread.run_sync(f, chunk, limiter=limiter)

    async with anyio.create_task_group() as tg:
        for i, chunk in enumerate(chunks):
            tg.start_soon(_one, i, chunk)
    return results


def evaluate_on_nodes(f, nodes, threads=None):
    """f(nodes) with the node axis last; large node sets fan out over worker threads."""
    threads = threads or get_settings().threads
    nodes = np.asarray(nodes)
    if threads <= 1 or nodes.size < PARALLEL_MIN_NODES:
        return np.asarray(f(nodes), dtype=complex)
    chunks = np.array_split(nodes, threads)
    logger.debug("evaluating %d nodes in %d chunks", nodes.size, len(chunks))
    parts = anyio.run(_evaluate_chunks, f, chunks, threads)
    parts = [np.asarray(p, dtype=complex) for p in parts]
    parts = [np.broadcast_to(p, p.shape[:-1] + (c.size,)) for p, c in zip(parts, chunks)]
    return np.concatenate(parts, axis=-1)


def check_finite(values, nodes):
    finite = np.isfinite(values)
    if finite.all():
        return
    per_node = finite.reshape(-1, nodes.size).all(axis=0)
    idx = int(np.argmin(per_node))
    raise QuadratureError("integrand not finite at node {} (z = {})".format(idx, nodes[idx]),
                          node_index=idx, node=complex(nodes[idx]))


def integrate(f, contour, threads=None):
    """sum_i f(node_i) * weight_i; f may return extra leading axes."""
    values = evaluate_on_nodes(f, contour.nodes, threads)
    values = np.broadcast_to(values, values.shape[:-1] + (contour.node_count,))
    check_finite(values, contour.nodes)
    result = values @ contour.weights
    return complex(result) if np.ndim(result) == 0 else result


def cauchy_derivatives(f, center, radius, m, node_count=DEFAULT_CIRCLE_NODES):
    """Taylor coefficients f^(k)(center)/k!, k = 0..m-1, from a trapezoid circle.

    The result has shape (m,) + leading shape of f's output.
    """
    circle = make_contour("circle", {"center": center, "radius": radius}, node_count)
    values = evaluate_on_nodes(f, circle.nodes)
    values = np.broadcast_to(values, values.shape[:-1] + (circle.node_count,))
    check_finite(values, circle.nodes)
    shift = circle.nodes - complex(center)
    coeffs = [values @ (circle.weights / shift ** (k + 1)) / (2j * np.pi) for k in range(m)]
    return np.array(coeffs)
