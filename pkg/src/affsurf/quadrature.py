"""Deterministic and Monte Carlo quadrature on the unit sphere S^{n-1}.

The circle rule (n=2) and the Gauss-Legendre x azimuth product rule (n=3)
carry an exactness degree; the MC rule carries a sample count and seed.
``integrate`` reports an a-posteriori error estimate: the difference against
the next-finer rule for deterministic rules, the sample standard error for MC.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import EvaluationError, InputError


def sphere_area(n):
    """Surface measure of S^{n-1}."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def ball_volume(n):
    """Volume of the unit Euclidean ball in R^n."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


@dataclass(frozen=True)
class FunctionalValue:
    """A computed scalar plus an a-posteriori absolute error estimate."""

    value: float
    abs_error: float
    rule: str

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise EvaluationError(f"non-finite functional value {self.value!r}")
        if not (math.isfinite(self.abs_error) and self.abs_error >= 0.0):
            raise EvaluationError(f"bad error estimate {self.abs_error!r}")


class QuadratureRule:
    """Nodes and positive weights on S^{n-1} summing to the sphere area."""

    def __init__(self, dim, nodes, weights, kind, order, seed=None):
        nodes = np.ascontiguousarray(nodes, dtype=float)
        weights = np.ascontiguousarray(weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != dim or nodes.shape[0] != weights.shape[0]:
            raise InputError("node/weight shapes inconsistent with dimension")
        if np.any(weights <= 0.0):
            raise InputError("quadrature weights must be positive")
        total = math.fsum(weights)
        area = sphere_area(dim)
        if abs(total - area) > 1e-12 * area:
            raise InputError(f"weights sum to {total}, expected |S^{dim - 1}| = {area}")
        self.dim = dim
        self.nodes = nodes
        self.weights = weights
        self.kind = kind
        self.order = order
        self.seed = seed

    def describe(self):
        if self.kind == "mc":
            return f"mc(n={self.dim},N={self.order},seed={self.seed})"
        return f"{self.kind}({self.order})"

    @property
    def thetas(self):
        if self.dim != 2:
            raise InputError("thetas only defined for circle rules")
        return np.arctan2(self.nodes[:, 1], self.nodes[:, 0])

    def refined(self):
        """Next-finer rule of the same family (deterministic rules only)."""
        if self.kind == "circle":
            return rule_circle(2 * self.order)
        if self.kind == "sphere3":
            return rule_sphere3(2 * self.order)
        raise InputError("MC rules have no deterministic refinement")


def rule_circle(m):
    """m equally spaced angles; integrates trig polynomials of degree <= m-1."""
    if m < 4:
        raise InputError("circle rule needs m >= 4")
    th = 2.0 * math.pi * np.arange(m) / m
    nodes = np.column_stack([np.cos(th), np.sin(th)])
    weights = np.full(m, 2.0 * math.pi / m)
    return QuadratureRule(2, nodes, weights, "circle", m)


def rule_sphere3(level):
    """Gauss-Legendre in cos(polar) x uniform azimuth; exact to degree 2*level-1."""
    if level < 4:
        raise InputError("sphere rule needs level >= 4")
    z, wz = roots_legendre(level)
    m_az = 2 * level
    psi = 2.0 * math.pi * np.arange(m_az) / m_az
    rho = np.sqrt(1.0 - z**2)
    nodes = np.empty((level * m_az, 3))
    weights = np.empty(level * m_az)
    c, s = np.cos(psi), np.sin(psi)
    for i in range(level):
        rows = slice(i * m_az, (i + 1) * m_az)
        nodes[rows, 0] = rho[i] * c
        nodes[rows, 1] = rho[i] * s
        nodes[rows, 2] = z[i]
        weights[rows] = wz[i] * (2.0 * math.pi / m_az)
    return QuadratureRule(3, nodes, weights, "sphere3", level)


def rule_mc(n, N, seed):
    """N pseudo-random directions from normalized Gaussians, fixed seed."""
    if n < 2:
        raise InputError("MC rule needs n >= 2")
    if N < 1000:
        raise InputError("MC rule needs N >= 1000")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((N, n))
    norms = np.linalg.norm(g, axis=1)
    nodes = g / norms[:, None]
    weights = np.full(N, sphere_area(n) / N)
    return QuadratureRule(n, nodes, weights, "mc", N, seed=seed)


def default_rule(dim, size=None):
    """Desk-scale default: m=512 circle, level=64 sphere, N=200000 MC."""
    if dim == 2:
        return rule_circle(size or 512)
    if dim == 3:
        return rule_sphere3(size or 64)
    return rule_mc(dim, size or 200_000, seed=0)


def integrate(rule, g):
    """Weighted sum of g over the rule nodes plus an error estimate.

    g maps an (N, n) node array to N values.  Summation uses math.fsum so the
    result does not depend on any evaluation order.
    """
    vals = np.asarray(g(rule.nodes), dtype=float)
    if vals.shape != (rule.nodes.shape[0],):
        raise InputError("integrand returned wrong shape")
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(
            f"integrand not finite at node {i}, direction {rule.nodes[i]}"
        )
    value = math.fsum(rule.weights * vals)
    if rule.kind == "mc":
        area = sphere_area(rule.dim)
        mean = value / area
        var = math.fsum(rule.weights * (vals - mean) ** 2) / area
        err = area * math.sqrt(max(var, 0.0) / rule.order)
    else:
        fine = rule.refined()
        fvals = np.asarray(g(fine.nodes), dtype=float)
        err = abs(math.fsum(fine.weights * fvals) - value)
    return FunctionalValue(value, err, rule.describe())
