"""Illumination surface bodies K^{f,s}.

Given a convex body K and a positive boundary weight f, the body K^{f,s}
collects the points whose lit part of the boundary carries f-weighted
measure at most s.  This module evaluates lit measures, memberships, the
per-ray boundary scale, the volume difference |K^{f,s}| - |K| by the radial
formula, and the small-s scaling limit of that difference.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bodies import Ball, Polygon2D, unit_vector
from .errors import InputError, UnboundedBodyError, UnsupportedBodyError
from .quadrature import (
    FunctionalValue,
    ball_volume,
    default_rule,
    integrate,
    rule_mc,
)

CAP_FACTOR = 1e6
DEFAULT_MC_SAMPLES = 200_000


def scaling_constant(n):
    """c_n = 2 |B^{n-1}|^{2/(n-1)}: 8 in the plane, 2 pi in space."""
    return 2.0 * ball_volume(n - 1) ** (2.0 / (n - 1.0))


# ---------------------------------------------------------------------------
# boundary weights
# ---------------------------------------------------------------------------

class WeightField:
    """Positive weight on the boundary of a host body."""

    name = "weight"

    def validate_host(self, body):
        pass

    def lower_bound(self, body):
        th = 2.0 * math.pi * np.arange(1024) / 1024
        if body.dim == 2:
            return float(np.min(self.eval_theta(body, th)))
        rule = default_rule(3, 16)
        return float(np.min(self.eval_nodes(body, rule.nodes)))

    def eval_theta(self, body, th):
        raise NotImplementedError

    def eval_nodes(self, body, nodes):
        raise NotImplementedError

    def kernel2(self, body):
        raise UnsupportedBodyError(f"{self.name} has no 2D kernel form")

    def kernel3(self, body):
        raise UnsupportedBodyError(f"{self.name} has no 3D kernel form")


class Constant(WeightField):
    name = "constant"

    def __init__(self, c):
        if not (c > 0 and math.isfinite(c)):
            raise InputError("constant weight must be positive")
        self.c = float(c)

    def lower_bound(self, body):
        return self.c

    def eval_theta(self, body, th):
        return np.full(np.shape(th), self.c)

    def eval_nodes(self, body, nodes):
        return np.full(len(nodes), self.c)

    def kernel2(self, body):
        return kernels.W_CONST, np.array([self.c])

    kernel3 = kernel2


class QuadrantDisk(WeightField):
    """Four quadrant constants on the circle; host must be a centered disk."""

    name = "quadrant"

    def __init__(self, q1, q2, q3, q4):
        vals = [float(q) for q in (q1, q2, q3, q4)]
        if min(vals) <= 0:
            raise InputError("quadrant weights must be positive")
        self.values = np.array(vals)

    def validate_host(self, body):
        if not (isinstance(body, Ball) and body.dim == 2):
            raise InputError("quadrant weights are defined on a centered disk")

    def lower_bound(self, body):
        return float(np.min(self.values))

    def eval_theta(self, body, th):
        q = ((np.asarray(th) % (2.0 * math.pi)) // (0.5 * math.pi)).astype(int)
        return self.values[np.clip(q, 0, 3)]

    def kernel2(self, body):
        return kernels.W_QUADRANT, self.values


class GpWeight(WeightField):
    """kappa^((n+2p-np)/(2(n+p))) <x,N>^(n(n-1)(p-1)/(2(n+p))): the weight
    whose illumination limit recovers the L_p affine surface area."""

    name = "gp"

    def __init__(self, p):
        if math.isinf(p):
            raise InputError("gp weight needs a finite exponent")
        self.p = float(p)

    def validate_host(self, body):
        if not body.smooth:
            raise UnsupportedBodyError("gp weight needs a C2+ host")
        if abs(body.dim + self.p) < 1e-6:
            raise InputError("gp weight undefined at p = -n")

    def exponents(self, n):
        ek = (n + 2.0 * self.p - n * self.p) / (2.0 * (n + self.p))
        eh = n * (n - 1.0) * (self.p - 1.0) / (2.0 * (n + self.p))
        return ek, eh

    def eval_theta(self, body, th):
        ek, eh = self.exponents(2)
        return body.curvature_theta(th) ** (-ek) * body.support_theta(th) ** eh

    def eval_nodes(self, body, nodes):
        ek, eh = self.exponents(body.dim)
        return body.curvature_nodes(nodes) ** (-ek) * body.support_nodes(nodes) ** eh

    def kernel2(self, body):
        ek, eh = self.exponents(2)
        return kernels.W_GP, np.array([ek, eh])

    def kernel3(self, body):
        ek, eh = self.exponents(3)
        return kernels.W_GP, np.array([ek, eh])


class SqrtKappa(WeightField):
    """sqrt of the Gauss curvature; its illumination limit is the surface area."""

    name = "sqrt-kappa"

    def validate_host(self, body):
        if not body.smooth:
            raise UnsupportedBodyError("sqrt-kappa weight needs a C2+ host")

    def eval_theta(self, body, th):
        return body.curvature_theta(th) ** -0.5

    def eval_nodes(self, body, nodes):
        return body.curvature_nodes(nodes) ** -0.5

    def kernel2(self, body):
        return kernels.W_SQRT_KAPPA, np.zeros(1)

    kernel3 = kernel2


class MixedWeight(WeightField):
    """Weight built from n factor bodies whose illumination limit recovers
    their mixed p-affine surface area, independent of the host."""

    name = "mixed"

    def __init__(self, bodies, p):
        bodies = list(bodies)
        if math.isinf(p):
            raise InputError("mixed weight needs a finite exponent")
        self.bodies = bodies
        self.p = float(p)

    def validate_host(self, body):
        if not body.smooth:
            raise UnsupportedBodyError("mixed weight needs a C2+ host")
        n = body.dim
        if len(self.bodies) != n:
            raise InputError(f"mixed weight needs exactly {n} factor bodies")
        if abs(n + self.p) < 1e-6:
            raise InputError("mixed weight undefined at p = -n")
        for k in self.bodies:
            if k.dim != n or not k.smooth:
                raise InputError("factor bodies must be C2+ in the host dimension")

    def _cexp(self, n):
        return (1.0 - n) / (2.0 * (n + self.p))

    def eval_theta(self, body, th):
        acc = np.zeros(np.shape(th))
        for k in self.bodies:
            acc += (1.0 - self.p) * np.log(k.support_theta(th)) + np.log(
                k.curvature_theta(th)
            )
        return np.exp(self._cexp(2) * acc)

    def eval_nodes(self, body, nodes):
        n = body.dim
        acc = np.zeros(len(nodes))
        for k in self.bodies:
            acc += (1.0 - self.p) * np.log(k.support_nodes(nodes)) + np.log(
                k.curvature_nodes(nodes)
            )
        host = body.curvature_nodes(nodes) ** ((n - 2.0) / 2.0)
        return host * np.exp(self._cexp(n) * acc)

    def kernel2(self, body):
        parts = [np.array([self._cexp(2), self.p, float(len(self.bodies))])]
        for k in self.bodies:
            code, params = k.kernel_rep()
            parts.append(np.array([float(code), float(len(params))]))
            parts.append(params)
        return kernels.W_MIXED, np.ascontiguousarray(np.concatenate(parts))

    def kernel3(self, body):
        parts = [np.array([self._cexp(3), self.p, 0.5, float(len(self.bodies))])]
        for k in self.bodies:
            parts.append(_matrix3(k).reshape(-1))
        return kernels.W_MIXED, np.ascontiguousarray(np.concatenate(parts))


class PiecewiseEdge(WeightField):
    """Per-edge constant densities on a convex polygon."""

    name = "edges"

    def __init__(self, values):
        vals = np.asarray(values, dtype=float)
        if np.any(vals < 0):
            raise InputError("edge densities must be nonnegative")
        self.values = vals

    def validate_host(self, body):
        if not isinstance(body, Polygon2D):
            raise InputError("edge weights are defined on polygons")
        if len(self.values) != body.vertices.shape[0]:
            raise InputError("one density per edge required")

    def lower_bound(self, body):
        return float(np.min(self.values))

    def edge_masses(self, body):
        return self.values * body.edge_lengths


def example_square_weights():
    """Unit square with density 1/12 on the top and right edges, 1/6 on the
    left and bottom; the edge order matches bodies.unit_square()."""
    return PiecewiseEdge([1.0 / 12.0, 1.0 / 12.0, 1.0 / 6.0, 1.0 / 6.0])


# ---------------------------------------------------------------------------
# samples and records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IlluminationSample:
    """Solution of mu_f(lit part from t * direction) = s along one ray."""

    direction: np.ndarray
    t0: float
    t_s: float
    delta: float            # <x_s - x, N_K(x)>, 0 when unbounded
    achieved: float         # measure at t_s (equals s for strictly convex K)

    @property
    def unbounded(self):
        return math.isinf(self.t_s)


@dataclass(frozen=True)
class ConvergenceRecord:
    s: float
    volume_diff: float
    scaled_ratio: float


@dataclass(frozen=True)
class ConvergenceStudy:
    records: tuple
    limit_estimate: float
    fitted_order: float
    order_flagged: bool     # implausible fit; raw smallest-s ratio reported
    rhs: FunctionalValue
    rel_dev: float


# ---------------------------------------------------------------------------
# dispatch helpers
# ---------------------------------------------------------------------------

def _matrix3(body):
    if isinstance(body, Ball) and body.dim == 3:
        return body.r * np.eye(3)
    if hasattr(body, "kernel_rep3"):
        return body.T
    raise UnsupportedBodyError(f"3D illumination supports balls and ellipsoids, not {body.kind}")


def _kernel2_pair(body, weight):
    code, params = body.kernel_rep()
    wcode, wparams = weight.kernel2(body)
    return code, params, wcode, wparams


def _mc_setup(body, weight, mc_rule):
    T = np.ascontiguousarray(_matrix3(body).reshape(-1))
    rule = mc_rule or rule_mc(3, DEFAULT_MC_SAMPLES, seed=0)
    if rule.dim != 3 or rule.kind != "mc":
        raise InputError("3D illumination needs an MC rule on S^2")
    wcode, wparams = weight.kernel3(body)
    wmc = rule.weights[0]
    hv, cf = kernels.mc_tables_3d(T, wcode, wparams, rule.nodes, wmc)
    return T, hv, cf, rule.nodes


def _polygon_measure(body, weight, z):
    lit = body.edge_normals @ z > body.edge_supports
    return float(np.sum(weight.edge_masses(body)[lit]))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def illuminated_measure(body, weight, z, mc_rule=None):
    """f-weighted measure of the boundary part lit from the outside point z."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape[0] != body.dim:
        raise InputError("point dimension mismatch")
    weight.validate_host(body)
    if body.contains(z):
        raise InputError("the viewing point must lie outside the body")
    if isinstance(body, Polygon2D):
        return _polygon_measure(body, weight, z)
    if body.dim == 2:
        code, params, wcode, wparams = _kernel2_pair(body, weight)
        val = kernels.illuminated_measure_2d(code, params, wcode, wparams, z[0], z[1])
        if val < 0.0:
            raise InputError("the viewing point must lie outside the body")
        return float(val)
    _, hv, cf, nodes = _mc_setup(body, weight, mc_rule)
    dots = nodes @ z
    return float(kernels.measure_ray_3d(hv, cf, dots, 1.0))


def membership(body, weight, s, x, mc_rule=None):
    """True iff x belongs to K^{f,s}."""
    if s < 0:
        raise InputError("s must be nonnegative")
    x = np.asarray(x, dtype=float).reshape(-1)
    if body.contains(x):
        return True
    return illuminated_measure(body, weight, x, mc_rule=mc_rule) <= s


def boundary_scale(body, weight, s, direction, mc_rule=None):
    """Scale t_s along a ray with mu_f(lit part) = s, by bracket + bisection."""
    if s < 0:
        raise InputError("s must be nonnegative")
    u = unit_vector(direction, body.dim)
    weight.validate_host(body)
    if isinstance(body, Polygon2D):
        return _polygon_boundary_scale(body, weight, s, u)
    if body.dim == 2:
        code, params, wcode, wparams = _kernel2_pair(body, weight)
        phi = math.atan2(u[1], u[0])
        if code == kernels.BALL:
            t0, theta = params[0], phi
        else:
            theta = kernels.normal_angle_2d(code, params, phi)
            bx, by = kernels.boundary_point_2d(code, params, theta)
            t0 = math.hypot(bx, by)
        t, status = kernels.boundary_scale_2d(
            code, params, wcode, wparams, u[0], u[1], s, t0, theta, CAP_FACTOR
        )
        if status != 0:
            return IlluminationSample(u, t0, math.inf, 0.0, 0.0)
        cos_xn = float(
            kernels.support_2d(code, params, theta)
        ) / t0  # <xhat, u(theta)> = h / t0
        achieved = (
            s
            if s == 0.0
            else float(
                kernels.measure_anchored_2d(
                    code, params, wcode, wparams, t * u[0], t * u[1], theta
                )
            )
        )
        return IlluminationSample(u, float(t0), float(t), (t - t0) * cos_xn, achieved)
    T, hv, cf, nodes = _mc_setup(body, weight, mc_rule)
    # along a ray only the scale matters: precompute node dot products
    ub = u / np.linalg.norm(u)
    # t0 along the ray and the normal there
    from .bodies import Ellipsoid  # local to avoid cycle at import time

    host = body if isinstance(body, (Ball, Ellipsoid)) else None
    t0 = host.radial(ub)
    dots = nodes @ ub
    t, status = kernels.boundary_scale_3d(hv, cf, dots, s, t0, CAP_FACTOR)
    if status != 0:
        return IlluminationSample(ub, float(t0), math.inf, 0.0, 0.0)
    achieved = float(kernels.measure_ray_3d(hv, cf, dots, t))
    x = t0 * ub
    normal = _normal_at(host, x)
    return IlluminationSample(ub, float(t0), float(t), (t - t0) * float(ub @ normal), achieved)


def _normal_at(body, x):
    if isinstance(body, Ball):
        return x / np.linalg.norm(x)
    w = body.Tinv @ x
    g = body.Tinv.T @ w
    return g / np.linalg.norm(g)


def _polygon_boundary_scale(body, weight, s, u):
    t0 = body.radial(u)
    if s == 0.0:
        return IlluminationSample(u, t0, t0, 0.0, 0.0)
    masses = weight.edge_masses(body)

    def mu(t):
        lit = body.edge_normals @ (t * u) > body.edge_supports
        return float(np.sum(masses[lit]))

    hi = t0
    while mu(hi) <= s:
        hi *= 2.0
        if hi > CAP_FACTOR * t0:
            return IlluminationSample(u, t0, math.inf, 0.0, mu(hi))
    lo = max(t0, hi / 2.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mu(mid) > s:
            hi = mid
        else:
            lo = mid
    # profile is a step function here: report the measure actually achieved
    return IlluminationSample(u, t0, lo, lo - t0, mu(lo))


def volume_difference(body, weight, s, rule=None, mc_rule=None):
    """|K^{f,s}| - |K| through the radial formula over normal directions."""
    if s < 0:
        raise InputError("s must be nonnegative")
    weight.validate_host(body)
    if isinstance(body, Polygon2D):
        return _polygon_volume_difference(body, weight, s)
    if body.dim == 2:
        rule = rule or default_rule(2)
        if rule.kind != "circle" or rule.order % 2 != 0:
            raise InputError("2D volume difference needs an even circle rule")
        code, params, wcode, wparams = _kernel2_pair(body, weight)
        val, coarse, status, bad = kernels.volume_difference_2d(
            code, params, wcode, wparams, s, rule.order, CAP_FACTOR
        )
        if status != 0:
            raise UnboundedBodyError(
                f"K^(f,s) unbounded at s={s:g} along normal angle {bad:.6f}",
                rays=[bad],
            )
        err = abs(val - coarse) + 1e-9 * abs(val)
        return FunctionalValue(float(val), float(err), f"{rule.describe()}+bisect")
    if body.dim == 3:
        rule = rule or default_rule(3, 8)
        if rule.dim != 3 or rule.kind != "sphere3":
            raise InputError("3D volume difference integrates over a sphere3 rule")
        T, hv, cf, nodes = _mc_setup(body, weight, mc_rule)
        val, status, bad = kernels.volume_difference_3d(
            T, hv, cf, nodes, rule.nodes, rule.weights, s, CAP_FACTOR
        )
        if status != 0:
            raise UnboundedBodyError(
                f"K^(f,s) unbounded at s={s:g} along outer node {bad}", rays=[bad]
            )
        # MC noise in each lit measure dominates; the lit fraction is about
        # s/(4 pi), so its relative standard error is sqrt(4 pi / (s N))
        n_mc = len(nodes)
        rel = math.sqrt(4.0 * math.pi / (max(s, 1e-300) * n_mc))
        return FunctionalValue(float(val), abs(val) * rel, f"{rule.describe()}+mc-bisect")
    raise UnsupportedBodyError("volume difference implemented for n = 2 and n = 3")


def _polygon_volume_difference(body, weight, s, per_edge=64):
    total = 0.0
    V = body.vertices
    n_edge = V.shape[0]
    for e in range(n_edge):
        a = V[e]
        b = V[(e + 1) % n_edge]
        seg = (b - a) / per_edge
        w = body.edge_lengths[e] / per_edge
        normal = body.edge_normals[e]
        for j in range(per_edge):
            x = a + (j + 0.5) * seg
            t0 = np.linalg.norm(x)
            sample = _polygon_boundary_scale(body, weight, s, x / t0)
            if sample.unbounded:
                raise UnboundedBodyError(
                    f"K^(f,s) unbounded at s={s:g} along edge {e}", rays=[e]
                )
            total += w * float(x @ normal) * ((sample.t_s / t0) ** 2 - 1.0)
    return FunctionalValue(total / 2.0, abs(total) * 1e-6 + 1e-15, f"edges({per_edge})+bisect")


def rhs_functional(body, weight, rule=None):
    """Sphere form of the limit functional: integral of
    f_K^{(n-2)/(n-1)} / f(N^{-1}(u))^{2/(n-1)} d sigma."""
    weight.validate_host(body)
    if not body.smooth:
        raise UnsupportedBodyError("the limit functional needs a C2+ body")
    c = weight.lower_bound(body)
    if not (c > 0):
        raise InputError("weight must be bounded below by a positive constant")
    n = body.dim
    rule = rule or default_rule(n)

    def integrand(nodes):
        fk = body.curvature_nodes(nodes)
        if n == 2:
            th = np.arctan2(nodes[:, 1], nodes[:, 0])
            wv = weight.eval_theta(body, th)
        else:
            wv = weight.eval_nodes(body, nodes)
        return fk ** ((n - 2.0) / (n - 1.0)) / wv ** (2.0 / (n - 1.0))

    return integrate(rule, integrand)


def _richardson(s_vals, ratios):
    """Limit estimate from the last three records of a geometric schedule."""
    r1, r2, r3 = ratios[-3:]
    s1, s2, s3 = s_vals[-3:]
    rho = s3 / s2
    d1 = r2 - r1
    d2 = r3 - r2
    if d1 == 0.0 or d2 == 0.0 or d1 * d2 <= 0.0:
        return r3, float("nan"), True
    q = math.log(d2 / d1) / math.log(rho)
    if not math.isfinite(q) or q < 0.1:
        return r3, q, True
    lam = rho ** (-q)
    return r3 + (r3 - r2) / (lam - 1.0), q, False


def convergence_study(body, weight, s_list, rule=None, mc_rule=None):
    """Scaled volume-difference ratios along a decreasing s schedule, their
    extrapolated limit, and the deviation from the limit functional."""
    s_list = [float(s) for s in s_list]
    if len(s_list) < 3:
        raise InputError("need at least three s values")
    if any(b >= a for a, b in zip(s_list, s_list[1:])):
        raise InputError("s_list must be strictly decreasing")
    n = body.dim
    cn = scaling_constant(n)
    records = []
    for s in s_list:
        try:
            vd = volume_difference(body, weight, s, rule=rule, mc_rule=mc_rule)
        except UnboundedBodyError as exc:
            raise UnboundedBodyError(
                f"unbounded instance at s={s:g}: {exc}", rays=exc.rays
            ) from exc
        ratio = cn * vd.value / s ** (2.0 / (n - 1.0))
        records.append(ConvergenceRecord(s, vd.value, ratio))
    limit, order, flagged = _richardson(
        [r.s for r in records], [r.scaled_ratio for r in records]
    )
    if flagged:
        limit = records[-1].scaled_ratio
    rhs = rhs_functional(body, weight, rule=default_rule(n))
    rel_dev = abs(limit - rhs.value) / abs(rhs.value)
    return ConvergenceStudy(tuple(records), limit, order, flagged, rhs, rel_dev)
