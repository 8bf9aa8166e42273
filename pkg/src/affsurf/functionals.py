"""Scalar functionals of convex bodies: L_p and mixed p-affine surface
areas, their i-th mixed variants, dual mixed volumes, volume and surface
area.

Sphere integrands are assembled in log space (the exponents can be large and
negative) and summed with compensated accumulation via ``integrate``.  The
p = -n case is a maximum, not an integral, and is solved by a dense scan
plus local refinement.
"""
import math

import numpy as np
from scipy.optimize import minimize

from .bodies import Ball
from .errors import InputError, UnsupportedBodyError, UnsupportedDimensionError
from .quadrature import FunctionalValue, ball_volume, default_rule, integrate

_POLE_GUARD = 1e-6


def _as_body_list(bodies):
    bodies = list(bodies)
    if not bodies:
        raise InputError("need at least one body")
    n = bodies[0].dim
    for k in bodies:
        if k.dim != n:
            raise InputError("all bodies must share one ambient dimension")
    return bodies, n


def _require_smooth(bodies, op):
    for k in bodies:
        if not k.smooth:
            raise UnsupportedBodyError(f"{op} needs C2+ bodies, got {k.kind}")


def _check_exponent(p, n):
    if math.isinf(p):
        return
    if abs(n + p) < _POLE_GUARD:
        raise InputError(
            f"p = {p} is inside the guard band around p = -{n}; "
            "use mixed_minus_n / ith_mixed_minus_n for the p = -n functionals"
        )


def mixed_p_affine(bodies, p, rule=None):
    """Mixed p-affine surface area of n bodies in R^n.

    Integrates [prod_i h_i^{1-p} f_i]^{1/(n+p)} over the sphere; p = +-inf
    uses the limit integrand prod_i 1/h_i, which equals n times the dual
    mixed volume of the polar bodies.
    """
    bodies, n = _as_body_list(bodies)
    if len(bodies) != n:
        raise InputError(f"mixed p-affine surface area needs exactly {n} bodies, got {len(bodies)}")
    _require_smooth(bodies, "mixed_p_affine")
    _check_exponent(p, n)
    rule = rule or default_rule(n)

    if math.isinf(p):

        def integrand(nodes):
            acc = np.zeros(len(nodes))
            for k in bodies:
                acc -= np.log(k.support_nodes(nodes))
            return np.exp(acc)

    else:

        def integrand(nodes):
            acc = np.zeros(len(nodes))
            for k in bodies:
                acc += (1.0 - p) * np.log(k.support_nodes(nodes)) + np.log(
                    k.curvature_nodes(nodes)
                )
            return np.exp(acc / (n + p))

    return integrate(rule, integrand)


def lp_affine(body, p, rule=None):
    """L_p affine surface area; equals mixed_p_affine with n equal bodies."""
    n = body.dim
    _check_exponent(p, n)
    if body.piecewise:
        return _lp_affine_arcs(body, p)
    _require_smooth([body], "lp_affine")
    rule = rule or default_rule(n)

    if math.isinf(p):

        def integrand(nodes):
            return body.support_nodes(nodes) ** (-float(n))

    else:

        def integrand(nodes):
            lh = np.log(body.support_nodes(nodes))
            lf = np.log(body.curvature_nodes(nodes))
            return np.exp((n * lf - n * (p - 1.0) * lh) / (n + p))

    return integrate(rule, integrand)


def _arc_quadrature(body, g, npts=64):
    """Exact-split integration of g(theta) over a piecewise-arc boundary."""
    from .kernels import GL_W, GL_X

    total = 0.0
    coarse = 0.0
    for cx, cy, r, lo, hi in body.arc_decomposition():
        half = 0.5 * (hi - lo)
        mid = 0.5 * (lo + hi)
        th = mid + half * GL_X
        vals = g(th, cx, cy, r)
        total += half * float(GL_W @ vals)
        coarse += half * float(GL_W[::2] @ vals[::2]) * 2.0
    return total, abs(total - coarse)


def _lp_affine_arcs(body, p):
    n = 2
    if math.isinf(p):
        ef, eh = 0.0, -2.0
    else:
        ef = n / (n + p)
        eh = -n * (p - 1.0) / (n + p)

    def g(th, cx, cy, r):
        h = cx * np.cos(th) + cy * np.sin(th) + r
        return r**ef * h**eh

    value, err = _arc_quadrature(body, g)
    return FunctionalValue(value, err, "arc-split(gl64)")


def mixed_minus_n(bodies, scan=4096):
    """Mixed (-n)-affine surface area: the sup over directions of
    prod_i f_i^{1/2n} h_i^{(n+1)/2n}, found by scan plus local refinement."""
    bodies, n = _as_body_list(bodies)
    if len(bodies) != n:
        raise InputError(f"need exactly {n} bodies, got {len(bodies)}")
    _require_smooth(bodies, "mixed_minus_n")
    weights = [1.0] * n
    return _max_functional(bodies, weights, n, scan)


def ith_mixed_minus_n(body, other, i, scan=4096):
    """i-th mixed (-n)-affine surface area of two bodies."""
    n = body.dim
    if other.dim != n:
        raise InputError("bodies must share one ambient dimension")
    _require_smooth([body, other], "ith_mixed_minus_n")
    return _max_functional([body, other], [(n - i) / 1.0, float(i)], n, scan)


def _minus_n_objective_theta(bodies, weights, n, th):
    acc = np.zeros(np.shape(th))
    for k, w in zip(bodies, weights):
        acc += w * (
            np.log(k.curvature_theta(th)) / (2.0 * n)
            + (n + 1.0) / (2.0 * n) * np.log(k.support_theta(th))
        )
    return acc


def _max_functional(bodies, weights, n, scan):
    if n == 2:
        th = 2.0 * math.pi * np.arange(scan) / scan
        vals = _minus_n_objective_theta(bodies, weights, n, th)
        j = int(np.argmax(vals))
        lo = th[j] - 2.0 * math.pi / scan
        hi = th[j] + 2.0 * math.pi / scan

        def obj(t):
            return -float(_minus_n_objective_theta(bodies, weights, n, np.array([t]))[0])

        t_best = _golden(obj, lo, hi)
        best = -obj(t_best)
        return FunctionalValue(math.exp(best), 1e-8 * math.exp(best), f"scan({scan})+golden")
    # n = 3: coarse product grid then Nelder-Mead in spherical angles
    pol = np.linspace(0.0, math.pi, 64)
    az = np.linspace(0.0, 2.0 * math.pi, 128, endpoint=False)
    P, A = np.meshgrid(pol, az, indexing="ij")
    U = np.column_stack(
        [
            (np.sin(P) * np.cos(A)).ravel(),
            (np.sin(P) * np.sin(A)).ravel(),
            np.cos(P).ravel(),
        ]
    )

    def logobj_nodes(nodes):
        acc = np.zeros(len(nodes))
        for k, w in zip(bodies, weights):
            acc += w * (
                np.log(k.curvature_nodes(nodes)) / (2.0 * n)
                + (n + 1.0) / (2.0 * n) * np.log(k.support_nodes(nodes))
            )
        return acc

    vals = logobj_nodes(U)
    j = int(np.argmax(vals))

    def neg(x):
        u = np.array(
            [
                math.sin(x[0]) * math.cos(x[1]),
                math.sin(x[0]) * math.sin(x[1]),
                math.cos(x[0]),
            ]
        )
        return -float(logobj_nodes(u[None, :])[0])

    res = minimize(
        neg,
        np.array([P.ravel()[j], A.ravel()[j]]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400},
    )
    best = -float(res.fun)
    return FunctionalValue(math.exp(best), 1e-8 * math.exp(best), "scan(64x128)+nelder-mead")


def _golden(obj, lo, hi, iters=90):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = obj(c), obj(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = obj(d)
    return 0.5 * (a + b)


def ith_mixed(body, other, p, i, rule=None):
    """i-th mixed p-affine surface area of two bodies (any real i)."""
    n = body.dim
    if other.dim != n:
        raise InputError("bodies must share one ambient dimension")
    _require_smooth([body, other], "ith_mixed")
    _check_exponent(p, n)
    rule = rule or default_rule(n)

    if math.isinf(p):

        def integrand(nodes):
            lhk = np.log(body.support_nodes(nodes))
            lhl = np.log(other.support_nodes(nodes))
            return np.exp(-(n - i) * lhk - i * lhl)

    else:

        def integrand(nodes):
            gk = (1.0 - p) * np.log(body.support_nodes(nodes)) + np.log(
                body.curvature_nodes(nodes)
            )
            gl = (1.0 - p) * np.log(other.support_nodes(nodes)) + np.log(
                other.curvature_nodes(nodes)
            )
            return np.exp(((n - i) * gk + i * gl) / (n + p))

    return integrate(rule, integrand)


def dual_mixed_volume(bodies, rule=None):
    """Dual mixed volume (1/n) * integral of the product of radial functions."""
    bodies, n = _as_body_list(bodies)
    if len(bodies) != n:
        raise InputError(f"need exactly {n} bodies, got {len(bodies)}")
    rule = rule or default_rule(n)

    def integrand(nodes):
        acc = np.ones(len(nodes))
        for k in bodies:
            acc *= k.radial_nodes(nodes)
        return acc

    fv = integrate(rule, integrand)
    return FunctionalValue(fv.value / n, fv.abs_error / n, fv.rule)


def dual_mixed_volume_polar(bodies, rule=None):
    """Dual mixed volume of the polar bodies, via rho_{K_polar} = 1/h_K."""
    bodies, n = _as_body_list(bodies)
    if len(bodies) != n:
        raise InputError(f"need exactly {n} bodies, got {len(bodies)}")
    rule = rule or default_rule(n)

    def integrand(nodes):
        acc = np.zeros(len(nodes))
        for k in bodies:
            acc -= np.log(k.support_nodes(nodes))
        return np.exp(acc)

    fv = integrate(rule, integrand)
    return FunctionalValue(fv.value / n, fv.abs_error / n, fv.rule)


def dual_mixed_volume_i(body, other, i, rule=None):
    """(1/n) * integral of h_K^{-(n-i)} h_L^{-i}: the i-th dual mixed volume
    of the two polar bodies, taken directly from the original supports."""
    n = body.dim
    if other.dim != n:
        raise InputError("bodies must share one ambient dimension")
    rule = rule or default_rule(n)

    def integrand(nodes):
        return np.exp(
            -(n - i) * np.log(body.support_nodes(nodes))
            - i * np.log(other.support_nodes(nodes))
        )

    fv = integrate(rule, integrand)
    return FunctionalValue(fv.value / n, fv.abs_error / n, fv.rule)


def mixed_volume_2d(body, other, rule=None):
    """Planar mixed volume V(K, L) = (1/2) * integral of h_K f_L."""
    if body.dim != 2 or other.dim != 2:
        raise UnsupportedDimensionError(
            "mixed volume is implemented for n = 2 only (or all-equal bodies via volume)"
        )
    _require_smooth([body, other], "mixed_volume_2d")
    rule = rule or default_rule(2)

    def integrand(nodes):
        return body.support_nodes(nodes) * other.curvature_nodes(nodes)

    fv = integrate(rule, integrand)
    return FunctionalValue(fv.value / 2.0, fv.abs_error / 2.0, fv.rule)


def volume(body, rule=None, method="support"):
    """Volume |K|: (1/n) integral of h f for smooth bodies, exact shoelace
    for polygons, arc-split for piecewise bodies, or the radial formula."""
    n = body.dim
    if body.kind == "polygon":
        return FunctionalValue(body.area, 0.0, "shoelace")
    if body.piecewise:

        def g(th, cx, cy, r):
            h = cx * np.cos(th) + cy * np.sin(th) + r
            return h * r

        value, err = _arc_quadrature(body, g)
        return FunctionalValue(value / n, err / n, "arc-split(gl64)")
    rule = rule or default_rule(n)
    if method == "radial":

        def integrand(nodes):
            return body.radial_nodes(nodes) ** float(n)

    else:

        def integrand(nodes):
            return body.support_nodes(nodes) * body.curvature_nodes(nodes)

    fv = integrate(rule, integrand)
    return FunctionalValue(fv.value / n, fv.abs_error / n, fv.rule)


def surface_area(body, rule=None):
    """Boundary measure: integral of the curvature function over the sphere."""
    if body.kind == "polygon":
        return FunctionalValue(float(np.sum(body.edge_lengths)), 0.0, "edge-sum")
    if body.piecewise:

        def g(th, cx, cy, r):
            return np.full(np.shape(th), float(r))

        value, err = _arc_quadrature(body, g)
        return FunctionalValue(value, err, "arc-split(gl64)")
    rule = rule or default_rule(body.dim)

    def integrand(nodes):
        return body.curvature_nodes(nodes)

    return integrate(rule, integrand)


def affine_scaling_exponent(p, n):
    """Power of |det T| picked up by the mixed p-affine surface area."""
    if math.isinf(p):
        return -1.0
    return (n - p) / (n + p)


def ball_lp_affine(n):
    """Reference value as_p(B) = n |B| for every admissible p."""
    return n * ball_volume(n)


def unit_ball(n):
    return Ball(1.0, n)
