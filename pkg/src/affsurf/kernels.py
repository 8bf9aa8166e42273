"""Hot numeric kernels: body oracles at scalar angles, visibility solves,
ray bisections and volume-difference loops.

Bodies enter as a (code, params) pair so the kernels stay free of Python
objects.  Everything here is numba-compiled by default and runs as plain
numpy/python when AFFSURF_DISABLE_NUMBA=1.
"""
import math

import numpy as np
from scipy.special import roots_legendre

from ._jit import njit

# body codes
BALL = 0
ELLIPSE = 1
TRIG = 2
TRIG_LINEAR = 3

# weight codes
W_CONST = 0
W_QUADRANT = 1
W_GP = 2
W_SQRT_KAPPA = 3
W_MIXED = 4

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# fixed Gauss-Legendre rule for sub-interval integrals of analytic integrands
_glx, _glw = roots_legendre(64)
GL_X = np.ascontiguousarray(_glx)
GL_W = np.ascontiguousarray(_glw)


# ---------------------------------------------------------------------------
# trig-polynomial support series
# ---------------------------------------------------------------------------

@njit(cache=True)
def _trig_h(params, theta):
    # params = [a0, a_1..a_d, b_1..b_d]
    d = (params.shape[0] - 1) // 2
    h = params[0]
    for k in range(1, d + 1):
        h += params[k] * math.cos(k * theta) + params[d + k] * math.sin(k * theta)
    return h


@njit(cache=True)
def _trig_hp(params, theta):
    d = (params.shape[0] - 1) // 2
    v = 0.0
    for k in range(1, d + 1):
        v += k * (-params[k] * math.sin(k * theta) + params[d + k] * math.cos(k * theta))
    return v


@njit(cache=True)
def _trig_f(params, theta):
    # h + h'' term by term: coefficient k picks up (1 - k^2)
    d = (params.shape[0] - 1) // 2
    f = params[0]
    for k in range(1, d + 1):
        f += (1.0 - k * k) * (
            params[k] * math.cos(k * theta) + params[d + k] * math.sin(k * theta)
        )
    return f


# ---------------------------------------------------------------------------
# 2D body oracles at a normal angle
# ---------------------------------------------------------------------------

@njit(cache=True)
def support_2d(code, params, theta):
    c = math.cos(theta)
    s = math.sin(theta)
    if code == BALL:
        return params[0]
    if code == ELLIPSE:
        w0 = params[0] * c + params[2] * s
        w1 = params[1] * c + params[3] * s
        return math.hypot(w0, w1)
    if code == TRIG:
        return _trig_h(params, theta)
    # TRIG_LINEAR: h_{TK}(u) = |T^t u| * h_K(angle(T^t u))
    w0 = params[0] * c + params[2] * s
    w1 = params[1] * c + params[3] * s
    m = math.hypot(w0, w1)
    return m * _trig_h(params[4:], math.atan2(w1, w0))


@njit(cache=True)
def support_d1_2d(code, params, theta):
    c = math.cos(theta)
    s = math.sin(theta)
    if code == BALL:
        return 0.0
    if code == ELLIPSE:
        w0 = params[0] * c + params[2] * s
        w1 = params[1] * c + params[3] * s
        # w' = T^t u'
        v0 = -params[0] * s + params[2] * c
        v1 = -params[1] * s + params[3] * c
        return (w0 * v0 + w1 * v1) / math.hypot(w0, w1)
    if code == TRIG:
        return _trig_hp(params, theta)
    # TRIG_LINEAR: h = m(θ) H(φ(θ)), chain rule through w = T^t u
    w0 = params[0] * c + params[2] * s
    w1 = params[1] * c + params[3] * s
    v0 = -params[0] * s + params[2] * c
    v1 = -params[1] * s + params[3] * c
    m2 = w0 * w0 + w1 * w1
    m = math.sqrt(m2)
    phi = math.atan2(w1, w0)
    base = params[4:]
    mp = (w0 * v0 + w1 * v1) / m
    phip = (w0 * v1 - w1 * v0) / m2
    return mp * _trig_h(base, phi) + m * _trig_hp(base, phi) * phip


@njit(cache=True)
def curvature_2d(code, params, theta):
    # curvature function f = h + h'' (reciprocal Gauss curvature)
    if code == BALL:
        return params[0]
    c = math.cos(theta)
    s = math.sin(theta)
    if code == ELLIPSE:
        w0 = params[0] * c + params[2] * s
        w1 = params[1] * c + params[3] * s
        det = params[0] * params[3] - params[1] * params[2]
        h = math.hypot(w0, w1)
        return det * det / (h * h * h)
    if code == TRIG:
        return _trig_f(params, theta)
    # TRIG_LINEAR: transformation identity f_{TK}(v) = det(T)^2 f_K(u)/|T^t v|^3
    w0 = params[0] * c + params[2] * s
    w1 = params[1] * c + params[3] * s
    det = params[0] * params[3] - params[1] * params[2]
    m = math.hypot(w0, w1)
    return det * det * _trig_f(params[4:], math.atan2(w1, w0)) / (m * m * m)


@njit(cache=True)
def boundary_point_2d(code, params, theta):
    c = math.cos(theta)
    s = math.sin(theta)
    h = support_2d(code, params, theta)
    hp = support_d1_2d(code, params, theta)
    return h * c - hp * s, h * s + hp * c


@njit(cache=True)
def normal_angle_2d(code, params, phi):
    """Normal angle of the boundary point in ray direction phi.

    Inverts the monotone map theta -> angle(x(theta)); the gap between the
    two angles is strictly inside (-pi/2, pi/2) because <x,u> = h > 0.
    """
    lo = phi - HALF_PI + 1e-12
    hi = phi + HALF_PI - 1e-12
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        x, y = boundary_point_2d(code, params, mid)
        d = math.atan2(y, x) - phi
        d -= TWO_PI * math.floor(d / TWO_PI + 0.5)
        if d < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def radial_scalar_2d(code, params, phi):
    if code == BALL:
        return params[0]
    theta = normal_angle_2d(code, params, phi)
    x, y = boundary_point_2d(code, params, theta)
    return math.hypot(x, y)


@njit(cache=True)
def radial_many_2d(code, params, phis):
    out = np.empty(phis.shape[0])
    for i in range(phis.shape[0]):
        out[i] = radial_scalar_2d(code, params, phis[i])
    return out


# ---------------------------------------------------------------------------
# boundary weights: value of f at the boundary point with normal angle theta
# ---------------------------------------------------------------------------

@njit(cache=True)
def weight_2d(code, params, wcode, wparams, theta):
    if wcode == W_CONST:
        return wparams[0]
    if wcode == W_QUADRANT:
        # quadrant constants on the circle; host is a centered ball
        t = theta % TWO_PI
        q = int(t // HALF_PI)
        if q > 3:
            q = 3
        return wparams[q]
    if wcode == W_GP:
        # kappa^e_k * h^e_h with kappa = 1/f
        f = curvature_2d(code, params, theta)
        h = support_2d(code, params, theta)
        return f ** (-wparams[0]) * h ** wparams[1]
    if wcode == W_SQRT_KAPPA:
        return curvature_2d(code, params, theta) ** -0.5
    # W_MIXED: wparams = [cexp, p, m, (code_i, len_i, params_i...)* m]
    # weight = f_host^{(n-2)/2} * exp(cexp * sum_i log f_p(K_i))  (n=2 host)
    p = wparams[1]
    m = int(wparams[2])
    acc = 0.0
    idx = 3
    for _ in range(m):
        bc = int(wparams[idx])
        ln = int(wparams[idx + 1])
        sub = wparams[idx + 2 : idx + 2 + ln]
        h = support_2d(bc, sub, theta)
        f = curvature_2d(bc, sub, theta)
        acc += (1.0 - p) * math.log(h) + math.log(f)
        idx += 2 + ln
    return math.exp(wparams[0] * acc)


# ---------------------------------------------------------------------------
# illuminated boundary measure in 2D
# ---------------------------------------------------------------------------

@njit(cache=True)
def _gap(code, params, zx, zy, theta):
    # positive iff the boundary point with normal angle theta is lit from z
    return zx * math.cos(theta) + zy * math.sin(theta) - support_2d(code, params, theta)


@njit(cache=True)
def visible_interval_2d(code, params, zx, zy, anchor):
    """Endpoints of the lit normal-angle arc around a known interior angle.

    anchor must satisfy gap(anchor) > 0; the lit set is a single open arc of
    width < pi on each side of any of its points, so gap(anchor +- pi) < 0.
    """
    lo = anchor - math.pi
    hi = anchor
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _gap(code, params, zx, zy, mid) > 0.0:
            hi = mid
        else:
            lo = mid
    t1 = 0.5 * (lo + hi)
    lo = anchor
    hi = anchor + math.pi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _gap(code, params, zx, zy, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    t2 = 0.5 * (lo + hi)
    return t1, t2


@njit(cache=True)
def _arc_weighted_measure(code, params, wcode, wparams, t1, t2):
    # integral of weight * f over the normal-angle interval [t1, t2]
    if t2 <= t1:
        return 0.0
    if wcode == W_QUADRANT:
        # piecewise-constant integrand on a ball: sum the pieces exactly
        r = params[0]
        total = 0.0
        cur = t1
        k = math.ceil(t1 / HALF_PI)
        nxt = k * HALF_PI
        while nxt < t2:
            if nxt > cur:
                mid = 0.5 * (cur + nxt)
                q = int((mid % TWO_PI) // HALF_PI)
                if q > 3:
                    q = 3
                total += wparams[q] * (nxt - cur)
                cur = nxt
            k += 1
            nxt = k * HALF_PI
        mid = 0.5 * (cur + t2)
        q = int((mid % TWO_PI) // HALF_PI)
        if q > 3:
            q = 3
        total += wparams[q] * (t2 - cur)
        return r * total
    half = 0.5 * (t2 - t1)
    mid = 0.5 * (t1 + t2)
    acc = 0.0
    for i in range(GL_X.shape[0]):
        th = mid + half * GL_X[i]
        acc += GL_W[i] * weight_2d(code, params, wcode, wparams, th) * curvature_2d(
            code, params, th
        )
    return acc * half


@njit(cache=True)
def measure_anchored_2d(code, params, wcode, wparams, zx, zy, anchor):
    if _gap(code, params, zx, zy, anchor) <= 0.0:
        return 0.0
    t1, t2 = visible_interval_2d(code, params, zx, zy, anchor)
    return _arc_weighted_measure(code, params, wcode, wparams, t1, t2)


@njit(cache=True)
def illuminated_measure_2d(code, params, wcode, wparams, zx, zy):
    """Weighted measure of the boundary part lit from z; -1.0 if z in K."""
    phi = math.atan2(zy, zx)
    if code == BALL:
        t0 = params[0]
        theta = phi
    else:
        theta = normal_angle_2d(code, params, phi)
        x, y = boundary_point_2d(code, params, theta)
        t0 = math.hypot(x, y)
    if math.hypot(zx, zy) <= t0:
        return -1.0
    return measure_anchored_2d(code, params, wcode, wparams, zx, zy, theta)


@njit(cache=True)
def boundary_scale_2d(code, params, wcode, wparams, ux, uy, s, t0, anchor, cap_factor):
    """Solve mu_f(lit part from t*u) = s along the ray; (t, 0) or (cap, 1).

    The profile is continuous and nondecreasing in t for these bodies, so a
    doubling bracket followed by bisection is exact up to the t resolution.
    """
    if s <= 0.0:
        return t0, 0
    hi = t0
    while True:
        hi *= 2.0
        if hi > cap_factor * t0:
            return hi, 1
        if measure_anchored_2d(code, params, wcode, wparams, hi * ux, hi * uy, anchor) > s:
            break
    lo = hi * 0.5
    if lo < t0:
        lo = t0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if measure_anchored_2d(code, params, wcode, wparams, mid * ux, mid * uy, anchor) > s:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), 0


@njit(cache=True)
def volume_difference_2d(code, params, wcode, wparams, s, m, cap_factor):
    """Radial-formula volume difference between K^{f,s} and K (n = 2).

    Integrates h(theta) * ((t_s/t0)^2 - 1) * f(theta) / 2 over m equally
    spaced normal angles; the even-index subset doubles as the half-size rule
    for the error estimate.  Returns (value, coarse_value, status, bad_angle).
    """
    w = TWO_PI / m
    acc = 0.0
    acc_c = 0.0
    for j in range(m):
        theta = TWO_PI * j / m
        h = support_2d(code, params, theta)
        f = curvature_2d(code, params, theta)
        x, y = boundary_point_2d(code, params, theta)
        t0 = math.hypot(x, y)
        t, status = boundary_scale_2d(
            code, params, wcode, wparams, x / t0, y / t0, s, t0, theta, cap_factor
        )
        if status != 0:
            return 0.0, 0.0, 1, theta
        ratio = t / t0
        term = h * (ratio * ratio - 1.0) * f
        acc += term
        if j % 2 == 0:
            acc_c += term
    return 0.5 * w * acc, w * acc_c, 0, 0.0


# ---------------------------------------------------------------------------
# 3D ellipsoid oracles (T is a flat row-major 3x3 matrix)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _tt_u3(T, ux, uy, uz):
    w0 = T[0] * ux + T[3] * uy + T[6] * uz
    w1 = T[1] * ux + T[4] * uy + T[7] * uz
    w2 = T[2] * ux + T[5] * uy + T[8] * uz
    return w0, w1, w2


@njit(cache=True)
def _det3(T):
    return (
        T[0] * (T[4] * T[8] - T[5] * T[7])
        - T[1] * (T[3] * T[8] - T[5] * T[6])
        + T[2] * (T[3] * T[7] - T[4] * T[6])
    )


@njit(cache=True)
def support_ell3(T, ux, uy, uz):
    w0, w1, w2 = _tt_u3(T, ux, uy, uz)
    return math.sqrt(w0 * w0 + w1 * w1 + w2 * w2)


@njit(cache=True)
def curvature_ell3(T, ux, uy, uz):
    h = support_ell3(T, ux, uy, uz)
    det = _det3(T)
    return det * det / (h * h * h * h)


@njit(cache=True)
def boundary_point_ell3(T, ux, uy, uz):
    w0, w1, w2 = _tt_u3(T, ux, uy, uz)
    h = math.sqrt(w0 * w0 + w1 * w1 + w2 * w2)
    x0 = (T[0] * w0 + T[1] * w1 + T[2] * w2) / h
    x1 = (T[3] * w0 + T[4] * w1 + T[5] * w2) / h
    x2 = (T[6] * w0 + T[7] * w1 + T[8] * w2) / h
    return x0, x1, x2


@njit(cache=True)
def weight_ell3(T, wcode, wparams, ux, uy, uz):
    if wcode == W_CONST:
        return wparams[0]
    if wcode == W_GP:
        f = curvature_ell3(T, ux, uy, uz)
        h = support_ell3(T, ux, uy, uz)
        return f ** (-wparams[0]) * h ** wparams[1]
    if wcode == W_SQRT_KAPPA:
        return curvature_ell3(T, ux, uy, uz) ** -0.5
    # W_MIXED over ellipsoid factors: wparams = [cexp, p, fexp_host, m, T_i * 9 ...]
    p = wparams[1]
    m = int(wparams[3])
    acc = 0.0
    for b in range(m):
        Ti = wparams[4 + 9 * b : 4 + 9 * (b + 1)]
        h = support_ell3(Ti, ux, uy, uz)
        f = curvature_ell3(Ti, ux, uy, uz)
        acc += (1.0 - p) * math.log(h) + math.log(f)
    fh = curvature_ell3(T, ux, uy, uz)
    return fh ** wparams[2] * math.exp(wparams[0] * acc)


@njit(cache=True)
def mc_tables_3d(T, wcode, wparams, nodes, wmc):
    """Per-node support values and weight*curvature*quadrature coefficients."""
    n = nodes.shape[0]
    hv = np.empty(n)
    cf = np.empty(n)
    for i in range(n):
        ux = nodes[i, 0]
        uy = nodes[i, 1]
        uz = nodes[i, 2]
        hv[i] = support_ell3(T, ux, uy, uz)
        cf[i] = wmc * weight_ell3(T, wcode, wparams, ux, uy, uz) * curvature_ell3(
            T, ux, uy, uz
        )
    return hv, cf


@njit(cache=True)
def measure_ray_3d(hv, cf, dots, t):
    # indicator quadrature of the lit region for the point t * xhat
    return np.sum(cf * (dots * t > hv))


@njit(cache=True)
def boundary_scale_3d(hv, cf, dots, s, t0, cap_factor):
    if s <= 0.0:
        return t0, 0
    hi = t0
    while True:
        hi *= 2.0
        if hi > cap_factor * t0:
            return hi, 1
        if measure_ray_3d(hv, cf, dots, hi) > s:
            break
    lo = hi * 0.5
    if lo < t0:
        lo = t0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if measure_ray_3d(hv, cf, dots, mid) > s:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), 0


@njit(cache=True)
def volume_difference_3d(T, hv, cf, nodes, out_nodes, out_weights, s, cap_factor):
    acc = 0.0
    for j in range(out_nodes.shape[0]):
        ux = out_nodes[j, 0]
        uy = out_nodes[j, 1]
        uz = out_nodes[j, 2]
        h = support_ell3(T, ux, uy, uz)
        f = curvature_ell3(T, ux, uy, uz)
        x0, x1, x2 = boundary_point_ell3(T, ux, uy, uz)
        t0 = math.sqrt(x0 * x0 + x1 * x1 + x2 * x2)
        dots = (nodes[:, 0] * x0 + nodes[:, 1] * x1 + nodes[:, 2] * x2) / t0
        t, status = boundary_scale_3d(hv, cf, dots, s, t0, cap_factor)
        if status != 0:
            return 0.0, 1, j
        ratio = t / t0
        acc += out_weights[j] * h * (ratio * ratio * ratio - 1.0) * f
    return acc / 3.0, 0, -1
