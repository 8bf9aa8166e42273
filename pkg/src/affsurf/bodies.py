"""Convex body models exposed through support / curvature / radial oracles.

All bodies keep their centroid at the origin: balls, ellipsoids, the rounded
square and polygons by symmetry or validation, trig-support bodies by an
exact degree-1 coefficient shift at construction.  Smooth 2D bodies also
carry a (code, params) pair so the numeric kernels can evaluate them without
touching Python objects.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    AdmissibilityError,
    ApproximationError,
    InputError,
    UnsupportedBodyError,
)
from .quadrature import rule_circle

_ADMISSIBILITY_GRID = 4096


def unit_vector(u, dim=None):
    """Validate and normalize a direction vector."""
    v = np.asarray(u, dtype=float).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise InputError(f"direction has dimension {v.shape[0]}, body has {dim}")
    n = np.linalg.norm(v)
    if n == 0.0 or not np.isfinite(n):
        raise InputError("direction must be a nonzero finite vector")
    return v / n


@dataclass(frozen=True)
class BoundaryPoint:
    """Boundary point x with outer unit normal and support value <x, normal>."""

    x: np.ndarray
    normal: np.ndarray
    support_value: float


class Body:
    """Common interface; concrete kinds override the oracles they support."""

    dim = 2
    kind = "body"
    smooth = True       # globally C^2 with strictly positive curvature
    piecewise = False   # piecewise-arc boundary (rounded square)

    # -- scalar oracles -------------------------------------------------
    def support(self, u):
        raise NotImplementedError

    def curvature_function(self, u):
        raise NotImplementedError

    def boundary_point(self, u):
        raise NotImplementedError

    def radial(self, u):
        raise NotImplementedError

    def polar_support(self, u):
        return 1.0 / self.radial(u)

    def polar_body(self):
        raise UnsupportedBodyError(f"{self.kind} has no polar-body construction")

    def linear_image(self, T):
        raise UnsupportedBodyError(f"{self.kind} has no linear-image construction")

    def contains(self, x, tol=1e-12):
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.dim:
            raise InputError("point dimension mismatch")
        r = np.linalg.norm(x)
        if r == 0.0:
            return True
        return r <= self.radial(x / r) * (1.0 + tol)

    # -- vectorized oracles over sphere nodes ----------------------------
    def support_nodes(self, nodes):
        return np.array([self.support(u) for u in nodes])

    def curvature_nodes(self, nodes):
        return np.array([self.curvature_function(u) for u in nodes])

    def radial_nodes(self, nodes):
        return np.array([self.radial(u) for u in nodes])


def _check_matrix(T, dim=None):
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise InputError("transform must be a square matrix")
    if dim is not None and T.shape[0] != dim:
        raise InputError("transform dimension mismatch")
    if abs(np.linalg.det(T)) < 1e-14:
        raise InputError("transform must be invertible")
    return T


class Ball(Body):
    kind = "ball"

    def __init__(self, r, dim=2):
        if not (r > 0 and math.isfinite(r)):
            raise InputError("ball radius must be positive")
        if dim < 2:
            raise InputError("dimension must be >= 2")
        self.r = float(r)
        self.dim = int(dim)

    def __repr__(self):
        return f"Ball(r={self.r:g}, dim={self.dim})"

    def kernel_rep(self):
        if self.dim != 2:
            raise InputError("2D kernel representation requested for dim != 2")
        return kernels.BALL, np.array([self.r])

    def matrix(self):
        return self.r * np.eye(self.dim)

    def support(self, u):
        unit_vector(u, self.dim)
        return self.r

    def curvature_function(self, u):
        unit_vector(u, self.dim)
        return self.r ** (self.dim - 1)

    def boundary_point(self, u):
        v = unit_vector(u, self.dim)
        return BoundaryPoint(self.r * v, v, self.r)

    def radial(self, u):
        unit_vector(u, self.dim)
        return self.r

    def polar_body(self):
        return Ball(1.0 / self.r, self.dim)

    def linear_image(self, T):
        T = _check_matrix(T, self.dim)
        return Ellipsoid(self.r * T)

    def support_nodes(self, nodes):
        return np.full(len(nodes), self.r)

    def curvature_nodes(self, nodes):
        return np.full(len(nodes), self.r ** (self.dim - 1))

    def radial_nodes(self, nodes):
        return np.full(len(nodes), self.r)

    # 2D angle-parametrized paths
    def support_theta(self, th):
        return np.full(np.shape(th), self.r)

    def dsupport_theta(self, th):
        return np.zeros(np.shape(th))

    def curvature_theta(self, th):
        return np.full(np.shape(th), self.r)

    def radial_theta(self, phis):
        return np.full(np.shape(phis), self.r)


class Ellipsoid(Body):
    """Image T(B) of the unit ball under an invertible linear map."""

    kind = "ellipsoid"

    def __init__(self, T):
        T = _check_matrix(T)
        self.T = T
        self.dim = T.shape[0]
        self.Tinv = np.linalg.inv(T)
        self.det = float(np.linalg.det(T))

    def __repr__(self):
        return f"Ellipsoid({np.array2string(self.T, precision=6, separator=',')})"

    def kernel_rep(self):
        if self.dim != 2:
            raise InputError("2D kernel representation requested for dim != 2")
        return kernels.ELLIPSE, np.ascontiguousarray(self.T.reshape(-1))

    def kernel_rep3(self):
        if self.dim != 3:
            raise InputError("3D kernel representation requested for dim != 3")
        return np.ascontiguousarray(self.T.reshape(-1))

    def support(self, u):
        v = unit_vector(u, self.dim)
        return float(np.linalg.norm(self.T.T @ v))

    def curvature_function(self, u):
        v = unit_vector(u, self.dim)
        h = float(np.linalg.norm(self.T.T @ v))
        return self.det**2 / h ** (self.dim + 1)

    def boundary_point(self, u):
        v = unit_vector(u, self.dim)
        w = self.T.T @ v
        h = float(np.linalg.norm(w))
        return BoundaryPoint(self.T @ w / h, v, h)

    def radial(self, u):
        v = unit_vector(u, self.dim)
        return 1.0 / float(np.linalg.norm(self.Tinv @ v))

    def polar_body(self):
        return Ellipsoid(self.Tinv.T)

    def linear_image(self, T):
        T = _check_matrix(T, self.dim)
        return Ellipsoid(T @ self.T)

    def support_nodes(self, nodes):
        return np.linalg.norm(nodes @ self.T, axis=1)

    def curvature_nodes(self, nodes):
        h = np.linalg.norm(nodes @ self.T, axis=1)
        return self.det**2 / h ** (self.dim + 1)

    def radial_nodes(self, nodes):
        return 1.0 / np.linalg.norm(nodes @ self.Tinv.T, axis=1)

    def support_theta(self, th):
        u = np.column_stack([np.cos(th), np.sin(th)])
        return np.linalg.norm(u @ self.T, axis=1)

    def dsupport_theta(self, th):
        u = np.column_stack([np.cos(th), np.sin(th)])
        up = np.column_stack([-np.sin(th), np.cos(th)])
        w = u @ self.T
        wp = up @ self.T
        return np.sum(w * wp, axis=1) / np.linalg.norm(w, axis=1)

    def curvature_theta(self, th):
        return self.det**2 / self.support_theta(th) ** 3

    def radial_theta(self, phis):
        u = np.column_stack([np.cos(phis), np.sin(phis)])
        return 1.0 / np.linalg.norm(u @ self.Tinv.T, axis=1)


def _trig_arrays(a0, a, b):
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    d = max(a.shape[0], b.shape[0])
    aa = np.zeros(d)
    bb = np.zeros(d)
    aa[: a.shape[0]] = a
    bb[: b.shape[0]] = b
    return float(a0), aa, bb


def _trig_eval_many(params, th, mode):
    # mode: 0 -> h, 1 -> h', 2 -> h + h''
    th = np.asarray(th, dtype=float)
    d = (params.shape[0] - 1) // 2
    a = params[1 : 1 + d]
    b = params[1 + d :]
    if d == 0:
        base = params[0] if mode != 1 else 0.0
        return np.full(th.shape, base)
    k = np.arange(1, d + 1)
    C = np.cos(np.outer(th, k))
    S = np.sin(np.outer(th, k))
    if mode == 0:
        return params[0] + C @ a + S @ b
    if mode == 1:
        return -(S * k) @ a + (C * k) @ b
    return params[0] + (C * (1.0 - k**2)) @ a + (S * (1.0 - k**2)) @ b


class TrigSupport2D(Body):
    """2D body with a finite trigonometric support series.

    Construction recenters the centroid at the origin (a degree-1 shift,
    computed with an exact circle rule) and then rejects bodies whose
    curvature function h + h'' is not strictly positive.
    """

    kind = "trig2d"
    dim = 2

    def __init__(self, a0, a=(), b=()):
        a0, a, b = _trig_arrays(a0, a, b)
        params = np.concatenate([[a0], a, b])
        params = self._recenter(params)
        self.params = np.ascontiguousarray(params)
        self.degree = (self.params.shape[0] - 1) // 2
        self._check_admissible()

    @staticmethod
    def _recenter(params):
        d = (params.shape[0] - 1) // 2
        m = max(64, 4 * (d + 2))
        th = 2.0 * math.pi * np.arange(m) / m
        w = 2.0 * math.pi / m
        h = _trig_eval_many(params, th, 0)
        hp = _trig_eval_many(params, th, 1)
        f = _trig_eval_many(params, th, 2)
        c, s = np.cos(th), np.sin(th)
        X = h * c - hp * s
        Y = h * s + hp * c
        area = 0.5 * w * math.fsum(h * f)
        if area <= 0:
            raise AdmissibilityError("support series does not bound a convex body")
        cx = 0.5 * w * math.fsum(X**2 * f * c) / area
        cy = 0.5 * w * math.fsum(Y**2 * f * s) / area
        if math.hypot(cx, cy) < 1e-14:
            return params
        out = params.copy()
        if d == 0:
            out = np.concatenate([[params[0]], [-cx], [-cy]])
        else:
            out[1] -= cx
            out[1 + d] -= cy
        return out

    def _check_admissible(self):
        th = 2.0 * math.pi * np.arange(_ADMISSIBILITY_GRID) / _ADMISSIBILITY_GRID
        f = _trig_eval_many(self.params, th, 2)
        if np.min(f) <= 0.0:
            raise AdmissibilityError(
                f"curvature function h + h'' reaches {np.min(f):.3e}; body is not C2+"
            )
        h = _trig_eval_many(self.params, th, 0)
        if np.min(h) <= 0.0:
            raise AdmissibilityError("support function must stay positive")

    def __repr__(self):
        return f"TrigSupport2D(degree={self.degree}, a0={self.params[0]:.6g})"

    def kernel_rep(self):
        return kernels.TRIG, self.params

    def support(self, u):
        v = unit_vector(u, 2)
        return float(kernels.support_2d(kernels.TRIG, self.params, math.atan2(v[1], v[0])))

    def curvature_function(self, u):
        v = unit_vector(u, 2)
        return float(kernels.curvature_2d(kernels.TRIG, self.params, math.atan2(v[1], v[0])))

    def boundary_point(self, u):
        v = unit_vector(u, 2)
        th = math.atan2(v[1], v[0])
        x, y = kernels.boundary_point_2d(kernels.TRIG, self.params, th)
        return BoundaryPoint(np.array([x, y]), v, float(kernels.support_2d(kernels.TRIG, self.params, th)))

    def radial(self, u):
        v = unit_vector(u, 2)
        return float(kernels.radial_scalar_2d(kernels.TRIG, self.params, math.atan2(v[1], v[0])))

    def polar_body(self):
        return _fit_polar_trig(self)

    def linear_image(self, T):
        T = _check_matrix(T, 2)
        return TransformedTrig2D(T, self.params)

    def support_nodes(self, nodes):
        return self.support_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def curvature_nodes(self, nodes):
        return self.curvature_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def radial_nodes(self, nodes):
        return self.radial_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def support_theta(self, th):
        return _trig_eval_many(self.params, th, 0)

    def dsupport_theta(self, th):
        return _trig_eval_many(self.params, th, 1)

    def curvature_theta(self, th):
        return _trig_eval_many(self.params, th, 2)

    def radial_theta(self, phis):
        phis = np.ascontiguousarray(np.asarray(phis, dtype=float).reshape(-1))
        return kernels.radial_many_2d(kernels.TRIG, self.params, phis)


class TransformedTrig2D(Body):
    """Linear image T(K) of a trig-support body; oracles go through the
    composed support h_K(T^t u) and the curvature transformation identity."""

    kind = "trig2d-linear"
    dim = 2

    def __init__(self, T, base_params):
        T = _check_matrix(T, 2)
        self.T = T
        self.base_params = np.ascontiguousarray(base_params, dtype=float)
        self.det = float(np.linalg.det(T))
        self.params = np.ascontiguousarray(
            np.concatenate([T.reshape(-1), self.base_params])
        )

    def __repr__(self):
        return f"TransformedTrig2D(det={self.det:.6g})"

    def kernel_rep(self):
        return kernels.TRIG_LINEAR, self.params

    def _theta(self, u):
        v = unit_vector(u, 2)
        return math.atan2(v[1], v[0]), v

    def support(self, u):
        th, _ = self._theta(u)
        return float(kernels.support_2d(kernels.TRIG_LINEAR, self.params, th))

    def curvature_function(self, u):
        th, _ = self._theta(u)
        return float(kernels.curvature_2d(kernels.TRIG_LINEAR, self.params, th))

    def boundary_point(self, u):
        th, v = self._theta(u)
        x, y = kernels.boundary_point_2d(kernels.TRIG_LINEAR, self.params, th)
        return BoundaryPoint(
            np.array([x, y]), v, float(kernels.support_2d(kernels.TRIG_LINEAR, self.params, th))
        )

    def radial(self, u):
        th, _ = self._theta(u)
        return float(kernels.radial_scalar_2d(kernels.TRIG_LINEAR, self.params, th))

    def polar_body(self):
        return _fit_polar_trig(self)

    def linear_image(self, T):
        T = _check_matrix(T, 2)
        return TransformedTrig2D(T @ self.T, self.base_params)

    def support_nodes(self, nodes):
        return self.support_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def curvature_nodes(self, nodes):
        return self.curvature_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def radial_nodes(self, nodes):
        return self.radial_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def _wphi(self, th):
        u = np.column_stack([np.cos(th), np.sin(th)])
        w = u @ self.T
        m = np.linalg.norm(w, axis=1)
        phi = np.arctan2(w[:, 1], w[:, 0])
        return w, m, phi

    def support_theta(self, th):
        th = np.asarray(th, dtype=float)
        _, m, phi = self._wphi(th)
        return m * _trig_eval_many(self.base_params, phi, 0)

    def dsupport_theta(self, th):
        th = np.asarray(th, dtype=float)
        u = np.column_stack([np.cos(th), np.sin(th)])
        up = np.column_stack([-np.sin(th), np.cos(th)])
        w = u @ self.T
        wp = up @ self.T
        m2 = np.sum(w * w, axis=1)
        m = np.sqrt(m2)
        phi = np.arctan2(w[:, 1], w[:, 0])
        mp = np.sum(w * wp, axis=1) / m
        phip = (w[:, 0] * wp[:, 1] - w[:, 1] * wp[:, 0]) / m2
        H = _trig_eval_many(self.base_params, phi, 0)
        Hp = _trig_eval_many(self.base_params, phi, 1)
        return mp * H + m * Hp * phip

    def curvature_theta(self, th):
        th = np.asarray(th, dtype=float)
        _, m, phi = self._wphi(th)
        F = _trig_eval_many(self.base_params, phi, 2)
        return self.det**2 * F / m**3

    def radial_theta(self, phis):
        phis = np.ascontiguousarray(np.asarray(phis, dtype=float).reshape(-1))
        return kernels.radial_many_2d(kernels.TRIG_LINEAR, self.params, phis)


def _fit_polar_trig(body, rel_tol=1e-8, grid=4096, max_degree=512):
    """Sample h_polar = 1/rho and refit a trig-support body adaptively."""
    th = 2.0 * math.pi * np.arange(grid) / grid
    hpol = 1.0 / body.radial_theta(th)
    F = np.fft.rfft(hpol) / grid
    a0 = F[0].real
    a_all = 2.0 * F[1:].real
    b_all = -2.0 * F[1:].imag
    scale = np.min(hpol)
    mags = np.abs(a_all) + np.abs(b_all)
    degree = None
    for d in range(1, min(max_degree, grid // 4)):
        if np.sum(mags[d:]) <= 0.25 * rel_tol * scale:
            degree = d
            break
    if degree is None:
        raise ApproximationError(
            "polar support refit did not reach the accuracy target",
            residual=float(np.sum(mags[max_degree:])),
        )
    candidate = TrigSupport2D(a0, a_all[:degree], b_all[:degree])
    # verify on an offset grid against freshly computed radial values
    th_chk = th + math.pi / grid
    target = 1.0 / body.radial_theta(th_chk)
    got = candidate.support_theta(th_chk)
    residual = float(np.max(np.abs(got - target) / target))
    if residual > rel_tol:
        raise ApproximationError(
            f"polar support refit residual {residual:.3e} above {rel_tol:.1e}",
            residual=residual,
        )
    return candidate


class RoundedSquare2D(Body):
    """Four large arcs of radius R joined by four corner arcs of radius eps.

    The body is the exact piecewise-arc curve with tangent-continuous joints;
    it is convex and C^1 but only piecewise C^2, so it is excluded from
    operations that need a globally smooth positive curvature.
    """

    kind = "rounded-square"
    dim = 2
    smooth = False
    piecewise = True

    def __init__(self, R, eps):
        if not (R > 1.0):
            raise InputError("rounded square needs R > 1")
        if not (0.0 < eps < 1.0):
            raise InputError("rounded square needs eps in (0, 1)")
        self.R = float(R)
        self.eps = float(eps)
        # normal angle where the big arc hands over to the corner arc
        self.alpha = math.acos((R - 1.0) / (math.sqrt(2.0) * (R - eps))) - math.pi / 4.0
        if self.alpha <= 0.0:
            raise InputError("arc geometry degenerate; need eps < 1")
        self.arcs = self._build_arcs()

    def _build_arcs(self):
        R, eps, al = self.R, self.eps, self.alpha
        arcs = []
        big_centers = [(-(R - 1.0), 0.0), (0.0, -(R - 1.0)), (R - 1.0, 0.0), (0.0, R - 1.0)]
        for q in range(4):
            mid = q * math.pi / 2.0
            cx, cy = big_centers[q]
            arcs.append((cx, cy, R, mid - al, mid + al))
            # corner arc center sits on the join normal, tangent-matched
            ject = mid + al
            ux, uy = math.cos(ject), math.sin(ject)
            ex = cx + (R - eps) * ux
            ey = cy + (R - eps) * uy
            arcs.append((ex, ey, eps, mid + al, mid + math.pi / 2.0 - al))
        return arcs

    def __repr__(self):
        return f"RoundedSquare2D(R={self.R:g}, eps={self.eps:g})"

    def arc_decomposition(self):
        """List of (cx, cy, radius, theta_lo, theta_hi) normal-angle pieces."""
        return list(self.arcs)

    def _arc_at(self, theta):
        t = (theta + self.alpha) % (2.0 * math.pi) - self.alpha
        for cx, cy, r, lo, hi in self.arcs:
            if lo - 1e-15 <= t <= hi + 1e-15:
                return cx, cy, r, t
        raise InputError("angle lookup failed")  # pragma: no cover

    def support(self, u):
        v = unit_vector(u, 2)
        cx, cy, r, t = self._arc_at(math.atan2(v[1], v[0]))
        return cx * math.cos(t) + cy * math.sin(t) + r

    def curvature_function(self, u):
        v = unit_vector(u, 2)
        _, _, r, _ = self._arc_at(math.atan2(v[1], v[0]))
        return r

    def boundary_point(self, u):
        v = unit_vector(u, 2)
        cx, cy, r, t = self._arc_at(math.atan2(v[1], v[0]))
        c, s = math.cos(t), math.sin(t)
        return BoundaryPoint(
            np.array([cx + r * c, cy + r * s]), np.array([c, s]), cx * c + cy * s + r
        )

    def radial(self, u):
        v = unit_vector(u, 2)
        for cx, cy, r, lo, hi in self.arcs:
            b = cx * v[0] + cy * v[1]
            disc = b * b - (cx * cx + cy * cy) + r * r
            if disc < 0.0:
                continue
            t = b + math.sqrt(disc)
            if t <= 0.0:
                continue
            # the touch normal on this circle must fall inside the arc span
            nx = t * v[0] - cx
            ny = t * v[1] - cy
            ang = math.atan2(ny, nx)
            ang = (ang - lo) % (2.0 * math.pi) + lo
            if lo - 1e-12 <= ang <= hi + 1e-12:
                return t
        raise InputError("radial lookup failed")  # pragma: no cover

    def support_theta(self, th):
        return np.array([self.support((math.cos(t), math.sin(t))) for t in np.atleast_1d(th)])

    def curvature_theta(self, th):
        return np.array(
            [self.curvature_function((math.cos(t), math.sin(t))) for t in np.atleast_1d(th)]
        )

    def radial_theta(self, phis):
        return np.array([self.radial((math.cos(p), math.sin(p))) for p in np.atleast_1d(phis)])

    def support_nodes(self, nodes):
        return self.support_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def curvature_nodes(self, nodes):
        return self.curvature_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))

    def radial_nodes(self, nodes):
        return self.radial_theta(np.arctan2(nodes[:, 1], nodes[:, 0]))


class Polygon2D(Body):
    """Convex polygon; only the illumination machinery and volume accept it."""

    kind = "polygon"
    dim = 2
    smooth = False

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 3:
            raise InputError("polygon needs at least 3 planar vertices")
        # enforce counterclockwise order
        area2 = np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1])
        if area2 < 0:
            V = V[::-1].copy()
            area2 = -area2
        edges = np.roll(V, -1, axis=0) - V
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(
            edges, -1, axis=0
        )[:, 0]
        if np.any(cross <= 1e-14):
            raise InputError("vertices must be in strictly convex position")
        lengths = np.linalg.norm(edges, axis=1)
        normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
        h = np.sum(normals * V, axis=1)
        if np.any(h <= 1e-12):
            raise InputError("origin must lie strictly inside the polygon")
        self.vertices = V
        self.edge_normals = normals
        self.edge_supports = h
        self.edge_lengths = lengths
        self.area = 0.5 * float(area2)

    def __repr__(self):
        return f"Polygon2D({self.vertices.shape[0]} vertices)"

    def support(self, u):
        v = unit_vector(u, 2)
        return float(np.max(self.vertices @ v))

    def curvature_function(self, u):
        raise UnsupportedBodyError("polygons have no curvature function")

    def boundary_point(self, u):
        raise UnsupportedBodyError("polygons have no unique normal touching point")

    def radial(self, u):
        v = unit_vector(u, 2)
        dots = self.edge_normals @ v
        mask = dots > 1e-14
        return float(np.min(self.edge_supports[mask] / dots[mask]))

    def linear_image(self, T):
        T = _check_matrix(T, 2)
        return Polygon2D(self.vertices @ T.T)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != 2:
            raise InputError("point dimension mismatch")
        return bool(np.all(self.edge_normals @ x <= self.edge_supports + tol))

    def support_nodes(self, nodes):
        return np.max(nodes @ self.vertices.T, axis=1)

    def radial_nodes(self, nodes):
        return np.array([self.radial(u) for u in nodes])


def unit_square():
    """The sup-norm unit ball, vertices (+-1, +-1)."""
    return Polygon2D([(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)])


def random_trig_body(rng, degree=5, amplitude=0.3, max_tries=64):
    """Random admissible trig-support body: |a_k|, |b_k| <= amplitude / k^3.

    Rejection-samples until the curvature function stays well above zero, so
    the corpus stays uniformly C2+.
    """
    for _ in range(max_tries):
        k = np.arange(1, degree + 1, dtype=float)
        a = rng.uniform(-1.0, 1.0, degree) * amplitude / k**3
        b = rng.uniform(-1.0, 1.0, degree) * amplitude / k**3
        try:
            body = TrigSupport2D(1.0, a, b)
        except AdmissibilityError:
            continue
        th = 2.0 * math.pi * np.arange(512) / 512
        if np.min(body.curvature_theta(th)) > 0.05:
            return body
    raise AdmissibilityError("failed to sample an admissible trig body")


def random_ellipsoid(rng, dim=2, log_spread=0.6):
    """Random well-conditioned centered ellipsoid."""
    A = rng.standard_normal((dim, dim))
    Q, _ = np.linalg.qr(A)
    scales = np.exp(rng.uniform(-log_spread, log_spread, dim))
    B = rng.standard_normal((dim, dim))
    Q2, _ = np.linalg.qr(B)
    return Ellipsoid(Q @ np.diag(scales) @ Q2)
