"""Shape-preserving piecewise cubic Hermite interpolation, periodic variant.

The slopes are selected by the Fritsch-Carlson rule: zero whenever the
neighbouring secant slopes differ in sign (or either vanishes), otherwise
a (weighted) harmonic mean.  The interpolant never overshoots the data,
which keeps a boundary control built from bounded knot values inside the
same bounds.  The knot-to-slope map is piecewise smooth but has kinks
where a secant slope changes sign; the Jacobian returned here always
differentiates the currently active branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


def _slope_from_secants(d_prev: float, d_next: float, h_prev: float, h_next: float) -> float:
    d_prev, d_next = float(d_prev), float(d_next)
    if d_prev * d_next <= 0.0:
        return 0.0
    w1 = 2.0 * h_next + h_prev
    w2 = h_next + 2.0 * h_prev
    denom = w1 / d_prev + w2 / d_next
    return (w1 + w2) / denom if math.isfinite(denom) else 0.0


def _slope_branch_derivs(d_prev, d_next, h_prev, h_next):
    """(d, dd/d delta_prev, dd/d delta_next) for the active branch."""
    d_prev, d_next = float(d_prev), float(d_next)
    if d_prev * d_next <= 0.0:
        return 0.0, 0.0, 0.0
    w1 = 2.0 * h_next + h_prev
    w2 = h_next + 2.0 * h_prev
    denom = w1 / d_prev + w2 / d_next
    if not math.isfinite(denom):
        return 0.0, 0.0, 0.0
    d = (w1 + w2) / denom
    g = (w1 + w2) / denom**2
    return d, g * w1 / d_prev**2, g * w2 / d_next**2


def fc_slopes(x, y, periodic: bool = False) -> np.ndarray:
    """Fritsch-Carlson slopes at the knots.

    In periodic mode the data must close up (y[-1] == y[0], x[-1] - x[0]
    is the period) and the neighbour indices wrap, which enforces equal
    one-sided derivatives across the seam.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or len(x) < 2:
        raise ValueError("x and y must be 1-d arrays of equal length >= 2")
    h = np.diff(x)
    if np.any(h <= 0):
        raise ValueError("abscissae must be strictly increasing")
    delta = np.diff(y) / h
    n = len(x)
    d = np.zeros(n)
    if periodic:
        if len(x) < 4:
            raise ValueError("periodic data needs at least 3 distinct knots")
        if not math.isclose(y[0], y[-1], rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError("periodic data must satisfy y[-1] == y[0]")
        m = n - 1
        for k in range(m):
            d[k] = _slope_from_secants(delta[(k - 1) % m], delta[k],
                                       h[(k - 1) % m], h[k])
        d[m] = d[0]
        return d
    for k in range(1, n - 1):
        d[k] = _slope_from_secants(delta[k - 1], delta[k], h[k - 1], h[k])
    d[0] = _one_sided_end(h[0], h[1], delta[0], delta[1]) if n > 2 else delta[0]
    d[-1] = _one_sided_end(h[-1], h[-2], delta[-1], delta[-2]) if n > 2 else delta[-1]
    return d


def _one_sided_end(h0, h1, d0, d1):
    # standard shape-preserving three-point end rule
    d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if d * d0 <= 0.0:
        return 0.0
    if d0 * d1 < 0.0 and abs(d) > 3.0 * abs(d0):
        return 3.0 * d0
    return d


def _hermite_basis(s, h):
    s2, s3, h2, h3 = s * s, s * s * s, h * h, h * h * h
    by1 = (3.0 * h * s2 - 2.0 * s3) / h3
    by0 = 1.0 - by1
    bd1 = s2 * (s - h) / h2
    bd0 = s * (s - h) ** 2 / h2
    return by0, by1, bd0, bd1


def _hermite_basis_deriv(s, h):
    s2, h2, h3 = s * s, h * h, h * h * h
    dby1 = (6.0 * h * s - 6.0 * s2) / h3
    dbd1 = (3.0 * s2 - 2.0 * h * s) / h2
    dbd0 = (3.0 * s2 - 4.0 * h * s + h2) / h2
    return -dby1, dby1, dbd0, dbd1


def pchip_eval(x, y, d, t, periodic: bool = False, derivative: bool = False):
    """Evaluate the cubic Hermite interpolant (optionally also d/dt).

    Scalar ``t`` gives scalars; array ``t`` gives arrays.  Outside the
    data range, non-periodic evaluation raises; periodic evaluation wraps
    ``t`` modulo the period.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    scalar = np.isscalar(t) or np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if periodic:
        period = x[-1] - x[0]
        tt = x[0] + np.mod(t - x[0], period)
    else:
        if np.any(t < x[0] - 1e-12) or np.any(t > x[-1] + 1e-12):
            raise ValueError("query point outside the data range")
        tt = np.clip(t, x[0], x[-1])
    k = np.clip(np.searchsorted(x, tt, side="right") - 1, 0, len(x) - 2)
    s = tt - x[k]
    h = x[k + 1] - x[k]
    by0, by1, bd0, bd1 = _hermite_basis(s, h)
    val = by0 * y[k] + by1 * y[k + 1] + bd0 * d[k] + bd1 * d[k + 1]
    if derivative:
        c0, c1, c2, c3 = _hermite_basis_deriv(s, h)
        der = c0 * y[k] + c1 * y[k + 1] + c2 * d[k] + c3 * d[k + 1]
        if scalar:
            return float(val[0]), float(der[0])
        return val, der
    return float(val[0]) if scalar else val


@dataclass(frozen=True)
class ControlVector:
    """Periodic boundary control defined by knot values on a uniform grid.

    Knots sit at theta_k = k * 2*pi/n, k = 0..n-1, and the interpolant
    closes periodically with value a[0] at 2*pi.
    """

    a: np.ndarray
    u_min: float = 0.01
    u_max: float = 10.0

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        if a.ndim != 1 or len(a) < 3:
            raise ValueError("control needs at least 3 knot values")
        if not self.u_min < self.u_max:
            raise ValueError("u_min must be below u_max")
        object.__setattr__(self, "a", a)
        a.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def delta(self) -> float:
        return TWO_PI / self.n

    @property
    def knots(self) -> np.ndarray:
        return self.delta * np.arange(self.n)

    def closed_data(self):
        x = np.append(self.knots, TWO_PI)
        y = np.append(self.a, self.a[0])
        return x, y


def control_trace(ctrl: ControlVector, thetas) -> np.ndarray:
    """Control values at boundary angles via periodic FC slopes."""
    x, y = ctrl.closed_data()
    d = fc_slopes(x, y, periodic=True)
    return pchip_eval(x, y, d, thetas, periodic=True)


def control_jacobian(ctrl: ControlVector, thetas) -> np.ndarray:
    """B[i, k] = d u(theta_i) / d a_k for the active slope branches."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    n = ctrl.n
    x, y = ctrl.closed_data()
    h = np.diff(x)
    delta = np.diff(y) / h
    # per-knot slope and its derivatives w.r.t. the two adjacent secants
    dd_prev = np.zeros(n)
    dd_next = np.zeros(n)
    for k in range(n):
        _, dd_prev[k], dd_next[k] = _slope_branch_derivs(
            delta[(k - 1) % n], delta[k], h[(k - 1) % n], h[k])

    B = np.zeros((len(thetas), n))
    tt = np.mod(thetas, TWO_PI)
    k_arr = np.clip(np.searchsorted(x, tt, side="right") - 1, 0, n - 1)
    s_arr = tt - x[k_arr]
    for row, (k, s) in enumerate(zip(k_arr, s_arr)):
        by0, by1, bd0, bd1 = _hermite_basis(s, h[k])
        B[row, k % n] += by0
        B[row, (k + 1) % n] += by1
        for knot, w in ((k % n, bd0), ((k + 1) % n, bd1)):
            jp = (knot - 1) % n       # interval carrying delta_{knot-1}
            jn = knot                 # interval carrying delta_knot
            c1, c2 = dd_prev[knot], dd_next[knot]
            B[row, jp] += w * c1 * (-1.0 / h[jp])
            B[row, (jp + 1) % n] += w * c1 * (1.0 / h[jp])
            B[row, jn] += w * c2 * (-1.0 / h[jn])
            B[row, (jn + 1) % n] += w * c2 * (1.0 / h[jn])
    return B


# demo data showing the kinks of the knot-to-value map
KINK_DEMO_X = np.array([0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0, TWO_PI])
KINK_DEMO_QUERY = 0.3


def kink_sweep(a_values, query: float = KINK_DEMO_QUERY) -> np.ndarray:
    """u_a(query) for knot data (0, a, 1/2) closed periodically, per a."""
    a_values = np.atleast_1d(np.asarray(a_values, dtype=float))
    out = np.empty(len(a_values))
    for i, a in enumerate(a_values):
        y = np.array([0.0, a, 0.5, 0.0])
        d = fc_slopes(KINK_DEMO_X, y, periodic=True)
        out[i] = pchip_eval(KINK_DEMO_X, y, d, query, periodic=True)
    return out
