"""Compiled scalar kernels: polygamma functions and the geodesic integrator.

Everything here is numba-compiled and exception free.  Kernels signal failure
through NaN returns or integer status codes; the Python wrappers in the public
modules turn those into exceptions.
"""

import math

import numpy as np
from numba import njit, vectorize

# Shift threshold for the polygamma recurrence.  Above it the Bernoulli
# asymptotic series truncated at B_20 is accurate to ~1e-16 relative.
_SHIFT = 10.0

_B2 = 1.0 / 6.0
_B4 = -1.0 / 30.0
_B6 = 1.0 / 42.0
_B8 = -1.0 / 30.0
_B10 = 5.0 / 66.0
_B12 = -691.0 / 2730.0
_B14 = 7.0 / 6.0
_B16 = -3617.0 / 510.0
_B18 = 43867.0 / 798.0
_B20 = -174611.0 / 330.0

# Escape threshold for geodesics: the chart is the open positive quadrant and
# integration aborts once a coordinate falls to this value.
BOUNDARY_EPS = 1e-8

# Integrator status codes.
STATUS_OK = 0
STATUS_BOUNDARY = 1
STATUS_STIFF = 2


@njit(cache=True, nogil=True)
def psi0(x):
    """Digamma.  NaN outside (0, inf)."""
    if not (x > 0.0) or x == math.inf:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    u = inv * inv
    p = _B2 / 2 + u * (_B4 / 4 + u * (_B6 / 6 + u * (_B8 / 8 + u * (
        _B10 / 10 + u * (_B12 / 12 + u * (_B14 / 14 + u * (
            _B16 / 16 + u * (_B18 / 18 + u * (_B20 / 20)))))))))
    return acc + math.log(x) - 0.5 * inv - u * p


@njit(cache=True, nogil=True)
def psi1(x):
    """Trigamma.  NaN outside (0, inf)."""
    if not (x > 0.0) or x == math.inf:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    u = inv * inv
    p = _B2 + u * (_B4 + u * (_B6 + u * (_B8 + u * (_B10 + u * (
        _B12 + u * (_B14 + u * (_B16 + u * (_B18 + u * _B20))))))))
    return acc + inv + 0.5 * u + inv * u * p


@njit(cache=True, nogil=True)
def psi2(x):
    """Second derivative of digamma.  NaN outside (0, inf)."""
    if not (x > 0.0) or x == math.inf:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        acc -= 2.0 / (x * x * x)
        x += 1.0
    inv = 1.0 / x
    u = inv * inv
    p = 3 * _B2 + u * (5 * _B4 + u * (7 * _B6 + u * (9 * _B8 + u * (
        11 * _B10 + u * (13 * _B12 + u * (15 * _B14 + u * (
            17 * _B16 + u * (19 * _B18 + u * (21 * _B20)))))))))
    return acc - u - inv * u - u * u * p


@njit(cache=True, nogil=True)
def psi3(x):
    """Third derivative of digamma.  NaN outside (0, inf)."""
    if not (x > 0.0) or x == math.inf:
        return math.nan
    acc = 0.0
    while x < _SHIFT:
        xx = x * x
        acc += 6.0 / (xx * xx)
        x += 1.0
    inv = 1.0 / x
    u = inv * inv
    p = 12 * _B2 + u * (30 * _B4 + u * (56 * _B6 + u * (90 * _B8 + u * (
        132 * _B10 + u * (182 * _B12 + u * (240 * _B14 + u * (
            306 * _B16 + u * (380 * _B18 + u * (462 * _B20)))))))))
    return acc + inv * u * (2.0 + 3.0 * inv) + inv * u * u * p


@vectorize(["float64(float64)"], nopython=True, cache=True)
def psi0_u(x):
    return psi0(x)


@vectorize(["float64(float64)"], nopython=True, cache=True)
def psi1_u(x):
    return psi1(x)


@vectorize(["float64(float64)"], nopython=True, cache=True)
def psi2_u(x):
    return psi2(x)


@vectorize(["float64(float64)"], nopython=True, cache=True)
def psi3_u(x):
    return psi3(x)


@njit(cache=True, nogil=True)
def geodesic_accel(al, be, da, db):
    """Acceleration of the metric's geodesic flow at state (al, be, da, db).

    The quadratic coefficients follow from the Hessian structure of the
    metric: with first kind symbols equal to half the third partials of the
    potential, each second order equation has the form
    dd(x) + a x'^2 + b x' y' + c y'^2 = 0 with a, b, c rational in trigamma
    and its derivative at (al, be, al+be).
    """
    s = al + be
    ta = psi1(al)
    tb = psi1(be)
    ts = psi1(s)
    qa = psi2(al)
    qb = psi2(be)
    qs = psi2(s)
    d = ta * tb - ts * (ta + tb)
    half = 0.5 / d
    a_ab = (qa * tb - qa * ts - tb * qs) * half
    b_ab = -(tb * qs) / d
    c_ab = (qb * ts - tb * qs) * half
    a_ba = (qb * ta - qb * ts - ta * qs) * half
    b_ba = -(ta * qs) / d
    c_ba = (qa * ts - ta * qs) * half
    acc_a = -(a_ab * da * da + b_ab * da * db + c_ab * db * db)
    acc_b = -(a_ba * db * db + b_ba * da * db + c_ba * da * da)
    return acc_a, acc_b


@njit(cache=True, nogil=True)
def integrate_geodesic(y0, t_out, rtol, atol, max_steps):
    """Integrate the geodesic equations from t=0 with a Dormand-Prince 5(4)
    pair, landing exactly on every requested output time.

    y0 is the state (alpha, beta, dalpha, dbeta); t_out must be increasing and
    positive.  Returns (states at t_out, status, t_reached).  On a non-zero
    status the remaining output rows are left untouched by the solver and the
    caller must discard them.
    """
    n_out = t_out.shape[0]
    ys = np.empty((n_out, 4))
    y = y0.copy()
    t = 0.0
    k1 = np.empty(4)
    aa, ab = geodesic_accel(y[0], y[1], y[2], y[3])
    k1[0], k1[1], k1[2], k1[3] = y[2], y[3], aa, ab
    if not (math.isfinite(aa) and math.isfinite(ab)):
        return ys, STATUS_STIFF, t
    vnorm = math.sqrt(y[2] * y[2] + y[3] * y[3])
    h = min(0.05, 0.05 / (1.0 + vnorm))
    io = 0
    while io < n_out and t_out[io] <= t:
        for i in range(4):
            ys[io, i] = y[i]
        io += 1
    steps = 0
    yt = np.empty(4)
    yf = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    k5 = np.empty(4)
    k6 = np.empty(4)
    k7 = np.empty(4)
    while io < n_out:
        if steps >= max_steps:
            return ys, STATUS_STIFF, t
        steps += 1
        tt = t_out[io]
        clamped = t + h >= tt
        h_use = tt - t if clamped else h

        for i in range(4):
            yt[i] = y[i] + h_use * (0.2 * k1[i])
        aa, ab = geodesic_accel(yt[0], yt[1], yt[2], yt[3])
        k2[0], k2[1], k2[2], k2[3] = yt[2], yt[3], aa, ab
        for i in range(4):
            yt[i] = y[i] + h_use * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i])
        aa, ab = geodesic_accel(yt[0], yt[1], yt[2], yt[3])
        k3[0], k3[1], k3[2], k3[3] = yt[2], yt[3], aa, ab
        for i in range(4):
            yt[i] = y[i] + h_use * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i]
                                    + 32.0 / 9.0 * k3[i])
        aa, ab = geodesic_accel(yt[0], yt[1], yt[2], yt[3])
        k4[0], k4[1], k4[2], k4[3] = yt[2], yt[3], aa, ab
        for i in range(4):
            yt[i] = y[i] + h_use * (19372.0 / 6561.0 * k1[i]
                                    - 25360.0 / 2187.0 * k2[i]
                                    + 64448.0 / 6561.0 * k3[i]
                                    - 212.0 / 729.0 * k4[i])
        aa, ab = geodesic_accel(yt[0], yt[1], yt[2], yt[3])
        k5[0], k5[1], k5[2], k5[3] = yt[2], yt[3], aa, ab
        for i in range(4):
            yt[i] = y[i] + h_use * (9017.0 / 3168.0 * k1[i]
                                    - 355.0 / 33.0 * k2[i]
                                    + 46732.0 / 5247.0 * k3[i]
                                    + 49.0 / 176.0 * k4[i]
                                    - 5103.0 / 18656.0 * k5[i])
        aa, ab = geodesic_accel(yt[0], yt[1], yt[2], yt[3])
        k6[0], k6[1], k6[2], k6[3] = yt[2], yt[3], aa, ab
        for i in range(4):
            yf[i] = y[i] + h_use * (35.0 / 384.0 * k1[i]
                                    + 500.0 / 1113.0 * k3[i]
                                    + 125.0 / 192.0 * k4[i]
                                    - 2187.0 / 6784.0 * k5[i]
                                    + 11.0 / 84.0 * k6[i])
        aa, ab = geodesic_accel(yf[0], yf[1], yf[2], yf[3])
        k7[0], k7[1], k7[2], k7[3] = yf[2], yf[3], aa, ab

        err = 0.0
        finite = True
        for i in range(4):
            e = h_use * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i]
                         + 71.0 / 1920.0 * k4[i] - 17253.0 / 339200.0 * k5[i]
                         + 22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(yf[i]))
            q = e / sc
            err += q * q
            if not math.isfinite(yf[i]) or not math.isfinite(k7[i]):
                finite = False
        err = math.sqrt(err / 4.0)

        if finite and err <= 1.0:
            t = tt if clamped else t + h_use
            for i in range(4):
                y[i] = yf[i]
                k1[i] = k7[i]
            if y[0] <= BOUNDARY_EPS or y[1] <= BOUNDARY_EPS:
                return ys, STATUS_BOUNDARY, t
            if clamped:
                for i in range(4):
                    ys[io, i] = y[i]
                io += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            hn = h_use * fac
            if not clamped or hn > h:
                h = hn
        else:
            if not finite or not math.isfinite(err):
                h = 0.5 * h_use
            else:
                h = h_use * max(0.1, 0.9 * err ** -0.2)
            if h < 1e-13:
                # a step collapse right next to an axis is an escape, not
                # stiffness of an interior trajectory
                if y[0] <= 1e-5 or y[1] <= 1e-5:
                    return ys, STATUS_BOUNDARY, t
                return ys, STATUS_STIFF, t
    return ys, STATUS_OK, t


@njit(cache=True, nogil=True)
def shoot_geodesic(al, be, da, db, rtol, atol):
    """Endpoint of the unit-time geodesic from (al, be) with velocity
    (da, db).  Returns (state at t=1, status)."""
    y0 = np.empty(4)
    y0[0], y0[1], y0[2], y0[3] = al, be, da, db
    t_out = np.empty(1)
    t_out[0] = 1.0
    ys, status, _ = integrate_geodesic(y0, t_out, rtol, atol, 100000)
    return ys[0], status
