"""Airy function Ai and its derivative on [-40, inf).

Three regimes:

* ``|x| <= X_SWITCH``: Maclaurin series, i.e. the local Taylor expansion of
  Ai'' = x Ai about 0.
* ``x > X_SWITCH``: the large-argument asymptotic series, truncated at its
  smallest term.
* ``x < -X_SWITCH``: Taylor expansion about the nearest anchor point of a
  grid with spacing 0.5 on [-40, 0]. Anchor values come from stepping the
  same Taylor expansion out from 0; both solutions of the ODE oscillate on
  the negative axis, so the stepping does not amplify error. The
  oscillatory asymptotic series only reaches ~1e-7 at |x| = 5, which is
  why it is not used there.

The switch sits where the two positive-side branches are equally accurate
(about 1e-13): at 4.8 the asymptotic series is still off by ~1e-11 while
the series is good to ~1e-14.
"""

import math

import numpy as np
from numba import njit

X_SWITCH = 5.4
X_MIN = -40.0
ANCHOR_STEP = 0.5

AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))


@njit(cache=True)
def _taylor_step(x0, y0, dy0, h):
    """Advance (Ai, Ai') from x0 to x0 + h through the Taylor series of y'' = x y."""
    # c_{k+2} = (x0 c_k + c_{k-1}) / ((k + 1)(k + 2)); t_k = c_k h^k is stored
    if h == 0.0:
        return y0, dy0
    cm1 = 0.0
    c0 = y0
    c1 = dy0 * h
    y = c0 + c1
    dy = c1
    k = 0
    quiet = 0
    while k < 400:
        c2 = (x0 * c0 * h * h + cm1 * h * h * h) / ((k + 1.0) * (k + 2.0))
        y += c2
        dy += (k + 2.0) * c2
        scale = abs(y) + abs(dy) + 1e-300
        if abs(c2) * (k + 3.0) <= 1e-17 * scale:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        cm1 = c0
        c0 = c1
        c1 = c2
        k += 1
    return y, dy / h


@njit(cache=True)
def _maclaurin(x):
    if x == 0.0:
        return AI0, AIP0
    return _taylor_step(0.0, AI0, AIP0, x)


@njit(cache=True)
def _asymptotic_positive(x):
    zeta = 2.0 / 3.0 * x**1.5
    if zeta > 700.0:
        return 0.0, 0.0
    su = 1.0
    sv = 1.0
    u = 1.0
    last = 1.0
    k = 1
    while k < 60:
        u_next = u * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k)
        term = u_next / zeta**k
        if term >= last:
            break
        sign = -1.0 if k % 2 == 1 else 1.0
        v_next = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u_next
        su += sign * term
        sv += sign * v_next / zeta**k
        last = term
        u = u_next
        if term < 1e-17:
            break
        k += 1
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * su / x**0.25, -pref * x**0.25 * sv


@njit(cache=True)
def _build_anchors():
    count = int(round(-X_MIN / ANCHOR_STEP)) + 1
    ai = np.empty(count)
    aip = np.empty(count)
    ai[0] = AI0
    aip[0] = AIP0
    for i in range(1, count):
        x0 = -(i - 1) * ANCHOR_STEP
        # two half steps keep the local series short
        y, dy = _taylor_step(x0, ai[i - 1], aip[i - 1], -0.5 * ANCHOR_STEP)
        ai[i], aip[i] = _taylor_step(x0 - 0.5 * ANCHOR_STEP, y, dy, -0.5 * ANCHOR_STEP)
    return ai, aip


_ANCHOR_AI, _ANCHOR_AIP = _build_anchors()


@njit(cache=True)
def airy_pair(x, anchor_ai, anchor_aip):
    """(Ai(x), Ai'(x)); NaN below X_MIN."""
    if x < X_MIN or math.isnan(x):
        return math.nan, math.nan
    if x > X_SWITCH:
        return _asymptotic_positive(x)
    if x >= -X_SWITCH:
        return _maclaurin(x)
    i = int(round(-x / ANCHOR_STEP))
    x0 = -i * ANCHOR_STEP
    return _taylor_step(x0, anchor_ai[i], anchor_aip[i], x - x0)


@njit(cache=True)
def airy_arrays(xs, anchor_ai, anchor_aip):
    ai = np.empty(xs.size)
    aip = np.empty(xs.size)
    for i in range(xs.size):
        ai[i], aip[i] = airy_pair(xs[i], anchor_ai, anchor_aip)
    return ai, aip


def airy(x):
    """Vectorised (Ai, Ai') for array-like ``x``."""
    xs = np.asarray(x, dtype=float)
    ai, aip = airy_arrays(xs.reshape(-1), _ANCHOR_AI, _ANCHOR_AIP)
    return ai.reshape(xs.shape), aip.reshape(xs.shape)


def maclaurin(x):
    """Series branch only, for overlap checks against the asymptotic branch."""
    return _maclaurin(float(x))


def asymptotic(x):
    """Asymptotic branch only (x > 0)."""
    return _asymptotic_positive(float(x))
