"""Compiled inner loops for the eigensolvers.

Status codes are returned instead of raising so the kernels stay nopython;
the wrappers in :mod:`wishart_eigs.eigensolve` turn them into exceptions.
"""

import math

import numpy as np
from numba import njit

OK = 0
NO_CONVERGENCE = 1
BRACKET_VIOLATION = 2

_SAFE_MIN = np.finfo(np.float64).tiny


@njit(cache=True, nogil=True, inline="always")
def _hypot(f, g):
    # plain sqrt is much cheaper than hypot and cannot overflow at these magnitudes
    if abs(f) < 1e150 and abs(g) < 1e150:
        return math.sqrt(f * f + g * g)
    return math.hypot(f, g)


@njit(cache=True, nogil=True)
def tql_eigenvalues(a, b, tol, max_iter):
    """Implicit-shift QL on a symmetric tridiagonal (eigenvalues only).

    Returns ``(eigenvalues, total_iterations, status, failed_index)``.
    ``max_iter`` bounds the QL sweeps spent on any single eigenvalue.
    """
    n = a.size
    d = a.copy()
    e = np.zeros(n)
    e[: n - 1] = b
    total = 0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= tol * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return d, total, NO_CONVERGENCE, l
            it += 1
            total += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                bb = c * e[i]
                r = _hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                inv = 1.0 / r
                s = f * inv
                c = g * inv
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, total, OK, -1


@njit(cache=True, nogil=True)
def pivot_floor(b):
    big = 1.0
    for i in range(b.size):
        big = max(big, b[i] * b[i])
    return _SAFE_MIN * big


@njit(cache=True, nogil=True)
def sturm_count(a, b, x, pivmin):
    """Number of eigenvalues strictly below ``x`` (LDL^T inertia count)."""
    n = a.size
    count = 0
    q = a[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = a[i] - x - b[i - 1] * b[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def gershgorin(a, b):
    n = a.size
    lo = np.inf
    hi = -np.inf
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(b[i - 1])
        if i < n - 1:
            r += abs(b[i])
        lo = min(lo, a[i] - r)
        hi = max(hi, a[i] + r)
    return lo, hi


@njit(cache=True, nogil=True)
def bisect_extreme(a, b, largest, width):
    """Bisection on Sturm counts for the smallest or largest eigenvalue.

    Returns ``(value, iterations)``; stops once the bracket is ``width`` wide.
    """
    n = a.size
    lo, hi = gershgorin(a, b)
    pivmin = pivot_floor(b)
    target = n if largest else 1
    it = 0
    while hi - lo > width and it < 2000:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if sturm_count(a, b, mid, pivmin) >= target:
            hi = mid
        else:
            lo = mid
        it += 1
    return 0.5 * (lo + hi), it


@njit(cache=True, nogil=True)
def _rescale(p0, p1, exponent):
    big = max(abs(p0), abs(p1))
    if big == 0.0 or not np.isfinite(big):
        return p0, p1, exponent
    _, e = math.frexp(big)
    return math.ldexp(p0, -e), math.ldexp(p1, -e), exponent + e


@njit(cache=True, nogil=True)
def charpoly_tridiag(a, b, lam):
    """P_n(lam) for the recurrence run from the bottom-right corner.

    ``a[0]`` is the top-left entry; the k-th step uses ``a[n - k]`` and the
    coupling ``b[n - k]``. Returns ``(mantissa, exponent)``.
    """
    n = a.size
    prev = 1.0
    cur = lam - a[n - 1]
    exponent = 0
    for k in range(2, n + 1):
        bk = b[n - k]
        nxt = (lam - a[n - k]) * cur - bk * bk * prev
        prev, cur, exponent = _rescale(cur, nxt, exponent)
    if n == 0:
        return 1.0, 0
    m, _unused, exponent = _rescale(cur, 0.0, exponent)
    return m, exponent


@njit(cache=True, nogil=True)
def charpoly_pencil(at, bt, x, j):
    """B_j(x) = det(x M_j - L_j) via its three-term recurrence.

    Returns ``(mantissa, exponent)``; ``j = 0`` gives 1.
    """
    if j == 0:
        return 1.0, 0
    prev = 1.0
    cur = x - at[0]
    exponent = 0
    for k in range(2, j + 1):
        nxt = (x - at[k - 1]) * cur - x * bt[k - 2] * prev
        prev, cur, exponent = _rescale(cur, nxt, exponent)
    m, _unused, exponent = _rescale(cur, 0.0, exponent)
    return m, exponent


@njit(cache=True, nogil=True)
def pencil_count_below(at, bt, x, j):
    """Number of roots of B_j below ``x`` (valid for x > 0).

    Runs the ratio form q_k = B_k / B_{k-1} of the recurrence; B_j has one
    root above x per negative q_k.
    """
    scale = 1.0
    for k in range(j - 1):
        scale = max(scale, x * bt[k])
    pivmin = _SAFE_MIN * scale
    negatives = 0
    q = x - at[0]
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        negatives += 1
    for k in range(1, j):
        q = (x - at[k]) - x * bt[k - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            negatives += 1
    return j - negatives


@njit(cache=True, nogil=True)
def pencil_root_levels(at, bt, tol, max_iter):
    """Roots of B_1, ..., B_n by progressive interlacing.

    Row ``j - 1`` of the returned matrix holds the j roots of B_j in
    ascending order. Root k of B_j is searched for between roots k - 1 and
    k of B_{j-1}; bisection moves on the root count below the midpoint, so
    an endpoint that lands on the wrong side of a nearly coincident root
    only widens the bracket to (0, trace_j]. A failure of the widened
    bracket is reported with ``(level, bracket, lo, hi)``.
    """
    n = at.size
    levels = np.zeros((n, n))
    total = 0
    trace = 0.0
    for j in range(1, n + 1):
        trace += at[j - 1]
        if j > 1:
            trace += bt[j - 2]
        upper = trace * (1.0 + 1e-12) + _SAFE_MIN
        for k in range(j):
            lo = 0.0 if k == 0 else levels[j - 2, k - 1]
            hi = upper if k == j - 1 else levels[j - 2, k]
            if pencil_count_below(at, bt, lo, j) > k or pencil_count_below(at, bt, hi, j) < k + 1:
                lo = 0.0
                hi = upper
                if pencil_count_below(at, bt, lo, j) > k or pencil_count_below(at, bt, hi, j) < k + 1:
                    return levels, total, BRACKET_VIOLATION, j, k, lo, hi
            it = 0
            while hi - lo > tol * hi and it < max_iter:
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                if pencil_count_below(at, bt, mid, j) >= k + 1:
                    hi = mid
                else:
                    lo = mid
                it += 1
            total += it
            levels[j - 1, k] = 0.5 * (lo + hi)
    return levels, total, OK, -1, -1, 0.0, 0.0


@njit(cache=True, nogil=True)
def _offdiag_norm(A):
    n = A.shape[0]
    acc = 0.0
    for p in range(n):
        for q in range(n):
            if p != q:
                acc += A[p, q].real ** 2 + A[p, q].imag ** 2
    return math.sqrt(acc)


@njit(cache=True, nogil=True)
def jacobi_hermitian(W, tol, max_sweeps):
    """Cyclic Jacobi on a complex Hermitian matrix (eigenvalues only).

    Returns ``(eigenvalues, sweeps, status)``.
    """
    A = W.astype(np.complex128).copy()
    n = A.shape[0]
    norm = 0.0
    for p in range(n):
        for q in range(n):
            norm += A[p, q].real ** 2 + A[p, q].imag ** 2
    norm = math.sqrt(norm)
    sweeps = 0
    while _offdiag_norm(A) > tol * norm:
        if sweeps == max_sweeps:
            out = np.empty(n)
            for i in range(n):
                out[i] = A[i, i].real
            return out, sweeps, NO_CONVERGENCE
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                ph = g / ag
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * ag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phc = ph.conjugate()
                # columns p, q  <-  A U  with U = diag-phase times rotation
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * phc * akq
                    A[k, q] = s * akp + c * phc * akq
                # rows p, q  <-  U^H (A U)
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * ph * aqk
                    A[q, k] = s * apk + c * ph * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = app - t * ag
                A[q, q] = aqq + t * ag
    out = np.empty(n)
    for i in range(n):
        out[i] = A[i, i].real
    return out, sweeps, OK
