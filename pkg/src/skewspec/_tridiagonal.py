"""Numerical kernels: skew tridiagonalization and symmetric tridiagonal eigenvalues.

A real skew-symmetric matrix is orthogonally reduced by Householder
reflectors to a skew tridiagonal form (zero diagonal, off-diagonals +/-b_k).
Multiplying by -i and conjugating by the unitary diagonal matrix with
entries prod_j i*sign(b_j) turns that into the real symmetric tridiagonal
matrix with zero diagonal and off-diagonals |b_k|, whose eigenvalues are
computed by the implicit-shift QL iteration (the classical EISPACK imtql1
scheme), with a Sturm-count bisection solver as a convergence fallback.

All kernels run in pure IEEE double arithmetic with a fixed operation
order, so results are identical across thread counts and platforms.  When
numba is importable the kernels are JIT-compiled (nogil, cached); otherwise
the same code runs as plain Python.
"""

from __future__ import annotations

import numpy as np

_EPS = float(np.finfo(np.float64).eps)
_SAFMIN = float(np.finfo(np.float64).tiny)

try:
    from numba import njit as _njit

    def _jit(func):
        return _njit(cache=True, nogil=True)(func)

except ImportError:  # pragma: no cover - numba is a declared dependency

    def _jit(func):
        return func


@_jit
def _skew_tridiag_lower(a):
    """Householder-reduce skew-symmetric ``a`` in place; return off-diagonals b.

    Only the strict lower triangle of ``a`` is read or written (the upper
    triangle is implied by skew-symmetry throughout, which keeps the working
    matrix exactly skew-symmetric at every step).  ``a`` is destroyed.
    b[k] is the (k, k+1) entry of the reduced skew tridiagonal matrix.
    """
    n = a.shape[0]
    b = np.zeros(n - 1) if n > 1 else np.zeros(0)
    v = np.zeros(n)
    w = np.zeros(n)
    for k in range(n - 2):
        m = n - k - 1
        s = 0.0
        for i in range(m):
            t = a[k + 1 + i, k]
            v[i] = t
            s += t * t
        alpha = np.sqrt(s)
        if alpha == 0.0:
            b[k] = 0.0
            continue
        if v[0] > 0.0:
            alpha = -alpha
        v[0] -= alpha
        vv = 0.0
        for i in range(m):
            vv += v[i] * v[i]
        beta = 2.0 / vv
        # w = beta * A v on the trailing block, reading the lower triangle only
        for i in range(m):
            w[i] = 0.0
        for i in range(m):
            acc = 0.0
            vi = v[i]
            for j in range(i):
                t = a[k + 1 + i, k + 1 + j]
                acc += t * v[j]
                w[j] -= t * vi
            w[i] += acc
        for i in range(m):
            w[i] *= beta
        # A <- A + v w^T - w v^T (the two-sided reflector update for skew A)
        for i in range(m):
            vi = v[i]
            wi = w[i]
            for j in range(i):
                a[k + 1 + i, k + 1 + j] += vi * w[j] - wi * v[j]
        a[k + 1, k] = -alpha
        for i in range(1, m):
            a[k + 1 + i, k] = 0.0
        b[k] = alpha
    if n >= 2:
        b[n - 2] = -a[n - 1, n - 2]
    return b


@_jit
def _imtql1(d, ee):
    """Implicit-shift QL eigenvalues of a symmetric tridiagonal matrix.

    ``d`` holds the diagonal and is overwritten with the (unsorted)
    eigenvalues; ``ee`` has length n with the off-diagonals in ee[:n-1]
    and is destroyed.  Returns 0 on success, or l+1 if eigenvalue l did
    not converge within the iteration limit.
    """
    n = d.shape[0]
    if n <= 1:
        return 0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if it >= 50:
                return l + 1
            it += 1
            # Wilkinson shift from the leading 2x2 of the active block
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = np.hypot(g, 1.0)
            sg = r if g >= 0.0 else -r
            g = d[m] - d[l] + ee[l] / (g + sg)
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                bb = c * ee[i]
                if abs(f) > abs(g):
                    c = g / f
                    r = np.hypot(c, 1.0)
                    ee[i + 1] = f * r
                    s = 1.0 / r
                    c = c * s
                else:
                    s = f / g
                    r = np.hypot(s, 1.0)
                    ee[i + 1] = g * r
                    c = 1.0 / r
                    s = s * c
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return 0


@_jit
def _sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues of the tridiagonal matrix strictly below x."""
    n = d.shape[0]
    count = 0
    t = d[0] - x
    if abs(t) < pivmin:
        t = -pivmin
    if t < 0.0:
        count += 1
    for i in range(1, n):
        t = d[i] - x - e2[i - 1] / t
        if abs(t) < pivmin:
            t = -pivmin
        if t < 0.0:
            count += 1
    return count


@_jit
def _bisect_eigvals(d, e):
    """All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection."""
    n = d.shape[0]
    out = np.empty(n)
    if n == 0:
        return out
    if n == 1:
        out[0] = d[0]
        return out
    e2 = np.empty(n - 1)
    emax = 0.0
    for i in range(n - 1):
        e2[i] = e[i] * e[i]
        if abs(e[i]) > emax:
            emax = abs(e[i])
    pivmin = _SAFMIN * max(1.0, emax * emax)
    glo = d[0] - abs(e[0])
    ghi = d[0] + abs(e[0])
    for i in range(1, n):
        radius = 0.0
        if i > 0:
            radius += abs(e[i - 1])
        if i < n - 1:
            radius += abs(e[i])
        if d[i] - radius < glo:
            glo = d[i] - radius
        if d[i] + radius > ghi:
            ghi = d[i] + radius
    scale = max(abs(glo), abs(ghi), 1.0)
    glo -= 2.0 * _EPS * scale
    ghi += 2.0 * _EPS * scale
    for k in range(n):
        lo = glo
        hi = ghi
        while hi - lo > 2.0 * _EPS * max(abs(lo), abs(hi)) + 2.0 * pivmin:
            mid = 0.5 * (lo + hi)
            if _sturm_count(d, e2, mid, pivmin) > k:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out


def symtridiag_eigvals(d: np.ndarray, e: np.ndarray, method: str = "ql") -> np.ndarray:
    """Eigenvalues (ascending) of the symmetric tridiagonal matrix (d, e).

    ``method`` is "ql" (implicit-shift QL, falling back to bisection if an
    eigenvalue fails to converge) or "bisect" (Sturm bisection directly).
    """
    d = np.asarray(d, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    n = d.shape[0]
    if e.shape[0] != max(n - 1, 0):
        raise ValueError("off-diagonal must have length n-1")
    if method == "bisect":
        return np.sort(_bisect_eigvals(d.copy(), e.copy()))
    if method != "ql":
        raise ValueError(f"unknown method {method!r}")
    vals = d.copy()
    ee = np.zeros(n)
    ee[: n - 1] = e
    status = _imtql1(vals, ee)
    if status != 0:
        return np.sort(_bisect_eigvals(d.copy(), e.copy()))
    vals.sort()
    return vals


def warm_up() -> None:
    """Trigger JIT compilation of all kernels on a tiny problem."""
    a = np.array([[0.0, 1.0, 0.5], [-1.0, 0.0, 2.0], [-0.5, -2.0, 0.0]])
    b = _skew_tridiag_lower(a)
    symtridiag_eigvals(np.zeros(3), np.abs(b), method="ql")
    symtridiag_eigvals(np.zeros(3), np.abs(b), method="bisect")
