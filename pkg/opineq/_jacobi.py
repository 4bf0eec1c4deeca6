# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import math

import numpy as np
from numba import njit

MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-13


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += a[i, j] * a[i, j]
    return math.sqrt(total)


@njit(cache=True)
def _rotate(a, v, p, q):
    n = a.shape[0]
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    if theta >= 0.0:
        t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    for k in range(n):
        akp = a[k, p]
        akq = a[k, q]
        a[k, p] = c * akp - s * akq
        a[k, q] = s * akp + c * akq
    for k in range(n):
        apk = a[p, k]
        aqk = a[q, k]
        a[p, k] = c * apk - s * aqk
        a[q, k] = s * apk + c * aqk
    for k in range(n):
        vkp = v[k, p]
        vkq = v[k, q]
        v[k, p] = c * vkp - s * vkq
        v[k, q] = s * vkp + c * vkq


@njit(cache=True)
def jacobi_sweeps(matrix, max_sweeps, rtol):
    """
    Cyclic Jacobi on a symmetric matrix, rows then columns in natural
    order. Returns the unsorted diagonal, the accumulated rotations, the
    number of sweeps used and the final off-diagonal norm.
    """
    n = matrix.shape[0]
    a = matrix.copy()
    v = np.eye(n)
    threshold = rtol * math.sqrt(np.sum(a * a))
    off = _off_norm(a)
    sweeps = 0
    while off > threshold and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = _off_norm(a)
    diag = np.empty(n)
    for i in range(n):
        diag[i] = a[i, i]
    return diag, v, sweeps, off
