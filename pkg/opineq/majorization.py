# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Comparators on descending eigenvalue vectors: weak majorization,
majorization, top/bottom-k eigenvalue products, log-majorization gaps
and the Olson order.
"""
import math
from collections import namedtuple

import numpy as np

from opineq.errors import (EmptyGrid, IndexOutOfRange, LengthMismatch,
                           ArgumentOutOfRange)
from opineq.means import arith_mean, check_weight, geo_mean
from opineq.spectral import (DEFAULT_TOL, as_herm, loewner_cmp, mat_log,
                             mat_pow, require_pd)

DEFAULT_R_GRID = (1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0)

MajorizationResult = namedtuple('MajorizationResult',
                                ['holds', 'worst_k', 'margin', 'margins'])
OlsonResult = namedtuple('OlsonResult',
                         ['holds', 'failing_r', 'margins', 'r_grid'])


class EigVector(object):
    """
    A vector of reals sorted in non-increasing order.

    Args:
        values: the entries, which must already be non-increasing.
    """
    __slots__ = ('_values',)

    def __init__(self, values):
        arr = np.array(values, dtype=float).ravel()
        if np.any(np.diff(arr) > 0):
            raise ArgumentOutOfRange(
                "EigVector entries must be non-increasing: {}".format(
                    arr.tolist()))
        arr.setflags(write=False)
        self._values = arr

    @classmethod
    def sorted(cls, values):
        return cls(np.sort(np.asarray(values, dtype=float).ravel())[::-1])

    @classmethod
    def of(cls, a):
        """Eigenvalues of a symmetric matrix."""
        return cls(as_herm(a).eigenvalues)

    @property
    def values(self):
        return self._values

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return 'EigVector({})'.format(self._values.tolist())


def _as_eigvector(x):
    return x if isinstance(x, EigVector) else EigVector(x)


def prefix_sums(values):
    """Prefix sums with compensated (fsum) accumulation."""
    return np.array([math.fsum(values[:k])
                     for k in range(1, len(values) + 1)])


def weak_majorize(x, y, tol=DEFAULT_TOL):
    """
    Checks x weakly majorized by y: every prefix sum of x is at most the
    matching prefix sum of y.

    Args:
        x, y: EigVectors (or non-increasing sequences) of equal length.

        tol: a Tolerance. The slack is tol.abs + tol.rel * scale where
        scale = max(1, sum|x|, sum|y|).

    Returns:
        MajorizationResult(holds, worst_k, margin, margins) where
        margins[k-1] = prefix_y(k) - prefix_x(k), margin is their minimum
        and worst_k the smallest k attaining it (1-based).
    """
    x, y = _as_eigvector(x), _as_eigvector(y)
    if len(x) != len(y):
        raise LengthMismatch(
            "lengths differ: {} and {}".format(len(x), len(y)))
    margins = prefix_sums(y.values) - prefix_sums(x.values)
    worst = int(np.argmin(margins))
    scale = max(1.0, float(np.sum(np.abs(x.values))),
                float(np.sum(np.abs(y.values))))
    holds = bool(margins[worst] >= -tol.slack(scale))
    return MajorizationResult(holds, worst + 1, float(margins[worst]),
                              margins)


def majorize(x, y, tol=DEFAULT_TOL):
    """Weak majorization plus equal totals, within the same slack."""
    x, y = _as_eigvector(x), _as_eigvector(y)
    weak = weak_majorize(x, y, tol)
    scale = max(1.0, float(np.sum(np.abs(x.values))),
                float(np.sum(np.abs(y.values))))
    totals_equal = abs(weak.margins[-1]) <= tol.slack(scale)
    return bool(weak.holds and totals_equal)


def _log_eigenvalues(a, k):
    a = as_herm(a)
    if not 1 <= k <= a.dim:
        raise IndexOutOfRange(
            "k must lie in [1, {}], got {}".format(a.dim, k))
    require_pd(a, 'eigenvalue products')
    return np.log(a.eigenvalues)


def topk_prod(a, k):
    """Product of the k largest eigenvalues, as exp of a sum of logs."""
    logs = _log_eigenvalues(a, k)
    return math.exp(math.fsum(logs[:k]))


def bottomk_prod(a, k):
    """Product of the k smallest eigenvalues."""
    logs = _log_eigenvalues(a, k)
    return math.exp(math.fsum(logs[len(logs) - k:]))


def olson_leq(a, b, r_grid=DEFAULT_R_GRID, tol=DEFAULT_TOL):
    """
    Grid test of the Olson order: A^r <= B^r for every r in r_grid.

    This is a necessary condition only; a finite grid cannot certify the
    order for every r >= 1.

    Returns:
        OlsonResult(holds, failing_r, margins, r_grid) where failing_r is
        the first grid point at which A^r <= B^r fails (None if none).
    """
    a, b = as_herm(a), as_herm(b)
    require_pd(a, 'Olson order')
    require_pd(b, 'Olson order')
    r_grid = tuple(float(r) for r in r_grid)
    if not r_grid:
        raise EmptyGrid("Olson order needs a nonempty r grid")
    if any(r < 1.0 for r in r_grid):
        raise ArgumentOutOfRange(
            "Olson grid entries must be >= 1, got {}".format(r_grid))
    margins = []
    failing_r = None
    for r in r_grid:
        result = loewner_cmp(mat_pow(a, r), mat_pow(b, r), tol)
        margins.append(result.margin)
        if failing_r is None and not result.le:
            failing_r = r
    return OlsonResult(failing_r is None, failing_r, margins, r_grid)


def log_majorization_gap(a, b, v):
    """
    Per-k prefix-sum margins of log(A #_v B) against
    (1 - v) log A + v log B. Every entry is nonnegative when the
    log-majorization holds; the last entry is the trace gap.
    """
    v = check_weight(v)
    a, b = as_herm(a), as_herm(b)
    upper = arith_mean(mat_log(a), mat_log(b), v)
    lower = mat_log(geo_mean(a, b, v))
    return (prefix_sums(upper.eigenvalues) -
            prefix_sums(lower.eigenvalues))
