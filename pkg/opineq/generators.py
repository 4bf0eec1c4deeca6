# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Seeded random instances: positive definite matrices with a prescribed
spectral interval, sandwich pairs ``s A <= B <= t A`` and Olson
sandwich pairs ``e^s A <= B <= e^t A`` (Olson order on an r grid).
"""
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from opineq.errors import (ArgumentOutOfRange, BadInterval,
                           GeneratorExhausted, HypothesisViolation)
from opineq.majorization import DEFAULT_R_GRID, olson_leq
from opineq.spectral import (DEFAULT_TOL, HermMatrix, commutator_norm,
                             loewner_cmp, mat_pow, matrix_from_json,
                             matrix_to_json)

DEFAULT_INTERVAL = (0.1, 10.0)
OLSON_INTERVAL = (0.2, 5.0)
ABOVE_IDENTITY_INTERVAL = (1.1, 6.0)
# C in the search mode has its spectrum in [1, 1 + SEARCH_SPREAD]
SEARCH_SPREAD = 0.25
MAX_SEARCH_TRIES = 1000
COMMUTING_ATOL = 1e-8

FLAVORS = ('plain', 'olson', 'olson_above_identity')


def child_seed(seed, *keys):
    """
    Derives a seed for numpy.random.default_rng from a parent seed (an
    integer or a sequence of integers) and extra integer keys.
    """
    if isinstance(seed, (list, tuple)):
        base = [int(s) for s in seed]
    else:
        base = [int(seed)]
    return base + [int(k) for k in keys]


def random_orthogonal(n, rng):
    """Haar-distributed orthogonal matrix from a sign-corrected QR."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def _check_interval(interval):
    lo, hi = (float(x) for x in interval)
    if not (0.0 < lo <= hi and math.isfinite(hi)):
        raise BadInterval(
            "spectral interval must satisfy 0 < lo <= hi < inf, "
            "got ({}, {})".format(lo, hi))
    return lo, hi


def gen_pd(n, spectrum_interval=DEFAULT_INTERVAL, seed=0):
    """
    Random positive definite matrix Q diag(lambda) Q^T.

    Args:
        n: dimension, at least 1.

        spectrum_interval: closed interval (lo, hi) in (0, inf) holding
        the eigenvalues, which are drawn log-uniformly.

        seed: integer or sequence of integers for numpy's default_rng.

    Returns:
        A HermMatrix.
    """
    lo, hi = _check_interval(spectrum_interval)
    if int(n) < 1:
        raise ArgumentOutOfRange("dimension must be >= 1, got {}".format(n))
    n = int(n)
    rng = np.random.default_rng(seed)
    if lo == hi:
        eigs = np.full(n, lo)
        rng.uniform(size=n)
    else:
        eigs = np.clip(np.exp(rng.uniform(math.log(lo), math.log(hi), n)),
                       lo, hi)
    if n == 1:
        return HermMatrix([[eigs[0]]])
    q = random_orthogonal(n, rng)
    return HermMatrix.symmetrized((q * eigs) @ q.T)


def gen_commuting(n, interval, seed=0):
    """
    Two commuting positive definite matrices with spectra in ``interval``,
    sharing one random eigenbasis.
    """
    lo, hi = _check_interval(interval)
    rng = np.random.default_rng(seed)
    q = random_orthogonal(int(n), rng) if int(n) > 1 else np.ones((1, 1))
    pair = []
    for _ in range(2):
        eigs = np.exp(rng.uniform(math.log(lo), math.log(hi), int(n)))
        pair.append(HermMatrix.symmetrized((q * eigs) @ q.T))
    return tuple(pair)


@dataclass(frozen=True, eq=False)
class SandwichPair:
    """
    A pair (A, B) together with the scalars of its sandwich hypothesis.
    For the ``plain`` flavor ``s A <= B <= t A``; for the Olson flavors
    ``e^s A <= B <= e^t A`` in the Olson order on ``r_grid``, and for
    ``olson_above_identity`` also A, B > I.
    """
    a: HermMatrix
    b: HermMatrix
    s: float
    t: float
    flavor: str = 'plain'
    r_grid: Tuple[float, ...] = field(default=DEFAULT_R_GRID)

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ArgumentOutOfRange(
                "unknown sandwich flavor {!r}".format(self.flavor))
        if not 0.0 < self.s <= self.t:
            raise ArgumentOutOfRange(
                "need 0 < s <= t, got s={}, t={}".format(self.s, self.t))

    @property
    def dim(self):
        return self.a.dim

    def verify(self, tol=DEFAULT_TOL):
        """Raises HypothesisViolation unless the sandwich holds."""
        if self.flavor == 'plain':
            if not loewner_cmp(self.s * self.a, self.b, tol).le:
                raise HypothesisViolation("s A <= B", "s={}".format(self.s))
            if not loewner_cmp(self.b, self.t * self.a, tol).le:
                raise HypothesisViolation("B <= t A", "t={}".format(self.t))
            return
        low = olson_leq(math.exp(self.s) * self.a, self.b, self.r_grid, tol)
        if not low.holds:
            raise HypothesisViolation(
                "e^s A <= B in the Olson order",
                "fails at r={}".format(low.failing_r))
        high = olson_leq(self.b, math.exp(self.t) * self.a, self.r_grid, tol)
        if not high.holds:
            raise HypothesisViolation(
                "B <= e^t A in the Olson order",
                "fails at r={}".format(high.failing_r))
        if self.flavor == 'olson_above_identity':
            for name, m in (('A', self.a), ('B', self.b)):
                if not m.eigenvalues[-1] > 1.0:
                    raise HypothesisViolation(
                        "{} > I".format(name),
                        "smallest eigenvalue {}".format(m.eigenvalues[-1]))

    def to_dict(self):
        return {'A': matrix_to_json(self.a), 'B': matrix_to_json(self.b),
                's': self.s, 't': self.t, 'flavor': self.flavor,
                'r_grid': list(self.r_grid)}

    @classmethod
    def from_dict(cls, obj):
        return cls(matrix_from_json(obj['A']), matrix_from_json(obj['B']),
                   float(obj['s']), float(obj['t']), obj['flavor'],
                   tuple(float(r) for r in obj.get('r_grid',
                                                   DEFAULT_R_GRID)))


def gen_sandwich(n, s, t, seed=0, interval=DEFAULT_INTERVAL):
    """
    Plain sandwich pair with B = A^1/2 C A^1/2 and Sp(C) in [s, t], so
    ``s A <= B <= t A`` holds by congruence. For s == t, C = s I.
    """
    s, t = float(s), float(t)
    if not 0.0 < s <= t:
        raise ArgumentOutOfRange(
            "need 0 < s <= t, got s={}, t={}".format(s, t))
    a = gen_pd(n, interval, child_seed(seed, 0))
    if s == t:
        b = a if s == 1.0 else s * a
    else:
        c = gen_pd(n, (s, t), child_seed(seed, 1))
        b = c.congruence(mat_pow(a, 0.5))
    return SandwichPair(a, b, s, t, 'plain')


def effective_olson_bounds(a, b, r_grid=DEFAULT_R_GRID):
    """
    The tightest (s, t) with ``e^s A <= B <= e^t A`` in the Olson order on
    ``r_grid``: s = min_r log(lambda_min(A^-r/2 B^r A^-r/2)) / r and t the
    matching max over lambda_max.
    """
    lows, highs = [], []
    for r in r_grid:
        inner = mat_pow(b, r).congruence(mat_pow(a, -0.5 * r))
        lam = inner.eigenvalues
        lows.append(math.log(lam[-1]) / r)
        highs.append(math.log(lam[0]) / r)
    return min(lows), max(highs)


def gen_olson_sandwich(n, s, t, seed=0, mode='search', above_identity=False,
                       r_grid=DEFAULT_R_GRID, interval=None,
                       max_tries=MAX_SEARCH_TRIES):
    """
    Olson sandwich pair.

    Args:
        n: dimension.

        s, t: log-scale bounds, 0 < s <= t. The scale factor e^m of B is
        drawn with m in [s, t].

        seed: parent seed.

        mode: ``"scalar"`` gives B = e^m A, for which the Olson order holds
        for every r and the returned bounds are s = t = m. ``"search"``
        rejection-samples non-commuting pairs B = e^m A^1/2 C A^1/2 with
        C close to I and returns the effective bounds on ``r_grid``.

        above_identity: draw A with spectrum above 1 so that A, B > I.

        max_tries: retry cap of the search mode.

    Returns:
        A SandwichPair of flavor ``olson`` or ``olson_above_identity``.
    """
    s, t = float(s), float(t)
    if not 0.0 < s <= t:
        raise ArgumentOutOfRange(
            "need 0 < s <= t, got s={}, t={}".format(s, t))
    if interval is None:
        interval = ABOVE_IDENTITY_INTERVAL if above_identity \
            else OLSON_INTERVAL
    flavor = 'olson_above_identity' if above_identity else 'olson'
    r_grid = tuple(float(r) for r in r_grid)
    if mode == 'scalar':
        rng = np.random.default_rng(child_seed(seed, 2))
        m = s if s == t else float(rng.uniform(s, t))
        a = gen_pd(n, interval, child_seed(seed, 0))
        return SandwichPair(a, math.exp(m) * a, m, m, flavor, r_grid)
    if mode != 'search':
        raise ArgumentOutOfRange("unknown Olson mode {!r}".format(mode))
    for attempt in range(max_tries):
        rng = np.random.default_rng(child_seed(seed, attempt, 2))
        m = s if s == t else float(rng.uniform(s, t))
        a = gen_pd(n, interval, child_seed(seed, attempt, 0))
        c = gen_pd(n, (1.0, 1.0 + SEARCH_SPREAD),
                   child_seed(seed, attempt, 1))
        b = math.exp(m) * c.congruence(mat_pow(a, 0.5))
        if n > 1 and commutator_norm(a, b) <= COMMUTING_ATOL:
            continue
        low, high = effective_olson_bounds(a, b, r_grid)
        if low > 0:
            return SandwichPair(a, b, low, max(low, high), flavor, r_grid)
    raise GeneratorExhausted(
        "no Olson sandwich with s > 0 found in {} tries".format(max_tries))
