# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Weighted operator means and the scalar constants of the reverse
inequalities (Specht's ratio, the Kantorovich constant and the mu
combinations built from them).
"""
import math
from dataclasses import asdict, dataclass
from typing import Optional

from opineq.errors import (ArgumentOutOfRange, DimMismatch,
                           NonPositiveArgument)
from opineq.spectral import as_herm, inverse, mat_pow, require_pd

# below this distance from 1 Specht's ratio switches to its series
SPECHT_SERIES_RADIUS = 1e-4


def check_weight(v):
    """
    Validates a mean weight.

    Args:
        v: a real in [0, 1].

    Returns:
        v as a float.
    """
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ArgumentOutOfRange("weight must lie in [0, 1], got {}".format(v))
    return v


def _pair(a, b):
    a, b = as_herm(a), as_herm(b)
    if a.dim != b.dim:
        raise DimMismatch(
            "dimensions differ: {} and {}".format(a.dim, b.dim))
    return a, b


def arith_mean(a, b, v):
    """A nabla_v B = (1 - v) A + v B."""
    a, b = _pair(a, b)
    v = check_weight(v)
    if v == 0.0:
        return a
    if v == 1.0:
        return b
    return (1.0 - v) * a + v * b


def harm_mean(a, b, v):
    """A !_v B = ((1 - v) A^-1 + v B^-1)^-1, for positive definite A, B."""
    a, b = _pair(a, b)
    v = check_weight(v)
    inv_a, inv_b = inverse(a), inverse(b)
    if v == 0.0:
        return a
    if v == 1.0:
        return b
    return inverse((1.0 - v) * inv_a + v * inv_b)


def geo_mean(a, b, v):
    """
    Weighted geometric mean A #_v B = A^1/2 (A^-1/2 B A^-1/2)^v A^1/2.

    Args:
        a, b: positive definite HermMatrix operands.

        v: weight in [0, 1]; the endpoints return A or B unchanged.

    Returns:
        A #_v B as a HermMatrix.
    """
    a, b = _pair(a, b)
    v = check_weight(v)
    root = mat_pow(a, 0.5)
    inv_root = mat_pow(a, -0.5)
    require_pd(b, "geometric mean")
    if v == 0.0:
        return a
    if v == 1.0:
        return b
    inner = b.congruence(inv_root)
    return mat_pow(inner, v).congruence(root)


def _specht_log(t):
    u = t - 1.0
    if abs(u) < SPECHT_SERIES_RADIUS:
        y = -u / 2.0 + u * u / 3.0 - u ** 3 / 4.0 + u ** 4 / 5.0
        return y * y / 2.0 - y ** 3 / 3.0 + y ** 4 / 4.0
    log_t = math.log1p(u) if abs(u) < 0.5 else math.log(t)
    ratio = log_t / u
    if ratio < 0.5:
        # ratio - 1 rounds to -1 for large t
        return ratio - 1.0 - (math.log(log_t) - math.log(u))
    y = ratio - 1.0
    return y - math.log1p(y)


def specht(t):
    """
    Specht's ratio S(t) = t^(1/(t-1)) / (e log t^(1/(t-1))).

    Evaluated as exp(y - log(1 + y)) with y = log(t)/(t - 1) - 1, and by
    series in (t - 1) inside SPECHT_SERIES_RADIUS of 1, where S(1) = 1.
    Once log(t)/(t - 1) < 1/2 the log of the ratio is taken term by term,
    so S stays finite up to t ~ 1e300.
    """
    t = float(t)
    if not t > 0:
        raise NonPositiveArgument(
            "Specht's ratio needs t > 0, got {}".format(t))
    return math.exp(_specht_log(t))


def kantorovich(h):
    """Kantorovich constant K(h) = (h + 1)^2 / 4h."""
    h = float(h)
    if not h > 0:
        raise NonPositiveArgument(
            "Kantorovich constant needs h > 0, got {}".format(h))
    return (h + 1.0) ** 2 / (4.0 * h)


def mu(s, t):
    """mu(s, t) = max(S(s), S(t))."""
    if not (s > 0 and t > 0):
        raise ArgumentOutOfRange(
            "mu needs s, t > 0, got s={}, t={}".format(s, t))
    return max(specht(s), specht(t))


def mu_combined(r, s, t):
    """
    The concave-log constant S(e^(rt))^(1/r) S(e^t) for log-scale
    sandwich bounds 0 < s <= t and 0 < r <= 1.
    """
    if not 0.0 < r <= 1.0:
        raise ArgumentOutOfRange("r must lie in (0, 1], got {}".format(r))
    if not 0.0 < s <= t:
        raise ArgumentOutOfRange(
            "need 0 < s <= t, got s={}, t={}".format(s, t))
    return specht(math.exp(r * t)) ** (1.0 / r) * specht(math.exp(t))


def mu_alt(s, t, v):
    """max(K(s)^R, K(t)^R) with R = max(v, 1 - v)."""
    v = check_weight(v)
    if not (s > 0 and t > 0):
        raise ArgumentOutOfRange(
            "mu_alt needs s, t > 0, got s={}, t={}".format(s, t))
    big_r = max(v, 1.0 - v)
    return max(kantorovich(s) ** big_r, kantorovich(t) ** big_r)


@dataclass(frozen=True)
class ConstantBundle:
    """
    Every constant used by one check instance. For a plain sandwich
    ``s A <= B <= t A`` the Specht and Kantorovich values are taken at
    s and t; for an Olson sandwich ``e^s A <= B <= e^t A`` they are taken
    at e^s and e^t and M, N, mu_combined are filled in.
    """
    s: float
    t: float
    r: float
    v: float
    S_s: float
    S_t: float
    K_s: float
    K_t: float
    mu: float
    mu_alt: float
    R: float
    M: Optional[float] = None
    N: Optional[float] = None
    mu_combined: Optional[float] = None
    log_scale: bool = False

    @classmethod
    def for_sandwich(cls, s, t, v, r=1.0):
        v = check_weight(v)
        if not 0.0 < s <= t:
            raise ArgumentOutOfRange(
                "need 0 < s <= t, got s={}, t={}".format(s, t))
        return cls(s=float(s), t=float(t), r=float(r), v=v,
                   S_s=specht(s), S_t=specht(t),
                   K_s=kantorovich(s), K_t=kantorovich(t),
                   mu=mu(s, t), mu_alt=mu_alt(s, t, v),
                   R=max(v, 1.0 - v))

    @classmethod
    def for_olson(cls, s, t, v, r=1.0):
        v = check_weight(v)
        if not 0.0 < r <= 1.0:
            raise ArgumentOutOfRange("r must lie in (0, 1], got {}".format(r))
        if s > t:
            raise ArgumentOutOfRange(
                "need s <= t, got s={}, t={}".format(s, t))
        es, et = math.exp(s), math.exp(t)
        big_m = mu(math.exp(r * s), math.exp(r * t)) ** (1.0 / r)
        big_n = mu(es, et)
        combined = mu_combined(r, s, t) if s > 0 else None
        return cls(s=float(s), t=float(t), r=float(r), v=v,
                   S_s=specht(es), S_t=specht(et),
                   K_s=kantorovich(es), K_t=kantorovich(et),
                   mu=big_n, mu_alt=mu_alt(es, et, v),
                   R=max(v, 1.0 - v), M=big_m, N=big_n,
                   mu_combined=combined, log_scale=True)

    def variant(self, name):
        """The sandwich constant of the named variant."""
        if name == 'specht':
            return self.mu
        if name == 'kantorovich':
            return self.mu_alt
        raise ArgumentOutOfRange("unknown constant variant {}".format(name))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)
