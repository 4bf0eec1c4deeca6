# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
One executable check per inequality. Every check takes a concrete
instance, computes named margins (nonnegative when the inequality
holds on the instance, normalised so that a tolerance applies
uniformly) and returns a CheckReport. The report stores the encoded
arguments so that ``replay`` can recompute it exactly.
"""
import functools
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from opineq.catalog import FunctionSpec, adjoint, check_geom_convex_scalar
from opineq.catalog import instance_margin, is_monotone_scalar
from opineq.errors import (ArgumentOutOfRange, HypothesisViolation,
                           OpineqError)
from opineq.generators import SandwichPair
from opineq.majorization import (DEFAULT_R_GRID, bottomk_prod,
                                 log_majorization_gap, olson_leq,
                                 topk_prod, weak_majorize)
from opineq.means import (ConstantBundle, arith_mean, check_weight,
                          geo_mean, harm_mean, mu_combined)
from opineq.spectral import (DEFAULT_TOL, HermMatrix, Tolerance, apply_fn,
                             as_herm, loewner_margin, mat_log, mat_pow,
                             matrix_from_json, matrix_to_json,
                             require_commuting)

VERDICTS = ('pass', 'fail', 'skipped')
VARIANTS = ('specht', 'kantorovich')
DIRECTIONS = ('derived', 'printed')
# |det(A #_v B) - det(A)^(1-v) det(B)^v| relative, and the trace gap of
# the log-majorization, above this are reported
EQUALITY_RTOL = 1e-8
ABOVE_IDENTITY_GAP = 1e-6
REPLAY_ATOL = 1e-12


@dataclass
class CheckReport:
    """
    Result of one check on one instance.

    ``instance`` holds the registry name of the check function under
    ``fn``, its encoded arguments under ``args`` and, when produced by
    the suite, the trial ``seed``. ``margin`` is the smallest gating
    margin; ``margins`` has every named margin, gating or not.
    """
    check_id: str
    instance: dict
    verdict: str
    margin: float
    constants: Optional[dict] = None
    notes: str = ''
    margins: dict = field(default_factory=dict)
    findings: list = field(default_factory=list)

    @property
    def passed(self):
        return self.verdict == 'pass'

    @property
    def seed(self):
        return self.instance.get('seed')

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, line):
        return cls.from_dict(json.loads(line))

    def relabel(self, check_id, seed=None):
        instance = dict(self.instance)
        if seed is not None:
            instance['seed'] = seed
        return replace(self, check_id=check_id, instance=instance)


def encode_value(value):
    """JSON form of a check argument, tagged by type."""
    if isinstance(value, HermMatrix):
        return {'matrix': matrix_to_json(value)}
    if isinstance(value, FunctionSpec):
        return {'function': value.to_dict()}
    if isinstance(value, SandwichPair):
        return {'pair': value.to_dict()}
    if isinstance(value, Tolerance):
        return {'tolerance': [value.rel, value.abs]}
    if isinstance(value, np.ndarray):
        return {'vector': value.astype(float).tolist()}
    if isinstance(value, (list, tuple)):
        return {'list': [encode_value(v) for v in value]}
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


_DECODERS = {
    'matrix': matrix_from_json,
    'function': FunctionSpec.from_dict,
    'pair': SandwichPair.from_dict,
    'tolerance': lambda obj: Tolerance(*obj),
    'vector': lambda obj: np.array(obj, dtype=float),
    'list': lambda obj: [decode_value(v) for v in obj],
}


def decode_value(value):
    if isinstance(value, dict) and len(value) == 1:
        (tag, payload), = value.items()
        if tag in _DECODERS:
            return _DECODERS[tag](payload)
    return value


def encode_args(args):
    return {name: encode_value(value) for name, value in args.items()}


def decode_args(args):
    return {name: decode_value(value) for name, value in args.items()}


# margin helpers

def _rel_gap(lhs, rhs):
    """(rhs - lhs) / max(1, |lhs|, |rhs|): nonnegative iff lhs <= rhs."""
    return float((rhs - lhs) / max(1.0, abs(lhs), abs(rhs)))


def _log_gap(lhs, rhs):
    """log(rhs) - log(lhs) for positive scalars."""
    if lhs <= 0 or rhs <= 0:
        return _rel_gap(lhs, rhs)
    return float(math.log(rhs) - math.log(lhs))


def _eig_gaps(lhs, rhs):
    """Per-k gaps of descending eigenvalue vectors, shared scale."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = max(1.0, float(np.max(np.abs(lhs))),
                float(np.max(np.abs(rhs))))
    return (rhs - lhs) / scale


def _threshold(tol):
    return tol.rel + tol.abs


def _finish(fn, args, margins, gating, tol, constants=None, notes='',
            findings=()):
    margin = min(margins[name] for name in gating)
    verdict = 'pass' if margin >= -_threshold(tol) else 'fail'
    return CheckReport(fn, {'fn': fn, 'args': encode_args(args)}, verdict,
                       float(margin), constants, notes, dict(margins),
                       list(findings))


def _variants(variant):
    if variant == 'both':
        return VARIANTS
    if variant not in VARIANTS:
        raise ArgumentOutOfRange(
            "unknown constant variant {!r}".format(variant))
    return (variant,)


def _conjugate(p, q):
    p, q = float(p), float(q)
    if not (p > 1 and q > 1 and abs(1.0 / p + 1.0 / q - 1.0) <= 1e-12):
        raise ArgumentOutOfRange(
            "need p, q > 1 with 1/p + 1/q = 1, got p={}, q={}".format(p, q))
    return p, q


def _unit(x):
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if norm == 0:
        raise ArgumentOutOfRange("x must be nonzero")
    return x / norm


def _require_claim(f, flag):
    if not f.claimed(flag):
        raise HypothesisViolation(
            "{} is {}".format(f.key, flag.replace('_', ' ')),
            "the catalog does not claim it")


def _require_above_identity(*matrices):
    for m in matrices:
        if not m.eigenvalues[-1] > 1.0 + ABOVE_IDENTITY_GAP:
            raise HypothesisViolation(
                "A, B > I",
                "smallest eigenvalue {}".format(m.eigenvalues[-1]))


def _plain_constants(pair, v, verify_hypothesis, tol):
    if verify_hypothesis:
        if pair.flavor != 'plain':
            raise HypothesisViolation("plain sandwich s A <= B <= t A",
                                      "got a {} pair".format(pair.flavor))
        pair.verify(tol)
    return ConstantBundle.for_sandwich(pair.s, pair.t, v)


def _mus(bundle, variant, mu_override):
    names = _variants(variant)
    if mu_override is not None:
        return {name: float(mu_override) for name in names}
    return {name: bundle.variant(name) for name in names}


def _constants_dict(bundle, mu_override=None):
    constants = bundle.to_dict()
    if mu_override is not None:
        constants['mu_override'] = float(mu_override)
    return constants


def _images(f, *matrices):
    return [apply_fn(m, f) for m in matrices]


# checks of the means and of the function classes

def check_young_chain(a, b, v, tol=DEFAULT_TOL):
    """A !_v B <= A #_v B <= A nabla_v B."""
    args = dict(a=a, b=b, v=v, tol=tol)
    harm, geo = harm_mean(a, b, v), geo_mean(a, b, v)
    margins = {'harmonic_geometric': loewner_margin(harm, geo),
               'geometric_arithmetic': loewner_margin(
                   geo, arith_mean(a, b, v))}
    return _finish('young_chain', args, margins, list(margins), tol)


def check_reverse_young(pair, v, r=1.0, variant='both', mu_override=None,
                        tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    A nabla_v B <= mu(s, t) (A #_v B) under s A <= B <= t A, for each
    constant variant, and the power form
    A^r #_v B^r <= mu^r(s, t) (A #_v B)^r for 0 < r <= 1 with Specht's
    constant.
    """
    args = dict(pair=pair, v=v, r=r, variant=variant,
                mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    if not 0.0 < float(r) <= 1.0:
        raise ArgumentOutOfRange("r must lie in (0, 1], got {}".format(r))
    bundle = _plain_constants(pair, v, verify_hypothesis, tol)
    mus = _mus(bundle, variant, mu_override)
    a, b = pair.a, pair.b
    geo = geo_mean(a, b, v)
    arith = arith_mean(a, b, v)
    margins = {}
    for name, mu in mus.items():
        margins['young_' + name] = loewner_margin(arith, mu * geo)
    mu_s = bundle.mu if mu_override is None else float(mu_override)
    margins['power_specht'] = loewner_margin(
        geo_mean(mat_pow(a, r), mat_pow(b, r), v),
        mu_s ** r * mat_pow(geo, r))
    return _finish('reverse_young', args, margins, list(margins), tol,
                   _constants_dict(bundle, mu_override))


def check_log_majorization(a, b, v, tol=DEFAULT_TOL):
    """
    log(A #_v B) majorized by log A nabla_v log B. A trace gap beyond
    EQUALITY_RTOL is reported as a finding.
    """
    args = dict(a=a, b=b, v=v, tol=tol)
    a, b = as_herm(a), as_herm(b)
    gaps = log_majorization_gap(a, b, v)
    upper = arith_mean(mat_log(a), mat_log(b), v).eigenvalues
    scale = max(1.0, float(np.sum(np.abs(upper))))
    margins = {'k{}'.format(k + 1): float(g / scale)
               for k, g in enumerate(gaps)}
    findings = []
    if abs(gaps[-1]) > EQUALITY_RTOL * scale:
        findings.append("trace gap {:.3e} exceeds {:g}".format(
            gaps[-1], EQUALITY_RTOL))
    return _finish('log_majorization', args, margins, list(margins), tol,
                   findings=findings)


def check_function_class(f, predicate, a, b, v=0.5, tol=DEFAULT_TOL):
    """
    One instance of a class predicate of ``f``, e.g.
    ``op_geodesically_convex``. Monotonicity predicates expect A <= B.
    """
    args = dict(f=f, predicate=predicate, a=a, b=b, v=v, tol=tol)
    margins = {predicate: instance_margin(predicate, f, a, b, v)}
    return _finish('function_class', args, margins, [predicate], tol)


def check_adjoint_refinement(g, a, b, v, tol=DEFAULT_TOL,
                             verify_hypothesis=True):
    """
    g*(A #_v B) <= g*(A) !_v g*(B) <= g*(A) nabla_v g*(B) for the adjoint
    g* of a positive operator geodesically concave g.
    """
    args = dict(g=g, a=a, b=b, v=v, tol=tol,
                verify_hypothesis=verify_hypothesis)
    if verify_hypothesis:
        _require_claim(g, 'op_geodesically_concave')
    star = adjoint(g)
    ga, gb, gm = _images(star, a, b, geo_mean(a, b, v))
    harm = harm_mean(ga, gb, v)
    margins = {'adjoint_harmonic': loewner_margin(gm, harm),
               'harmonic_arithmetic': loewner_margin(
                   harm, arith_mean(ga, gb, v))}
    return _finish('adjoint_refinement', args, margins, list(margins), tol)


def check_spectral_functional(functional, a, b, v, alpha=2.0, k=1,
                              tol=DEFAULT_TOL):
    """
    F(A #_v B) <= (1 - v) F(A) + v F(B) for a geodesically convex
    spectral functional: ``trace_exp`` (tr e^A), ``trace_pow``
    (tr A^alpha), ``lambda1_exp``, ``lambda1_pow``, ``topk_prod`` and
    ``det``. alpha must be at least 1.
    """
    args = dict(functional=functional, a=a, b=b, v=v, alpha=alpha, k=k,
                tol=tol)
    v = check_weight(v)
    if float(alpha) < 1.0:
        raise ArgumentOutOfRange("alpha must be >= 1, got {}".format(alpha))
    a, b = as_herm(a), as_herm(b)
    functionals = {
        'trace_exp': lambda m: math.fsum(np.exp(m.eigenvalues)),
        'trace_pow': lambda m: math.fsum(m.eigenvalues ** alpha),
        'lambda1_exp': lambda m: math.exp(m.eigenvalues[0]),
        'lambda1_pow': lambda m: m.eigenvalues[0] ** alpha,
        'topk_prod': lambda m: topk_prod(m, k),
        'det': lambda m: topk_prod(m, m.dim),
    }
    try:
        fn = functionals[functional]
    except KeyError:
        raise ArgumentOutOfRange(
            "unknown spectral functional {!r}".format(functional))
    lhs = fn(geo_mean(a, b, v))
    rhs = (1.0 - v) * fn(a) + v * fn(b)
    margins = {functional: _log_gap(lhs, rhs)}
    return _finish('spectral_functional', args, margins, [functional], tol)


# Aczel type inequalities

def check_aczel_geodesic(g, a, b, p, q, x, tol=DEFAULT_TOL,
                         verify_hypothesis=True):
    """
    For a positive operator geodesically concave g and conjugate p, q:
    g(A^p #_1/q B^q) >= g(A^p) #_1/q g(B^q), and for the unit vector
    y = x / |x|, <g(A^p #_1/q B^q) y, y> >= <g(A^p) y, y>^(1/p)
    <g(B^q) y, y>^(1/q). The margin ``chain`` is the intermediate
    arithmetic-mean step.
    """
    args = dict(g=g, a=a, b=b, p=p, q=q, x=x, tol=tol,
                verify_hypothesis=verify_hypothesis)
    p, q = _conjugate(p, q)
    if verify_hypothesis:
        _require_claim(g, 'op_geodesically_concave')
    y = _unit(x)
    a_p, b_q = mat_pow(a, p), mat_pow(b, q)
    v = 1.0 / q
    ga, gb, gm = _images(g, a_p, b_q, geo_mean(a_p, b_q, v))
    qa, qb, qm = (m.quadratic_form(y) for m in (ga, gb, gm))
    margins = {
        'operator': loewner_margin(geo_mean(ga, gb, v), gm),
        'vector': _rel_gap(qa ** (1.0 / p) * qb ** (1.0 / q), qm),
        'chain': _rel_gap(qa / p + qb / q, qm),
    }
    notes = ("vector form checked with g(B^q) as stated; the "
             "arithmetic-mean step of its derivation writes g(A^q)")
    return _finish('aczel_geodesic', args, margins, list(margins), tol,
                   notes=notes)


def check_aczel_commuting(a, b, p, q, x, tol=DEFAULT_TOL):
    """
    For commuting A, B with spectra in (0, 1) and unit y:
    1 - |(AB)^1/2 y|^2 >= (1 - |A^p/2 y|^2)^(1/p) (1 - |B^q/2 y|^2)^(1/q).
    """
    args = dict(a=a, b=b, p=p, q=q, x=x, tol=tol)
    p, q = _conjugate(p, q)
    a, b = as_herm(a), as_herm(b)
    require_commuting(a, b)
    for name, m in (('A', a), ('B', b)):
        lam = m.eigenvalues
        if not (lam[-1] > 0.0 and lam[0] < 1.0):
            raise HypothesisViolation(
                "spectrum of {} inside (0, 1)".format(name),
                "eigenvalues {}".format(lam.tolist()))
    y = _unit(x)
    product = HermMatrix.symmetrized(a.entries @ b.entries)
    lhs = 1.0 - product.quadratic_form(y)
    rhs = (1.0 - mat_pow(a, p).quadratic_form(y)) ** (1.0 / p) * \
        (1.0 - mat_pow(b, q).quadratic_form(y)) ** (1.0 / q)
    margins = {'aczel': _rel_gap(rhs, lhs)}
    return _finish('aczel_commuting', args, margins, ['aczel'], tol)


# convex-log and concave-log functions

def check_convexlog_weak_major(f, a, b, v, tol=DEFAULT_TOL,
                               verify_hypothesis=True):
    """
    f(A #_v B) weakly majorized by f(A) nabla_v f(B) for an operator
    convex-log f and A, B > I.
    """
    args = dict(f=f, a=a, b=b, v=v, tol=tol,
                verify_hypothesis=verify_hypothesis)
    a, b = as_herm(a), as_herm(b)
    if verify_hypothesis:
        _require_above_identity(a, b)
        _require_claim(f, 'convex_log')
    fa, fb, fm = _images(f, a, b, geo_mean(a, b, v))
    upper = arith_mean(fa, fb, v).eigenvalues
    result = weak_majorize(fm.eigenvalues, upper, tol)
    scale = max(1.0, float(np.sum(np.abs(fm.eigenvalues))),
                float(np.sum(np.abs(upper))))
    margins = {'k{}'.format(k + 1): float(m / scale)
               for k, m in enumerate(result.margins)}
    return _finish('convexlog_weak_major', args, margins, list(margins), tol)


def _olson_constants(pair, v, r, verify_hypothesis, tol, above_identity):
    if verify_hypothesis:
        if pair.flavor == 'plain':
            raise HypothesisViolation("Olson sandwich e^s A <= B <= e^t A",
                                      "got a plain pair")
        if above_identity and pair.flavor != 'olson_above_identity':
            raise HypothesisViolation("e^s I < e^s A",
                                      "got a {} pair".format(pair.flavor))
        pair.verify(tol)
    return ConstantBundle.for_olson(pair.s, pair.t, v, r)


def _eigen_bound_margins(lhs, rhs, tol):
    margins = {'k{}'.format(k + 1): float(m)
               for k, m in enumerate(_eig_gaps(lhs, rhs))}
    weak = weak_majorize(lhs, rhs, tol)
    scale = max(1.0, float(np.sum(np.abs(lhs))), float(np.sum(np.abs(rhs))))
    margins['weak'] = float(weak.margin / scale)
    return margins


def check_log_mean_reverse(pair, v, r=1.0, mu_override=None,
                           tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    lambda_k(log A nabla_v log B) <= lambda_k(log(MN (A #_v B))) for an
    Olson sandwich, with M = mu(e^rs, e^rt)^(1/r), N = mu(e^s, e^t), and
    the weak majorization it implies.
    """
    args = dict(pair=pair, v=v, r=r, mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    bundle = _olson_constants(pair, v, r, verify_hypothesis, tol, False)
    mn = bundle.M * bundle.N if mu_override is None else float(mu_override)
    lhs = arith_mean(mat_log(pair.a), mat_log(pair.b), v).eigenvalues
    rhs = math.log(mn) + np.log(geo_mean(pair.a, pair.b, v).eigenvalues)
    margins = _eigen_bound_margins(lhs, rhs, tol)
    return _finish('log_mean_reverse', args, margins, list(margins), tol,
                   _constants_dict(bundle, mu_override))


def check_concavelog_eigen_bound(g, pair, v, r=1.0, mu_override=None,
                                 tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    lambda_k(g(A) nabla_v g(B)) <= S(e^rt)^(1/r) S(e^t) lambda_k(g(A #_v B))
    for an operator concave-log g and an Olson sandwich above I, with the
    weak majorization it implies.
    """
    args = dict(g=g, pair=pair, v=v, r=r, mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    bundle = _olson_constants(pair, v, r, verify_hypothesis, tol, True)
    if verify_hypothesis:
        _require_claim(g, 'concave_log')
    mu = mu_combined(r, pair.s, pair.t) if mu_override is None \
        else float(mu_override)
    ga, gb, gm = _images(g, pair.a, pair.b, geo_mean(pair.a, pair.b, v))
    lhs = arith_mean(ga, gb, v).eigenvalues
    rhs = mu * gm.eigenvalues
    margins = _eigen_bound_margins(lhs, rhs, tol)
    return _finish('concavelog_eigen_bound', args, margins, list(margins),
                   tol, _constants_dict(bundle, mu_override))


def check_aczel_concavelog(g, a, b, p, q, r, s, t, x, mu_override=None,
                           tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    For an operator concave-log g, conjugate p, q and
    e^s I < e^s A^p <= B^q <= e^t A^p in the Olson order, with
    mu = S(e^rt)^(1/r) S(e^t):

    * lambda_k(g(A^p) #_1/q g(B^q)) <= mu lambda_k(g(A^p #_1/q B^q)),
      the unitary-free form of the operator inequality;
    * <g(A^p) y, y>^(1/p) <g(B^q) y, y>^(1/q) <=
      mu <g(A^p #_1/q B^q) y, y> for the unit y = x / |x|;
    * A^p nabla_1/q B^q <= mu (A^p #_1/q B^q), the reverse Young step.
    """
    args = dict(g=g, a=a, b=b, p=p, q=q, r=r, s=s, t=t, x=x,
                mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    p, q = _conjugate(p, q)
    a_p, b_q = mat_pow(a, p), mat_pow(b, q)
    if verify_hypothesis:
        _require_claim(g, 'concave_log')
        _require_above_identity(a_p, b_q)
        low = olson_leq(math.exp(s) * a_p, b_q, DEFAULT_R_GRID, tol)
        high = olson_leq(b_q, math.exp(t) * a_p, DEFAULT_R_GRID, tol)
        if not (low.holds and high.holds):
            raise HypothesisViolation(
                "e^s A^p <= B^q <= e^t A^p in the Olson order")
    v = 1.0 / q
    bundle = ConstantBundle.for_olson(s, t, v, r)
    mu = mu_combined(r, s, t) if mu_override is None else float(mu_override)
    geo = geo_mean(a_p, b_q, v)
    ga, gb, gm = _images(g, a_p, b_q, geo)
    margins = {'k{}'.format(k + 1): float(m) for k, m in enumerate(
        _eig_gaps(geo_mean(ga, gb, v).eigenvalues, mu * gm.eigenvalues))}
    y = _unit(x)
    margins['vector'] = _rel_gap(
        ga.quadratic_form(y) ** (1.0 / p) * gb.quadratic_form(y) ** (1.0 / q),
        mu * gm.quadratic_form(y))
    margins['reverse_young'] = loewner_margin(arith_mean(a_p, b_q, v),
                                              mu * geo)
    return _finish('aczel_concavelog', args, margins, list(margins), tol,
                   _constants_dict(bundle, mu_override))


# eigenvalue products

def check_bourin_hiai(a, b, v, tol=DEFAULT_TOL):
    """
    For every k: the top-k eigenvalue product of A #_v B is at most the
    weighted geometric mean of those of A and B, the bottom-k product is
    at least it, and at k = n both are the determinant identity.
    """
    args = dict(a=a, b=b, v=v, tol=tol)
    v = check_weight(v)
    a, b = as_herm(a), as_herm(b)
    m = geo_mean(a, b, v)
    margins = {}
    for k in range(1, a.dim + 1):
        top = topk_prod(a, k) ** (1.0 - v) * topk_prod(b, k) ** v
        bottom = bottomk_prod(a, k) ** (1.0 - v) * bottomk_prod(b, k) ** v
        margins['top{}'.format(k)] = _log_gap(topk_prod(m, k), top)
        margins['bottom{}'.format(k)] = _log_gap(bottom, bottomk_prod(m, k))
    det_m = topk_prod(m, a.dim)
    det_mean = topk_prod(a, a.dim) ** (1.0 - v) * topk_prod(b, b.dim) ** v
    relative = abs(det_m - det_mean) / det_mean
    margins['det_equality'] = min(0.0, EQUALITY_RTOL - relative)
    return _finish('bourin_hiai', args, margins, list(margins), tol)


@functools.lru_cache(maxsize=64)
def _increasing_geometrically_convex(g):
    return bool(check_geom_convex_scalar(g)) and bool(is_monotone_scalar(g))


def check_geodesic_sum_eig(g, a, b, v, k, tol=DEFAULT_TOL,
                           verify_hypothesis=True):
    """
    F(A) = sum_{j<=k} g(lambda_j(A)) is geodesically convex for an
    increasing geometrically convex g. Besides the inequality itself the
    steps of its derivation are reported, each as a gating margin:
    sorted geometric means of eigenvalues, geometric convexity of g,
    Cauchy-Schwarz and AM-GM.
    """
    args = dict(g=g, a=a, b=b, v=v, k=k, tol=tol,
                verify_hypothesis=verify_hypothesis)
    v = check_weight(v)
    a, b = as_herm(a), as_herm(b)
    k = int(k)
    if not 1 <= k <= a.dim:
        raise ArgumentOutOfRange(
            "k must lie in [1, {}], got {}".format(a.dim, k))
    if verify_hypothesis and not _increasing_geometrically_convex(g):
        raise HypothesisViolation(
            "{} is increasing and geometrically convex".format(g.key))
    la, lb = a.eigenvalues[:k], b.eigenvalues[:k]
    lm = geo_mean(a, b, v).eigenvalues[:k]
    ga, gb = g.evaluate(la), g.evaluate(lb)
    f_m = math.fsum(g.evaluate(lm))
    f_a, f_b = math.fsum(ga), math.fsum(gb)
    sorted_means = math.fsum(g.evaluate(la ** (1.0 - v) * lb ** v))
    value_means = math.fsum(ga ** (1.0 - v) * gb ** v)
    geometric = f_a ** (1.0 - v) * f_b ** v
    arithmetic = (1.0 - v) * f_a + v * f_b
    margins = {
        'geodesic': _rel_gap(f_m, arithmetic),
        'sorted_geometric': _rel_gap(f_m, sorted_means),
        'geometric_convexity': _rel_gap(sorted_means, value_means),
        'cauchy_schwarz': _rel_gap(value_means, geometric),
        'am_gm': _rel_gap(geometric, arithmetic),
    }
    return _finish('geodesic_sum_eig', args, margins, list(margins), tol)


def _require_nonnegative_decreasing(g, matrices):
    _require_claim(g, 'op_monotone_decreasing')
    for m in matrices:
        if m.eigenvalues[-1] < 0:
            raise HypothesisViolation("{} is nonnegative".format(g.key))


def check_monotone_dec_mu(g, pair, v, variant='both', mu_override=None,
                          tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    g(A #_v B) <= mu(s, t) (g(A) #_v g(B)) for a nonnegative operator
    monotone decreasing g under s A <= B <= t A.
    """
    args = dict(g=g, pair=pair, v=v, variant=variant,
                mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    bundle = _plain_constants(pair, v, verify_hypothesis, tol)
    ga, gb, gm = _images(g, pair.a, pair.b, geo_mean(pair.a, pair.b, v))
    if verify_hypothesis:
        _require_nonnegative_decreasing(g, (ga, gb))
    mean = geo_mean(ga, gb, v)
    margins = {name: loewner_margin(gm, mu * mean)
               for name, mu in _mus(bundle, variant, mu_override).items()}
    return _finish('monotone_dec_mu', args, margins, list(margins), tol,
                   _constants_dict(bundle, mu_override))


def check_topk_bound(g, pair, v, k, variant='both', mu_override=None,
                     tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    prod_{j<=k} lambda_j(g(A #_v B)) <= mu^k ({prod_{j<=k} lambda_j(g(A))}
    #_v {prod_{j<=k} lambda_j(g(B))}) for a nonnegative operator monotone
    decreasing g, and the weaker form with nabla_v in place of #_v
    (margins ``functional_*``).
    """
    args = dict(g=g, pair=pair, v=v, k=k, variant=variant,
                mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    bundle = _plain_constants(pair, v, verify_hypothesis, tol)
    v = check_weight(v)
    ga, gb, gm = _images(g, pair.a, pair.b, geo_mean(pair.a, pair.b, v))
    if verify_hypothesis:
        _require_nonnegative_decreasing(g, (ga, gb))
    lhs = topk_prod(gm, k)
    pa, pb = topk_prod(ga, k), topk_prod(gb, k)
    geometric = pa ** (1.0 - v) * pb ** v
    arithmetic = (1.0 - v) * pa + v * pb
    margins = {}
    for name, mu in _mus(bundle, variant, mu_override).items():
        margins['bound_' + name] = _log_gap(lhs, mu ** k * geometric)
        margins['functional_' + name] = _log_gap(lhs, mu ** k * arithmetic)
    return _finish('topk_bound', args, margins, list(margins), tol,
                   _constants_dict(bundle, mu_override))


def _reverse_margins(prefix, lhs, geometric, power, mus, direction, tol):
    """
    Margins of lhs >= mu^-power G (derived) and lhs >= mu^power G
    (printed). The direction not selected is only reported, as findings.
    """
    if direction not in DIRECTIONS:
        raise ArgumentOutOfRange(
            "unknown direction {!r}".format(direction))
    margins, gating, findings = {}, [], []
    for name, mu in mus.items():
        derived = '{}derived_{}'.format(prefix, name)
        printed = '{}printed_{}'.format(prefix, name)
        margins[derived] = _log_gap(mu ** -power * geometric, lhs)
        margins[printed] = _log_gap(mu ** power * geometric, lhs)
        if direction == 'derived':
            gating.append(derived)
            if margins[printed] < -_threshold(tol):
                findings.append(
                    "{} with mu^{} on the smaller side fails by {:.3e}"
                    .format(printed, power, -margins[printed]))
        else:
            gating.append(printed)
    return margins, gating, findings


def check_bottomk_reverse(f, pair, v, k, variant='both', direction='derived',
                          tol=DEFAULT_TOL, verify_hypothesis=True):
    """
    Bottom-k eigenvalue products of f(A #_v B) against the weighted
    geometric mean G of those of f(A), f(B), for an operator monotone f
    under s A <= B <= t A. ``derived`` gates on
    prod >= mu^-k G, which follows from the top-k bound applied to 1/f;
    ``printed`` gates on prod >= mu^k G.
    """
    args = dict(f=f, pair=pair, v=v, k=k, variant=variant,
                direction=direction, tol=tol,
                verify_hypothesis=verify_hypothesis)
    bundle = _plain_constants(pair, v, verify_hypothesis, tol)
    v = check_weight(v)
    if verify_hypothesis:
        _require_claim(f, 'op_monotone')
    fa, fb, fm = _images(f, pair.a, pair.b, geo_mean(pair.a, pair.b, v))
    lhs = bottomk_prod(fm, k)
    geometric = bottomk_prod(fa, k) ** (1.0 - v) * bottomk_prod(fb, k) ** v
    margins, gating, findings = _reverse_margins(
        '', lhs, geometric, int(k), _mus(bundle, variant, None), direction,
        tol)
    return _finish('bottomk_reverse', args, margins, gating, tol,
                   _constants_dict(bundle), findings=findings)


def check_det_corollaries(g, f, pair, v, variant='both', direction='derived',
                          mu_override=None, tol=DEFAULT_TOL,
                          verify_hypothesis=True):
    """
    The determinant cases k = n: det g(A #_v B) <= mu^n (det g(A) #_v
    det g(B)) for a nonnegative operator monotone decreasing g, and the
    reverse for an operator monotone f with the constant placed as in
    ``check_bottomk_reverse``.
    """
    args = dict(g=g, f=f, pair=pair, v=v, variant=variant,
                direction=direction, mu_override=mu_override, tol=tol,
                verify_hypothesis=verify_hypothesis)
    bundle = _plain_constants(pair, v, verify_hypothesis, tol)
    v = check_weight(v)
    n = pair.dim
    mus = _mus(bundle, variant, mu_override)
    geo = geo_mean(pair.a, pair.b, v)
    ga, gb, gm = _images(g, pair.a, pair.b, geo)
    fa, fb, fm = _images(f, pair.a, pair.b, geo)
    if verify_hypothesis:
        _require_nonnegative_decreasing(g, (ga, gb))
        _require_claim(f, 'op_monotone')
    det_g = topk_prod(ga, n) ** (1.0 - v) * topk_prod(gb, n) ** v
    margins = {'det_decreasing_' + name: _log_gap(topk_prod(gm, n),
                                                  mu ** n * det_g)
               for name, mu in mus.items()}
    gating = list(margins)
    det_f = topk_prod(fa, n) ** (1.0 - v) * topk_prod(fb, n) ** v
    reverse, reverse_gating, findings = _reverse_margins(
        'det_monotone_', topk_prod(fm, n), det_f, n, mus, direction, tol)
    margins.update(reverse)
    if direction == 'printed':
        gating = reverse_gating
    else:
        gating += reverse_gating
    return _finish('det_corollaries', args, margins, gating, tol,
                   _constants_dict(bundle, mu_override), findings=findings)


CHECKS = {
    'young_chain': check_young_chain,
    'reverse_young': check_reverse_young,
    'log_majorization': check_log_majorization,
    'function_class': check_function_class,
    'adjoint_refinement': check_adjoint_refinement,
    'spectral_functional': check_spectral_functional,
    'aczel_geodesic': check_aczel_geodesic,
    'aczel_commuting': check_aczel_commuting,
    'convexlog_weak_major': check_convexlog_weak_major,
    'log_mean_reverse': check_log_mean_reverse,
    'concavelog_eigen_bound': check_concavelog_eigen_bound,
    'aczel_concavelog': check_aczel_concavelog,
    'bourin_hiai': check_bourin_hiai,
    'geodesic_sum_eig': check_geodesic_sum_eig,
    'monotone_dec_mu': check_monotone_dec_mu,
    'topk_bound': check_topk_bound,
    'bottomk_reverse': check_bottomk_reverse,
    'det_corollaries': check_det_corollaries,
}


def run_check(fn, **kwargs):
    """
    Runs the check registered as ``fn``. A violated hypothesis gives a
    ``skipped`` report carrying the arguments and the reason.
    """
    try:
        check = CHECKS[fn]
    except KeyError:
        raise ArgumentOutOfRange("unknown check {!r}".format(fn))
    try:
        return check(**kwargs)
    except HypothesisViolation as err:
        return CheckReport(fn, {'fn': fn, 'args': encode_args(kwargs)},
                           'skipped', 0.0, notes=str(err))


def replay(report):
    """
    Recomputes a report from its instance.

    Args:
        report: a CheckReport, its dict form or a JSON line.

    Returns:
        (matches, recomputed) where matches is true when the verdict is
        the same and the margin agrees to REPLAY_ATOL.
    """
    if isinstance(report, str):
        report = CheckReport.from_json(report)
    elif isinstance(report, dict):
        report = CheckReport.from_dict(report)
    fn = report.instance['fn']
    try:
        recomputed = run_check(fn, **decode_args(report.instance['args']))
    except OpineqError as err:
        recomputed = CheckReport(fn, report.instance, 'skipped', 0.0,
                                 notes=str(err))
    recomputed = recomputed.relabel(report.check_id, report.seed)
    matches = recomputed.verdict == report.verdict and \
        abs(recomputed.margin - report.margin) <= REPLAY_ATOL
    return matches, recomputed
