# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Scalar functions with their claimed operator classes, the transforms
that carry claims from one function to another, and sampled predicates
that test each class on random positive definite matrices.

Claims and sampled verdicts are kept apart: a FunctionSpec records what
is known about a function, ``classify`` reports what sampling found and
lists the claims the samples disagree with.
"""
import functools
import math
import re
from collections import OrderedDict, namedtuple
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from opineq import formula as formula_mod
from opineq.errors import (ArgumentOutOfRange, DomainViolation, EmptyDomain,
                           NonPositiveArgument, NotPositiveDefinite,
                           UnknownFunction, ZeroDivisionRegion)
from opineq.generators import child_seed, gen_pd
from opineq.logger import log_disagreements
from opineq.means import arith_mean, geo_mean
from opineq.spectral import apply_fn, loewner_margin, mat_pow, matrix_to_json

INF = float('inf')

FLAGS = ('op_monotone', 'op_monotone_decreasing', 'op_convex', 'op_concave',
         'op_geodesically_convex', 'op_geodesically_concave', 'convex_log',
         'concave_log', 'geometrically_convex', 'increasing', 'decreasing')

# weights used by every sampled predicate, endpoints included
DEFAULT_V_GRID = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
# normalised Loewner margins below -MARGIN_TOL count as violations
MARGIN_TOL = 1e-9
SCALAR_RTOL = 1e-10
# default sampling window of functions defined on (0, inf)
HALF_LINE_WINDOW = (0.05, 20.0)
WINDOW_SHRINK = 0.05


class ClaimState(Enum):
    CLAIMED_TRUE = 'claimed_true'
    CLAIMED_FALSE = 'claimed_false'
    UNKNOWN = 'unknown'


Claim = namedtuple('Claim', ['state', 'citation'])
UNKNOWN = Claim(ClaimState.UNKNOWN, '')


def _true(citation):
    return Claim(ClaimState.CLAIMED_TRUE, citation)


def _false(citation):
    return Claim(ClaimState.CLAIMED_FALSE, citation)


def _format_param(value):
    return '{:g}'.format(value)


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """
    A real function of one variable given by a formula in ``t``.

    Args:
        name: catalog name, shared by every instance of a parameterised
        family.

        formula: the formula, in the grammar of :mod:`opineq.formula`.

        domain: open interval (lo, hi) with lo >= 0 or hi = inf.

        params: the family parameters of this instance, e.g. {'a': 2.0}.

        flags: claims keyed by flag name; flags left out are unknown.
        Every claimed_true flag needs a citation.

        window: closed sampling interval inside the domain. When omitted
        it is derived from the domain, see ``sample_window``.
    """
    name: str
    formula: str
    domain: Tuple[float, float]
    params: Dict[str, float] = field(default_factory=dict)
    flags: Dict[str, Claim] = field(default_factory=dict)
    window: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        lo, hi = (float(x) for x in self.domain)
        if not lo < hi:
            raise EmptyDomain("empty domain ({}, {}) for {}".format(
                lo, hi, self.name))
        if lo < 0 and hi != INF:
            raise ArgumentOutOfRange(
                "domain ({}, {}) of {} must have lo >= 0 or hi = inf".format(
                    lo, hi, self.name))
        object.__setattr__(self, 'domain', (lo, hi))
        flags = OrderedDict((flag, UNKNOWN) for flag in FLAGS)
        for flag, claim in self.flags.items():
            if flag not in flags:
                raise ArgumentOutOfRange("unknown flag {!r}".format(flag))
            claim = Claim(ClaimState(claim[0]), claim[1])
            if claim.state is ClaimState.CLAIMED_TRUE and not claim.citation:
                raise ArgumentOutOfRange(
                    "claimed_true flag {} of {} needs a citation".format(
                        flag, self.name))
            flags[flag] = claim
        object.__setattr__(self, 'flags', flags)
        object.__setattr__(self, 'params', {k: float(v) for k, v in
                                            self.params.items()})
        if self.window is not None:
            w_lo, w_hi = (float(x) for x in self.window)
            if not lo < w_lo <= w_hi < hi:
                raise ArgumentOutOfRange(
                    "window ({}, {}) is not inside the domain of {}".format(
                        w_lo, w_hi, self.name))
            object.__setattr__(self, 'window', (w_lo, w_hi))
        object.__setattr__(self, '_evaluate',
                           formula_mod.compile_formula(self.formula))
        values = self.evaluate(self.grid(100))
        if not np.all(np.isfinite(values)):
            raise ArgumentOutOfRange(
                "{} is not finite on its sampling window".format(self.key))

    @property
    def key(self):
        """Name plus parameters, e.g. ``t_minus_a[a=2]``."""
        if not self.params:
            return self.name
        return '{}[{}]'.format(self.name, ','.join(
            '{}={}'.format(k, _format_param(v))
            for k, v in sorted(self.params.items())))

    def evaluate(self, t):
        return self._evaluate(t)

    __call__ = evaluate

    def claim(self, flag):
        return self.flags[flag].state

    def claimed(self, flag):
        return self.flags[flag].state is ClaimState.CLAIMED_TRUE

    def sample_window(self):
        """
        The closed interval spectra are drawn from. Functions on (0, inf)
        use (0.05, 20); (0, hi) uses (0.05 hi, 0.95 hi); other intervals
        cap an infinite end at 20 max(lo, 1) and then shrink 5% of the
        width from each end.
        """
        if self.window is not None:
            return self.window
        lo, hi = self.domain
        if hi == INF:
            if lo == 0.0:
                return HALF_LINE_WINDOW
            hi = 20.0 * max(lo, 1.0)
        elif lo == 0.0:
            return (WINDOW_SHRINK * hi, (1.0 - WINDOW_SHRINK) * hi)
        if lo == -INF:
            lo = -20.0 * max(abs(hi), 1.0)
        width = hi - lo
        return (lo + WINDOW_SHRINK * width, hi - WINDOW_SHRINK * width)

    def grid(self, count, geometric=False):
        lo, hi = self.sample_window()
        if geometric and lo > 0:
            return np.geomspace(lo, hi, count)
        return np.linspace(lo, hi, count)

    def to_dict(self):
        lo, hi = self.domain
        return {
            'name': self.name,
            'formula': self.formula,
            'domain': [None if lo == -INF else lo, None if hi == INF else hi],
            'params': dict(self.params),
            'window': list(self.window) if self.window else None,
            'flags': OrderedDict(
                (flag, {'state': claim.state.value,
                        'citation': claim.citation})
                for flag, claim in self.flags.items()
                if claim.state is not ClaimState.UNKNOWN),
        }

    @classmethod
    def from_dict(cls, obj):
        lo, hi = obj['domain']
        flags = {flag: Claim(ClaimState(c['state']), c.get('citation', ''))
                 for flag, c in obj.get('flags', {}).items()}
        window = obj.get('window')
        return cls(obj['name'], obj['formula'],
                   (-INF if lo is None else lo, INF if hi is None else hi),
                   dict(obj.get('params', {})), flags,
                   tuple(window) if window else None)


YOUNG = "Young inequality A #_v B <= A nabla_v B"
AFFINE_OP = "affine functions with nonnegative slope are operator monotone " \
            "and both operator convex and concave"
AFFINE_DEC = "affine functions with negative slope are operator monotone " \
             "decreasing and both operator convex and concave"
INVERSION = "(A #_v B)^-1 = A^-1 #_v B^-1 <= A^-1 nabla_v B^-1"
MONOTONE_CONVEX = "operator monotone and operator convex, so " \
                  "f(A #_v B) <= f(A nabla_v B) <= f(A) nabla_v f(B)"
POWER_GG = "power functions are multiplicative: equality in " \
           "f(a^(1-v) b^v) <= f(a)^(1-v) f(b)^v"
LOWNER_HEINZ = "t^p is operator monotone and operator concave for " \
               "0 <= p <= 1"


def _affine_increasing():
    return {'op_monotone': _true(AFFINE_OP), 'op_convex': _true(AFFINE_OP),
            'op_concave': _true(AFFINE_OP), 'increasing': _true("slope 1"),
            'decreasing': _false("slope 1")}


def _log_pow_flags(p):
    flags = {}
    h = "h(u) = u^{:g}".format(p)
    if -1.0 <= p <= 0.0 or 1.0 <= p <= 2.0:
        flags['convex_log'] = _true(
            "{} is operator convex for p in [-1, 0] and [1, 2]".format(h))
    else:
        flags['convex_log'] = _false(
            "{} is not operator convex for p in (0, 1)".format(h))
    if 0.0 <= p <= 1.0:
        flags['concave_log'] = _true(
            "{} is operator concave for p in [0, 1]".format(h))
        flags['op_concave'] = _true(
            "operator concave-log: phi(log A nabla_v log B) >= "
            "phi(log A) nabla_v phi(log B) with phi operator monotone "
            "and log operator concave")
        flags['op_monotone'] = _true(
            "composition of the operator monotone u^p and log")
    if p < 0:
        flags['op_monotone_decreasing'] = _true(
            "u^p is operator monotone decreasing for -1 <= p < 0 and log "
            "is operator monotone")
        flags['decreasing'] = _true("(log t)^p with p < 0")
    else:
        flags['increasing'] = _true("(log t)^p with p > 0")
    return flags


@functools.lru_cache(maxsize=None)
def _builtin_entries():
    entries = [
        FunctionSpec('identity', 't', (0.0, INF), flags=dict(
            _affine_increasing(),
            op_geodesically_convex=_true(YOUNG),
            geometrically_convex=_true(POWER_GG))),
    ]
    for a in (1.0, 2.0, 5.0):
        entries.append(FunctionSpec(
            't_minus_a', 't - {!r}'.format(a), (a, INF), {'a': a},
            dict(_affine_increasing(), op_geodesically_convex=_true(
                "Young inequality shifted by a I: "
                "A #_v B - a I <= (A - a I) nabla_v (B - a I)"))))
    entries += [
        FunctionSpec('inv_one_minus_t', '1 / (1 - t)', (0.0, 1.0), flags={
            'op_monotone': _true("1/(1-t) is operator monotone on (0, 1)"),
            'op_convex': _true("1/(1-t) is operator convex on (0, 1)"),
            'op_geodesically_convex': _true(MONOTONE_CONVEX),
            'increasing': _true("1/(1-t) on (0, 1)")}),
        FunctionSpec('t_over_one_minus_t', 't / (1 - t)', (0.0, 1.0), flags={
            'op_monotone': _true("t/(1-t) = 1/(1-t) - 1"),
            'op_convex': _true("t/(1-t) = 1/(1-t) - 1"),
            'op_geodesically_convex': _true(
                "t/(1-t) = 1/(1-t) - 1 and constants shift both sides"),
            'increasing': _true("t/(1-t) on (0, 1)")}),
        FunctionSpec('t_over_t_minus_one', 't / (t - 1)', (1.0, INF), flags={
            'op_geodesically_convex': _true(
                "equals f(1/t) for f(t) = 1/(1-t); t -> 1/t preserves "
                "operator geodesic convexity"),
            'op_monotone_decreasing': _true(
                "t/(t-1) = 1 + (t-1)^-1 and inversion reverses the order"),
            'decreasing': _true("1 + 1/(t-1)")}),
        FunctionSpec('reciprocal', '1 / t', (0.0, INF), flags={
            'op_geodesically_convex': _true(INVERSION),
            'op_monotone': _false("inversion reverses the Loewner order"),
            'op_monotone_decreasing': _true(
                "A <= B implies B^-1 <= A^-1"),
            'op_convex': _true("t^-1 is operator convex on (0, inf)"),
            'geometrically_convex': _true(POWER_GG),
            'decreasing': _true("1/t"),
            'increasing': _false("1/t")}),
        FunctionSpec('one_minus_t', '1 - t', (0.0, 1.0), flags={
            'op_geodesically_concave': _true(
                "I - A #_v B >= (I - A) nabla_v (I - B) by the Young "
                "inequality"),
            'op_monotone_decreasing': _true(AFFINE_DEC),
            'op_convex': _true(AFFINE_DEC),
            'op_concave': _true(AFFINE_DEC),
            'decreasing': _true("slope -1")}),
    ]
    for a in (1.0, 2.0, 5.0):
        entries += [
            FunctionSpec('a_minus_t', '{!r} - t'.format(a), (0.0, a),
                         {'a': a}, {
                'op_geodesically_concave': _true(
                    "a I - A #_v B >= (a I - A) nabla_v (a I - B) by the "
                    "Young inequality"),
                'op_monotone_decreasing': _true(AFFINE_DEC),
                'op_convex': _true(AFFINE_DEC),
                'op_concave': _true(AFFINE_DEC),
                'decreasing': _true("slope -1")}),
            FunctionSpec('inv_a_minus_t', '1 / ({!r} - t)'.format(a),
                         (0.0, a), {'a': a}, {
                'op_geodesically_convex': _true(
                    "reciprocal of the positive operator geodesically "
                    "concave a - t"),
                'op_monotone': _true("1/(a-t) is operator monotone on "
                                     "(0, a)"),
                'op_convex': _true("1/(a-t) is operator convex on (0, a)"),
                'increasing': _true("1/(a-t) on (0, a)")}),
            FunctionSpec('adjoint_a_minus_t', 't / ({!r} * t - 1)'.format(a),
                         (1.0 / a, INF), {'a': a}, {
                'op_geodesically_convex': _true(
                    "adjoint 1/g(1/t) of the positive operator "
                    "geodesically concave g(t) = a - t"),
                'decreasing': _true("(1/a)(1 + 1/(at-1))")}),
            FunctionSpec('a_minus_inv_t', '{!r} - 1 / t'.format(a),
                         (1.0 / a, INF), {'a': a}, {
                'op_geodesically_concave': _true(
                    "a I - (A #_v B)^-1 >= (a I - A^-1) nabla_v "
                    "(a I - B^-1)"),
                'op_monotone': _true("-1/t is operator monotone"),
                'op_monotone_decreasing': _false(
                    "a - 1/t is increasing"),
                'op_concave': _true("-1/t is operator concave"),
                'increasing': _true("a - 1/t")}),
            FunctionSpec('inv_a_plus_t', '1 / ({!r} + t)'.format(a),
                         (0.0, INF), {'a': a}, {
                'op_monotone_decreasing': _true(
                    "1/(a+t) is the inverse of the operator monotone a + t"),
                'op_convex': _true("1/(a+t) is operator convex on "
                                   "(0, inf)"),
                'decreasing': _true("1/(a+t)")}),
        ]
    entries.append(FunctionSpec('log', 'log(t)', (0.0, INF), flags={
        'op_monotone': _true("log is operator monotone"),
        'op_concave': _true("log is operator concave"),
        'increasing': _true("log t")}))
    for p in (-1.0, -0.5, 0.5, 0.7, 1.0, 1.5, 2.0):
        entries.append(FunctionSpec('log_pow', 'log(t)^{!r}'.format(p),
                                    (1.0, INF), {'p': p}, _log_pow_flags(p)))
    entries += [
        FunctionSpec('sqrt', 't^0.5', (0.0, INF), flags={
            'op_monotone': _true(LOWNER_HEINZ),
            'op_concave': _true(LOWNER_HEINZ),
            'geometrically_convex': _true(POWER_GG),
            'increasing': _true("t^0.5")}),
        FunctionSpec('square', 't^2', (0.0, INF), flags={
            'op_convex': _true("t^2 is operator convex"),
            'op_monotone': _false("t^2 is not operator monotone"),
            'geometrically_convex': _true(POWER_GG),
            'increasing': _true("t^2 on (0, inf)")}),
        FunctionSpec('cube', 't^3', (0.0, INF), flags={
            'op_convex': _false("t^3 is not operator convex"),
            'op_monotone': _false("t^p is not operator monotone for p > 1"),
            'geometrically_convex': _true(POWER_GG),
            'increasing': _true("t^3 on (0, inf)")}),
        FunctionSpec('exp', 'exp(t)', (0.0, INF), window=(0.05, 5.0),
                     flags={
            'op_monotone': _false("exp is not operator monotone"),
            'geometrically_convex': _true(
                "exp(a^(1-v) b^v) <= exp((1-v) a + v b) by the scalar "
                "Young inequality"),
            'increasing': _true("exp")}),
    ]
    return tuple(entries)


def builtin_catalog():
    """
    The built-in functions: every parameterised family is instantiated
    at a = 1, 2, 5 and, for (log t)^p, at p = -1, -0.5, 0.5, 0.7, 1, 1.5
    and 2.

    Returns:
        A list of FunctionSpec.
    """
    return list(_builtin_entries())


def lookup(name, **params):
    """
    First catalog entry called ``name`` whose parameters match ``params``.
    """
    for spec in _builtin_entries():
        if spec.name != name:
            continue
        if all(k in spec.params and spec.params[k] == float(v)
               for k, v in params.items()):
            return spec
    raise UnknownFunction("no catalog function {}{}".format(
        name, ' with ' + str(params) if params else ''))


_KEY = re.compile(r'^\s*(\w+)\s*(?:\[(.*)\])?\s*$')


def resolve(text):
    """
    Resolves ``name`` or ``name[a=2]`` (parameters comma separated).
    """
    match = _KEY.match(str(text))
    if not match:
        raise UnknownFunction("cannot read function key {!r}".format(text))
    params = {}
    if match.group(2):
        for item in match.group(2).split(','):
            key, sep, value = item.partition('=')
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise UnknownFunction(
                    "bad parameter {!r} in {!r}".format(item, text))
            if not sep:
                raise UnknownFunction(
                    "bad parameter {!r} in {!r}".format(item, text))
    return lookup(match.group(1), **params)


def inline(formula, domain=(0.0, INF), name=None):
    """A FunctionSpec for an inline formula, with every flag unknown."""
    tree = formula_mod.parse(formula)
    return FunctionSpec(name or formula_mod.render(tree),
                        formula_mod.render(tree), domain)


def catalog_to_json(entries=None):
    if entries is None:
        entries = _builtin_entries()
    return [spec.to_dict() for spec in entries]


# transforms

def _swap_flags(f, pairs, citation):
    flags = {}
    for here, there in pairs:
        for src, dst in ((here, there), (there, here)):
            claim = f.flags[src]
            if claim.state is ClaimState.CLAIMED_TRUE:
                flags[dst] = _true(citation.format(src=src))
            elif claim.state is ClaimState.CLAIMED_FALSE:
                flags[dst] = _false(citation.format(src=src))
    return flags


def precompose_inverse(f):
    """
    x -> f(1/x) on the inverted domain. Operator geodesic convexity and
    concavity carry over; monotone and decreasing swap.
    """
    lo, hi = f.domain
    if lo < 0:
        raise EmptyDomain("f(1/x) needs a domain inside (0, inf), "
                          "got ({}, {})".format(lo, hi))
    new_domain = (0.0 if hi == INF else 1.0 / hi,
                  INF if lo == 0.0 else 1.0 / lo)
    if not new_domain[0] < new_domain[1]:
        raise EmptyDomain("f(1/x) has an empty domain")
    flags = _swap_flags(f, (('increasing', 'decreasing'),
                            ('op_monotone', 'op_monotone_decreasing')),
                        "x -> 1/x reverses the order; f is {src}")
    for flag in ('op_geodesically_convex', 'op_geodesically_concave'):
        if f.claimed(flag):
            flags[flag] = _true(
                "x -> 1/x preserves {} since (A #_v B)^-1 = "
                "A^-1 #_v B^-1".format(flag))
    window = None
    if f.window is not None:
        window = (1.0 / f.window[1], 1.0 / f.window[0])
    return FunctionSpec('precompose_inverse({})'.format(f.key),
                        formula_mod.substitute(f.formula, '1 / t'),
                        new_domain, dict(f.params), flags, window)


def _nonvanishing(f):
    values = f.evaluate(f.grid(200))
    if np.any(np.abs(values) < 1e-12) or \
            (np.min(values) < 0 < np.max(values)):
        raise ZeroDivisionRegion(
            "{} vanishes on its sampling window".format(f.key))
    return values


def reciprocal(f):
    """
    1/f. A positive operator geodesically concave f gives an operator
    geodesically convex 1/f.
    """
    values = _nonvanishing(f)
    flags = _swap_flags(f, (('increasing', 'decreasing'),),
                        "reciprocal of a positive or negative function; "
                        "f is {src}")
    if np.min(values) > 0:
        if f.claimed('op_geodesically_concave'):
            flags['op_geodesically_convex'] = _true(
                "1/g for a positive operator geodesically concave g: "
                "g(A #_v B)^-1 <= (g(A) nabla_v g(B))^-1 <= "
                "g(A)^-1 nabla_v g(B)^-1")
        flags.update(_swap_flags(
            f, (('op_monotone', 'op_monotone_decreasing'),),
            "inversion reverses the order of positive matrices; f is {src}"))
    return FunctionSpec('reciprocal({})'.format(f.key),
                        formula_mod.substitute('1 / t', f.formula),
                        f.domain, dict(f.params), flags, f.window)


def adjoint(f):
    """
    The adjoint x -> 1/f(1/x). A positive operator geodesically concave f
    has an operator geodesically convex adjoint.
    """
    g = reciprocal(precompose_inverse(f))
    return replace(g, name='adjoint({})'.format(f.key))


_CLOSED_UNDER_SUMS = ('op_geodesically_convex', 'op_geodesically_concave',
                      'op_convex', 'op_concave', 'op_monotone',
                      'op_monotone_decreasing', 'increasing', 'decreasing')


def linear_combination(f1, f2, alpha=1.0):
    """alpha f1 + f2 on the shared domain, for alpha > 0."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ArgumentOutOfRange(
            "alpha must be positive, got {}".format(alpha))
    lo = max(f1.domain[0], f2.domain[0])
    hi = min(f1.domain[1], f2.domain[1])
    if not lo < hi:
        raise EmptyDomain("{} and {} share no domain".format(f1.key, f2.key))
    flags = {flag: _true("positive combinations preserve " + flag)
             for flag in _CLOSED_UNDER_SUMS
             if f1.claimed(flag) and f2.claimed(flag)}
    text = formula_mod.render(formula_mod.parse(
        '{!r} * ({}) + ({})'.format(alpha, f1.formula, f2.formula)))
    return FunctionSpec('{}*{}+{}'.format(_format_param(alpha), f1.key,
                                          f2.key),
                        text, (lo, hi), flags=flags)


def compose(f1, f2):
    """
    f1(f2(t)) on the domain of f2. The values of f2 on its sampling
    window must lie inside the domain of f1.
    """
    values = f2.evaluate(f2.grid(200))
    lo, hi = f1.domain
    outside = values[(values <= lo) | (values >= hi)]
    if outside.size:
        raise DomainViolation(f1.name, f1.domain, outside[:5].tolist())
    flags = {}
    if f1.claimed('op_monotone') and f1.claimed('op_convex') and \
            f2.claimed('op_geodesically_convex'):
        flags['op_geodesically_convex'] = _true(
            "operator monotone convex function of an operator "
            "geodesically convex function")
    if f1.claimed('op_monotone') and f1.claimed('op_concave') and \
            f2.claimed('op_geodesically_concave'):
        flags['op_geodesically_concave'] = _true(
            "operator monotone concave function of an operator "
            "geodesically concave function")
    if f1.claimed('op_monotone') and f2.claimed('op_monotone'):
        flags['op_monotone'] = _true("composition of operator monotone "
                                     "functions")
    for inner in ('increasing', 'decreasing'):
        if f2.claimed(inner):
            if f1.claimed('increasing'):
                flags[inner] = _true("increasing outer function")
            elif f1.claimed('decreasing'):
                other = 'decreasing' if inner == 'increasing' \
                    else 'increasing'
                flags[other] = _true("decreasing outer function")
    return FunctionSpec('compose({},{})'.format(f1.key, f2.key),
                        formula_mod.substitute(f1.formula, f2.formula),
                        f2.domain, flags=flags, window=f2.window)


def log_reparametrize(f):
    """
    h(u) = f(e^u), the function whose operator convexity makes f
    operator convex-log. Only functions on [1, inf) qualify.
    """
    lo, hi = f.domain
    if lo < 1.0:
        raise ArgumentOutOfRange(
            "convex-log classes need a domain inside [1, inf), "
            "got ({}, {})".format(lo, hi))
    w_lo, w_hi = f.sample_window()
    return FunctionSpec('log_reparametrize({})'.format(f.key),
                        formula_mod.substitute(f.formula, 'exp(t)'),
                        (math.log(lo), INF if hi == INF else math.log(hi)),
                        dict(f.params),
                        window=(math.log(w_lo), math.log(w_hi)))


# sampled operator predicates

Witness = namedtuple('Witness', ['a', 'b', 'v'])


def _witness_to_dict(witness):
    if witness is None:
        return None
    a, b, v = witness
    if hasattr(a, 'entries'):
        a, b = matrix_to_json(a), matrix_to_json(b)
    return {'A': a, 'B': b, 'v': v}


@dataclass(frozen=True)
class SampleVerdict:
    """
    Outcome of sampling one predicate. ``witness`` is set exactly when
    ``holds`` is false and is the worst instance found.
    """
    holds: bool
    trials: int
    worst_margin: float
    witness: Optional[Witness] = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ArgumentOutOfRange(
                "a verdict carries a witness exactly when it fails")

    def to_dict(self):
        return {'holds': self.holds, 'trials': self.trials,
                'worst_margin': self.worst_margin,
                'witness': _witness_to_dict(self.witness)}


def _image(f, a):
    return apply_fn(a, f)


def _geodesic_convexity(f, a, b, v):
    return loewner_margin(_image(f, geo_mean(a, b, v)),
                          arith_mean(_image(f, a), _image(f, b), v))


def _geodesic_concavity(f, a, b, v):
    return loewner_margin(arith_mean(_image(f, a), _image(f, b), v),
                          _image(f, geo_mean(a, b, v)))


def _convexity(f, a, b, v):
    return loewner_margin(_image(f, arith_mean(a, b, v)),
                          arith_mean(_image(f, a), _image(f, b), v))


def _concavity(f, a, b, v):
    return loewner_margin(arith_mean(_image(f, a), _image(f, b), v),
                          _image(f, arith_mean(a, b, v)))


def _log_convexity(f, a, b, v):
    return loewner_margin(_image(f, arith_mean(a, b, v)),
                          geo_mean(_image(f, a), _image(f, b), v))


def _monotonicity(f, a, b, v):
    return loewner_margin(_image(f, a), _image(f, b))


def _antitonicity(f, a, b, v):
    return loewner_margin(_image(f, b), _image(f, a))


INSTANCE_MARGINS = {
    'op_geodesically_convex': _geodesic_convexity,
    'op_geodesically_concave': _geodesic_concavity,
    'op_convex': _convexity,
    'op_concave': _concavity,
    'op_log_convex': _log_convexity,
    'op_monotone': _monotonicity,
    'op_monotone_decreasing': _antitonicity,
}
# these predicates are sampled on ordered pairs A <= B
_ORDERED = ('op_monotone', 'op_monotone_decreasing')


def instance_margin(predicate, f, a, b, v=0.5):
    """
    Normalised Loewner margin of one predicate on one instance, e.g.
    lambda_min(f(A) nabla_v f(B) - f(A #_v B)) / scale for
    ``op_geodesically_convex``. Nonnegative when the instance satisfies
    the predicate.
    """
    try:
        margin = INSTANCE_MARGINS[predicate]
    except KeyError:
        raise ArgumentOutOfRange("unknown predicate {!r}".format(predicate))
    return margin(f, a, b, v)


def draw_pair(n, window, seed, trial):
    """Two independent matrices with spectra in ``window``."""
    return (gen_pd(n, window, child_seed(seed, trial, 0)),
            gen_pd(n, window, child_seed(seed, trial, 1)))


def draw_ordered_pair(n, window, seed, trial):
    """
    A <= B with both spectra in ``window``: Sp(A) lies below the
    geometric midpoint m and B = A^1/2 C A^1/2 with Sp(C) in [1, hi/m].
    """
    lo, hi = window
    mid = math.sqrt(lo * hi)
    a = gen_pd(n, (lo, mid), child_seed(seed, trial, 0))
    c = gen_pd(n, (1.0, hi / mid), child_seed(seed, trial, 1))
    return a, c.congruence(mat_pow(a, 0.5))


def sample_predicate(predicate, f, n=3, trials=1000, seed=0,
                     v_grid=DEFAULT_V_GRID, tol=MARGIN_TOL,
                     stop_on_witness=False):
    """
    Samples one operator predicate of ``f``.

    Args:
        predicate: a key of INSTANCE_MARGINS.

        f: a FunctionSpec; spectra are drawn from its sampling window.

        n: matrix dimension.

        trials: number of random instances. Trial i uses the weight
        v_grid[i % len(v_grid)] and seeds derived from (seed, i).

        tol: instances with margin below -tol are violations.

        stop_on_witness: stop at the first violation.

    Returns:
        SampleVerdict.
    """
    if predicate not in INSTANCE_MARGINS:
        raise ArgumentOutOfRange("unknown predicate {!r}".format(predicate))
    draw = draw_ordered_pair if predicate in _ORDERED else draw_pair
    window = f.sample_window()
    worst, worst_instance, done = INF, None, 0
    for trial in range(int(trials)):
        a, b = draw(n, window, seed, trial)
        v = v_grid[trial % len(v_grid)]
        margin = instance_margin(predicate, f, a, b, v)
        done += 1
        if margin < worst:
            worst, worst_instance = margin, Witness(a, b, v)
        if stop_on_witness and margin < -tol:
            break
    holds = bool(worst >= -tol)
    return SampleVerdict(holds, done, float(worst),
                         None if holds else worst_instance)


def check_op_geodesic_convex(f, n=3, trials=1000, seed=0, **kwargs):
    """f(A #_v B) <= f(A) nabla_v f(B) on sampled pairs."""
    return sample_predicate('op_geodesically_convex', f, n, trials, seed,
                            **kwargs)


def check_op_geodesic_concave(f, n=3, trials=1000, seed=0, **kwargs):
    """f(A #_v B) >= f(A) nabla_v f(B) on sampled pairs."""
    return sample_predicate('op_geodesically_concave', f, n, trials, seed,
                            **kwargs)


def check_op_convex(f, n=3, trials=1000, seed=0, **kwargs):
    return sample_predicate('op_convex', f, n, trials, seed, **kwargs)


def check_op_concave(f, n=3, trials=1000, seed=0, **kwargs):
    return sample_predicate('op_concave', f, n, trials, seed, **kwargs)


def check_op_log_convex(f, n=3, trials=1000, seed=0, **kwargs):
    """f(A nabla_v B) <= f(A) #_v f(B); f must be positive."""
    return sample_predicate('op_log_convex', f, n, trials, seed, **kwargs)


def check_op_monotone(f, n=3, trials=1000, seed=0, **kwargs):
    return sample_predicate('op_monotone', f, n, trials, seed, **kwargs)


def check_op_monotone_decreasing(f, n=3, trials=1000, seed=0, **kwargs):
    return sample_predicate('op_monotone_decreasing', f, n, trials, seed,
                            **kwargs)


def check_op_convex_log(f, n=3, trials=1000, seed=0, **kwargs):
    """Operator convexity of h(u) = f(e^u) for f on [1, inf)."""
    return check_op_convex(log_reparametrize(f), n, trials, seed, **kwargs)


def check_op_concave_log(f, n=3, trials=1000, seed=0, **kwargs):
    """Operator concavity of h(u) = f(e^u) for f on [1, inf)."""
    return check_op_concave(log_reparametrize(f), n, trials, seed, **kwargs)


# scalar predicates

class ScalarVerdict(namedtuple('ScalarVerdict',
                               ['holds', 'worst_margin', 'witness'])):
    """Result of a scalar grid test; truthy exactly when it holds."""
    __slots__ = ()

    def __bool__(self):
        return bool(self.holds)

    def as_sample_verdict(self, trials):
        witness = None if self.holds else Witness(*self.witness)
        return SampleVerdict(bool(self.holds), trials,
                             float(self.worst_margin), witness)


def _weighted(kind, x, y, v):
    if kind == 'A':
        return (1.0 - v) * x + v * y
    return x ** (1.0 - v) * y ** v


SCALAR_CLASSES = ('AA', 'AG', 'GA', 'GG')


def scalar_class_margin(f, kind, grid=40, v_grid=DEFAULT_V_GRID):
    """
    Scalar convexity of ``f`` in one of the four classical senses:
    ``kind`` names the mean of the arguments and the mean of the values,
    so 'AA' is ordinary convexity, 'GA' is f(a^(1-v) b^v) <=
    (1-v) f(a) + v f(b) and 'GG' is geometric convexity.

    Returns:
        ScalarVerdict(holds, worst_margin, witness) with witness the
        (a, b, v) of the worst relative margin.
    """
    if kind not in SCALAR_CLASSES:
        raise ArgumentOutOfRange("unknown scalar class {!r}".format(kind))
    points = f.grid(int(grid), geometric=True)
    values = f.evaluate(points)
    if kind[1] == 'G' and np.any(values <= 0):
        raise NonPositiveArgument(
            "{} convexity needs a positive function".format(kind))
    x, y = np.meshgrid(points, points, indexing='ij')
    fx, fy = np.meshgrid(values, values, indexing='ij')
    worst, witness = INF, None
    for v in v_grid:
        with np.errstate(all='ignore'):
            lhs = f.evaluate(_weighted(kind[0], x, y, v))
            rhs = _weighted(kind[1], fx, fy, v)
            scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
            margins = (rhs - lhs) / scale
        i, j = np.unravel_index(np.argmin(margins), margins.shape)
        if margins[i, j] < worst:
            worst = float(margins[i, j])
            witness = (float(points[i]), float(points[j]), float(v))
    holds = worst >= -SCALAR_RTOL
    return ScalarVerdict(holds, worst, None if holds else witness)


def check_geom_convex_scalar(f, grid=40):
    """f(a^(1-v) b^v) <= f(a)^(1-v) f(b)^v on a grid of (a, b, v)."""
    return scalar_class_margin(f, 'GG', grid)


def is_convexlog_scalar(f, grid=40):
    """
    Midpoint convexity of h(u) = f(e^u) on a grid of u spanning the
    logarithm of the sampling window.
    """
    lo, hi = f.domain
    if lo < 0:
        raise DomainViolation(f.name, f.domain, [lo])
    w_lo, w_hi = f.sample_window()
    u = np.linspace(math.log(w_lo), math.log(w_hi), int(grid))
    h = f.evaluate(np.exp(u))
    mids = f.evaluate(np.exp(0.5 * (u[:, None] + u[None, :])))
    chords = 0.5 * (h[:, None] + h[None, :])
    scale = np.maximum(1.0, np.maximum(np.abs(mids), np.abs(chords)))
    margins = (chords - mids) / scale
    i, j = np.unravel_index(np.argmin(margins), margins.shape)
    worst = float(margins[i, j])
    holds = worst >= -SCALAR_RTOL
    witness = None if holds else (float(np.exp(u[i])), float(np.exp(u[j])),
                                  0.5)
    return ScalarVerdict(holds, worst, witness)


def is_monotone_scalar(f, grid=200, decreasing=False):
    points = f.grid(int(grid))
    steps = np.diff(f.evaluate(points))
    if decreasing:
        steps = -steps
    scale = max(1.0, float(np.max(np.abs(f.evaluate(points)))))
    k = int(np.argmin(steps))
    worst = float(steps[k]) / scale
    holds = worst >= -SCALAR_RTOL
    witness = None if holds else (float(points[k]), float(points[k + 1]),
                                  None)
    return ScalarVerdict(holds, worst, witness)


# classification

Classification = namedtuple('Classification',
                            ['spec', 'verdicts', 'disagreements',
                             'unconfirmed'])

_SAMPLED = OrderedDict([
    ('op_monotone', check_op_monotone),
    ('op_monotone_decreasing', check_op_monotone_decreasing),
    ('op_convex', check_op_convex),
    ('op_concave', check_op_concave),
    ('op_geodesically_convex', check_op_geodesic_convex),
    ('op_geodesically_concave', check_op_geodesic_concave),
    ('convex_log', check_op_convex_log),
    ('concave_log', check_op_concave_log),
    ('op_log_convex', check_op_log_convex),
])

SCALAR_GRID = 40


def _guarded(check, *args, **kwargs):
    try:
        return check(*args, **kwargs)
    except (DomainViolation, NotPositiveDefinite, NonPositiveArgument,
            ArgumentOutOfRange):
        return None


def classify(f, n=3, trials=1000, seed=0, v_grid=DEFAULT_V_GRID,
             tol=MARGIN_TOL, log=True):
    """
    Samples every class predicate for ``f`` and compares the outcome with
    its claims.

    Args:
        f: a FunctionSpec.

        n, trials, seed, v_grid, tol: passed on to the samplers.

        log: log the claims the samples disagree with.

    Returns:
        Classification(spec, verdicts, disagreements, unconfirmed) where
        verdicts maps each predicate to a SampleVerdict (None when the
        predicate does not apply to f), disagreements lists claimed_true
        flags with a failing verdict and unconfirmed lists claimed_false
        flags for which no counterexample was found.
    """
    verdicts = OrderedDict()
    for flag, check in _SAMPLED.items():
        if flag in ('convex_log', 'concave_log') and f.domain[0] < 1.0:
            verdicts[flag] = None
            continue
        verdicts[flag] = _guarded(check, f, n, trials, seed, v_grid=v_grid,
                                  tol=tol)
    geometric = _guarded(check_geom_convex_scalar, f, SCALAR_GRID)
    verdicts['geometrically_convex'] = None if geometric is None else \
        geometric.as_sample_verdict(SCALAR_GRID ** 2 * len(DEFAULT_V_GRID))
    verdicts['increasing'] = is_monotone_scalar(f).as_sample_verdict(200)
    verdicts['decreasing'] = is_monotone_scalar(
        f, decreasing=True).as_sample_verdict(200)
    verdicts['scalar_convex_log'] = _guarded(
        lambda g: is_convexlog_scalar(g).as_sample_verdict(SCALAR_GRID ** 2),
        f)
    disagreements, unconfirmed = [], []
    for flag in FLAGS:
        verdict = verdicts.get(flag)
        if verdict is None:
            continue
        if f.claimed(flag) and not verdict.holds:
            disagreements.append(flag)
        elif f.claim(flag) is ClaimState.CLAIMED_FALSE and verdict.holds:
            unconfirmed.append(flag)
    if log:
        for flag in disagreements:
            log_disagreements([f.key], flag)
    return Classification(f, verdicts, disagreements, unconfirmed)
