# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
The inequality suite: a configuration, one trial plan per suite entry
and a runner that aggregates CheckReports into a SuiteReport.
"""
import csv
import json
import os
import zlib
from abc import ABCMeta, abstractmethod
from collections import OrderedDict
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import six

from opineq.catalog import (DEFAULT_V_GRID, FLAGS, INSTANCE_MARGINS,
                            builtin_catalog, compose, linear_combination,
                            log_reparametrize, precompose_inverse,
                            reciprocal, adjoint, resolve, draw_pair,
                            draw_ordered_pair)
from opineq.checks import CheckReport, run_check
from opineq.errors import ConfigError
from opineq.generators import (child_seed, gen_commuting, gen_olson_sandwich,
                               gen_sandwich)
from opineq.logger import log_failures, log_findings, log_module
from opineq.spectral import Tolerance, mat_pow

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__),
                                   'default_config.json')
DEFAULT_R_VALUES = (0.25, 0.5, 1.0)
CONSTANT_VARIANTS = ('specht', 'kantorovich', 'both')
PQ_PAIRS = ((2.0, 2.0), (3.0, 1.5), (4.0, 4.0 / 3.0))
SEED_ENV = 'OPINEQ_SEED'


@dataclass
class SuiteConfig:
    """
    Suite settings. ``checks`` of None enables every plan; ``r_grid``
    holds the exponents 0 < r <= 1 of the reverse inequalities (the
    Olson order itself is tested on the generator's fixed grid).
    """
    checks: Optional[List[str]] = None
    trials: int = 20
    dims: Tuple[int, ...] = (2, 3, 4)
    seed: Optional[int] = None
    v_grid: Tuple[float, ...] = DEFAULT_V_GRID
    r_grid: Tuple[float, ...] = DEFAULT_R_VALUES
    tol_rel: float = 1e-9
    tol_abs: float = 1e-10
    constants_variant: str = 'both'
    expected_fail: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def tol(self):
        return Tolerance(self.tol_rel, self.tol_abs)

    @property
    def effective_seed(self):
        return 0 if self.seed is None else self.seed

    def enables(self, plan_id):
        return self.checks is None or plan_id in self.checks

    def to_dict(self):
        obj = asdict(self)
        for key in ('dims', 'v_grid', 'r_grid', 'expected_fail'):
            obj[key] = list(obj[key])
        return obj


def _fail(msg):
    raise ConfigError(msg)


def _number_list(obj, key, low, high, closed_low=True):
    values = obj[key]
    if not isinstance(values, list) or not values:
        _fail("{} must be a nonempty list".format(key))
    for value in values:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            _fail("{} entries must be numbers, got {!r}".format(key, value))
        below = value < low if closed_low else value <= low
        if below or value > high:
            _fail("{} entry {} outside [{}, {}]".format(key, value, low,
                                                        high))
    return tuple(float(v) for v in values)


def config_from_dict(obj):
    """
    Validates a decoded JSON config.

    Raises:
        ConfigError naming the first offending field.
    """
    if not isinstance(obj, dict):
        _fail("config must be a JSON object")
    known = set(SuiteConfig.__dataclass_fields__)
    unknown = sorted(set(obj) - known)
    if unknown:
        _fail("unknown config keys: {}".format(', '.join(unknown)))
    kwargs = {}
    plan_ids = set(plan.plan_id for plan in ALL_PLANS)
    for key in ('checks', 'expected_fail'):
        if key in obj and obj[key] is not None:
            ids = obj[key]
            if not isinstance(ids, list) or \
                    not all(isinstance(i, six.string_types) for i in ids):
                _fail("{} must be a list of check ids".format(key))
            bad = sorted(set(ids) - plan_ids)
            if bad:
                _fail("unknown check ids in {}: {}".format(key,
                                                           ', '.join(bad)))
            kwargs[key] = list(ids) if key == 'checks' else tuple(ids)
    if 'trials' in obj:
        trials = obj['trials']
        if isinstance(trials, bool) or not isinstance(trials, int) or \
                trials < 0:
            _fail("trials must be a nonnegative integer")
        kwargs['trials'] = trials
    if 'dims' in obj:
        dims = obj['dims']
        if not isinstance(dims, list) or not dims or not all(
                isinstance(d, int) and not isinstance(d, bool) and d >= 1
                for d in dims):
            _fail("dims must be a nonempty list of positive integers")
        kwargs['dims'] = tuple(dims)
    if 'seed' in obj and obj['seed'] is not None:
        seed = obj['seed']
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            _fail("seed must be a nonnegative integer")
        kwargs['seed'] = seed
    if 'v_grid' in obj:
        kwargs['v_grid'] = _number_list(obj, 'v_grid', 0.0, 1.0)
    if 'r_grid' in obj:
        kwargs['r_grid'] = _number_list(obj, 'r_grid', 0.0, 1.0,
                                        closed_low=False)
    for key in ('tol_rel', 'tol_abs'):
        if key in obj:
            value = obj[key]
            if isinstance(value, bool) or \
                    not isinstance(value, (int, float)) or value < 0:
                _fail("{} must be a nonnegative number".format(key))
            kwargs[key] = float(value)
    if 'constants_variant' in obj:
        if obj['constants_variant'] not in CONSTANT_VARIANTS:
            _fail("constants_variant must be one of {}".format(
                ', '.join(CONSTANT_VARIANTS)))
        kwargs['constants_variant'] = obj['constants_variant']
    return SuiteConfig(**kwargs)


def load_config(path=None):
    """
    Reads a JSON suite config; the bundled default when path is None.
    """
    path = DEFAULT_CONFIG_PATH if path is None else path
    try:
        with open(path) as handle:
            obj = json.load(handle)
    except (IOError, OSError) as err:
        raise ConfigError("cannot read config {}: {}".format(path, err))
    except ValueError as err:
        raise ConfigError("malformed JSON in {}: {}".format(path, err))
    return config_from_dict(obj)


def resolve_seed(cli_seed=None, config_seed=None, environ=None):
    """--seed, then the config seed, then $OPINEQ_SEED, then 0."""
    if cli_seed is not None:
        return int(cli_seed)
    if config_seed is not None:
        return int(config_seed)
    environ = os.environ if environ is None else environ
    if environ.get(SEED_ENV):
        try:
            return int(environ[SEED_ENV])
        except ValueError:
            raise ConfigError("{} must be an integer, got {!r}".format(
                SEED_ENV, environ[SEED_ENV]))
    return 0


# trial plans

@six.add_metaclass(ABCMeta)
class TrialPlan:
    """
    An abstract base class for one suite entry: it draws a random
    instance per trial and runs one registered check on it.

    Args:
        config: the SuiteConfig.
    """
    plan_id = None
    check = None
    # negative controls: at least one failing trial is expected
    expected_fail = False
    # fraction of config.trials run per dimension
    share = 1.0

    def __init__(self, config):
        self.config = config
        self.logger = log_module()

    def is_enabled(self):
        return self.config.enables(self.plan_id)

    def is_expected_fail(self):
        return self.expected_fail or \
            self.plan_id in self.config.expected_fail

    def trials(self):
        if self.config.trials == 0:
            return 0
        return max(1, int(round(self.config.trials * self.share)))

    def trial_seed(self, n, trial):
        return child_seed(self.config.effective_seed,
                          zlib.crc32(self.plan_id.encode('ascii')), n, trial)

    def weight(self, trial):
        grid = self.config.v_grid
        return grid[trial % len(grid)]

    def exponent(self, trial):
        grid = self.config.r_grid
        return grid[trial % len(grid)]

    def rng(self, seed):
        return np.random.default_rng(child_seed(seed, 7))

    @abstractmethod
    def draw(self, n, trial, seed):
        """
        Draw the instance of one trial.

        Returns:
            The keyword arguments of the plan's check.
        """
        pass

    def run(self):
        """Runs every trial for every configured dimension."""
        reports = []
        for n in self.config.dims:
            for trial in range(self.trials()):
                seed = self.trial_seed(n, trial)
                kwargs = self.draw(n, trial, seed)
                if kwargs is None:
                    continue
                kwargs.setdefault('tol', self.config.tol)
                report = run_check(self.check, **kwargs)
                reports.append(report.relabel(self.plan_id, seed))
        return reports


def _cycle(items, trial):
    return items[trial % len(items)]


def _sandwich_bounds(rng):
    return float(rng.uniform(0.2, 1.0)), float(rng.uniform(1.2, 5.0))


def _olson_bounds(rng):
    s = float(rng.uniform(0.05, 0.5))
    return s, s + float(rng.uniform(0.0, 1.0))


def _unit_vector(rng, n):
    return rng.standard_normal(n)


class YoungChain(TrialPlan):
    plan_id = 'young_chain'
    check = 'young_chain'

    def draw(self, n, trial, seed):
        a, b = draw_pair(n, (0.1, 10.0), seed, 0)
        return dict(a=a, b=b, v=self.weight(trial))


class ReverseYoung(TrialPlan):
    plan_id = 'reverse_young'
    check = 'reverse_young'
    mu_override = None

    def draw(self, n, trial, seed):
        s, t = _sandwich_bounds(self.rng(seed))
        return dict(pair=gen_sandwich(n, s, t, seed), v=self.weight(trial),
                    r=self.exponent(trial),
                    variant=self.config.constants_variant,
                    mu_override=self.mu_override)


class ReverseYoungControl(ReverseYoung):
    """A nabla_v B <= A #_v B: fails for A != B."""
    plan_id = 'reverse_young_control'
    expected_fail = True
    mu_override = 1.0
    share = 0.5

    def weight(self, trial):
        return 0.5


class LogMajorization(TrialPlan):
    plan_id = 'log_majorization'
    check = 'log_majorization'

    def draw(self, n, trial, seed):
        a, b = draw_pair(n, (0.1, 10.0), seed, 0)
        return dict(a=a, b=b, v=self.weight(trial))


_OPERATOR_FLAGS = [flag for flag in FLAGS if flag in INSTANCE_MARGINS]
_LOG_FLAGS = {'convex_log': 'op_convex', 'concave_log': 'op_concave'}


def _claimed_cases(functions):
    cases = []
    for f in functions:
        for flag in _OPERATOR_FLAGS:
            if f.claimed(flag):
                cases.append((f, flag))
        for flag, predicate in _LOG_FLAGS.items():
            if f.claimed(flag):
                cases.append((log_reparametrize(f), predicate))
    return cases


def _class_instance(f, predicate, n, trial, seed, v):
    draw = draw_ordered_pair if predicate in ('op_monotone',
                                              'op_monotone_decreasing') \
        else draw_pair
    a, b = draw(n, f.sample_window(), seed, 0)
    return dict(f=f, predicate=predicate, a=a, b=b, v=v)


class CatalogClaims(TrialPlan):
    """Every claimed operator class of every catalog function."""
    plan_id = 'catalog_claims'
    check = 'function_class'
    share = 2.0

    def __init__(self, config):
        super(CatalogClaims, self).__init__(config)
        self.cases = _claimed_cases(builtin_catalog())

    def draw(self, n, trial, seed):
        f, predicate = _cycle(self.cases, trial)
        return _class_instance(f, predicate, n, trial, seed,
                               self.weight(trial))


def closure_functions():
    """
    Functions built by the transforms, each with the class its
    construction guarantees.
    """
    a2 = resolve('a_minus_t[a=2]')
    return [
        linear_combination(resolve('t_minus_a[a=1]'), resolve('reciprocal'),
                           2.0),
        linear_combination(resolve('one_minus_t'), resolve('a_minus_t[a=2]'),
                           0.5),
        compose(resolve('inv_a_minus_t[a=5]'),
                resolve('t_over_t_minus_one')),
        precompose_inverse(resolve('inv_one_minus_t')),
        precompose_inverse(a2),
        reciprocal(a2),
        reciprocal(resolve('a_minus_inv_t[a=2]')),
        adjoint(a2),
        adjoint(resolve('one_minus_t')),
    ]


class GeodesicClosure(TrialPlan):
    plan_id = 'geodesic_closure'
    check = 'function_class'

    def __init__(self, config):
        super(GeodesicClosure, self).__init__(config)
        self.cases = [
            (f, 'op_geodesically_convex'
             if f.claimed('op_geodesically_convex')
             else 'op_geodesically_concave')
            for f in closure_functions()]

    def draw(self, n, trial, seed):
        f, predicate = _cycle(self.cases, trial)
        return _class_instance(f, predicate, n, trial, seed,
                               self.weight(trial))


class OpConvexCube(TrialPlan):
    """t^3 is not operator convex; some trial must find a witness."""
    plan_id = 'op_convex_cube'
    check = 'function_class'
    expected_fail = True

    def draw(self, n, trial, seed):
        return _class_instance(resolve('cube'), 'op_convex', n, trial, seed,
                               0.5)


class AdjointRefinement(TrialPlan):
    plan_id = 'adjoint_refinement'
    check = 'adjoint_refinement'

    def __init__(self, config):
        super(AdjointRefinement, self).__init__(config)
        self.functions = [resolve('one_minus_t'), resolve('a_minus_t[a=2]'),
                          resolve('a_minus_t[a=5]')]

    def draw(self, n, trial, seed):
        g = _cycle(self.functions, trial)
        a, b = draw_pair(n, adjoint(g).sample_window(), seed, 0)
        return dict(g=g, a=a, b=b, v=self.weight(trial))


class SpectralFunctional(TrialPlan):
    plan_id = 'spectral_functional'
    check = 'spectral_functional'
    functionals = ('trace_exp', 'trace_pow', 'lambda1_exp', 'lambda1_pow',
                   'topk_prod', 'det')

    def draw(self, n, trial, seed):
        a, b = draw_pair(n, (0.1, 3.0), seed, 0)
        return dict(functional=_cycle(self.functionals, trial), a=a, b=b,
                    v=self.weight(trial), alpha=1.0 + trial % 3,
                    k=1 + trial % n)


class AczelGeodesic(TrialPlan):
    plan_id = 'aczel_geodesic'
    check = 'aczel_geodesic'

    def __init__(self, config):
        super(AczelGeodesic, self).__init__(config)
        self.functions = [resolve('one_minus_t'), resolve('a_minus_t[a=2]')]

    def draw(self, n, trial, seed):
        g = _cycle(self.functions, trial)
        p, q = _cycle(PQ_PAIRS, trial // len(self.functions))
        x, y = draw_pair(n, g.sample_window(), seed, 0)
        return dict(g=g, a=mat_pow(x, 1.0 / p), b=mat_pow(y, 1.0 / q), p=p,
                    q=q, x=_unit_vector(self.rng(seed), n))


class AczelCommuting(TrialPlan):
    plan_id = 'aczel_commuting'
    check = 'aczel_commuting'

    def draw(self, n, trial, seed):
        a, b = gen_commuting(n, (0.05, 0.95), seed)
        p, q = _cycle(PQ_PAIRS, trial)
        return dict(a=a, b=b, p=p, q=q, x=_unit_vector(self.rng(seed), n))


class ConvexlogWeakMajor(TrialPlan):
    plan_id = 'convexlog_weak_major'
    check = 'convexlog_weak_major'
    interval = (1.05, 50.0)

    def __init__(self, config):
        super(ConvexlogWeakMajor, self).__init__(config)
        self.functions = [f for f in builtin_catalog()
                          if f.name == 'log_pow' and f.claimed('convex_log')]

    def draw(self, n, trial, seed):
        a, b = draw_pair(n, self.interval, seed, 0)
        return dict(f=_cycle(self.functions, trial), a=a, b=b,
                    v=self.weight(trial))


class LogMeanReverse(TrialPlan):
    plan_id = 'log_mean_reverse'
    check = 'log_mean_reverse'
    mu_override = None
    modes = ('scalar', 'search')

    def pair(self, n, trial, seed):
        s, t = _olson_bounds(self.rng(seed))
        return gen_olson_sandwich(n, s, t, seed, _cycle(self.modes, trial))

    def draw(self, n, trial, seed):
        return dict(pair=self.pair(n, trial, seed), v=self.weight(trial),
                    r=self.exponent(trial), mu_override=self.mu_override)


class LogMeanReverseControl(LogMeanReverse):
    """Without the constant the bound contradicts log-majorization."""
    plan_id = 'log_mean_reverse_control'
    expected_fail = True
    mu_override = 1.0
    modes = ('search',)
    share = 0.5

    def weight(self, trial):
        return 0.5


_CONCAVE_LOG = ('log_pow[p=0.5]', 'log_pow[p=0.7]', 'log_pow[p=1]')


class ConcavelogEigenBound(TrialPlan):
    plan_id = 'concavelog_eigen_bound'
    check = 'concavelog_eigen_bound'
    mu_override = None
    modes = ('scalar', 'search')
    functions = _CONCAVE_LOG

    def draw(self, n, trial, seed):
        s, t = _olson_bounds(self.rng(seed))
        pair = gen_olson_sandwich(n, s, t, seed, _cycle(self.modes, trial),
                                  above_identity=True)
        return dict(g=resolve(_cycle(self.functions, trial)), pair=pair,
                    v=self.weight(trial), r=self.exponent(trial),
                    mu_override=self.mu_override)


class ConcavelogEigenBoundControl(ConcavelogEigenBound):
    plan_id = 'concavelog_eigen_bound_control'
    expected_fail = True
    mu_override = 1.0
    modes = ('search',)
    functions = ('log_pow[p=1]',)
    share = 0.5

    def weight(self, trial):
        return 0.5


class AczelConcavelog(TrialPlan):
    plan_id = 'aczel_concavelog'
    check = 'aczel_concavelog'
    mu_override = None
    modes = ('scalar', 'search')

    def draw(self, n, trial, seed):
        rng = self.rng(seed)
        s, t = _olson_bounds(rng)
        pair = gen_olson_sandwich(n, s, t, seed, _cycle(self.modes, trial),
                                  above_identity=True)
        p, q = _cycle(PQ_PAIRS, trial)
        return dict(g=resolve(_cycle(_CONCAVE_LOG, trial)),
                    a=mat_pow(pair.a, 1.0 / p), b=mat_pow(pair.b, 1.0 / q),
                    p=p, q=q, r=self.exponent(trial), s=pair.s, t=pair.t,
                    x=_unit_vector(rng, n), mu_override=self.mu_override)


class AczelConcavelogControl(AczelConcavelog):
    plan_id = 'aczel_concavelog_control'
    expected_fail = True
    mu_override = 1.0
    modes = ('search',)
    share = 0.5


class BourinHiai(TrialPlan):
    plan_id = 'bourin_hiai'
    check = 'bourin_hiai'

    def draw(self, n, trial, seed):
        a, b = draw_pair(n, (0.1, 10.0), seed, 0)
        return dict(a=a, b=b, v=self.weight(trial))


class GeodesicSumEig(TrialPlan):
    plan_id = 'geodesic_sum_eig'
    check = 'geodesic_sum_eig'
    functions = ('identity', 'sqrt', 'square', 'cube', 'exp')

    def draw(self, n, trial, seed):
        g = resolve(_cycle(self.functions, trial))
        a, b = draw_pair(n, g.sample_window(), seed, 0)
        return dict(g=g, a=a, b=b, v=self.weight(trial), k=1 + trial % n)


_DECREASING = ('reciprocal', 'inv_a_plus_t[a=1]', 'inv_a_plus_t[a=2]',
               'inv_a_plus_t[a=5]')
_MONOTONE = ('identity', 'sqrt')


class MonotoneDecMu(TrialPlan):
    plan_id = 'monotone_dec_mu'
    check = 'monotone_dec_mu'
    mu_override = None
    functions = _DECREASING

    def draw(self, n, trial, seed):
        s, t = _sandwich_bounds(self.rng(seed))
        return dict(g=resolve(_cycle(self.functions, trial)),
                    pair=gen_sandwich(n, s, t, seed), v=self.weight(trial),
                    variant=self.config.constants_variant,
                    mu_override=self.mu_override)


class MonotoneDecMuControl(MonotoneDecMu):
    """1/(1+t) maps A #_v B above g(A) #_v g(B) when mu is dropped."""
    plan_id = 'monotone_dec_mu_control'
    expected_fail = True
    mu_override = 1.0
    functions = ('inv_a_plus_t[a=1]',)
    share = 0.5

    def weight(self, trial):
        return 0.5


class TopkBound(TrialPlan):
    plan_id = 'topk_bound'
    check = 'topk_bound'
    mu_override = None
    functions = _DECREASING

    def k(self, n, trial):
        return 1 + trial % n

    def draw(self, n, trial, seed):
        s, t = _sandwich_bounds(self.rng(seed))
        return dict(g=resolve(_cycle(self.functions, trial)),
                    pair=gen_sandwich(n, s, t, seed), v=self.weight(trial),
                    k=self.k(n, trial),
                    variant=self.config.constants_variant,
                    mu_override=self.mu_override)


class TopkBoundControl(TopkBound):
    plan_id = 'topk_bound_control'
    expected_fail = True
    mu_override = 1.0
    functions = ('inv_a_plus_t[a=1]',)
    share = 0.5

    def k(self, n, trial):
        return n

    def weight(self, trial):
        return 0.5


class BottomkReverse(TrialPlan):
    plan_id = 'bottomk_reverse'
    check = 'bottomk_reverse'
    direction = 'derived'

    def k(self, n, trial):
        return 1 + trial % n

    def draw(self, n, trial, seed):
        s, t = _sandwich_bounds(self.rng(seed))
        return dict(f=resolve(_cycle(_MONOTONE, trial)),
                    pair=gen_sandwich(n, s, t, seed), v=self.weight(trial),
                    k=self.k(n, trial),
                    variant=self.config.constants_variant,
                    direction=self.direction)


class BottomkReversePrinted(BottomkReverse):
    """mu^k on the smaller side: fails at k = n whenever s < t."""
    plan_id = 'bottomk_reverse_printed'
    expected_fail = True
    direction = 'printed'
    share = 0.5

    def k(self, n, trial):
        return n

    def weight(self, trial):
        return 0.5


class DetCorollaries(TrialPlan):
    plan_id = 'det_corollaries'
    check = 'det_corollaries'
    direction = 'derived'
    mu_override = None

    def draw(self, n, trial, seed):
        s, t = _sandwich_bounds(self.rng(seed))
        return dict(g=resolve(_cycle(_DECREASING, trial)),
                    f=resolve(_cycle(_MONOTONE, trial)),
                    pair=gen_sandwich(n, s, t, seed), v=self.weight(trial),
                    variant=self.config.constants_variant,
                    direction=self.direction, mu_override=self.mu_override)


class DetCorollariesPrinted(DetCorollaries):
    plan_id = 'det_corollaries_printed'
    expected_fail = True
    direction = 'printed'
    share = 0.5

    def weight(self, trial):
        return 0.5


# Every plan the suite knows about, in the order they run.
ALL_PLANS = [YoungChain, ReverseYoung, ReverseYoungControl, LogMajorization,
             CatalogClaims, GeodesicClosure, OpConvexCube, AdjointRefinement,
             SpectralFunctional, AczelGeodesic, AczelCommuting,
             ConvexlogWeakMajor, LogMeanReverse, LogMeanReverseControl,
             ConcavelogEigenBound, ConcavelogEigenBoundControl,
             AczelConcavelog, AczelConcavelogControl, BourinHiai,
             GeodesicSumEig, MonotoneDecMu, MonotoneDecMuControl, TopkBound,
             TopkBoundControl, BottomkReverse, BottomkReversePrinted,
             DetCorollaries, DetCorollariesPrinted]


def plan_ids():
    return [plan.plan_id for plan in ALL_PLANS]


# reports

@dataclass
class PlanSummary:
    check_id: str
    trials: int
    failures: int
    skipped: int
    worst_margin: Optional[float]
    worst_seed: Optional[list]
    expected_fail: bool
    findings: int = 0

    @property
    def unexpected(self):
        """
        A failure of an ordinary plan, or a negative control that never
        failed.
        """
        if self.expected_fail:
            return self.trials > 0 and self.failures == 0
        return self.failures > 0

    def to_dict(self):
        obj = asdict(self)
        obj['unexpected'] = self.unexpected
        return obj


def summarize(check_id, reports, expected_fail=False):
    worst = None
    for report in reports:
        if report.verdict == 'skipped':
            continue
        if worst is None or report.margin < worst.margin:
            worst = report
    return PlanSummary(
        check_id=check_id,
        trials=len(reports),
        failures=sum(1 for r in reports if r.verdict == 'fail'),
        skipped=sum(1 for r in reports if r.verdict == 'skipped'),
        worst_margin=None if worst is None else worst.margin,
        worst_seed=None if worst is None else worst.seed,
        expected_fail=expected_fail,
        findings=sum(len(r.findings) for r in reports))


@dataclass
class SuiteReport:
    """Every CheckReport of a run, one summary per plan and the config."""
    reports: list
    summaries: list
    config: dict

    @property
    def unexpected_failures(self):
        return [s.check_id for s in self.summaries if s.unexpected]

    @property
    def expected_failures(self):
        return [s.check_id for s in self.summaries
                if s.expected_fail and s.failures > 0]

    @property
    def exit_code(self):
        return 1 if self.unexpected_failures else 0

    def summary_dict(self):
        return OrderedDict([
            ('checks', [s.to_dict() for s in self.summaries]),
            ('trials', sum(s.trials for s in self.summaries)),
            ('failures', sum(s.failures for s in self.summaries)),
            ('unexpected_failures', self.unexpected_failures),
            ('expected_failures', self.expected_failures),
            ('config', self.config),
        ])


def _sort_key(report):
    return report.check_id, report.seed or []


def run_suite(config):
    """
    Runs every enabled plan.

    Args:
        config: a SuiteConfig.

    Returns:
        SuiteReport with reports sorted by (check_id, seed).
    """
    logger = log_module()
    reports, summaries = [], []
    for plan_class in ALL_PLANS:
        plan = plan_class(config)
        if not plan.is_enabled():
            continue
        plan_reports = plan.run()
        summary = summarize(plan.plan_id, plan_reports,
                            plan.is_expected_fail())
        worst = 'n/a' if summary.worst_margin is None else \
            '{:.3e}'.format(summary.worst_margin)
        logger.info("{}: {} trials, {} failed, {} skipped, worst margin "
                    "{}".format(plan.plan_id, summary.trials,
                                summary.failures, summary.skipped, worst))
        for report in plan_reports:
            if report.findings:
                log_findings(report.check_id, report.findings)
        reports.extend(plan_reports)
        summaries.append(summary)
    reports.sort(key=_sort_key)
    summaries.sort(key=lambda s: s.check_id)
    suite = SuiteReport(reports, summaries, config.to_dict())
    log_failures(suite.unexpected_failures, 'checks failed unexpectedly')
    return suite


CSV_FIELDS = ('check_id', 'seed', 'verdict', 'margin', 'findings', 'notes')


def write_jsonl(suite, stream):
    """One CheckReport per line, then a line holding the summary."""
    for report in suite.reports:
        stream.write(report.to_json() + '\n')
    stream.write(json.dumps({'summary': suite.summary_dict()},
                            sort_keys=True) + '\n')


def write_csv(suite, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_FIELDS)
    for report in suite.reports:
        writer.writerow([report.check_id, json.dumps(report.seed),
                         report.verdict, repr(report.margin),
                         len(report.findings), report.notes])


def write_pretty(suite, stream):
    stream.write('{:<32} {:>7} {:>8} {:>8} {:>14}\n'.format(
        'check', 'trials', 'failed', 'skipped', 'worst margin'))
    for s in suite.summaries:
        worst = '' if s.worst_margin is None else repr(s.worst_margin)
        flag = ' (expected)' if s.expected_fail else ''
        stream.write('{:<32} {:>7} {:>8} {:>8} {:>14}{}\n'.format(
            s.check_id, s.trials, s.failures, s.skipped, worst, flag))
    for report in suite.reports:
        if report.verdict == 'fail':
            stream.write('FAIL {} seed={} margin={!r}\n'.format(
                report.check_id, report.seed, report.margin))
    unexpected = suite.unexpected_failures
    stream.write('unexpected failures: {}\n'.format(
        ', '.join(unexpected) if unexpected else 'none'))


WRITERS = {'json': write_jsonl, 'csv': write_csv, 'pretty': write_pretty}


def read_report_lines(stream):
    """CheckReports from a JSON-lines stream, skipping summary lines."""
    for line in stream:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        if 'check_id' in obj:
            yield CheckReport.from_dict(obj)
