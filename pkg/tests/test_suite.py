# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import io
import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from opineq.errors import ConfigError
from opineq.generators import gen_sandwich
from opineq.suite import (ALL_PLANS, DEFAULT_R_VALUES, SuiteConfig,
                          TrialPlan, config_from_dict, load_config, plan_ids,
                          read_report_lines, resolve_seed, run_suite,
                          summarize, write_csv, write_jsonl, write_pretty)


class _WithoutConstant(TrialPlan):
    """A nabla_v B <= A #_v B, which fails whenever A != B."""
    plan_id = 'without_constant'
    check = 'reverse_young'

    def draw(self, n, trial, seed):
        return dict(pair=gen_sandwich(n, 0.5, 2.0, seed), v=0.5,
                    mu_override=1.0)


class _Skipping(TrialPlan):
    plan_id = 'skipping'
    check = 'young_chain'

    def draw(self, n, trial, seed):
        return None


class _QuietTestCase(unittest.TestCase):

    def setUp(self):
        for target in ('opineq.suite.log_module', 'opineq.suite.log_findings',
                       'opineq.suite.log_failures'):
            patch = mock.patch(target)
            patch.start()
            self.addCleanup(patch.stop)


class TestConfig(unittest.TestCase):
    """Test opineq.suite.config_from_dict() and load_config()"""

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmpdir)

    def test_defaults(self):
        config = config_from_dict({})
        self.assertIsNone(config.checks)
        self.assertEqual(config.r_grid, DEFAULT_R_VALUES)
        self.assertEqual(config.effective_seed, 0)
        self.assertTrue(config.enables('young_chain'))

    def test_bundled_default(self):
        config = load_config()
        self.assertEqual(config.trials, 20)
        self.assertEqual(config.dims, (2, 3, 4))
        self.assertEqual(config.r_grid, (0.25, 0.5, 1.0))
        self.assertEqual(config.constants_variant, 'both')
        self.assertIsNone(config.seed)

    def test_valid(self):
        config = config_from_dict({'checks': ['young_chain'], 'trials': 3,
                                   'dims': [2], 'seed': 11,
                                   'r_grid': [0.5, 1],
                                   'constants_variant': 'specht',
                                   'expected_fail': ['bourin_hiai']})
        self.assertEqual(config.checks, ['young_chain'])
        self.assertFalse(config.enables('bourin_hiai'))
        self.assertEqual(config.r_grid, (0.5, 1.0))
        self.assertEqual(config.expected_fail, ('bourin_hiai',))
        self.assertEqual(config.effective_seed, 11)
        self.assertEqual(json.loads(json.dumps(config.to_dict()))['dims'],
                         [2])

    def test_invalid(self):
        bad = [{'colour': 'blue'}, {'trials': -1}, {'trials': 2.5},
               {'trials': True}, {'dims': []}, {'dims': [0]},
               {'seed': -3}, {'v_grid': [1.2]}, {'v_grid': 'all'},
               {'r_grid': [0.0]}, {'r_grid': [1.5]}, {'tol_rel': -1.0},
               {'constants_variant': 'best'}, {'checks': ['nope']},
               {'checks': 'young_chain'}, {'expected_fail': ['nope']}]
        for obj in bad:
            with self.assertRaises(ConfigError, msg=str(obj)):
                config_from_dict(obj)
        self.assertRaises(ConfigError, config_from_dict, ['trials'])

    def test_malformed_json(self):
        path = os.path.join(self.tmpdir, 'config.json')
        with open(path, 'w') as handle:
            handle.write('{"trials": 3,')
        self.assertRaises(ConfigError, load_config, path)

    def test_missing_file(self):
        self.assertRaises(ConfigError, load_config,
                          os.path.join(self.tmpdir, 'missing.json'))

    def test_file(self):
        path = os.path.join(self.tmpdir, 'config.json')
        with open(path, 'w') as handle:
            json.dump({'trials': 4, 'seed': 2}, handle)
        config = load_config(path)
        self.assertEqual((config.trials, config.seed), (4, 2))


class TestResolveSeed(unittest.TestCase):
    """Test opineq.suite.resolve_seed()"""

    def test_precedence(self):
        env = {'OPINEQ_SEED': '9'}
        self.assertEqual(resolve_seed(1, 2, env), 1)
        self.assertEqual(resolve_seed(None, 2, env), 2)
        self.assertEqual(resolve_seed(None, None, env), 9)
        self.assertEqual(resolve_seed(None, None, {}), 0)
        self.assertEqual(resolve_seed(0, 2, env), 0)

    def test_bad_environment(self):
        self.assertRaises(ConfigError, resolve_seed, None, None,
                          {'OPINEQ_SEED': 'abc'})


class TestTrialPlan(_QuietTestCase):
    """Test opineq.suite.TrialPlan"""

    def test_run(self):
        plan = _WithoutConstant(SuiteConfig(trials=3, dims=(2, 3)))
        reports = plan.run()
        self.assertEqual(len(reports), 6)
        for report in reports:
            self.assertEqual(report.check_id, 'without_constant')
            self.assertEqual(report.verdict, 'fail')
            self.assertEqual(report.instance['fn'], 'reverse_young')
        self.assertEqual(len(set(json.dumps(r.seed) for r in reports)), 6)

    def test_trial_seed(self):
        plan = _WithoutConstant(SuiteConfig(seed=4))
        self.assertEqual(plan.trial_seed(2, 1), plan.trial_seed(2, 1))
        self.assertNotEqual(plan.trial_seed(2, 1), plan.trial_seed(3, 1))
        other = _WithoutConstant(SuiteConfig(seed=5))
        self.assertNotEqual(plan.trial_seed(2, 1), other.trial_seed(2, 1))

    def test_trials_share(self):
        plan = _WithoutConstant(SuiteConfig(trials=5))
        self.assertEqual(plan.trials(), 5)
        plan.share = 0.5
        self.assertEqual(plan.trials(), 2)
        self.assertEqual(_WithoutConstant(SuiteConfig(trials=0)).trials(), 0)

    def test_no_draw(self):
        self.assertEqual(_Skipping(SuiteConfig(trials=3)).run(), [])

    def test_expected_fail_from_config(self):
        config = SuiteConfig(expected_fail=('without_constant',))
        self.assertTrue(_WithoutConstant(config).is_expected_fail())
        self.assertFalse(_WithoutConstant(SuiteConfig()).is_expected_fail())

    def test_cannot_instantiate(self):
        self.assertRaises(TypeError, TrialPlan, SuiteConfig())


class TestSummaries(_QuietTestCase):
    """Test opineq.suite.summarize()"""

    def test_unexpected(self):
        reports = _WithoutConstant(SuiteConfig(trials=2, dims=(2,))).run()
        summary = summarize('without_constant', reports)
        self.assertEqual((summary.trials, summary.failures), (2, 2))
        self.assertTrue(summary.unexpected)
        self.assertLess(summary.worst_margin, 0.0)
        control = summarize('without_constant', reports, expected_fail=True)
        self.assertFalse(control.unexpected)

    def test_control_without_failures(self):
        self.assertTrue(summarize('control', [], True).unexpected is False)
        plan = _WithoutConstant(SuiteConfig(trials=1, dims=(2,)))
        reports = [r.relabel('control') for r in plan.run()]
        for report in reports:
            report.verdict = 'pass'
        self.assertTrue(summarize('control', reports, True).unexpected)


class TestRunSuite(_QuietTestCase):
    """Test opineq.suite.run_suite()"""

    def test_plan_ids(self):
        ids = plan_ids()
        self.assertEqual(len(ids), len(set(ids)))
        self.assertEqual(len(ALL_PLANS), 28)
        controls = [p.plan_id for p in ALL_PLANS if p.expected_fail]
        self.assertIn('op_convex_cube', controls)
        self.assertIn('bottomk_reverse_printed', controls)

    def test_empty(self):
        suite = run_suite(SuiteConfig(checks=[]))
        self.assertEqual(suite.reports, [])
        self.assertEqual(suite.exit_code, 0)

    def test_deterministic(self):
        config = SuiteConfig(checks=['young_chain', 'reverse_young'],
                             trials=3, dims=(2,), seed=3)
        first = [r.to_json() for r in run_suite(config).reports]
        second = [r.to_json() for r in run_suite(config).reports]
        self.assertEqual(first, second)
        self.assertEqual(len(first), 6)
        config.seed = 4
        third = [r.to_json() for r in run_suite(config).reports]
        self.assertNotEqual(first, third)

    def test_sorted(self):
        suite = run_suite(SuiteConfig(checks=['young_chain', 'bourin_hiai'],
                                      trials=2, dims=(3, 2)))
        keys = [(r.check_id, r.seed) for r in suite.reports]
        self.assertEqual(keys, sorted(keys))
        self.assertEqual(suite.exit_code, 0)

    def test_control_fails_as_expected(self):
        suite = run_suite(SuiteConfig(checks=['reverse_young_control'],
                                      trials=4, dims=(2,)))
        self.assertEqual(suite.expected_failures, ['reverse_young_control'])
        self.assertEqual(suite.unexpected_failures, [])
        self.assertEqual(suite.exit_code, 0)

    def test_expected_fail_that_passes(self):
        config = config_from_dict({'checks': ['young_chain'], 'trials': 2,
                                   'dims': [2],
                                   'expected_fail': ['young_chain']})
        suite = run_suite(config)
        self.assertEqual(suite.unexpected_failures, ['young_chain'])
        self.assertEqual(suite.exit_code, 1)

    def test_every_plan(self):
        suite = run_suite(SuiteConfig(trials=2, dims=(2,), seed=1))
        self.assertEqual(sorted(s.check_id for s in suite.summaries),
                         sorted(plan_ids()))
        for summary in suite.summaries:
            self.assertGreater(summary.trials, 0, summary.check_id)
            if not summary.expected_fail:
                self.assertEqual(summary.failures, 0, summary.check_id)


class TestWriters(_QuietTestCase):
    """Test the report writers"""

    def setUp(self):
        super(TestWriters, self).setUp()
        self.suite = run_suite(SuiteConfig(
            checks=['young_chain', 'reverse_young_control'], trials=2,
            dims=(2,)))

    def test_jsonl(self):
        stream = io.StringIO()
        write_jsonl(self.suite, stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual(len(lines), len(self.suite.reports) + 1)
        summary = json.loads(lines[-1])['summary']
        self.assertEqual(summary['unexpected_failures'], [])
        self.assertEqual(summary['trials'], len(self.suite.reports))
        stream.seek(0)
        reports = list(read_report_lines(stream))
        self.assertEqual([r.to_json() for r in reports],
                         [r.to_json() for r in self.suite.reports])

    def test_csv(self):
        stream = io.StringIO()
        write_csv(self.suite, stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0],
                         'check_id,seed,verdict,margin,findings,notes')
        self.assertEqual(len(lines), len(self.suite.reports) + 1)

    def test_pretty(self):
        stream = io.StringIO()
        write_pretty(self.suite, stream)
        text = stream.getvalue()
        self.assertIn('reverse_young_control', text)
        self.assertIn('(expected)', text)
        self.assertIn('FAIL reverse_young_control', text)
        self.assertTrue(text.endswith('unexpected failures: none\n'))


if __name__ == '__main__':
    unittest.main()
