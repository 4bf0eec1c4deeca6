# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
from opineq.logger import (log_module, log_failures, log_disagreements,
                           log_findings, _to_comma_and_str, muffle_logger,
                           reset_logger, silence_logger)
from common import _redirect_stdout
import unittest
import sys
from io import StringIO as IO


class TestLogger(unittest.TestCase):

    def tearDown(self):
        reset_logger()

    def test_log_module_singleton(self):
        logger_a = log_module()
        logger_b = log_module()
        self.assertIs(logger_a, logger_b)
        self.assertEqual(len(logger_b.handlers), 1)

    def test_log_module(self):
        logger = log_module()
        handler = logger.handlers[0]
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.name, 'opineq.logger')
        self.assertEqual(handler.stream, sys.stdout)

    def test_muffle_logger(self):
        muffle_logger()
        logger = log_module()
        handler = logger.handlers[0]
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.level, 40)
        self.assertEqual(handler.level, 40)
        self.assertEqual(handler.stream, sys.stdout)

    def test_reset_logger(self):
        muffle_logger()
        reset_logger()
        logger = log_module()
        handler = logger.handlers[0]
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.level, 20)
        self.assertEqual(handler.level, 20)

    def test_log_module_redirect(self):
        logger = log_module()
        out = IO()
        with _redirect_stdout(out):
            logger.info('Message on stdout')
        output = out.getvalue().strip()
        self.assertEqual(output, 'Message on stdout')

    def test_muffled_info_is_dropped(self):
        muffle_logger()
        out = IO()
        with _redirect_stdout(out):
            log_module().info('dropped')
            log_failures(['young_chain'])
        output = out.getvalue().strip()
        self.assertEqual(output, 'young_chain checks failed')

    def test_silence_logger(self):
        silence_logger()
        logger = log_module()
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.level, 51)
        out = IO()
        with _redirect_stdout(out):
            log_failures(['young_chain'])
            logger.critical('dropped')
        self.assertEqual(out.getvalue(), '')

    def test_to_comma_and_str(self):
        output = _to_comma_and_str(['young_chain', 'bourin_hiai',
                                    'topk_bound'], 'checks failed')
        self.assertEqual(output,
                         'young_chain, bourin_hiai and topk_bound '
                         'checks failed')

    def test_to_comma_and_str_single(self):
        self.assertEqual(_to_comma_and_str(['det'], 'failed'), 'det failed')
        self.assertEqual(_to_comma_and_str([], 'failed'), 'failed')

    def test_log_failures_sorted(self):
        out = IO()
        with _redirect_stdout(out):
            log_failures(['topk_bound', 'bourin_hiai'])
        self.assertEqual(out.getvalue().strip(),
                         'bourin_hiai and topk_bound checks failed')

    def test_log_failures_empty(self):
        out = IO()
        with _redirect_stdout(out):
            log_failures([])
        self.assertEqual(out.getvalue(), '')

    def test_log_disagreements(self):
        out = IO()
        with _redirect_stdout(out):
            log_disagreements(['cube'], 'op_convex')
        self.assertEqual(out.getvalue().strip(),
                         'cube disagree with the claimed op_convex flag')

    def test_log_findings(self):
        out = IO()
        with _redirect_stdout(out):
            log_findings('bottomk_reverse', ['first', 'second'])
        lines = [line.strip() for line in out.getvalue().splitlines()
                 if line.strip()]
        self.assertEqual(lines, ['bottomk_reverse: first',
                                 'bottomk_reverse: second'])


if __name__ == '__main__':
    unittest.main()
