# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import math
import unittest

import numpy as np

from opineq.errors import ParseError
from opineq.formula import compile_formula, parse, render, substitute


class TestParse(unittest.TestCase):
    """Test opineq.formula.parse()"""

    def test_caret_power(self):
        self.assertEqual(render(parse('t^3')), 't ^ 3')

    def test_rejects_other_names(self):
        self.assertRaises(ParseError, parse, 'x + 1')

    def test_rejects_other_calls(self):
        self.assertRaises(ParseError, parse, 'sin(t)')
        self.assertRaises(ParseError, parse, '__import__("os")')

    def test_rejects_attributes(self):
        self.assertRaises(ParseError, parse, 't.real')

    def test_empty(self):
        self.assertRaises(ParseError, parse, '  ')

    def test_syntax_error(self):
        self.assertRaises(ParseError, parse, '1 / (t')

    def test_oversized_constant(self):
        self.assertRaises(ParseError, parse, '1' + '0' * 400)
        self.assertRaises(ParseError, compile_formula,
                          't * 1' + '0' * 400)


class TestCompile(unittest.TestCase):
    """Test opineq.formula.compile_formula()"""

    def test_vectorised(self):
        f = compile_formula('(log(t))^0.5')
        np.testing.assert_allclose(f([math.e, math.e ** 4]), [1.0, 2.0])

    def test_constant(self):
        f = compile_formula('2')
        np.testing.assert_array_equal(f([1.0, 3.0]), [2.0, 2.0])

    def test_outside_real_domain_is_nan(self):
        f = compile_formula('log(t)')
        self.assertTrue(np.isnan(f([-1.0])[0]))

    def test_unary_minus(self):
        f = compile_formula('-t + exp(0)')
        np.testing.assert_allclose(f([0.25]), [0.75])


class TestSubstitute(unittest.TestCase):

    def test_inverse_argument(self):
        text = substitute('1 - t', '1/t')
        np.testing.assert_allclose(compile_formula(text)([4.0]), [0.75])

    def test_nested(self):
        text = substitute('t / (2 * t - 1)', 't^2')
        np.testing.assert_allclose(compile_formula(text)([2.0]), [4.0 / 7.0])


if __name__ == '__main__':
    unittest.main()
