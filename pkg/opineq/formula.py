# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
A small formula grammar in one variable ``t``: numbers, ``+ - * /``,
powers (``^`` or ``**``) with real exponents, ``log`` and ``exp``.
Formulas are parsed with :mod:`ast` and only the nodes of that grammar
are accepted. Evaluation is vectorised over numpy arrays.
"""
import ast
import operator

import numpy as np

from opineq.errors import ParseError

VARIABLE = 't'

_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: np.power,
}
_UNARY = {
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}
_CALLS = {
    'log': np.log,
    'exp': np.exp,
}


def _validate(node):
    if isinstance(node, ast.Expression):
        _validate(node.body)
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINARY:
            raise ParseError("operator {} is not allowed".format(
                type(node.op).__name__))
        _validate(node.left)
        _validate(node.right)
    elif isinstance(node, ast.UnaryOp):
        if type(node.op) not in _UNARY:
            raise ParseError("operator {} is not allowed".format(
                type(node.op).__name__))
        _validate(node.operand)
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or \
                not isinstance(node.value, (int, float)):
            raise ParseError("only real constants are allowed, got {!r}"
                             .format(node.value))
        try:
            float(node.value)
        except OverflowError:
            raise ParseError("constant too large for a float: {}".format(
                node.value))
    elif isinstance(node, ast.Name):
        if node.id != VARIABLE:
            raise ParseError("unknown name {!r}; the only variable is "
                             "{!r}".format(node.id, VARIABLE))
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or \
                node.func.id not in _CALLS:
            raise ParseError("only log(...) and exp(...) may be called")
        if len(node.args) != 1 or node.keywords:
            raise ParseError("{} takes exactly one argument".format(
                node.func.id))
        _validate(node.args[0])
    else:
        raise ParseError("unsupported syntax: {}".format(
            type(node).__name__))


def parse(text):
    """
    Parses a formula.

    Args:
        text: the formula, e.g. ``"(log(t))^0.5"`` or ``"t/(2*t - 1)"``.

    Returns:
        The validated ``ast.Expression``.
    """
    source = str(text).replace('^', '**').strip()
    if not source:
        raise ParseError("empty formula")
    try:
        tree = ast.parse(source, mode='eval')
    except SyntaxError as err:
        raise ParseError("cannot parse {!r}: {}".format(text, err.msg))
    _validate(tree)
    return tree


def _evaluate(node, t):
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, t)
    if isinstance(node, ast.BinOp):
        return _BINARY[type(node.op)](_evaluate(node.left, t),
                                      _evaluate(node.right, t))
    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_evaluate(node.operand, t))
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return t
    return _CALLS[node.func.id](_evaluate(node.args[0], t))


def compile_formula(text):
    """
    Returns a vectorised evaluator for ``text``. Values outside the real
    domain of the formula come back as nan or inf, never as an error.
    """
    tree = parse(text)

    def evaluate(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all='ignore'):
            return np.broadcast_to(_evaluate(tree, t), t.shape).astype(float)
    return evaluate


class _Substitute(ast.NodeTransformer):

    def __init__(self, replacement):
        self.replacement = replacement

    def visit_Name(self, node):
        if node.id == VARIABLE:
            return self.replacement.body
        return node


def substitute(text, replacement):
    """
    Replaces the variable of ``text`` by the formula ``replacement``,
    e.g. substitute("1 - t", "1/t") gives "1 - 1 / t".
    """
    tree = parse(text)
    inner = parse('(' + str(replacement) + ')')
    tree = ast.fix_missing_locations(_Substitute(inner).visit(tree))
    return render(tree)


def render(tree):
    return ast.unparse(tree).replace('**', '^')
