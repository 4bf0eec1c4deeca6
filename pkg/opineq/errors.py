# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Exceptions raised by ``opineq``. Argument problems also derive from
``ValueError`` so plain ``except ValueError`` handling keeps working.
"""


class OpineqError(Exception):
    """Base class of every error raised by the package."""


class NonSymmetric(OpineqError, ValueError):
    pass


class NoConvergence(OpineqError, ArithmeticError):

    def __init__(self, sweeps, off_norm):
        super(NoConvergence, self).__init__(
            "Jacobi iteration did not converge after {} sweeps "
            "(off-diagonal norm {:.3e})".format(sweeps, off_norm))
        self.sweeps = sweeps
        self.off_norm = off_norm


class DomainViolation(OpineqError, ValueError):

    def __init__(self, name, domain, offending):
        self.name = name
        self.domain = domain
        self.offending = list(offending)
        super(DomainViolation, self).__init__(
            "eigenvalues {} lie outside the domain ({}, {}) of {}".format(
                self.offending, domain[0], domain[1], name))


class NotPositiveDefinite(OpineqError, ValueError):
    pass


class DimMismatch(OpineqError, ValueError):
    pass


class NonPositiveArgument(OpineqError, ValueError):
    pass


class ArgumentOutOfRange(OpineqError, ValueError):
    pass


class LengthMismatch(OpineqError, ValueError):
    pass


class IndexOutOfRange(OpineqError, IndexError):
    pass


class EmptyGrid(OpineqError, ValueError):
    pass


class EmptyDomain(OpineqError, ValueError):
    pass


class ZeroDivisionRegion(OpineqError, ZeroDivisionError):
    pass


class BadInterval(OpineqError, ValueError):
    pass


class GeneratorExhausted(OpineqError, RuntimeError):
    pass


class HypothesisViolation(OpineqError, ValueError):

    def __init__(self, hypothesis, detail=''):
        self.hypothesis = hypothesis
        msg = "hypothesis violated: {}".format(hypothesis)
        if detail:
            msg = msg + " ({})".format(detail)
        super(HypothesisViolation, self).__init__(msg)


class NotCommuting(OpineqError, ValueError):
    pass


class ConfigError(OpineqError, ValueError):
    pass


class UnknownFunction(OpineqError, KeyError):
    pass


class ParseError(OpineqError, ValueError):
    pass
