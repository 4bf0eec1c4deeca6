# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
"""
Real symmetric matrices, their eigendecomposition and functional
calculus, and comparison in the Loewner order.
"""
import math
from collections import namedtuple
from enum import Enum

import numpy as np

from opineq._jacobi import MAX_SWEEPS, OFF_DIAGONAL_RTOL, jacobi_sweeps
from opineq.errors import (ArgumentOutOfRange, DimMismatch, DomainViolation,
                           NoConvergence, NonSymmetric, NotCommuting,
                           NotPositiveDefinite)

SYMMETRY_RTOL = 1e-12


class Tolerance(namedtuple('Tolerance', ['rel', 'abs'])):
    """
    Slack used by order comparisons: ``rel`` scales with the size of
    the operands, ``abs`` is a fixed floor (also the positive
    definiteness threshold).
    """
    __slots__ = ()

    def __new__(cls, rel=1e-9, abs=1e-10):
        if not (rel >= 0 and abs >= 0):
            raise ArgumentOutOfRange(
                "tolerances must be nonnegative, got rel={}, abs={}".format(
                    rel, abs))
        return super(Tolerance, cls).__new__(cls, float(rel), float(abs))

    def slack(self, scale):
        return self.abs + self.rel * scale


DEFAULT_TOL = Tolerance()

Spectrum = namedtuple('Spectrum', ['eigenvalues', 'eigenvectors'])


class Relation(Enum):
    LE = 'LE'
    GE = 'GE'
    EQ = 'EQ'
    INCOMPARABLE = 'INCOMPARABLE'


class LoewnerResult(namedtuple('LoewnerResult', ['relation', 'margin'])):
    __slots__ = ()

    @property
    def le(self):
        return self.relation in (Relation.LE, Relation.EQ)

    @property
    def ge(self):
        return self.relation in (Relation.GE, Relation.EQ)


class HermMatrix(object):
    """
    An immutable n x n real symmetric matrix.

    Args:
        entries: anything ``numpy.array`` turns into a square 2-d array
        of finite reals. Symmetry is required to within
        1e-12 * max(1, max|entry|); the stored entries are copied and
        made read-only.
    """
    __slots__ = ('_entries', '_spectrum')

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.size == 0:
            raise NonSymmetric(
                "expected a non-empty square matrix, got shape {}".format(
                    arr.shape))
        if not np.all(np.isfinite(arr)):
            raise ArgumentOutOfRange("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(arr))))
        asym = float(np.max(np.abs(arr - arr.T)))
        if asym > SYMMETRY_RTOL * scale:
            raise NonSymmetric(
                "matrix is not symmetric (max |A - A^T| = {:.3e})".format(
                    asym))
        arr.setflags(write=False)
        self._entries = arr
        self._spectrum = None

    @classmethod
    def symmetrized(cls, arr):
        """Builds a HermMatrix from (A + A^T) / 2."""
        arr = np.asarray(arr, dtype=float)
        return cls(0.5 * (arr + arr.T))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))

    @classmethod
    def diag(cls, values):
        return cls(np.diag(np.asarray(values, dtype=float)))

    @property
    def entries(self):
        return self._entries

    @property
    def dim(self):
        return self._entries.shape[0]

    @property
    def spectrum(self):
        if self._spectrum is None:
            self._spectrum = _decompose(self._entries)
        return self._spectrum

    @property
    def eigenvalues(self):
        return self.spectrum.eigenvalues

    def norm2(self):
        return float(np.max(np.abs(self.eigenvalues)))

    def trace(self):
        return float(np.trace(self._entries))

    def quadratic_form(self, x):
        x = np.asarray(x, dtype=float)
        return float(x @ self._entries @ x)

    def congruence(self, t):
        """Returns T A T^T, symmetrized."""
        t = t.entries if isinstance(t, HermMatrix) else np.asarray(t, float)
        return HermMatrix.symmetrized(t @ self._entries @ t.T)

    def _coerce(self, other):
        if isinstance(other, HermMatrix):
            if other.dim != self.dim:
                raise DimMismatch(
                    "dimensions differ: {} and {}".format(self.dim,
                                                          other.dim))
            return other._entries
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return HermMatrix(self._entries + other)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return HermMatrix(self._entries - other)

    def __neg__(self):
        return HermMatrix(-self._entries)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, np.floating, np.integer)):
            return HermMatrix(float(scalar) * self._entries)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def __repr__(self):
        return 'HermMatrix({})'.format(self._entries.tolist())


def as_herm(a):
    return a if isinstance(a, HermMatrix) else HermMatrix(a)


def _decompose(arr):
    diag, vectors, sweeps, off = jacobi_sweeps(arr, MAX_SWEEPS,
                                               OFF_DIAGONAL_RTOL)
    if off > OFF_DIAGONAL_RTOL * math.sqrt(float(np.sum(arr * arr))):
        raise NoConvergence(sweeps, off)
    order = np.argsort(-diag, kind='stable')
    eigenvalues = diag[order]
    eigenvectors = vectors[:, order]
    # fixed sign: largest-magnitude component of each column positive
    pivots = np.argmax(np.abs(eigenvectors), axis=0)
    signs = np.sign(eigenvectors[pivots, np.arange(len(order))])
    signs[signs == 0] = 1.0
    eigenvectors = eigenvectors * signs
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return Spectrum(eigenvalues, eigenvectors)


def eig_sym(a):
    """
    Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Args:
        a: a HermMatrix (or array-like, validated as one).

    Returns:
        Spectrum with eigenvalues in non-increasing order and the paired
        orthonormal eigenvectors as columns. Ties keep the sweep order.
    """
    return as_herm(a).spectrum


def _spectral_map(a, values):
    vectors = a.spectrum.eigenvectors
    return HermMatrix.symmetrized((vectors * values) @ vectors.T)


def apply_fn(a, f):
    """
    Functional calculus f(A) = V diag(f(lambda)) V^T.

    Args:
        a: a HermMatrix.

        f: an object with ``name``, ``domain`` (an open interval given as
        a (lo, hi) pair) and a vectorised ``evaluate`` method, such as a
        catalog FunctionSpec.

    Returns:
        f(A) as a HermMatrix.
    """
    a = as_herm(a)
    lo, hi = f.domain
    lam = a.eigenvalues
    outside = lam[(lam <= lo) | (lam >= hi)]
    if outside.size:
        raise DomainViolation(f.name, (lo, hi), outside.tolist())
    values = np.asarray(f.evaluate(lam), dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainViolation(f.name, (lo, hi), lam[~np.isfinite(values)])
    return _spectral_map(a, values)


def require_pd(a, what):
    if a.eigenvalues[-1] <= DEFAULT_TOL.abs:
        raise NotPositiveDefinite(
            "{} requires a positive definite matrix "
            "(smallest eigenvalue {:.3e})".format(what, a.eigenvalues[-1]))


def mat_pow(a, p):
    """
    Real power of a symmetric matrix. Nonnegative integer powers are
    allowed for any symmetric matrix, all other powers need A > 0.
    """
    a = as_herm(a)
    p = float(p)
    if p == 0.0:
        return HermMatrix.identity(a.dim)
    if p == 1.0:
        return a
    if not (p > 0 and p.is_integer()):
        require_pd(a, 'matrix power {}'.format(p))
    return _spectral_map(a, np.power(a.eigenvalues, p))


def inverse(a):
    return mat_pow(a, -1.0)


def mat_log(a):
    a = as_herm(a)
    require_pd(a, 'matrix logarithm')
    return _spectral_map(a, np.log(a.eigenvalues))


def mat_exp(h):
    h = as_herm(h)
    return _spectral_map(h, np.exp(h.eigenvalues))


def is_pd(a, tol=DEFAULT_TOL):
    return bool(as_herm(a).eigenvalues[-1] > tol.abs)


def _check_dims(a, b):
    if a.dim != b.dim:
        raise DimMismatch(
            "dimensions differ: {} and {}".format(a.dim, b.dim))


def loewner_cmp(a, b, tol=DEFAULT_TOL):
    """
    Compares A and B in the Loewner order.

    Args:
        a, b: HermMatrix operands of the same dimension.

        tol: a Tolerance; the slack is tol.abs + tol.rel * scale with
        scale = max(1, ||A||_2, ||B||_2).

    Returns:
        LoewnerResult(relation, margin) where margin is
        lambda_min(B - A) / scale. EQ means both LE and GE hold.
    """
    a, b = as_herm(a), as_herm(b)
    _check_dims(a, b)
    scale = max(1.0, a.norm2(), b.norm2())
    diff = (b - a).eigenvalues
    slack = tol.slack(scale)
    le = diff[-1] >= -slack
    ge = diff[0] <= slack
    if le and ge:
        relation = Relation.EQ
    elif le:
        relation = Relation.LE
    elif ge:
        relation = Relation.GE
    else:
        relation = Relation.INCOMPARABLE
    return LoewnerResult(relation, float(diff[-1] / scale))


def loewner_margin(a, b):
    """Normalised lambda_min(B - A); nonnegative iff A <= B."""
    return loewner_cmp(a, b).margin


def commutator_norm(a, b):
    a, b = as_herm(a), as_herm(b)
    _check_dims(a, b)
    comm = a.entries @ b.entries - b.entries @ a.entries
    return float(np.max(np.abs(comm)))


def require_commuting(a, b, atol=1e-8):
    norm = commutator_norm(a, b)
    if norm > atol:
        raise NotCommuting(
            "operands do not commute (max |AB - BA| = {:.3e})".format(norm))


def matrix_to_json(a):
    """Fixture form: row-major nested lists plus the dimension."""
    a = as_herm(a)
    return {'dim': a.dim, 'entries': a.entries.tolist()}


def matrix_from_json(obj):
    entries = obj['entries']
    a = HermMatrix(entries)
    if a.dim != int(obj.get('dim', a.dim)):
        raise DimMismatch(
            "fixture dim {} does not match entries of size {}".format(
                obj['dim'], a.dim))
    return a
