# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import sys
import contextlib

import numpy as np

from opineq.spectral import HermMatrix

# t^3 is not operator convex: f((A + B) / 2) <= (f(A) + f(B)) / 2 fails
CUBE_WITNESS_A = [[1.01, 1.0], [1.0, 1.01]]
CUBE_WITNESS_B = [[3.0, 1.0], [1.0, 1.0]]
CUBE_WITNESS_V = 0.5

# A <= B in the Loewner order but A^2 <= B^2 fails
OLSON_FAIL_A = [[2.0, 1.0], [1.0, 1.0]]
OLSON_FAIL_B = [[3.0, 1.0], [1.0, 1.0]]


def _cube_witness():
    return (HermMatrix(CUBE_WITNESS_A), HermMatrix(CUBE_WITNESS_B),
            CUBE_WITNESS_V)


def _olson_fail_pair():
    return HermMatrix(OLSON_FAIL_A), HermMatrix(OLSON_FAIL_B)


def _rotation(n, seed=0):
    """A fixed orthogonal matrix, for commuting pairs in a shared basis."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _commuting_pair(a_eigs, b_eigs, seed=0):
    """Q diag(a) Q^T and Q diag(b) Q^T, with their eigenvalue arrays."""
    a_eigs = np.asarray(a_eigs, dtype=float)
    b_eigs = np.asarray(b_eigs, dtype=float)
    q = _rotation(len(a_eigs), seed)
    a = HermMatrix.symmetrized((q * a_eigs) @ q.T)
    b = HermMatrix.symmetrized((q * b_eigs) @ q.T)
    return a, b


def _spd(entries):
    return HermMatrix(entries)


@contextlib.contextmanager
def _redirect_stdout(target):
    original = sys.stdout
    sys.stdout = target
    yield
    sys.stdout = original


@contextlib.contextmanager
def _redirect_stderr(target):
    original = sys.stderr
    sys.stderr = target
    yield
    sys.stderr = original
