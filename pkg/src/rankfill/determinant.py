"""Determinant of a rank-completed sum, without assembling the update.

Factoring the sum through its rank split gives

    det(A + e D f*) = det(A + e f*) * det(D)

even though A itself is singular, so the core D alone decides whether the
completed matrix is singular (given A + e f* invertible).  The inverse
satisfies the mirrored relation det(G + x y*) * det(1/D).  Plain values
are computed by LU with partial pivoting (product of pivots with
permutation parity); the log variants return (sign_or_phase, log|det|)
and stay finite when the plain value over- or underflows.
"""

import numpy as np

from . import errors
from ._linalg import EPS, extreme_singular_values

__all__ = [
    "det_via_lemma",
    "det_inverse_via_lemma",
    "logdet_via_lemma",
    "logdet_inverse_via_lemma",
]


def _check_d_invertible(D, k):
    d_max, d_min = extreme_singular_values(D)
    if d_max == 0.0 or d_min <= k * EPS * d_max:
        raise errors.DSingular("D is numerically singular")


def det_via_lemma(problem):
    """det(A + e f*) * det(D); equals det of the assembled sum."""
    base = problem.A + problem.e @ problem.f.conj().T
    value = np.linalg.det(base) * np.linalg.det(problem.D)
    return complex(value) if problem.field == "complex" else float(value)


def det_inverse_via_lemma(inv, D):
    """det(G + x y*) / det(D); equals det of the dense inverse."""
    D = np.asarray(D)
    if D.shape != (inv.k, inv.k):
        raise errors.DimensionMismatch(f"D must be {inv.k}x{inv.k}, got {D.shape}")
    _check_d_invertible(D, inv.k)
    value = np.linalg.det(inv.G + inv.x @ inv.y.conj().T) / np.linalg.det(D)
    return complex(value) if inv.field == "complex" else float(value)


def logdet_via_lemma(problem):
    """(sign_or_phase, log|det|) of the completed sum, overflow safe."""
    s1, l1 = np.linalg.slogdet(problem.A + problem.e @ problem.f.conj().T)
    s2, l2 = np.linalg.slogdet(problem.D)
    sign = s1 * s2
    return (complex(sign) if problem.field == "complex" else float(sign),
            float(l1 + l2))


def logdet_inverse_via_lemma(inv, D):
    """(sign_or_phase, log|det|) of the dense inverse, overflow safe."""
    D = np.asarray(D)
    if D.shape != (inv.k, inv.k):
        raise errors.DimensionMismatch(f"D must be {inv.k}x{inv.k}, got {D.shape}")
    _check_d_invertible(D, inv.k)
    s1, l1 = np.linalg.slogdet(inv.G + inv.x @ inv.y.conj().T)
    s2, l2 = np.linalg.slogdet(D)
    sign = s1 * np.conj(s2)  # 1/s2 for a unit-magnitude sign or phase
    return (complex(sign) if inv.field == "complex" else float(sign),
            float(l1 - l2))
