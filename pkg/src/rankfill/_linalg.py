"""Small shared linear-algebra helpers (private)."""

import numpy as np

EPS = float(np.finfo(np.float64).eps)


def fnorm(m):
    return float(np.linalg.norm(m))


def singular_values(m):
    return np.linalg.svd(m, compute_uv=False)


def extreme_singular_values(m):
    """(sigma_max, sigma_min) of a matrix; (0.0, 0.0) for a zero matrix."""
    s = singular_values(m)
    if s.size == 0:
        return 0.0, 0.0
    return float(s[0]), float(s[-1])


def is_invertible(m, rel_tol):
    smax, smin = extreme_singular_values(m)
    return smax > 0.0 and smin > rel_tol * smax


def guarded_inv(m, rel_tol, exc):
    """Invert a small square matrix by LU, raising ``exc`` when it is
    numerically singular at ``rel_tol`` (relative to sigma_max)."""
    if not is_invertible(m, rel_tol):
        raise exc
    return np.linalg.inv(m)


def readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a
