"""Problem and inverse containers for rank-completed matrix sums.

A square matrix ``A`` with rank ``n - k`` becomes invertible when a rank-k
update ``e @ D @ f*`` supplies exactly the missing rank.  The inverse then
has the structured form ``G + x @ inv(D) @ y*`` where G, x, y depend only
on (A, e, f), never on D.  This module holds the validated problem and
inverse value types plus assembly and application helpers; the (G, x, y)
constructions live in :mod:`rankfill.svd` and :mod:`rankfill.direct`.

All values are immutable after construction (arrays are marked read-only)
and all operations are pure functions, so everything here is safe to share
across threads.
"""

import dataclasses
import math

import numpy as np

from . import errors
from ._linalg import EPS, extreme_singular_values, readonly

__all__ = [
    "RankModifiedProblem",
    "StructuredInverse",
    "IdentityTolerance",
    "default_rank_tol",
    "validate",
    "assemble",
    "apply_inverse",
    "reassemble_inverse",
]

# Below this gap ratio between the smallest kept and largest discarded
# singular value the rank split is flagged as ill separated.
GAP_SEPARATION = 1e3


def default_rank_tol(n):
    """Relative rank-decision threshold: n times double-precision epsilon."""
    return n * EPS


@dataclasses.dataclass(frozen=True, eq=False)
class RankModifiedProblem:
    """Validated quadruple (A, e, D, f) with dimensions (n, k).

    The implied invertible matrix is ``A + e @ D @ f*``; use
    :func:`assemble` to materialize it.  Instances are produced by
    :func:`validate` and are immutable; ``diagnostics`` carries rank and
    conditioning information gathered during validation.
    """

    A: np.ndarray
    e: np.ndarray
    D: np.ndarray
    f: np.ndarray
    n: int
    k: int
    tol_rank: float
    field: str
    diagnostics: dict = dataclasses.field(default_factory=dict, repr=False)

    @property
    def r(self):
        return self.n - self.k


@dataclasses.dataclass(frozen=True, eq=False)
class StructuredInverse:
    """The triple (G, x, y) with ``inverse = G + x @ inv(D) @ y*``.

    Valid for every invertible D paired with the same (A, e, f); the
    factors themselves carry no dependence on D.
    """

    G: np.ndarray
    x: np.ndarray
    y: np.ndarray
    n: int
    k: int
    field: str
    diagnostics: dict = dataclasses.field(default_factory=dict, repr=False)


@dataclasses.dataclass(frozen=True)
class IdentityTolerance:
    """Residual acceptance rule: pass when ``r <= abs + rel * scale``.

    ``scale`` is supplied by the check that produced the residual; for
    product identities it is the sum over terms of the products of the
    operands' Frobenius norms (plus the norm of any constant target), so
    pass/fail is dimensionless and size independent.
    """

    abs: float = 1e-12
    rel: float = 1e-12

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be nonnegative")

    def accepts(self, residual, scale):
        return bool(residual <= self.abs + self.rel * scale)


def _as_field_matrix(name, value, dtype):
    m = np.asarray(value)
    if m.ndim != 2:
        raise errors.DimensionMismatch(f"{name} must be a 2-d array, got ndim={m.ndim}")
    m = m.astype(dtype, copy=True)
    if not np.all(np.isfinite(m)):
        raise errors.NonFiniteInput(f"{name} contains non-finite entries")
    return readonly(m)


def validate(A, e, D, f, tol_rank=None):
    """Check the inversion hypotheses and return the validated problem.

    Verifies, via singular values at the relative threshold ``tol_rank``
    (default ``n * eps``):

    * shapes are n-by-n, n-by-k, k-by-k, n-by-k with n > k >= 1,
    * A has numerical rank exactly n - k,
    * D is invertible,
    * the columns of e complete the column space of A (U_k* e invertible),
    * the columns of f complete the column space of A* (f* V_k invertible).

    Raises
    ------
    DimensionMismatch, RankOfANotNMinusK, DSingular, SpanDeficientE,
    SpanDeficientF
        Violated hypotheses are hard errors, not warnings.
    """
    field = "complex" if any(np.iscomplexobj(np.asarray(m)) for m in (A, e, D, f)) else "real"
    dtype = np.complex128 if field == "complex" else np.float64

    A = _as_field_matrix("A", A, dtype)
    e = _as_field_matrix("e", e, dtype)
    D = _as_field_matrix("D", D, dtype)
    f = _as_field_matrix("f", f, dtype)

    n = A.shape[0]
    if A.shape != (n, n):
        raise errors.DimensionMismatch(f"A must be square, got {A.shape}")
    k = e.shape[1]
    if e.shape != (n, k):
        raise errors.DimensionMismatch(f"e must be {n}x{k}, got {e.shape}")
    if f.shape != (n, k):
        raise errors.DimensionMismatch(f"f must be {n}x{k}, got {f.shape}")
    if D.shape != (k, k):
        raise errors.DimensionMismatch(f"D must be {k}x{k}, got {D.shape}")
    if not n > k >= 1:
        raise errors.RankOfANotNMinusK(
            f"n > k >= 1 required, got n={n}, k={k}", detected_rank=None
        )

    if tol_rank is None:
        tol_rank = default_rank_tol(n)
    if tol_rank < 0:
        raise ValueError("tol_rank must be nonnegative")

    U, s, Vh = np.linalg.svd(A)
    sigma_max = float(s[0])
    rank = int(np.count_nonzero(s > tol_rank * sigma_max)) if sigma_max > 0 else 0
    r = n - k
    if rank != r:
        raise errors.RankOfANotNMinusK(
            f"rank(A) must be n - k = {r}, detected {rank} at tol_rank={tol_rank:g}",
            detected_rank=rank,
        )

    d_max, d_min = extreme_singular_values(D)
    if d_max == 0.0 or d_min <= tol_rank * d_max:
        raise errors.DSingular(
            f"D is numerically singular: sigma_min/sigma_max = "
            f"{0.0 if d_max == 0.0 else d_min / d_max:.3e}"
        )

    U_k = U[:, rank:]
    V_k = Vh[rank:, :].conj().T
    pe_max, pe_min = extreme_singular_values(U_k.conj().T @ e)
    if pe_max == 0.0 or pe_min <= tol_rank * pe_max:
        raise errors.SpanDeficientE(
            "columns of e do not complete the column space of A "
            "(U_k* e numerically singular)"
        )
    pf_max, pf_min = extreme_singular_values(f.conj().T @ V_k)
    if pf_max == 0.0 or pf_min <= tol_rank * pf_max:
        raise errors.SpanDeficientF(
            "columns of f do not complete the column space of A* "
            "(f* V_k numerically singular)"
        )

    sigma_r = float(s[rank - 1])
    sigma_next = float(s[rank]) if rank < n else 0.0
    gap_ratio = math.inf if sigma_next == 0.0 else sigma_r / sigma_next
    diagnostics = {
        "rank": rank,
        "sigma_max": sigma_max,
        "sigma_r": sigma_r,
        "sigma_rplus1": sigma_next,
        "gap_ratio": gap_ratio,
        "ill_split": gap_ratio < GAP_SEPARATION,
        "cond_uk_e": pe_max / pe_min,
        "cond_f_vk": pf_max / pf_min,
        "cond_d": d_max / d_min,
    }
    return RankModifiedProblem(
        A=A, e=e, D=D, f=f, n=n, k=k, tol_rank=float(tol_rank), field=field,
        diagnostics=diagnostics,
    )


def assemble(problem):
    """Dense ``A + e @ D @ f*`` of a validated problem."""
    return problem.A + problem.e @ problem.D @ problem.f.conj().T


def _solve_with_d(D, k, rhs):
    D = np.asarray(D)
    if D.shape != (k, k):
        raise errors.DimensionMismatch(f"D must be {k}x{k}, got {D.shape}")
    d_max, d_min = extreme_singular_values(D)
    if d_max == 0.0 or d_min <= k * EPS * d_max:
        raise errors.DSingular("D is numerically singular")
    return np.linalg.solve(D, rhs)


def apply_inverse(inv, D, b):
    """Apply the structured inverse to ``b`` without forming it densely.

    Computes ``G @ b + x @ (inv(D) @ (y* @ b))`` in O(n^2 m + n k m + k^3)
    for an n-by-m right-hand side.  ``b`` may be a vector or a matrix.
    """
    b = np.asarray(b)
    if b.shape[0] != inv.n:
        raise errors.DimensionMismatch(
            f"right-hand side must have {inv.n} rows, got {b.shape[0]}"
        )
    core = _solve_with_d(D, inv.k, inv.y.conj().T @ b)
    return inv.G @ b + inv.x @ core


def reassemble_inverse(inv, D_new):
    """Dense inverse of ``A + e @ D_new @ f*`` for a fresh invertible core.

    Reuses (G, x, y) so a D swap costs O(n^2 k) instead of a fresh O(n^3)
    factorization.
    """
    return inv.G + inv.x @ _solve_with_d(D_new, inv.k, inv.y.conj().T)
