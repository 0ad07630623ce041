"""Seeded generation of valid problems, plus the dense reference inverse.

Instances are built from the factored form the theory guarantees: Haar
unitaries U, V are split into range and complement blocks, A gets a
log-spaced spectrum on the range block, and e, f are given an invertible
component in the complement plus a ``coupling`` fraction leaking into the
range.  The coupling knob controls how hard the k-by-k pivots are, which
the underlying theory leaves unexplored.

Randomness comes from NumPy's counter-based Philox bit generator with an
explicit 64-bit seed; the same spec yields bit-identical problems.
"""

import dataclasses

import numpy as np

from . import errors
from ._linalg import extreme_singular_values
from .core import assemble, validate

__all__ = [
    "GeneratorSpec",
    "generate",
    "dense_inverse_oracle",
    "haar_unitary",
    "random_invertible",
]


@dataclasses.dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one reproducible problem instance.

    sigma_spread is the ratio of largest to smallest kept singular value
    of A; coupling in [0, 1) is the weight of the e, f components inside
    range(A) / range(A*); d_cond prescribes the condition number of D.
    """

    n: int
    k: int
    seed: int
    field: str = "real"
    sigma_spread: float = 10.0
    coupling: float = 0.5
    d_cond: float = 10.0

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer))
                and isinstance(self.k, (int, np.integer))):
            raise errors.InvalidSpec("n and k must be integers")
        if not self.n > self.k >= 1:
            raise errors.InvalidSpec(f"n > k >= 1 required, got n={self.n}, k={self.k}")
        if self.field not in ("real", "complex"):
            raise errors.InvalidSpec(f"field must be 'real' or 'complex', got {self.field!r}")
        if not self.sigma_spread >= 1:
            raise errors.InvalidSpec("sigma_spread must be >= 1")
        if not 0 <= self.coupling < 1:
            raise errors.InvalidSpec("coupling must lie in [0, 1)")
        if not self.d_cond >= 1:
            raise errors.InvalidSpec("d_cond must be >= 1")


def _gaussian(rng, shape, field):
    g = rng.standard_normal(shape)
    if field == "complex":
        g = (g + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return g


def haar_unitary(rng, n, field="real"):
    """Haar-distributed unitary (orthogonal for the real field).

    QR of a Gaussian matrix with the R diagonal's phases folded into Q,
    which makes the distribution exactly Haar.
    """
    q, r = np.linalg.qr(_gaussian(rng, (n, n), field))
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))


def random_invertible(rng, k, field="real", min_rel_sv=1e-6):
    """Gaussian k-by-k matrix redrawn until safely invertible."""
    while True:
        m = _gaussian(rng, (k, k), field)
        smax, smin = extreme_singular_values(m)
        if smax > 0 and smin > min_rel_sv * smax:
            return m


def _log_spaced(top_to_bottom_ratio, count):
    if count == 1:
        return np.ones(1)
    return np.logspace(0.0, -np.log10(top_to_bottom_ratio), count)


def generate(spec):
    """Build and validate one problem instance from its spec.

    Draw order is fixed (U, V, spectrum, e parts, f parts, D parts) so
    instances are bit-reproducible for a given spec.
    """
    if not isinstance(spec, GeneratorSpec):
        raise errors.InvalidSpec("spec must be a GeneratorSpec")
    rng = np.random.Generator(np.random.Philox(spec.seed))
    n, k, field = spec.n, spec.k, spec.field
    r = n - k

    u_full = haar_unitary(rng, n, field)
    v_full = haar_unitary(rng, n, field)
    u_r, u_k = u_full[:, :r], u_full[:, r:]
    v_r, v_k = v_full[:, :r], v_full[:, r:]

    sigma = _log_spaced(spec.sigma_spread, r)
    A = (u_r * sigma) @ v_r.conj().T

    e = spec.coupling * (u_r @ _gaussian(rng, (r, k), field)) \
        + u_k @ random_invertible(rng, k, field)
    f = spec.coupling * (v_r @ _gaussian(rng, (r, k), field)) \
        + v_k @ random_invertible(rng, k, field)

    d_left = haar_unitary(rng, k, field)
    d_right = haar_unitary(rng, k, field)
    D = (d_left * _log_spaced(spec.d_cond, k)) @ d_right.conj().T

    return validate(A, e, D, f)


def dense_inverse_oracle(problem):
    """LU-based dense inverse of the assembled sum (the reference path)."""
    try:
        return np.linalg.inv(assemble(problem))
    except np.linalg.LinAlgError:
        raise errors.OracleSingular(
            "assembled matrix is singular; validation should have excluded this"
        ) from None
