"""Dense complex matrix calculus used by every other module.

Matrices are plain ``numpy.ndarray`` objects with dtype ``complex128``; the
helpers here validate shape and finiteness at the package boundary.  ``||.||``
always denotes the spectral norm (largest singular value).

Default tolerances follow a two-safety-decade rule on top of the roughly
1e-14 relative residuals that double-precision eigensolvers deliver:
``atol = 1e-10 * max(1, ||input||)`` for residual checks and
``rank_tol = 1e-8 * max(1, ||input||)`` for rank and subspace decisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadRankError,
    DimMismatchError,
    DomainError,
    InternalError,
    InvalidMatrixError,
    NotHermitianError,
    NotSquareError,
    SingularError,
)

__all__ = [
    "Tolerance",
    "EigenSystem",
    "as_matrix",
    "spectral_norm",
    "hermitize",
    "herm_eig",
    "matfun_hermitian",
    "polar_unitary",
    "cluster_indices",
    "function_from_cluster_values",
    "fix_column_phases",
    "random_unitary",
    "random_orth_projection",
    "random_orth_pair",
    "random_generic_orth_pair",
    "random_pair_with_dims",
    "random_idempotent_pair",
    "random_instance",
]

Array = np.ndarray

ATOL_FACTOR = 1e-10
RANK_TOL_FACTOR = 1e-8

#: Condition-number ceiling for the similarity used to build random skew
#: idempotents; draws above the ceiling are rejected and redrawn.
IDEMPOTENT_COND_LIMIT = 1e3


def as_matrix(m, *, square: bool = False, name: str = "matrix") -> Array:
    """Coerce ``m`` to a fresh C-ordered complex128 2-D array and validate it.

    Parameters
    ----------
    m : array_like
        Anything ``numpy.array`` accepts, with at least one row and column.
    square : bool
        Require equal row and column counts.
    name : str
        Label used in error messages.

    Raises
    ------
    InvalidMatrixError
        Not 2-D, empty, or containing non-finite entries.
    NotSquareError
        ``square`` was requested and the matrix is rectangular.
    """
    a = np.array(m, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise InvalidMatrixError(f"{name}: expected a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrixError(f"{name}: entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise NotSquareError(f"{name}: expected a square matrix, got shape {a.shape}")
    return a


def spectral_norm(m) -> float:
    """Largest singular value of ``m``; 0.0 for size-zero arrays."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hermitize(m: Array) -> Array:
    """Average ``m`` with its adjoint, removing rounding-level asymmetry."""
    return (m + m.conj().T) / 2.0


def freeze(m: Array) -> Array:
    """Mark an array read-only so stored results cannot be mutated in place."""
    a = np.ascontiguousarray(m)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Tolerance:
    """Absolute residual tolerance and rank-decision tolerance, both > 0."""

    atol: float
    rank_tol: float

    def __post_init__(self):
        if not (self.atol > 0 and np.isfinite(self.atol)):
            raise ValueError(f"atol must be positive and finite, got {self.atol}")
        if not (self.rank_tol > 0 and np.isfinite(self.rank_tol)):
            raise ValueError(f"rank_tol must be positive and finite, got {self.rank_tol}")

    @classmethod
    def for_scale(cls, scale: float = 1.0) -> "Tolerance":
        s = max(1.0, float(scale))
        return cls(atol=ATOL_FACTOR * s, rank_tol=RANK_TOL_FACTOR * s)

    @classmethod
    def for_matrices(cls, *mats) -> "Tolerance":
        scale = max([1.0] + [spectral_norm(m) for m in mats])
        return cls.for_scale(scale)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Hermitian eigendecomposition: real eigenvalues ascending, unitary eigenvectors."""

    eigenvalues: Array
    eigenvectors: Array


def herm_eig(m, tol: Tolerance | None = None) -> EigenSystem:
    """Eigendecomposition of a hermitian matrix.

    The hermiticity defect ``||M - M*||`` must not exceed
    ``atol * max(1, ||M||)``; the solve then runs on the hermitized matrix,
    so the reconstruction ``V diag(w) V* = M`` holds to the same accuracy.

    Raises
    ------
    NotSquareError, NotHermitianError
    """
    a = as_matrix(m, square=True)
    tol = tol or Tolerance.for_matrices(a)
    scale = max(1.0, spectral_norm(a))
    defect = spectral_norm(a - a.conj().T)
    if defect > tol.atol * scale:
        raise NotHermitianError(
            f"hermiticity residual {defect:.3e} exceeds {tol.atol * scale:.3e}"
        )
    w, v = np.linalg.eigh(hermitize(a))
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def matfun_hermitian(
    m,
    f: Callable[[Array], Array],
    tol: Tolerance | None = None,
    singularities: Sequence[float] = (),
) -> Array:
    """Spectral function ``f(M)`` of a hermitian matrix.

    Parameters
    ----------
    f : callable
        Vectorized map from the real eigenvalue array to real or complex
        values, e.g. ``np.sqrt`` or ``lambda w: np.sqrt(w * (1 - w))``.
    singularities : sequence of float
        Points where ``f`` is undefined.  An eigenvalue within ``rank_tol``
        of any of them raises :class:`DomainError`.
    """
    a = as_matrix(m, square=True)
    tol = tol or Tolerance.for_matrices(a)
    es = herm_eig(a, tol)
    for s0 in singularities:
        gap = float(np.min(np.abs(es.eigenvalues - s0)))
        if gap <= tol.rank_tol:
            raise DomainError(
                f"eigenvalue within {tol.rank_tol:.3e} of singular point {s0} (gap {gap:.3e})"
            )
    fw = np.asarray(f(es.eigenvalues), dtype=np.complex128)
    if fw.shape != es.eigenvalues.shape:
        raise InvalidMatrixError("f must map the eigenvalue array to a same-shape array")
    v = es.eigenvectors
    return (v * fw) @ v.conj().T


def polar_unitary(m, tol: Tolerance | None = None) -> Array:
    """Unitary factor ``u`` of the polar decomposition ``M = u (M* M)^{1/2}``.

    Computed from the SVD as ``u = U V*``.  Raises :class:`SingularError`
    when the smallest singular value is at or below ``rank_tol``, where the
    factor stops being unique.
    """
    a = as_matrix(m, square=True)
    tol = tol or Tolerance.for_matrices(a)
    u, s, vh = np.linalg.svd(a)
    if s[-1] <= tol.rank_tol:
        raise SingularError(
            f"smallest singular value {s[-1]:.3e} is at or below rank_tol {tol.rank_tol:.3e}"
        )
    return u @ vh


def cluster_indices(values, gap: float) -> list[Array]:
    """Group an ascending 1-D real array into clusters split at gaps > ``gap``.

    Returns a list of index arrays, one per cluster, in ascending order.
    """
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        return []
    if np.any(np.diff(vals) < 0):
        raise InvalidMatrixError("cluster_indices expects ascending values")
    splits = np.nonzero(np.diff(vals) > gap)[0] + 1
    return np.split(np.arange(vals.size), splits)


def function_from_cluster_values(m, values, tol: Tolerance | None = None) -> Array:
    """Matrix taking the constant ``values[k]`` on the k-th eigenvalue cluster of ``m``.

    Clusters are formed by grouping eigenvalues of the hermitian matrix ``m``
    that are within ``rank_tol`` of each other.  ``values`` must supply one
    complex number per cluster.
    """
    a = as_matrix(m, square=True)
    tol = tol or Tolerance.for_matrices(a)
    es = herm_eig(a, tol)
    clusters = cluster_indices(es.eigenvalues, tol.rank_tol)
    vals = np.asarray(values, dtype=np.complex128).ravel()
    if vals.size != len(clusters):
        raise DimMismatchError(
            f"expected {len(clusters)} cluster values, got {vals.size}"
        )
    d = np.empty(es.eigenvalues.size, dtype=np.complex128)
    for k, idx in enumerate(clusters):
        d[idx] = vals[k]
    v = es.eigenvectors
    return (v * d) @ v.conj().T


def fix_column_phases(cols: Array, threshold: float = 1e-12) -> Array:
    """Rotate each column so its first above-threshold entry is real positive.

    Fixes the free phase of eigenvectors so decompositions come out the same
    on repeated runs.  Columns with no entry above ``threshold`` are kept.
    """
    out = np.array(cols, dtype=np.complex128, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.nonzero(np.abs(col) > threshold)[0]
        if idx.size:
            lead = col[idx[0]]
            out[:, j] = col * (np.conj(lead) / abs(lead))
    return out


# ---------------------------------------------------------------------------
# Seeded random instances
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, dim: int) -> Array:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)


def _check_rank(rank: int, dim: int, name: str) -> int:
    rank = int(rank)
    if not 0 <= rank <= dim:
        raise BadRankError(f"{name}={rank} out of range for dim={dim}")
    return rank


def random_unitary(dim: int, seed) -> Array:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with the
    R-diagonal phases absorbed into Q."""
    if dim < 1:
        raise BadRankError(f"dim must be >= 1, got {dim}")
    rng = _rng(seed)
    z = _ginibre(rng, dim)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q


def random_orth_projection(dim: int, rank: int, seed) -> Array:
    """Rank-``rank`` orthogonal projection, a Haar rotation of ``diag(1..1, 0..0)``."""
    rank = _check_rank(rank, dim, "rank")
    u = random_unitary(dim, seed)
    ur = u[:, :rank]
    return hermitize(ur @ ur.conj().T)


def random_orth_pair(dim: int, rank_p: int, rank_q: int, seed) -> tuple[Array, Array]:
    """Two independent Haar-rotated orthogonal projections of the given ranks."""
    rng = _rng(seed)
    p = random_orth_projection(dim, rank_p, rng)
    q = random_orth_projection(dim, rank_q, rng)
    return p, q


def random_pair_with_dims(
    dims: Sequence[int], seed, h_bounds: tuple[float, float] = (0.05, 0.95)
) -> tuple[Array, Array]:
    """Orthogonal projection pair with prescribed canonical subspace dimensions.

    ``dims = (d00, d01, d10, d11, dm)`` fixes the dimensions of the four
    corner subspaces (both ranges, range/kernel, kernel/range, both kernels)
    and of the generic block.  The generic-block spectrum is drawn uniformly
    from the open interval ``h_bounds``, and the assembled block pair is
    conjugated by a Haar unitary.
    """
    d00, d01, d10, d11, dm = (int(d) for d in dims)
    if min(d00, d01, d10, d11, dm) < 0:
        raise BadRankError(f"dims must be nonnegative, got {dims}")
    n = d00 + d01 + d10 + d11 + 2 * dm
    if n < 1:
        raise BadRankError("total dimension must be >= 1")
    lo, hi = h_bounds
    if not (0.0 < lo <= hi < 1.0):
        raise BadRankError(f"h_bounds must satisfy 0 < lo <= hi < 1, got {h_bounds}")
    rng = _rng(seed)
    h = rng.uniform(lo, hi, dm)
    r = np.sqrt(h * (1.0 - h))

    p0 = np.zeros((n, n), dtype=np.complex128)
    q0 = np.zeros((n, n), dtype=np.complex128)
    o00, o01, o10, o11 = 0, d00, d00 + d01, d00 + d01 + d10
    om = o11 + d11
    omp = om + dm
    for i in range(d00):
        p0[o00 + i, o00 + i] = 1.0
        q0[o00 + i, o00 + i] = 1.0
    for i in range(d01):
        p0[o01 + i, o01 + i] = 1.0
    for i in range(d10):
        q0[o10 + i, o10 + i] = 1.0
    for i in range(dm):
        p0[om + i, om + i] = 1.0
        q0[om + i, om + i] = h[i]
        q0[omp + i, omp + i] = 1.0 - h[i]
        q0[om + i, omp + i] = r[i]
        q0[omp + i, om + i] = r[i]

    u = random_unitary(n, rng)
    p = hermitize(u @ p0 @ u.conj().T)
    q = hermitize(u @ q0 @ u.conj().T)
    return p, q


def random_generic_orth_pair(dim: int, seed) -> tuple[Array, Array]:
    """Projection pair in generic position: all four corner subspaces empty.

    Requires an even ambient dimension, since both ranks must equal
    ``dim / 2`` for the corners to vanish.
    """
    if dim < 2 or dim % 2:
        raise BadRankError(f"generic position needs an even dim >= 2, got {dim}")
    return random_pair_with_dims((0, 0, 0, 0, dim // 2), seed)


def _random_idempotent(rng: np.random.Generator, dim: int, rank: int) -> Array:
    for _ in range(100):
        v = _ginibre(rng, dim)
        if np.linalg.cond(v) <= IDEMPOTENT_COND_LIMIT:
            break
    else:
        raise InternalError("could not draw a well-conditioned similarity in 100 tries")
    vinv = np.linalg.inv(v)
    return v[:, :rank] @ vinv[:rank, :]


def random_idempotent_pair(
    dim: int, rank_p: int | None = None, rank_q: int | None = None, seed=None
) -> tuple[Array, Array]:
    """Two generally non-hermitian idempotents ``V diag(1..1, 0..0) V^{-1}``.

    Each similarity ``V`` is a complex Ginibre draw, rejected and redrawn
    while its condition number exceeds ``IDEMPOTENT_COND_LIMIT``.  Ranks
    default to independent uniform draws over ``0..dim``.
    """
    if dim < 1:
        raise BadRankError(f"dim must be >= 1, got {dim}")
    rng = _rng(seed)
    rank_p = int(rng.integers(0, dim + 1)) if rank_p is None else _check_rank(rank_p, dim, "rank_p")
    rank_q = int(rng.integers(0, dim + 1)) if rank_q is None else _check_rank(rank_q, dim, "rank_q")
    p = _random_idempotent(rng, dim, rank_p)
    q = _random_idempotent(rng, dim, rank_q)
    return p, q


def random_instance(
    kind: str,
    dim: int,
    seed,
    rank: int | None = None,
    rank_p: int | None = None,
    rank_q: int | None = None,
):
    """Seeded random test instance, reproducible bit for bit per (kind, dim, seed).

    Kinds: ``unitary``, ``orth_projection`` (needs ``rank``), ``orth_pair``
    (needs ``rank_p`` and ``rank_q``), ``generic_orth_pair`` (even ``dim``),
    ``idempotent_pair`` (optional ranks).  Pair kinds return a 2-tuple.
    """
    if kind == "unitary":
        return random_unitary(dim, seed)
    if kind == "orth_projection":
        if rank is None:
            raise BadRankError("orth_projection requires rank")
        return random_orth_projection(dim, rank, seed)
    if kind == "orth_pair":
        if rank_p is None or rank_q is None:
            raise BadRankError("orth_pair requires rank_p and rank_q")
        return random_orth_pair(dim, rank_p, rank_q, seed)
    if kind == "generic_orth_pair":
        return random_generic_orth_pair(dim, seed)
    if kind == "idempotent_pair":
        return random_idempotent_pair(dim, rank_p, rank_q, seed)
    raise ValueError(f"unknown kind {kind!r}")
