"""Canonical (Halmos) decomposition of a pair of orthogonal projections.

The ambient space splits into four corner subspaces

* ``M00 = ran P  intersect ran Q``
* ``M01 = ran P  intersect ker Q``
* ``M10 = ker P  intersect ran Q``
* ``M11 = ker P  intersect ker Q``

plus a generic part ``M (+) M'`` with ``M = ran P (-) (M00 (+) M01)`` and
``M'`` its partner inside the orthocomplement of ``ran P``.  On the generic
part, written in paired coordinates, the pair takes the normal form

    P = [[I, 0], [0, 0]],    Q = [[H, R], [R, I - H]],   R = sqrt(H (I - H)),

where the hermitian ``H`` (the compression of ``PQP`` to ``M``) has spectrum
strictly inside ``(0, 1)``.  This module computes the decomposition with a
deterministic basis choice, rebuilds the pair from it, and evaluates the
counting consequences (existence of a symmetric intertwiner, dimension of
the commutant).

Basis conventions fixed here and relied on elsewhere:

* corner subspaces are read off the eigenspaces of ``A = P - Q`` (at +-1)
  and ``B = I - P - Q`` (at -+1), with ``rank_tol`` eigenvalue proximity;
* ``basis_m`` consists of eigenvectors of the compression of ``Q`` to ``M``,
  so the stored ``h`` is diagonal with ascending eigenvalues;
* ``basis_mprime`` holds the partner vectors
  ``(Q - h_j) m_j / sqrt(h_j (1 - h_j))`` (Loewdin-orthonormalized), which
  makes the pairing unitary ``w`` the identity;
* eigenvector columns are phase-fixed (first significant entry real
  positive) so repeated runs give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentDimsError, InternalError
from .matcore import (
    Array,
    Tolerance,
    cluster_indices,
    fix_column_phases,
    freeze,
    herm_eig,
    hermitize,
    matfun_hermitian,
)
from .projpair import OrthProjPair

__all__ = [
    "SubspaceDims",
    "HalmosDecomposition",
    "halmos_decompose",
    "reconstruct",
    "assemble_generic_block",
    "exists_symmetric_unitary",
    "commutant_dim",
]


@dataclass(frozen=True)
class SubspaceDims:
    """Dimensions of the four corner subspaces and of the generic block."""

    d00: int
    d01: int
    d10: int
    d11: int
    dm: int

    @property
    def total(self) -> int:
        return self.d00 + self.d01 + self.d10 + self.d11 + 2 * self.dm

    @property
    def rank_p(self) -> int:
        return self.d00 + self.d01 + self.dm

    @property
    def rank_q(self) -> int:
        return self.d00 + self.d10 + self.dm

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.d00, self.d01, self.d10, self.d11, self.dm)


@dataclass(frozen=True, eq=False)
class HalmosDecomposition:
    """Orthonormal bases of the five canonical subspaces plus the generic data.

    ``basis00 .. basis11`` and ``basis_m``, ``basis_mprime`` are ambient-by-d
    column blocks whose concatenation is unitary.  ``h`` is the hermitian
    generic-block operator in ``basis_m`` coordinates (diagonal, ascending,
    spectrum in ``(0, 1)``) and ``w`` the pairing unitary from ``M``
    coordinates to ``M'`` coordinates (the identity for decompositions
    produced here).
    """

    basis00: Array
    basis01: Array
    basis10: Array
    basis11: Array
    basis_m: Array
    basis_mprime: Array
    w: Array
    h: Array
    dims: SubspaceDims

    @property
    def ambient_dim(self) -> int:
        return self.basis00.shape[0]

    @property
    def generic_basis(self) -> Array:
        """Columns spanning ``M (+) M'`` in the paired order."""
        return np.hstack([self.basis_m, self.basis_mprime])


def _select_eigvecs(es, target: float, rank_tol: float) -> Array:
    mask = np.abs(es.eigenvalues - target) <= rank_tol
    return es.eigenvectors[:, mask]


def halmos_decompose(pair: OrthProjPair, tol: Tolerance | None = None) -> HalmosDecomposition:
    """Compute the canonical decomposition of a validated projection pair.

    Corner subspaces are the ``+-1`` eigenspaces of ``A = P - Q`` and
    ``B = I - P - Q`` (detected within ``rank_tol``); the generic block is
    diagonalized so that ``h`` comes out diagonal ascending.  Fails loudly
    with :class:`InternalError` if the numerically detected dimensions are
    inconsistent (in particular if ``dim M != dim M'``) or if an ``h``
    eigenvalue escapes ``(rank_tol, 1 - rank_tol)``.
    """
    tol = tol or Tolerance.for_scale()
    n = pair.dim

    ea = herm_eig(pair.a, tol)
    eb = herm_eig(pair.b, tol)
    basis01 = fix_column_phases(_select_eigvecs(ea, 1.0, tol.rank_tol))
    basis10 = fix_column_phases(_select_eigvecs(ea, -1.0, tol.rank_tol))
    basis00 = fix_column_phases(_select_eigvecs(eb, -1.0, tol.rank_tol))
    basis11 = fix_column_phases(_select_eigvecs(eb, 1.0, tol.rank_tol))
    d00, d01 = basis00.shape[1], basis01.shape[1]
    d10, d11 = basis10.shape[1], basis11.shape[1]

    # Projector onto M = ran P minus the two corner subspaces inside ran P.
    pm = pair.p - basis00 @ basis00.conj().T - basis01 @ basis01.conj().T
    em = herm_eig(hermitize(pm), tol)
    rm = em.eigenvectors[:, em.eigenvalues > 0.5]
    dm = rm.shape[1]

    rank_p = int(round(float(np.real(np.trace(pair.p)))))
    if d00 + d01 + dm != rank_p:
        raise InternalError(
            f"detected dims d00={d00}, d01={d01}, dm={dm} disagree with rank P = {rank_p}"
        )
    dm_prime = n - rank_p - d10 - d11
    if dm_prime != dm:
        raise InternalError(f"dim M = {dm} but dim M' = {dm_prime}; decomposition is inconsistent")

    if dm:
        t = hermitize(rm.conj().T @ pair.q @ rm)
        eh = herm_eig(t, tol)
        h_eigs = eh.eigenvalues
        if h_eigs[0] <= tol.rank_tol or h_eigs[-1] >= 1.0 - tol.rank_tol:
            raise InternalError(
                f"generic-block spectrum [{h_eigs[0]:.3e}, {h_eigs[-1]:.3e}] "
                f"leaves (rank_tol, 1 - rank_tol); corner detection missed a subspace"
            )
        basis_m = fix_column_phases(rm @ eh.eigenvectors)
        partners = (pair.q @ basis_m - basis_m * h_eigs) / np.sqrt(h_eigs * (1.0 - h_eigs))
        # Loewdin orthonormalization keeps the partners as close as possible
        # to the raw ones, preserving the pairing gauge w = I.
        gram = partners.conj().T @ partners
        basis_mprime = partners @ matfun_hermitian(gram, lambda x: 1.0 / np.sqrt(x), tol)
        h = np.diag(h_eigs).astype(np.complex128)
    else:
        basis_m = np.zeros((n, 0), dtype=np.complex128)
        basis_mprime = np.zeros((n, 0), dtype=np.complex128)
        h = np.zeros((0, 0), dtype=np.complex128)

    return HalmosDecomposition(
        basis00=freeze(basis00),
        basis01=freeze(basis01),
        basis10=freeze(basis10),
        basis11=freeze(basis11),
        basis_m=freeze(basis_m),
        basis_mprime=freeze(basis_mprime),
        w=freeze(np.eye(dm, dtype=np.complex128)),
        h=freeze(h),
        dims=SubspaceDims(d00=d00, d01=d01, d10=d10, d11=d11, dm=dm),
    )


def _check_shapes(dec: HalmosDecomposition) -> None:
    dims = dec.dims
    blocks = [
        ("basis00", dec.basis00, dims.d00),
        ("basis01", dec.basis01, dims.d01),
        ("basis10", dec.basis10, dims.d10),
        ("basis11", dec.basis11, dims.d11),
        ("basis_m", dec.basis_m, dims.dm),
        ("basis_mprime", dec.basis_mprime, dims.dm),
    ]
    n = dec.basis00.shape[0]
    for name, block, cols in blocks:
        if block.ndim != 2 or block.shape != (n, cols):
            raise InconsistentDimsError(
                f"{name} has shape {block.shape}, expected ({n}, {cols})"
            )
    if dec.w.shape != (dims.dm, dims.dm):
        raise InconsistentDimsError(f"w has shape {dec.w.shape}, expected square of size {dims.dm}")
    if dec.h.shape != (dims.dm, dims.dm):
        raise InconsistentDimsError(f"h has shape {dec.h.shape}, expected square of size {dims.dm}")
    if dims.total != n:
        raise InconsistentDimsError(f"dims {dims.as_tuple()} total {dims.total} != ambient {n}")


def assemble_generic_block(dec: HalmosDecomposition, middle: Array) -> Array:
    """Lift a 2dm x 2dm block operator on ``M (+) M'`` to the ambient space.

    ``middle`` is given in the paired normal-form coordinates; the stored
    pairing unitary ``w`` is applied as ``diag(I, w)* middle diag(I, w)``
    before rotating into the ambient basis.
    """
    dm = dec.dims.dm
    n = dec.ambient_dim
    if dm == 0:
        return np.zeros((n, n), dtype=np.complex128)
    middle = np.asarray(middle, dtype=np.complex128)
    if middle.shape != (2 * dm, 2 * dm):
        raise InconsistentDimsError(f"middle has shape {middle.shape}, expected {(2 * dm, 2 * dm)}")
    wb = np.zeros((2 * dm, 2 * dm), dtype=np.complex128)
    wb[:dm, :dm] = np.eye(dm)
    wb[dm:, dm:] = dec.w
    c = dec.generic_basis
    return c @ wb.conj().T @ middle @ wb @ c.conj().T


def reconstruct(dec: HalmosDecomposition, tol: Tolerance | None = None) -> tuple[Array, Array]:
    """Rebuild ``(P, Q)`` from a decomposition.

    Raises :class:`InconsistentDimsError` when the stored blocks do not fit
    together.  For a decomposition produced by :func:`halmos_decompose` the
    round-trip residual stays within ``100 * atol``.
    """
    _check_shapes(dec)
    tol = tol or Tolerance.for_scale()
    dm = dec.dims.dm
    p = (
        dec.basis00 @ dec.basis00.conj().T
        + dec.basis01 @ dec.basis01.conj().T
        + dec.basis_m @ dec.basis_m.conj().T
    )
    q = dec.basis00 @ dec.basis00.conj().T + dec.basis10 @ dec.basis10.conj().T
    if dm:
        r = matfun_hermitian(dec.h, lambda x: np.sqrt(x * (1.0 - x)), tol)
        ih = np.eye(dm) - dec.h
        qblock = np.block([[dec.h, r], [r, ih]])
        q = q + assemble_generic_block(dec, qblock)
    return p, q


def exists_symmetric_unitary(dec: HalmosDecomposition) -> bool:
    """Whether a unitary ``U`` with ``UPU* = Q`` and ``UQU* = P`` exists.

    Exactly the dimension condition ``dim M01 = dim M10``.
    """
    return dec.dims.d01 == dec.dims.d10


def commutant_dim(dec: HalmosDecomposition, tol: Tolerance | None = None) -> int:
    """Complex dimension of ``{Z : ZP = PZ, ZQ = QZ}``.

    Equal to ``d00^2 + d01^2 + d10^2 + d11^2 + sum_k m_k^2`` where the
    ``m_k`` are the multiplicities of the distinct eigenvalue clusters of
    ``h`` (grouped within ``rank_tol``).
    """
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    total = dims.d00**2 + dims.d01**2 + dims.d10**2 + dims.d11**2
    if dims.dm:
        h_eigs = herm_eig(dec.h, tol).eigenvalues
        for idx in cluster_indices(h_eigs, tol.rank_tol):
            total += len(idx) ** 2
    return total
