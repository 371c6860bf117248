"""Similarity of idempotents that need not be hermitian.

For idempotents ``P`` and ``Q`` (no hermiticity assumed) the operators
``A = P - Q`` and ``B = I - P - Q`` still satisfy ``A^2 + B^2 = I`` and
``AB + BA = 0``, but a two-sided swap can fail to exist.  The equivalent
invertibility conditions

    (ii)  B invertible
    (iii) 1 not in the spectrum of A^2
    (iv)  P + 2Q - I and P + 2Q - 2I invertible

are decided here, together with three explicit similarities: conjugation by
``B`` itself, the normalized ``(I - A^2)^{-1/2} B`` through the principal
branch, and a rank-based one-sided intertwiner that only needs
``rank P = rank Q``.  The module also carries the standard 2 x 2
counterexample with nilpotent ``B`` and its full family of one-sided
intertwiners, none of which is ever unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatchError,
    InternalError,
    NotDiagonalizableError,
    NotProjectionError,
    RankMismatchError,
    SingularError,
    SpectrumOnCutError,
)
from .matcore import Array, Tolerance, as_matrix, freeze, spectral_norm

__all__ = [
    "IdempotentPair",
    "Prop2Report",
    "make_idempotent_pair",
    "prop2_conditions",
    "conjugate_by_b",
    "sqrt_similarity",
    "rank_matching_similarity",
    "two_by_two_family",
    "SKEW_RANK_ONE_P",
    "SKEW_RANK_ONE_Q",
]

#: Rank-one idempotent pair whose B = I - P - Q is nilpotent: every
#: invertibility condition fails and no intertwiner is ever unitary.
SKEW_RANK_ONE_P = freeze(np.array([[0.0, -1.0], [0.0, 1.0]], dtype=np.complex128))
SKEW_RANK_ONE_Q = freeze(np.array([[1.0, 2.0], [0.0, 0.0]], dtype=np.complex128))

_EIGVEC_COND_LIMIT = 1e6


@dataclass(frozen=True, eq=False)
class IdempotentPair:
    """A validated pair of idempotents (hermiticity not required)."""

    p: Array
    q: Array
    a: Array
    b: Array
    dim: int


def make_idempotent_pair(p, q, tol: Tolerance | None = None) -> IdempotentPair:
    """Validate two matrices as same-size idempotents."""
    p = as_matrix(p, square=True, name="p")
    q = as_matrix(q, square=True, name="q")
    if p.shape != q.shape:
        raise DimMismatchError(f"p has shape {p.shape} but q has shape {q.shape}")
    tol = tol or Tolerance.for_matrices(p, q)
    scale = max(1.0, spectral_norm(p), spectral_norm(q))
    bound = tol.atol * scale
    for name, m in (("p", p), ("q", q)):
        idem = spectral_norm(m @ m - m)
        if idem > bound:
            raise NotProjectionError(f"{name}: idempotency residual {idem:.3e} exceeds {bound:.3e}")
    n = p.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    return IdempotentPair(p=freeze(p), q=freeze(q), a=freeze(p - q), b=freeze(eye - p - q), dim=n)


@dataclass(frozen=True)
class Prop2Report:
    """Verdicts and margins for the three equivalent invertibility conditions.

    Margins are smallest singular values of ``B``, ``I - A^2``,
    ``P + 2Q - I`` and ``P + 2Q - 2I``; the spectrum condition itself is
    decided by the distance from 1 to the eigenvalues of ``A^2``.
    """

    b_invertible: bool
    one_not_in_spec_a2: bool
    p2q_minus_i_invertible: bool
    p2q_minus_2i_invertible: bool
    consistent: bool
    margins: dict


def _smin(m: Array) -> float:
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def prop2_conditions(pair: IdempotentPair, tol: Tolerance | None = None) -> Prop2Report:
    """Decide conditions (ii), (iii), (iv) and report their margins."""
    tol = tol or Tolerance.for_matrices(pair.p, pair.q)
    n = pair.dim
    eye = np.eye(n)
    a2 = pair.a @ pair.a
    m_b = _smin(pair.b)
    m_ia2 = _smin(eye - a2)
    m_p2q_i = _smin(pair.p + 2.0 * pair.q - eye)
    m_p2q_2i = _smin(pair.p + 2.0 * pair.q - 2.0 * eye)
    spec_gap = float(np.min(np.abs(np.linalg.eigvals(a2) - 1.0)))

    b_inv = m_b > tol.rank_tol
    one_not = spec_gap > tol.rank_tol
    iv_a = m_p2q_i > tol.rank_tol
    iv_b = m_p2q_2i > tol.rank_tol
    return Prop2Report(
        b_invertible=b_inv,
        one_not_in_spec_a2=one_not,
        p2q_minus_i_invertible=iv_a,
        p2q_minus_2i_invertible=iv_b,
        consistent=(b_inv == one_not == (iv_a and iv_b)),
        margins={
            "b": m_b,
            "one_minus_a_squared": m_ia2,
            "p_plus_2q_minus_i": m_p2q_i,
            "p_plus_2q_minus_2i": m_p2q_2i,
        },
    )


def conjugate_by_b(pair: IdempotentPair, tol: Tolerance | None = None) -> Array:
    """Return ``V = B``, which satisfies ``V P V^{-1} = Q`` and ``V Q V^{-1} = P``.

    Requires ``B`` invertible (:class:`SingularError` otherwise).  The two
    conjugation residuals are verified internally against
    ``100 * atol * cond(B)``.
    """
    tol = tol or Tolerance.for_matrices(pair.p, pair.q)
    s = np.linalg.svd(pair.b, compute_uv=False)
    if s[-1] <= tol.rank_tol:
        raise SingularError(f"B smallest singular value {s[-1]:.3e} at or below rank_tol")
    cond_b = float(s[0] / s[-1])
    binv = np.linalg.inv(pair.b)
    bound = 100.0 * tol.atol * cond_b
    res_p = spectral_norm(pair.b @ pair.p @ binv - pair.q)
    res_q = spectral_norm(pair.b @ pair.q @ binv - pair.p)
    if max(res_p, res_q) > bound:
        raise InternalError(
            f"conjugation residuals ({res_p:.3e}, {res_q:.3e}) exceed {bound:.3e}"
        )
    return np.array(pair.b)


def sqrt_similarity(pair: IdempotentPair, tol: Tolerance | None = None) -> Array:
    """Involutive similarity ``V = (I - A^2)^{-1/2} B`` via the principal branch.

    ``A^2`` must be diagonalizable with eigenvector condition number at most
    1e6 (:class:`NotDiagonalizableError`) and its spectrum must stay off the
    branch cut: an eigenvalue with real part >= 1 and imaginary part within
    ``rank_tol``, or within ``rank_tol`` of 1 itself, raises
    :class:`SpectrumOnCutError`.
    """
    tol = tol or Tolerance.for_matrices(pair.p, pair.q)
    a2 = pair.a @ pair.a
    w, vec = np.linalg.eig(a2)
    cond_vec = float(np.linalg.cond(vec))
    if cond_vec > _EIGVEC_COND_LIMIT:
        raise NotDiagonalizableError(
            f"eigenvector condition number {cond_vec:.3e} exceeds {_EIGVEC_COND_LIMIT:.1e}"
        )
    on_cut = (np.real(w) >= 1.0) & (np.abs(np.imag(w)) <= tol.rank_tol)
    if np.any(on_cut) or np.any(np.abs(w - 1.0) <= tol.rank_tol):
        raise SpectrumOnCutError(
            "spectrum of A^2 touches the principal branch cut [1, inf)"
        )
    c = (vec * (1.0 / np.sqrt(1.0 - w))) @ np.linalg.inv(vec)
    v = c @ pair.b
    res = spectral_norm(v @ v - np.eye(pair.dim))
    bound = 100.0 * tol.atol * cond_vec
    if res > bound:
        raise InternalError(f"V^2 - I residual {res:.3e} exceeds {bound:.3e}")
    return v


def rank_matching_similarity(pair: IdempotentPair, tol: Tolerance | None = None) -> Array:
    """Invertible ``V`` with ``VP = QV`` built from range and kernel bases.

    ``V`` maps an orthonormal basis of ``ran P`` onto one of ``ran Q`` and a
    basis of ``ker P`` onto one of ``ker Q``; this forces ``VP = QV``.
    Requires ``rank P = rank Q`` (ranks counted by singular values above
    ``rank_tol``), otherwise :class:`RankMismatchError`.
    """
    tol = tol or Tolerance.for_matrices(pair.p, pair.q)

    def _range_kernel(m: Array) -> tuple[Array, Array, int]:
        u, s, vh = np.linalg.svd(m)
        rank = int(np.count_nonzero(s > tol.rank_tol))
        return u[:, :rank], vh[rank:].conj().T, rank

    ran_p, ker_p, rank_p = _range_kernel(pair.p)
    ran_q, ker_q, rank_q = _range_kernel(pair.q)
    if rank_p != rank_q:
        raise RankMismatchError(f"rank P = {rank_p} != rank Q = {rank_q}")
    f = np.hstack([ran_p, ker_p])
    e = np.hstack([ran_q, ker_q])
    v = e @ np.linalg.inv(f)
    cond_v = float(np.linalg.cond(v))
    res = spectral_norm(v @ pair.p - pair.q @ v)
    bound = 100.0 * tol.atol * cond_v
    if res > bound:
        raise InternalError(f"VP - QV residual {res:.3e} exceeds {bound:.3e}")
    return v


def two_by_two_family(c: complex, b: complex) -> tuple[Array, Array]:
    """One-sided intertwiners of the rank-one counterexample pair.

    Returns ``(V, W)`` with ``V P = Q V`` and ``W Q = P W`` for the fixed
    pair ``SKEW_RANK_ONE_P``, ``SKEW_RANK_ONE_Q``; the two parameters sweep
    out the full solution spaces.  ``V = W`` only at ``c = 0``, where both
    are singular, and no member is ever unitary.
    """
    c = complex(c)
    b = complex(b)
    v = np.array([[-2.0 * c, b], [c, c]], dtype=np.complex128)
    w = np.array([[-c, b], [c, 2.0 * c]], dtype=np.complex128)
    return v, w
