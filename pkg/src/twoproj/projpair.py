"""Validated pairs of orthogonal projections and their difference calculus.

For projections ``P`` and ``Q`` the operators ``A = P - Q`` and
``B = I - P - Q`` satisfy ``A^2 + B^2 = I`` and ``AB + BA = 0``, and ``B``
intertwines the pair: ``BP = QB`` and ``BQ = PB``.  When ``||A|| < 1`` the
normalization ``(I - A^2)^{-1/2} B`` is a hermitian unitary that swaps
``P`` and ``Q``; this module constructs it and the closely related product
pair ``V = PQ + (I-P)(I-Q)``, ``W = QP + (I-Q)(I-P)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatchError,
    NormTooLargeError,
    NotHermitianError,
    NotProjectionError,
)
from .matcore import (
    Array,
    Tolerance,
    as_matrix,
    freeze,
    herm_eig,
    matfun_hermitian,
    spectral_norm,
)

__all__ = [
    "OrthProjPair",
    "VerificationReport",
    "make_orth_pair",
    "kato_unitary",
    "kato_pair_vw",
    "verify_supersymmetry",
]


@dataclass(frozen=True, eq=False)
class OrthProjPair:
    """A validated pair of orthogonal projections with cached ``A`` and ``B``.

    Construct through :func:`make_orth_pair`; the stored arrays are read-only.
    """

    p: Array
    q: Array
    a: Array
    b: Array
    dim: int


@dataclass(frozen=True)
class VerificationReport:
    """Named residuals, their accepted bounds, and the resulting verdict."""

    residuals: dict
    bounds: dict
    verdict: bool
    tolerance_used: Tolerance


def build_report(residuals: dict, bounds: dict, tol: Tolerance) -> VerificationReport:
    verdict = all(residuals[k] <= bounds[k] for k in residuals)
    return VerificationReport(residuals=residuals, bounds=bounds, verdict=verdict, tolerance_used=tol)


def make_orth_pair(p, q, tol: Tolerance | None = None) -> OrthProjPair:
    """Validate two matrices as same-size orthogonal projections.

    Rejects inputs instead of repairing them: idempotency and hermiticity
    residuals must both stay within ``atol * max(1, ||P||, ||Q||)``.

    Raises
    ------
    DimMismatchError, NotProjectionError, NotHermitianError
    """
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
        herm = spectral_norm(m - m.conj().T)
        if herm > bound:
            raise NotHermitianError(f"{name}: hermiticity residual {herm:.3e} exceeds {bound:.3e}")
    n = p.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    return OrthProjPair(
        p=freeze(p),
        q=freeze(q),
        a=freeze(p - q),
        b=freeze(eye - p - q),
        dim=n,
    )


def verify_supersymmetry(pair: OrthProjPair, tol: Tolerance | None = None) -> VerificationReport:
    """Check ``A^2 + B^2 = I`` and ``AB + BA = 0`` for the pair."""
    tol = tol or Tolerance.for_scale()
    eye = np.eye(pair.dim)
    residuals = {
        "pythagoras": spectral_norm(pair.a @ pair.a + pair.b @ pair.b - eye),
        "anticommutator": spectral_norm(pair.a @ pair.b + pair.b @ pair.a),
    }
    bounds = {k: tol.atol for k in residuals}
    return build_report(residuals, bounds, tol)


def _norm_a(pair: OrthProjPair, tol: Tolerance) -> float:
    w = herm_eig(pair.a, tol).eigenvalues
    return float(np.max(np.abs(w)))


def kato_unitary(pair: OrthProjPair, tol: Tolerance | None = None) -> Array:
    """Hermitian unitary ``(I - A^2)^{-1/2} B`` swapping ``P`` and ``Q``.

    Defined only when ``||A|| < 1``; the norm is measured as the largest
    eigenvalue magnitude of ``A`` and must stay below ``1 - rank_tol``,
    otherwise :class:`NormTooLargeError` is raised.
    """
    tol = tol or Tolerance.for_scale()
    norm_a = _norm_a(pair, tol)
    if norm_a >= 1.0 - tol.rank_tol:
        raise NormTooLargeError(
            f"||P - Q|| = {norm_a:.12f} is not below 1 - rank_tol = {1.0 - tol.rank_tol:.12f}"
        )
    eye = np.eye(pair.dim)
    c = matfun_hermitian(eye - pair.a @ pair.a, lambda w: 1.0 / np.sqrt(w), tol, singularities=(0.0,))
    return c @ pair.b


def kato_pair_vw(
    pair: OrthProjPair, normalized: bool = False, tol: Tolerance | None = None
) -> tuple[Array, Array]:
    """The product pair ``V = PQ + (I-P)(I-Q)`` and ``W = QP + (I-Q)(I-P)``.

    Raw, they satisfy ``VQ = PV``, ``WP = QW`` and ``VW = WV = I - A^2``.
    With ``normalized=True`` both are multiplied by ``(I - A^2)^{-1/2}``
    (requires ``||A|| < 1``), which makes them unitary and mutually
    inverse; the normalized ``V`` carries ``Q`` to ``P`` by conjugation
    but, unlike :func:`kato_unitary`, does not swap the two projections.
    """
    tol = tol or Tolerance.for_scale()
    eye = np.eye(pair.dim)
    v = pair.p @ pair.q + (eye - pair.p) @ (eye - pair.q)
    w = pair.q @ pair.p + (eye - pair.q) @ (eye - pair.p)
    if not normalized:
        return v, w
    norm_a = _norm_a(pair, tol)
    if norm_a >= 1.0 - tol.rank_tol:
        raise NormTooLargeError(
            f"||P - Q|| = {norm_a:.12f} is not below 1 - rank_tol = {1.0 - tol.rank_tol:.12f}"
        )
    c = matfun_hermitian(eye - pair.a @ pair.a, lambda x: 1.0 / np.sqrt(x), tol, singularities=(0.0,))
    return c @ v, c @ w
