"""Construction and complete parametrization of symmetric intertwiners.

A symmetric intertwiner of a projection pair is a unitary ``U`` with

    U P U* = Q   and   U Q U* = P.

One exists iff ``dim M01 = dim M10`` in the canonical decomposition.  This
module builds the standard representatives and the two complete families:

* :func:`wdd_unitary`: identity on both-range and both-kernel corners, an
  arbitrary unitary ``S`` between the mixed corners, and the involutive
  rotation ``[[sqrt(H), sqrt(I-H)], [sqrt(I-H), -sqrt(H)]]`` on the generic
  part;
* :func:`sgn_b`: the spectral sign of ``B = I - P - Q`` (needs ``B``
  injective, i.e. empty mixed corners);
* :func:`general_unitary_halmos`: the full family in normal-form
  coordinates, ``U0 (+) [[0, U10], [U01, 0]] (+) U1 (+) diag(V, V) x
  rotation`` with ``V`` unitary and commuting with ``H``;
* :func:`general_unitary_susy`: the same family written through the
  canonical form of the anticommuting pair ``(A, B)`` on the generic part,
  parametrized by a unitary ``v`` commuting with ``a = |A|``-block.

Blockwise the two parametrizations use different gauges, so members should
only be compared as ambient operators.  :func:`factor_through` implements
the uniqueness statement: any two invertible two-sided intertwiners differ
by an invertible factor commuting with both projections.  The module also
carries brute-force oracles that compute intertwiner and commutant spaces
as SVD nullspaces of stacked Sylvester-type linear maps, used to cross-check
the closed-form dimension counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatchError,
    NotCommutingError,
    NotGenericError,
    NotInjectiveError,
    NotUnitaryError,
    SingularError,
)
from .halmos import HalmosDecomposition, assemble_generic_block
from .matcore import (
    Array,
    Tolerance,
    as_matrix,
    cluster_indices,
    fix_column_phases,
    freeze,
    herm_eig,
    matfun_hermitian,
    polar_unitary,
    random_unitary,
    spectral_norm,
)
from .projpair import OrthProjPair, VerificationReport, build_report, make_orth_pair

__all__ = [
    "IntertwinerParams",
    "SusyCanonicalForm",
    "identity_params",
    "random_params",
    "random_susy_params",
    "random_commuting_unitary",
    "rotation_block",
    "wdd_unitary",
    "sgn_b",
    "susy_canonical",
    "restrict_to_generic",
    "general_unitary_halmos",
    "general_unitary_susy",
    "verify_symmetric_intertwiner",
    "factor_through",
    "oracle_intertwiner_space",
    "oracle_commutant_space",
]


@dataclass(frozen=True, eq=False)
class IntertwinerParams:
    """Free parameters of the complete intertwiner families.

    ``u0`` and ``u1`` act on the both-range and both-kernel corners.  In the
    mixed-corner block, ordered (M01, M10), ``u10`` sits upper right (it takes
    M10 coordinates into M01, shape d01 x d10) and ``u01`` lower left (M01
    coordinates into M10, shape d10 x d01).  ``v`` is the generic-part
    parameter: a unitary commuting with ``h`` for the normal-form family, or
    with the canonical ``a`` block for the supersymmetric family.  Blocks for
    empty subspaces are ``None``.
    """

    u0: Array | None = None
    u1: Array | None = None
    u01: Array | None = None
    u10: Array | None = None
    v: Array | None = None


@dataclass(frozen=True, eq=False)
class SusyCanonicalForm:
    """Canonical form of the anticommuting pair ``(A, B)`` in generic position.

    ``y`` is unitary and ``a`` hermitian positive with spectrum in (0, 1),
    such that ``A = y diag(a, -a) y*`` and
    ``B = y [[0, s], [s, 0]] y*`` with ``s = sqrt(I - a^2)``.
    """

    y: Array
    a: Array


def rotation_block(h: Array, tol: Tolerance | None = None) -> Array:
    """The involutive rotation ``[[sqrt(H), sqrt(I-H)], [sqrt(I-H), -sqrt(H)]]``."""
    tol = tol or Tolerance.for_scale()
    sh = matfun_hermitian(h, np.sqrt, tol)
    sih = matfun_hermitian(h, lambda w: np.sqrt(1.0 - w), tol)
    return np.block([[sh, sih], [sih, -sh]])


def _ensure_unitary(m: Array, atol: float, what: str) -> None:
    defect = spectral_norm(m.conj().T @ m - np.eye(m.shape[1]))
    if defect > atol:
        raise NotUnitaryError(f"{what}: unitarity defect {defect:.3e} exceeds {atol:.3e}")


def _corner_sum(
    dec: HalmosDecomposition,
    u0: Array | None,
    u1: Array | None,
    upper: Array | None,
    lower: Array | None,
) -> Array:
    n = dec.ambient_dim
    t = np.zeros((n, n), dtype=np.complex128)
    if dec.dims.d00:
        t += dec.basis00 @ u0 @ dec.basis00.conj().T
    if dec.dims.d11:
        t += dec.basis11 @ u1 @ dec.basis11.conj().T
    if dec.dims.d01:
        t += dec.basis01 @ upper @ dec.basis10.conj().T
        t += dec.basis10 @ lower @ dec.basis01.conj().T
    return t


def _require_block(block: Array | None, shape: tuple[int, int], what: str) -> Array | None:
    rows, cols = shape
    if rows == 0 and cols == 0:
        if block is not None and np.asarray(block).size:
            raise DimMismatchError(f"{what}: subspace is empty, expected no block")
        return None
    if block is None:
        raise DimMismatchError(f"{what}: block of shape {shape} is required")
    block = np.asarray(block, dtype=np.complex128)
    if block.shape != shape:
        raise DimMismatchError(f"{what}: got shape {block.shape}, expected {shape}")
    return block


def wdd_unitary(
    dec: HalmosDecomposition, s: Array | None = None, tol: Tolerance | None = None
) -> Array:
    """Symmetric intertwiner with identity corners and free mixed-corner ``S``.

    ``S`` (shape d01 x d10, unitary) occupies the upper-right slot of the
    mixed-corner block, taking M10 coordinates into M01; it defaults to the
    identity and must be absent when the mixed corners are empty.  Raises
    :class:`DimMismatchError` when ``dim M01 != dim M10`` (no symmetric
    intertwiner exists at all).
    """
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    if dims.d01 != dims.d10:
        raise DimMismatchError(
            f"dim M01 = {dims.d01} != dim M10 = {dims.d10}: no symmetric intertwiner exists"
        )
    if dims.d01:
        s = np.eye(dims.d01, dtype=np.complex128) if s is None else np.asarray(s, np.complex128)
        s = _require_block(s, (dims.d01, dims.d10), "s")
        _ensure_unitary(s, tol.atol, "s")
        upper, lower = s, s.conj().T
    else:
        if s is not None and np.asarray(s).size:
            raise DimMismatchError("s given but the mixed corners are empty")
        upper = lower = None
    eye0 = np.eye(dims.d00, dtype=np.complex128)
    eye1 = np.eye(dims.d11, dtype=np.complex128)
    u = _corner_sum(dec, eye0, eye1, upper, lower)
    if dims.dm:
        u = u + assemble_generic_block(dec, rotation_block(dec.h, tol))
    return freeze(u)


def sgn_b(pair: OrthProjPair, dec: HalmosDecomposition, tol: Tolerance | None = None) -> Array:
    """Spectral sign of ``B = I - P - Q``, a hermitian involutive intertwiner.

    Requires ``B`` injective, which is exactly ``M01 = M10 = {0}``; raises
    :class:`NotInjectiveError` otherwise (or when an eigenvalue of ``B``
    falls within ``rank_tol`` of zero).
    """
    tol = tol or Tolerance.for_scale()
    if dec.dims.d01 or dec.dims.d10:
        raise NotInjectiveError(
            f"B vanishes on the mixed corners (d01={dec.dims.d01}, d10={dec.dims.d10})"
        )
    w = herm_eig(pair.b, tol).eigenvalues
    closest = float(np.min(np.abs(w)))
    if closest <= tol.rank_tol:
        raise NotInjectiveError(f"B has an eigenvalue {closest:.3e} from zero")
    return freeze(matfun_hermitian(pair.b, np.sign, tol))


def susy_canonical(pair: OrthProjPair, tol: Tolerance | None = None) -> SusyCanonicalForm:
    """Canonical form of ``(A, B)`` for a pair in generic position.

    Built from the spectral split of ``A`` into positive and negative
    subspaces and the polar factor of the off-diagonal block of ``B``.
    Raises :class:`NotGenericError` when ``A`` or ``B`` has an eigenvalue
    within ``rank_tol`` of zero (the pair then has a corner subspace).
    """
    tol = tol or Tolerance.for_scale()
    n = pair.dim
    ea = herm_eig(pair.a, tol)
    if float(np.min(np.abs(ea.eigenvalues))) <= tol.rank_tol:
        raise NotGenericError("P - Q has a near-zero eigenvalue; pair is not in generic position")
    wb = herm_eig(pair.b, tol).eigenvalues
    if float(np.min(np.abs(wb))) <= tol.rank_tol:
        raise NotGenericError("I - P - Q has a near-zero eigenvalue; pair is not in generic position")
    pos = ea.eigenvalues > 0
    k = int(np.count_nonzero(pos))
    if 2 * k != n:
        raise NotGenericError(
            f"positive and negative spectral subspaces of P - Q have dims {k} and {n - k}"
        )
    n_pos = fix_column_phases(ea.eigenvectors[:, pos])
    # Reverse the negative part so the diagonal of a comes out ascending.
    n_neg = fix_column_phases(ea.eigenvectors[:, ~pos][:, ::-1])
    a_diag = -ea.eigenvalues[~pos][::-1]
    b_block = n_pos.conj().T @ pair.b @ n_neg
    try:
        u = polar_unitary(b_block, tol) if k else np.zeros((0, 0), dtype=np.complex128)
    except SingularError as exc:
        raise NotGenericError(f"off-diagonal block of B is numerically singular: {exc}") from exc
    y = np.hstack([n_pos @ u, n_neg])
    a = np.diag(a_diag).astype(np.complex128)
    return SusyCanonicalForm(y=freeze(y), a=freeze(a))


def restrict_to_generic(
    pair: OrthProjPair, dec: HalmosDecomposition, tol: Tolerance | None = None
) -> OrthProjPair:
    """Compress the pair to its generic part ``M (+) M'`` (paired coordinates).

    The result is a validated pair in generic position of dimension ``2 dm``.
    Raises :class:`NotGenericError` when the generic part is zero.
    """
    if dec.dims.dm == 0:
        raise NotGenericError("pair has no generic part")
    c = dec.generic_basis
    p_g = c.conj().T @ pair.p @ c
    q_g = c.conj().T @ pair.q @ c
    return make_orth_pair(p_g, q_g, tol)


def general_unitary_halmos(
    dec: HalmosDecomposition, params: IntertwinerParams, tol: Tolerance | None = None
) -> Array:
    """A member of the complete family in normal-form coordinates.

    ``U = U0 (+) [[0, U10], [U01, 0]] (+) U1 (+) diag(V, V) rotation`` with
    all blocks unitary and ``V`` commuting with ``h``.  Every symmetric
    intertwiner of the pair arises this way.
    """
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    if dims.d01 != dims.d10:
        raise DimMismatchError(
            f"dim M01 = {dims.d01} != dim M10 = {dims.d10}: no symmetric intertwiner exists"
        )
    u0 = _require_block(params.u0, (dims.d00, dims.d00), "u0")
    u1 = _require_block(params.u1, (dims.d11, dims.d11), "u1")
    u10 = _require_block(params.u10, (dims.d01, dims.d10), "u10")
    u01 = _require_block(params.u01, (dims.d10, dims.d01), "u01")
    v = _require_block(params.v, (dims.dm, dims.dm), "v")
    for name, block in (("u0", u0), ("u1", u1), ("u10", u10), ("u01", u01), ("v", v)):
        if block is not None:
            _ensure_unitary(block, tol.atol, name)
    if v is not None:
        defect = spectral_norm(v @ dec.h - dec.h @ v)
        if defect > tol.atol:
            raise NotCommutingError(f"v does not commute with h (residual {defect:.3e})")
    u = _corner_sum(dec, u0, u1, u10, u01)
    if dims.dm:
        vv = np.zeros((2 * dims.dm, 2 * dims.dm), dtype=np.complex128)
        vv[: dims.dm, : dims.dm] = v
        vv[dims.dm :, dims.dm :] = v
        u = u + assemble_generic_block(dec, vv @ rotation_block(dec.h, tol))
    return freeze(u)


def general_unitary_susy(
    dec: HalmosDecomposition,
    canon: SusyCanonicalForm | None,
    params: IntertwinerParams,
    tol: Tolerance | None = None,
) -> Array:
    """A member of the complete family in supersymmetric coordinates.

    The generic part is ``y [[0, v], [v, 0]] y*`` with ``v`` unitary and
    commuting with ``canon.a``; corners are handled as in
    :func:`general_unitary_halmos`.  ``canon`` comes from
    :func:`susy_canonical` applied to :func:`restrict_to_generic` and may be
    ``None`` only when the generic part is empty.  Members agree with the
    normal-form family as ambient operators, not block by block.
    """
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    if dims.d01 != dims.d10:
        raise DimMismatchError(
            f"dim M01 = {dims.d01} != dim M10 = {dims.d10}: no symmetric intertwiner exists"
        )
    u0 = _require_block(params.u0, (dims.d00, dims.d00), "u0")
    u1 = _require_block(params.u1, (dims.d11, dims.d11), "u1")
    u10 = _require_block(params.u10, (dims.d01, dims.d10), "u10")
    u01 = _require_block(params.u01, (dims.d10, dims.d01), "u01")
    for name, block in (("u0", u0), ("u1", u1), ("u10", u10), ("u01", u01)):
        if block is not None:
            _ensure_unitary(block, tol.atol, name)
    u = _corner_sum(dec, u0, u1, u10, u01)
    if dims.dm:
        if canon is None:
            raise DimMismatchError("canon is required when the generic part is nonzero")
        dm = dims.dm
        if canon.y.shape != (2 * dm, 2 * dm):
            raise DimMismatchError(
                f"canon.y has shape {canon.y.shape}, expected {(2 * dm, 2 * dm)}"
            )
        v = _require_block(params.v, (dm, dm), "v")
        _ensure_unitary(v, tol.atol, "v")
        _ensure_unitary(canon.y, tol.atol, "canon.y")
        defect = spectral_norm(v @ canon.a - canon.a @ v)
        if defect > tol.atol:
            raise NotCommutingError(f"v does not commute with a (residual {defect:.3e})")
        swap = np.zeros((2 * dm, 2 * dm), dtype=np.complex128)
        swap[:dm, dm:] = v
        swap[dm:, :dm] = v
        middle = canon.y @ swap @ canon.y.conj().T
        c = dec.generic_basis
        u = u + c @ middle @ c.conj().T
    return freeze(u)


def verify_symmetric_intertwiner(
    pair: OrthProjPair, u, tol: Tolerance | None = None
) -> VerificationReport:
    """Residuals of ``U* U = I``, ``U P = Q U`` and ``U Q = P U``."""
    u = as_matrix(u, square=True, name="u")
    if u.shape[0] != pair.dim:
        raise DimMismatchError(f"u has shape {u.shape}, pair has dimension {pair.dim}")
    tol = tol or Tolerance.for_scale()
    residuals = {
        "unitarity": spectral_norm(u.conj().T @ u - np.eye(pair.dim)),
        "swap_pq": spectral_norm(u @ pair.p - pair.q @ u),
        "swap_qp": spectral_norm(u @ pair.q - pair.p @ u),
    }
    bounds = {k: tol.atol for k in residuals}
    return build_report(residuals, bounds, tol)


def factor_through(
    v, v0, pair: OrthProjPair, tol: Tolerance | None = None
) -> tuple[Array, VerificationReport]:
    """Factor ``V = C V0`` and check whether ``C`` commutes with the pair.

    When both ``V`` and ``V0`` are invertible two-sided intertwiners the
    factor ``C = V V0^{-1}`` commutes with ``P`` and ``Q``; the report
    carries the two commutation residuals.  Raises :class:`SingularError`
    when ``V0`` is not safely invertible.
    """
    v = as_matrix(v, square=True, name="v")
    v0 = as_matrix(v0, square=True, name="v0")
    if v.shape != v0.shape or v.shape[0] != pair.dim:
        raise DimMismatchError(
            f"shapes {v.shape}, {v0.shape} must both match pair dimension {pair.dim}"
        )
    tol = tol or Tolerance.for_matrices(v, v0)
    smin = float(np.linalg.svd(v0, compute_uv=False)[-1])
    if smin <= tol.rank_tol:
        raise SingularError(f"v0 smallest singular value {smin:.3e} at or below rank_tol")
    c = v @ np.linalg.inv(v0)
    bound = tol.atol * max(1.0, spectral_norm(c))
    residuals = {
        "commute_p": spectral_norm(c @ pair.p - pair.p @ c),
        "commute_q": spectral_norm(c @ pair.q - pair.q @ c),
    }
    bounds = {k: bound for k in residuals}
    return c, build_report(residuals, bounds, tol)


def _stacked_nullspace(relations, n: int, rank_tol: float) -> list[Array]:
    eye = np.eye(n)
    rows = [np.kron(left.T, eye) - np.kron(eye, right) for left, right in relations]
    stack = np.vstack(rows)
    _, s, vh = np.linalg.svd(stack)
    thresh = rank_tol * (s[0] if s.size else 1.0)
    rank = int(np.count_nonzero(s > thresh))
    basis = []
    for k in range(rank, vh.shape[0]):
        z = vh[k].conj().reshape((n, n), order="F")
        basis.append(freeze(z))
    return basis


def oracle_intertwiner_space(
    p, q, tol: Tolerance | None = None, one_sided: bool = False
) -> list[Array]:
    """Orthonormal basis of the space of two-sided intertwiners.

    Solves ``ZP = QZ`` together with ``ZQ = PZ`` (only the first relation if
    ``one_sided``) as the SVD nullspace of the stacked Sylvester-type map;
    singular values at or below ``rank_tol`` times the largest count as
    zero.  Works for arbitrary square inputs, hermitian or not.  The basis
    matrices are orthonormal in the Frobenius inner product.
    """
    p = as_matrix(p, square=True, name="p")
    q = as_matrix(q, square=True, name="q")
    if p.shape != q.shape:
        raise DimMismatchError(f"p has shape {p.shape} but q has shape {q.shape}")
    tol = tol or Tolerance.for_matrices(p, q)
    relations = [(p, q)]
    if not one_sided:
        relations.append((q, p))
    return _stacked_nullspace(relations, p.shape[0], tol.rank_tol)


def oracle_commutant_space(p, q, tol: Tolerance | None = None) -> list[Array]:
    """Orthonormal basis of ``{Z : ZP = PZ, ZQ = QZ}`` via the same nullspace oracle."""
    p = as_matrix(p, square=True, name="p")
    q = as_matrix(q, square=True, name="q")
    if p.shape != q.shape:
        raise DimMismatchError(f"p has shape {p.shape} but q has shape {q.shape}")
    tol = tol or Tolerance.for_matrices(p, q)
    return _stacked_nullspace([(p, p), (q, q)], p.shape[0], tol.rank_tol)


# ---------------------------------------------------------------------------
# Parameter helpers
# ---------------------------------------------------------------------------


def identity_params(dec: HalmosDecomposition) -> IntertwinerParams:
    """Identity blocks on every nonzero subspace."""
    dims = dec.dims
    eye = lambda d: np.eye(d, dtype=np.complex128) if d else None
    return IntertwinerParams(
        u0=eye(dims.d00), u1=eye(dims.d11), u01=eye(dims.d01), u10=eye(dims.d01), v=eye(dims.dm)
    )


def random_commuting_unitary(h, seed, tol: Tolerance | None = None) -> Array:
    """Haar unitary on each eigenvalue cluster of the hermitian matrix ``h``."""
    h = as_matrix(h, square=True, name="h")
    tol = tol or Tolerance.for_matrices(h)
    es = herm_eig(h, tol)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = np.zeros_like(h)
    for idx in cluster_indices(es.eigenvalues, tol.rank_tol):
        m[np.ix_(idx, idx)] = random_unitary(len(idx), rng)
    v = es.eigenvectors
    return v @ m @ v.conj().T


def random_params(dec: HalmosDecomposition, seed, tol: Tolerance | None = None) -> IntertwinerParams:
    """Haar-random blocks for the normal-form family."""
    dims = dec.dims
    if dims.d01 != dims.d10:
        raise DimMismatchError(f"dim M01 = {dims.d01} != dim M10 = {dims.d10}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draw = lambda d: random_unitary(d, rng) if d else None
    return IntertwinerParams(
        u0=draw(dims.d00),
        u1=draw(dims.d11),
        u10=draw(dims.d01),
        u01=draw(dims.d01),
        v=random_commuting_unitary(dec.h, rng, tol) if dims.dm else None,
    )


def random_susy_params(
    dec: HalmosDecomposition,
    canon: SusyCanonicalForm | None,
    seed,
    tol: Tolerance | None = None,
) -> IntertwinerParams:
    """Haar-random blocks for the supersymmetric family."""
    dims = dec.dims
    if dims.d01 != dims.d10:
        raise DimMismatchError(f"dim M01 = {dims.d01} != dim M10 = {dims.d10}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draw = lambda d: random_unitary(d, rng) if d else None
    v = None
    if dims.dm:
        if canon is None:
            raise DimMismatchError("canon is required when the generic part is nonzero")
        v = random_commuting_unitary(canon.a, rng, tol)
    return IntertwinerParams(
        u0=draw(dims.d00), u1=draw(dims.d11), u10=draw(dims.d01), u01=draw(dims.d01), v=v
    )
