"""The von Neumann algebra generated by two projections, and who lives in it.

In canonical coordinates the algebra consists of the operators

    a00 I (+) a01 I (+) a10 I (+) a11 I (+) [[f00(H), f01(H)], [f10(H), f11(H)]]

with complex scalars on the corners and four spectral functions of ``H`` in
the generic quadrants ("function of H" meaning: constant on each eigenvalue
cluster of ``H``, clusters grouped within ``rank_tol``).  Membership of a
concrete operator is decided block by block; a symmetric intertwiner inside
the algebra exists iff both mixed corners vanish, in which case the family

    a0 I (+) a1 I (+) diag(phi(H), phi(H)) rotation

with unimodular ``a0``, ``a1`` and cluster phases ``phi`` exhausts it.  The
invertibility of ``P + Q - I`` decides the same question (the spectra in
finite dimension keep ``H`` away from 0, so the two criteria coincide), and
when the pair is in generic position with simple ``H`` spectrum, every
symmetric intertwiner whatsoever already lies in the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatchError,
    InternalError,
    NotApplicableError,
    NotUnimodularError,
)
from .halmos import HalmosDecomposition, assemble_generic_block
from .intertwine import rotation_block
from .matcore import (
    Array,
    Tolerance,
    as_matrix,
    cluster_indices,
    freeze,
    function_from_cluster_values,
    herm_eig,
    spectral_norm,
)
from .projpair import OrthProjPair

__all__ = [
    "WstarForm",
    "UnimodularParams",
    "membership_in_wstar",
    "assemble_wstar",
    "exists_unitary_in_wstar",
    "wstar_unitary",
    "exists_unitary_in_cstar",
    "simple_spectrum_all_in",
    "default_unimodular_params",
    "random_unimodular_params",
]


@dataclass(frozen=True, eq=False)
class WstarForm:
    """Coordinates of an algebra member: corner scalars and quadrant cluster values.

    Corner scalars are ``None`` exactly when the corresponding subspace is
    zero.  ``phi`` has shape (2, 2, k) holding the value of each quadrant
    function on each of the k eigenvalue clusters of ``H``;
    ``cluster_values`` holds one representative eigenvalue per cluster and
    ``cluster_sizes`` the multiplicities.
    """

    a00: complex | None
    a01: complex | None
    a10: complex | None
    a11: complex | None
    phi: Array
    cluster_values: Array
    cluster_sizes: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class UnimodularParams:
    """Phases for the in-algebra intertwiner family: scalars ``a0``, ``a1``
    (present iff the corresponding corner is nonzero) and one phase per
    eigenvalue cluster of ``H``."""

    a0: complex | None = None
    a1: complex | None = None
    phi: Array | None = None


def _h_clusters(dec: HalmosDecomposition, tol: Tolerance) -> tuple[Array, Array, list[Array]]:
    es = herm_eig(dec.h, tol)
    clusters = cluster_indices(es.eigenvalues, tol.rank_tol)
    return es.eigenvalues, es.eigenvectors, clusters


def membership_in_wstar(
    t, dec: HalmosDecomposition, tol: Tolerance | None = None
) -> WstarForm | None:
    """Decide membership of ``t`` in the algebra generated by the pair.

    Returns the extracted :class:`WstarForm` when every block residual stays
    within ``atol``, and ``None`` otherwise.  The checks are: each corner
    block a scalar multiple of the identity, no coupling between different
    corner subspaces or between corners and the generic part, and each
    generic quadrant constant on every eigenvalue cluster of ``H``.
    """
    t = as_matrix(t, square=True, name="t")
    n = dec.ambient_dim
    if t.shape[0] != n:
        raise DimMismatchError(f"t has shape {t.shape}, ambient dimension is {n}")
    tol = tol or Tolerance.for_matrices(t)
    dims = dec.dims
    full = np.hstack(
        [dec.basis00, dec.basis01, dec.basis10, dec.basis11, dec.basis_m, dec.basis_mprime]
    )
    coords = full.conj().T @ t @ full

    labels = ("a00", "a01", "a10", "a11")
    widths = (dims.d00, dims.d01, dims.d10, dims.d11)
    offsets = np.concatenate([[0], np.cumsum(widths)])
    gstart = int(offsets[-1])
    gwidth = 2 * dims.dm
    scalars: dict[str, complex | None] = {}

    for i, (lab_i, w_i) in enumerate(zip(labels, widths)):
        sl_i = slice(int(offsets[i]), int(offsets[i]) + w_i)
        if w_i == 0:
            scalars[lab_i] = None
            continue
        diag = coords[sl_i, sl_i]
        a = complex(np.trace(diag) / w_i)
        if spectral_norm(diag - a * np.eye(w_i)) > tol.atol:
            return None
        scalars[lab_i] = a
        for j, w_j in enumerate(widths):
            if j == i or w_j == 0:
                continue
            sl_j = slice(int(offsets[j]), int(offsets[j]) + w_j)
            if spectral_norm(coords[sl_i, sl_j]) > tol.atol:
                return None
        if gwidth:
            gsl = slice(gstart, gstart + gwidth)
            if spectral_norm(coords[sl_i, gsl]) > tol.atol:
                return None
            if spectral_norm(coords[gsl, sl_i]) > tol.atol:
                return None

    if gwidth:
        dm = dims.dm
        gsl = slice(gstart, gstart + gwidth)
        g = coords[gsl, gsl]
        wb = np.zeros((gwidth, gwidth), dtype=np.complex128)
        wb[:dm, :dm] = np.eye(dm)
        wb[dm:, dm:] = dec.w
        phi_mat = wb @ g @ wb.conj().T
        h_eigs, h_vecs, clusters = _h_clusters(dec, tol)
        k = len(clusters)
        phi = np.zeros((2, 2, k), dtype=np.complex128)
        for qi in (0, 1):
            for qj in (0, 1):
                quad = phi_mat[qi * dm : (qi + 1) * dm, qj * dm : (qj + 1) * dm]
                quad_e = h_vecs.conj().T @ quad @ h_vecs
                model = np.zeros_like(quad_e)
                for ck, idx in enumerate(clusters):
                    val = complex(np.trace(quad_e[np.ix_(idx, idx)]) / len(idx))
                    phi[qi, qj, ck] = val
                    model[np.ix_(idx, idx)] = val * np.eye(len(idx))
                if spectral_norm(quad_e - model) > tol.atol:
                    return None
        cluster_values = np.array([float(np.mean(h_eigs[idx])) for idx in clusters])
        cluster_sizes = tuple(len(idx) for idx in clusters)
    else:
        phi = np.zeros((2, 2, 0), dtype=np.complex128)
        cluster_values = np.zeros(0)
        cluster_sizes = ()

    return WstarForm(
        a00=scalars["a00"],
        a01=scalars["a01"],
        a10=scalars["a10"],
        a11=scalars["a11"],
        phi=freeze(phi),
        cluster_values=freeze(cluster_values),
        cluster_sizes=cluster_sizes,
    )


def assemble_wstar(
    form: WstarForm, dec: HalmosDecomposition, tol: Tolerance | None = None
) -> Array:
    """Rebuild the ambient operator described by a :class:`WstarForm`."""
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    n = dec.ambient_dim
    t = np.zeros((n, n), dtype=np.complex128)
    for scalar, basis in (
        (form.a00, dec.basis00),
        (form.a01, dec.basis01),
        (form.a10, dec.basis10),
        (form.a11, dec.basis11),
    ):
        if basis.shape[1]:
            if scalar is None:
                raise DimMismatchError("scalar missing for a nonzero corner subspace")
            t += scalar * (basis @ basis.conj().T)
    if dims.dm:
        quads = [
            [function_from_cluster_values(dec.h, form.phi[qi, qj], tol) for qj in (0, 1)]
            for qi in (0, 1)
        ]
        middle = np.block(quads)
        t += assemble_generic_block(dec, middle)
    return t


def exists_unitary_in_wstar(dec: HalmosDecomposition) -> bool:
    """Whether a symmetric intertwiner exists inside the algebra: both mixed
    corners must vanish."""
    return dec.dims.d01 == 0 and dec.dims.d10 == 0


def wstar_unitary(
    dec: HalmosDecomposition, params: UnimodularParams, tol: Tolerance | None = None
) -> Array:
    """In-algebra symmetric intertwiner from unimodular parameters.

    ``a0`` scales the both-range corner, ``a1`` the both-kernel corner, and
    ``phi`` gives one phase per eigenvalue cluster of ``H`` for the generic
    part ``diag(phi(H), phi(H)) rotation``.  Each phase is accepted exactly
    when its subspace is nonzero (:class:`NotApplicableError` otherwise) and
    must be unimodular within ``atol`` (:class:`NotUnimodularError`).
    """
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    if dims.d01 or dims.d10:
        raise NotApplicableError(
            f"mixed corners are nonzero (d01={dims.d01}, d10={dims.d10}): "
            "no symmetric intertwiner exists inside the algebra"
        )

    def _scalar(value, d: int, name: str) -> complex | None:
        if d == 0:
            if value is not None:
                raise NotApplicableError(f"{name} given but its subspace is zero")
            return None
        if value is None:
            raise NotApplicableError(f"{name} required: its subspace is nonzero")
        value = complex(value)
        if abs(abs(value) - 1.0) > tol.atol:
            raise NotUnimodularError(f"{name} has modulus {abs(value):.12f}")
        return value

    a0 = _scalar(params.a0, dims.d00, "a0")
    a1 = _scalar(params.a1, dims.d11, "a1")

    n = dec.ambient_dim
    u = np.zeros((n, n), dtype=np.complex128)
    if dims.d00:
        u += a0 * (dec.basis00 @ dec.basis00.conj().T)
    if dims.d11:
        u += a1 * (dec.basis11 @ dec.basis11.conj().T)
    if dims.dm:
        _, _, clusters = _h_clusters(dec, tol)
        if params.phi is None:
            raise NotApplicableError("phi required: the generic part is nonzero")
        phi = np.asarray(params.phi, dtype=np.complex128).ravel()
        if phi.size != len(clusters):
            raise DimMismatchError(f"expected {len(clusters)} phases, got {phi.size}")
        if np.any(np.abs(np.abs(phi) - 1.0) > tol.atol):
            raise NotUnimodularError("phi entries must be unimodular")
        v = function_from_cluster_values(dec.h, phi, tol)
        dm = dims.dm
        vv = np.zeros((2 * dm, 2 * dm), dtype=np.complex128)
        vv[:dm, :dm] = v
        vv[dm:, dm:] = v
        u += assemble_generic_block(dec, vv @ rotation_block(dec.h, tol))
    elif params.phi is not None and np.asarray(params.phi).size:
        raise NotApplicableError("phi given but the generic part is zero")
    return freeze(u)


def default_unimodular_params(
    dec: HalmosDecomposition, tol: Tolerance | None = None
) -> UnimodularParams:
    """The identity choice: every accepted phase equal to 1."""
    tol = tol or Tolerance.for_scale()
    phi = None
    if dec.dims.dm:
        _, _, clusters = _h_clusters(dec, tol)
        phi = np.ones(len(clusters), dtype=np.complex128)
    return UnimodularParams(
        a0=1.0 + 0.0j if dec.dims.d00 else None,
        a1=1.0 + 0.0j if dec.dims.d11 else None,
        phi=phi,
    )


def random_unimodular_params(
    dec: HalmosDecomposition, seed, tol: Tolerance | None = None
) -> UnimodularParams:
    """Uniform phases for every accepted parameter slot."""
    tol = tol or Tolerance.for_scale()
    rng = np.random.default_rng(seed)

    def phase() -> complex:
        return complex(np.exp(2j * np.pi * rng.uniform()))

    a0 = phase() if dec.dims.d00 else None
    a1 = phase() if dec.dims.d11 else None
    phi = None
    if dec.dims.dm:
        _, _, clusters = _h_clusters(dec, tol)
        phi = np.exp(2j * np.pi * rng.uniform(size=len(clusters)))
    return UnimodularParams(a0=a0, a1=a1, phi=phi)


def exists_unitary_in_cstar(
    pair: OrthProjPair, dec: HalmosDecomposition, tol: Tolerance | None = None
) -> bool:
    """Whether ``P + Q - I`` is invertible, the C*-algebra existence criterion.

    In finite dimension this coincides with :func:`exists_unitary_in_wstar`,
    since the generic spectrum stays away from 0 by construction; any
    disagreement is a bug and raises :class:`InternalError`.
    """
    tol = tol or Tolerance.for_scale()
    s = np.linalg.svd(pair.p + pair.q - np.eye(pair.dim), compute_uv=False)
    result = bool(s[-1] > tol.rank_tol)
    other = exists_unitary_in_wstar(dec)
    if result != other:
        raise InternalError(
            f"invertibility of P + Q - I ({result}) disagrees with the corner criterion ({other})"
        )
    return result


def simple_spectrum_all_in(dec: HalmosDecomposition, tol: Tolerance | None = None) -> bool:
    """Whether the pair is generic with simple ``H`` spectrum.

    In that case the commutant is spanned by functions of ``H`` and every
    symmetric intertwiner already lies in the algebra.
    """
    tol = tol or Tolerance.for_scale()
    dims = dec.dims
    if dims.d00 or dims.d01 or dims.d10 or dims.d11:
        return False
    if dims.dm == 0:
        return False
    _, _, clusters = _h_clusters(dec, tol)
    return all(len(idx) == 1 for idx in clusters)
