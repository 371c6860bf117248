"""Tests for membership in the generated von Neumann algebra and the
in-algebra unitary family."""

from __future__ import annotations

import numpy as np
import pytest

from twoproj import (
    DimMismatchError,
    NotApplicableError,
    NotUnimodularError,
    UnimodularParams,
    assemble_wstar,
    default_unimodular_params,
    exists_unitary_in_cstar,
    exists_unitary_in_wstar,
    general_unitary_halmos,
    halmos_decompose,
    make_orth_pair,
    membership_in_wstar,
    random_generic_orth_pair,
    random_pair_with_dims,
    random_params,
    random_unimodular_params,
    sgn_b,
    simple_spectrum_all_in,
    verify_symmetric_intertwiner,
    wstar_unitary,
)


def test_membership_extracts_corner_scalars(equal_pair):
    dec = halmos_decompose(equal_pair)
    t = 3.0 * equal_pair.p + 5.0j * (np.eye(2) - equal_pair.p)
    form = membership_in_wstar(t, dec)
    assert form is not None
    assert form.a00 == pytest.approx(3.0)
    assert form.a11 == pytest.approx(5.0j)
    assert form.a01 is None and form.a10 is None
    assert form.phi.shape == (2, 2, 0)


def test_membership_accepts_polynomials_in_the_pair():
    p, q = random_pair_with_dims((1, 1, 1, 1, 2), seed=9)
    pair = make_orth_pair(p, q)
    dec = halmos_decompose(pair)
    eye = np.eye(pair.dim)
    t = pair.p + 2.0 * pair.q - 0.5j * (pair.p @ pair.q @ pair.p) + 0.25 * eye
    form = membership_in_wstar(t, dec)
    assert form is not None
    back = assemble_wstar(form, dec)
    np.testing.assert_allclose(back, t, atol=1e-11)


def test_membership_rejects_corner_coupling(complementary_pair):
    dec = halmos_decompose(complementary_pair)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    # The swap is a perfectly good symmetric intertwiner here, but it
    # couples the two mixed corners, so it lies outside the algebra.
    assert verify_symmetric_intertwiner(complementary_pair, swap).verdict
    assert membership_in_wstar(swap, dec) is None


def _repeated_eigenvalue_pair():
    # Two generic planes sharing the H eigenvalue 0.3 plus one at 0.7.
    h_vals = [0.3, 0.3, 0.7]
    n = 6
    p = np.zeros((n, n), dtype=np.complex128)
    q = np.zeros((n, n), dtype=np.complex128)
    for k, h in enumerate(h_vals):
        i, j = k, k + 3
        p[i, i] = 1.0
        r = np.sqrt(h * (1 - h))
        q[i, i] = h
        q[i, j] = r
        q[j, i] = r
        q[j, j] = 1 - h
    return make_orth_pair(p, q)


def test_membership_rejects_cluster_mixing():
    # Repeated H eigenvalue: a unitary swapping the two copies commutes
    # with H, so it intertwines the pair, but it is not a function of H
    # and therefore falls outside the algebra.
    from twoproj import IntertwinerParams

    pair = _repeated_eigenvalue_pair()
    dec = halmos_decompose(pair)
    v = np.array(
        [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], dtype=np.complex128
    )
    u = general_unitary_halmos(dec, IntertwinerParams(v=v))
    assert verify_symmetric_intertwiner(pair, u).verdict
    assert membership_in_wstar(u, dec) is None


def test_membership_of_sgn_b():
    for seed in range(3):
        p, q = random_generic_orth_pair(6, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        s = sgn_b(pair, dec)
        form = membership_in_wstar(s, dec)
        assert form is not None
        np.testing.assert_allclose(assemble_wstar(form, dec), s, atol=1e-10)


def test_exists_unitary_in_wstar_iff_mixed_corners_vanish(
    generic_quarter_pair, equal_pair, complementary_pair
):
    assert exists_unitary_in_wstar(halmos_decompose(generic_quarter_pair))
    assert exists_unitary_in_wstar(halmos_decompose(equal_pair))
    assert not exists_unitary_in_wstar(halmos_decompose(complementary_pair))


def test_cstar_criterion_matches_wstar_criterion():
    cases = [
        ((1, 0, 0, 1, 2), True),
        ((0, 1, 1, 0, 1), False),
        ((2, 0, 0, 0, 2), True),
        ((0, 2, 1, 0, 1), False),
    ]
    for seed, (dims, expected) in enumerate(cases):
        p, q = random_pair_with_dims(dims, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        assert exists_unitary_in_cstar(pair, dec) is expected
        assert exists_unitary_in_wstar(dec) is expected


def test_wstar_unitary_intertwines_and_is_member():
    for seed, dims in ((0, (1, 0, 0, 1, 2)), (1, (0, 0, 0, 0, 3)), (2, (2, 0, 0, 0, 1))):
        p, q = random_pair_with_dims(dims, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        u = wstar_unitary(dec, random_unimodular_params(dec, seed=7 * seed))
        report = verify_symmetric_intertwiner(pair, u)
        assert report.verdict, report.residuals
        assert membership_in_wstar(u, dec) is not None


def test_wstar_unitary_default_params(generic_quarter_pair):
    dec = halmos_decompose(generic_quarter_pair)
    params = default_unimodular_params(dec)
    assert params.a0 is None and params.a1 is None
    np.testing.assert_allclose(params.phi, [1.0])
    u = wstar_unitary(dec, params)
    assert verify_symmetric_intertwiner(generic_quarter_pair, u).verdict


def test_wstar_unitary_rejects_mixed_corners(complementary_pair):
    dec = halmos_decompose(complementary_pair)
    with pytest.raises(NotApplicableError):
        wstar_unitary(dec, UnimodularParams())


def test_wstar_unitary_phase_bookkeeping(equal_pair, generic_quarter_pair):
    dec_eq = halmos_decompose(equal_pair)
    with pytest.raises(NotApplicableError):
        wstar_unitary(dec_eq, UnimodularParams(a0=1.0))  # a1 missing
    with pytest.raises(NotUnimodularError):
        wstar_unitary(dec_eq, UnimodularParams(a0=2.0, a1=1.0))
    dec_gen = halmos_decompose(generic_quarter_pair)
    with pytest.raises(NotApplicableError):
        wstar_unitary(dec_gen, UnimodularParams(a0=1.0, phi=np.ones(1)))
    with pytest.raises(DimMismatchError):
        wstar_unitary(dec_gen, UnimodularParams(phi=np.ones(2)))


def test_random_unimodular_params_deterministic():
    p, q = random_pair_with_dims((1, 0, 0, 1, 2), seed=4)
    dec = halmos_decompose(make_orth_pair(p, q))
    first = random_unimodular_params(dec, seed=3)
    second = random_unimodular_params(dec, seed=3)
    assert first.a0 == second.a0
    assert abs(abs(first.a0) - 1.0) <= 1e-12
    np.testing.assert_array_equal(first.phi, second.phi)


def test_simple_spectrum_forces_membership():
    # Distinct H eigenvalues and no corners: every member of the general
    # family must land inside the algebra.
    for seed in range(4):
        p, q = random_generic_orth_pair(6, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        assert simple_spectrum_all_in(dec)
        for draw in range(3):
            u = general_unitary_halmos(dec, random_params(dec, seed=50 * seed + draw))
            assert membership_in_wstar(u, dec) is not None


def test_simple_spectrum_false_cases(equal_pair):
    assert not simple_spectrum_all_in(halmos_decompose(equal_pair))
    assert not simple_spectrum_all_in(halmos_decompose(_repeated_eigenvalue_pair()))
