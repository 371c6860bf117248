"""Tests for intertwiner constructions, families, verification, and oracles."""

from __future__ import annotations

import numpy as np
import pytest

from twoproj import (
    DimMismatchError,
    IntertwinerParams,
    NotCommutingError,
    NotGenericError,
    NotInjectiveError,
    NotUnitaryError,
    factor_through,
    general_unitary_halmos,
    general_unitary_susy,
    halmos_decompose,
    identity_params,
    kato_unitary,
    make_orth_pair,
    oracle_intertwiner_space,
    random_commuting_unitary,
    random_generic_orth_pair,
    random_pair_with_dims,
    random_params,
    random_susy_params,
    restrict_to_generic,
    rotation_block,
    sgn_b,
    spectral_norm,
    susy_canonical,
    two_by_two_family,
    verify_symmetric_intertwiner,
    wdd_unitary,
)

SQ3_2 = np.sqrt(3.0) / 2.0

ROTATION_QUARTER = np.array([[0.5, SQ3_2], [SQ3_2, -0.5]])


def test_rotation_block_quarter_value():
    rot = rotation_block(np.array([[0.25]], dtype=np.complex128))
    np.testing.assert_allclose(rot, ROTATION_QUARTER, atol=1e-14)
    np.testing.assert_allclose(rot @ rot, np.eye(2), atol=1e-14)


def test_wdd_unitary_quarter_pair(generic_quarter_pair):
    dec = halmos_decompose(generic_quarter_pair)
    u = wdd_unitary(dec)
    np.testing.assert_allclose(u, ROTATION_QUARTER, atol=1e-14)
    assert verify_symmetric_intertwiner(generic_quarter_pair, u).verdict


def test_wdd_unitary_complementary_with_phase(complementary_pair):
    dec = halmos_decompose(complementary_pair)
    s = np.exp(0.7j) * np.eye(1)
    u = wdd_unitary(dec, s)
    expected = np.array([[0.0, np.exp(0.7j)], [np.exp(-0.7j), 0.0]])
    np.testing.assert_allclose(u, expected, atol=1e-14)
    assert verify_symmetric_intertwiner(complementary_pair, u).verdict


def test_wdd_unitary_rejects_unbalanced_corners():
    p, q = random_pair_with_dims((0, 1, 0, 0, 1), seed=5)
    dec = halmos_decompose(make_orth_pair(p, q))
    with pytest.raises(DimMismatchError):
        wdd_unitary(dec)


def test_wdd_unitary_rejects_non_unitary_s(complementary_pair):
    dec = halmos_decompose(complementary_pair)
    with pytest.raises(NotUnitaryError):
        wdd_unitary(dec, 0.5 * np.eye(1))


def test_sgn_b_quarter_pair(generic_quarter_pair):
    pair = generic_quarter_pair
    dec = halmos_decompose(pair)
    s = sgn_b(pair, dec)
    np.testing.assert_allclose(s, -ROTATION_QUARTER, atol=1e-14)
    np.testing.assert_allclose(s, 2.0 * pair.b, atol=1e-14)
    np.testing.assert_allclose(s @ s, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(s, s.conj().T, atol=1e-14)
    assert verify_symmetric_intertwiner(pair, s).verdict


def test_sgn_b_equal_pair(equal_pair):
    dec = halmos_decompose(equal_pair)
    s = sgn_b(equal_pair, dec)
    np.testing.assert_allclose(s, np.diag([-1.0, 1.0]), atol=1e-14)


def test_sgn_b_matches_kato_when_defined():
    for seed in range(5):
        p, q = random_generic_orth_pair(8, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        np.testing.assert_allclose(
            sgn_b(pair, dec), kato_unitary(pair), atol=1e-9
        )


def test_sgn_b_rejects_mixed_corners(complementary_pair):
    dec = halmos_decompose(complementary_pair)
    with pytest.raises(NotInjectiveError):
        sgn_b(complementary_pair, dec)


def test_susy_canonical_known_form():
    # A = diag(0.6, -0.6) and B = [[0, 0.8], [0.8, 0]] come from this pair.
    p = np.array([[0.8, -0.4], [-0.4, 0.2]])
    q = np.array([[0.2, -0.4], [-0.4, 0.8]])
    pair = make_orth_pair(p, q)
    np.testing.assert_allclose(pair.a, np.diag([0.6, -0.6]), atol=1e-14)
    np.testing.assert_allclose(pair.b, [[0.0, 0.8], [0.8, 0.0]], atol=1e-14)
    canon = susy_canonical(pair)
    np.testing.assert_allclose(canon.y, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(canon.a, [[0.6]], atol=1e-14)


def test_susy_canonical_reproduces_a_and_b():
    for seed in range(4):
        p, q = random_generic_orth_pair(6, seed=seed)
        pair = make_orth_pair(p, q)
        canon = susy_canonical(pair)
        k = canon.a.shape[0]
        z = np.zeros((k, k))
        a_model = np.block([[canon.a, z], [z, -canon.a]])
        s = np.diag(np.sqrt(1.0 - np.diag(canon.a).real ** 2))
        b_model = np.block([[z, s], [s, z]])
        np.testing.assert_allclose(
            canon.y @ a_model @ canon.y.conj().T, pair.a, atol=1e-12
        )
        np.testing.assert_allclose(
            canon.y @ b_model @ canon.y.conj().T, pair.b, atol=1e-12
        )
        np.testing.assert_allclose(
            canon.y.conj().T @ canon.y, np.eye(2 * k), atol=1e-12
        )


def test_susy_canonical_rejects_corner_pairs(equal_pair, complementary_pair):
    with pytest.raises(NotGenericError):
        susy_canonical(equal_pair)
    with pytest.raises(NotGenericError):
        susy_canonical(complementary_pair)


def test_restrict_to_generic_gives_generic_pair():
    p, q = random_pair_with_dims((1, 1, 1, 1, 2), seed=7)
    pair = make_orth_pair(p, q)
    dec = halmos_decompose(pair)
    gen = restrict_to_generic(pair, dec)
    assert gen.dim == 4
    canon = susy_canonical(gen)
    assert canon.a.shape == (2, 2)


def test_restrict_to_generic_rejects_empty_generic_part(equal_pair):
    dec = halmos_decompose(equal_pair)
    with pytest.raises(NotGenericError):
        restrict_to_generic(equal_pair, dec)


def test_general_unitary_halmos_identity_params_is_wdd(generic_quarter_pair):
    dec = halmos_decompose(generic_quarter_pair)
    u = general_unitary_halmos(dec, identity_params(dec))
    np.testing.assert_allclose(u, wdd_unitary(dec), atol=1e-14)


def test_general_unitary_halmos_family_members_verify():
    for seed, dims in ((0, (1, 1, 1, 1, 2)), (1, (0, 0, 0, 0, 3)), (2, (2, 2, 2, 0, 1))):
        p, q = random_pair_with_dims(dims, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        for draw in range(3):
            u = general_unitary_halmos(dec, random_params(dec, seed=100 * seed + draw))
            report = verify_symmetric_intertwiner(pair, u)
            assert report.verdict, report.residuals


def test_general_unitary_halmos_rejects_noncommuting_v():
    # Two distinct H eigenvalues, so a swap cannot commute with h.
    p, q = random_pair_with_dims((0, 0, 0, 0, 2), seed=3)
    pair = make_orth_pair(p, q)
    dec = halmos_decompose(pair)
    assert abs(dec.h[0, 0] - dec.h[1, 1]) > 1e-3
    params = IntertwinerParams(v=np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(NotCommutingError):
        general_unitary_halmos(dec, params)


def test_general_unitary_halmos_rejects_bad_blocks(generic_quarter_pair):
    dec = halmos_decompose(generic_quarter_pair)
    with pytest.raises(DimMismatchError):
        general_unitary_halmos(dec, IntertwinerParams(v=None))
    with pytest.raises(DimMismatchError):
        general_unitary_halmos(dec, IntertwinerParams(v=np.eye(2)))
    with pytest.raises(NotUnitaryError):
        general_unitary_halmos(dec, IntertwinerParams(v=np.array([[0.5]])))


def test_general_unitary_susy_members_verify():
    for seed, dims in ((0, (1, 1, 1, 1, 2)), (1, (0, 0, 0, 0, 4))):
        p, q = random_pair_with_dims(dims, seed=seed)
        pair = make_orth_pair(p, q)
        dec = halmos_decompose(pair)
        canon = susy_canonical(restrict_to_generic(pair, dec))
        for draw in range(3):
            params = random_susy_params(dec, canon, seed=31 * seed + draw)
            u = general_unitary_susy(dec, canon, params)
            report = verify_symmetric_intertwiner(pair, u)
            assert report.verdict, report.residuals


def test_general_unitary_susy_requires_canon_when_generic(generic_quarter_pair):
    dec = halmos_decompose(generic_quarter_pair)
    with pytest.raises(DimMismatchError):
        general_unitary_susy(dec, None, IntertwinerParams(v=np.eye(1)))


def test_two_families_span_the_same_set():
    # A susy-family member must factor through the wdd representative by a
    # unitary commuting with both projections, and vice versa.
    p, q = random_generic_orth_pair(6, seed=17)
    pair = make_orth_pair(p, q)
    dec = halmos_decompose(pair)
    canon = susy_canonical(restrict_to_generic(pair, dec))
    u0 = wdd_unitary(dec)
    u_halmos = general_unitary_halmos(dec, random_params(dec, seed=1))
    u_susy = general_unitary_susy(dec, canon, random_susy_params(dec, canon, seed=2))
    for u in (u_halmos, u_susy):
        _, report = factor_through(u, u0, pair)
        assert report.verdict, report.residuals


def test_verify_symmetric_intertwiner_flags_failures(generic_quarter_pair):
    report = verify_symmetric_intertwiner(generic_quarter_pair, np.eye(2))
    assert not report.verdict
    assert report.residuals["unitarity"] <= 1e-14
    assert report.residuals["swap_pq"] > 0.5


def test_factor_through_commuting_case(generic_quarter_pair):
    pair = generic_quarter_pair
    dec = halmos_decompose(pair)
    u0 = wdd_unitary(dec)
    u1 = general_unitary_halmos(
        dec, IntertwinerParams(v=np.exp(0.3j) * np.eye(1))
    )
    c, report = factor_through(u1, u0, pair)
    assert report.verdict
    np.testing.assert_allclose(c, np.exp(0.3j) * np.eye(2), atol=1e-12)


def test_factor_through_skew_example_detects_noncommuting():
    from twoproj import SKEW_RANK_ONE_P, SKEW_RANK_ONE_Q, make_idempotent_pair

    pair = make_idempotent_pair(SKEW_RANK_ONE_P, SKEW_RANK_ONE_Q)
    v, _ = two_by_two_family(2.0, 1.0)
    v0, _ = two_by_two_family(1.0, 0.0)
    c, report = factor_through(v, v0, pair)
    np.testing.assert_allclose(c, [[2.5, 1.0], [0.0, 2.0]], atol=1e-14)
    assert report.residuals["commute_q"] <= 1e-14
    assert report.residuals["commute_p"] == pytest.approx(0.5, abs=1e-12)
    assert not report.verdict


def test_oracle_dimensions_on_fixtures(
    generic_quarter_pair, equal_pair, complementary_pair
):
    assert len(oracle_intertwiner_space(generic_quarter_pair.p, generic_quarter_pair.q)) == 1
    assert len(oracle_intertwiner_space(equal_pair.p, equal_pair.q)) == 2
    assert len(oracle_intertwiner_space(complementary_pair.p, complementary_pair.q)) == 2


def test_oracle_solutions_satisfy_the_relations(generic_quarter_pair):
    p, q = generic_quarter_pair.p, generic_quarter_pair.q
    basis = oracle_intertwiner_space(p, q)
    for z in basis:
        assert spectral_norm(z @ p - q @ z) <= 1e-10
        assert spectral_norm(z @ q - p @ z) <= 1e-10
    gram = np.array(
        [[np.vdot(zi, zj) for zj in basis] for zi in basis]
    )
    np.testing.assert_allclose(gram, np.eye(len(basis)), atol=1e-12)


def test_oracle_rank_one_degenerate_case():
    # P = diag(1, 0), Q = 0: solutions have first row and column zero,
    # leaving only the bottom-right entry free; none of them is unitary.
    p = np.diag([1.0, 0.0])
    q = np.zeros((2, 2))
    basis = oracle_intertwiner_space(p, q)
    assert len(basis) == 1
    z = basis[0]
    np.testing.assert_allclose(np.abs(z), [[0.0, 0.0], [0.0, 1.0]], atol=1e-12)
    assert spectral_norm(z.conj().T @ z - np.eye(2)) > 0.5


def test_oracle_one_sided_is_larger():
    p = np.diag([1.0, 0.0])
    q = np.zeros((2, 2))
    assert len(oracle_intertwiner_space(p, q, one_sided=True)) == 2


def test_random_commuting_unitary_commutes():
    h = np.diag([0.2, 0.2, 0.8]).astype(np.complex128)
    v = random_commuting_unitary(h, seed=6)
    assert spectral_norm(v @ h - h @ v) <= 1e-12
    np.testing.assert_allclose(v.conj().T @ v, np.eye(3), atol=1e-12)
    # The repeated eigenvalue admits a non-diagonal unitary block.
    assert abs(v[0, 1]) + abs(v[1, 0]) > 1e-3
