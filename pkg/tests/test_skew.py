"""Tests for idempotent pairs, invertibility conditions, and similarities."""

from __future__ import annotations

import numpy as np
import pytest

from twoproj import (
    DimMismatchError,
    NotProjectionError,
    RankMismatchError,
    SKEW_RANK_ONE_P,
    SKEW_RANK_ONE_Q,
    SingularError,
    SpectrumOnCutError,
    conjugate_by_b,
    make_idempotent_pair,
    prop2_conditions,
    random_idempotent_pair,
    rank_matching_similarity,
    spectral_norm,
    sqrt_similarity,
    two_by_two_family,
)

# Idempotent but not hermitian; B = I - P - Q is invertible here.
UPPER_P = np.array([[1.0, 1.0], [0.0, 0.0]])
UPPER_Q = np.diag([1.0, 0.0])


def _upper_pair():
    return make_idempotent_pair(UPPER_P, UPPER_Q)


def _skew_pair():
    return make_idempotent_pair(SKEW_RANK_ONE_P, SKEW_RANK_ONE_Q)


def test_make_idempotent_pair_accepts_non_hermitian():
    pair = _upper_pair()
    np.testing.assert_allclose(pair.a, [[0.0, 1.0], [0.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(pair.b, [[-1.0, -1.0], [0.0, 1.0]], atol=1e-15)
    assert pair.dim == 2


def test_make_idempotent_pair_rejects_non_idempotent():
    with pytest.raises(NotProjectionError):
        make_idempotent_pair(np.array([[0.5, 0.0], [0.0, 0.0]]), UPPER_Q)
    with pytest.raises(DimMismatchError):
        make_idempotent_pair(UPPER_P, np.eye(3))


def test_counterexample_pair_is_valid_with_nilpotent_b():
    pair = _skew_pair()
    np.testing.assert_allclose(pair.b, [[0.0, -1.0], [0.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(pair.b @ pair.b, np.zeros((2, 2)), atol=1e-15)
    # A^2 = I, so B^2 = I - A^2 vanishes identically.
    np.testing.assert_allclose(pair.a @ pair.a, np.eye(2), atol=1e-15)


def test_prop2_all_conditions_fail_on_counterexample():
    report = prop2_conditions(_skew_pair())
    assert not report.b_invertible
    assert not report.one_not_in_spec_a2
    assert not report.p2q_minus_i_invertible
    assert not report.p2q_minus_2i_invertible
    assert report.consistent
    for value in report.margins.values():
        assert value <= 1e-12


def test_prop2_all_conditions_hold_on_invertible_case():
    report = prop2_conditions(_upper_pair())
    assert report.b_invertible
    assert report.one_not_in_spec_a2
    assert report.p2q_minus_i_invertible
    assert report.p2q_minus_2i_invertible
    assert report.consistent
    for value in report.margins.values():
        assert value > 0.1


def test_prop2_consistent_on_random_idempotents():
    for seed in range(30):
        p, q = random_idempotent_pair(5, seed=seed)
        report = prop2_conditions(make_idempotent_pair(p, q))
        assert report.consistent, report.margins


def test_conjugate_by_b_swaps_both_ways():
    pair = _upper_pair()
    v = conjugate_by_b(pair)
    np.testing.assert_allclose(v, pair.b, atol=1e-15)
    vinv = np.linalg.inv(v)
    np.testing.assert_allclose(v @ pair.p @ vinv, pair.q, atol=1e-14)
    np.testing.assert_allclose(v @ pair.q @ vinv, pair.p, atol=1e-14)


def test_conjugate_by_b_rejects_singular_b():
    with pytest.raises(SingularError):
        conjugate_by_b(_skew_pair())


def test_sqrt_similarity_is_involutive():
    pair = _upper_pair()
    v = sqrt_similarity(pair)
    # A^2 = 0 here, so the normalization is trivial and V = B.
    np.testing.assert_allclose(v, pair.b, atol=1e-14)
    np.testing.assert_allclose(v @ v, np.eye(2), atol=1e-14)
    vinv = np.linalg.inv(v)
    np.testing.assert_allclose(v @ pair.p @ vinv, pair.q, atol=1e-14)


def test_sqrt_similarity_random_idempotents():
    done = 0
    for seed in range(40):
        p, q = random_idempotent_pair(4, rank_p=2, rank_q=2, seed=seed)
        pair = make_idempotent_pair(p, q)
        try:
            v = sqrt_similarity(pair)
        except SpectrumOnCutError:
            continue
        assert spectral_norm(v @ v - np.eye(4)) <= 1e-8
        vinv = np.linalg.inv(v)
        assert spectral_norm(v @ pair.p @ vinv - pair.q) <= 1e-7
        done += 1
    assert done >= 10


def test_sqrt_similarity_rejects_spectrum_on_cut():
    with pytest.raises(SpectrumOnCutError):
        sqrt_similarity(_skew_pair())


def test_rank_matching_similarity_one_sided():
    pair = _skew_pair()
    v = rank_matching_similarity(pair)
    assert spectral_norm(v @ pair.p - pair.q @ v) <= 1e-13
    assert abs(np.linalg.det(v)) > 1e-6


def test_rank_matching_similarity_rejects_rank_mismatch():
    p, q = random_idempotent_pair(4, rank_p=1, rank_q=3, seed=2)
    with pytest.raises(RankMismatchError):
        rank_matching_similarity(make_idempotent_pair(p, q))


def test_two_by_two_family_intertwines_exactly():
    pair = _skew_pair()
    v, w = two_by_two_family(1.0, 0.0)
    np.testing.assert_allclose(v, [[-2.0, 0.0], [1.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(w, [[-1.0, 0.0], [1.0, 2.0]], atol=1e-15)
    for c, b in [(1.0, 0.0), (2.0, 1.0), (0.3 + 0.4j, -1.2), (0.0, 1.0 + 1.0j)]:
        v, w = two_by_two_family(c, b)
        assert spectral_norm(v @ pair.p - pair.q @ v) <= 1e-14
        assert spectral_norm(w @ pair.q - pair.p @ w) <= 1e-14


def test_two_by_two_family_spans_the_one_sided_solution_space():
    from twoproj import oracle_intertwiner_space

    basis = oracle_intertwiner_space(
        np.asarray(SKEW_RANK_ONE_P), np.asarray(SKEW_RANK_ONE_Q), one_sided=True
    )
    assert len(basis) == 2
    v1, _ = two_by_two_family(1.0, 0.0)
    v2, _ = two_by_two_family(0.0, 1.0)
    stacked = np.column_stack([z.reshape(-1) for z in basis])
    for member in (v1, v2):
        vec = member.reshape(-1)
        coeff, *_ = np.linalg.lstsq(stacked, vec, rcond=None)
        assert np.linalg.norm(stacked @ coeff - vec) <= 1e-12


def test_two_by_two_family_never_unitary():
    rng = np.random.default_rng(0)
    for _ in range(200):
        c, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v, w = two_by_two_family(c, b)
        assert spectral_norm(v.conj().T @ v - np.eye(2)) > 0.05
        assert spectral_norm(w.conj().T @ w - np.eye(2)) > 0.05


def test_random_idempotent_pair_is_deterministic():
    p1, q1 = random_idempotent_pair(5, seed=11)
    p2, q2 = random_idempotent_pair(5, seed=11)
    np.testing.assert_array_equal(p1, p2)
    np.testing.assert_array_equal(q1, q2)
