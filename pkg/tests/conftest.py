"""Shared fixtures: the three canonical pairs used throughout the suite."""

from __future__ import annotations

import numpy as np
import pytest

from twoproj import make_orth_pair

SQ3_4 = np.sqrt(3.0) / 4.0

P_GENERIC = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
Q_GENERIC = np.array([[0.25, SQ3_4], [SQ3_4, 0.75]], dtype=np.complex128)

P_EQUAL = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
Q_EQUAL = P_EQUAL.copy()

P_COMPLEMENTARY = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
Q_COMPLEMENTARY = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)


@pytest.fixture
def generic_quarter_pair():
    """Rank-one pair in generic position with H eigenvalue exactly 1/4."""
    return make_orth_pair(P_GENERIC, Q_GENERIC)


@pytest.fixture
def equal_pair():
    """P = Q, so the decomposition is pure M00 and M11."""
    return make_orth_pair(P_EQUAL, Q_EQUAL)


@pytest.fixture
def complementary_pair():
    """Q = I - P, so the decomposition is pure M01 and M10."""
    return make_orth_pair(P_COMPLEMENTARY, Q_COMPLEMENTARY)
