"""Shared fixtures and hypothesis strategies for the test suite."""

import numpy as np
import pytest
from hypothesis import assume, strategies as st

from selfaffine import EigenParams, validate_params

# Reference parameter vectors used throughout the suite.
PARABOLA = EigenParams(0.5, 0.25, 0.5, 0.25)
# Diagonal-matrix case with equal one-sided axis tangents (aspect-ratio walk).
ASPECT_WALK = EigenParams(2 / 3, 1 - 2 / 3, 2 / 3, 1 - 2 / 3)
# Continuously differentiable but not a parabola.
C1_POINT = EigenParams(0.55, 0.225, 0.55, 0.225)
SEGMENT = EigenParams(0.6, 0.6, 0.4, 0.4)


@st.composite
def valid_params(draw, monotone=False, strict=False, margin=0.02):
    """Valid parameter vectors; optionally restricted to alpha, beta <= 0.

    strict=True additionally bounds alpha and beta away from zero.
    """
    l1 = draw(st.floats(0.15, 0.85))
    l2 = draw(st.floats(0.15, 0.85))
    cap1, cap2 = l1, l2
    if monotone or strict:
        cap1 = min(cap1, 1.0 - l2 - margin)
        cap2 = min(cap2, 1.0 - l1 - margin)
    assume(cap1 > 0.03 and cap2 > 0.03)
    u1 = draw(st.floats(0.0, 1.0))
    u2 = draw(st.floats(0.0, 1.0))
    n1 = 0.02 + u1 * (cap1 - 0.02)
    n2 = 0.02 + u2 * (cap2 - 0.02)
    assume(n1 + n2 < 1.0 - margin)
    p = EigenParams(l1, n1, l2, n2)
    assume(validate_params(p).valid)
    if strict:
        assume(p.alpha < -1e-3 and p.beta < -1e-3)
    return p


def random_word(rng: np.random.Generator, n: int) -> tuple:
    return tuple(int(d) for d in rng.integers(1, 3, size=n))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240824)
