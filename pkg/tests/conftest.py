"""Shared fixtures and sampling helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spdfinsler import HermitianMatrix, SpdMatrix

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_hermitian(rng, dim: int, sigma: float = 1.0) -> HermitianMatrix:
    g = sigma * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return HermitianMatrix(0.5 * (g + g.conj().T))


def random_spd(rng, dim: int, sigma: float = 1.0) -> SpdMatrix:
    h = random_hermitian(rng, dim, sigma)
    from spdfinsler import mat_exp

    return mat_exp(h)


def random_unitary(rng, dim: int) -> np.ndarray:
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_invertible(rng, dim: int, cond_max: float = 1e3) -> np.ndarray:
    while True:
        x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        if np.linalg.cond(x) <= cond_max:
            return x


@pytest.fixture
def witness_pair() -> tuple[SpdMatrix, SpdMatrix]:
    """The fixed noncommuting pair used for strictness checks."""
    return SpdMatrix([[2.0, 1.0], [1.0, 2.0]]), SpdMatrix(np.diag([1.0, 4.0]))
