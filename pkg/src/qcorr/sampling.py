"""Seeded random state and unitary generators for tests and verification."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .states import DensityMatrix, PureState, density_matrix, pure_state


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    # fix the phase freedom so the distribution is exactly Haar
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    n = int(np.prod(list(dims)))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    return pure_state(v, dims)


def random_rank_k(dims: Sequence[int], k: int, rng: np.random.Generator) -> DensityMatrix:
    """Random rank-k mixture of orthonormal pure states with Dirichlet weights."""
    n = int(np.prod(list(dims)))
    if not 1 <= k <= n:
        raise ValueError(f"rank {k} out of range for dimension {n}")
    z = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    q, _ = np.linalg.qr(z)
    p = rng.dirichlet(np.ones(k))
    m = (q * p) @ q.conj().T
    m = 0.5 * (m + m.conj().T)
    return density_matrix(m, dims)
