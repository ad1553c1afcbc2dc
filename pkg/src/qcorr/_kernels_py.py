"""Pure-python objective kernels for the measurement and ensemble searches.

Each function evaluates one candidate point of a derivative-free search:
it decodes the raw parameter vector, builds the measurement or ensemble,
and returns the objective in bits. A compiled twin of this module is
selected at import time when available; both implement identical
algorithms (modified Gram-Schmidt isometries, Hermitian-generator
unitaries, closed-form 2x2 eigenvalues).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

# returned when a random block is numerically degenerate; large enough
# that simplex descent always walks away from it
PENALTY = 64.0

_PIVOT_TOL = 1e-12
_PROB_TOL = 1e-14


def _gram_schmidt(z: np.ndarray):
    """Orthonormalize the columns of z in place; None if degenerate."""
    n, d = z.shape
    for j in range(d):
        for _ in range(2):
            for i in range(j):
                z[:, j] -= np.vdot(z[:, i], z[:, j]) * z[:, i]
        nrm = math.sqrt(float(np.vdot(z[:, j], z[:, j]).real))
        if nrm < _PIVOT_TOL:
            return None
        z[:, j] /= nrm
    return z


def _entropy2_terms(a: float, b: float, c: complex) -> float:
    """p * S(M / p) summed into bits for a subnormalized 2x2 block.

    M = [[a, c], [c*, b]] with a, b >= 0 and p = a + b; contributes
    -l1 log2(l1/p) ... aggregated as sum_i -l_i log2 l_i + p log2 p.
    """
    p = a + b
    if p < _PROB_TOL:
        return 0.0
    half = 0.5 * (a - b)
    disc = math.sqrt(half * half + (c.real * c.real + c.imag * c.imag))
    l1 = 0.5 * p + disc
    l2 = 0.5 * p - disc
    out = p * math.log2(p)
    if l1 > _PROB_TOL:
        out -= l1 * math.log2(l1)
    if l2 > _PROB_TOL:
        out -= l2 * math.log2(l2)
    return out


def _entropy_block(block: np.ndarray) -> float:
    """p * S(block / p) in bits for a subnormalized Hermitian block."""
    p = float(np.trace(block).real)
    if p < _PROB_TOL:
        return 0.0
    w = np.linalg.eigvalsh(block)
    out = p * math.log2(p)
    for lam in w:
        if lam > _PROB_TOL:
            out -= lam * math.log2(lam)
    return out


def _conditional_value(vectors: np.ndarray, rho_t: np.ndarray, d_o: int) -> float:
    """Average conditional entropy for measurement vectors (rows)."""
    total = 0.0
    for k in range(vectors.shape[0]):
        v = vectors[k]
        block = np.einsum("a,aibj,b->ij", v.conj(), rho_t, v)
        if d_o == 2:
            total += _entropy2_terms(block[0, 0].real, block[1, 1].real, block[0, 1])
        else:
            total += _entropy_block(block)
    return total


def povm_objective(x: np.ndarray, rho_t: np.ndarray, d_m: int, d_o: int, n_out: int) -> float:
    """Conditional entropy under the rank-1 POVM encoded by x.

    x holds the real then imaginary parts of an (n_out, d_m) block whose
    Gram-Schmidt orthonormalized columns form an isometry Q; the POVM
    vectors are the conjugated rows of Q, which sum to identity.
    """
    half = n_out * d_m
    z = (x[:half] + 1j * x[half:]).reshape(n_out, d_m).astype(complex)
    q = _gram_schmidt(z)
    if q is None:
        return PENALTY
    return _conditional_value(q.conj(), rho_t, d_o)


def hermitian_from_params(x: np.ndarray, d: int) -> np.ndarray:
    """Hermitian d x d matrix from d*d real parameters."""
    h = np.zeros((d, d), dtype=complex)
    k = 0
    for i in range(d):
        h[i, i] = x[k]
        k += 1
    for i in range(d):
        for j in range(i + 1, d):
            h[i, j] = x[k] + 1j * x[k + 1]
            h[j, i] = x[k] - 1j * x[k + 1]
            k += 2
    return h


def unitary_from_params(x: np.ndarray, d: int) -> np.ndarray:
    """U = exp(iH) with H built from d*d real parameters."""
    h = hermitian_from_params(x, d)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def projective_objective(x: np.ndarray, rho_t: np.ndarray, d_m: int, d_o: int) -> float:
    """Conditional entropy under the orthonormal basis exp(iH) columns."""
    u = unitary_from_params(x, d_m)
    return _conditional_value(u.T, rho_t, d_o)


def ensemble_objective(x: np.ndarray, phi: np.ndarray, d_a: int, d_b: int, m: int, r: int) -> float:
    """Average member entanglement of the ensemble encoded by x.

    phi holds sqrt(eigenvalue)-scaled eigenvectors of the target state
    as columns (dim x r); member k is phi @ W[k, :] for the m x r
    isometry W built by Gram-Schmidt, and its entanglement is the
    entropy of the second marginal.
    """
    half = m * r
    z = (x[:half] + 1j * x[half:]).reshape(m, r).astype(complex)
    w = _gram_schmidt(z)
    if w is None:
        return PENALTY
    total = 0.0
    for k in range(m):
        psi = phi @ w[k, :]
        mat = psi.reshape(d_a, d_b)
        block = mat.conj().T @ mat
        if d_b == 2:
            total += _entropy2_terms(block[0, 0].real, block[1, 1].real, block[0, 1])
        else:
            total += _entropy_block(block)
    return total
