"""Closed-form bipartite measures.

Wootters concurrence and the concurrence-based EoF for two qubits,
entropy entanglement for pure states, and quantum mutual information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    DensityMatrix,
    PureState,
    StateValidationError,
    partial_trace,
    von_neumann_entropy,
)

# spin-flip operator sigma_y (x) sigma_y in the computational basis
_SYSY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)

SPIN_FLIP_CLAMP = -1e-10


@dataclass(frozen=True)
class PairMeasures:
    """Bundle of two-qubit closed-form measures.

    ``eof`` always equals the binary-entropy form evaluated at
    ``x_parameter`` = (1 + sqrt(1 - concurrence^2)) / 2.
    """

    concurrence: float
    eof: float
    x_parameter: float
    mutual_information: float


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def spin_flip_lambdas(rho: DensityMatrix) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).

    Computed as the singular values of sqrt(rho) (sy x sy) sqrt(rho)*,
    whose squares are exactly those eigenvalues; taking square roots of
    the product's eigenvalues directly would amplify rounding noise in a
    rank-deficient spectrum from machine epsilon to its square root.
    """
    if rho.dims != (2, 2):
        raise StateValidationError(f"expected dims (2, 2), got {rho.dims}")
    w, v = np.linalg.eigh(rho.matrix)
    if np.min(w) < SPIN_FLIP_CLAMP:
        raise StateValidationError("spin-flip spectrum has a large negative eigenvalue")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return np.linalg.svd(root @ _SYSY @ root.conj(), compute_uv=False)


def concurrence_two_qubit(rho: DensityMatrix) -> float:
    """Wootters concurrence C = max(0, l1 - l2 - l3 - l4)."""
    lam = spin_flip_lambdas(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_from_concurrence(c: float) -> float:
    """EoF in bits from a concurrence via E = h((1 + sqrt(1 - C^2)) / 2)."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence {c} outside [0, 1]")
    c = min(1.0, max(0.0, float(c)))
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    return binary_entropy(x)


def eof_two_qubit(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence_two_qubit(rho))


def _split_dims(state_dims: tuple, split) -> tuple:
    if split is None:
        if len(state_dims) != 2:
            raise StateValidationError(
                f"state has {len(state_dims)} subsystems; pass an explicit split"
            )
        return state_dims
    dA, dB = (int(x) for x in split)
    if dA * dB != int(np.prod(state_dims)):
        raise StateValidationError(
            f"split {split} incompatible with total dimension {np.prod(state_dims)}"
        )
    return (dA, dB)


def entropy_entanglement(psi: PureState, split=None) -> float:
    """Entropy of entanglement of a pure bipartite state, in bits.

    Computed from the first marginal; equals the entropy of the second
    marginal for any normalized pure state.
    """
    dims = _split_dims(psi.dims, split)
    rho = DensityMatrix(dims, np.outer(psi.amplitudes, psi.amplitudes.conj()))
    return von_neumann_entropy(partial_trace(rho, [0]))


def mutual_information(rho: DensityMatrix, split=None) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) in bits."""
    dims = _split_dims(rho.dims, split)
    r = rho if dims == rho.dims else DensityMatrix(dims, rho.matrix)
    s_a = von_neumann_entropy(partial_trace(r, [0]))
    s_b = von_neumann_entropy(partial_trace(r, [1]))
    return s_a + s_b - von_neumann_entropy(r)


def pair_measures(rho: DensityMatrix) -> PairMeasures:
    """All closed-form two-qubit measures for a (2, 2) state."""
    c = concurrence_two_qubit(rho)
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    return PairMeasures(
        concurrence=c,
        eof=binary_entropy(x),
        x_parameter=float(x),
        mutual_information=mutual_information(rho),
    )
