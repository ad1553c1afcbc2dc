"""Dense complex linear algebra for composite quantum systems.

States are plain numpy arrays wrapped with their subsystem dimensions.
All entropies are base-2 (bits). Subsystem order follows the ``dims``
sequence with row-major (C-order) Kronecker convention: the last
subsystem varies fastest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
NORM_TOL = 1e-12
RANK_CUTOFF = 1e-12
ENTROPY_CUTOFF = 1e-12


class StateValidationError(ValueError):
    """Raised when an object violates a state invariant."""


class UnsupportedShapeError(ValueError):
    """Raised when an operation does not apply to the given dimensions."""


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace operator with subsystem dimensions.

    Attributes
    ----------
    dims : tuple of int
        Ordered subsystem dimensions, e.g. ``(4, 2)``.
    matrix : ndarray
        Complex square matrix of side ``prod(dims)``.
    """

    dims: tuple
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def rank(self, cutoff: float = RANK_CUTOFF) -> int:
        w = np.linalg.eigvalsh(self.matrix)
        return max(1, int(np.sum(w > cutoff)))


@dataclass(frozen=True)
class PureState:
    """Normalized state vector with subsystem dimensions."""

    dims: tuple
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> DensityMatrix:
        m = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.dims, m)


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition with eigenvalues sorted descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class Purification:
    """Pure state on ``dims + (source_rank,)`` purifying a density matrix."""

    state: PureState
    source_rank: int


def density_matrix(matrix, dims: Sequence[int]) -> DensityMatrix:
    """Validate and wrap a matrix as a DensityMatrix.

    Raises
    ------
    StateValidationError
        If the matrix is not Hermitian within 1e-10, its trace deviates
        from 1 by more than 1e-10, an eigenvalue is below -1e-10, or the
        shape disagrees with ``dims``.
    """
    m = np.asarray(matrix, dtype=complex)
    dims = tuple(int(d) for d in dims)
    side = int(np.prod(dims))
    if m.shape != (side, side):
        raise StateValidationError(
            f"matrix shape {m.shape} does not match dims {dims} (side {side})"
        )
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise StateValidationError("matrix is not Hermitian within 1e-10")
    if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
        raise StateValidationError("trace deviates from 1 by more than 1e-10")
    if np.min(np.linalg.eigvalsh(m)) < EIGENVALUE_FLOOR:
        raise StateValidationError("eigenvalue below -1e-10: not positive semidefinite")
    return DensityMatrix(dims, m)


def pure_state(amplitudes, dims: Sequence[int]) -> PureState:
    """Validate and wrap a vector as a PureState (unit norm within 1e-12)."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    dims = tuple(int(d) for d in dims)
    if v.shape[0] != int(np.prod(dims)):
        raise StateValidationError(
            f"vector length {v.shape[0]} does not match dims {dims}"
        )
    nrm = float(np.vdot(v, v).real)
    if abs(nrm - 1.0) > NORM_TOL:
        raise StateValidationError("squared norm deviates from 1 by more than 1e-12")
    return PureState(dims, v)


def tensor(a, b):
    """Kronecker product; for wrapped states the dims concatenate."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.dims + b.dims, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(a.dims + b.dims, np.kron(a.matrix, b.matrix))
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out all subsystems not listed in ``keep``.

    ``keep`` must be a nonempty proper subset of subsystem indices; the
    kept subsystems stay in their original order.
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep or len(keep) >= n or any(k < 0 or k >= n for k in keep):
        raise StateValidationError(
            f"keep={keep} is not a nonempty proper subset of range({n})"
        )
    t = rho.matrix.reshape(rho.dims + rho.dims)
    removed = 0
    for i in range(n):
        if i in keep:
            continue
        ax = i - removed
        half = (t.ndim // 2)
        t = np.trace(t, axis1=ax, axis2=ax + half)
        removed += 1
    new_dims = tuple(rho.dims[i] for i in keep)
    side = int(np.prod(new_dims))
    return DensityMatrix(new_dims, t.reshape(side, side))


def hermitian_eig(m) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = m.matrix if isinstance(m, DensityMatrix) else np.asarray(m, dtype=complex)
    if np.max(np.abs(a - a.conj().T)) > HERMITICITY_TOL:
        raise StateValidationError("input is not Hermitian within 1e-10")
    w, v = np.linalg.eigh(a)
    order = np.argsort(w)[::-1]
    return Spectrum(w[order], v[:, order])


def entropy_of_spectrum(eigenvalues) -> float:
    """Shannon entropy in bits; eigenvalues below 1e-12 contribute zero."""
    w = np.asarray(eigenvalues, dtype=float)
    w = w[w > ENTROPY_CUTOFF]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -tr(rho log2 rho) in bits."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return entropy_of_spectrum(np.linalg.eigvalsh(a))


def purify(rho: DensityMatrix, cutoff: float = RANK_CUTOFF) -> Purification:
    """Spectral purification |Psi> = sum_i sqrt(l_i) |v_i>|i_C>.

    The ancilla is appended as the last subsystem with dimension equal
    to the numerical rank of ``rho`` at ``cutoff``.
    """
    spec = hermitian_eig(rho.matrix)
    r = max(1, int(np.sum(spec.eigenvalues > cutoff)))
    amps = np.zeros(rho.dim * r, dtype=complex)
    for k in range(r):
        anc = np.zeros(r)
        anc[k] = 1.0
        amps += np.sqrt(max(0.0, spec.eigenvalues[k])) * np.kron(
            spec.eigenvectors[:, k], anc
        )
    amps /= np.sqrt(float(np.vdot(amps, amps).real))
    state = PureState(rho.dims + (r,), amps)
    marginal = partial_trace(state.projector(), range(len(rho.dims)))
    if np.max(np.abs(marginal.matrix - rho.matrix)) > 1e-10:
        raise StateValidationError("purification marginal mismatch above 1e-10")
    return Purification(state, r)


def load_state(path) -> DensityMatrix:
    """Load a density matrix from the JSON state-file format.

    The document holds ``{"dims": [...], "re": [...], "im": [...]}`` with
    row-major real and imaginary parts; all DensityMatrix invariants are
    enforced on load.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("dims", "re", "im"):
        if key not in doc:
            raise StateValidationError(f"state file missing required key '{key}'")
    dims = [int(d) for d in doc["dims"]]
    side = int(np.prod(dims))
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc["im"], dtype=float)
    if re.size != side * side or im.size != side * side:
        raise StateValidationError(
            f"re/im length {re.size}/{im.size} does not match dims {dims}"
        )
    m = (re + 1j * im).reshape(side, side)
    return density_matrix(m, dims)


def save_state(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "dims": list(rho.dims),
                "re": rho.matrix.real.reshape(-1).tolist(),
                "im": rho.matrix.imag.reshape(-1).tolist(),
            },
            fh,
        )
