"""Independent brute-force verifiers.

Measurement-space and ensemble-space global searches used to certify
(or bound) every analytic value produced elsewhere. Values found by a
search are always upper bounds on the true minimum; at convergence they
match the analytic counterparts within the configured tolerance.

Restarts are independent: restart ``i`` owns the RNG stream seeded by
``(seed, i)``, so the merged result is identical no matter how restarts
are scheduled. Results merge by minimum value with ties broken by the
lower restart index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import _kernels_py, kernels
from .states import (
    DensityMatrix,
    Purification,
    PureState,
    StateValidationError,
    hermitian_eig,
    partial_trace,
    pure_state,
)

RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    """Knobs shared by all searches; defaults favor certification over speed."""

    seed: int = 0
    restarts: int = 64
    max_iterations: int = 2000
    objective_tolerance: float = 1e-8
    povm_elements: Optional[int] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.objective_tolerance <= 0:
            raise ValueError("objective_tolerance must be positive")


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Rank-1 orthogonal projectors encoded as an orthonormal basis.

    Columns of ``projectors`` are the measurement vectors |k>.
    """

    subsystem: int
    projectors: np.ndarray


@dataclass(frozen=True)
class RankOnePOVM:
    """Rank-1 POVM given by vectors v_k with sum_k v_k v_k^dag = I."""

    subsystem: int
    elements: list


@dataclass(frozen=True)
class Ensemble:
    """Probabilities and pure states realizing a density matrix."""

    probabilities: np.ndarray
    states: list


@dataclass(frozen=True)
class SearchResult:
    value: float
    argmin: object
    converged: bool
    spread: float


def measured_index(rho: DensityMatrix, measured) -> int:
    if isinstance(measured, str):
        try:
            idx = {"a": 0, "b": 1}[measured.strip().lower()]
        except KeyError:
            raise StateValidationError(f"measured side '{measured}' is not A or B")
    else:
        idx = int(measured)
    if idx not in (0, 1) or len(rho.dims) != 2:
        raise StateValidationError(
            f"measured={measured} invalid for dims {rho.dims} (bipartite required)"
        )
    return idx


def _measured_first_tensor(rho: DensityMatrix, idx: int) -> np.ndarray:
    """(d_m, d_o, d_m, d_o) tensor with the measured subsystem first."""
    d0, d1 = rho.dims
    t = rho.matrix.reshape(d0, d1, d0, d1)
    if idx == 1:
        t = t.transpose(1, 0, 3, 2)
    return np.ascontiguousarray(t, dtype=complex)


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


_POLISH_CANDIDATES = 3
_POLISH_ROUNDS = 3


def _run_restarts(objective, starts, cfg: SearchConfig, n_params: int):
    """Sequential multi-start simplex descent; deterministic merge.

    After the restart sweep, the few best restarts are polished by
    re-running the simplex from their converged points: a fresh simplex
    re-expands around the candidate, which matters in high-dimensional
    searches where a single descent stalls short of the optimum.
    """
    maxiter = cfg.max_iterations * max(1, n_params // 16)
    options = {
        "maxiter": maxiter,
        "maxfev": 4 * maxiter,
        "xatol": 1e-7,
        "fatol": cfg.objective_tolerance,
        "adaptive": n_params >= 32,
    }

    def descend(x0):
        return minimize(objective, x0, method="Nelder-Mead", options=options)

    runs = []
    for i in range(cfg.restarts):
        res = descend(starts(i))
        runs.append((float(res.fun), i, np.array(res.x), bool(res.success)))
    worst_val = max(r[0] for r in runs)
    runs.sort(key=lambda r: (r[0], r[1]))

    best_val, _, best_x, best_success = runs[0]
    for val, _, x, success in runs[:_POLISH_CANDIDATES]:
        for _ in range(_POLISH_ROUNDS):
            res = descend(x)
            improved = val - float(res.fun)
            val, x, success = float(res.fun), np.array(res.x), bool(res.success)
            if improved <= cfg.objective_tolerance:
                break
        if val < best_val:
            best_val, best_x, best_success = val, x, success
    return best_x, best_val, worst_val, best_success


def projective_search(rho_AB: DensityMatrix, measured, cfg: SearchConfig = None) -> SearchResult:
    """Minimize the average conditional entropy over orthonormal bases.

    The basis is parametrized as exp(iH) with a Hermitian generator of
    d^2 real parameters; the returned measurement is the decoded argmin.
    """
    cfg = cfg or SearchConfig()
    idx = measured_index(rho_AB, measured)
    d_m = rho_AB.dims[idx]
    d_o = rho_AB.dims[1 - idx]
    rho_t = _measured_first_tensor(rho_AB, idx)
    n_params = d_m * d_m

    def objective(x):
        return kernels.projective_objective(np.ascontiguousarray(x, dtype=float), rho_t, d_m, d_o)

    def starts(i):
        return _restart_rng(cfg.seed, i).uniform(-np.pi, np.pi, n_params)

    best_x, _, worst, success = _run_restarts(objective, starts, cfg, n_params)
    # report value and argmin through the same (python) decode path so the
    # pair is exactly self-consistent
    value = float(_kernels_py.projective_objective(best_x, rho_t, d_m, d_o))
    basis = kernels.unitary_from_params(best_x, d_m)
    return SearchResult(
        value=value,
        argmin=ProjectiveMeasurement(subsystem=idx, projectors=basis),
        converged=success,
        spread=float(max(0.0, worst - value)),
    )


def povm_search(rho_AB: DensityMatrix, measured, cfg: SearchConfig = None) -> SearchResult:
    """Minimize the conditional entropy over n rank-1 POVM elements.

    Completeness is enforced by construction: the POVM vectors are the
    conjugated rows of a Gram-Schmidt-orthonormalized n x d block, so
    they always sum to the identity. n defaults to d^2.
    """
    cfg = cfg or SearchConfig()
    idx = measured_index(rho_AB, measured)
    d_m = rho_AB.dims[idx]
    d_o = rho_AB.dims[1 - idx]
    n_out = cfg.povm_elements or d_m * d_m
    if n_out < d_m:
        raise ValueError(f"povm_elements={n_out} below measured dimension {d_m}")
    rho_t = _measured_first_tensor(rho_AB, idx)
    n_params = 2 * n_out * d_m

    def objective(x):
        return kernels.povm_objective(np.ascontiguousarray(x, dtype=float), rho_t, d_m, d_o, n_out)

    def starts(i):
        return _restart_rng(cfg.seed, i).standard_normal(n_params)

    best_x, _, worst, success = _run_restarts(objective, starts, cfg, n_params)
    value = float(_kernels_py.povm_objective(best_x, rho_t, d_m, d_o, n_out))
    q = kernels.isometry_from_params(best_x, n_out, d_m)
    elements = [q[k, :].conj() for k in range(n_out)]
    return SearchResult(
        value=value,
        argmin=RankOnePOVM(subsystem=idx, elements=elements),
        converged=success,
        spread=float(max(0.0, worst - value)),
    )


def ensemble_eof_search(rho: DensityMatrix, components: int, cfg: SearchConfig = None) -> SearchResult:
    """Minimize average member entanglement over m-component ensembles.

    Decompositions are parametrized by m x r isometries acting on the
    eigen-ensemble (r = rank); member entanglement is the entropy of its
    second marginal. Works for any bipartite dims; the two-qubit case
    with components >= 4 reaches the concurrence-based EoF.
    """
    cfg = cfg or SearchConfig()
    if len(rho.dims) != 2:
        raise StateValidationError(f"bipartite state required, got dims {rho.dims}")
    d_a, d_b = rho.dims
    spec = hermitian_eig(rho.matrix)
    r = max(1, int(np.sum(spec.eigenvalues > RANK_CUTOFF)))
    if components < r:
        raise ValueError(f"components={components} below rank {r}")
    phi = np.ascontiguousarray(
        spec.eigenvectors[:, :r] * np.sqrt(np.clip(spec.eigenvalues[:r], 0.0, None)),
        dtype=complex,
    )
    m = int(components)
    n_params = 2 * m * r

    def objective(x):
        return kernels.ensemble_objective(np.ascontiguousarray(x, dtype=float), phi, d_a, d_b, m, r)

    def starts(i):
        return _restart_rng(cfg.seed, i).standard_normal(n_params)

    best_x, _, worst, success = _run_restarts(objective, starts, cfg, n_params)
    value = float(_kernels_py.ensemble_objective(best_x, phi, d_a, d_b, m, r))
    w = kernels.isometry_from_params(best_x, m, r)
    probs = np.zeros(m)
    states = []
    for k in range(m):
        psi = phi @ w[k, :]
        p = float(np.vdot(psi, psi).real)
        probs[k] = p
        if p > 1e-12:
            states.append(pure_state(psi / np.sqrt(p), rho.dims))
        else:
            unit = np.zeros(rho.dim, dtype=complex)
            unit[0] = 1.0
            states.append(PureState(rho.dims, unit))
    return SearchResult(
        value=value,
        argmin=Ensemble(probabilities=probs, states=states),
        converged=success,
        spread=float(max(0.0, worst - value)),
    )


def dilated_ensemble(purification: Purification, unitary_AE: np.ndarray, ancilla_dim: int) -> Ensemble:
    """Ensemble of the purified state from a dilated ancilla measurement.

    The purification's own ancilla (its last subsystem, dimension r) is
    joined with a fresh ancilla E of dimension ``ancilla_dim`` prepared
    in |0_E>; ``unitary_AE`` acts on that r*ancilla_dim space and the
    joint computational basis is measured. The r*ancilla_dim outcomes
    carry pure relative states on the source system, and the resulting
    ensemble realizes the source density matrix. With the identity
    unitary and ancilla_dim 1 this is exactly the spectral ensemble.
    """
    src_dims = purification.state.dims[:-1]
    r = purification.state.dims[-1]
    d_e = int(ancilla_dim)
    if d_e < 1:
        raise ValueError("ancilla_dim must be >= 1")
    n = r * d_e
    u = np.asarray(unitary_AE, dtype=complex)
    if u.shape != (n, n):
        raise StateValidationError(f"unitary shape {u.shape} does not match ({n}, {n})")
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) > 1e-10:
        raise StateValidationError("dilation operator is not unitary within 1e-10")
    src_dim = int(np.prod(src_dims))
    amps = purification.state.amplitudes.reshape(src_dim, r)
    # column alpha*d_e of U is U|alpha, 0_E>; member j contracts it with
    # the purification's ancilla index
    w = u[:, [alpha * d_e for alpha in range(r)]]
    probs = np.zeros(n)
    states = []
    for j in range(n):
        psi = amps @ w[j, :]
        p = float(np.vdot(psi, psi).real)
        probs[j] = p
        if p > 1e-12:
            states.append(pure_state(psi / np.sqrt(p), src_dims))
        else:
            unit = np.zeros(src_dim, dtype=complex)
            unit[0] = 1.0
            states.append(PureState(src_dims, unit))
    recon = np.zeros((src_dim, src_dim), dtype=complex)
    for p, s in zip(probs, states):
        recon += p * np.outer(s.amplitudes, s.amplitudes.conj())
    source = partial_trace(
        purification.state.projector(), range(len(src_dims))
    ).matrix
    if np.max(np.abs(recon - source)) > 1e-8:
        raise StateValidationError("dilated ensemble fails to realize the source state")
    return Ensemble(probabilities=probs, states=states)
