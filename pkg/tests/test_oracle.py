import math

import numpy as np
import pytest

from qcorr import oracle
from qcorr.families import Rank2Params, fig1_params, rank2_bc_xstate, rank2_state
from qcorr.oracle import (
    Ensemble,
    ProjectiveMeasurement,
    RankOnePOVM,
    SearchConfig,
    SearchResult,
    dilated_ensemble,
    ensemble_eof_search,
    measured_index,
    povm_search,
    projective_search,
)
from qcorr.pair_measures import entropy_entanglement, eof_two_qubit
from qcorr.sampling import random_rank_k, random_unitary
from qcorr.states import (
    StateValidationError,
    density_matrix,
    entropy_of_spectrum,
    partial_trace,
    pure_state,
    purify,
)

EOF_C06 = 0.4689955935892811

FAST = SearchConfig(seed=0, restarts=4)


def bell_projector():
    v = np.zeros(4)
    v[0] = v[3] = 1.0 / math.sqrt(2.0)
    return pure_state(v, (2, 2)).projector()


def bell_diagonal_separable():
    # equal mixture of the two even-parity Bell states; classically
    # correlated in the x basis, so every quantum measure vanishes
    return rank2_bc_xstate(Rank2Params(0.5, 0.5, math.pi / 4.0, 0.0, 0.0))


def conditional_value(rho, measurement) -> float:
    # independent re-evaluation of a measurement's conditional entropy
    rho_t = oracle._measured_first_tensor(rho, measurement.subsystem)
    if isinstance(measurement, ProjectiveMeasurement):
        vectors = [measurement.projectors[:, k] for k in range(measurement.projectors.shape[1])]
    else:
        vectors = list(measurement.elements)
    total = 0.0
    for v in vectors:
        block = np.einsum("a,aibj,b->ij", np.conj(v), rho_t, v)
        p = float(np.trace(block).real)
        if p > 1e-14:
            total += p * entropy_of_spectrum(np.linalg.eigvalsh(block / p))
    return total


def ensemble_value(ens: Ensemble) -> float:
    return float(
        sum(
            p * entropy_entanglement(s)
            for p, s in zip(ens.probabilities, ens.states)
            if p > 1e-12
        )
    )


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(objective_tolerance=0.0)


def test_measured_index_accepts_names_and_ints():
    rho = bell_projector()
    assert measured_index(rho, "A") == 0
    assert measured_index(rho, "b") == 1
    assert measured_index(rho, 0) == 0
    assert measured_index(rho, 1) == 1
    with pytest.raises(StateValidationError):
        measured_index(rho, "C")
    with pytest.raises(StateValidationError):
        measured_index(rho, 2)
    tri = density_matrix(np.eye(8) / 8.0, (2, 2, 2))
    with pytest.raises(StateValidationError):
        measured_index(tri, 0)


def test_projective_classically_correlated_reaches_zero():
    rho = density_matrix(np.diag([0.4, 0.0, 0.0, 0.6]).astype(complex), (2, 2))
    res = projective_search(rho, "A", FAST)
    assert res.value < 1e-8
    assert res.spread >= 0.0


def test_projective_bell_diagonal_separable_reaches_zero():
    res = projective_search(bell_diagonal_separable(), "A", FAST)
    assert res.value < 1e-8


def test_projective_rank2_wide_matches_purified_pair_eof():
    # measuring the 4-dimensional side of a rank-2 state leaves the
    # unmeasured qubit and the rank-2 ancilla as a two-qubit pair whose
    # formation entanglement the search must reproduce
    cfg = SearchConfig(seed=1, restarts=8)
    rng = np.random.default_rng(53)
    for _ in range(3):
        rho = random_rank_k((4, 2), 2, rng)
        pur = purify(rho)
        pair = partial_trace(pur.state.projector(), (1, 2))
        res = projective_search(rho, "A", cfg)
        assert abs(res.value - eof_two_qubit(pair)) < 2e-3


def test_povm_pure_state_reaches_zero():
    rng = np.random.default_rng(59)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    res = povm_search(pure_state(v, (2, 2)).projector(), "A", FAST)
    assert res.value < 1e-6


def test_povm_matches_projective_for_qubit_measured_side():
    rng = np.random.default_rng(61)
    for _ in range(3):
        rho = random_rank_k((2, 2), int(rng.integers(1, 5)), rng)
        proj = projective_search(rho, "A", SearchConfig(seed=2, restarts=6))
        povm = povm_search(rho, "A", SearchConfig(seed=3, restarts=6))
        assert povm.value <= proj.value + 1e-9
        assert abs(povm.value - proj.value) < 1e-4


def test_povm_fig1_point_matches_pair_eof():
    rho = rank2_state(fig1_params(0.8))
    res = povm_search(rho, "A", SearchConfig(seed=4, restarts=6))
    assert abs(res.value - EOF_C06) < 2e-3


def test_povm_rejects_too_few_elements():
    rho = bell_projector()
    with pytest.raises(ValueError):
        povm_search(rho, "A", SearchConfig(povm_elements=1))


def test_ensemble_single_component_is_entropy_entanglement():
    rng = np.random.default_rng(67)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    psi = pure_state(v, (2, 2))
    res = ensemble_eof_search(psi.projector(), 1, FAST)
    assert abs(res.value - entropy_entanglement(psi)) < 1e-9


def test_ensemble_separable_mixture_reaches_zero():
    res = ensemble_eof_search(bell_diagonal_separable(), 4, FAST)
    assert res.value < 1e-6


def test_ensemble_fig1_point_matches_wootters():
    rho = rank2_bc_xstate(fig1_params(0.8))
    res = ensemble_eof_search(rho, 4, SearchConfig(seed=5, restarts=8))
    assert abs(res.value - EOF_C06) < 1e-4
    assert abs(eof_two_qubit(rho) - EOF_C06) < 1e-12


def test_ensemble_rejects_bad_inputs():
    rho = density_matrix(np.eye(4) / 4.0, (2, 2))
    with pytest.raises(ValueError):
        ensemble_eof_search(rho, 2, FAST)
    tri = density_matrix(np.eye(8) / 8.0, (2, 2, 2))
    with pytest.raises(StateValidationError):
        ensemble_eof_search(tri, 8, FAST)


def test_search_results_self_consistent():
    # reported value must equal the objective re-evaluated at the argmin
    rng = np.random.default_rng(71)
    rho = random_rank_k((2, 2), 2, rng)
    proj = projective_search(rho, "B", FAST)
    assert abs(proj.value - conditional_value(rho, proj.argmin)) < 1e-10
    povm = povm_search(rho, "B", FAST)
    assert isinstance(povm.argmin, RankOnePOVM)
    assert abs(povm.value - conditional_value(rho, povm.argmin)) < 1e-10
    ens = ensemble_eof_search(rho, 4, FAST)
    assert abs(ens.value - ensemble_value(ens.argmin)) < 1e-10
    assert abs(float(np.sum(ens.argmin.probabilities)) - 1.0) < 1e-10


def test_povm_never_above_projective():
    rng = np.random.default_rng(73)
    for _ in range(4):
        rho = random_rank_k((2, 2), int(rng.integers(1, 5)), rng)
        proj = projective_search(rho, "A", SearchConfig(seed=6, restarts=5))
        povm = povm_search(rho, "A", SearchConfig(seed=7, restarts=5))
        assert povm.value <= proj.value + 1e-9


def test_search_upper_bound_property():
    # a search value can sit above the true minimum but never materially
    # below it; for a qubit measured side the floor is the purified pair EoF
    rng = np.random.default_rng(79)
    for _ in range(3):
        rho = random_rank_k((2, 2), 2, rng)
        pur = purify(rho)
        pair = partial_trace(pur.state.projector(), (1, 2))
        floor = eof_two_qubit(pair)
        res = povm_search(rho, "A", SearchConfig(seed=8, restarts=5))
        assert res.value >= floor - 1e-6


def test_search_determinism_bitwise():
    rng = np.random.default_rng(83)
    rho = random_rank_k((2, 2), 3, rng)
    cfg = SearchConfig(seed=9, restarts=4)
    a = projective_search(rho, "A", cfg)
    b = projective_search(rho, "A", cfg)
    assert a.value == b.value
    assert a.spread == b.spread
    assert np.array_equal(a.argmin.projectors, b.argmin.projectors)
    ea = ensemble_eof_search(rho, 4, cfg)
    eb = ensemble_eof_search(rho, 4, cfg)
    assert ea.value == eb.value
    assert np.array_equal(ea.argmin.probabilities, eb.argmin.probabilities)


def test_dilated_identity_recovers_eigen_ensemble():
    rng = np.random.default_rng(89)
    rho = random_rank_k((2, 2), 2, rng)
    pur = purify(rho)
    r = pur.source_rank
    ens = dilated_ensemble(pur, np.eye(r), 1)
    spec = np.linalg.eigvalsh(rho.matrix)[::-1]
    assert np.allclose(np.sort(ens.probabilities)[::-1], spec[:r], atol=1e-10)
    mix = sum(
        p * np.outer(s.amplitudes, s.amplitudes.conj())
        for p, s in zip(ens.probabilities, ens.states)
    )
    assert np.max(np.abs(mix - rho.matrix)) < 1e-10


def test_dilated_reconstruction_seeded():
    rng = np.random.default_rng(97)
    rho = random_rank_k((2, 2), 2, rng)
    pur = purify(rho)
    r = pur.source_rank
    for _ in range(50):
        u = random_unitary(r * 2, rng)
        ens = dilated_ensemble(pur, u, 2)
        assert abs(float(np.sum(ens.probabilities)) - 1.0) < 1e-10
        mix = sum(
            p * np.outer(s.amplitudes, s.amplitudes.conj())
            for p, s in zip(ens.probabilities, ens.states)
        )
        assert np.max(np.abs(mix - rho.matrix)) < 1e-8


def test_dilated_rejects_bad_operator():
    rng = np.random.default_rng(101)
    rho = random_rank_k((2, 2), 2, rng)
    pur = purify(rho)
    with pytest.raises(ValueError):
        dilated_ensemble(pur, np.eye(2), 0)
    with pytest.raises(StateValidationError):
        dilated_ensemble(pur, np.eye(3), 2)
    bad = np.eye(4, dtype=complex)
    bad[0, 0] = 2.0
    with pytest.raises(StateValidationError):
        dilated_ensemble(pur, bad, 2)


def _complete_unitary(v: np.ndarray, positions, rng) -> np.ndarray:
    # unitary whose listed columns are the columns of v
    n = v.shape[0]
    u = np.zeros((n, n), dtype=complex)
    basis = []
    for col, pos in zip(v.T, positions):
        u[:, pos] = col
        basis.append(col)
    for j in range(n):
        if j in positions:
            continue
        w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        w /= np.linalg.norm(w)
        basis.append(w)
        u[:, j] = w
    return u


def test_dilated_matches_direct_ancilla_povm():
    # measuring the dilated basis is the same as applying the rank-1
    # POVM whose vectors are the conjugated isometry rows directly to
    # the purification ancilla
    rng = np.random.default_rng(103)
    rho = random_rank_k((2, 2), 2, rng)
    pur = purify(rho)
    r, d_e = pur.source_rank, 2
    n = r * d_e
    z = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    v, _ = np.linalg.qr(z)
    positions = [alpha * d_e for alpha in range(r)]
    u = _complete_unitary(v, positions, rng)
    ens = dilated_ensemble(pur, u, d_e)
    amps = pur.state.amplitudes.reshape(4, r)
    for j in range(n):
        psi = amps @ v[j, :]
        p = float(np.vdot(psi, psi).real)
        assert abs(ens.probabilities[j] - p) < 1e-12
        if p > 1e-12:
            overlap = abs(np.vdot(ens.states[j].amplitudes, psi / math.sqrt(p)))
            assert abs(overlap - 1.0) < 1e-10
