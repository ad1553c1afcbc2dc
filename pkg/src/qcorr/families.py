"""Parametric state families with closed-form correlation measures.

Three families are covered: canonical three-qubit pure states (whose
two-qubit marginals have closed concurrences), a four-parameter family
of rank-2 states on a 4 x 2 system (whose purified pair state is an
X-class two-qubit state), and a two-qubit pure state decohering under
phase damping. Every closed form here is cross-checked elsewhere
against the generic engine and the brute-force searches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .discord import (
    METHOD_ANALYTIC,
    CorrelationReport,
    _x_state_measured_minimum,
)
from .pair_measures import (
    binary_entropy,
    eof_from_concurrence,
)
from .states import (
    DensityMatrix,
    PureState,
    StateValidationError,
    density_matrix,
    entropy_of_spectrum,
    partial_trace,
    pure_state,
)

SUM_TOL = 1e-12
SELF_CHECK_TOL = 1e-8


# --------------------------------------------------------------------------
# three-qubit pure states


@dataclass(frozen=True)
class ThreeQubitParams:
    """Canonical five-amplitude form of a three-qubit pure state."""

    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    phase: float = 0.0

    def __post_init__(self):
        lams = self.lambdas()
        if min(lams) < 0.0:
            raise StateValidationError("amplitudes must be nonnegative")
        total = sum(l * l for l in lams)
        if abs(total - 1.0) > SUM_TOL:
            raise StateValidationError(
                f"squared amplitudes sum to {total!r}, expected 1 within {SUM_TOL}"
            )

    def lambdas(self) -> Tuple[float, float, float, float, float]:
        return (self.lambda0, self.lambda1, self.lambda2, self.lambda3, self.lambda4)


def three_qubit_state(params: ThreeQubitParams) -> PureState:
    """l0|000> + l1 e^{i phase}|010> + l2|011> + l3|110> + l4|111>."""
    l0, l1, l2, l3, l4 = params.lambdas()
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = l0
    amps[0b010] = l1 * np.exp(1j * params.phase)
    amps[0b011] = l2
    amps[0b110] = l3
    amps[0b111] = l4
    return pure_state(amps, (2, 2, 2))


def three_qubit_concurrences(params: ThreeQubitParams) -> Tuple[float, float, float]:
    """(C_AB, C_BC, C_AC) of the three two-qubit marginals, closed form."""
    l0, l1, l2, l3, l4 = params.lambdas()
    c_ab = 2.0 * l0 * l3
    c_bc = 2.0 * l0 * l2
    c_ac = 2.0 * abs(l2 * l3 - l1 * l4 * np.exp(1j * params.phase))
    return (c_ab, c_bc, c_ac)


def symmetric_discord_candidates(params: ThreeQubitParams) -> Tuple[float, float]:
    """Two closed-form candidates for Q_AB = E(rho_AB) when lambda2 == lambda3.

    Both have the shape -sum (1 +- D)/2 log2 (1 +- D)/2 and differ in the
    discriminant: the first uses D = sqrt(1 - 4 l0^2 l2^2), consistent
    with the marginal concurrence 2 l0 l2; the second uses
    D = sqrt(1 - l0^2 l2^2). Only the first matches the brute-force
    optimum (see the verification suite, which records the arbitration).
    """
    if abs(params.lambda2 - params.lambda3) > SUM_TOL:
        raise StateValidationError("closed form requires lambda2 == lambda3")
    prod = (params.lambda0 * params.lambda2) ** 2
    composed = binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * prod))))
    literal = binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - prod))))
    return (composed, literal)


def symmetric_discord(params: ThreeQubitParams) -> float:
    """Certified closed form for Q_AB = E(rho_AB) at lambda2 == lambda3."""
    return symmetric_discord_candidates(params)[0]


_PAIR_INDICES = {"AB": (0, 1), "BC": (1, 2), "AC": (0, 2)}


def _pair_key(x: str, y: str) -> str:
    return "".join(sorted((x, y)))


def three_qubit_report(
    params: ThreeQubitParams, pair: str, measured: str
) -> CorrelationReport:
    """Correlation report for one two-qubit marginal of the pure state.

    The third party acts as purifying ancilla, so the measured
    conditional entropy equals the closed-form entanglement of the
    unmeasured-party/ancilla marginal; projective measurements attain it
    (the optimal decompositions have two members), hence both discord
    variants coincide. When lambda2 == lambda3 the AB-discord must equal
    the AB-entanglement, and the report verifies that before returning.
    """
    if pair not in _PAIR_INDICES:
        raise ValueError(f"pair must be one of {sorted(_PAIR_INDICES)}, got {pair!r}")
    if measured not in pair:
        raise ValueError(f"measured party {measured!r} is not in pair {pair!r}")
    unmeasured = pair[1] if pair[0] == measured else pair[0]
    third = ({"A", "B", "C"} - set(pair)).pop()

    conc = dict(zip(("AB", "BC", "AC"), three_qubit_concurrences(params)))
    proj = three_qubit_state(params).projector()
    marg = {
        label: partial_trace(proj, idx)
        for label, idx in zip("ABC", ((0,), (1,), (2,)))
    }
    s_single = {
        label: entropy_of_spectrum(np.linalg.eigvalsh(m.matrix))
        for label, m in marg.items()
    }
    s_first = s_single[pair[0]]
    s_second = s_single[pair[1]]
    s_pair = s_single[third]  # purity: the pair spectrum equals the third party's
    s_measured = s_single[measured]
    s_unmeasured = s_single[unmeasured]

    cond = eof_from_concurrence(conc[_pair_key(unmeasured, third)])
    e_pair = eof_from_concurrence(conc[pair])
    q = s_measured + cond - s_pair
    mutual = s_first + s_second - s_pair
    classical_j = s_unmeasured - cond

    # trilateral consistency: Q(pair) - E(pair) = Q(measured,third)
    # - Q(third,measured), all terms closed-form
    q_mt = s_measured + cond - s_unmeasured
    q_tm = s_single[third] + e_pair - s_unmeasured
    residual = abs((q - e_pair) - (q_mt - q_tm))

    if (
        abs(params.lambda2 - params.lambda3) <= SUM_TOL
        and pair == "AB"
        and measured == "A"
        and abs(q - e_pair) > SELF_CHECK_TOL
    ):
        raise RuntimeError(
            f"symmetric case expects Q_AB = E_AB, got difference {q - e_pair:.3e}"
        )

    return CorrelationReport(
        S_A=s_first,
        S_B=s_second,
        S_AB=s_pair,
        mutual_information=mutual,
        classical_J=classical_j,
        discord_I=q,
        discord_II=q,
        eof_AB=e_pair,
        eof_d_component=e_pair,
        duality_residual=residual,
        method=METHOD_ANALYTIC,
    )


# --------------------------------------------------------------------------
# rank-2 states on 4 x 2


@dataclass(frozen=True)
class Rank2Params:
    """Mixing weights and angles of the rank-2 4 x 2 family."""

    p1: float
    p2: float
    phi: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise StateValidationError("weights must lie in [0, 1]")
        if abs(self.p1 + self.p2 - 1.0) > SUM_TOL:
            raise StateValidationError(
                f"weights sum to {self.p1 + self.p2!r}, expected 1 within {SUM_TOL}"
            )


def _rank2_vectors(params: Rank2Params):
    c, s = math.cos(params.phi), math.sin(params.phi)
    psi1 = np.zeros(8, dtype=complex)
    psi1[0] = c  # |0>_A |0>_B
    psi1[3] = s  # |1>_A |1>_B
    psi2 = np.zeros(8, dtype=complex)
    psi2[2] = s * math.cos(params.theta1)  # |1>_A |0>_B
    psi2[4] = s * math.sin(params.theta1)  # |2>_A |0>_B
    psi2[1] = c * math.cos(params.theta2)  # |0>_A |1>_B
    psi2[7] = c * math.sin(params.theta2)  # |3>_A |1>_B
    return psi1, psi2


def rank2_state(params: Rank2Params) -> DensityMatrix:
    """p1 |psi1><psi1| + p2 |psi2><psi2| on dims (4, 2).

    |psi1> = cos(phi)|00> + sin(phi)|11> and |psi2> = sin(phi)|a3 0> +
    cos(phi)|a4 1>, with |a3> = cos(theta1)|1> + sin(theta1)|2> and
    |a4> = cos(theta2)|0> + sin(theta2)|3>; the two vectors are
    orthogonal by construction, so they are the eigenvectors.
    """
    psi1, psi2 = _rank2_vectors(params)
    m = params.p1 * np.outer(psi1, psi1.conj()) + params.p2 * np.outer(psi2, psi2.conj())
    return density_matrix(m, (4, 2))


def rank2_purification(params: Rank2Params) -> PureState:
    """sqrt(p1)|psi1>|0_C> + sqrt(p2)|psi2>|1_C> on dims (4, 2, 2)."""
    psi1, psi2 = _rank2_vectors(params)
    amps = np.zeros((8, 2), dtype=complex)
    amps[:, 0] = math.sqrt(params.p1) * psi1
    amps[:, 1] = math.sqrt(params.p2) * psi2
    return pure_state(amps.reshape(-1), (4, 2, 2))


def rank2_bc_xstate(params: Rank2Params) -> DensityMatrix:
    """The X-class pair state of the unmeasured qubit and the ancilla.

    In the product basis |b c> the nonzero elements are the diagonal
    (p1 cos^2 phi, p2 sin^2 phi, p1 sin^2 phi, p2 cos^2 phi), the outer
    corner sqrt(p1 p2) cos^2 phi cos(theta2), and the inner corner
    sqrt(p1 p2) sin^2 phi cos(theta1). Equals the partial trace of the
    explicit purification over the 4-dimensional party.
    """
    c2 = math.cos(params.phi) ** 2
    s2 = math.sin(params.phi) ** 2
    root = math.sqrt(params.p1 * params.p2)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = params.p1 * c2
    m[1, 1] = params.p2 * s2
    m[2, 2] = params.p1 * s2
    m[3, 3] = params.p2 * c2
    m[0, 3] = m[3, 0] = root * c2 * math.cos(params.theta2)
    m[1, 2] = m[2, 1] = root * s2 * math.cos(params.theta1)
    return density_matrix(m, (2, 2))


def rank2_spectrum(params: Rank2Params) -> np.ndarray:
    """Four marginal eigenvalues of the 4-dimensional party, closed form."""
    s2 = math.sin(params.phi) ** 2
    c2 = math.cos(params.phi) ** 2
    four_p = 4.0 * params.p1 * params.p2
    r1 = math.sqrt(max(0.0, 1.0 - four_p * math.sin(params.theta1) ** 2))
    r2 = math.sqrt(max(0.0, 1.0 - four_p * math.sin(params.theta2) ** 2))
    return np.array(
        [
            0.5 * s2 * (1.0 + r1),
            0.5 * s2 * (1.0 - r1),
            0.5 * c2 * (1.0 + r2),
            0.5 * c2 * (1.0 - r2),
        ]
    )


def rank2_wootters_lambdas(params: Rank2Params) -> np.ndarray:
    """Spin-flip singular values of the pair state, closed form."""
    s2 = math.sin(params.phi) ** 2
    c2 = math.cos(params.phi) ** 2
    mixer = math.sqrt(max(0.0, 1.0 - (params.p1 - params.p2) ** 2))
    root = 2.0 * math.sqrt(params.p1 * params.p2)
    return np.array(
        [
            0.5 * s2 * (mixer + root * math.cos(params.theta1)),
            0.5 * s2 * (mixer - root * math.cos(params.theta1)),
            0.5 * c2 * (mixer + root * math.cos(params.theta2)),
            0.5 * c2 * (mixer - root * math.cos(params.theta2)),
        ]
    )


def rank2_pair_concurrence(params: Rank2Params) -> float:
    lam = rank2_wootters_lambdas(params)
    return float(max(0.0, 2.0 * np.max(np.abs(lam)) - np.sum(np.abs(lam))))


def rank2_chi(params: Rank2Params) -> Tuple[float, float, float, float]:
    """(chi1, chi2, chi3, chi): branch values and their max magnitude.

    These feed the balanced-mixing entanglement closed form
    E = h((1 + chi)/2), valid at p1 = p2 = 1/2.
    """
    c2 = math.cos(params.phi) ** 2
    s2 = math.sin(params.phi) ** 2
    chi1 = -math.cos(2.0 * params.phi)
    chi2 = c2 * math.cos(params.theta2) + s2 * math.cos(params.theta1)
    chi3 = c2 * math.cos(params.theta2) - s2 * math.cos(params.theta1)
    chi = max(abs(chi1), abs(chi2), abs(chi3))
    return (chi1, chi2, chi3, chi)


def rank2_discord(params: Rank2Params) -> float:
    """Q_AB with the 4-dimensional party measured, fully closed form.

    The measured conditional entropy equals the pair-state entanglement
    obtained from the spin-flip values; the marginal and total entropies
    come from the closed spectra.
    """
    s_a = entropy_of_spectrum(rank2_spectrum(params))
    s_ab = binary_entropy(params.p1)
    e_bc = eof_from_concurrence(rank2_pair_concurrence(params))
    return s_a + e_bc - s_ab


def rank2_eof(params: Rank2Params) -> float:
    """E(rho_AB): balanced closed form, or the X-state scan off balance.

    At p1 = p2 = 1/2 this is h((1 + chi)/2); otherwise the entanglement
    is recovered as the minimal conditional entropy of the X-class pair
    state measured on the ancilla qubit.
    """
    if abs(params.p1 - params.p2) <= SUM_TOL:
        return binary_entropy(0.5 * (1.0 + rank2_chi(params)[3]))
    return _x_state_measured_minimum(rank2_bc_xstate(params), measured=1)


@dataclass(frozen=True)
class Rank2Report:
    """Closed-form characterization of one rank-2 family member."""

    rho_A_spectrum: np.ndarray
    wootters_lambdas: np.ndarray
    chi_values: Tuple[float, float, float]
    chi: float
    discord: float
    eof: float


def rank2_report(params: Rank2Params) -> Rank2Report:
    spectrum = rank2_spectrum(params)
    lams = rank2_wootters_lambdas(params)
    chi1, chi2, chi3, chi = rank2_chi(params)
    return Rank2Report(
        rho_A_spectrum=spectrum,
        wootters_lambdas=lams,
        chi_values=(chi1, chi2, chi3),
        chi=chi,
        discord=rank2_discord(params),
        eof=rank2_eof(params),
    )


FIG1_THETA1 = 0.0
FIG1_THETA2 = math.pi / 3.0


def fig1_params(sin2_phi: float) -> Rank2Params:
    """Balanced-mixing family member on the standard sweep line."""
    return Rank2Params(
        p1=0.5,
        p2=0.5,
        phi=math.asin(math.sqrt(sin2_phi)),
        theta1=FIG1_THETA1,
        theta2=FIG1_THETA2,
    )


def fig1_curve(points: int = 400) -> np.ndarray:
    """Rows (sin^2 phi, Q_AB, E_AB) on a uniform grid over [0, 1]."""
    rows = np.zeros((points, 3))
    for i, u in enumerate(np.linspace(0.0, 1.0, points)):
        p = fig1_params(u)
        rows[i] = (u, rank2_discord(p), rank2_eof(p))
    return rows


# --------------------------------------------------------------------------
# phase damping


@dataclass(frozen=True)
class PhaseDampingParams:
    """Initial Schmidt weight and damping probability p = 1 - e^{-gamma t}."""

    alpha_sq: float
    p: float

    def __post_init__(self):
        if not 0.0 <= self.alpha_sq <= 1.0:
            raise StateValidationError("alpha_sq must lie in [0, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise StateValidationError("p must lie in [0, 1]")

    @classmethod
    def from_gamma_t(cls, alpha_sq: float, gamma_t: float) -> "PhaseDampingParams":
        if gamma_t < 0.0:
            raise StateValidationError("gamma_t must be nonnegative")
        return cls(alpha_sq=alpha_sq, p=1.0 - math.exp(-gamma_t))

    @property
    def gamma_t(self) -> float:
        if self.p >= 1.0:
            return math.inf
        return -math.log(1.0 - self.p)


def phase_damping_state(params: PhaseDampingParams) -> DensityMatrix:
    """Dephased alpha|00> + beta|11>: off-diagonals scaled by 1 - p."""
    a2 = params.alpha_sq
    b2 = 1.0 - a2
    off = math.sqrt(a2 * b2) * (1.0 - params.p)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = a2
    m[3, 3] = b2
    m[0, 3] = m[3, 0] = off
    return density_matrix(m, (2, 2))


def phase_damping_spectrum(params: PhaseDampingParams) -> Tuple[float, float]:
    """Two nonzero eigenvalues 1/2 +- sqrt(1/4 - |ab|^2 (1 - (1-p)^2))."""
    a2 = params.alpha_sq
    prod = a2 * (1.0 - a2)
    k = 1.0 - params.p
    disc = math.sqrt(max(0.0, 0.25 - prod * (1.0 - k * k)))
    return (0.5 + disc, 0.5 - disc)


def phase_damping_concurrence(params: PhaseDampingParams) -> float:
    """C = 2 |alpha beta| (1 - p)."""
    a2 = params.alpha_sq
    return 2.0 * math.sqrt(a2 * (1.0 - a2)) * (1.0 - params.p)


def phase_damping_report(params: PhaseDampingParams) -> CorrelationReport:
    """Closed-form correlation report along the dephasing trajectory.

    Both marginals stay diagonal with entropy h(alpha_sq). The pair of
    the unmeasured qubit with the purifying ancilla is separable, so the
    measured conditional entropy vanishes for either variant and the
    discord reduces to S(rho_A) - S(rho_AB); the report verifies that
    separability through the spin-flip values of the explicitly
    constructed purification marginal.
    """
    from .pair_measures import concurrence_two_qubit
    from .states import purify

    s_a = binary_entropy(params.alpha_sq)
    s_b = s_a
    s_ab = entropy_of_spectrum(np.array(phase_damping_spectrum(params)))
    q = s_a - s_ab
    e_ab = eof_from_concurrence(phase_damping_concurrence(params))

    rho = phase_damping_state(params)
    if rho.rank() > 1:
        pair = partial_trace(purify(rho).state.projector(), (1, 2))
        if pair.dims == (2, 2):
            c_pair = concurrence_two_qubit(pair)
            if c_pair > 1e-10:
                raise RuntimeError(
                    f"unmeasured/ancilla pair should be separable, got C={c_pair:.3e}"
                )

    # trilateral pieces: the measured/ancilla marginal is separable too,
    # so Q_AC = S_A - S_B = 0 and Q_CA = S_AB + E_AB - S_B
    q_ac = s_a - s_b
    q_ca = s_ab + e_ab - s_b
    residual = abs((q - e_ab) - (q_ac - q_ca))

    return CorrelationReport(
        S_A=s_a,
        S_B=s_b,
        S_AB=s_ab,
        mutual_information=s_a + s_b - s_ab,
        classical_J=s_b,
        discord_I=q,
        discord_II=q,
        eof_AB=e_ab,
        eof_d_component=e_ab,
        duality_residual=residual,
        method=METHOD_ANALYTIC,
    )


def fig2_grid(points: int = 101) -> np.ndarray:
    """Rows (alpha_sq, p, Q_AB, E_AB, eta) on a uniform grid, closed form.

    eta = E_AB - Q_AB; rows iterate alpha_sq in the outer loop and p in
    the inner loop.
    """
    axis = np.linspace(0.0, 1.0, points)
    rows = np.zeros((points * points, 5))
    k = 0
    for a2 in axis:
        s_a = binary_entropy(a2)
        prod = a2 * (1.0 - a2)
        for p in axis:
            damp = 1.0 - p
            disc = math.sqrt(max(0.0, 0.25 - prod * (1.0 - damp * damp)))
            s_ab = entropy_of_spectrum(np.array([0.5 + disc, 0.5 - disc]))
            q = s_a - s_ab
            e = eof_from_concurrence(2.0 * math.sqrt(prod) * damp)
            rows[k] = (a2, p, q, e, e - q)
            k += 1
    return rows
