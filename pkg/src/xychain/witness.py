"""Entanglement detection machinery for nearest-neighbor pairs.

Two independent detectors are provided.  The energy-based witness compares
the energy per site against the minimum attainable by product states; any
state below that bound is entangled.  The negativity-based detectors work on
the structured two-qubit reduced density matrix: its partial transpose is
block diagonal, the two candidate minimal eigenvalues mu1 and mu2 come out
in closed form from the correlators, and a one-parameter family of witness
operators whose minimum reproduces mu1 exactly.

Basis convention for the pair: |1> = up-up, |2> = up-down, |3> = down-up,
|4> = down-down.  The symmetry class of the chain forces the X-shaped zero
pattern, rho22 = rho33, and real entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .spectrum import ModelParams
from .thermal import NNCorrelations

__all__ = [
    "DETECTION_THRESHOLD",
    "TwoQubitState",
    "PTEigenvalues",
    "DetectionRecord",
    "separable_energy_density",
    "energy_witness_density",
    "two_qubit_from_correlations",
    "pt_eigen",
    "negativity",
    "witness_family_expectation",
    "min_witness_family",
    "detection_record",
]

# a witness value counts as a detection only below this margin, so boundary
# states (disorder line) classify as undetected despite roundoff
DETECTION_THRESHOLD = 1e-10

_PSD_TOL = 1e-10


@dataclass(frozen=True)
class TwoQubitState:
    """Independent entries of the symmetric nearest-neighbor density matrix.

    rho33 = rho22 and rho41 = rho14, rho32 = rho23 are implied.
    """

    rho11: float
    rho14: float
    rho22: float
    rho23: float
    rho44: float


@dataclass(frozen=True)
class PTEigenvalues:
    """Minimal eigenvalues of the two partial-transpose blocks."""

    mu1: float
    mu2: float

    @property
    def mu_min(self) -> float:
        return min(self.mu1, self.mu2)


@dataclass(frozen=True)
class DetectionRecord:
    """Witness values with their detection flags for one parameter point."""

    energy_witness: float
    mu1: float
    mu2: float
    negativity: float
    energy_detected: bool
    neg_mu1_detected: bool
    neg_mu2_detected: bool


def separable_energy_density(params: ModelParams) -> float:
    """Minimum energy per site over product states.

    The optimum tilts every spin by the same polar angle; for fields beyond
    1 + gamma the fully polarized state wins.
    """
    g1 = 1.0 + params.gamma
    if params.h <= g1:
        return -(g1 * g1 + params.h * params.h) / (2.0 * g1)
    return -params.h


def energy_witness_density(params: ModelParams, energy_density: float) -> float:
    """Per-site energy witness: negative values certify entanglement."""
    return energy_density - separable_energy_density(params)


def two_qubit_from_correlations(corr: NNCorrelations) -> TwoQubitState:
    """Reconstruct the nearest-neighbor density matrix from correlators.

    Raises if the numbers cannot come from a positive semidefinite matrix of
    the symmetry class (beyond a 1e-10 numerical allowance).
    """
    rho22 = (1.0 - corr.zz) / 4.0
    rho14 = (corr.xx - corr.yy) / 4.0
    rho23 = (corr.xx + corr.yy) / 4.0
    rho11 = (1.0 + corr.zz) / 4.0 + corr.z / 2.0
    rho44 = (1.0 + corr.zz) / 4.0 - corr.z / 2.0

    if min(rho11, rho22, rho44) < -_PSD_TOL:
        raise ValueError("inconsistent correlations: negative diagonal weight")
    if rho11 * rho44 - rho14 * rho14 < -_PSD_TOL:
        raise ValueError("inconsistent correlations: up-up/down-down block not PSD")
    if rho22 - abs(rho23) < -_PSD_TOL:
        raise ValueError("inconsistent correlations: up-down/down-up block not PSD")
    return TwoQubitState(rho11=rho11, rho14=rho14, rho22=rho22, rho23=rho23, rho44=rho44)


def pt_eigen(corr: NNCorrelations) -> PTEigenvalues:
    """Minimal eigenvalues of the two 2x2 blocks of the partial transpose.

    mu2 lives in the block mixing the aligned pair states through rho14 and
    is linear in the correlators; mu1 mixes the aligned populations through
    rho23 and picks up the square root.  Translation invariance is assumed,
    so both sites share the same magnetization z.
    """
    mu2 = -(corr.xx - corr.yy + corr.zz - 1.0) / 4.0
    mu1 = (corr.zz + 1.0) / 4.0 - 0.25 * math.hypot(2.0 * corr.z, corr.xx + corr.yy)
    return PTEigenvalues(mu1=mu1, mu2=mu2)


def negativity(eig: PTEigenvalues) -> float:
    """Entanglement negativity, 2*max(0, -mu_min); zero iff separable."""
    return 2.0 * max(0.0, -eig.mu_min)


def witness_family_expectation(state: TwoQubitState, p: float) -> float:
    """Expectation of the p-th member of the negativity witness family.

    The family is built from superpositions of the two aligned pair states
    with weights sqrt(p) and -sqrt(1-p); its expectation is the quadratic
    form of that vector on the aligned block of the partial transpose, whose
    off-diagonal element is rho23.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p={p} outside [0, 1]")
    return (
        p * state.rho11
        + (1.0 - p) * state.rho44
        - 2.0 * math.sqrt(p * (1.0 - p)) * state.rho23
    )


def min_witness_family(state: TwoQubitState) -> tuple:
    """Optimal mixing parameter and minimal value over the witness family.

    The quadratic form is minimized in closed form; the minimum equals the
    smallest eigenvalue of the aligned partial-transpose block, i.e. mu1.
    """
    a, b, c = state.rho11, state.rho44, state.rho23
    d = math.hypot(a - b, 2.0 * c)
    if d == 0.0:
        return 0.5, a
    p_star = 0.5 * (1.0 + (b - a) / d)
    p_star = min(1.0, max(0.0, p_star))
    return p_star, 0.5 * (a + b) - 0.5 * d


def detection_record(params: ModelParams, energy_density: float, corr: NNCorrelations) -> DetectionRecord:
    """Bundle both witnesses for a state given its energy and correlators."""
    w_e = energy_witness_density(params, energy_density)
    eig = pt_eigen(corr)
    return DetectionRecord(
        energy_witness=w_e,
        mu1=eig.mu1,
        mu2=eig.mu2,
        negativity=negativity(eig),
        energy_detected=w_e < -DETECTION_THRESHOLD,
        neg_mu1_detected=eig.mu1 < -DETECTION_THRESHOLD,
        neg_mu2_detected=eig.mu2 < -DETECTION_THRESHOLD,
    )
