"""XY chain model parameters, free-fermion dispersion, and momentum grids.

The chain couples nearest neighbors with anisotropic XX/YY exchange of
strength (1+gamma)/2 and (1-gamma)/2 under a transverse field h; after the
fermionic mapping every momentum mode carries energy

    eps(p) = 2 * sqrt(gamma^2 sin^2 p + (h - cos p)^2).

The disorder line h^2 + gamma^2 = 1 plays a special role: there the mode
energy reduces to 2*(1 - h*cos p) and the ground state is an exact product
state with energy density -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import QuadratureSpec, integrate

__all__ = [
    "ModelParams",
    "MomentumGrid",
    "dispersion",
    "bogoliubov_cos_sin",
    "momentum_grid",
    "ground_energy_density",
    "disorder_field",
    "field_minus_cos",
]


@dataclass(frozen=True)
class ModelParams:
    """Anisotropy and transverse field of the XY chain Hamiltonian."""

    gamma: float
    h: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"anisotropy gamma={self.gamma} outside [0, 1]")
        if not self.h >= 0.0:
            raise ValueError(f"transverse field h={self.h} must be non-negative")


@dataclass(frozen=True)
class MomentumGrid:
    """Finite-chain momenta of one fermion-parity sector, sorted ascending."""

    sector: str
    length: int
    momenta: np.ndarray

    @property
    def positive(self) -> np.ndarray:
        return self.momenta[self.momenta > 0.0]

    @property
    def interior(self) -> np.ndarray:
        """Momenta strictly between 0 and pi (odd sector pairs)."""
        return self.momenta[(self.momenta > 0.0) & (self.momenta < np.pi - 1e-12)]


def field_minus_cos(p, h: float):
    """h - cos p, written to stay accurate near p = 0 when h is close to 1."""
    return (h - 1.0) + 2.0 * np.sin(0.5 * np.asarray(p, dtype=float)) ** 2


def dispersion(params: ModelParams, p):
    """Mode energy eps(p) >= 0; accepts scalars or arrays."""
    fmc = field_minus_cos(p, params.h)
    out = 2.0 * np.sqrt((params.gamma * np.sin(p)) ** 2 + fmc * fmc)
    return float(out) if np.isscalar(p) else out


def bogoliubov_cos_sin(params: ModelParams, p: float) -> tuple:
    """Cosine and sine of the rotation angle diagonalizing mode p.

    The branch is fixed by the two-argument arctangent of
    (-gamma*sin p, h - cos p); only the relative angle between two parameter
    sets enters observables, so any consistent branch would do.
    """
    if dispersion(params, p) <= 0.0:
        raise ValueError("gapless mode: rotation angle undefined where eps(p) = 0")
    theta = math.atan2(-params.gamma * math.sin(p), float(field_minus_cos(p, params.h)))
    return math.cos(theta), math.sin(theta)


def momentum_grid(L: int, sector: str) -> MomentumGrid:
    """Exact momenta of a periodic chain of even length L >= 4.

    even sector: p = +-pi*(2m-1)/L, m = 1..L/2
    odd sector:  q = 0, pi, +-2*pi*n/L, n = 1..L/2-1
    """
    if L < 4 or L % 2 != 0:
        raise ValueError(f"chain length L={L} must be even and at least 4")
    if sector == "even":
        m = np.arange(1, L // 2 + 1)
        pos = np.pi * (2 * m - 1) / L
        momenta = np.sort(np.concatenate([-pos, pos]))
    elif sector == "odd":
        n = np.arange(1, L // 2)
        pos = 2.0 * np.pi * n / L
        momenta = np.sort(np.concatenate([-pos, [0.0, np.pi], pos]))
    else:
        raise ValueError(f"unknown sector {sector!r}, expected 'even' or 'odd'")
    return MomentumGrid(sector=sector, length=L, momenta=momenta)


def ground_energy_density(params: ModelParams, spec: QuadratureSpec | None = None) -> float:
    """Ground-state energy per site in the thermodynamic limit.

    The limit of -(1/L) * sum_p eps(p)/2 over L equidistant momenta in
    [-pi, pi], i.e. -(1/4pi) * Int_{-pi}^{pi} eps(p) dp, using the even
    symmetry of eps to integrate over [0, pi] only.
    """
    base = spec or QuadratureSpec()
    if params.gamma == 0.0 and params.h < 1.0:
        # XX dispersion has a kink at the Fermi point
        spec = QuadratureSpec(
            rel_tol=base.rel_tol,
            abs_tol=base.abs_tol,
            max_subdivisions=base.max_subdivisions,
            breakpoints=tuple(base.breakpoints) + (float(np.arccos(params.h)),),
        )
    else:
        spec = base
    value = integrate(lambda p: dispersion(params, p), (0.0, np.pi), spec)
    return -value / (2.0 * np.pi)


def disorder_field(gamma: float) -> float:
    """Transverse field h_d(gamma) = sqrt(1 - gamma^2) of the disorder line."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"anisotropy gamma={gamma} outside [0, 1]")
    return math.sqrt(1.0 - gamma * gamma)
