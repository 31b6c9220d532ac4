"""Stationary states after a sudden parameter change of the XY chain.

A global quench prepares the ground state of (gamma0, h0) and evolves it
with (gamma, h).  Every fermionic mode keeps its occupation, fixed by the
angle mismatch Delta_p between the two diagonalizing rotations:

    cos Delta_p = 4 [ (cos p - h0)(cos p - h) + gamma*gamma0*sin^2 p ]
                    / (eps(p) * eps0(p)).

The stationary nearest-neighbor correlations follow from the equilibrium
integrals with the thermal weight replaced by |cos Delta_p| (one effective
temperature per mode); the conserved postquench energy uses the signed
cos Delta_p.  For the XX chain (gamma = 0) the two Hamiltonians commute and
the substitution degenerates, so that case is handled by closed forms with
an explicit choice between the ideally isolated chain and the
gamma -> 0+ limit of a weakly open one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import QuadratureSpec, integrate, integrate_components
from .spectrum import ModelParams, dispersion, field_minus_cos
from .thermal import (
    CorrelationSums,
    NNCorrelations,
    OccupationWeight,
    correlation_sums,
    nn_correlations,
)

__all__ = [
    "QuenchParams",
    "DetectionInterval",
    "XX_ISOLATED",
    "XX_LIMIT",
    "cos_delta",
    "occupation",
    "effective_temperature",
    "postquench_energy_density",
    "gge_weight",
    "gge_correlations",
    "xx_quench_correlations",
    "boundary_integrals",
    "energy_detection_bounds",
]

XX_ISOLATED = "isolated"
XX_LIMIT = "gamma-to-zero-limit"


@dataclass(frozen=True)
class QuenchParams:
    """Pre-quench and post-quench Hamiltonian parameters."""

    gamma0: float
    h0: float
    gamma: float
    h: float

    def __post_init__(self):
        ModelParams(self.gamma0, self.h0)
        ModelParams(self.gamma, self.h)

    @property
    def pre(self) -> ModelParams:
        return ModelParams(self.gamma0, self.h0)

    @property
    def post(self) -> ModelParams:
        return ModelParams(self.gamma, self.h)


@dataclass(frozen=True)
class DetectionInterval:
    """Post-quench field window detected by the energy witness.

    ``branch`` records which analytic bound closes the window from above:
    'quadratic-branch' for h_plus, 'linear-branch' for the large-field bound,
    'empty' when no field is detected at all (bounds are nan then).
    """

    h_minus: float
    h_upper: float
    branch: str

    @property
    def is_empty(self) -> bool:
        return self.branch == "empty"

    @property
    def width(self) -> float:
        return 0.0 if self.is_empty else self.h_upper - self.h_minus

    def contains(self, h: float) -> bool:
        return (not self.is_empty) and self.h_minus < h < self.h_upper


def _angle_cos_factors(qp: QuenchParams, p):
    """(numerator, eps, eps0) of cos Delta_p, all vectorized."""
    p = np.asarray(p, dtype=float)
    fmc0 = -field_minus_cos(p, qp.h0)
    fmc = -field_minus_cos(p, qp.h)
    sin2 = np.sin(p) ** 2
    num = fmc0 * fmc + qp.gamma * qp.gamma0 * sin2
    return num, dispersion(qp.post, p), dispersion(qp.pre, p)


def _cos_delta_array(qp: QuenchParams, p) -> np.ndarray:
    num, eps, eps0 = _angle_cos_factors(qp, p)
    return np.clip(4.0 * num / (eps * eps0), -1.0, 1.0)


def cos_delta(qp: QuenchParams, p: float) -> float:
    """Cosine of the rotation-angle mismatch at momentum p, in [-1, 1]."""
    num, eps, eps0 = _angle_cos_factors(qp, p)
    if eps <= 0.0 or eps0 <= 0.0:
        raise ValueError("gapless mode: angle mismatch undefined where a gap closes")
    return float(np.clip(4.0 * num / (eps * eps0), -1.0, 1.0))


def occupation(qp: QuenchParams, p: float) -> float:
    """Occupation probability of mode p in the initial state, (1 - cos Delta)/2."""
    return 0.5 * (1.0 - cos_delta(qp, p))


def effective_temperature(qp: QuenchParams, p: float) -> float:
    """Per-mode effective temperature eps(p) / (2 artanh|cos Delta_p|).

    Saturated modes (|cos Delta| = 1) sit at zero temperature; a mode at
    half filling (cos Delta = 0) has no finite temperature and reports inf.
    """
    c = abs(cos_delta(qp, p))
    if c >= 1.0:
        return 0.0
    if c == 0.0:
        return math.inf
    return dispersion(qp.post, p) / (2.0 * math.atanh(c))


def _quench_breakpoints(qp: QuenchParams) -> tuple:
    # kinks of cos Delta_p sit where either dispersion closes inside (0, pi)
    pts = []
    if qp.gamma0 == 0.0 and qp.h0 < 1.0:
        pts.append(float(np.arccos(qp.h0)))
    if qp.gamma == 0.0 and qp.h < 1.0:
        pts.append(float(np.arccos(qp.h)))
    return tuple(sorted(set(pts)))


def postquench_energy_density(qp: QuenchParams, spec: QuadratureSpec | None = None) -> float:
    """Conserved energy per site of the postquench state.

    -(1/4pi) * Int eps(p) cos Delta_p dp; the eps factor cancels against the
    denominator of cos Delta_p, leaving 4*numerator/eps0, which stays finite
    through post-quench gap closures.
    """
    base = spec or QuadratureSpec()
    spec = QuadratureSpec(
        rel_tol=base.rel_tol,
        abs_tol=base.abs_tol,
        max_subdivisions=base.max_subdivisions,
        breakpoints=tuple(base.breakpoints) + _quench_breakpoints(qp),
    )

    def f(p):
        num, _, eps0 = _angle_cos_factors(qp, p)
        return 4.0 * num / eps0

    return -integrate(f, (0.0, np.pi), spec) / (2.0 * np.pi)


def gge_weight(qp: QuenchParams) -> OccupationWeight:
    """Stationary-state occupation weight |cos Delta_p| for the correlators."""

    def fn(p):
        return np.abs(_cos_delta_array(qp, p))

    def over_dispersion(p):
        # |cos Delta|/eps = |num| / ((eps^2/4) * eps0); numerator and
        # denominator vanish together at gap closures, the ratio stays finite
        p = np.asarray(p, dtype=float)
        fmc0 = -field_minus_cos(p, qp.h0)
        fmc = -field_minus_cos(p, qp.h)
        sin2 = np.sin(p) ** 2
        num = fmc0 * fmc + qp.gamma * qp.gamma0 * sin2
        eps_sq_quarter = (qp.gamma * np.sin(p)) ** 2 + fmc * fmc
        return np.abs(num) / (eps_sq_quarter * dispersion(qp.pre, p))

    return OccupationWeight(
        fn=fn,
        over_dispersion=over_dispersion,
        provenance="quench",
        saturated=False,
        breakpoints=_quench_breakpoints(qp),
    )


def gge_correlations(qp: QuenchParams, spec: QuadratureSpec | None = None) -> NNCorrelations:
    """Stationary nearest-neighbor correlations after the quench."""
    if qp.gamma == 0.0:
        raise ValueError(
            "gamma = 0 quenches conserve the initial state; use xx_quench_correlations"
        )
    return nn_correlations(correlation_sums(qp.post, gge_weight(qp), spec))


def xx_quench_correlations(h0: float, h: float, mode: str) -> NNCorrelations:
    """Stationary XX-chain correlations after a field quench h0 -> h.

    'isolated': the two Hamiltonians commute, so the chain simply keeps the
    ground-state correlations of the initial field h0.  'gamma-to-zero-limit':
    an arbitrarily weak environment relaxes every mode to zero effective
    temperature, leaving the ground-state correlations of the final field h.
    """
    if h0 < 0.0 or h < 0.0:
        raise ValueError("fields must be non-negative")
    if mode == XX_ISOLATED:
        field = h0
    elif mode == XX_LIMIT:
        field = h
    else:
        raise ValueError(f"unknown XX quench mode {mode!r}")
    if field >= 1.0:
        sums = CorrelationSums(g_c=0.0, g_s=0.0, g_0=1.0)
    else:
        sums = CorrelationSums(
            g_c=(2.0 / math.pi) * math.sqrt(1.0 - field * field),
            g_s=0.0,
            g_0=1.0 - 2.0 * math.acos(field) / math.pi,
        )
    return nn_correlations(sums)


def boundary_integrals(h0: float, gamma: float, spec: QuadratureSpec | None = None) -> tuple:
    """The two quadratures (I1, I2) that parametrize the detection window.

    I1 averages the initial-state polarization kernel, I2 the quench-energy
    kernel, both against the inverse pre-quench dispersion over [0, pi].
    """
    pre = ModelParams(gamma, h0)
    base = spec or QuadratureSpec(rel_tol=1e-13, abs_tol=1e-14)
    bps = (float(np.arccos(h0)),) if gamma == 0.0 and h0 < 1.0 else ()
    spec = QuadratureSpec(
        rel_tol=base.rel_tol,
        abs_tol=base.abs_tol,
        max_subdivisions=base.max_subdivisions,
        breakpoints=tuple(base.breakpoints) + bps,
    )

    def f(p):
        fmc0 = field_minus_cos(p, h0)
        eps0 = dispersion(pre, p)
        cosp = np.cos(p)
        i1 = 2.0 * fmc0 / eps0
        i2 = 2.0 * (cosp * cosp - h0 * cosp + (gamma * np.sin(p)) ** 2) / eps0
        return np.stack([i1, i2])

    i1, i2 = integrate_components(f, (0.0, np.pi), spec) / np.pi
    return float(i1), float(i2)


def energy_detection_bounds(h0: float, gamma: float, spec: QuadratureSpec | None = None) -> DetectionInterval:
    """Analytic post-quench field window detected by the energy witness.

    Detection requires -h*I1 - I2 (the post-quench energy per site) to drop
    below the product-state bound.  Below h = 1 + gamma the bound is
    quadratic in h, giving roots h_minus and h_plus; above it the bound is
    linear, giving the alternative ceiling I2/(1 - I1).  The ceilings agree
    exactly at h = 1 + gamma, so the window is h_minus..h_plus when the
    linear ceiling stays below 1 + gamma, and h_minus..I2/(1-I1) otherwise.
    """
    i1, i2 = boundary_integrals(h0, gamma, spec)
    g1 = 1.0 + gamma
    disc = i1 * i1 + 2.0 * i2 / g1 - 1.0
    if disc < 0.0:
        if disc < -1e-13:
            return DetectionInterval(h_minus=math.nan, h_upper=math.nan, branch="empty")
        disc = 0.0  # graze the bound: keep the degenerate window
    root = math.sqrt(disc)
    h_minus = (i1 - root) * g1
    h_plus = (i1 + root) * g1
    eta = 1.0 - i1
    if eta <= 1e-12:
        # I1 saturates only for the XX chain quenched from a polarized state,
        # where I2 vanishes too and the linear regime carries no window
        return DetectionInterval(h_minus=h_minus, h_upper=h_plus, branch="quadratic-branch")
    h_tilde = i2 / eta
    if h_tilde <= g1:
        return DetectionInterval(h_minus=h_minus, h_upper=h_plus, branch="quadratic-branch")
    return DetectionInterval(h_minus=h_minus, h_upper=h_tilde, branch="linear-branch")
