"""Detection surfaces: temperature bounds, finite-size corrections, quench maps.

For thermal states each witness defines a temperature bound below which the
state is detected as entangled.  The energy witness is monotone in T (the
energy rises with temperature), so its bound comes from plain bisection; the
minimal partial-transpose eigenvalue is not provably monotone, so its bracket
is pre-scanned for the last sign change before bisecting.  Quench detection
regions are dense (h0, h) grids of per-cell witness evaluations.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import oracle
from .numerics import DecayFit, QuadratureSpec, RootBracket, bisect, fit_decay
from .quench import (
    XX_ISOLATED,
    XX_LIMIT,
    QuenchParams,
    gge_correlations,
    postquench_energy_density,
    xx_quench_correlations,
)
from .spectrum import ModelParams, ground_energy_density
from .thermal import (
    correlation_sums,
    energy_density_thermal,
    finite_energy_thermal,
    finite_ground_energy,
    nn_correlations,
    thermal_weight,
)
from .witness import (
    DETECTION_THRESHOLD,
    energy_witness_density,
    pt_eigen,
    separable_energy_density,
)

__all__ = [
    "TemperatureBound",
    "RegionCell",
    "FiniteSizeStudy",
    "temperature_bound_energy",
    "temperature_bound_negativity",
    "temperature_bound_energy_finite",
    "temperature_bound_negativity_finite",
    "finite_size_study",
    "classify_quench",
    "quench_region_map",
]

# tight quadrature for bound searches: bisection targets ~1e-12 in T, so the
# witness values feeding it need another two digits of headroom
_BOUND_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-13)
_MAX_DOUBLINGS = 10
_ED_STATUS_T = 1e-6  # proxy temperature for the T -> 0 status of ED bounds


@dataclass(frozen=True)
class TemperatureBound:
    """Bound value plus how it was classified.

    'positive': genuine T > 0 crossing; 'zero': the T = 0 witness already
    sits on the boundary (within threshold); 'undetected-at-T0': even the
    ground state is not detected.
    """

    value: float
    status: str


@dataclass(frozen=True)
class RegionCell:
    """One grid point of a quench detection map."""

    h0: float
    h: float
    energy_witness: float
    mu1: float
    mu2: float
    energy_detected: bool
    neg_mu1_detected: bool
    neg_mu2_detected: bool
    status: str = "ok"


@dataclass(frozen=True)
class FiniteSizeStudy:
    """Finite-size corrections dT(L) with their fitted decay law."""

    samples: tuple
    fit: DecayFit
    bound_infinite: float


def _zero_bound(witness_at_zero: float) -> TemperatureBound:
    status = "zero" if witness_at_zero <= DETECTION_THRESHOLD else "undetected-at-T0"
    return TemperatureBound(value=0.0, status=status)


def _expand_bracket(witness, t_init: float) -> float:
    t_hi = t_init
    for _ in range(_MAX_DOUBLINGS + 1):
        if witness(t_hi) > 0.0:
            return t_hi
        t_hi *= 2.0
    raise RuntimeError(f"witness still negative after expanding bracket to {t_hi / 2.0}")


def _scan_last_crossing(witness, t_hi: float, points: int = 17) -> tuple:
    """Narrow [0, t_hi] to the last sign change of a possibly wiggly witness."""
    ts = np.linspace(0.0, t_hi, points)
    vals = np.array([-1.0] + [witness(t) for t in ts[1:]])
    negative = np.nonzero(vals < 0.0)[0]
    k = negative[-1]
    return ts[k], ts[min(k + 1, points - 1)]


def temperature_bound_energy(params: ModelParams, x_tol: float = 1e-12) -> TemperatureBound:
    """Temperature below which the thermal energy beats the product-state bound."""
    e_sep = separable_energy_density(params)
    w0 = ground_energy_density(params, _BOUND_SPEC) - e_sep
    if w0 >= -DETECTION_THRESHOLD:
        return _zero_bound(abs(w0))

    def witness(T: float) -> float:
        return energy_density_thermal(params, T, _BOUND_SPEC) - e_sep

    t_hi = _expand_bracket(witness, 1.0 + params.gamma + params.h)
    root = bisect(witness, RootBracket(0.0, t_hi, f_tol=1e-300, x_tol=x_tol))
    return TemperatureBound(value=root, status="positive")


def temperature_bound_negativity(params: ModelParams, x_tol: float = 1e-12) -> TemperatureBound:
    """Temperature below which the thermal pair state has nonzero negativity."""

    def witness(T: float) -> float:
        corr = nn_correlations(correlation_sums(params, thermal_weight(params, T), _BOUND_SPEC))
        return pt_eigen(corr).mu_min

    w0 = witness(0.0)
    if w0 >= -DETECTION_THRESHOLD:
        return _zero_bound(abs(w0))
    t_hi = _expand_bracket(witness, 1.0 + params.gamma + params.h)
    lo, hi = _scan_last_crossing(witness, t_hi)
    root = bisect(witness, RootBracket(lo, hi, f_tol=1e-300, x_tol=x_tol))
    return TemperatureBound(value=root, status="positive")


def temperature_bound_energy_finite(
    params: ModelParams, L: int, x_tol: float = 1e-12
) -> TemperatureBound:
    """Energy-witness bound of a finite periodic chain (per-site comparison)."""
    e_sep = separable_energy_density(params)
    w0 = finite_ground_energy(params, L) / L - e_sep
    if w0 >= -DETECTION_THRESHOLD:
        return _zero_bound(abs(w0))

    def witness(T: float) -> float:
        return finite_energy_thermal(params, T, L) / L - e_sep

    t_hi = _expand_bracket(witness, 1.0 + params.gamma + params.h)
    root = bisect(witness, RootBracket(0.0, t_hi, f_tol=1e-300, x_tol=x_tol))
    return TemperatureBound(value=root, status="positive")


def temperature_bound_negativity_finite(
    params: ModelParams, L: int, x_tol: float = 1e-10
) -> TemperatureBound:
    """Negativity bound of a finite chain from the exact-diagonalization oracle."""
    if L > 12:
        raise ValueError("finite negativity bounds use exact diagonalization: L <= 12")
    reducer = oracle.ThermalTwoQubitReducer(oracle.build_hamiltonian(params, L))

    def witness(T: float) -> float:
        return float(oracle.ed_pt_eigenvalues(reducer.at_temperature(T))[0])

    w0 = witness(_ED_STATUS_T)
    if w0 >= -DETECTION_THRESHOLD:
        return _zero_bound(abs(w0))
    t_hi = _expand_bracket(witness, 1.0 + params.gamma + params.h)
    lo, hi = _scan_last_crossing(witness, t_hi)
    lo = max(lo, _ED_STATUS_T)
    root = bisect(witness, RootBracket(lo, hi, f_tol=1e-300, x_tol=x_tol))
    return TemperatureBound(value=root, status="positive")


def finite_size_study(params: ModelParams, L_list: Sequence[int]) -> FiniteSizeStudy:
    """Corrections dT_E(L) = T_E(L) - T_E with a fitted decay law.

    Negative or vanishing corrections signal lengths past the numerical
    floor of the bound computation and are rejected.
    """
    t_inf = temperature_bound_energy(params, x_tol=1e-13)
    if t_inf.status != "positive":
        raise ValueError("finite-size study needs a positive thermodynamic bound")
    samples = []
    for L in L_list:
        t_l = temperature_bound_energy_finite(params, L, x_tol=1e-13)
        dt = t_l.value - t_inf.value
        if dt <= 0.0:
            raise ValueError(
                f"non-positive correction at L={L}: beyond the numerical floor"
            )
        samples.append((int(L), dt))
    return FiniteSizeStudy(
        samples=tuple(samples), fit=fit_decay(samples), bound_infinite=t_inf.value
    )


def classify_quench(qp: QuenchParams, xx_mode: str = XX_LIMIT) -> RegionCell:
    """Evaluate both witnesses on the stationary state of one quench."""
    e_sep = separable_energy_density(qp.post)
    if qp.gamma == 0.0:
        if xx_mode == XX_LIMIT:
            # weak opening relaxes the chain into the post-quench ground state
            energy = ground_energy_density(qp.post)
        else:
            energy = postquench_energy_density(qp)
        corr = xx_quench_correlations(qp.h0, qp.h, xx_mode)
    else:
        energy = postquench_energy_density(qp)
        corr = gge_correlations(qp)
    w_e = energy - e_sep
    eig = pt_eigen(corr)
    return RegionCell(
        h0=qp.h0,
        h=qp.h,
        energy_witness=w_e,
        mu1=eig.mu1,
        mu2=eig.mu2,
        energy_detected=w_e < -DETECTION_THRESHOLD,
        neg_mu1_detected=eig.mu1 < -DETECTION_THRESHOLD,
        neg_mu2_detected=eig.mu2 < -DETECTION_THRESHOLD,
    )


def _region_row(task) -> list:
    gamma, h0, h_values, xx_mode = task
    row = []
    for h in h_values:
        try:
            row.append(classify_quench(QuenchParams(gamma, h0, gamma, h), xx_mode))
        except Exception as exc:  # record the failure, keep sweeping
            row.append(
                RegionCell(
                    h0=h0,
                    h=h,
                    energy_witness=np.nan,
                    mu1=np.nan,
                    mu2=np.nan,
                    energy_detected=False,
                    neg_mu1_detected=False,
                    neg_mu2_detected=False,
                    status=f"error: {exc}",
                )
            )
    return row


def quench_region_map(
    gamma: float,
    h0_range: tuple = (0.0, 2.0),
    h_range: tuple = (0.0, 2.0),
    resolution: int = 201,
    threads: int = 1,
    xx_mode: str = XX_LIMIT,
) -> list:
    """Dense (h0, h) grid of quench detection cells, h0-major.

    Rows are assembled in grid order whatever the worker count, so the output
    is byte-for-byte reproducible under ``threads``.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if h0_range[1] <= h0_range[0] or h_range[1] <= h_range[0]:
        raise ValueError("ranges must be increasing")
    h0_values = np.linspace(h0_range[0], h0_range[1], resolution)
    h_values = np.linspace(h_range[0], h_range[1], resolution)
    tasks = [(gamma, float(h0), h_values, xx_mode) for h0 in h0_values]
    if threads <= 1:
        return [_region_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_region_row, tasks, chunksize=max(1, resolution // (4 * threads))))
