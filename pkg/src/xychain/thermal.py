"""Thermal averages of the XY chain: energy and nearest-neighbor correlations.

Thermodynamic-limit quantities are momentum integrals weighted by the mode
occupation factor w(p) = tanh(eps(p)/2T); stationary postquench states reuse
the same integrals with a different weight, so the weight is a first-class
object here.  Finite periodic chains are handled exactly through the two
fermion-parity sectors, with all partition-function products kept in log
space so lengths of a few thousand sites at low temperature stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import QuadratureSpec, integrate, integrate_components
from .spectrum import ModelParams, dispersion, field_minus_cos, momentum_grid

__all__ = [
    "OccupationWeight",
    "CorrelationSums",
    "NNCorrelations",
    "thermal_weight",
    "unit_weight",
    "correlation_sums",
    "nn_correlations",
    "energy_density_thermal",
    "finite_energy_thermal",
    "finite_ground_energy",
]


@dataclass(frozen=True)
class OccupationWeight:
    """Mode-occupation weight w(p) on [-pi, pi] with 0 <= w <= 1, w even.

    ``fn`` evaluates w(p); ``over_dispersion`` evaluates w(p)/eps(p) in a
    form that stays finite where the gap closes.  ``saturated`` marks the
    zero-temperature case w == 1, which needs special handling at gamma = 0
    where w/eps degenerates to a sign function.  ``breakpoints`` are interior
    kink positions in (0, pi) to hand to the quadrature.
    """

    fn: Callable
    over_dispersion: Callable
    provenance: str
    saturated: bool = False
    breakpoints: tuple = ()


@dataclass(frozen=True)
class CorrelationSums:
    """The three momentum sums g_c, g_s, g_0 behind nearest-neighbor correlators."""

    g_c: float
    g_s: float
    g_0: float


@dataclass(frozen=True)
class NNCorrelations:
    """Single-site magnetization and nearest-neighbor spin correlations."""

    xx: float
    yy: float
    zz: float
    z: float

    def as_tuple(self) -> tuple:
        return (self.xx, self.yy, self.zz, self.z)


def _tanhc(x: np.ndarray) -> np.ndarray:
    """tanh(x)/x, continuous through x = 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    out = np.tanh(xs) / xs
    series = 1.0 - x * x / 3.0 + 2.0 * x ** 4 / 15.0
    return np.where(small, series, out)


def _weight_breakpoints(params: ModelParams) -> tuple:
    # gamma = 0 chains are gapless at p = arccos(h) for h < 1; that kink is
    # the only one interior to (0, pi).  Criticality (h = 1) puts the kink at
    # the endpoint p = 0, which the [0, pi] panels already resolve.
    if params.gamma == 0.0 and params.h < 1.0:
        return (float(np.arccos(params.h)),)
    return ()


def thermal_weight(params: ModelParams, T: float) -> OccupationWeight:
    """Equilibrium occupation weight tanh(eps(p)/2T); w == 1 at T = 0."""
    if T < 0.0:
        raise ValueError("temperature must be non-negative")
    if T == 0.0:
        return unit_weight(params, provenance="thermal")

    def fn(p):
        return np.tanh(dispersion(params, p) / (2.0 * T))

    def over_dispersion(p):
        # tanh(eps/2T)/eps via tanh(x)/x, finite through gap closures
        return _tanhc(dispersion(params, p) / (2.0 * T)) / (2.0 * T)

    return OccupationWeight(
        fn=fn,
        over_dispersion=over_dispersion,
        provenance="thermal",
        saturated=False,
        breakpoints=_weight_breakpoints(params),
    )


def unit_weight(params: ModelParams, provenance: str = "unit") -> OccupationWeight:
    """Saturated weight w == 1 (ground state / zero effective temperature)."""

    def fn(p):
        return np.ones_like(np.asarray(p, dtype=float))

    def over_dispersion(p):
        return 1.0 / dispersion(params, p)

    return OccupationWeight(
        fn=fn,
        over_dispersion=over_dispersion,
        provenance=provenance,
        saturated=True,
        breakpoints=_weight_breakpoints(params),
    )


def correlation_sums(
    params: ModelParams, weight: OccupationWeight, spec: QuadratureSpec | None = None
) -> CorrelationSums:
    """Momentum integrals g_c, g_s, g_0 for the given occupation weight.

    In the thermodynamic limit (2/L)*sum_p -> (1/pi)*Int_{-pi}^{pi} dp; the
    integrands are even, so [0, pi] carries a factor 2/pi.  At gamma = 0 with
    a saturated weight the combination w/eps * (cos p - h) reduces to
    sign(cos p - h)/2, which is integrated piecewise across the Fermi point.
    """
    gamma, h = params.gamma, params.h
    base = spec or QuadratureSpec()
    spec = QuadratureSpec(
        rel_tol=base.rel_tol,
        abs_tol=base.abs_tol,
        max_subdivisions=base.max_subdivisions,
        breakpoints=tuple(base.breakpoints) + weight.breakpoints,
    )

    if gamma == 0.0 and weight.saturated:
        def f(p):
            sign = np.sign(np.cos(p) - h)
            return np.stack([0.5 * np.cos(p) * sign, -0.5 * sign])

        g_c, g_0 = (2.0 / np.pi) * integrate_components(f, (0.0, np.pi), spec)
        return CorrelationSums(g_c=float(g_c), g_s=0.0, g_0=float(g_0))

    if gamma == 0.0 and weight.provenance == "quench":
        raise ValueError(
            "gamma = 0 stationary states need the dedicated XX route "
            "(xx_quench_correlations), not the generic weight substitution"
        )

    def f(p):
        woe = weight.over_dispersion(p)
        fmc = field_minus_cos(p, h)
        sinp = np.sin(p)
        return np.stack(
            [
                -np.cos(p) * fmc * woe,
                -gamma * sinp * sinp * woe,
                fmc * woe,
            ]
        )

    g_c, g_s, g_0 = (2.0 / np.pi) * integrate_components(f, (0.0, np.pi), spec)
    return CorrelationSums(g_c=float(g_c), g_s=float(g_s), g_0=float(g_0))


def nn_correlations(sums: CorrelationSums) -> NNCorrelations:
    """Assemble spin correlators from the momentum sums."""
    return NNCorrelations(
        xx=sums.g_c - sums.g_s,
        yy=sums.g_c + sums.g_s,
        zz=sums.g_0 ** 2 - sums.g_c ** 2 + sums.g_s ** 2,
        z=sums.g_0,
    )


def energy_density_thermal(
    params: ModelParams, T: float, spec: QuadratureSpec | None = None
) -> float:
    """Thermal energy per site, -(1/4pi) * Int eps(p) * w(p) dp."""
    weight = thermal_weight(params, T)
    base = spec or QuadratureSpec()
    spec = QuadratureSpec(
        rel_tol=base.rel_tol,
        abs_tol=base.abs_tol,
        max_subdivisions=base.max_subdivisions,
        breakpoints=tuple(base.breakpoints) + weight.breakpoints,
    )
    value = integrate(lambda p: dispersion(params, p) * weight.fn(p), (0.0, np.pi), spec)
    return -value / (2.0 * np.pi)


# -- finite periodic chains -------------------------------------------------
#
# The partition function splits into even/odd fermion-parity sectors with
# different momentum quantization.  In the odd sector the two unpaired modes
# carry energies 2*(h-1) at q=0 (signed) and 2*(h+1) at q=pi; absorbing them
# analytically leaves products over paired momenta only:
#
#   Z+ = 2^(L-1) [ prod_{p>0} cosh^2(x_p) + prod_{p>0} sinh^2(x_p) ]
#   Z- = 2^(L-2) [ cosh(2b)(Qc + Qs) + cosh(2bh)(Qc - Qs) ]
#
# with x = b*eps/2, b = 1/T, Qc/Qs the cosh^2/sinh^2 products over 0<q<pi.
# The energy is -dlnZ/db.  Every term below is non-negative, so the grouped
# form has no cancellation and survives b*eps far beyond float overflow.


def _ln_cosh(x):
    x = np.abs(np.asarray(x, dtype=float))
    return x + np.log1p(np.exp(-2.0 * x)) - np.log(2.0)


def _ln_sinh(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return x + np.log1p(-np.exp(-2.0 * x)) - np.log(2.0)


def _ln_tanh(x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-2.0 * x)
    with np.errstate(divide="ignore"):
        return np.log1p(-e) - np.log1p(e)


def _sector_mode_sums(eps: np.ndarray, beta: float):
    """ln of prod tanh^2, plus the tanh/coth energy sums of one sector."""
    x = 0.5 * beta * eps
    th = np.tanh(x)
    gapless = th <= 0.0
    sum_tanh = float(eps @ th)
    if np.any(gapless):
        # an exactly gapless mode annihilates every coth-side product
        return -np.inf, sum_tanh, 0.0, 0.0
    ln_th = _ln_tanh(x)
    ln_t = 2.0 * float(ln_th.sum())
    # eps * coth(x) * prod tanh^2 == eps * exp(ln_t - ln tanh(x)), termwise <= eps
    coth_sum = float(eps @ np.exp(ln_t - ln_th))
    # sum eps*tanh*(1 - prod_{q'!=q} tanh^2), needed with full precision when
    # the products are all close to 1 (low temperature)
    sum_minus = float((eps * th) @ (-np.expm1(ln_t - 2.0 * ln_th)))
    return ln_t, sum_tanh, coth_sum, sum_minus


def finite_energy_thermal(params: ModelParams, T: float, L: int) -> float:
    """Exact thermal energy of a periodic L-site chain at temperature T > 0.

    Combines the parity sectors with their partition-function weights; at
    T = 0 use :func:`finite_ground_energy` instead (the sector formulas
    degenerate there).
    """
    if T <= 0.0:
        raise ValueError("finite_energy_thermal needs T > 0; use sector ground-state minimum at T = 0")
    if L < 4 or L % 2 != 0:
        raise ValueError(f"chain length L={L} must be even and at least 4")
    beta = 1.0 / T
    h = params.h

    eps_even = dispersion(params, momentum_grid(L, "even").positive)
    eps_odd = dispersion(params, momentum_grid(L, "odd").interior)

    # even sector
    ln_t_p, sum_tanh_p, coth_sum_p, _ = _sector_mode_sums(eps_even, beta)
    t_p = np.exp(ln_t_p)
    energy_even = -(sum_tanh_p + coth_sum_p) / (1.0 + t_p)
    x_even = 0.5 * beta * eps_even
    ln_z_even = (L - 1) * np.log(2.0) + 2.0 * float(_ln_cosh(x_even).sum()) + np.log1p(t_p)

    # odd sector
    ln_t_q, sum_tanh_q, coth_sum_q, sum_minus_q = _sector_mode_sums(eps_odd, beta)
    t_q = np.exp(ln_t_q)
    one_minus_tq = -np.expm1(ln_t_q)
    a1 = float(_ln_cosh(2.0 * beta))
    a2 = float(_ln_cosh(2.0 * beta * h))
    m = max(a1, a2)
    e1 = np.exp(a1 - m)
    e2 = np.exp(a2 - m)
    s1 = np.exp(float(_ln_sinh(2.0 * beta)) - m)
    s2 = 0.0 if h == 0.0 else np.exp(float(_ln_sinh(2.0 * beta * h)) - m)

    den = e1 * (1.0 + t_q) + e2 * one_minus_tq
    if den <= 0.0:
        # odd-sector weight underflows entirely; even sector carries the state
        return float(energy_even)
    num = (
        2.0 * s1 * (1.0 + t_q)
        + e1 * (sum_tanh_q + coth_sum_q)
        + 2.0 * h * s2 * one_minus_tq
        + e2 * sum_minus_q
    )
    energy_odd = -num / den
    y_odd = 0.5 * beta * eps_odd
    ln_z_odd = (
        (L - 2) * np.log(2.0) + 2.0 * float(_ln_cosh(y_odd).sum()) + m + np.log(den)
    )

    lse = np.logaddexp(ln_z_even, ln_z_odd)
    w_even = np.exp(ln_z_even - lse)
    w_odd = np.exp(ln_z_odd - lse)
    return float(w_even * energy_even + w_odd * energy_odd)


def finite_ground_energy(params: ModelParams, L: int) -> float:
    """Ground-state energy of a periodic L-site chain (minimum over sectors).

    The even-sector vacuum has energy -sum_{p>0} eps(p); the cheapest
    odd-fermion state occupies the signed q=0 mode of energy 2*(h-1) on top
    of the odd-sector vacuum.
    """
    if L < 4 or L % 2 != 0:
        raise ValueError(f"chain length L={L} must be even and at least 4")
    eps_even = dispersion(params, momentum_grid(L, "even").positive)
    eps_odd = dispersion(params, momentum_grid(L, "odd").interior)
    e_even = -float(eps_even.sum())
    e_odd = -2.0 - float(eps_odd.sum())
    return min(e_even, e_odd)
