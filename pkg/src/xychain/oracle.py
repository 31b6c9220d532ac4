"""Brute-force exact diagonalization of small periodic XY chains.

Everything here works directly in the spin basis with dense numpy arrays and
never touches the free-fermion machinery, which is what makes it usable as
an independent ground truth for the analytic modules.  Sizes up to L = 12
(Hilbert dimension 4096) are supported.

Basis convention: site 0 is the most significant bit, bit value 0 means spin
up (sigma^z = +1).  The Hamiltonian is real symmetric in this basis: each
periodic bond contributes -1 on double flips of antiparallel neighbors,
-gamma on double flips of parallel neighbors, and the field term sits on the
diagonal.
"""

from __future__ import annotations

import numpy as np

from .spectrum import ModelParams

__all__ = [
    "build_hamiltonian",
    "ground_state",
    "thermal_density",
    "diagonal_ensemble",
    "reduce_two_qubit",
    "ed_pt_eigenvalues",
    "correlations_from_two_qubit",
    "ThermalTwoQubitReducer",
    "diagonal_ensemble_two_qubit",
]

_MAX_SITES = 12
_DEGENERACY_TOL = 1e-10


def _chain_length(dim: int) -> int:
    L = int(round(np.log2(dim)))
    if 2 ** L != dim:
        raise ValueError(f"operator dimension {dim} is not a power of two")
    return L


def build_hamiltonian(params: ModelParams, L: int) -> np.ndarray:
    """Dense periodic XY Hamiltonian on L sites (4 <= L <= 12, even)."""
    if L < 4 or L > _MAX_SITES or L % 2 != 0:
        raise ValueError(f"chain length L={L} must be even with 4 <= L <= {_MAX_SITES}")
    dim = 2 ** L
    states = np.arange(dim)
    H = np.zeros((dim, dim))

    bits = (states[:, None] >> np.arange(L - 1, -1, -1)[None, :]) & 1
    # diagonal field term: sum sigma^z = L - 2 * (number of down spins)
    np.fill_diagonal(H, -params.h * (L - 2.0 * bits.sum(axis=1)))

    for l in range(L):
        k1 = L - 1 - l
        k2 = L - 1 - ((l + 1) % L)
        mask = (1 << k1) | (1 << k2)
        flipped = states ^ mask
        parallel = bits[:, l] == bits[:, (l + 1) % L]
        # sigma^x sigma^x + sigma^y sigma^y parts combine to -1 (antiparallel)
        # and -gamma (parallel) on the double-flipped pair
        vals = np.where(parallel, -params.gamma, -1.0)
        np.add.at(H, (flipped, states), vals)
    return H


def ground_state(hamiltonian: np.ndarray) -> tuple:
    """Lowest eigenpair (energy, vector) of a dense symmetric operator."""
    evals, evecs = np.linalg.eigh(hamiltonian)
    return float(evals[0]), evecs[:, 0]


def thermal_density(hamiltonian: np.ndarray, T: float) -> np.ndarray:
    """Gibbs state exp(-H/T)/Z at T > 0, stabilized by the ground energy."""
    if T <= 0.0:
        raise ValueError("thermal_density needs T > 0")
    evals, evecs = np.linalg.eigh(hamiltonian)
    w = np.exp(-(evals - evals[0]) / T)
    w /= w.sum()
    return (evecs * w) @ evecs.T


def diagonal_ensemble(ground: np.ndarray, hamiltonian: np.ndarray) -> np.ndarray:
    """Infinite-time average of |ground><ground| evolved by ``hamiltonian``.

    The projector onto each (near-)degenerate eigenspace of the evolving
    Hamiltonian is applied to the state; eigenvalues within 1e-10 are grouped,
    which also merges the exponentially split ordered-phase doublets.
    """
    evals, evecs = np.linalg.eigh(hamiltonian)
    amps = evecs.T @ ground
    rho = np.zeros_like(hamiltonian)
    for sl in _degenerate_groups(evals):
        block = evecs[:, sl] @ amps[sl]
        rho += np.outer(block, block)
    return rho


def _degenerate_groups(evals: np.ndarray):
    splits = np.nonzero(np.diff(evals) > _DEGENERACY_TOL)[0] + 1
    edges = [0, *splits.tolist(), evals.size]
    return [slice(a, b) for a, b in zip(edges[:-1], edges[1:])]


def _pair_axes_front(rho: np.ndarray, site_a: int, site_b: int, L: int) -> np.ndarray:
    """Reorder row/column site axes so (site_a, site_b) lead on both sides."""
    t = rho.reshape((2,) * (2 * L))
    order = [site_a, site_b] + [s for s in range(L) if s not in (site_a, site_b)]
    perm = order + [L + s for s in order]
    return t.transpose(perm).reshape(4, 2 ** (L - 2), 4, 2 ** (L - 2))


def reduce_two_qubit(rho: np.ndarray, site_a: int, site_b: int) -> np.ndarray:
    """Partial trace of a full density matrix down to sites (site_a, site_b)."""
    L = _chain_length(rho.shape[0])
    if site_a == site_b:
        raise ValueError("the two sites must be distinct")
    if not (0 <= site_a < L and 0 <= site_b < L):
        raise ValueError("site index out of range")
    blocks = _pair_axes_front(rho, site_a, site_b, L)
    return np.einsum("arbr->ab", blocks)


def ed_pt_eigenvalues(rho2: np.ndarray) -> np.ndarray:
    """All four eigenvalues of the partial transpose, ascending.

    Full eigensolve of the first-site transpose; no symmetry assumption.
    """
    pt = np.asarray(rho2).reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
    return np.linalg.eigvalsh(pt)


_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY_IM = np.array([[0.0, -1.0], [1.0, 0.0]])  # sigma^y = i * _SY_IM
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def correlations_from_two_qubit(rho2: np.ndarray) -> tuple:
    """(xx, yy, zz, z) expectation values of a two-qubit density matrix."""
    rho2 = np.asarray(rho2)
    xx = float(np.real(np.trace(rho2 @ np.kron(_SX, _SX))))
    yy = float(-np.real(np.trace(rho2 @ np.kron(_SY_IM, _SY_IM))))
    zz = float(np.real(np.trace(rho2 @ np.kron(_SZ, _SZ))))
    z = float(np.real(np.trace(rho2 @ np.kron(_SZ, np.eye(2)))))
    return xx, yy, zz, z


class ThermalTwoQubitReducer:
    """Reusable thermal two-site reduction for temperature sweeps.

    Diagonalizes once, reduces every eigenvector to the chosen pair of sites
    up front, and then assembles the Gibbs-weighted 4x4 state per temperature
    in O(dim) — cheap enough to sit inside a root search.
    """

    def __init__(self, hamiltonian: np.ndarray, sites: tuple = (0, 1)):
        L = _chain_length(hamiltonian.shape[0])
        self.evals, evecs = np.linalg.eigh(hamiltonian)
        order = [sites[0], sites[1]] + [s for s in range(L) if s not in sites]
        vecs = evecs.reshape((2,) * L + (evecs.shape[1],))
        vecs = vecs.transpose(order + [L]).reshape(4, 2 ** (L - 2), evecs.shape[1])
        # reduced[n] = partial trace of |n><n| over everything but the pair
        self.reduced = np.einsum("arn,brn->nab", vecs, vecs)

    def at_temperature(self, T: float) -> np.ndarray:
        if T <= 0.0:
            raise ValueError("needs T > 0")
        w = np.exp(-(self.evals - self.evals[0]) / T)
        w /= w.sum()
        return np.einsum("n,nab->ab", w, self.reduced)


def diagonal_ensemble_two_qubit(
    ground: np.ndarray, hamiltonian: np.ndarray, sites: tuple = (0, 1)
) -> np.ndarray:
    """Two-site reduction of the diagonal ensemble without building it fully."""
    L = _chain_length(hamiltonian.shape[0])
    evals, evecs = np.linalg.eigh(hamiltonian)
    amps = evecs.T @ ground
    order = [sites[0], sites[1]] + [s for s in range(L) if s not in sites]
    rho2 = np.zeros((4, 4))
    for sl in _degenerate_groups(evals):
        block = evecs[:, sl] @ amps[sl]
        block = block.reshape((2,) * L).transpose(order).reshape(4, 2 ** (L - 2))
        rho2 += block @ block.T
    return rho2
