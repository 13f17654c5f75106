"""Exact diagonalization at finite atom number N.

The Hamiltonian

    H = omega a+a + (Omega + U a+a / N) J_z
        + lambda / sqrt(N) (a+ J_- + a J_+) + kappa / sqrt(N) (a+ J_+ + a J_-)

is built in the product basis ``|n> (x) |j, m>`` of a truncated Fock space
(n = 0..n_max) and the maximal-spin Dicke multiplet j = N/2; state
``(n, m)`` has index ``n * (N + 1) + (m + j)``.

Every term changes ``n + m`` by an even amount, so the parity
``Pi_s = (-1)^(n + m + j)`` commutes with H for all couplings.  The two parity
blocks are diagonalized separately, which makes ``<Pi_s>`` exactly +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DimensionError
from .model import ModelParams

#: Desk-scale guard on the Hilbert-space dimension.
MAX_DIMENSION = 200_000
#: Blocks up to this size are solved densely, larger ones by Lanczos (ARPACK).
DENSE_LIMIT = 3000
#: Cutoff doublings allowed before giving up on convergence.
MAX_DOUBLINGS = 8


@dataclass(frozen=True)
class EdConfig:
    """Truncation and tolerances; ``n_max`` is the starting cutoff of adaptive scans."""

    N: int
    n_max: int = 16
    convergence_tol: float = 1e-8
    eigen_tol: float = 1e-10

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max!r}")
        if not (self.convergence_tol > 0.0 and self.eigen_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if self.dimension > MAX_DIMENSION:
            raise DimensionError(
                f"dimension (n_max+1)(N+1) = {self.dimension} exceeds {MAX_DIMENSION}")

    @property
    def dimension(self) -> int:
        return (self.n_max + 1) * (self.N + 1)


@dataclass(frozen=True)
class EdHamiltonian:
    """Sparse Hamiltonian plus the basis labels needed for observables."""

    matrix: sp.csr_matrix
    n: np.ndarray
    m: np.ndarray
    parity: np.ndarray
    config: EdConfig


@dataclass(frozen=True)
class EdResult:
    """Per-atom ground-state observables at one N.

    ``jperp2`` is ``<J_x^2 + J_y^2> / N^2``; ``<J_x>`` and ``<J_y>`` vanish in a
    parity eigenstate, so the squared transverse spin is the finite-N stand-in
    for the squared mean-field dipole.
    """

    N: int
    e0_per_atom: float
    n_photon_per_atom: float
    jz_per_atom: float
    jperp2: float
    parity: float
    cutoff_used: int
    top_weight: float

    @property
    def cutoff_ok(self) -> bool:
        """Mean photon number well inside the truncated Fock space."""
        return self.n_photon_per_atom * self.N <= 0.5 * self.cutoff_used

    def as_dict(self) -> dict:
        return {"N": self.N, "e0_per_atom": self.e0_per_atom,
                "n_photon_per_atom": self.n_photon_per_atom, "jz_per_atom": self.jz_per_atom,
                "jperp2": self.jperp2, "parity": self.parity, "cutoff_used": self.cutoff_used,
                "top_weight": self.top_weight, "cutoff_ok": self.cutoff_ok}


def _ladder(j: float, m: np.ndarray, sign: int) -> np.ndarray:
    """``<m + sign| J_sign |m>`` for the spin-j multiplet."""
    return np.sqrt(np.maximum(j * (j + 1.0) - m * (m + sign), 0.0))


def build_hamiltonian(params: ModelParams, cfg: EdConfig) -> EdHamiltonian:
    N, n_max = cfg.N, cfg.n_max
    j = 0.5 * N
    n = np.repeat(np.arange(n_max + 1), N + 1)
    k = np.tile(np.arange(N + 1), n_max + 1)
    m = k - j
    dim = n.size
    index = np.arange(dim)
    diag = params.omega * n + (params.Omega + params.U * n / N) * m
    g = 1.0 / math.sqrt(N)

    rows, cols, vals = [index], [index], [diag]
    can_raise_n = n < n_max
    # a+ J_-: (n, m) -> (n + 1, m - 1)
    sel = can_raise_n & (k > 0)
    if params.lam != 0.0:
        amp = params.lam * g * np.sqrt(n[sel] + 1.0) * _ladder(j, m[sel], -1)
        target = index[sel] + (N + 1) - 1
        rows += [target, index[sel]]
        cols += [index[sel], target]
        vals += [amp, amp]
    # a+ J_+: (n, m) -> (n + 1, m + 1)
    sel = can_raise_n & (k < N)
    if params.kappa != 0.0:
        amp = params.kappa * g * np.sqrt(n[sel] + 1.0) * _ladder(j, m[sel], +1)
        target = index[sel] + (N + 1) + 1
        rows += [target, index[sel]]
        cols += [index[sel], target]
        vals += [amp, amp]
    H = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(dim, dim)).tocsr()
    parity = np.where((n + k) % 2 == 0, 1, -1)
    return EdHamiltonian(H, n, m, parity, cfg)


def _lowest(block: sp.csr_matrix, eigen_tol: float) -> Tuple[float, np.ndarray]:
    dim = block.shape[0]
    if dim <= DENSE_LIMIT:
        w, v = scipy.linalg.eigh(block.toarray(), subset_by_index=[0, 0])
        return float(w[0]), v[:, 0]
    # deterministic start vector so repeated runs agree bit for bit
    v0 = np.ones(dim) / math.sqrt(dim)
    try:
        w, v = spla.eigsh(block, k=1, which="SA", tol=eigen_tol, v0=v0,
                          ncv=min(dim, 40), maxiter=50 * dim)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge for dimension {dim}: {exc}") from None
    return float(w[0]), v[:, 0]


def ground_state(ham: EdHamiltonian, cfg: Optional[EdConfig] = None) -> Tuple[float, np.ndarray]:
    """Lowest eigenpair, solved per parity block.

    The vector lives in the full basis and is sign-canonical (largest-magnitude
    component positive).  On an exact cross-sector tie the even block wins.
    """
    cfg = cfg or ham.config
    best = None
    for sector in (1, -1):
        idx = np.flatnonzero(ham.parity == sector)
        if idx.size == 0:
            continue
        block = ham.matrix[idx][:, idx]
        e, v = _lowest(block, cfg.eigen_tol)
        if best is None or e < best[0] - cfg.eigen_tol * max(1.0, abs(e)):
            best = (e, idx, v)
    e0, idx, v = best
    vec = np.zeros(ham.matrix.shape[0])
    vec[idx] = v / np.linalg.norm(v)
    if vec[np.argmax(np.abs(vec))] < 0.0:
        vec = -vec
    return e0, vec


def observables(ham: EdHamiltonian, e0: float, vec: np.ndarray) -> EdResult:
    N = ham.config.N
    j = 0.5 * N
    w = vec * vec
    m2 = float(w @ (ham.m * ham.m))
    return EdResult(
        N=N,
        e0_per_atom=e0 / N,
        n_photon_per_atom=float(w @ ham.n) / N,
        jz_per_atom=float(w @ ham.m) / N,
        jperp2=(j * (j + 1.0) - m2) / (N * N),
        parity=float(w @ ham.parity),
        cutoff_used=ham.config.n_max,
        top_weight=float(w[ham.n == ham.config.n_max].sum()),
    )


def solve(params: ModelParams, cfg: EdConfig, adaptive: bool = True) -> EdResult:
    """Ground state at one N; with ``adaptive`` the cutoff doubles until converged.

    Converged means the weight on the highest Fock level is below
    ``convergence_tol``.  Raises ConvergenceError when MAX_DOUBLINGS is hit
    and DimensionError when the guard stops the doubling.
    """
    for _ in range(MAX_DOUBLINGS + 1):
        ham = build_hamiltonian(params, cfg)
        e0, vec = ground_state(ham, cfg)
        result = observables(ham, e0, vec)
        if not adaptive or result.top_weight < cfg.convergence_tol:
            return result
        cfg = replace(cfg, n_max=2 * cfg.n_max)
    raise ConvergenceError(
        f"photon cutoff not converged after {MAX_DOUBLINGS} doublings (top weight {result.top_weight:.3g})")


def initial_cutoff(params: ModelParams, N: int, floor: int = 8) -> int:
    """Starting cutoff from the mean-field photon number, with head room for fluctuations."""
    zeta = max(abs(params.lam + params.kappa), abs(params.lam - params.kappa))
    n_mf = 0.0
    if zeta * zeta > params.omega * params.Omega:
        mu2 = 0.5 * (1.0 - params.omega * params.Omega / (zeta * zeta))
        rho = zeta * math.sqrt(mu2 * (1.0 - mu2)) / params.omega
        n_mf = N * rho * rho
    return max(floor, int(math.ceil(2.0 * n_mf + 6.0 * math.sqrt(n_mf + 1.0))))


def finite_size_scan(params: ModelParams, N_list: Sequence[int],
                     template: Optional[EdConfig] = None) -> List[EdResult]:
    """Adaptive-cutoff ground states for each N in ``N_list``.

    Without a template the starting cutoff is estimated from the mean-field
    photon number at U = 0 (see :func:`initial_cutoff`).
    """
    results = []
    for N in N_list:
        if template is None:
            cfg = EdConfig(N=N, n_max=initial_cutoff(params, N))
        else:
            cfg = replace(template, N=N)
        results.append(solve(params, cfg))
    return results
