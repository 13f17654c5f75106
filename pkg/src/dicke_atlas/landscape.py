"""Scaled mean-field energy, its stationarity conditions and Hessian.

The energy per atom is

    E = omega rho^2 + (Omega + U rho^2)(mu^2 - 1/2) - 2 rho mu C zeta_+(theta, eta)

with ``C = sqrt(1 - mu^2)``.  The Hessian in ``(rho, mu, theta, eta)`` is
block diagonal at stationary points: an amplitude block in ``(rho, mu)`` and a
phase block in ``(theta, eta)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError
from .model import MU_MAX, MeanFieldState, ModelParams, zeta_pm

#: Below this value of rho*mu the angle-free branch of zeta is used.
DEGENERATE_RHO_MU = 1e-14


def marginal_tolerance(params: ModelParams) -> float:
    """Eigenvalues with magnitude below this count as zero."""
    return 1e-8 * max(1.0, params.omega + params.Omega)


def _zeta(params: ModelParams, rho, mu, theta, eta):
    sector = "degenerate" if rho * mu < DEGENERATE_RHO_MU else "coherent"
    return zeta_pm(theta, eta, params.lam, params.kappa, sector)


def energy_at(params: ModelParams, rho: float, mu: float, theta: float, eta: float) -> float:
    """Scaled energy on raw coordinates (no validation, hot path)."""
    c = math.sqrt(1.0 - mu * mu)
    zp = params.lam * math.cos(theta - eta) + params.kappa * math.cos(theta + eta)
    return (params.omega * rho * rho
            + (params.Omega + params.U * rho * rho) * (mu * mu - 0.5)
            - 2.0 * rho * mu * c * zp)


def scaled_energy(params: ModelParams, state: MeanFieldState) -> float:
    rho, mu = state.rho, state.mu
    zp, _ = _zeta(params, rho, mu, state.theta, state.eta)
    return (params.omega * rho * rho
            + (params.Omega + params.U * rho * rho) * (mu * mu - 0.5)
            - 2.0 * rho * mu * state.C * zp)


def residuals_at(params: ModelParams, rho, mu, theta, eta) -> Tuple[float, float, float, float]:
    """Left-hand sides of the four stationarity equations on raw coordinates.

    In terms of the energy gradient these are ``(dE/drho / 2, dE/dmu / 2,
    dE/dtheta / 2, -dE/deta / 2)``.
    """
    if mu >= MU_MAX:
        raise DomainError(f"mu = {mu} is at or above MU_MAX = {MU_MAX}")
    lam, kap, U = params.lam, params.kappa, params.U
    c = math.sqrt(1.0 - mu * mu)
    zp, _ = _zeta(params, rho, mu, theta, eta)
    s_minus = lam * math.sin(theta - eta)
    s_plus = kap * math.sin(theta + eta)
    rmc = rho * mu * c
    return (
        params.omega * rho + U * rho * (mu * mu - 0.5) - mu * c * zp,
        (params.Omega + U * rho * rho) * mu - rho * (1.0 - 2.0 * mu * mu) / c * zp,
        rmc * (s_minus + s_plus),
        rmc * (s_minus - s_plus),
    )


def equilibrium_residuals(params: ModelParams, state: MeanFieldState):
    return residuals_at(params, state.rho, state.mu, state.theta, state.eta)


@dataclass(frozen=True)
class HessianBlocks:
    """Amplitude block ``mA`` (rho, mu) and phase block ``mP`` (theta, eta)."""

    mA: Tuple[Tuple[float, float], Tuple[float, float]]
    mP: Tuple[Tuple[float, float], Tuple[float, float]]

    def matrix(self) -> np.ndarray:
        """Full 4x4 Hessian ``diag[mA, mP]``."""
        out = np.zeros((4, 4))
        out[:2, :2] = self.mA
        out[2:, 2:] = self.mP
        return out


def _hessian_entries(params: ModelParams, state: MeanFieldState):
    rho, mu = state.rho, state.mu
    if mu >= MU_MAX:
        raise DomainError(f"mu = {mu} is at or above MU_MAX = {MU_MAX}")
    U = params.U
    c = state.C
    zp, zm = _zeta(params, rho, mu, state.theta, state.eta)
    m11 = 2.0 * params.omega + 2.0 * U * (mu * mu - 0.5)
    m22 = (2.0 * params.Omega + 2.0 * U * rho * rho
           + 2.0 * rho * mu * (3.0 - 2.0 * mu * mu) / c ** 3 * zp)
    m12 = 4.0 * U * rho * mu - 2.0 * (1.0 - 2.0 * mu * mu) / c * zp
    m_prime = 2.0 * rho * mu * c
    return m11, m22, m12, m_prime, zp, zm


def hessian(params: ModelParams, state: MeanFieldState) -> HessianBlocks:
    m11, m22, m12, mp, zp, zm = _hessian_entries(params, state)
    return HessianBlocks(
        mA=((m11, m12), (m12, m22)),
        mP=((mp * zp, -mp * zm), (-mp * zm, mp * zp)),
    )


def hessian_eigenvalues(params: ModelParams, state: MeanFieldState) -> Tuple[float, float, float, float]:
    """Closed-form eigenvalues ``(m1, m2, m3, m4)``; ``m1 <= m2`` from the amplitude block."""
    m11, m22, m12, mp, _, _ = _hessian_entries(params, state)
    root = math.sqrt((m11 - m22) ** 2 + 4.0 * m12 * m12)
    m1 = 0.5 * (m11 + m22 - root)
    m2 = 0.5 * (m11 + m22 + root)
    if state.rho * state.mu < DEGENERATE_RHO_MU:
        # the phase block is identically zero when rho*mu = 0
        return m1, m2, 0.0, 0.0
    m3 = 2.0 * params.lam * mp * math.cos(state.theta - state.eta)
    m4 = 2.0 * params.kappa * mp * math.cos(state.theta + state.eta)
    return m1, m2, m3, m4


class StabilityClass(str, enum.Enum):
    STABLE_MINIMUM = "StableMinimum"
    SADDLE = "Saddle"
    MAXIMUM = "Maximum"
    MARGINAL = "Marginal"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: Tuple[float, float, float, float]
    stability_class: StabilityClass
    rank_reduced: bool

    def as_dict(self) -> dict:
        m1, m2, m3, m4 = self.eigenvalues
        return {"m1": m1, "m2": m2, "m3": m3, "m4": m4,
                "class": self.stability_class.value, "rank_reduced": self.rank_reduced}


def classify_eigenvalues(values, tol: float) -> StabilityClass:
    lo, hi = min(values), max(values)
    if abs(lo) <= tol:
        return StabilityClass.MARGINAL
    if lo > 0.0:
        return StabilityClass.STABLE_MINIMUM
    if hi < -tol:
        return StabilityClass.MAXIMUM
    return StabilityClass.SADDLE


def classify_stability(params: ModelParams, state: MeanFieldState, at_np: bool = False) -> StabilityReport:
    """Classify a (near-)stationary point from the signs of the Hessian eigenvalues.

    With ``at_np`` the phase block is dropped (its eigenvalues vanish at the
    normal phase, where the angles are undetermined) and only m1, m2 count.
    """
    eig = hessian_eigenvalues(params, state)
    used = eig[:2] if at_np else eig
    cls = classify_eigenvalues(used, marginal_tolerance(params))
    return StabilityReport(eigenvalues=eig, stability_class=cls, rank_reduced=bool(at_np))
