"""Closed-form mean-field results for U = 0.

Superradiant solutions satisfy ``mu^2 = (1 - omega*Omega/zeta^2) / 2`` and
``rho = zeta * mu * sqrt(1 - mu^2) / omega`` where ``zeta`` is the branch value
of ``zeta_+``.  The branch is fixed by the locked phase differences:

========== ================ =============================================
branch     zeta_+           (theta, eta)
========== ================ =============================================
X          abs(lam + kappa) {0, pi}
P          abs(lam - kappa) {pi/2, 3pi/2}
DEG_LAMBDA abs(lam)         kappa = 0; continuous, theta - eta in {0, pi}
DEG_KAPPA  abs(kappa)       lam = 0; continuous, theta + eta in {0, pi}
========== ================ =============================================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import EmptyBranch, PhaseMismatch, UndefinedAtT, UnsupportedU
from .model import (MeanFieldState, ModelParams, OrderParameters, PhaseLabel,
                    TWO_PI)

HALF_PI = 0.5 * math.pi
THREE_HALF_PI = 1.5 * math.pi

#: Relative slack on threshold comparisons, absorbs grid round-off.
THRESHOLD_RTOL = 1e-12
#: Relative size below which a coupling counts as exactly zero.
ZERO_RTOL = 1e-12

DEFAULT_FAMILY_SIZE = 16


class SpBranch(str, enum.Enum):
    X = "X"
    P = "P"
    DEG_LAMBDA = "DEG_LAMBDA"
    DEG_KAPPA = "DEG_KAPPA"

    def __str__(self):
        return self.value


def _require_u0(params: ModelParams):
    if params.U != 0.0:
        raise UnsupportedU(f"closed forms need U = 0, got U = {params.U}")


def _zero_scale(params: ModelParams) -> float:
    return ZERO_RTOL * max(abs(params.lam), abs(params.kappa), params.omega)


def kappa_is_zero(params: ModelParams) -> bool:
    return abs(params.kappa) < _zero_scale(params)


def lambda_is_zero(params: ModelParams) -> bool:
    return abs(params.lam) < _zero_scale(params)


def branch_zeta(params: ModelParams, branch: SpBranch) -> float:
    """Value of zeta_+ on a branch (always non-negative)."""
    branch = SpBranch(branch)
    if branch is SpBranch.X:
        return abs(params.lam + params.kappa)
    if branch is SpBranch.P:
        return abs(params.lam - params.kappa)
    if branch is SpBranch.DEG_LAMBDA:
        return abs(params.lam)
    return abs(params.kappa)


def _meets_threshold(zeta: float, params: ModelParams) -> bool:
    return zeta >= params.sqrt_omega_Omega * (1.0 - THRESHOLD_RTOL)


def exceeds_threshold(zeta: float, params: ModelParams) -> bool:
    """Strictly above threshold, so the SP solution differs from the NP point."""
    return zeta > params.sqrt_omega_Omega * (1.0 + THRESHOLD_RTOL)


@dataclass(frozen=True)
class CriticalData:
    """Critical couplings and coexistence widths; None marks an undefined value."""

    lambda_c_x: Optional[float]
    lambda_c_p: Optional[float]
    kappa_c: float
    delta_L: Optional[float]
    delta_U: Optional[float]
    delta: Optional[float]


def critical_couplings(params: ModelParams) -> CriticalData:
    _require_u0(params)
    s = params.sqrt_omega_Omega
    t = params.t
    if t is None:
        return CriticalData(None, None, s, None, None, None)
    lc_x = s / abs(1.0 + t) if t != -1.0 else None
    lc_p = s / abs(1.0 - t) if t != 1.0 else None
    delta_L = delta_U = delta = None
    if t < -1.0:
        delta_L = 2.0 * s / (t * t - 1.0)
        delta = -2.0 / (1.0 + t)
    elif -1.0 < t < 0.0:
        delta_U = 2.0 * t * s / (t * t - 1.0)
        delta = -2.0 * t / (1.0 + t)
    return CriticalData(lc_x, lc_p, s, delta_L, delta_U, delta)


def coexistence_width(params: ModelParams) -> float:
    """Width in lambda of one p-(R)SP + NP band at fixed t (zero for t > 0)."""
    _require_u0(params)
    t = params.t
    if t is None:
        raise UndefinedAtT("t is undefined at lambda = 0")
    if t in (1.0, -1.0):
        raise UndefinedAtT(f"coexistence width is undefined at t = {t}")
    if t >= 0.0:
        return 0.0
    data = critical_couplings(params)
    return data.delta_L if t < -1.0 else data.delta_U


def np_stable(params: ModelParams) -> bool:
    """Normal-phase stability, ``|lam + kappa| <= sqrt(omega Omega)``."""
    _require_u0(params)
    return abs(params.lam + params.kappa) <= params.sqrt_omega_Omega * (1.0 + THRESHOLD_RTOL)


def branch_admissible(params: ModelParams, branch: SpBranch) -> bool:
    """Sign constraints that make the phase-block eigenvalues non-negative."""
    branch = SpBranch(branch)
    lam, kap = params.lam, params.kappa
    if branch is SpBranch.X:
        return not kappa_is_zero(params) and not lambda_is_zero(params) and lam * kap > 0.0
    if branch is SpBranch.P:
        return not kappa_is_zero(params) and not lambda_is_zero(params) and lam * kap < 0.0
    if branch is SpBranch.DEG_LAMBDA:
        return kappa_is_zero(params) and not lambda_is_zero(params)
    return lambda_is_zero(params) and not kappa_is_zero(params)


def sp_stable(params: ModelParams, branch: SpBranch) -> bool:
    _require_u0(params)
    return branch_admissible(params, branch) and _meets_threshold(branch_zeta(params, branch), params)


def select_branch(params: ModelParams) -> Optional[SpBranch]:
    """The only branch whose sign constraints the couplings can satisfy."""
    if kappa_is_zero(params):
        return None if lambda_is_zero(params) else SpBranch.DEG_LAMBDA
    if lambda_is_zero(params):
        return SpBranch.DEG_KAPPA
    return SpBranch.X if params.lam * params.kappa > 0.0 else SpBranch.P


def _amplitudes(params: ModelParams, zeta: float) -> Tuple[float, float]:
    a = params.omega * params.Omega / (zeta * zeta)
    mu2 = max(0.5 * (1.0 - a), 0.0)
    mu = math.sqrt(mu2)
    rho = zeta * mu * math.sqrt(1.0 - mu2) / params.omega
    return rho, mu


def _branch_angles(params: ModelParams, branch: SpBranch, n_angles: int) -> List[Tuple[float, float]]:
    lam, kap = params.lam, params.kappa
    if branch is SpBranch.X:
        if lam + kap >= 0.0:
            return [(0.0, 0.0), (math.pi, math.pi)]
        return [(0.0, math.pi), (math.pi, 0.0)]
    if branch is SpBranch.P:
        if lam - kap >= 0.0:
            return [(HALF_PI, HALF_PI), (THREE_HALF_PI, THREE_HALF_PI)]
        return [(HALF_PI, THREE_HALF_PI), (THREE_HALF_PI, HALF_PI)]
    thetas = [TWO_PI * k / n_angles for k in range(n_angles)]
    if branch is SpBranch.DEG_LAMBDA:
        offset = 0.0 if lam > 0.0 else math.pi
        return [(th, th + offset) for th in thetas]
    offset = 0.0 if kap > 0.0 else math.pi
    return [(th, offset - th) for th in thetas]


def sp_solutions(params: ModelParams, branch: SpBranch,
                 n_angles: int = DEFAULT_FAMILY_SIZE) -> List[MeanFieldState]:
    """Superradiant stationary points of a branch, in tabulated order (first listed pair first).

    Continuous families (DEG_*) are sampled at ``n_angles`` equally spaced
    theta values starting at 0.  Returns [] below threshold.
    """
    _require_u0(params)
    branch = SpBranch(branch)
    if branch is SpBranch.DEG_LAMBDA and not kappa_is_zero(params):
        raise PhaseMismatch("DEG_LAMBDA needs kappa = 0")
    if branch is SpBranch.DEG_KAPPA and not lambda_is_zero(params):
        raise PhaseMismatch("DEG_KAPPA needs lambda = 0")
    zeta = branch_zeta(params, branch)
    if zeta == 0.0 or not _meets_threshold(zeta, params):
        return []
    rho, mu = _amplitudes(params, zeta)
    return [MeanFieldState(rho, mu, th, et) for th, et in _branch_angles(params, branch, n_angles)]


def sp_ground_energy(params: ModelParams, branch: SpBranch) -> float:
    _require_u0(params)
    zeta = branch_zeta(params, branch)
    if zeta == 0.0 or not _meets_threshold(zeta, params):
        raise EmptyBranch(f"branch {SpBranch(branch)} is below threshold")
    wO = params.omega * params.Omega
    z2 = zeta * zeta
    return -(z2 * z2 + wO * wO) / (4.0 * params.omega * z2)


def sp_hessian_eigenvalues(params: ModelParams, branch: SpBranch) -> Tuple[float, float, float, float]:
    """Hessian eigenvalues at the first representative SP solution, in closed form."""
    states = sp_solutions(params, branch)
    if not states:
        raise EmptyBranch(f"branch {SpBranch(branch)} is below threshold")
    w, W = params.omega, params.Omega
    z = branch_zeta(params, branch)
    z2, z4 = z * z, z ** 4
    wO = w * W
    R = w * w + (8.0 * wO * wO - 4.0 * z4) / (wO + z2) + 4.0 * z4 * z4 / (w * w * (wO + z2) ** 2)
    base = w + 2.0 * z4 / (w * (z2 + wO))
    root = math.sqrt(max(R, 0.0))
    factor = z / w * (1.0 - wO * wO / z4)
    s = states[0]
    m3 = params.lam * math.cos(s.theta - s.eta) * factor
    m4 = params.kappa * math.cos(s.theta + s.eta) * factor
    return base - root, base + root, m3, m4


_TABLE1_PHASES = {
    # phase: (branch, lambda sign, kappa sign, component carrying the dipole, upper sign)
    PhaseLabel.X_SP: (SpBranch.X, 1, 1, "jx", 1.0),
    PhaseLabel.X_RSP: (SpBranch.X, -1, -1, "jx", -1.0),
    PhaseLabel.P_SP: (SpBranch.P, 1, -1, "jy", -1.0),
    PhaseLabel.P_RSP: (SpBranch.P, -1, 1, "jy", 1.0),
}


def table1_order_parameters(params: ModelParams, phase: PhaseLabel,
                            branch_sign: str = "upper") -> OrderParameters:
    """Order parameters from the tabulated closed forms in (t, lambda_c).

    ``branch_sign="upper"`` selects the first listed [theta, eta] pair of a
    phase, ``"lower"`` the second.
    """
    _require_u0(params)
    phase = PhaseLabel(phase)
    if branch_sign not in ("upper", "lower"):
        raise ValueError(f"branch_sign must be 'upper' or 'lower', got {branch_sign!r}")
    if phase is PhaseLabel.NP:
        if not np_stable(params):
            raise PhaseMismatch("normal phase is unstable at these parameters")
        return OrderParameters(0.0, -0.5, 0.0, 0.0)
    if phase not in _TABLE1_PHASES:
        raise PhaseMismatch(f"{phase} has no tabulated row")
    branch, s_lam, s_kap, comp, upper = _TABLE1_PHASES[phase]
    lam, kap = params.lam, params.kappa
    if lambda_is_zero(params) or kappa_is_zero(params):
        raise PhaseMismatch("tabulated rows need nonzero lambda and kappa")
    if (lam > 0) != (s_lam > 0) or (kap > 0) != (s_kap > 0):
        raise PhaseMismatch(f"signs of (lambda, kappa) cannot host {phase}")
    t = params.t
    one_pm_t = 1.0 + t if branch is SpBranch.X else 1.0 - t
    lam_c = params.sqrt_omega_Omega / abs(one_pm_t)
    if abs(lam) < lam_c * (1.0 - THRESHOLD_RTOL):
        raise PhaseMismatch(f"|lambda| = {abs(lam)} is below lambda_c = {lam_c}")
    ratio4 = min((lam_c / lam) ** 4, 1.0)
    n_photon = one_pm_t ** 2 * lam * lam / (4.0 * params.omega ** 2) * (1.0 - ratio4)
    jz = -lam_c * lam_c / (2.0 * lam * lam)
    dipole = 0.5 * math.sqrt(1.0 - ratio4) * (upper if branch_sign == "upper" else -upper)
    if comp == "jx":
        return OrderParameters(n_photon, jz, dipole, 0.0)
    return OrderParameters(n_photon, jz, 0.0, dipole)
