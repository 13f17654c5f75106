"""Parameter and state records for the imbalanced Dicke model.

Mean-field states are described by a cavity coherence ``rho * exp(i theta)``
and a (Holstein-Primakoff) spin coherence ``mu * exp(i eta)``.  Energies are
per atom, with hbar = 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

TWO_PI = 2.0 * math.pi

#: Upper bound on the spin amplitude; ``mu = 1`` makes ``sqrt(1 - mu**2)`` vanish.
MU_MAX = 0.999


def wrap_angle(x: float) -> float:
    """Map an angle onto [0, 2*pi)."""
    y = math.fmod(x, TWO_PI)
    if y < 0.0:
        y += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if y >= TWO_PI:
        y = 0.0
    return y


def angle_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    d = wrap_angle(a - b)
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class ModelParams:
    """Hamiltonian parameters ``(omega, Omega, lambda, kappa, U)``.

    ``lam`` is the corotating coupling (``lambda`` is a Python keyword).
    """

    omega: float
    Omega: float
    lam: float
    kappa: float
    U: float = 0.0

    def __post_init__(self):
        for name in ("omega", "Omega", "lam", "kappa", "U"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.Omega <= 0.0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")

    @property
    def t(self) -> Optional[float]:
        """Coupling ratio ``kappa / lambda``; None when lambda = 0 (undefined)."""
        if self.lam == 0.0:
            return None
        return self.kappa / self.lam

    @property
    def sqrt_omega_Omega(self) -> float:
        return math.sqrt(self.omega * self.Omega)

    def replace(self, **changes) -> "ModelParams":
        values = dict(omega=self.omega, Omega=self.Omega, lam=self.lam,
                      kappa=self.kappa, U=self.U)
        values.update(changes)
        return ModelParams(**values)

    @classmethod
    def from_t(cls, omega, Omega, lam, t, U=0.0) -> "ModelParams":
        return cls(omega, Omega, lam, t * lam, U)

    def as_dict(self) -> dict:
        return {"omega": self.omega, "Omega": self.Omega, "lambda": self.lam,
                "kappa": self.kappa, "U": self.U, "t": self.t}


@dataclass(frozen=True)
class MeanFieldState:
    """Variational point ``(rho, mu, theta, eta)``; angles stored in [0, 2*pi)."""

    rho: float
    mu: float
    theta: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        rho, mu = float(self.rho), float(self.mu)
        if not (math.isfinite(rho) and rho >= 0.0):
            raise ValueError(f"rho must be >= 0, got {rho}")
        if not (math.isfinite(mu) and 0.0 <= mu <= MU_MAX):
            raise ValueError(f"mu must lie in [0, {MU_MAX}], got {mu}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))
        object.__setattr__(self, "eta", wrap_angle(float(self.eta)))

    @property
    def C(self) -> float:
        return math.sqrt(1.0 - self.mu * self.mu)

    @property
    def alpha(self) -> complex:
        return self.rho * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def gamma(self) -> complex:
        return self.mu * complex(math.cos(self.eta), math.sin(self.eta))

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.rho, self.mu, self.theta, self.eta)


@dataclass(frozen=True)
class OrderParameters:
    """Per-atom observables ``<a+a>/N``, ``<Jz>/N``, ``<Jx>/N``, ``<Jy>/N``."""

    n_photon: float
    jz: float
    jx: float
    jy: float

    def as_dict(self) -> dict:
        return {"n_photon": self.n_photon, "jz": self.jz, "jx": self.jx, "jy": self.jy}


class PhaseLabel(str, enum.Enum):
    NP = "NP"
    X_SP = "X_SP"
    X_RSP = "X_RSP"
    P_SP = "P_SP"
    P_RSP = "P_RSP"
    SP0 = "SP0"
    RSP0 = "RSP0"
    SPX = "SPX"
    SPP = "SPP"
    COEX_PSP_NP = "COEX_PSP_NP"
    COEX_PRSP_NP = "COEX_PRSP_NP"
    UNSTABLE = "UNSTABLE"

    def __str__(self):
        return self.value


#: Phases whose minimizers form a continuous U(1) family.
CONTINUUM_PHASES = frozenset({PhaseLabel.SP0, PhaseLabel.RSP0, PhaseLabel.SPX, PhaseLabel.SPP})


def zeta_pm(theta: float, eta: float, lam: float, kappa: float,
            sector: str = "coherent") -> Tuple[float, float]:
    """Effective couplings ``lam*cos(theta-eta) +/- kappa*cos(theta+eta)``.

    ``sector="degenerate"`` is the ``rho*mu = 0`` branch, where the angles are
    meaningless and the result is ``lam +/- kappa``.
    """
    if sector == "degenerate":
        return lam + kappa, lam - kappa
    if sector != "coherent":
        raise ValueError(f"unknown sector {sector!r}")
    a = lam * math.cos(theta - eta)
    b = kappa * math.cos(theta + eta)
    return a + b, a - b


def order_parameters(state: MeanFieldState) -> OrderParameters:
    mu = state.mu
    c = state.C
    return OrderParameters(
        n_photon=state.rho * state.rho,
        jz=mu * mu - 0.5,
        jx=c * mu * math.cos(state.eta),
        jy=-c * mu * math.sin(state.eta),
    )


def quadratures(state: MeanFieldState) -> Tuple[float, float, float, float]:
    """Per-sqrt(N) quadratures ``(x_a, p_a, x_c, p_c)`` of the two coherences."""
    return (state.rho * math.cos(state.theta), state.rho * math.sin(state.theta),
            state.mu * math.cos(state.eta), state.mu * math.sin(state.eta))
