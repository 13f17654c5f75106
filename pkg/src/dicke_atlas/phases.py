"""Phase classification of parameter points and two-parameter sweeps.

For U = 0 the label follows from the closed forms: the superradiant branch is
fixed by the signs of (lambda, kappa), it is occupied when its zeta exceeds
sqrt(omega*Omega), and the normal phase (NP) coexists with it when the NP
stays stable as well.  For U != 0 only the variational oracle is used and the
label is read off the structure of its minimizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import analytic
from .analytic import SpBranch
from .errors import AxisError, ConvergenceError, SweepVerificationError
from .landscape import (StabilityClass, StabilityReport, classify_eigenvalues,
                        classify_stability, energy_at, hessian_eigenvalues,
                        marginal_tolerance)
from .model import (MU_MAX, MeanFieldState, ModelParams, OrderParameters, PhaseLabel,
                    angle_distance, order_parameters)
from .oracle import MinimizerSet, SearchSpec, global_minima

ANALYTIC = "analytic"
ORACLE = "oracle"

#: Sweepable parameter names, as used on the command line.
AXIS_NAMES = ("lambda", "kappa", "Omega", "t", "U")
DEFAULT_VERIFY_EVERY = 17
#: Spot-check tolerance on ground energies, relative to max(1, |E|).
VERIFY_TOL = 1e-6

_ORIGIN = MeanFieldState(0.0, 0.0, 0.0, 0.0)
_SMALL = 1e-6
_ANGLE_MATCH = 1e-3


@dataclass(frozen=True)
class PhaseReport:
    """Everything known about the ground state at one parameter point.

    ``order_params`` belong to the representative minimizer (the first listed
    [theta, eta] pair for discrete phases, theta = 0 for continuous families);
    ``branch_order_params`` lists them for every reported minimizer.  In a
    coexistence region ``coexisting`` holds the metastable normal-phase point.
    """

    params: ModelParams
    label: PhaseLabel
    np_stable: bool
    sp_branch: Optional[SpBranch]
    minimizers: MinimizerSet
    order_params: OrderParameters
    ground_energy: float
    stability: StabilityReport
    method: str
    coexisting: Tuple[MeanFieldState, ...] = ()

    @property
    def branch_order_params(self) -> Tuple[OrderParameters, ...]:
        return tuple(order_parameters(s) for s in self.minimizers.states)

    @property
    def representative(self) -> Optional[MeanFieldState]:
        return self.minimizers.states[0] if self.minimizers.states else None

    def summary(self) -> "SweepCell":
        return SweepCell(self.params, self.label, self.order_params, self.ground_energy,
                         self.stability.eigenvalues, self.method)


def _np_report(params, np_ok, branch, method, stability=None) -> PhaseReport:
    minim = MinimizerSet((_ORIGIN,), -0.5 * params.Omega, False)
    stab = stability or classify_stability(params, _ORIGIN, at_np=True)
    return PhaseReport(params, PhaseLabel.NP, np_ok, branch, minim,
                       order_parameters(_ORIGIN), minim.ground_energy, stab, method)


def _sp_label(params: ModelParams, branch: SpBranch, coexisting: bool) -> PhaseLabel:
    lam, kap = params.lam, params.kappa
    if branch is SpBranch.X:
        return PhaseLabel.X_SP if lam + kap > 0.0 else PhaseLabel.X_RSP
    if branch is SpBranch.P:
        if coexisting:
            return PhaseLabel.COEX_PSP_NP if lam > 0.0 else PhaseLabel.COEX_PRSP_NP
        return PhaseLabel.P_SP if lam > 0.0 else PhaseLabel.P_RSP
    if branch is SpBranch.DEG_LAMBDA:
        return PhaseLabel.SP0 if lam > 0.0 else PhaseLabel.RSP0
    return PhaseLabel.SPX if kap > 0.0 else PhaseLabel.SPP


def _classify_analytic(params: ModelParams, family_size: int) -> PhaseReport:
    np_ok = analytic.np_stable(params)
    branch = analytic.select_branch(params)
    if branch is None or not analytic.exceeds_threshold(analytic.branch_zeta(params, branch), params):
        # on the threshold itself the SP solution coincides with the NP point
        return _np_report(params, np_ok, branch, ANALYTIC)
    states = tuple(analytic.sp_solutions(params, branch, family_size))
    energy = analytic.sp_ground_energy(params, branch)
    degenerate = branch in (SpBranch.DEG_LAMBDA, SpBranch.DEG_KAPPA)
    minim = MinimizerSet(states, energy, degenerate)
    label = _sp_label(params, branch, np_ok)
    return PhaseReport(params, label, np_ok, branch, minim, order_parameters(states[0]),
                       energy, _family_stability(params, states[0], branch), ANALYTIC,
                       coexisting=(_ORIGIN,) if np_ok else ())


def energy_bounded(params: ModelParams, mu_max: float = MU_MAX) -> bool:
    """Whether the rho^2 coefficient ``omega + U (mu^2 - 1/2)`` stays positive on [0, mu_max]."""
    worst = -0.5 if params.U > 0.0 else mu_max * mu_max - 0.5
    return params.omega + params.U * worst > 0.0


def _locked(a: float, target: float) -> bool:
    return angle_distance(a, target) < _ANGLE_MATCH


def _oracle_label(state: MeanFieldState, minim: MinimizerSet) -> Tuple[PhaseLabel, Optional[SpBranch]]:
    """Phase label from the angle relations realized by the oracle minimizers."""
    if state.rho <= _SMALL or state.mu <= _SMALL:
        return PhaseLabel.NP, None
    diff, total = state.theta - state.eta, state.theta + state.eta
    if minim.degenerate_manifold and len(minim.states) > 1:
        other = minim.states[1]
        if _locked(other.theta - other.eta, diff):
            return (PhaseLabel.SP0 if _locked(diff, 0.0) else PhaseLabel.RSP0), SpBranch.DEG_LAMBDA
        return (PhaseLabel.SPX if _locked(total, 0.0) else PhaseLabel.SPP), SpBranch.DEG_KAPPA
    in_phase = _locked(diff, 0.0)
    if any(_locked(state.theta, a) for a in (0.0, math.pi)):
        return (PhaseLabel.X_SP if in_phase else PhaseLabel.X_RSP), SpBranch.X
    return (PhaseLabel.P_SP if in_phase else PhaseLabel.P_RSP), SpBranch.P


def _family_stability(params, state, branch) -> StabilityReport:
    """Stability with the Goldstone direction of a continuous family removed."""
    if branch is None:
        return classify_stability(params, state, at_np=True)
    eig = hessian_eigenvalues(params, state)
    if branch is SpBranch.DEG_LAMBDA:
        used = eig[:3]
    elif branch is SpBranch.DEG_KAPPA:
        used = eig[:2] + eig[3:]
    else:
        used = eig
    cls = classify_eigenvalues(used, marginal_tolerance(params))
    return StabilityReport(eig, cls, len(used) < 4)


def _classify_oracle(params: ModelParams, spec: Optional[SearchSpec]) -> PhaseReport:
    spec = spec or SearchSpec.default(params)
    if not energy_bounded(params, spec.mu_max):
        # the photon amplitude runs away: no ground state exists
        minim = MinimizerSet((), -math.inf, False)
        eig = hessian_eigenvalues(params, _ORIGIN)
        stab = StabilityReport(eig, classify_eigenvalues(eig[:2], marginal_tolerance(params)), True)
        return PhaseReport(params, PhaseLabel.UNSTABLE, False, None, minim,
                           order_parameters(_ORIGIN), -math.inf, stab, ORACLE)
    try:
        minim = global_minima(params, spec)
    except ConvergenceError as exc:
        # no stationary point inside the search domain (pinned at mu_max)
        best = exc.best or _ORIGIN
        e = energy_at(params, *best.as_tuple())
        minim = MinimizerSet((best,), e, False)
        stab = classify_stability(params, best, at_np=best.rho * best.mu <= _SMALL)
        return PhaseReport(params, PhaseLabel.UNSTABLE, False, None, minim,
                           order_parameters(best), e, stab, ORACLE)
    state = minim.states[0]
    label, branch = _oracle_label(state, minim)
    stab = _family_stability(params, state, branch)
    np_stab = classify_stability(params, _ORIGIN, at_np=True)
    np_ok = min(np_stab.eigenvalues[:2]) >= -marginal_tolerance(params)
    coexisting: Tuple[MeanFieldState, ...] = ()
    if label in (PhaseLabel.P_SP, PhaseLabel.P_RSP) and np_ok:
        label = PhaseLabel.COEX_PSP_NP if label is PhaseLabel.P_SP else PhaseLabel.COEX_PRSP_NP
        coexisting = (_ORIGIN,)
    # a marginal point (phase boundary) is not evidence of instability at this order
    if stab.stability_class in (StabilityClass.SADDLE, StabilityClass.MAXIMUM):
        label = PhaseLabel.UNSTABLE
    return PhaseReport(params, label, np_ok, branch, minim, order_parameters(state),
                       minim.ground_energy, stab, ORACLE, coexisting)


def classify(params: ModelParams, *, use_oracle: bool = False,
             spec: Optional[SearchSpec] = None,
             family_size: int = analytic.DEFAULT_FAMILY_SIZE) -> PhaseReport:
    """Classify the mean-field ground state at ``params``.

    U = 0 is handled in closed form unless ``use_oracle`` is set; U != 0
    always goes through the variational oracle.  UNSTABLE is only produced on
    the oracle path, when the best point found is a saddle or maximum of the
    energy, when no stationary point exists inside the search domain, or when
    the energy is unbounded below.

    Examples
    --------
    >>> classify(ModelParams(1.0, 1.0, 1.0, 1.0)).label
    <PhaseLabel.X_SP: 'X_SP'>
    >>> classify(ModelParams(1.0, 1.0, 1.0, -0.5)).label
    <PhaseLabel.COEX_PSP_NP: 'COEX_PSP_NP'>
    """
    if params.U != 0.0 or use_oracle:
        return _classify_oracle(params, spec)
    return _classify_analytic(params, family_size)


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class AxisSpec:
    """Uniform axis ``np.linspace(start, stop, count)`` over one parameter."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise AxisError(f"unknown axis {self.name!r}; choose from {', '.join(AXIS_NAMES)}")
        if int(self.count) != self.count or self.count < 1:
            raise AxisError(f"axis {self.name!r} needs a positive integer count, got {self.count!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise AxisError(f"axis {self.name!r} has non-finite bounds")
        if self.count == 1 and self.start != self.stop:
            raise AxisError(f"axis {self.name!r} with one point needs start == stop")

    @classmethod
    def parse(cls, name: str, text: str) -> "AxisSpec":
        """Parse ``"start:stop:count"``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise AxisError(f"axis {name!r} must look like start:stop:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise AxisError(f"cannot parse axis {name!r} from {text!r}: {exc}") from None
        return cls(name, start, stop, count)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepCell:
    params: ModelParams
    label: PhaseLabel
    order_params: OrderParameters
    ground_energy: float
    eigenvalues: Tuple[float, float, float, float]
    method: str


@dataclass(frozen=True)
class SweepGrid:
    """Row-major grid of cell summaries: ``cells[i * n2 + j]`` is (axis1[i], axis2[j])."""

    axes: Tuple[AxisSpec, AxisSpec]
    fixed: ModelParams
    cells: Tuple[SweepCell, ...]
    verified: Tuple[int, ...] = ()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.axes[0].count, self.axes[1].count

    def labels(self) -> np.ndarray:
        return np.array([c.label.value for c in self.cells], dtype=object).reshape(self.shape)

    def field(self, name: str) -> np.ndarray:
        """2-D array of an order parameter or ``ground_energy``."""
        if name == "ground_energy":
            vals = [c.ground_energy for c in self.cells]
        else:
            vals = [getattr(c.order_params, name) for c in self.cells]
        return np.array(vals, dtype=float).reshape(self.shape)

    def __iter__(self) -> Iterator[SweepCell]:
        return iter(self.cells)


def _check_axes(axes: Sequence[AxisSpec]):
    if len(axes) != 2:
        raise AxisError(f"a sweep needs exactly two axes, got {len(axes)}")
    names = [a.name for a in axes]
    if names[0] == names[1]:
        raise AxisError(f"duplicate axis {names[0]!r}")
    if "t" in names and "kappa" in names:
        raise AxisError("axes 't' and 'kappa' both fix kappa; use one of them")


def cell_params(fixed: ModelParams, assignment: Dict[str, float],
                fixed_t: Optional[float] = None) -> ModelParams:
    """Parameters of one cell; a ``t`` coordinate (or ``fixed_t``) rewrites kappa = t * lambda."""
    changes = {}
    for name, value in assignment.items():
        if name == "lambda":
            changes["lam"] = value
        elif name in ("kappa", "Omega", "U"):
            changes[name] = value
    params = fixed.replace(**changes)
    t = assignment.get("t", fixed_t)
    if t is not None:
        params = params.replace(kappa=t * params.lam)
    return params


def sweep(fixed: ModelParams, axis1: AxisSpec, axis2: AxisSpec, *,
          verify: bool = False, verify_every: int = DEFAULT_VERIFY_EVERY,
          use_oracle: bool = False, spec: Optional[SearchSpec] = None,
          fixed_t: Optional[float] = None) -> SweepGrid:
    """Classify every cell of a two-parameter grid (row-major, axis1 outer).

    ``fixed_t`` holds the ratio t = kappa / lambda fixed in every cell (it
    cannot be combined with a kappa or t axis).

    With ``verify`` every ``verify_every``-th analytic cell is re-solved by the
    oracle and a ground-energy mismatch beyond VERIFY_TOL raises
    SweepVerificationError.
    """
    _check_axes((axis1, axis2))
    if fixed_t is not None and {axis1.name, axis2.name} & {"kappa", "t"}:
        raise AxisError("a fixed t cannot be combined with a kappa or t axis")
    if verify_every < 1:
        raise AxisError(f"verify_every must be >= 1, got {verify_every}")
    cells: List[SweepCell] = []
    checked: List[int] = []
    v2 = axis2.values()
    for a in axis1.values():
        for b in v2:
            params = cell_params(fixed, {axis1.name: float(a), axis2.name: float(b)}, fixed_t)
            report = classify(params, use_oracle=use_oracle, spec=spec)
            index = len(cells)
            if verify and report.method == ANALYTIC and index % verify_every == 0:
                _verify_cell(report, index, spec)
                checked.append(index)
            cells.append(report.summary())
    return SweepGrid((axis1, axis2), fixed, tuple(cells), tuple(checked))


def _verify_cell(report: PhaseReport, index: int, spec: Optional[SearchSpec]):
    oracle_e = global_minima(report.params, spec).ground_energy
    if abs(oracle_e - report.ground_energy) > VERIFY_TOL * max(1.0, abs(oracle_e)):
        raise SweepVerificationError(
            f"cell {index} ({report.params.as_dict()}): analytic energy {report.ground_energy!r} "
            f"vs oracle {oracle_e!r}")
