"""Discrete and continuous symmetries acting on (parameters, mean-field state).

Two reflection groups act on the model.  ``W = {e, Sx, Sp, C2}`` reflects the
phase differences (theta, eta) in the position-momentum plane of each mode and
leaves the couplings alone.  ``W' = {e, St, StPrime, C2prime}`` reflects the
coupling plane (lambda, kappa) about the lines t = +1 and t = -1, together
with the matching change of eta that keeps the energy invariant:

=========== ============================== ===========================
transform   state (theta, eta)             couplings (lambda, kappa)
=========== ============================== ===========================
Sx, Tx      (-theta, -eta)                 unchanged
Sp, Tp      (pi - theta, pi - eta)         unchanged
C2          (theta + pi, eta + pi)         unchanged
ParityPiS   (theta + pi, eta + pi)         unchanged
V, St       (theta, -eta)                  (kappa, lambda)
Vprime,     (theta, pi - eta)              (-kappa, -lambda)
StPrime
C2prime     (theta, eta + pi)              (-lambda, -kappa)
U1 plus     (theta + phi, eta + phi)       unchanged
U1 minus    (theta + phi, eta - phi)       unchanged
=========== ============================== ===========================

Amplitudes (rho, mu) are never changed.  The analysis works on mean-field
data only; no operator-level unitaries are built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import UnsupportedU
from .landscape import energy_at
from .model import (MeanFieldState, ModelParams, PhaseLabel, CONTINUUM_PHASES, TWO_PI,
                    angle_distance, quadratures)
from .oracle import MinimizerSet, SearchSpec, global_minima
from .phases import classify

#: Seed of every pseudo-random sample drawn here.
SEED = 0xD1CE
ENERGY_TOL = 1e-12
#: Angle tolerance when comparing minimizer sets.
SET_ANGLE_TOL = 1e-6
_AMP_TOL = 1e-6
_QUAD_TOL = 1e-9

_PRIMITIVES = ("Sx", "Sp", "C2", "ParityPiS", "Tx", "Tp", "V", "Vprime",
               "St", "StPrime", "C2prime")


@dataclass(frozen=True)
class Transform:
    """A symmetry operation; build with the module constants, :func:`U1` or :func:`Compose`.

    ``Compose(a, b, c)`` applies ``a`` first, then ``b``, then ``c``.
    """

    kind: str
    phi: float = 0.0
    convention: str = "plus"
    parts: Tuple["Transform", ...] = ()

    def __post_init__(self):
        if self.kind not in _PRIMITIVES + ("U1", "Compose"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == "U1" and self.convention not in ("plus", "minus"):
            raise ValueError(f"U1 convention must be 'plus' or 'minus', got {self.convention!r}")

    def __str__(self):
        if self.kind == "U1":
            return f"U1({self.phi:g},{self.convention})"
        if self.kind == "Compose":
            return "Compose(" + ", ".join(str(p) for p in self.parts) + ")"
        return self.kind


SX = Transform("Sx")
SP = Transform("Sp")
C2 = Transform("C2")
PARITY = Transform("ParityPiS")
TX = Transform("Tx")
TP = Transform("Tp")
V = Transform("V")
VPRIME = Transform("Vprime")
ST = Transform("St")
STPRIME = Transform("StPrime")
C2PRIME = Transform("C2prime")
IDENTITY = Transform("Compose")


def U1(phi: float, convention: str = "plus") -> Transform:
    """Continuous phase rotation: co-rotating (``plus``) or counter-rotating (``minus``)."""
    return Transform("U1", phi=float(phi), convention=convention)


def Compose(*parts: Transform) -> Transform:
    flat: List[Transform] = []
    for p in parts:
        flat.extend(p.parts if p.kind == "Compose" else (p,))
    return Transform("Compose", parts=tuple(flat))


def _apply_raw(tr: Transform, lam: float, kap: float, theta: float, eta: float):
    k = tr.kind
    if k in ("Sx", "Tx"):
        return lam, kap, -theta, -eta
    if k in ("Sp", "Tp"):
        return lam, kap, math.pi - theta, math.pi - eta
    if k in ("C2", "ParityPiS"):
        return lam, kap, theta + math.pi, eta + math.pi
    if k in ("V", "St"):
        return kap, lam, theta, -eta
    if k in ("Vprime", "StPrime"):
        return -kap, -lam, theta, math.pi - eta
    if k == "C2prime":
        return -lam, -kap, theta, eta + math.pi
    if k == "U1":
        sign = 1.0 if tr.convention == "plus" else -1.0
        return lam, kap, theta + tr.phi, eta + sign * tr.phi
    for part in tr.parts:
        lam, kap, theta, eta = _apply_raw(part, lam, kap, theta, eta)
    return lam, kap, theta, eta


def apply(tr: Transform, params: ModelParams,
          state: MeanFieldState) -> Tuple[ModelParams, MeanFieldState]:
    """Image of a (parameters, state) pair; angles come back wrapped to [0, 2*pi).

    Examples
    --------
    >>> p, s = apply(ST, ModelParams(1, 1, 1.0, -0.5), MeanFieldState(0.5, 0.5))
    >>> (p.lam, p.kappa)
    (-0.5, 1.0)
    """
    lam, kap, theta, eta = _apply_raw(tr, params.lam, params.kappa, state.theta, state.eta)
    new_params = params if (lam, kap) == (params.lam, params.kappa) else params.replace(lam=lam, kappa=kap)
    return new_params, MeanFieldState(state.rho, state.mu, theta, eta)


def same_point(a: MeanFieldState, b: MeanFieldState, tol: float = _QUAD_TOL) -> bool:
    """Equality of the two coherences (angles of vanishing amplitudes are irrelevant)."""
    return all(abs(x - y) <= tol for x, y in zip(quadratures(a), quadratures(b)))


def _pairs_equal(pa, sa, pb, sb, tol=1e-12) -> bool:
    if (pa.lam, pa.kappa) != (pb.lam, pb.kappa):
        return False
    return (abs(sa.rho - sb.rho) <= tol and abs(sa.mu - sb.mu) <= tol
            and angle_distance(sa.theta, sb.theta) <= tol and angle_distance(sa.eta, sb.eta) <= tol)


def sample_states(n: int, seed: int = SEED, rho_max: float = 3.0,
                  mu_max: float = 0.95) -> List[MeanFieldState]:
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.0, rho_max, n)
    m = rng.uniform(0.0, mu_max, n)
    th = rng.uniform(0.0, TWO_PI, n)
    et = rng.uniform(0.0, TWO_PI, n)
    return [MeanFieldState(*row) for row in zip(r, m, th, et)]


def sample_params(n: int, seed: int = SEED, scale: float = 2.0) -> List[ModelParams]:
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.2, 2.0, (n, 2))
    c = rng.uniform(-scale, scale, (n, 2))
    return [ModelParams(w[i, 0], w[i, 1], c[i, 0], c[i, 1]) for i in range(n)]


# --------------------------------------------------------------------------
# group relations


GROUPS = {"W": (SX, SP), "Wprime": (ST, STPRIME)}


def _acts_as_identity(tr: Transform, samples) -> bool:
    for p, s in samples:
        p2, s2 = apply(tr, p, s)
        if not _pairs_equal(p, s, p2, s2):
            return False
    return True


def _acts_differently(a: Transform, b: Transform, samples) -> bool:
    for p, s in samples:
        pa, sa = apply(a, p, s)
        pb, sb = apply(b, p, s)
        if not _pairs_equal(pa, sa, pb, sb):
            return True
    return False


def check_coxeter_relations(group: str, n_samples: int = 100, seed: int = SEED) -> bool:
    """Verify ``s1^2 = s2^2 = (s1 s2)^2 = (s2 s1)^2 = e`` on sampled pairs.

    Also checks that the four elements {e, s1, s2, s1 s2} act distinctly, so
    the relations describe the Klein four-group A1 + A1 and not a quotient.
    """
    if group not in GROUPS:
        raise ValueError(f"group must be one of {sorted(GROUPS)}, got {group!r}")
    s1, s2 = GROUPS[group]
    samples = list(zip(sample_params(n_samples, seed), sample_states(n_samples, seed + 1)))
    relations = (Compose(s1, s1), Compose(s2, s2),
                 Compose(s1, s2, s1, s2), Compose(s2, s1, s2, s1))
    if not all(_acts_as_identity(r, samples) for r in relations):
        return False
    elements = (IDENTITY, s1, s2, Compose(s1, s2))
    return all(_acts_differently(elements[i], elements[j], samples)
               for i in range(4) for j in range(i + 1, 4))


# --------------------------------------------------------------------------
# invariance


def energy_invariance(tr: Transform, params: ModelParams, n_samples: int = 1000,
                      seed: int = SEED) -> float:
    """Largest ``|E(image) - E(original)|`` over pseudo-random states."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    worst = 0.0
    for s in sample_states(n_samples, seed):
        p2, s2 = apply(tr, params, s)
        e1 = energy_at(params, *s.as_tuple())
        e2 = energy_at(p2, *s2.as_tuple())
        worst = max(worst, abs(e2 - e1))
    return worst


# --------------------------------------------------------------------------
# minimizer sets


def _family_relation(states: Sequence[MeanFieldState]) -> Optional[Tuple[int, float]]:
    """(sign, value) with ``theta - sign*eta = value`` constant along a sampled family."""
    if len(states) < 2:
        return None
    a, b = states[0], states[1]
    for sign in (1, -1):
        va, vb = a.theta - sign * a.eta, b.theta - sign * b.eta
        if angle_distance(va, vb) <= SET_ANGLE_TOL:
            return sign, va
    return None


def in_minimizer_set(state: MeanFieldState, minim: MinimizerSet) -> bool:
    """Membership with angle tolerance; continuous families are tested by their angle relation."""
    if minim.degenerate_manifold:
        rel = _family_relation(minim.states)
        ref = minim.states[0]
        if rel is not None and abs(state.rho - ref.rho) <= _AMP_TOL and abs(state.mu - ref.mu) <= _AMP_TOL:
            sign, value = rel
            return angle_distance(state.theta - sign * state.eta, value) <= SET_ANGLE_TOL
        return False
    for m in minim.states:
        if abs(state.rho - m.rho) > _AMP_TOL or abs(state.mu - m.mu) > _AMP_TOL:
            continue
        if same_point(state, m, SET_ANGLE_TOL * max(1.0, m.rho)):
            return True
    return False


def sets_match(images: Iterable[MeanFieldState], minim: MinimizerSet) -> bool:
    """Images lie in ``minim`` and, for discrete sets, cover it."""
    images = list(images)
    if not all(in_minimizer_set(s, minim) for s in images):
        return False
    if minim.degenerate_manifold:
        return True
    image_set = MinimizerSet(tuple(images), minim.ground_energy, False)
    return all(in_minimizer_set(m, image_set) for m in minim.states)


def minimizer_images_match(tr: Transform, params: ModelParams, minim: MinimizerSet,
                           image_minim: MinimizerSet) -> bool:
    """Whether ``tr`` maps the minimizers at ``params`` exactly onto ``image_minim``."""
    return sets_match((apply(tr, params, s)[1] for s in minim.states), image_minim)


# --------------------------------------------------------------------------
# state-fixed table


@dataclass(frozen=True)
class SymmetryVerdict:
    energy_invariant: bool
    manifold_preserved: bool
    each_state_fixed: bool
    phase_image: PhaseLabel

    def as_dict(self) -> dict:
        return {"energy_invariant": self.energy_invariant,
                "manifold_preserved": self.manifold_preserved,
                "each_state_fixed": self.each_state_fixed,
                "phase_image": self.phase_image.value}


#: Column order of the table; U1 uses the convention of the continuous family it tests.
TABLE2_COLUMNS = ("U1", "Sx", "Sp", "C2", "St", "StPrime", "C2prime")

_T, _F = True, False
#: Expected state-fixed verdicts per phase, columns as TABLE2_COLUMNS.
TABLE2_EXPECTED: Dict[PhaseLabel, Tuple[bool, ...]] = {
    PhaseLabel.NP: (_T, _T, _T, _T, _T, _T, _T),
    PhaseLabel.SP0: (_F, _F, _F, _F, _F, _F, _F),
    PhaseLabel.RSP0: (_F, _F, _F, _T, _F, _F, _F),
    PhaseLabel.SPX: (_F, _T, _F, _F, _F, _F, _F),
    PhaseLabel.SPP: (_F, _F, _T, _F, _F, _F, _F),
    PhaseLabel.X_SP: (_F, _T, _F, _F, _T, _F, _F),
    PhaseLabel.X_RSP: (_F, _T, _F, _F, _T, _F, _F),
    PhaseLabel.P_SP: (_F, _F, _T, _F, _F, _T, _F),
    PhaseLabel.P_RSP: (_F, _F, _T, _F, _F, _T, _F),
}
#: Coexistence regions are compared on their global-minimum (superradiant) row.
_ROW_OF = {PhaseLabel.COEX_PSP_NP: PhaseLabel.P_SP, PhaseLabel.COEX_PRSP_NP: PhaseLabel.P_RSP}

#: Generic rotation angle used for the U(1) column.
U1_TEST_ANGLE = 1.0


def _u1_for(params: ModelParams) -> Transform:
    # the lambda = 0 family rotates eta against theta
    convention = "minus" if params.lam == 0.0 and params.kappa != 0.0 else "plus"
    return U1(U1_TEST_ANGLE, convention)


def table2_transforms(params: ModelParams) -> Dict[str, Transform]:
    return {"U1": _u1_for(params), "Sx": SX, "Sp": SP, "C2": C2,
            "St": ST, "StPrime": STPRIME, "C2prime": C2PRIME}


def _require_u0(params: ModelParams):
    if params.U != 0.0:
        raise UnsupportedU(f"symmetry tables are defined for U = 0, got U = {params.U}")


def table2_verdicts(params: ModelParams, spec: Optional[SearchSpec] = None,
                    n_samples: int = 200) -> Dict[str, SymmetryVerdict]:
    """Verdicts at three granularities for each state-fixed table column, from oracle minimizers.

    ``manifold_preserved`` and ``each_state_fixed`` compare states only (the
    W' reflections also move the couplings; the image coupling point is
    reported through ``phase_image``).
    """
    _require_u0(params)
    minim = global_minima(params, spec)
    out = {}
    for name, tr in table2_transforms(params).items():
        images = [apply(tr, params, s) for s in minim.states]
        image_params = images[0][0]
        fixed = all(same_point(s, img) for s, (_, img) in zip(minim.states, images))
        preserved = sets_match((img for _, img in images), minim)
        out[name] = SymmetryVerdict(
            energy_invariant=energy_invariance(tr, params, n_samples) <= ENERGY_TOL,
            manifold_preserved=preserved,
            each_state_fixed=fixed,
            phase_image=classify(image_params).label,
        )
    return out


@dataclass(frozen=True)
class Table2Row:
    phase: PhaseLabel
    verdicts: Dict[str, SymmetryVerdict]
    expected: Optional[Tuple[bool, ...]]
    #: "match", "mismatch" or "ambiguous" (continuous families)
    status: str

    def observed(self) -> Tuple[bool, ...]:
        return tuple(self.verdicts[c].each_state_fixed for c in TABLE2_COLUMNS)


def table2_row(params: ModelParams, spec: Optional[SearchSpec] = None) -> Table2Row:
    """Compare the state-fixed verdicts at ``params`` with the expected table row."""
    _require_u0(params)
    phase = classify(params).label
    verdicts = table2_verdicts(params, spec)
    row = _ROW_OF.get(phase, phase)
    expected = TABLE2_EXPECTED.get(row)
    if phase in CONTINUUM_PHASES:
        status = "ambiguous"
    else:
        observed = tuple(verdicts[c].each_state_fixed for c in TABLE2_COLUMNS)
        status = "match" if observed == expected else "mismatch"
    return Table2Row(phase, verdicts, expected, status)


# --------------------------------------------------------------------------
# phase exchange under W'


_L = PhaseLabel
EXCHANGE_TABLE: Dict[str, Dict[PhaseLabel, PhaseLabel]] = {
    "St": {
        _L.P_SP: _L.P_RSP, _L.P_RSP: _L.P_SP,
        _L.SP0: _L.SPX, _L.SPX: _L.SP0,
        _L.RSP0: _L.SPP, _L.SPP: _L.RSP0,
        _L.X_SP: _L.X_SP, _L.X_RSP: _L.X_RSP, _L.NP: _L.NP,
        _L.COEX_PSP_NP: _L.COEX_PRSP_NP, _L.COEX_PRSP_NP: _L.COEX_PSP_NP,
    },
    "StPrime": {
        _L.X_SP: _L.X_RSP, _L.X_RSP: _L.X_SP,
        _L.SPX: _L.RSP0, _L.RSP0: _L.SPX,
        _L.SPP: _L.SP0, _L.SP0: _L.SPP,
        _L.P_SP: _L.P_SP, _L.P_RSP: _L.P_RSP, _L.NP: _L.NP,
        _L.COEX_PSP_NP: _L.COEX_PSP_NP, _L.COEX_PRSP_NP: _L.COEX_PRSP_NP,
    },
}


def phase_exchange_check(tr: Transform, params: ModelParams) -> Tuple[PhaseLabel, PhaseLabel, bool]:
    """Classify a point and its W' image; check the pair and the minimizer correspondence."""
    _require_u0(params)
    if tr.kind not in EXCHANGE_TABLE:
        raise ValueError(f"phase exchange is tabulated for St and StPrime, got {tr}")
    original = classify(params)
    image_params = apply(tr, params, MeanFieldState(0.0, 0.0))[0]
    image = classify(image_params)
    pair_ok = EXCHANGE_TABLE[tr.kind].get(original.label) is image.label
    states_ok = minimizer_images_match(tr, params, original.minimizers, image.minimizers)
    return original.label, image.label, bool(pair_ok and states_ok)
