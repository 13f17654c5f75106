"""Brute-force variational minimizer of the scaled mean-field energy.

The oracle knows nothing about the closed-form solutions: it evaluates the
energy on a dense 4-D grid over ``(rho, mu, theta, eta)``, keeps the local grid
minima, polishes each by cyclic coordinate descent with a golden-section line
search, and deduplicates the survivors.  It is the reference for every
analytic result and the only solver for U != 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from .errors import ConvergenceError
from .landscape import energy_at, residuals_at
from .model import MU_MAX, TWO_PI, MeanFieldState, ModelParams, angle_distance

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: Family members are reported at this many canonical theta values.
MANIFOLD_SAMPLES = 16
_MANIFOLD_PROBE = 0.3
_SMALL = 1e-6
_RHO_RUNAWAY = 1e8
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SearchSpec:
    rho_max: float = 2.0
    mu_max: float = 0.95
    n_rho: int = 48
    n_mu: int = 48
    n_theta: int = 32
    n_eta: int = 32
    refine_tol: float = 1e-10
    #: relative; absolute tolerance is ``degeneracy_tol * max(1, |E|)``
    degeneracy_tol: float = 1e-9
    angle_tol: float = 1e-4
    #: relative window above the best grid value for keeping candidates
    energy_window: float = 0.5
    max_candidates: int = 64
    #: candidates kept per (rho, mu) cell; bounds the cost of flat angle valleys
    per_cell: int = 4
    max_iter: int = 100_000

    def __post_init__(self):
        for name in ("n_rho", "n_mu", "n_theta", "n_eta", "max_candidates", "per_cell", "max_iter"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("rho_max", "refine_tol", "degeneracy_tol", "angle_tol", "energy_window"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.mu_max <= MU_MAX:
            raise ValueError(f"mu_max must lie in (0, {MU_MAX}]")

    @classmethod
    def default(cls, params: ModelParams, **overrides) -> "SearchSpec":
        """Box sized to the couplings: SP amplitudes scale as zeta/omega."""
        rho_max = max(2.0, 3.0 * (abs(params.lam) + abs(params.kappa)) / params.omega)
        return replace(cls(rho_max=rho_max), **overrides)


@dataclass(frozen=True)
class MinimizerSet:
    states: Tuple[MeanFieldState, ...]
    ground_energy: float
    degenerate_manifold: bool


def _grid_axes(spec: SearchSpec):
    rho = np.linspace(0.0, spec.rho_max, spec.n_rho)
    mu = np.linspace(0.0, spec.mu_max, spec.n_mu)
    theta = TWO_PI * np.arange(spec.n_theta) / spec.n_theta
    eta = TWO_PI * np.arange(spec.n_eta) / spec.n_eta
    return rho, mu, theta, eta


def grid_energies(params: ModelParams, spec: SearchSpec) -> np.ndarray:
    """Energy on the full search grid, shape (n_rho, n_mu, n_theta, n_eta)."""
    rho, mu, theta, eta = _grid_axes(spec)
    r = rho[:, None]
    m = mu[None, :]
    amp = params.omega * r ** 2 + (params.Omega + params.U * r ** 2) * (m ** 2 - 0.5)
    cross = 2.0 * r * m * np.sqrt(1.0 - m ** 2)
    th = theta[:, None]
    et = eta[None, :]
    zeta = params.lam * np.cos(th - et) + params.kappa * np.cos(th + et)
    return amp[:, :, None, None] - cross[:, :, None, None] * zeta[None, None, :, :]


def _local_minima_mask(E: np.ndarray) -> np.ndarray:
    """Cells not above any axis neighbour; angle axes are periodic."""
    mask = np.ones(E.shape, dtype=bool)
    for axis in (0, 1):
        n = E.shape[axis]
        if n < 2:
            continue
        lo = [slice(None)] * 4
        hi = [slice(None)] * 4
        lo[axis] = slice(0, n - 1)
        hi[axis] = slice(1, n)
        lo, hi = tuple(lo), tuple(hi)
        mask[lo] &= E[lo] <= E[hi]
        mask[hi] &= E[hi] <= E[lo]
    for axis in (2, 3):
        if E.shape[axis] < 2:
            continue
        mask &= E <= np.roll(E, 1, axis=axis)
        mask &= E <= np.roll(E, -1, axis=axis)
    return mask


def grid_search(params: ModelParams, spec: Optional[SearchSpec] = None) -> List[MeanFieldState]:
    """Local grid minima within the energy window, best first.

    Cells on the rho = 0 or mu = 0 planes carry no angle information and are
    collapsed onto a single representative with zero angles.
    """
    spec = spec or SearchSpec.default(params)
    rho, mu, theta, eta = _grid_axes(spec)
    E = grid_energies(params, spec)
    best = float(E.min())
    window = spec.energy_window * max(1.0, abs(best))
    idx = np.argwhere(_local_minima_mask(E) & (E <= best + window))
    seen = set()
    rows = []
    for i, j, k, l in idx:
        if i == 0 or j == 0:
            k = l = 0
        key = (int(i), int(j), int(k), int(l))
        if key in seen:
            continue
        seen.add(key)
        rows.append((float(E[i, j, k, l]), rho[i], mu[j], theta[k], eta[l]))
    rows.sort()
    per_cell = {}
    out = []
    for e, r, m, th, et in rows:
        n = per_cell.get((r, m), 0)
        if n >= spec.per_cell:
            continue
        per_cell[(r, m)] = n + 1
        out.append(MeanFieldState(r, m, th, et))
        if len(out) >= spec.max_candidates:
            break
    return out


def _gradient(params: ModelParams, x: List[float], k: int) -> float:
    """Partial derivative of the energy along coordinate k."""
    rho, mu, theta, eta = x
    lam, kap, U = params.lam, params.kappa, params.U
    c = math.sqrt(1.0 - mu * mu)
    if k == 0:
        zp = lam * math.cos(theta - eta) + kap * math.cos(theta + eta)
        return 2.0 * params.omega * rho + 2.0 * U * rho * (mu * mu - 0.5) - 2.0 * mu * c * zp
    if k == 1:
        zp = lam * math.cos(theta - eta) + kap * math.cos(theta + eta)
        return 2.0 * (params.Omega + U * rho * rho) * mu - 2.0 * rho * (1.0 - 2.0 * mu * mu) / c * zp
    a = lam * math.sin(theta - eta)
    b = kap * math.sin(theta + eta)
    if k == 2:
        return 2.0 * rho * mu * c * (a + b)
    return 2.0 * rho * mu * c * (b - a)


class _Coordinate:
    """Energy and its derivative along one coordinate with the others frozen."""

    def __init__(self, params, x, k):
        self.params, self.x, self.k = params, list(x), k

    def f(self, v):
        self.x[self.k] = v
        return energy_at(self.params, *self.x)

    def df(self, v):
        self.x[self.k] = v
        return _gradient(self.params, self.x, self.k)


class _Direction:
    """Energy along the ray ``x + s * d`` (pattern move across a zig-zag valley)."""

    def __init__(self, params, x, d):
        self.params, self.x0, self.d = params, list(x), list(d)

    def point(self, s):
        return [xi + s * di for xi, di in zip(self.x0, self.d)]

    def f(self, s):
        return energy_at(self.params, *self.point(s))

    def df(self, s):
        p = self.point(s)
        return sum(_gradient(self.params, p, k) * self.d[k] for k in range(4) if self.d[k])

    def bounds(self, mu_max):
        lo, hi = -math.inf, math.inf
        for k, (vmin, vmax) in ((0, (0.0, math.inf)), (1, (0.0, mu_max))):
            dk = self.d[k]
            if dk > 0.0:
                lo = max(lo, (vmin - self.x0[k]) / dk)
                hi = min(hi, (vmax - self.x0[k]) / dk)
            elif dk < 0.0:
                lo = max(lo, (vmax - self.x0[k]) / dk)
                hi = min(hi, (vmin - self.x0[k]) / dk)
        return min(lo, 0.0), max(hi, 0.0)


def _golden(f, a, b, tol):
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _polish(coord, x, fx, lo, hi):
    """Drive the partial derivative to zero near x by bisection.

    Golden section stalls where energy differences hit round-off (about
    sqrt(eps) in the coordinate); the derivative keeps its sign information
    well below that.
    """
    half = 1e-9 * max(1.0, abs(x))
    for _ in range(12):
        a, b = max(lo, x - half), min(hi, x + half)
        ga, gb = coord.df(a), coord.df(b)
        if ga < 0.0 < gb:
            break
        half *= 4.0
    else:
        return x, fx
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        g = coord.df(mid)
        if g == 0.0:
            a = b = mid
            break
        if g < 0.0:
            a = mid
        else:
            b = mid
    cand = 0.5 * (a + b)
    fc = coord.f(cand)
    # accept round-off level increases: the derivative is the sharper criterion here
    if fc <= fx + 4.0 * _EPS * max(1.0, abs(fx)):
        return cand, min(fc, fx)
    return x, fx


def _line_minimize(coord, x0, f0, step, lo, hi):
    """Golden-section minimization around x0 with bracket expansion and polish."""
    x, fx = x0, f0
    for _ in range(60):
        a, b = max(lo, x - step), min(hi, x + step)
        tol = max(1e-10 * (b - a), 1e-15 * max(1.0, abs(x)))
        xn, fn = _golden(coord.f, a, b, tol)
        if lo == a:
            fa = coord.f(a)
            if fa <= fn:
                xn, fn = a, fa
        if fn <= fx:
            moved = xn != x
            x, fx = xn, fn
        else:
            moved = False
        near_edge = (b - x < 2.0 * tol and b < hi) or (x - a < 2.0 * tol and a > lo)
        if not (moved and near_edge):
            break
        step *= 2.0
    return _polish(coord, x, fx, lo, hi)


def refine(params: ModelParams, init: MeanFieldState, tol: float = 1e-10, *,
           mu_max: float = 0.95, max_iter: int = 100_000, stall_sweeps: int = 40,
           initial_steps: Optional[Tuple[float, float, float, float]] = None,
           abandon_above: Optional[float] = None, patience: int = 100) -> MeanFieldState:
    """Cyclic coordinate descent from ``init`` until every stationarity residual is below tol.

    Each sweep line-minimizes rho, mu, theta, eta in turn (rho >= 0 and
    0 <= mu <= mu_max are enforced, angles are free and wrapped at the end).
    The energy never increases.  Raises ConvergenceError, carrying the best
    state, after ``max_iter`` sweeps or ``stall_sweeps`` sweeps without any
    energy decrease.

    With ``abandon_above`` set, the descent also gives up once ``patience``
    sweeps have passed with the energy still above that level: global_minima
    passes the best energy already converged, so candidates creeping down a
    marginal (quartic) valley towards a known point are not polished forever.
    """
    x = [init.rho, min(init.mu, mu_max), init.theta, init.eta]
    fx = energy_at(params, *x)
    bounds = [(0.0, math.inf), (0.0, mu_max), (-math.inf, math.inf), (-math.inf, math.inf)]
    steps = list(initial_steps or (0.1, 0.05, 0.2, 0.2))
    step_cap = (math.inf, mu_max, 0.5 * math.pi, 0.5 * math.pi)
    stalled = 0
    for sweep in range(max_iter):
        if abandon_above is not None and sweep >= patience and fx > abandon_above:
            break
        if not math.isfinite(fx) or x[0] > _RHO_RUNAWAY:
            raise ConvergenceError("energy unbounded below along rho", best=None)
        res = residuals_at(params, *x)
        if max(abs(r) for r in res) < tol:
            return MeanFieldState(x[0], x[1], x[2], x[3])
        f_start = fx
        x_start = list(x)
        for k in range(4):
            coord = _Coordinate(params, x, k)
            lo, hi = bounds[k]
            xk, fx_new = _line_minimize(coord, x[k], fx, steps[k], lo, hi)
            steps[k] = min(step_cap[k], max(4.0 * abs(xk - x[k]), 1e-7))
            x[k], fx = xk, fx_new
        # pattern move along the sweep displacement (cures zig-zag in narrow valleys)
        d = [a - b for a, b in zip(x, x_start)]
        if any(d):
            ray = _Direction(params, x, d)
            lo, hi = ray.bounds(mu_max)
            sn, fn = _line_minimize(ray, 0.0, fx, 1.0, lo, hi)
            if fn < fx:
                x[:], fx = ray.point(sn), fn
                x[0], x[1] = max(x[0], 0.0), min(max(x[1], 0.0), mu_max)
        if fx < f_start - 1e-15 * max(1.0, abs(fx)):
            stalled = 0
        else:
            stalled += 1
            if stalled >= stall_sweeps:
                break
    best = MeanFieldState(x[0], x[1], x[2], x[3])
    raise ConvergenceError(
        f"coordinate descent did not reach residual {tol} (energy {fx!r})", best=best)


def _same_state(a: MeanFieldState, b: MeanFieldState, angle_tol: float) -> bool:
    if abs(a.rho - b.rho) > _SMALL or abs(a.mu - b.mu) > _SMALL:
        return False
    if max(a.rho, b.rho) > _SMALL and angle_distance(a.theta, b.theta) > angle_tol:
        return False
    if max(a.mu, b.mu) > _SMALL and angle_distance(a.eta, b.eta) > angle_tol:
        return False
    return True


def _canonical(state: MeanFieldState) -> MeanFieldState:
    """Zero out angles that carry no information."""
    theta = state.theta if state.rho > _SMALL else 0.0
    eta = state.eta if state.mu > _SMALL else 0.0
    if theta == state.theta and eta == state.eta:
        return state
    return MeanFieldState(state.rho, state.mu, theta, eta)


def _flat_direction(params: ModelParams, s: MeanFieldState, tol: float) -> Optional[int]:
    """+1 (co-rotating) or -1 (counter-rotating) if rotating the angles keeps the energy."""
    if s.rho * s.mu <= _SMALL:
        return None
    e0 = energy_at(params, *s.as_tuple())
    for sign in (1, -1):
        e = energy_at(params, s.rho, s.mu, s.theta + _MANIFOLD_PROBE, s.eta + sign * _MANIFOLD_PROBE)
        if abs(e - e0) <= tol:
            return sign
    return None


def global_minima(params: ModelParams, spec: Optional[SearchSpec] = None) -> MinimizerSet:
    spec = spec or SearchSpec.default(params)
    refined = []
    failures = []
    best_energy = None
    for cand in grid_search(params, spec):
        try:
            s = refine(params, cand, spec.refine_tol, mu_max=spec.mu_max, max_iter=spec.max_iter,
                       abandon_above=best_energy)
        except ConvergenceError as exc:
            failures.append(exc)
            continue
        s = _canonical(s)
        e = energy_at(params, *s.as_tuple())
        best_energy = e if best_energy is None else min(best_energy, e)
        refined.append((e, s.as_tuple(), s))
    if not refined:
        best = min((f.best for f in failures if f.best is not None),
                   key=lambda s: energy_at(params, *s.as_tuple()), default=None)
        raise ConvergenceError("no grid candidate converged", best=best)
    refined.sort(key=lambda item: (item[0], item[1]))
    ground = refined[0][0]
    tol = spec.degeneracy_tol * max(1.0, abs(ground))
    kept: List[MeanFieldState] = []
    for e, _, s in refined:
        if e > ground + tol:
            break
        if not any(_same_state(s, k, spec.angle_tol) for k in kept):
            kept.append(s)
    direction = _flat_direction(params, kept[0], tol)
    if direction is not None:
        s0 = kept[0]
        kept = [MeanFieldState(s0.rho, s0.mu, th, s0.eta + direction * (th - s0.theta))
                for th in (TWO_PI * k / MANIFOLD_SAMPLES for k in range(MANIFOLD_SAMPLES))]
    return MinimizerSet(states=tuple(kept), ground_energy=ground,
                        degenerate_manifold=direction is not None)
