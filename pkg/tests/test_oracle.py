import math

import pytest

from dicke_atlas.errors import ConvergenceError
from dicke_atlas.landscape import equilibrium_residuals
from dicke_atlas.model import MeanFieldState, ModelParams
from dicke_atlas.oracle import SearchSpec, global_minima, grid_search, refine


def test_spec_validation():
    with pytest.raises(ValueError):
        SearchSpec(n_rho=0)
    with pytest.raises(ValueError):
        SearchSpec(mu_max=1.0)
    assert SearchSpec.default(ModelParams(1, 1, 3, 0)).rho_max == pytest.approx(9.0)


def test_normal_phase():
    m = global_minima(ModelParams(1, 1, 0.3, 0.2))
    assert m.ground_energy == pytest.approx(-0.5, abs=1e-12)
    assert m.states[0].rho < 1e-6 and not m.degenerate_manifold


def test_discrete_pair():
    m = global_minima(ModelParams(1, 1, 1, 1))
    assert m.ground_energy == pytest.approx(-1.0625, abs=1e-12)
    assert len(m.states) == 2
    assert not m.degenerate_manifold
    for s in m.states:
        assert max(abs(r) for r in equilibrium_residuals(ModelParams(1, 1, 1, 1), s)) < 1e-9


def test_continuous_family_detected():
    m = global_minima(ModelParams(1, 1, 1.5, 0.0))
    assert m.degenerate_manifold
    assert len(m.states) == 16


def test_deterministic():
    p = ModelParams(1, 1, 2.0, -1.0)
    assert global_minima(p) == global_minima(p)


def test_refine_converges_from_grid_point():
    p = ModelParams(1.0, 0.8, 1.1, -0.6, 0.1)
    start = grid_search(p)[0]
    s = refine(p, start)
    assert max(abs(r) for r in equilibrium_residuals(p, s)) < 1e-9


def test_refine_runaway_raises():
    # omega + U (mu^2 - 1/2) < 0: energy unbounded in rho
    p = ModelParams(1.0, 1.0, 1.0, 1.0, U=-5.0)
    with pytest.raises(ConvergenceError):
        refine(p, MeanFieldState(1.0, 0.1))


def test_iteration_cap():
    p = ModelParams(1, 1, 1, 1)
    with pytest.raises(ConvergenceError):
        refine(p, MeanFieldState(0.1, 0.1, 1.0, 2.0), max_iter=1)
