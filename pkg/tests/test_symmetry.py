import math

import pytest
from hypothesis import given, settings, strategies as st

from dicke_atlas import symmetry as sym
from dicke_atlas.landscape import energy_at
from dicke_atlas.model import MeanFieldState, ModelParams, PhaseLabel

params_st = st.builds(ModelParams, st.floats(0.2, 2), st.floats(0.2, 2), st.floats(-2, 2), st.floats(-2, 2))
states_st = st.builds(MeanFieldState, st.floats(0, 3), st.floats(0, 0.95),
                      st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
TRANSFORMS = [sym.SX, sym.SP, sym.C2, sym.PARITY, sym.TX, sym.TP, sym.V, sym.VPRIME,
              sym.ST, sym.STPRIME, sym.C2PRIME]


@settings(max_examples=100, deadline=None)
@given(params_st, states_st, st.sampled_from(TRANSFORMS))
def test_energy_invariant(p, s, tr):
    p2, s2 = sym.apply(tr, p, s)
    assert energy_at(p2, *s2.as_tuple()) == pytest.approx(energy_at(p, *s.as_tuple()), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 2), states_st, st.floats(0, 2 * math.pi))
def test_u1_on_special_lines(c, s, phi):
    p = ModelParams(1, 1, c, 0.0)
    p2, s2 = sym.apply(sym.U1(phi, "plus"), p, s)
    assert energy_at(p2, *s2.as_tuple()) == pytest.approx(energy_at(p, *s.as_tuple()), abs=1e-12)
    p = ModelParams(1, 1, 0.0, c)
    p2, s2 = sym.apply(sym.U1(phi, "minus"), p, s)
    assert energy_at(p2, *s2.as_tuple()) == pytest.approx(energy_at(p, *s.as_tuple()), abs=1e-12)


def test_u1_breaks_generic_point():
    assert sym.energy_invariance(sym.U1(1.0), ModelParams(1, 1, 1.0, 0.5), 50) > 1e-3


@pytest.mark.parametrize("group", ["W", "Wprime"])
def test_coxeter(group):
    assert sym.check_coxeter_relations(group)


def test_unknown_group():
    with pytest.raises(ValueError):
        sym.check_coxeter_relations("Z")


def test_c2prime_is_product():
    p, s = ModelParams(1, 1, 0.7, -0.2), MeanFieldState(1.0, 0.4, 0.3, 1.1)
    a = sym.apply(sym.C2PRIME, p, s)
    b = sym.apply(sym.Compose(sym.ST, sym.STPRIME), p, s)
    assert (a[0].lam, a[0].kappa) == pytest.approx((b[0].lam, b[0].kappa))
    assert sym.same_point(a[1], b[1])


@pytest.mark.parametrize("lam,kap,phase", [
    (0.2, 0.2, PhaseLabel.NP), (1.0, 1.0, PhaseLabel.X_SP), (-1.0, -1.0, PhaseLabel.X_RSP),
    (3.0, -1.5, PhaseLabel.P_SP), (-3.0, 1.5, PhaseLabel.P_RSP)])
def test_state_fixed_discrete_rows(lam, kap, phase):
    row = sym.table2_row(ModelParams(1, 1, lam, kap))
    assert row.phase is phase
    assert row.status == "match"


def test_state_fixed_continuum_ambiguous():
    assert sym.table2_row(ModelParams(1, 1, 1.5, 0.0)).status == "ambiguous"


@pytest.mark.parametrize("tr,lam,kap,orig,image", [
    (sym.ST, 3.0, -1.5, PhaseLabel.P_SP, PhaseLabel.P_RSP),
    (sym.STPRIME, 1.0, 1.0, PhaseLabel.X_SP, PhaseLabel.X_RSP),
    (sym.ST, 1.5, 0.0, PhaseLabel.SP0, PhaseLabel.SPX),
    (sym.STPRIME, 0.0, 1.5, PhaseLabel.SPX, PhaseLabel.RSP0),
    (sym.ST, 1.0, -0.5, PhaseLabel.COEX_PSP_NP, PhaseLabel.COEX_PRSP_NP),
])
def test_phase_exchange(tr, lam, kap, orig, image):
    assert sym.phase_exchange_check(tr, ModelParams(1, 1, lam, kap)) == (orig, image, True)
