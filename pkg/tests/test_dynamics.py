import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from missile_smc.dynamics import (FlightProfiles, MissileParams, PlantState, UncertaintyRealization,
                                  alpha_dot, cg_at, dynamic_pressure, mass_at, nozzle_effectiveness,
                                  q_dot_nominal, q_dot_perturbation, q_dot_true, thrust_at)

P = MissileParams()
PROF = FlightProfiles()


def test_default_airframe_values():
    assert (P.v_m, P.m0, P.i_yy, P.l, P.d) == (1021.0, 162.0, 187.0, 3.72, 0.2540)
    assert (P.c_m_alpha0, P.c_m_deltaT0, P.c_z_alpha0, P.c_z_deltaT0) == (-5.5313, -6.6013, -1.2713, -7.5368)
    assert P.qbar == 638.5e3 and P.s_ref == 0.0507


def test_default_cg_is_mid_body():
    assert PROF.cg_initial == pytest.approx(P.l / 2)


@pytest.mark.parametrize("field,value", [("m0", -1.0), ("i_yy", 0.0), ("v_m", math.nan)])
def test_params_reject_nonpositive(field, value):
    with pytest.raises(ValueError, match=field):
        MissileParams(**{field: value})


def test_profiles_reject_bad_fractions():
    with pytest.raises(ValueError):
        FlightProfiles(mass_fraction_final=1.2)
    with pytest.raises(ValueError):
        FlightProfiles(t_burn=0.0)


def test_dynamic_pressure():
    assert dynamic_pressure(1.225, 100.0) == pytest.approx(6125.0)


def test_alpha_dot_coefficient():
    assert alpha_dot(P, P.m0, 1.0, 0.0, 0.0, 0.0, 0.0) == pytest.approx(-0.24882, rel=1e-4)


def test_alpha_dot_rejects_zero_mass():
    with pytest.raises(ValueError):
        alpha_dot(P, 0.0, 0.1, 0.0, 0.0, 0.0, 5000.0)


def test_alpha_dot_pitch_rate_passes_through():
    assert alpha_dot(P, P.m0, 0.0, 0.7, 0.0, 0.0, 5000.0) == 0.7


def test_q_dot_nominal_examples():
    assert q_dot_nominal(P, 1.86, 0.1, 0.0, 0.0, 5000.0) == pytest.approx(-24.321, rel=1e-4)
    assert q_dot_nominal(P, 1.86, 0.0, 0.01, 0.0, 5000.0) == pytest.approx(0.49733, rel=1e-4)


def test_nozzle_effectiveness_outside_airframe():
    with pytest.raises(ValueError):
        nozzle_effectiveness(P, P.l, 5000.0)


def test_q_dot_perturbation_cg_term():
    d = q_dot_perturbation(P, 1.86, 5000.0, 0.0, 0.01, 0.0, 0.0, 0.372, 0.0, 0.0)
    assert d == pytest.approx(-0.09947, rel=1e-3)


def test_q_dot_perturbation_zero_when_no_uncertainty():
    assert q_dot_perturbation(P, 1.86, 5000.0, 0.3, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0) == 0.0


@given(st.floats(-1, 1), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_q_dot_nominal_superposition(alpha, dn, dt):
    total = q_dot_nominal(P, 1.86, alpha, dn, dt, 5000.0)
    parts = (q_dot_nominal(P, 1.86, alpha, 0, 0, 5000.0) + q_dot_nominal(P, 1.86, 0, dn, 0, 5000.0)
             + q_dot_nominal(P, 1.86, 0, 0, dt, 5000.0))
    assert total == pytest.approx(parts, abs=1e-9)


def test_mass_and_cg_examples():
    assert mass_at(PROF, P.m0, 1.5) == pytest.approx(125.48, abs=5e-3)
    assert cg_at(PROF, 1.5) == pytest.approx(1.6636, abs=5e-5)
    assert mass_at(PROF, P.m0, 0.0) == P.m0
    assert cg_at(PROF, 0.0) == PROF.cg_initial


def test_profile_endpoints_exact():
    assert mass_at(PROF, P.m0, 3.0) == pytest.approx(97.2, rel=1e-15)
    assert cg_at(PROF, 3.0) == pytest.approx(1.488, rel=1e-15)
    assert mass_at(PROF, P.m0, 8.0) == mass_at(PROF, P.m0, 3.0)


@given(st.floats(0, 10), st.floats(0, 10))
def test_profiles_monotone(t1, t2):
    lo, hi = sorted((t1, t2))
    assert mass_at(PROF, P.m0, hi) <= mass_at(PROF, P.m0, lo)
    assert cg_at(PROF, hi) <= cg_at(PROF, lo)
    assert PROF.cg_final <= cg_at(PROF, hi) <= PROF.cg_initial


def test_thrust_schedule():
    prof = FlightProfiles(t_ignition=0.5)
    assert thrust_at(prof, 0.1) == 0.0
    assert thrust_at(prof, 1.0) == prof.thrust_boost
    assert thrust_at(prof, 4.0) == prof.thrust_sustain


def test_q_dot_true_reduces_to_nominal_at_launch_without_uncertainty():
    prof = FlightProfiles(thrust_boost=5000.0)
    state = PlantState(alpha=0.05, q=0.1)
    got = q_dot_true(P, prof, UncertaintyRealization(), state, 0.02, -0.01, 0.0)
    assert got == pytest.approx(q_dot_nominal(P, prof.cg_initial, 0.05, 0.02, -0.01, 5000.0), rel=1e-12)
