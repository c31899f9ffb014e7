import numpy as np
import pytest

import wnvfront as w
from wnvfront.coefficients import constant_field
from wnvfront.model import InitialData, ModelSpec
from wnvfront.solver import (
    FrontState,
    SolverConfig,
    _march,
    boundary_derivative,
    initial_state,
    simulate,
    step,
)
from wnvfront.transform import FrontGeometry


def _state(y, m, n, geom=None, t=0.0):
    return FrontState(t, y, np.asarray(m, float), np.asarray(n, float),
                      geom or FrontGeometry(-1.0, 1.0))


def test_zero_state_is_fixed_point(ref_spec):
    J = 64
    y = np.linspace(-1, 1, J + 1)
    st = _state(y, np.zeros(J + 1), np.zeros(J + 1))
    new = step(ref_spec, st, 0.01, SolverConfig(J=J, t_end=1.0))
    assert np.all(new.m == 0.0) and np.all(new.n == 0.0)
    assert new.geom.hdot == 0.0 and new.geom.gdot == 0.0
    assert new.geom.h == st.geom.h and new.geom.g == st.geom.g


def test_boundary_derivative_zero_and_quadratic():
    J = 40
    y = np.linspace(-1, 1, J + 1)
    zero = _state(y, np.zeros(J + 1), np.zeros(J + 1))
    assert boundary_derivative(zero, "right") == 0.0
    quad = _state(y, 1.0 - y * y, np.zeros(J + 1))
    # quadratics are exact for the 3-point one-sided stencil
    assert boundary_derivative(quad, "right") == pytest.approx(-2.0, abs=1e-12)
    assert boundary_derivative(quad, "left") == pytest.approx(2.0, abs=1e-12)


def test_boundary_derivative_sine_second_order():
    errs = []
    for J in (50, 100):
        y = np.linspace(-1, 1, J + 1)
        st = _state(y, np.sin(0.5 * np.pi * (1.0 - y)), np.zeros(J + 1))
        errs.append(abs(boundary_derivative(st, "right") + 0.5 * np.pi))
    assert errs[0] < 5e-3
    # halving dy should shrink the error by about 4
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)


def test_pure_decay_matches_separated_mode():
    # negligible coupling: each component decays like m_t = D m_yy - d m on
    # the frozen unit-half-width domain; the principal cosine mode gives
    # rate d + D (pi/2)^2.
    spec = ModelSpec(
        D1=1.0, D2=0.5, N1=1.0, N2=1.0, beta=1.0,
        alpha1=constant_field(1e-12), alpha2=constant_field(1e-12),
        gamma_field=constant_field(0.1), death_field=constant_field(0.2),
        mu=0.1, h0=1.0,
    )
    J, dt = 200, 1e-3
    cfg = SolverConfig(J=J, dt0=dt, dt_min=dt, dt_max=dt, t_end=1.0,
                       prescribed_fronts=lambda t: (-1.0, 1.0, 0.0, 0.0),
                       output_times=(1.0,))
    y = np.linspace(-1, 1, J + 1)
    m0 = 0.5 * np.cos(0.5 * np.pi * y)
    traj = _march(spec, _state(y, m0.copy(), m0.copy()), cfg)
    assert traj.status == "completed"
    final = traj.snapshots[-1]
    k = (0.5 * np.pi) ** 2
    for D, d, arr in ((1.0, 0.1, final.m), (0.5, 0.2, final.n)):
        exact = 0.5 * np.exp(-(d + D * k))
        assert np.max(arr) == pytest.approx(exact, rel=0.01)


def test_symmetry_preserved_with_frozen_fronts():
    spec = ModelSpec(
        D1=1.0, D2=0.5, N1=1.0, N2=2.0, beta=1.0,
        alpha1=constant_field(0.4), alpha2=constant_field(0.4),
        gamma_field=constant_field(0.1), death_field=constant_field(0.1),
        mu=0.1, h0=1.0,
    )
    J = 80
    cfg = SolverConfig(J=J, dt0=0.01, dt_min=0.01, dt_max=0.01, t_end=2.0,
                       prescribed_fronts=lambda t: (-1.0, 1.0, 0.0, 0.0),
                       output_times=(2.0,))
    y = np.linspace(-1, 1, J + 1)
    m0 = 0.3 * np.cos(0.5 * np.pi * y)
    n0 = 0.8 * np.cos(0.5 * np.pi * y)
    traj = _march(spec, _state(y, m0, n0), cfg)
    final = traj.snapshots[-1]
    assert np.max(np.abs(final.m - final.m[::-1])) < 1e-8
    assert np.max(np.abs(final.n - final.n[::-1])) < 1e-8


def test_initial_state_seeds_outward_velocities(ref_spec):
    st = initial_state(ref_spec, InitialData(), SolverConfig(J=100, t_end=1.0))
    assert st.geom.hdot > 0
    assert st.geom.gdot == pytest.approx(-st.geom.hdot, abs=1e-12)


def test_bounds_and_front_signs_short_run(ref_spec):
    traj = simulate(ref_spec, InitialData(), SolverConfig(J=150, t_end=20.0,
                                                          output_times=(5.0, 10.0, 20.0)))
    assert traj.status == "completed"
    assert np.all(traj.sup_m <= ref_spec.N1 * (1 + 1e-8))
    assert np.all(traj.sup_n <= ref_spec.N2 * (1 + 1e-8))
    assert np.all(traj.sup_m >= 0) and np.all(traj.sup_n >= 0)
    assert np.all(np.diff(traj.h) >= 0)
    assert np.all(np.diff(traj.g) <= 0)
    for st in traj.snapshots:
        assert np.min(st.m) >= 0 and np.min(st.n) >= 0


def test_ordered_initial_data_order_fronts(ref_spec, fast_solver):
    lo = simulate(ref_spec, InitialData(amp_U=0.05, amp_V=1.0), fast_solver)
    hi = simulate(ref_spec, InitialData(amp_U=0.1, amp_V=2.0), fast_solver)
    n = min(len(lo.t), len(hi.t))
    assert np.min(hi.h[:n] - lo.h[:n]) >= -1e-8
    assert np.min(lo.g[:n] - hi.g[:n]) >= -1e-8


def test_trajectory_geometry_interpolation(ref_spec, fast_solver):
    traj = simulate(ref_spec, InitialData(), fast_solver)
    geom = traj.geometry_at(0.0)
    assert geom.h == pytest.approx(ref_spec.h0)
    with pytest.raises(ValueError):
        traj.geometry_at(traj.t[-1] + 1.0)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(J=4, t_end=1.0)
    with pytest.raises(ValueError):
        SolverConfig(dt0=1e-9, dt_min=1e-3, t_end=1.0)
    with pytest.raises(ValueError):
        SolverConfig(bound_mode="nonsense", t_end=1.0)
