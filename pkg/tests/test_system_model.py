import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdse import aux_solver
from tdse.coeff_expr import parse
from tdse.system_model import (GaugeFunctions, TimeMap, TqSystem, build_time_map,
                               derive_tm_f0, hat)


def test_identity_time_map():
    tm = build_time_map(parse("0"), 0.0, 2.0, 41)
    assert np.allclose(tm.grid_tprime, tm.grid_t, atol=1e-14)
    assert tm.grid_tprime[0] == 0.0


def test_log_mass_time_map():
    tm = build_time_map(parse("0.5*ln(1+t)"), 0.0, 3.0, 31)
    assert np.allclose(tm.grid_tprime, np.log1p(tm.grid_t), atol=1e-12)
    assert tm.tprime_end == pytest.approx(1.386294, abs=1e-6)
    assert tm.tprime_end == pytest.approx(np.log(4.0), abs=1e-12)


def test_exponential_time_map():
    tm = build_time_map(parse("t"), 0.0, 1.0, 11)
    assert tm.tprime_end == pytest.approx((1 - np.exp(-2)) / 2, abs=1e-12)
    assert tm.tprime_end == pytest.approx(0.432332, abs=1e-6)


def test_time_map_starts_at_zero_for_offset_window():
    tm = build_time_map(parse("t"), 0.5, 1.5, 11)
    assert tm.grid_tprime[0] == 0.0
    assert tm.t_o == 0.5
    expected = (np.exp(-1.0) - np.exp(-3.0)) / 2
    assert tm.tprime_end == pytest.approx(expected, abs=1e-12)


def test_time_map_rejects_bad_window():
    with pytest.raises(ValueError):
        build_time_map(parse("0"), 1.0, 1.0, 5)
    with pytest.raises(ValueError):
        build_time_map(parse("0"), 0.0, 1.0, 1)


def test_time_map_off_grid_interpolation():
    tm = build_time_map(parse("0.5*ln(1+t)"), 0.0, 3.0, 61)
    tq = np.array([0.013, 1.2345, 2.99])
    assert np.allclose(tm(tq), np.log1p(tq), atol=1e-7)
    with pytest.raises(ValueError):
        tm(3.5)


smooth_nus = st.sampled_from(["0", "t", "0.5*ln(1+t)", "0.3*sin(2*t)", "-0.2*t + 0.1*t^2",
                              "0.5*tanh(t-1)"])


@settings(max_examples=30, deadline=None)
@given(smooth_nus, st.floats(0.5, 4.0), st.integers(5, 60))
def test_monotone_time_map(nu, t_end, n):
    tm = build_time_map(parse(nu), 0.0, t_end, n)
    assert np.all(np.diff(tm.grid_tprime) > 0)


@pytest.mark.parametrize("nu", ["t", "0.5*ln(1+t)", "0.3*sin(2*t)"])
def test_quadrature_halving(nu):
    a = build_time_map(parse(nu), 0.0, 3.0, 21).tprime_end
    b = build_time_map(parse(nu), 0.0, 3.0, 41).tprime_end
    assert abs(a - b) <= 1e-9 * abs(b)


def test_derive_tm_f0_examples():
    tm0 = build_time_map(parse("0"), 0.0, 2.0, 11)
    assert np.allclose(derive_tm_f0(parse("1"), tm0, parse("0")), 1.0)
    tm1 = build_time_map(parse("t"), 0.0, 2.0, 11)
    assert np.allclose(derive_tm_f0(parse("1"), tm1, parse("t")), np.exp(-2 * tm1.grid_t))
    tml = build_time_map(parse("0.5*ln(1+t)"), 0.0, 3.0, 31)
    # g0 is a function of t'; the expression variable is always spelled t
    f0 = derive_tm_f0(parse("t"), tml, parse("0.5*ln(1+t)"))
    t = tml.grid_t
    assert np.allclose(f0, np.log1p(t) / (1 + t), atol=1e-12)


def test_hat_identity_and_composition():
    grid = np.linspace(0, 1, 11)
    ident = TimeMap.identity(grid)
    assert np.array_equal(hat(np.cos, ident), np.cos(grid))
    tm = build_time_map(parse("t"), 0.0, 1.0, 11)
    assert hat(lambda s: s, tm)[-1] == pytest.approx((1 - np.exp(-2)) / 2, abs=1e-12)
    with pytest.raises(ValueError):
        hat(np.cos, tm, domain=(0.0, 0.1))


def test_hat_of_sho_xi_with_identity_gauge(sho_run):
    grid = sho_run.aux.grid_tprime
    ident = TimeMap.identity(grid)
    assert np.allclose(hat(sho_run.aux.evaluate, ident)[0], sho_run.aux.xi, atol=1e-12)


def test_hat_derivative_distinction():
    """d/dt (xi o t') = (xi_dot o t') exp(-2 nu), and differs from xi_dot o t'."""
    sol = aux_solver.solve_auxiliary("0.5", (0.0, 1.0, 2001))
    tm = build_time_map(parse("t"), 0.0, 1.0, 2001)
    xi_hat, xidot_hat, _ = sol.evaluate(tm.grid_tprime)
    t = tm.grid_t
    d_dt = np.gradient(xi_hat, t, edge_order=2)
    inner = slice(5, -5)
    scaled = xidot_hat * np.exp(-2 * t)
    assert np.max(np.abs(d_dt - scaled)[inner]) < 1e-6
    assert np.max(np.abs(d_dt - xidot_hat)[inner]) > 0.1


def test_gauge_and_tq_containers():
    g = GaugeFunctions.from_strings(nu="t")
    assert not g.is_identity
    assert GaugeFunctions.identity().is_identity
    assert g.inverse_mass(1.0) == pytest.approx(np.exp(-2))
    with pytest.raises(ValueError):
        TqSystem.from_strings(k="-1 - t").check_kinetic(np.linspace(0, 1, 5))
