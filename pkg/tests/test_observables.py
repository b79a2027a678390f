import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdse import simulate
from tdse.errors import ImaginaryResidue, TruncationWarning
from tdse.fock_rep import SqueezeParams
from tdse.generators import WeylCoefficients
from tdse.observables import (CSV_HEADER, StateSpec, alpha_from_phase_point, class_product,
                              coherent_product, expectation_xp, fock_cross_check, fock_state,
                              sho_product, sr_bound_check, trajectory, trajectory_json,
                              uncertainties, write_trajectory_csv)
from tdse.system_model import GaugeFunctions, SystemClass, ToSystem

from conftest import SQRT2

TO, TM, TQ = SystemClass.TO, SystemClass.TM, SystemClass.TQ


def test_state_spec_exclusive():
    with pytest.raises(ValueError):
        StateSpec()
    with pytest.raises(ValueError):
        StateSpec(alpha=1.0, phase_point=(0.0, 0.0))


@pytest.mark.parametrize("x_o,p_o", [(1.0, 0.0), (0.3, -0.7), (0.0, 0.0)])
def test_alpha_sho(sho_run, x_o, p_o):
    a = alpha_from_phase_point(sho_run.weyl, x_o, p_o)
    assert a == pytest.approx((x_o + 1j * p_o) / SQRT2, abs=1e-12)


def test_alpha_free_particle(free_run):
    assert alpha_from_phase_point(free_run.weyl, 1.0, 0.0) == pytest.approx(0.5, abs=1e-12)


def test_sho_expectations(sho_run):
    x_o, p_o = 0.8, -0.3
    x, p = expectation_xp(sho_run.weyl, alpha_from_phase_point(sho_run.weyl, x_o, p_o))
    t = sho_run.weyl.grid
    assert np.allclose(x, x_o * np.cos(t) + p_o * np.sin(t), atol=1e-9)
    assert np.allclose(p, -x_o * np.sin(t) + p_o * np.cos(t), atol=1e-9)


@pytest.mark.parametrize("cls", [TO, TM, TQ])
def test_vacuum_expectations_vanish(cls):
    g = GaugeFunctions.from_strings("t", "0", "0.1")
    run = simulate(cls, ToSystem.from_strings("0.5+0.25*cos(3*t)"), (0.0, 2.0, 21), gauge=g)
    x, p = expectation_xp(run.weyl, 0.0)
    assert np.all(x == 0) and np.all(p == 0)


def test_imaginary_residue_detected(sho_run):
    w = sho_run.weyl
    bad = WeylCoefficients(w.class_tag, w.grid, w.G_P, w.G_X, w.G_I, w.F_P + 1e-6, w.F_X)
    with pytest.raises(ImaginaryResidue):
        expectation_xp(bad, 0.3)


def test_sho_coherent_uncertainties(sho_run):
    vx, vp, prod = uncertainties(sho_run.weyl)
    assert np.allclose(vx, 0.5, atol=1e-9) and np.allclose(vp, 0.5, atol=1e-9)
    assert np.max(np.abs(prod - 0.25)) <= 1e-9


def test_free_particle_spreading(free_run):
    vx, vp, prod = uncertainties(free_run.weyl)
    t = free_run.weyl.grid
    assert np.allclose(vx, 1 + t**2 / 4, atol=1e-9)
    assert np.allclose(vp, 0.25, atol=1e-9)
    assert np.all(prod >= 0.25 - 1e-12)


def test_sho_squeezed_closed_form():
    run = simulate(TO, ToSystem.from_strings("0.5"), (0.0, 10.0, 200))
    prod = uncertainties(run.weyl, SqueezeParams(0.5, 0.3))[2]
    s = np.exp(0.5)
    t = run.weyl.grid
    closed = 0.25 * (1 + 0.25 * (s**2 - s**-2) ** 2 * np.sin(2 * t - 0.3) ** 2)
    assert np.max(np.abs(prod - closed)) <= 1e-8
    assert np.max(np.abs(sho_product(t, 0.5, 0.3) - closed)) <= 1e-15


def test_squeezed_reduces_to_coherent(driven_run):
    w = driven_run.weyl
    a = uncertainties(w, SqueezeParams(0.0, 1.3))
    b = uncertainties(w)
    for u, v in zip(a, b):
        assert np.array_equal(u, v)
    assert np.max(np.abs(b[2] - coherent_product(w))) <= 1e-12


@pytest.mark.parametrize("r,theta", [(0.3, 0.0), (0.7, 1.2), (1.0, -0.4)])
def test_cosh_coefficient_identity(driven_run, r, theta):
    w = driven_run.weyl
    coherent = uncertainties(w)[0]
    full = uncertainties(w, SqueezeParams(r, theta))[0]
    sinh_part = 0.5 * (np.conj(w.G_P) ** 2 * np.exp(1j * theta)
                       + w.G_P**2 * np.exp(-1j * theta)) * np.sinh(2 * r)
    cosh_coefficient = (full - sinh_part.real) / np.cosh(2 * r)
    assert np.max(np.abs(cosh_coefficient - coherent)) <= 1e-12


GAUGE_SET = [("0", "0", "0"), ("t", "0", "0"), ("t", "1", "0.1"),
             ("0.5*ln(1+t)", "1", "0.1")]


@pytest.mark.parametrize("cls", [TO, TM, TQ])
@pytest.mark.parametrize("nu,mu,kappa", GAUGE_SET)
@pytest.mark.parametrize("r,theta", [(0.0, 0.0), (0.5, 0.3), (0.9, 2.0)])
def test_class_products_match_generic(cls, nu, mu, kappa, r, theta):
    g = GaugeFunctions.from_strings(nu, mu, kappa)
    run = simulate(cls, ToSystem.from_strings("0.5+0.25*cos(3*t)", "1"), (0.0, 3.0, 61),
                   gauge=g)
    sq = SqueezeParams(r, theta)
    generic = uncertainties(run.weyl, sq)[2]
    special = class_product(cls, run.phis, sq, run.aux.xi_dot, g, run.time_map)
    assert np.max(np.abs(generic - special)) <= 1e-9
    assert np.all(generic >= 0.25 - 1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 1.5), st.floats(-3.2, 3.2), st.floats(0.1, 2.0), st.floats(-0.45, 0.45))
def test_products_bounded_below(r, theta, w2, a):
    run = simulate(TO, ToSystem.from_strings(f"{w2!r}*(1+{a!r}*sin(t))"), (0.0, 4.0, 41))
    vx, vp, prod = uncertainties(run.weyl, SqueezeParams(r, theta))
    assert np.all(vx > 0) and np.all(vp > 0)
    assert np.all(prod >= 0.25 - 1e-12)
    assert np.all(vx * vp >= prod - 1e-9 * np.cosh(2 * r) ** 2)


def test_trajectory_time_variable():
    run = simulate(TO, ToSystem.from_strings("0.5"), (0.0, 1.0, 11))
    assert trajectory(run.weyl, StateSpec(alpha=0.1)).time_variable == "t'"
    run = simulate(TM, ToSystem.from_strings("0.5"), (0.0, 1.0, 11))
    assert trajectory(run.weyl, StateSpec(alpha=0.1)).time_variable == "t"


# --- operator route --------------------------------------------------------

def _sample(run, count=20):
    idx = np.linspace(0, run.weyl.grid.size - 1, count).astype(int)
    w = run.weyl
    return WeylCoefficients(w.class_tag, w.grid[idx], w.G_P[idx], w.G_X[idx], w.G_I[idx],
                            w.F_P[idx], w.F_X[idx])


def _closed(w, alpha, sq):
    x, p = expectation_xp(w, alpha)
    vx, vp, _ = uncertainties(w, sq)
    return x, p, vx, vp


def test_fock_vacuum(driven_run):
    w = _sample(driven_run)
    for a, b in zip(fock_cross_check(w, 0.0, None), _closed(w, 0.0, SqueezeParams())):
        assert np.max(np.abs(a - b)) <= 1e-10


def test_fock_coherent_sho(sho_run):
    w = _sample(sho_run)
    x_f = fock_cross_check(w, 0.5 + 0.2j, None)[0]
    assert np.max(np.abs(x_f - expectation_xp(w, 0.5 + 0.2j)[0])) <= 1e-8


def test_fock_squeezed_sho_variances(sho_run):
    w = _sample(sho_run)
    sq = SqueezeParams(0.5, 0.3)
    _, _, vx, vp = fock_cross_check(w, 0.5, sq)
    cx, cp, _ = uncertainties(w, sq)
    assert np.max(np.abs(vx - cx)) <= 1e-6 and np.max(np.abs(vp - cp)) <= 1e-6


def test_fock_path_converges_with_dimension(driven_run):
    """The truncation error of the operator route falls quickly with N."""
    w = _sample(driven_run, 5)
    sq = SqueezeParams(0.75, 0.3)
    ref = _closed(w, 1.0, sq)
    errs = []
    for N in (30, 40, 60, 80):
        got = fock_cross_check(w, 1.0, sq, N=N)
        errs.append(max(np.max(np.abs(a - b)) for a, b in zip(got, ref)))
    assert errs[0] > errs[1] > errs[2] > errs[3]
    assert errs[-1] < 1e-9


def test_sr_coherent_minimum():
    rep = sr_bound_check(0.4 - 0.3j)
    assert abs(rep.heisenberg_product - 0.25) <= 1e-8
    assert rep.holds


def test_sr_squeezed_saturation():
    rep = sr_bound_check(0.3, SqueezeParams(0.5, 0.7))
    assert rep.heisenberg_product > 0.25 + 1e-3
    assert abs(rep.saturation_defect) <= 1e-6
    assert rep.holds


def test_sr_vacuum_covariance():
    assert abs(sr_bound_check(0.0).covariance) <= 1e-15


# --- export ----------------------------------------------------------------

def test_csv_roundtrip(tmp_path, driven_run):
    traj = trajectory(driven_run.weyl, StateSpec(phase_point=(0.2, 0.1),
                                                 squeeze=SqueezeParams(0.4, 0.1)))
    path = tmp_path / "t.csv"
    write_trajectory_csv(traj, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.array_equal(data[:, 1], traj.x_mean)
    assert np.array_equal(data[:, 5], traj.product)


def test_json_mirror(driven_run):
    traj = trajectory(driven_run.weyl, StateSpec(alpha=0.2))
    body = trajectory_json(traj, {"class": "TO"})
    assert body["columns"] == list(CSV_HEADER)
    json.dumps(body)
    assert body["data"][3][2] == traj.p_mean[3]


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=1.0), st.floats(0, 0.75), st.floats(-np.pi, np.pi),
       st.integers(5, 60))
def test_fock_state_unit_norm(alpha, r, theta, N):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        psi = fock_state(alpha, SqueezeParams(r, theta), N)
    assert psi.shape == (N,)
    assert abs(np.linalg.norm(psi) - 1.0) <= 1e-13
