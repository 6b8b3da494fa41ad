import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import generating_function_sum, pole_sum, window_transform
from toeplitz_trace import cp1_model as cp
from toeplitz_trace import symplectic_core as sc
from toeplitz_trace.errors import PreconditionError, TailCoverageError

HAM = cp.RotationHamiltonian(1.0, 0.37)


@pytest.fixture(scope="module")
def setup():
    datum = cp.fixed_point_datum_at_pole(HAM, 1)
    window = cp.Window(datum.tau0, 0.3)
    model = cp.model_for(HAM, 400.0, window)
    return datum, window, model


def test_hamiltonian_positivity():
    with pytest.raises(PreconditionError):
        cp.RotationHamiltonian(1.0, -1.5)
    assert HAM(np.array([1.0, 0.0])) == 1.0
    assert abs(HAM(np.array([0.0, 2.0])) - 1.37) < 1e-15


@pytest.mark.parametrize("a, b", [(1.0, 0.37), (0.5, 1.2), (2.0, -0.7)])
def test_contact_lift_closed_form(a, b):
    a0, a1, dev = cp.contact_lift_phases(cp.RotationHamiltonian(a, b), seeds=5)
    assert (a0, a1) == (a, a + b)
    assert dev < 1e-8


def test_model_eigenphases():
    model = cp.build_spectral_model(HAM, 10, check=False)
    mu, c = model.tables()
    assert mu[0, 0] == 0.0
    assert np.nanmin(mu[1:]) > 0
    assert abs(mu[4, 1] - (3 * 1.0 + 1.37)) < 1e-14
    # c_kj = (k+1)!/(pi (k-j)! j!)
    assert abs(c[3, 1] - 24 / (math.pi * 2)) < 1e-12


@pytest.mark.parametrize("k", [0, 1, 5, 20, 50])
def test_level_dimension(k):
    model = cp.build_spectral_model(HAM, 50, check=False)
    assert abs(cp.level_diagonal_integral(model, k) - (k + 1)) < 1e-8


def test_contact_volume_density():
    rng = np.random.default_rng(2)
    for _ in range(5):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z /= np.linalg.norm(z)
        assert abs(cp.contact_volume_density(z) - 1 / (2 * math.pi)) < 1e-12


@pytest.mark.parametrize("w", [0.0, 1.0, 7.5, 30.0, 120.0, 400.0])
def test_bump_transform_table(w):
    assert abs(cp.bump_transform(w) - cp.bump_transform_direct(w)[0]) < 1e-12


def test_bump_transform_frozen():
    # int_{-1}^{1} exp(1 - 1/(1 - x^2)) dx by adaptive quadrature
    assert abs(cp.bump_transform(0.0) - 1.2069003224378765) < 1e-14


def test_bump_envelope():
    w = np.linspace(20.0, 600.0, 400)
    bound = cp.ENVELOPE_C * w ** (-0.75) * np.exp(-np.sqrt(w))
    assert np.all(np.abs(cp.bump_transform_direct(w)) <= bound)


@pytest.mark.parametrize("s", [0.0, 10.0, -35.0, 300.0])
def test_window_transform(setup, s):
    _, window, _ = setup
    assert abs(window.transform(s) - window_transform(window, s)[0]) < 1e-12


def test_window_rejects():
    with pytest.raises(PreconditionError):
        cp.Window(0.0, 0.0)


@given(a=st.integers(1, 200), b=st.integers(1, 200))
def test_beta_expectation_mean(a, b):
    assert abs(cp.beta_expectation(lambda t: t, a, b)[0] - a / (a + b)) < 1e-10


def test_symbol_values():
    g = cp.ToeplitzSymbol(lambda t: 1.5 + t, mixing=0.4)
    assert g.at_pole() == 1.5
    pt = cp.ModelPoint.from_chart(0.5)
    expected = 1.5 + pt.p + 0.4 * (pt.z0 * np.conj(pt.z1)).real
    assert abs(g(pt) - expected) < 1e-15


def test_model_point_normalisation():
    with pytest.raises(PreconditionError):
        cp.ModelPoint(1.0, 1.0)
    assert cp.ModelPoint.from_chart(0.5, pole=1).p == pytest.approx(0.8)


def test_pole_value_frozen(setup):
    # Poisson-summed value, frozen
    _, window, model = setup
    frozen = 202.00054455600826
    S = cp.brute_force_S(model, cp.ModelPoint(1.0, 0.0), 100.0, window)
    assert abs(S / frozen - 1) < 1e-9


@pytest.mark.slow
def test_pole_value_oracle(setup):
    _, window, model = setup
    S = cp.brute_force_S(model, cp.ModelPoint(1.0, 0.0), 100.0, window)
    assert abs(S / pole_sum(100.0, window, 1.0) - 1) < 1e-9


@pytest.mark.parametrize("lam, n", [(100.0, (1.0, 0.5)), (400.0, (0.3, 0.0)), (200.0, (-1.2, 0.8))])
def test_displaced_value_oracle(setup, lam, n):
    _, window, model = setup
    pt = cp.heisenberg_displace(n, lam)
    S = cp.brute_force_S(model, pt, lam, window)
    assert abs(S / generating_function_sum(pt.p, lam, window, 1.0, 0.37) - 1) < 1e-8


def test_off_locus_value_oracle(setup):
    _, window, model = setup
    pt = cp.ModelPoint.from_chart(0.5)
    S = cp.brute_force_S(model, pt, 200.0, window)
    ref = generating_function_sum(pt.p, 200.0, window, 1.0, 0.37)
    assert abs(S - ref) < 1e-8 * 400.0


def test_radial_constant_scales(setup):
    _, window, model = setup
    pt = cp.heisenberg_displace((0.5, 0.5), 100.0)
    plain = cp.brute_force_S(model, pt, 100.0, window)
    assert abs(cp.brute_force_S(model, pt, 100.0, window, cp.ToeplitzSymbol(2.5)) - 2.5 * plain) < 1e-10 * abs(plain)


def test_tail_coverage(setup):
    _, window, _ = setup
    small = cp.build_spectral_model(HAM, 50, check=False)
    with pytest.raises(TailCoverageError):
        cp.brute_force_S(small, cp.ModelPoint(1.0, 0.0), 100.0, window)


def test_required_kmax_and_tail(setup):
    _, window, model = setup
    assert cp.required_kmax(HAM, 100.0, window) < cp.required_kmax(HAM, 400.0, window) == model.kmax
    assert cp.tail_bound(model, 400.0, window) < 1e-10


def test_pole_datum(setup):
    datum, _, _ = setup
    assert datum.tau0 == pytest.approx(2 * math.pi)
    assert datum.f0 == 1.0
    beta = 0.37 * 2 * math.pi
    np.testing.assert_allclose(datum.A, cp.rotation(beta), atol=1e-15)
    np.testing.assert_allclose(cp.pole_linearisation_ode(HAM, -datum.tau0), datum.A, atol=1e-8)
    assert sc.cleanliness(datum.A).very_clean


def test_resonant_pole_rejected():
    with pytest.raises(PreconditionError):
        cp.fixed_point_datum_at_pole(cp.RotationHamiltonian(1.0, 0.5), 2, check=False)


def test_kahler_normalisation():
    assert abs(cp.kahler_form_at_origin() - 1.0) < 1e-10
    assert abs(cp.chart_scale() - 1.0) < 1e-10
    # perturbed chart agrees to first order at the origin
    assert abs(cp.kahler_form_at_origin(0.25 + 0.2j, 0.3j) - 1.0) < 1e-8


def test_displacement_domain():
    with pytest.raises(PreconditionError):
        cp.heisenberg_displace((10.0, 0.0), 100.0)
    assert cp.heisenberg_displace((1.0, 0.0), 100.0).p == pytest.approx(0.01 / 1.01)


def test_holonomy():
    s = np.geomspace(1e-3, 1e-1, 9)
    assert np.max(np.abs(cp.horizontal_lift_holonomy((1.0, 0.5), s))) < 1e-12
    th = cp.horizontal_lift_holonomy((1.0, 0.5), s, 0.25 + 0.2j, 0.3j)
    slope = np.polyfit(np.log(s), np.log(np.abs(th)), 1)[0]
    assert abs(slope - 3) < 0.1


def test_off_locus_requires_displacement(setup):
    _, window, model = setup
    with pytest.raises(PreconditionError):
        cp.off_locus_scan(model, [(0.0, 0)], [100.0], window)


def test_profile_scan_shapes(setup):
    datum, window, model = setup
    grid = np.array([[0.0, 0.0], [0.5, 0.0], [-0.5, 0.0]])
    out = cp.profile_scan(model, datum, 100.0, grid, window)
    assert out["brute"].shape == (3,)
    # pole oracle over 2 lam
    assert abs(out["brute"][0] / out["predicted"][0] - 1.0100027227800413) < 1e-9
    np.testing.assert_allclose(out["even"] + out["odd"], out["brute"])
