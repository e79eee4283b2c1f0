import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scatterkit.potentials import make_potential
from scatterkit.special import GammaPoleError
from scatterkit.states import (
    StateError,
    boundary_modulus_closed_form,
    boundary_modulus_difference,
    coefficients,
    delta_coefficients,
    eval_wavefunction,
    inside_wavenumber,
    matching_residual,
    nu_from_strength,
    sech2_coefficients,
    solve_matching_system,
    square_well_coefficients,
)

WELL = make_potential("squarewell", V0=0.5, a=2.0)


def test_inside_wavenumber_examples():
    assert inside_wavenumber(2, 0) == 2
    assert inside_wavenumber(2, 1.5) == 1
    assert inside_wavenumber(1, 1) == 1j


def test_closed_form_matches_matching_system():
    c = square_well_coefficients(1.3, WELL)
    m = solve_matching_system(1.3, WELL)
    for name in ("R", "T", "A_plus", "A_minus"):
        assert abs(getattr(c, name) - getattr(m, name)) <= 1e-12, name
    assert m.cond < 10


def test_printed_interior_amplitudes_fail_matching():
    strict = square_well_coefficients(1.3, WELL, strict_paper=True)
    assert matching_residual(WELL, strict).max_abs() > 1e-2
    assert matching_residual(WELL, square_well_coefficients(1.3, WELL)).max_abs() < 1e-14


def test_free_limit():
    p = make_potential("squarewell", V0=0.0, a=2.0)
    c = square_well_coefficients(0.8, p)
    assert abs(c.R) < 1e-15 and abs(c.T - 1) < 1e-15
    assert abs(c.A_plus - 1) < 1e-15 and abs(c.A_minus) < 1e-15
    m = solve_matching_system(0.8, p)
    assert abs(m.R) < 1e-14 and abs(m.T - 1) < 1e-14


def test_transparency_phase():
    V0, a = 0.5, 2.0
    for n in (1, 2, 3):
        k = math.sqrt((n * math.pi / a) ** 2 + 2 * V0)
        c = square_well_coefficients(k, WELL)
        assert abs(c.R) < 1e-14
        assert abs(abs(c.T) - 1) < 1e-14
        # (-1)^n e^{-ika}, not e^{ika}
        assert abs(c.T - (-1) ** n * cmath.exp(-1j * k * a)) < 1e-13


def test_evanescent_interior_flux():
    p = make_potential("squarewell", V0=1.0, a=1.0)
    m = solve_matching_system(1.0, p)
    c = square_well_coefficients(1.0, p)
    assert abs(m.flux - 1) < 1e-12
    assert abs(c.R - m.R) < 1e-12 and abs(c.T - m.T) < 1e-12
    assert c.k_in.imag > 0


def test_bad_k():
    with pytest.raises(StateError):
        square_well_coefficients(0.0, WELL)
    with pytest.raises(StateError):
        delta_coefficients(-1.0)


def test_delta_canonical():
    c = delta_coefficients(1.0)
    assert abs(c.R - 1j / (1 - 1j)) < 1e-15
    assert abs(c.T - 1 / (1 - 1j)) < 1e-15
    big = delta_coefficients(1e6)
    assert abs(big.R) < 1e-5 and abs(big.T - 1) < 1e-5
    assert abs(delta_coefficients(2.0).flux - 1) < 1e-15


@given(st.floats(0.05, 50), st.floats(-10, 10))
def test_delta_general_strength_unitary(k, g):
    assert abs(delta_coefficients(k, g).flux - 1) < 1e-12


def test_sech2_reflectionless_and_pole():
    c = sech2_coefficients(1.3, 1.0)
    assert c.R == 0
    assert abs(abs(c.T) - 1) < 1e-12
    with pytest.raises(GammaPoleError):
        sech2_coefficients(2.0, 0.0)


def test_nu_relation():
    for V0 in (-1.0, -3.0, 0.1, 0.5):
        nu = nu_from_strength(V0)
        assert abs(2 * V0 + nu * (nu + 1)) < 1e-14


def test_sech2_unitarity_small_strength():
    c = sech2_coefficients(1.0, nu_from_strength(-0.05))
    assert abs(c.flux - 1) < 1e-10


def test_sech2_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    nu, k = nu_from_strength(-0.3), 1.1
    ik = 1j * k
    G = mpmath.gamma
    R = G(ik) * G(1 + nu - ik) * G(-nu - ik) / (G(-ik) * G(1 + nu) * G(-nu))
    T = G(1 + nu - ik) * G(-nu - ik) / (G(-ik) * G(1 - ik))
    c = sech2_coefficients(k, nu)
    assert abs(c.R - complex(R)) < 1e-12 and abs(c.T - complex(T)) < 1e-12


def test_sech2_wavefunction_matches_coefficients():
    # the ODE solution started from T e^{ikx} on the right must arrive at
    # e^{ikx} + R e^{-ikx} on the left
    p = make_potential("sech2", V0=-0.3)
    c = coefficients(p, 1.1)
    x = np.array([-25.0, -22.0, 22.0, 25.0])
    got = eval_wavefunction(p, c, x)
    want = np.where(x < 0, np.exp(1.1j * x) + c.R * np.exp(-1.1j * x), c.T * np.exp(1.1j * x))
    assert np.max(np.abs(got - want)) < 1e-9
    inner = np.array([-18.0, 18.0])
    want = np.where(inner < 0, np.exp(1.1j * inner) + c.R * np.exp(-1.1j * inner), c.T * np.exp(1.1j * inner))
    assert np.max(np.abs(eval_wavefunction(p, c, inner) - want)) < 1e-9


def _random_wells(n, seed=7):
    rng = np.random.default_rng(seed)
    return [make_potential("squarewell", V0=float(rng.uniform(-3, 3)), a=float(rng.uniform(0.2, 5)))
            for _ in range(n)]


def test_flux_grid_square_well():
    ks = np.logspace(math.log10(0.05), math.log10(50), 200)
    worst = 0.0
    for p in _random_wells(20):
        for k in ks:
            try:
                c = square_well_coefficients(float(k), p)
            except StateError:
                continue
            worst = max(worst, abs(c.flux - 1))
    assert worst <= 1e-10


@settings(max_examples=60)
@given(st.floats(0.05, 20), st.floats(-3, 3), st.floats(0.2, 5))
def test_closed_form_vs_matching_property(k, V0, a):
    p = make_potential("squarewell", V0=V0, a=a)
    if abs(k * k - 2 * V0) < 1e-6:
        return
    c, m = square_well_coefficients(k, p), solve_matching_system(k, p)
    scale = max(1.0, m.cond * 1e-16 * 1e5)
    assert abs(c.R - m.R) <= 1e-11 * scale
    assert abs(c.T - m.T) <= 1e-11 * scale
    assert matching_residual(p, c).max_abs() <= 1e-11 * max(1.0, abs(c.A_plus) + abs(c.A_minus))


def test_eval_wavefunction_examples():
    free = make_potential("free")
    cf = coefficients(free, 0.9)
    x = np.linspace(-3, 3, 11)
    assert np.array_equal(eval_wavefunction(free, cf, x), np.exp(0.9j * x))
    c = solve_matching_system(1.3, WELL)
    inner = c.A_plus * cmath.exp(1j * c.k_in * 0.7) + c.A_minus * cmath.exp(-1j * c.k_in * 0.7)
    assert abs(eval_wavefunction(WELL, coefficients(WELL, 1.3), 0.7) - inner) < 1e-13
    cc = coefficients(WELL, 1.3)
    left = np.exp(-1.3j) + cc.R * np.exp(1.3j)
    assert abs(eval_wavefunction(WELL, cc, -1.0) - left) < 1e-14


def test_boundary_modulus():
    assert abs(boundary_modulus_difference(1.3, WELL) - boundary_modulus_closed_form(1.3, WELL)) < 1e-10
    k = math.sqrt((math.pi / 2) ** 2 + 1)
    assert abs(boundary_modulus_difference(k, WELL)) < 1e-13
    p0 = make_potential("squarewell", V0=0.0, a=2.0)
    assert boundary_modulus_difference(0.7, p0) == pytest.approx(0.0, abs=1e-15)
