import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scatterkit.potentials import PotentialError, make_potential
from scatterkit.wavepacket import (
    SpectralProfile,
    delta_diagonal,
    delta_matrix,
    gaussian_profile,
    norm_drift_bound,
    norm_trace,
    position_space_norm,
)

WELL = make_potential("squarewell", V0=0.5, a=2.0)
TIMES = np.array([0.0, 1.0, 5.0, 10.0, 25.0, 50.0])


@given(st.floats(2.0, 8.0), st.floats(0.1, 0.35), st.integers(16, 96))
@settings(max_examples=30, deadline=None)
def test_profile_normalised(k0, sigma, n):
    prof = gaussian_profile(k0, sigma, n=n)
    assert abs(prof.norm - 1) < 1e-10
    assert abs(prof.mean_momentum - k0) < 1e-10


def test_profile_validation():
    with pytest.raises(ValueError):
        gaussian_profile(1.0, 0.5)  # grid crosses 0
    with pytest.raises(ValueError):
        gaussian_profile(5.0, 0.5, n=8)
    with pytest.raises(ValueError):
        SpectralProfile(np.array([1.0, 0.5]), np.ones(2), np.ones(2))
    with pytest.raises(PotentialError):
        delta_matrix(make_potential("linear", g=1.0), np.array([1.0, 2.0]))


@pytest.mark.parametrize("p", [make_potential("free"), make_potential("delta", g=-1.0)])
def test_norm_constant_without_delta_term(p):
    prof = gaussian_profile(5.0, 0.5, n=128)
    re, im = norm_trace(p, prof, TIMES)
    assert np.max(np.abs(re - 2 * math.pi)) < 1e-10
    assert np.max(np.abs(im)) < 1e-10
    assert norm_drift_bound(prof, delta_matrix(p, prof.k_grid)) < 1e-10


def test_square_well_norm_drifts_within_bound():
    prof = gaussian_profile(5.0, 0.5, n=256)
    re, im = norm_trace(WELL, prof, TIMES)
    assert np.max(np.abs(im)) < 1e-10
    drift = np.max(re) - np.min(re)
    assert drift > 1e-6
    bound = norm_drift_bound(prof, delta_matrix(WELL, prof.k_grid))
    assert drift <= bound


def test_drift_bound_callable_matches_matrix():
    prof = gaussian_profile(5.0, 0.5, n=24)
    M = delta_matrix(WELL, prof.k_grid)

    def fn(k1, k2):
        i = int(np.argmin(abs(prof.k_grid - k2)))
        j = int(np.argmin(abs(prof.k_grid - k1)))
        return M[i, j]

    assert abs(norm_drift_bound(prof, fn) - norm_drift_bound(prof, M)) < 1e-12


def test_matrix_hermitian():
    ks = gaussian_profile(3.0, 0.4, n=40).k_grid
    M = delta_matrix(WELL, ks)
    assert np.max(np.abs(M - M.conj().T)) < 1e-10


def test_diagonal_is_limit_of_off_diagonal():
    k = 3.3
    d = delta_diagonal(WELL, [k])[0]
    M = delta_matrix(WELL, np.array([k, k + 1e-5]), diagonal=False)
    assert abs(M[0, 1] - d) < 1e-4


def test_grid_refinement_converges():
    vals = [norm_trace(WELL, gaussian_profile(5.0, 0.5, n=n), [0.0, 10.0])[0] for n in (128, 256, 512)]
    assert np.max(np.abs(vals[1] - vals[2])) < 1e-8
    assert np.max(np.abs(vals[0] - vals[2])) < 1e-6


def test_late_times_settle_to_free_value():
    re, _ = norm_trace(WELL, gaussian_profile(5.0, 0.5, n=512), [25.0, 50.0])
    assert np.max(np.abs(re - 2 * math.pi)) < 1e-8


@pytest.mark.slow
def test_position_space_oracle_free_and_delta():
    for p in (make_potential("free"), make_potential("delta")):
        N = position_space_norm(p, 5.0, 0.5, [0.0, 5.0])
        assert np.max(np.abs(N - 2 * math.pi)) < 1e-6


@pytest.mark.slow
def test_position_space_oracle_square_well_is_conserved():
    N = position_space_norm(WELL, 5.0, 0.5, [0.0, 5.0, 10.0])
    assert np.max(np.abs(N - 2 * math.pi)) < 1e-6
