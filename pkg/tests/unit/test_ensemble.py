import numpy as np
import pytest

from databricks.labs.fzzt.ensemble import (
    DetShift,
    McEstimate,
    Resolvent,
    TracePower,
    det_shift_oracle,
    edge_profile,
    eigenvalues,
    empirical_resolvent_inverse,
    expect_observable,
    sample_ensemble,
    spectral_support,
    variance_scaling,
)
from databricks.labs.fzzt.errors import DomainError, EnsembleSizeError, NonMonotoneRegion


def test_samples_are_hermitian_and_reproducible():
    first = sample_ensemble(5, 7)
    again = sample_ensemble(5, 7)
    other = sample_ensemble(5, 8)
    assert np.allclose(first.matrix, first.matrix.conj().T)
    assert np.array_equal(first.matrix, again.matrix)
    assert not np.array_equal(first.matrix, other.matrix)
    assert first.convention == "exp(-Tr M^2)"


def test_ensemble_size_limits():
    with pytest.raises(EnsembleSizeError):
        sample_ensemble(0, 1)
    with pytest.raises(EnsembleSizeError):
        eigenvalues(65, 10, 1)


def test_spectra_do_not_depend_on_scheduling():
    spectra = eigenvalues(3, 2500, 11)
    assert spectra.shape == (2500, 3)
    assert np.array_equal(spectra, eigenvalues(3, 2500, 11))
    # the first block is the same stream whatever the total
    assert np.array_equal(spectra[:1000], eigenvalues(3, 1000, 11))


def test_one_by_one_determinant():
    estimate = expect_observable(1, DetShift(0.5), 10_000, 3)
    assert abs(estimate.mean - 0.5) < 5 * estimate.std_error
    assert estimate.samples == 10_000


def test_trace_of_the_square():
    estimate = expect_observable(2, TracePower(2), 10_000, 5)
    assert abs(estimate.mean / 4 - 0.5) < 5 * estimate.std_error / 4


def test_two_by_two_determinant_against_the_oracle(numerics):
    oracle = det_shift_oracle(2, 1.5, numerics)
    assert abs(oracle - 1.75) < 1e-12
    estimate = expect_observable(2, DetShift(1.5), 10_000, 9)
    assert abs(estimate.mean - oracle) < 5 * estimate.std_error


def test_oracle_sizes(numerics):
    assert abs(det_shift_oracle(1, 0.25, numerics) - 0.25) < 1e-12
    with pytest.raises(EnsembleSizeError):
        det_shift_oracle(3, 0.25, numerics)


def test_resolvent_far_from_the_spectrum():
    estimate = expect_observable(4, Resolvent(10), 2000, 13)
    # N/z + ⟨Tr M²⟩/z³ with ⟨Tr M²⟩ = N²/2
    assert abs(estimate.mean - 0.408) < 5e-3


def test_too_few_samples():
    with pytest.raises(DomainError):
        expect_observable(2, TracePower(2), 999, 1)


def test_merge_matches_a_single_pass():
    rng = np.random.default_rng(4)
    values = rng.normal(size=300) + 1j * rng.normal(size=300)
    whole = McEstimate.of(values, 0)
    merged = McEstimate.of(values[:120], 0).merge(McEstimate.of(values[120:], 0))
    assert abs(whole.mean - merged.mean) < 1e-12
    assert abs(whole.m2 - merged.m2) < 1e-9
    assert abs(whole.std_error - merged.std_error) < 1e-12
    assert merged.samples == 300


def test_variance_scaling_needs_four_sizes():
    with pytest.raises(DomainError):
        variance_scaling([4, 8, 16], 1000, 1)
    with pytest.raises(DomainError):
        variance_scaling([4, 8, 8, 16], 1000, 1)


def test_resolvent_inversion_outside_the_support():
    inversion = empirical_resolvent_inverse(4, [4, 5, 6], 2000, 17)
    assert inversion.max_inversion_gap < 1e-2
    assert list(inversion.grid) == [4.0, 5.0, 6.0]
    assert inversion.values[0] > inversion.values[1] > inversion.values[2]


def test_resolvent_grid_inside_the_support():
    with pytest.raises(NonMonotoneRegion):
        empirical_resolvent_inverse(4, [0, 5], 2000, 17)


def test_edge_profile_columns(numerics):
    rows = edge_profile(4, [0.0], 2000, 19, numerics)
    assert len(rows) == 1
    row = rows[0]
    assert abs(row.z - np.sqrt(8)) < 1e-12
    hermite = 16 * row.z**4 - 48 * row.z**2 + 12
    assert abs(row.exact - hermite / 16) < 1e-9
    assert abs(row.airy - 0.355028053887817) < 1e-12


def test_spectral_support_straddles_the_semicircle_edge():
    low, high = spectral_support(8, 1000, 11)
    edge = np.sqrt(2 * 8)
    assert -1.5 * edge < low < -0.5 * edge
    assert 0.5 * edge < high < 1.5 * edge
