# -*- coding: utf-8 -*-
import math
import numpy as np
import pytest

from cvsampling.errors import NumericGuardError
from cvsampling.library.fock import (
    GBSMatrices,
    OutcomeDistribution,
    ScattershotParams,
    chi_to_db,
    db_to_chi,
    default_cutoff,
    enumerate_distribution,
    optimal_chi,
    outcome_probability,
    outcomes_up_to,
    outcomes_with_total,
    photon_number_sectors,
    sample_fock,
    scattershot_success_probability,
)
from cvsampling.library.gaussian import (
    GaussianState,
    apply_passive,
    apply_uniform_loss,
    beamsplitter,
    squeeze_single,
    two_mode_squeeze,
    vacuum_state,
)
from cvsampling.library.interferometer import haar_random_unitary
from cvsampling.library.verification import total_variation


@pytest.fixture
def tmsv():
    return two_mode_squeeze(vacuum_state(2), 0, 1, 0.5)


@pytest.fixture
def squeezed():
    return squeeze_single(vacuum_state(1), 0, 0.5)


def squeezed_vacuum_probability(n, r):
    if n % 2:
        return 0.
    k = n // 2
    return math.tanh(r) ** n * math.factorial(n) / (2 ** k * math.factorial(k)) ** 2 / math.cosh(r)


def test_vacuum_probabilities():
    vacuum = vacuum_state(3)
    assert outcome_probability(vacuum, (0, 0, 0)) == pytest.approx(1, abs=1e-12)
    assert outcome_probability(vacuum, (1, 1, 0)) == pytest.approx(0, abs=1e-12)
    distribution = enumerate_distribution(vacuum, 4)
    assert distribution.mass == pytest.approx(1, abs=1e-12)
    assert distribution.probability((0, 0, 0)) == pytest.approx(1, abs=1e-12)


def test_single_mode_squeezed(squeezed):
    assert outcome_probability(squeezed, (0, )) == pytest.approx(0.88681, abs=1e-5)
    for n in range(8):
        assert outcome_probability(squeezed, (n, )) == pytest.approx(squeezed_vacuum_probability(n, 0.5), abs=1e-12)
    assert GBSMatrices(squeezed).pure


def test_odd_photon_numbers_vanish_for_pure_states():
    state = squeeze_single(squeeze_single(vacuum_state(3), 0, 0.6), 2, -0.4)
    state = apply_passive(state, haar_random_unitary(3, seed=9).U)
    for outcome in outcomes_up_to(3, 5):
        if sum(outcome) % 2:
            assert outcome_probability(state, outcome) == 0


def test_two_mode_squeezed_vacuum(tmsv):
    chi = math.tanh(0.5)
    assert outcome_probability(tmsv, (1, 1)) == pytest.approx(0.16794, abs=1e-5)
    for n in range(5):
        assert outcome_probability(tmsv, (n, n)) == pytest.approx((1 - chi ** 2) * chi ** (2 * n), abs=1e-12)
    assert outcome_probability(tmsv, (1, 0)) == 0
    assert outcome_probability(tmsv, (2, 0)) == pytest.approx(0, abs=1e-12)


def test_balanced_beamsplitter_suppresses_coincidences(tmsv):
    split = beamsplitter(tmsv, 0, 1, math.pi / 4, 0.)
    assert outcome_probability(split, (1, 1)) == pytest.approx(0, abs=1e-12)
    assert outcome_probability(split, (2, 0)) == pytest.approx(outcome_probability(split, (0, 2)), abs=1e-12)
    assert outcome_probability(split, (2, 0)) > 0


def test_lossy_state_matches_traced_environment():
    r, eta = 0.5, 0.7
    theta = math.acos(math.sqrt(eta))
    purified = beamsplitter(squeeze_single(vacuum_state(2), 0, r), 0, 1, theta, 0.)
    lossy = apply_uniform_loss(squeeze_single(vacuum_state(1), 0, r), eta)
    np.testing.assert_allclose(purified.reduced([0]).cov, lossy.cov, atol=1e-12)
    assert not GBSMatrices(lossy).pure
    for n in range(5):
        traced = sum(outcome_probability(purified, (n, e)) for e in range(20))
        assert outcome_probability(lossy, (n, )) == pytest.approx(traced, abs=1e-10)


def test_probabilities_lie_in_unit_interval():
    state = apply_uniform_loss(two_mode_squeeze(vacuum_state(2), 0, 1, 0.8), 0.6)
    distribution = enumerate_distribution(state, 6)
    assert np.all(distribution.probabilities >= -1e-12)
    assert np.all(distribution.probabilities <= 1)
    assert distribution.mass <= 1 + 1e-9


def test_outcome_validation(tmsv):
    with pytest.raises(ValueError):
        outcome_probability(tmsv, (1, ))
    with pytest.raises(ValueError):
        outcome_probability(tmsv, (1, -1))
    with pytest.raises(ValueError, match='unphysical'):
        GBSMatrices(GaussianState(0.5 * np.eye(2)))


def test_gbs_matrices():
    vacuum = GBSMatrices(vacuum_state(2))
    np.testing.assert_allclose(vacuum.A, 0, atol=1e-15)
    assert vacuum.sqrt_det_Q == pytest.approx(1)
    r = 0.5
    matrices = GBSMatrices(two_mode_squeeze(vacuum_state(2), 0, 1, r))
    assert matrices.pure
    # B of a two-mode squeezer couples only its two modes
    assert abs(matrices.B[0, 1]) == pytest.approx(math.tanh(r), abs=1e-12)
    np.testing.assert_allclose(np.diag(matrices.B), 0, atol=1e-12)
    assert matrices.sqrt_det_Q == pytest.approx(math.cosh(r) ** 2, abs=1e-12)


def test_enumeration_refuses_cutoffs_beyond_the_hafnian_limit(tmsv):
    lossy = apply_uniform_loss(tmsv, 0.9)
    assert GBSMatrices(lossy).max_cutoff == 12
    assert GBSMatrices(tmsv).max_cutoff == 24
    with pytest.raises(NumericGuardError, match='exceeds 12'):
        enumerate_distribution(lossy, 13)
    with pytest.raises(NumericGuardError):
        sample_fock(lossy, 10, 13, seed=1)
    with pytest.raises(NumericGuardError):
        enumerate_distribution(tmsv, 25)


def test_outcome_enumeration():
    assert list(outcomes_with_total(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(outcomes_with_total(3, 4))) == math.comb(6, 2)
    assert len(outcomes_up_to(3, 4)) == math.comb(7, 3)
    assert outcomes_up_to(2, 1) == [(0, 0), (0, 1), (1, 0)]


def test_captured_mass(squeezed):
    assert enumerate_distribution(squeezed, 6).mass >= 0.999
    masses = [enumerate_distribution(squeezed, cutoff).mass for cutoff in range(10)]
    assert all(later >= earlier for earlier, later in zip(masses, masses[1:]))
    with pytest.raises(ValueError):
        enumerate_distribution(squeezed, -1)


def test_enumeration_independent_of_workers(tmsv):
    state = apply_passive(tmsv, haar_random_unitary(2, seed=2).U)
    serial = enumerate_distribution(state, 6)
    threaded = enumerate_distribution(state, 6, workers=4)
    np.testing.assert_array_equal(serial.outcomes, threaded.outcomes)
    np.testing.assert_array_equal(serial.probabilities, threaded.probabilities)


def test_sectors_invariant_under_passive_interferometer():
    state = vacuum_state(4)
    for k in range(2):
        state = two_mode_squeeze(state, k, 2 + k, 0.4)
    sectors = photon_number_sectors(state, 6)
    rotated = apply_passive(state, haar_random_unitary(2, seed=3).U, [2, 3])
    np.testing.assert_allclose(photon_number_sectors(rotated, 6), sectors, atol=1e-12)
    np.testing.assert_allclose(sectors[1::2], 0, atol=1e-12)
    np.testing.assert_allclose(enumerate_distribution(rotated, 6).sector_masses(), sectors, atol=1e-12)


def test_default_cutoff(squeezed, tmsv):
    assert default_cutoff(squeezed) == 6
    assert default_cutoff(tmsv) == 8
    assert default_cutoff(vacuum_state(2)) == 0
    with pytest.raises(NumericGuardError):
        default_cutoff(squeeze_single(vacuum_state(1), 0, 1.), max_cutoff=2)


def test_sample_fock(tmsv):
    samples = sample_fock(tmsv, 1000, 8, seed=1)
    assert samples.shape == (1000, 2)
    assert samples.dtype == np.int64
    np.testing.assert_array_equal(samples, sample_fock(tmsv, 1000, 8, seed=1))
    np.testing.assert_array_equal(samples[:, 0], samples[:, 1])
    np.testing.assert_array_equal(sample_fock(vacuum_state(3), 50, 4, seed=2), np.zeros((50, 3)))
    with pytest.raises(ValueError, match='N must be ≥ 1'):
        sample_fock(tmsv, 0, 8)


def test_sample_fock_refuses_insufficient_mass(tmsv):
    with pytest.raises(NumericGuardError) as excinfo:
        sample_fock(tmsv, 100, 2, seed=1)
    assert excinfo.value.suggested_cutoff == 8
    assert 'use cutoff 8' in str(excinfo.value)


def test_sampled_frequencies(tmsv):
    N = 100_000
    samples = sample_fock(tmsv, N, 8, seed=3)
    p = 0.16794
    frequency = np.mean(np.all(samples == (1, 1), axis=1))
    assert frequency == pytest.approx(p, abs=4 * math.sqrt(p * (1 - p) / N))


def test_sampled_distribution_total_variation(plt):
    state = squeeze_single(squeeze_single(vacuum_state(2), 0, 0.5), 1, 0.3)
    state = apply_passive(state, haar_random_unitary(2, seed=4).U)
    cutoff = default_cutoff(state, 1 - 1e-3)
    distribution = enumerate_distribution(state, cutoff)
    samples = sample_fock(state, 100_000, cutoff, seed=5)
    empirical = OutcomeDistribution.from_samples(samples, cutoff)
    assert total_variation(distribution, empirical).distance < 0.02

    labels = [str(tuple(outcome)) for outcome in distribution.outcomes.tolist()]
    x = np.arange(len(labels))
    plt.bar(x - 0.2, distribution.probabilities, width=0.4, label='enumerated')
    plt.bar(x + 0.2, [empirical.probability(outcome) for outcome in distribution.outcomes], width=0.4, label='sampled')
    plt.xticks(x, labels, rotation=90)
    plt.legend()


def test_outcome_distribution():
    samples = np.array([[0, 0], [1, 1], [0, 0], [2, 0]])
    distribution = OutcomeDistribution.from_samples(samples)
    assert distribution.cutoff == 2
    assert distribution.m == 2
    assert len(distribution) == 3
    assert distribution.probability((0, 0)) == 0.5
    assert distribution.probability((0, 2)) == 0
    assert distribution.mass == pytest.approx(1)
    np.testing.assert_allclose(distribution.sector_masses(), [0.5, 0, 0.5])
    assert distribution.entries == {(0, 0): 0.5, (1, 1): 0.25, (2, 0): 0.25}
    assert distribution.to_dict() == {
        'cutoff': 2,
        'mass': 1.,
        'outcomes': [
            {'outcome': [0, 0], 'probability': 0.5},
            {'outcome': [1, 1], 'probability': 0.25},
            {'outcome': [2, 0], 'probability': 0.25},
        ],
    }
    with pytest.raises(ValueError):
        OutcomeDistribution(np.zeros((2, 1)), np.array([0.7, 0.7]), 0)
    with pytest.raises(ValueError):
        OutcomeDistribution(np.zeros((2, 1)), np.array([1.]), 0)


def test_scattershot_success_probability():
    assert scattershot_success_probability(ScattershotParams(8, 64, 1 / 3)) == pytest.approx(0.05475, abs=1e-5)
    assert scattershot_success_probability(ScattershotParams(0, 5, 0.)) == 1
    assert scattershot_success_probability(ScattershotParams(2, 5, 0.)) == 0
    for n in range(6):
        for chi in np.linspace(0, 0.95, 20):
            assert 0 <= scattershot_success_probability(ScattershotParams(n, 5, chi)) <= 1
    with pytest.raises(ValueError):
        scattershot_success_probability(ScattershotParams(6, 5, 0.5))
    with pytest.raises(ValueError):
        scattershot_success_probability(ScattershotParams(2, 5, 1.))


def test_optimal_chi():
    assert optimal_chi(8, 64) == pytest.approx(1 / 3)
    assert optimal_chi(1, 1) == pytest.approx(1 / math.sqrt(2))
    assert optimal_chi(0, 4) == 0
    h = 1e-4
    for n, m in [(8, 64), (2, 10), (5, 20)]:
        chi = optimal_chi(n, m)
        derivative = (
            scattershot_success_probability(ScattershotParams(n, m, chi + h))
            - scattershot_success_probability(ScattershotParams(n, m, chi - h))
        ) / (2 * h)
        assert abs(derivative) < 1e-6
        best = scattershot_success_probability(ScattershotParams(n, m, chi))
        for other in (chi - 0.05, chi + 0.05):
            assert scattershot_success_probability(ScattershotParams(n, m, other)) < best
    with pytest.raises(ValueError):
        optimal_chi(1, 0)


def test_squeezing_in_decibel():
    assert chi_to_db(1 / 3) == pytest.approx(3.0103, abs=1e-4)
    assert chi_to_db(0.) == 0
    for chi in (0.1, 1 / 3, 0.5, 0.9):
        assert db_to_chi(chi_to_db(chi)) == pytest.approx(chi, abs=1e-12)
    with pytest.raises(ValueError):
        chi_to_db(1.)
    with pytest.raises(ValueError):
        db_to_chi(-1.)
