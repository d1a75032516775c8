# -*- coding: utf-8 -*-
"""Photon-counting statistics of zero-mean Gaussian states.

The probability of an outcome :math:`\\bar{n} = (n_1, \\ldots, n_m)` is

.. math::

    \\Pr(\\bar{n}) = \\frac{\\mathrm{haf}(A_{\\bar{n}})}{\\bar{n}!\\,\\sqrt{\\det Q}}, \\qquad Q = \\Sigma_a + I/2, \\quad A = X_{2m}\\,(I - Q^{-1})^*,

where :math:`\\Sigma_a` is the covariance matrix in the :math:`(a, a^\\dagger)` basis and :math:`A_{\\bar{n}}` repeats row and column k of A :math:`n_k` times. For pure states A is block diagonal, :math:`A = B \\oplus B^*`, and the probability reduces to :math:`|\\mathrm{haf}(B_{\\bar{n}})|^2 / (\\bar{n}!\\sqrt{\\det Q})`, which halves the hafnian dimension.

This module also holds the scattershot photon statistics of m two-mode squeezers and the squeezing conversions.
"""
import itertools
import logging
import math
import numpy as np
from concurrent.futures import ThreadPoolExecutor
from thewalrus.quantum import Amat, Qmat
from typing import Iterator, NamedTuple, Optional, Sequence

from cvsampling.errors import NumericGuardError
from cvsampling.library.gaussian import GaussianState
from cvsampling.library.hafnian import MAX_DIMENSION, hafnian

logger = logging.getLogger(__name__)

PURE_BLOCK_TOLERANCE = 1e-10
MASS_TOLERANCE = 1e-9
SAMPLING_MASS = 1 - 1e-3
DEFAULT_MASS = 0.999


class GBSMatrices:
    """Matrices entering the hafnian probability formula of a zero-mean Gaussian state.

    Q and A come from :mod:`thewalrus.quantum`, which expects xxpp ordering; with hbar=2 its vacuum covariance is the identity.

    Args:
        state: Physical Gaussian state.
    """
    def __init__(self, state: GaussianState) -> None:
        if not state.is_physical():
            raise ValueError(f"state is unphysical (min eigenvalue of cov + i*Omega is {state.physicality_residual():.3e})")
        m = state.m
        xxpp = np.concatenate([np.arange(0, 2 * m, 2), np.arange(1, 2 * m, 2)])
        cov = state.cov[np.ix_(xxpp, xxpp)]
        Q = Qmat(cov, hbar=2)
        self.m = m
        self.A = Amat(cov, hbar=2)
        self.A = (self.A + self.A.T) / 2
        self.sqrt_det_Q = math.sqrt(np.linalg.det(Q).real)
        self.pure = bool(np.max(np.abs(self.A[:m, m:]), initial=0.) < PURE_BLOCK_TOLERANCE)
        self.B = self.A[:m, :m]

    @property
    def max_cutoff(self) -> int:
        """Largest total photon number whose probabilities stay within the hafnian kernel's dimension limit."""
        return MAX_DIMENSION if self.pure else MAX_DIMENSION // 2

    def probability(self, outcome: Sequence[int]) -> float:
        """Probability of a photon-counting outcome."""
        outcome = check_outcome(outcome, self.m)
        indices = np.repeat(np.arange(self.m), outcome)
        normalization = math.prod(math.factorial(n) for n in outcome) * self.sqrt_det_Q
        if self.pure:
            if indices.size % 2:
                return 0.
            haf = hafnian(self.B[np.ix_(indices, indices)])
            return float(abs(haf) ** 2 / normalization)
        indices = np.concatenate([indices, indices + self.m])
        haf = hafnian(self.A[np.ix_(indices, indices)])
        return float(haf.real / normalization)


def check_outcome(outcome: Sequence[int], m: int) -> tuple[int, ...]:
    outcome = tuple(int(n) for n in outcome)
    if len(outcome) != m:
        raise ValueError(f"outcome {outcome} does not have {m} modes")
    if any(n < 0 for n in outcome):
        raise ValueError(f"outcome {outcome} has negative photon numbers")
    return outcome


def outcome_probability(state: GaussianState, outcome: Sequence[int]) -> float:
    """Probability of detecting the given photon numbers with photon-number-resolving detectors.

    Args:
        state: Zero-mean physical Gaussian state.
        outcome: Photon number per mode.

    Returns:
        probability: Probability of the outcome.
    """
    return GBSMatrices(state).probability(outcome)


def outcomes_with_total(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """All occupation vectors of m modes with exactly n photons, in lexicographic order."""
    if m == 1:
        yield (n, )
        return
    for first in range(n + 1):
        for rest in outcomes_with_total(m - 1, n - first):
            yield (first, ) + rest


def outcomes_up_to(m: int, cutoff: int) -> list[tuple[int, ...]]:
    """All occupation vectors of m modes with at most ``cutoff`` photons in total, in lexicographic order."""
    return [outcome for outcome in itertools.product(range(cutoff + 1), repeat=m) if sum(outcome) <= cutoff]


class OutcomeDistribution:
    """Probabilities of all outcomes with at most ``cutoff`` photons in total.

    Args:
        outcomes: k x m integer array of occupation vectors.
        probabilities: Probability of each outcome.
        cutoff: Maximum total photon number.
    """
    def __init__(self, outcomes: np.ndarray, probabilities: np.ndarray, cutoff: int) -> None:
        outcomes = np.asarray(outcomes, dtype=np.int64)
        probabilities = np.asarray(probabilities, dtype=np.float64)
        if outcomes.ndim != 2 or outcomes.shape[0] != probabilities.size:
            raise ValueError(f"outcomes of shape {outcomes.shape} do not match {probabilities.size} probabilities")
        if probabilities.size and (probabilities.min() < -MASS_TOLERANCE or probabilities.max() > 1 + MASS_TOLERANCE):
            raise ValueError("probabilities must lie in [0, 1]")
        if probabilities.sum() > 1 + MASS_TOLERANCE:
            raise ValueError(f"total mass {probabilities.sum()} exceeds 1")
        self.outcomes = outcomes
        self.probabilities = probabilities
        self.cutoff = int(cutoff)
        self._index = {tuple(outcome): k for k, outcome in enumerate(outcomes.tolist())}

    @classmethod
    def from_samples(cls, samples: np.ndarray, cutoff: Optional[int] = None) -> 'OutcomeDistribution':
        """Empirical distribution of sampled outcomes."""
        samples = np.atleast_2d(np.asarray(samples, dtype=np.int64))
        outcomes, counts = np.unique(samples, axis=0, return_counts=True)
        if cutoff is None:
            cutoff = int(samples.sum(axis=1).max())
        return cls(outcomes, counts / samples.shape[0], cutoff)

    @property
    def m(self) -> int:
        return self.outcomes.shape[1]

    @property
    def mass(self) -> float:
        """Sum of the included probabilities."""
        return float(self.probabilities.sum())

    @property
    def entries(self) -> dict[tuple[int, ...], float]:
        return {outcome: float(self.probabilities[k]) for outcome, k in self._index.items()}

    def probability(self, outcome: Sequence[int]) -> float:
        """Probability of an outcome, 0 when it is not included."""
        k = self._index.get(tuple(int(n) for n in outcome))
        return 0. if k is None else float(self.probabilities[k])

    def sector_masses(self) -> np.ndarray:
        """Mass per total photon number 0..cutoff."""
        totals = self.outcomes.sum(axis=1)
        return np.bincount(totals, weights=self.probabilities, minlength=self.cutoff + 1)

    def to_dict(self) -> dict:
        return {
            'cutoff': self.cutoff,
            'mass': self.mass,
            'outcomes': [
                {'outcome': outcome, 'probability': float(p)}
                for outcome, p in zip(self.outcomes.tolist(), self.probabilities)
            ],
        }

    def __len__(self) -> int:
        return self.probabilities.size

    def __repr__(self) -> str:
        return f"OutcomeDistribution(m={self.m}, cutoff={self.cutoff}, mass={self.mass:.6f})"


def enumerate_distribution(state: GaussianState, cutoff: int, workers: int = 1) -> OutcomeDistribution:
    """Probabilities of all outcomes with at most ``cutoff`` photons, in lexicographic outcome order.

    Args:
        state: Zero-mean physical Gaussian state.
        cutoff: Maximum total photon number.
        workers: Number of threads evaluating outcomes concurrently. The result does not depend on it.

    Returns:
        distribution: The truncated outcome distribution and its captured mass.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be non-negative, got {cutoff}")
    matrices = GBSMatrices(state)
    if cutoff > matrices.max_cutoff:
        raise NumericGuardError(f"cutoff {cutoff} exceeds {matrices.max_cutoff}, the largest photon number the hafnian kernel supports for this {'pure' if matrices.pure else 'mixed'} state")
    outcomes = outcomes_up_to(state.m, cutoff)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            probabilities = list(executor.map(matrices.probability, outcomes))
    else:
        probabilities = [matrices.probability(outcome) for outcome in outcomes]
    distribution = OutcomeDistribution(np.array(outcomes, dtype=np.int64).reshape(-1, state.m), np.array(probabilities), cutoff)
    logger.debug(f"Enumerated {len(outcomes)} outcomes up to {cutoff} photons, captured mass {distribution.mass:.8f}")
    return distribution


def photon_number_sectors(state: GaussianState, max_n: int) -> np.ndarray:
    """Probability of detecting exactly n photons in total, for n = 0..max_n."""
    matrices = GBSMatrices(state)
    return np.array([
        sum(matrices.probability(outcome) for outcome in outcomes_with_total(state.m, n))
        for n in range(max_n + 1)
    ])


def default_cutoff(state: GaussianState, mass: float = DEFAULT_MASS, max_cutoff: Optional[int] = None) -> int:
    """Smallest total-photon cutoff whose captured probability mass reaches ``mass``.

    Sector masses are accumulated from zero photons upwards until the captured mass reaches ``mass``.

    Args:
        state: Zero-mean physical Gaussian state.
        mass: Required captured mass.
        max_cutoff: Largest cutoff considered; never above the hafnian limit of the state.

    Returns:
        cutoff: The cutoff.
    """
    matrices = GBSMatrices(state)
    max_cutoff = matrices.max_cutoff if max_cutoff is None else min(max_cutoff, matrices.max_cutoff)
    logger.debug(f"Mean photon numbers per mode: {state.mean_photon_numbers()}")
    captured = 0.
    for n in range(max_cutoff + 1):
        captured += sum(matrices.probability(outcome) for outcome in outcomes_with_total(state.m, n))
        if captured >= mass:
            logger.info(f"Selected cutoff {n} with captured mass {captured:.6f}")
            return n
    raise NumericGuardError(f"captured mass {captured:.6f} at cutoff {max_cutoff} stays below {mass}")


def sample_from_distribution(distribution: OutcomeDistribution, N: int, seed: Optional[int] = None) -> np.ndarray:
    """N independent draws by inverse CDF over the renormalized distribution.

    Args:
        distribution: Enumerated outcome distribution.
        N: Number of samples.
        seed: Seed for numpy's default generator.

    Returns:
        samples: N x m integer array of outcomes.
    """
    if N < 1:
        raise ValueError(f"N must be ≥ 1, got {N}")
    probabilities = np.clip(distribution.probabilities, 0, None)
    cdf = np.cumsum(probabilities / probabilities.sum())
    rng = np.random.default_rng(seed)
    indices = np.searchsorted(cdf, rng.random(N), side='right')
    indices = np.minimum(indices, len(cdf) - 1)
    return distribution.outcomes[indices]


def sample_fock(state: GaussianState, N: int, cutoff: int, seed: Optional[int] = None) -> np.ndarray:
    """Photon-counting samples of a Gaussian state, drawn from its enumerated distribution.

    Args:
        state: Zero-mean physical Gaussian state.
        N: Number of samples.
        cutoff: Maximum total photon number. The captured mass must be at least :math:`1 - 10^{-3}`.
        seed: Seed for numpy's default generator.

    Returns:
        samples: N x m integer array of outcomes.
    """
    distribution = enumerate_distribution(state, cutoff)
    check_captured_mass(state, distribution)
    return sample_from_distribution(distribution, N, seed)


def check_captured_mass(state: GaussianState, distribution: OutcomeDistribution, required: float = SAMPLING_MASS) -> None:
    """Refuses distributions whose captured mass is below ``required``, suggesting a cutoff that passes."""
    if distribution.mass >= required:
        return
    try:
        suggested = default_cutoff(state, required)
    except NumericGuardError:
        suggested = None
    raise NumericGuardError(
        f"cutoff {distribution.cutoff} captures mass {distribution.mass:.6f} < {required}"
        + (f"; use cutoff {suggested}" if suggested is not None else ""),
        suggested_cutoff=suggested,
    )


class ScattershotParams(NamedTuple):
    """n detected photons from m two-mode squeezers of strength χ."""
    n: int
    m: int
    chi: float


def scattershot_success_probability(params: ScattershotParams) -> float:
    """Probability :math:`\\binom{m}{n} \\chi^{2n} (1-\\chi^2)^m` of heralding n photons from m two-mode squeezers.

    Args:
        params: Photon number, number of sources and squeezing strength.

    Returns:
        probability: The heralding probability.
    """
    n, m, chi = params
    if not 0 <= n <= m:
        raise ValueError(f"photon number {n} must be in [0, m={m}]")
    if not 0 <= chi < 1:
        raise ValueError(f"chi must be in [0, 1), got {chi}")
    return math.comb(m, n) * chi ** (2 * n) * (1 - chi ** 2) ** m


def optimal_chi(n: int, m: int) -> float:
    """Squeezing strength :math:`\\chi = \\sqrt{n/(m+n)}` that maximizes the scattershot probability of n photons."""
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    return math.sqrt(n / (m + n))


def chi_to_db(chi: float) -> float:
    """Squeezing in dB, :math:`10 \\log_{10} e^{2r}` with :math:`r = \\mathrm{artanh}\\,\\chi`."""
    if not 0 <= chi < 1:
        raise ValueError(f"chi must be in [0, 1), got {chi}")
    return 20 * math.atanh(chi) / math.log(10)


def db_to_chi(db: float) -> float:
    """Inverse of :func:`chi_to_db`."""
    if db < 0:
        raise ValueError(f"squeezing in dB must be non-negative, got {db}")
    return math.tanh(db * math.log(10) / 20)
