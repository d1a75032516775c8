# -*- coding: utf-8 -*-
"""Covariance characterization by dual-homodyne detection.

Each mode is split on a 50:50 beamsplitter with X measured on one arm and P on the other. A single shot yields a :math:`2m`-dimensional sample :math:`s = (x_1, p_1, \\ldots, x_m, p_m)` drawn from :math:`N(0, (\\Sigma + I)/2)`. The outer products :math:`\\xi = s s^T` average to :math:`(\\Sigma + I)/2`, so :math:`2\\bar{\\xi} - I` estimates Σ. The operator Chernoff bound

.. math::

    \\Pr\\{(1-\\eta)(\\Sigma + I)/2 \\preceq \\bar{\\xi} \\preceq (1+\\eta)(\\Sigma + I)/2\\} \\geq 1 - 8m\\, e^{-K\\eta^2/(8\\ln 2)}

combined with a squeezing floor :math:`\\Sigma \\succeq bI` turns this into a multiplicative estimate of Σ with relative deviation :math:`\\eta(1 + b^{-1})`.
"""
import logging
import math
import numpy as np
from typing import Optional, Union

from cvsampling.library.gaussian import (
    GaussianState,
    apply_symplectic,
    beamsplitter_unitary,
    embed,
    unitary_to_symplectic,
)

logger = logging.getLogger(__name__)

EIGENVALUE_CLIP_TOLERANCE = 1e-12
BAND_TOLERANCE = 1e-10
LN2 = math.log(2)


def sampling_covariance(state: GaussianState) -> np.ndarray:
    """Covariance of a dual-homodyne sample, :math:`(\\Sigma + I)/2`."""
    return (state.cov + np.eye(2 * state.m)) / 2


def explicit_sampling_covariance(state: GaussianState) -> np.ndarray:
    """Sample covariance obtained by splitting every mode with a vacuum ancilla and reading X and P on the two arms.

    Args:
        state: State of m modes.

    Returns:
        cov: :math:`2m \\times 2m` covariance of :math:`(x_1, p_1, \\ldots)` in the order the detectors report them.
    """
    m = state.m
    joint = np.eye(4 * m)
    joint[:2 * m, :2 * m] = state.cov
    joint = GaussianState(joint)
    S_split = unitary_to_symplectic(beamsplitter_unitary(math.pi / 4, 0.))
    S = np.eye(4 * m)
    for k in range(m):
        S = embed(S_split, [k, m + k], 2 * m) @ S
    joint = apply_symplectic(joint, S)
    # x from the signal arm, p from the ancilla arm
    readout = []
    for k in range(m):
        readout.extend((2 * k, 2 * (m + k) + 1))
    return joint.cov[np.ix_(readout, readout)]


def draw_dual_homodyne_samples(state: GaussianState, K: int, seed: Optional[int] = None, explicit: bool = False) -> np.ndarray:
    """Draws K independent dual-homodyne samples.

    Args:
        state: Physical Gaussian state.
        K: Number of samples, at least 1.
        seed: Seed for numpy's default generator.
        explicit: If true, the sample covariance is derived from an explicit beamsplitter-and-ancilla model of the detector instead of the closed form :math:`(\\Sigma + I)/2`.

    Returns:
        samples: K x 2m array, one sample per row.
    """
    if K < 1:
        raise ValueError(f"K must be ≥ 1, got {K}")
    if not state.is_physical():
        raise ValueError(f"state is unphysical (min eigenvalue of cov + i*Omega is {state.physicality_residual():.3e})")
    cov = explicit_sampling_covariance(state) if explicit else sampling_covariance(state)
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    if eigenvalues[0] < -EIGENVALUE_CLIP_TOLERANCE:
        raise ValueError(f"sampling covariance has negative eigenvalue {eigenvalues[0]:.3e}")
    factor = eigenvectors * np.sqrt(np.clip(eigenvalues, 0, None))
    rng = np.random.default_rng(seed)
    return rng.standard_normal((K, cov.shape[0])) @ factor.T


def outer_product_sample(s: np.ndarray) -> np.ndarray:
    """Sample matrix :math:`\\xi = s s^T`."""
    s = np.asarray(s, dtype=np.float64)
    return np.outer(s, s)


class SampleMatrixAccumulator:
    """Running sum of sample matrices and the number of samples it contains.

    Accumulators over disjoint sample sets can be merged in any order.

    Args:
        dimension: Phase-space dimension 2m.
    """
    def __init__(self, dimension: int) -> None:
        if dimension < 2 or dimension % 2:
            raise ValueError(f"dimension must be 2m with m >= 1, got {dimension}")
        self.sum = np.zeros((dimension, dimension))
        self.K = 0

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> 'SampleMatrixAccumulator':
        samples = np.atleast_2d(samples)
        accumulator = cls(samples.shape[1])
        accumulator.add(samples)
        return accumulator

    @property
    def dimension(self) -> int:
        return self.sum.shape[0]

    def add(self, samples: np.ndarray) -> None:
        """Adds a batch of samples (one per row) to the running sum."""
        samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
        if samples.shape[1] != self.dimension:
            raise ValueError(f"samples of length {samples.shape[1]} do not match dimension {self.dimension}")
        self.sum += samples.T @ samples
        self.K += samples.shape[0]

    def merge(self, other: 'SampleMatrixAccumulator') -> 'SampleMatrixAccumulator':
        """Returns a new accumulator holding the samples of both."""
        if other.dimension != self.dimension:
            raise ValueError(f"cannot merge accumulators of dimension {self.dimension} and {other.dimension}")
        merged = SampleMatrixAccumulator(self.dimension)
        merged.sum = self.sum + other.sum
        merged.K = self.K + other.K
        return merged


def sample_average(accumulator: SampleMatrixAccumulator) -> np.ndarray:
    """Sample average :math:`\\bar{\\xi} = \\frac{1}{K} \\sum_i \\xi_i`, an unbiased estimator of :math:`(\\Sigma + I)/2`."""
    if accumulator.K == 0:
        raise ValueError("cannot average an accumulator without samples (K = 0)")
    return accumulator.sum / accumulator.K


def reconstruct_covariance(xi_bar: np.ndarray) -> GaussianState:
    """Covariance estimate :math:`\\hat{\\Sigma} = 2\\bar{\\xi} - I`, symmetrized.

    The estimate can be mildly unphysical at finite K, check with :meth:`GaussianState.is_physical`.
    """
    xi_bar = np.asarray(xi_bar, dtype=np.float64)
    estimate = 2 * xi_bar - np.eye(xi_bar.shape[0])
    return GaussianState((estimate + estimate.T) / 2)


def check_eta(eta: float) -> None:
    if not 0 < eta < 0.5:
        raise ValueError(f"eta must be in (0, 1/2), got {eta}")


def chernoff_failure_bound(m: int, K: int, eta: float) -> float:
    """Failure probability :math:`8m\\, e^{-K\\eta^2/(8\\ln 2)}` of the operator Chernoff bound. The bound is vacuous when it exceeds 1.

    Args:
        m: Number of modes.
        K: Number of samples.
        eta: Deviation parameter in (0, 1/2).

    Returns:
        probability: Upper bound on the probability that the sample average leaves the band.
    """
    check_eta(eta)
    return 8 * m * math.exp(-K * eta ** 2 / (8 * LN2))


def required_sample_count(m: int, eta: float, delta: float) -> int:
    """Smallest K with :math:`8m\\, e^{-K\\eta^2/(8\\ln 2)} \\leq \\delta`, i.e. :math:`K = \\lceil (8\\ln 2/\\eta^2) \\ln(8m/\\delta) \\rceil`.

    Args:
        m: Number of modes.
        eta: Deviation parameter in (0, 1/2).
        delta: Target failure probability, positive.

    Returns:
        K: Required number of samples.
    """
    check_eta(eta)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if delta >= 8 * m:
        return 0
    K = math.ceil(8 * LN2 / eta ** 2 * math.log(8 * m / delta))
    # guard the closed form against rounding at the boundary
    while chernoff_failure_bound(m, K, eta) > delta:
        K += 1
    while K > 0 and chernoff_failure_bound(m, K - 1, eta) <= delta:
        K -= 1
    return K


def covariance_entry_count(m: int, scattershot: bool = False) -> int:
    """Entries of the covariance matrix to characterize: :math:`4m^2`, or :math:`16m^2` for two groups of m modes."""
    return 16 * m ** 2 if scattershot else 4 * m ** 2


def detection_space_size(m: int, n: int) -> int:
    """Number of photon-counting outcomes, :math:`m^n`, for n detected photons in m modes."""
    return m ** n


class ChernoffReport:
    """Outcome of a multiplicative band check together with its Chernoff failure bound.

    Args:
        m: Number of modes.
        K: Number of samples behind the estimate.
        eta: Deviation parameter.
        b: Squeezing floor.
        failure_bound: :math:`8m\\, e^{-K\\eta^2/(8\\ln 2)}`.
        band_ok: Whether the estimate lies inside the multiplicative band.
    """
    def __init__(self, m: int, K: int, eta: float, b: float, failure_bound: float, band_ok: bool) -> None:
        check_eta(eta)
        assert failure_bound >= 0
        self.m = m
        self.K = K
        self.eta = eta
        self.b = b
        self.failure_bound = failure_bound
        self.band_ok = band_ok

    def to_dict(self) -> dict:
        return {
            'm': int(self.m),
            'K': int(self.K),
            'eta': float(self.eta),
            'b': float(self.b),
            'failure_bound': float(self.failure_bound),
            'band_ok': bool(self.band_ok),
        }

    def __repr__(self) -> str:
        return f"ChernoffReport(m={self.m}, K={self.K}, eta={self.eta}, band_ok={self.band_ok})"


def multiplicative_band_check(
    sigma_true: Union[GaussianState, np.ndarray],
    sigma_hat: Union[GaussianState, np.ndarray],
    eta: float,
    b: float,
    K: int = 0
) -> ChernoffReport:
    """Checks :math:`(1-c)\\Sigma \\preceq \\hat{\\Sigma} \\preceq (1+c)\\Sigma` with :math:`c = \\eta(1 + b^{-1})`.

    Args:
        sigma_true: Reference covariance matrix with :math:`\\Sigma \\succeq bI`.
        sigma_hat: Estimated covariance matrix.
        eta: Deviation parameter in (0, 1/2).
        b: Squeezing floor, positive.
        K: Number of samples behind the estimate, used for the failure bound.

    Returns:
        report: Verdict and Chernoff failure bound.
    """
    if b <= 0:
        raise ValueError(f"squeezing floor b must be positive, got {b}")
    check_eta(eta)
    sigma_true = sigma_true.cov if isinstance(sigma_true, GaussianState) else np.asarray(sigma_true, dtype=np.float64)
    sigma_hat = sigma_hat.cov if isinstance(sigma_hat, GaussianState) else np.asarray(sigma_hat, dtype=np.float64)
    if sigma_true.shape != sigma_hat.shape:
        raise ValueError(f"covariance shapes {sigma_true.shape} and {sigma_hat.shape} differ")
    m = sigma_true.shape[0] // 2
    c = eta * (1 + 1 / b)
    lower = np.linalg.eigvalsh(sigma_hat - (1 - c) * sigma_true)[0]
    upper = np.linalg.eigvalsh((1 + c) * sigma_true - sigma_hat)[0]
    band_ok = bool(lower >= -BAND_TOLERANCE and upper >= -BAND_TOLERANCE)
    logger.debug(f"Band check (c={c:.4f}): lower margin {lower:.3e}, upper margin {upper:.3e}")
    return ChernoffReport(m, K, eta, b, chernoff_failure_bound(m, K, eta), band_ok)
