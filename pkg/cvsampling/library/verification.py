# -*- coding: utf-8 -*-
"""Certification of estimated Gaussian states against pure Gaussian targets.

The fidelity between a pure target :math:`\\Sigma_t` and a possibly mixed state :math:`\\Sigma_e` of m modes is :math:`F = 2^m / \\sqrt{\\det(\\Sigma_t + \\Sigma_e)}` (vacuum variance 1). A state passes when :math:`1 - F < \\varepsilon`; the Fuchs-van de Graaf bound :math:`\\sqrt{1 - F}` on the trace distance is reported alongside.
"""
import logging
import math
import numpy as np
import pandas as pd
from typing import NamedTuple, Sequence, Union

from cvsampling.errors import NumericGuardError
from cvsampling.library.fock import OutcomeDistribution, enumerate_distribution
from cvsampling.library.gaussian import (
    GaussianState,
    apply_uniform_loss,
    symplectic_form,
    two_mode_squeeze,
    vacuum_state,
    PHYSICALITY_TOLERANCE,
)

logger = logging.getLogger(__name__)

PURE_TARGET_TOLERANCE = 1e-6
FIDELITY_TOLERANCE = 1e-6
MAX_PROJECTION_ITERATIONS = 1000


def as_covariance(state: Union[GaussianState, np.ndarray]) -> np.ndarray:
    return state.cov if isinstance(state, GaussianState) else np.asarray(state, dtype=np.float64)


def gaussian_fidelity_pure_target(target: Union[GaussianState, np.ndarray], estimate: Union[GaussianState, np.ndarray]) -> float:
    """Fidelity :math:`F = 2^m / \\sqrt{\\det(\\Sigma_t + \\Sigma_e)}` between a pure target and a zero-mean Gaussian state.

    Args:
        target: Covariance matrix of the pure target state.
        estimate: Covariance matrix of the (possibly mixed) prepared state.

    Returns:
        fidelity: Squared overlap :math:`\\langle\\psi_t|\\rho_e|\\psi_t\\rangle`.
    """
    sigma_t = as_covariance(target)
    sigma_e = as_covariance(estimate)
    if sigma_t.shape != sigma_e.shape:
        raise ValueError(f"target of shape {sigma_t.shape} and estimate of shape {sigma_e.shape} differ")
    det_target = np.linalg.det(sigma_t)
    if abs(det_target - 1) > PURE_TARGET_TOLERANCE:
        raise ValueError(f"target state is not pure (det = {det_target:.8f})")
    m = sigma_t.shape[0] // 2
    det = np.linalg.det(sigma_t + sigma_e)
    if det <= 0:
        raise ValueError(f"det(target + estimate) = {det:.3e} is not positive")
    return float(2 ** m / math.sqrt(det))


def trace_distance_bound(F: float) -> tuple[float, float]:
    """Acceptance quantity :math:`1 - F` and the Fuchs-van de Graaf trace-distance bound :math:`\\sqrt{1 - F}`.

    Args:
        F: Fidelity in [0, 1].

    Returns:
        one_minus_F: :math:`1 - F`.
        fvdg_bound: :math:`\\sqrt{1 - F}`.
    """
    if not -FIDELITY_TOLERANCE <= F <= 1 + FIDELITY_TOLERANCE:
        raise ValueError(f"fidelity must lie in [0, 1], got {F}")
    one_minus_F = max(1 - F, 0.)
    return one_minus_F, math.sqrt(one_minus_F)


class TotalVariation(NamedTuple):
    """Total variation distance on the union of two truncated outcome spaces.

    ``residual`` is the worst-case contribution :math:`\\frac{1}{2}|\\mathrm{mass}_P - \\mathrm{mass}_Q|` of the mass outside the enumerated outcomes.
    """
    distance: float
    residual: float

    @property
    def bound(self) -> float:
        return self.distance + self.residual


def total_variation(P: OutcomeDistribution, Q: OutcomeDistribution) -> TotalVariation:
    """Total variation distance :math:`\\frac{1}{2}\\sum|p - q|` between two outcome distributions.

    Outcomes missing from one distribution count as probability 0.

    Args:
        P: First distribution.
        Q: Second distribution over the same number of modes.

    Returns:
        tvd: Distance and off-cutoff residual.
    """
    if P.m != Q.m:
        raise ValueError(f"distributions over {P.m} and {Q.m} modes cannot be compared")
    p, q = P.entries, Q.entries
    distance = 0.5 * sum(abs(p.get(outcome, 0.) - q.get(outcome, 0.)) for outcome in p.keys() | q.keys())
    residual = 0.5 * abs(P.mass - Q.mass)
    return TotalVariation(float(distance), float(residual))


def verification_sample_budget(m: int, c: float = 1.) -> int:
    """Verification sample count :math:`\\lceil c\\, m^4 \\rceil`.

    Args:
        m: Number of modes.
        c: Calibration constant, positive.

    Returns:
        K_verify: Number of samples.
    """
    if m < 1:
        raise ValueError(f"number of modes must be at least 1, got {m}")
    if c <= 0:
        raise ValueError(f"budget constant must be positive, got {c}")
    return math.ceil(c * m ** 4)


def discrete_verification_budget(n: int, m: int) -> int:
    """Comparator :math:`n\\, m^n` for verification with discrete photon detection."""
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    return n * m ** n


def project_physical(cov: Union[GaussianState, np.ndarray]) -> tuple[np.ndarray, float]:
    """Projects a covariance matrix onto the physical set :math:`\\Sigma + i\\Omega \\succeq 0`.

    Alternates between flooring the eigenvalues of :math:`\\Sigma + i\\Omega` at 0 and restoring the imaginary part :math:`\\Omega`. Physical input is returned unchanged.

    Args:
        cov: Covariance matrix, possibly mildly unphysical.

    Returns:
        projected: Physical covariance matrix.
        perturbation: Frobenius norm of the change.
    """
    sigma = as_covariance(cov)
    omega = symplectic_form(sigma.shape[0] // 2)
    projected = sigma.copy()
    for iteration in range(MAX_PROJECTION_ITERATIONS):
        eigenvalues, eigenvectors = np.linalg.eigh(projected + 1j * omega)
        if eigenvalues[0] >= -PHYSICALITY_TOLERANCE:
            break
        floored = (eigenvectors * np.clip(eigenvalues, 0, None)) @ eigenvectors.conj().T
        projected = floored.real
        projected = (projected + projected.T) / 2
    else:
        raise NumericGuardError(f"physical projection did not converge in {MAX_PROJECTION_ITERATIONS} iterations")
    perturbation = float(np.linalg.norm(projected - sigma))
    if perturbation > 0:
        logger.info(f"Projected estimate onto the physical set in {iteration} iterations, Frobenius perturbation {perturbation:.3e}")
    return projected, perturbation


class VerificationReport:
    """Fidelity-based verdict on a prepared state.

    Args:
        fidelity: Fidelity with the target.
        epsilon: Tolerance; the state passes when :math:`1 - F < \\varepsilon`.
        sample_budget: Recommended number of verification samples.
        projection_perturbation: Frobenius change made to the estimate to make it physical.
    """
    def __init__(self, fidelity: float, epsilon: float, sample_budget: int, projection_perturbation: float = 0.) -> None:
        self.fidelity = fidelity
        self.one_minus_F, self.fvdg_bound = trace_distance_bound(fidelity)
        self.epsilon = epsilon
        self.passed = self.one_minus_F < epsilon
        self.sample_budget = sample_budget
        self.projection_perturbation = projection_perturbation

    def to_dict(self) -> dict:
        return {
            'fidelity': float(self.fidelity),
            'one_minus_F': float(self.one_minus_F),
            'fvdg_bound': float(self.fvdg_bound),
            'epsilon': float(self.epsilon),
            'pass': bool(self.passed),
            'sample_budget': int(self.sample_budget),
            'projection_perturbation': float(self.projection_perturbation),
        }

    def __repr__(self) -> str:
        return f"VerificationReport(fidelity={self.fidelity:.8f}, epsilon={self.epsilon}, pass={self.passed})"


def certify(
    target: Union[GaussianState, np.ndarray],
    estimate: Union[GaussianState, np.ndarray],
    epsilon: float,
    c: float = 1.
) -> VerificationReport:
    """Certifies an estimated state against a pure target.

    The estimate is projected onto the physical set first.

    Args:
        target: Pure target state.
        estimate: Estimated covariance matrix.
        epsilon: Tolerance in [0, 1].
        c: Calibration constant of the sample budget.

    Returns:
        report: The verification report.
    """
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    projected, perturbation = project_physical(estimate)
    fidelity = gaussian_fidelity_pure_target(target, projected)
    m = projected.shape[0] // 2
    report = VerificationReport(fidelity, epsilon, verification_sample_budget(m, c), perturbation)
    logger.info(f"Fidelity {fidelity:.8f} against tolerance {epsilon}: {'pass' if report.passed else 'fail'}")
    return report


def loss_tvd_study(rs: Sequence[float], eta: float = 0.9, cutoff: int = 6) -> pd.DataFrame:
    """Total variation distance between lossless and lossy two-mode squeezed vacuum for a range of squeezing parameters.

    Args:
        rs: Squeezing parameters.
        eta: Transmissivity of the uniform loss channel.
        cutoff: Maximum total photon number enumerated.

    Returns:
        study: One row per r with columns r, tvd and residual.
    """
    rows = []
    for r in rs:
        state = two_mode_squeeze(vacuum_state(2), 0, 1, r)
        lossless = enumerate_distribution(state, cutoff)
        lossy = enumerate_distribution(apply_uniform_loss(state, eta), cutoff)
        tvd = total_variation(lossless, lossy)
        rows.append({'r': float(r), 'tvd': tvd.distance, 'residual': tvd.residual})
    return pd.DataFrame(rows, columns=['r', 'tvd', 'residual'])
