# -*- coding: utf-8 -*-
"""Zero-mean Gaussian states of :math:`m` bosonic modes and their evolution under symplectic transforms and the uniform loss channel.

Covariance matrices are :math:`2m \\times 2m`, use the interleaved quadrature ordering :math:`(x_1, p_1, \\ldots, x_m, p_m)` and are expressed in units where the vacuum variance of each quadrature equals 1. With :math:`a = (x + ip)/2` a passive interferometer maps the annihilation operators as :math:`a \\to U a`.

All functions are pure: they return a new :class:`GaussianState` and never modify their input.
"""
import math
import numpy as np
from typing import Iterable, Optional, Sequence, Union

SYMMETRY_TOLERANCE = 1e-12
PHYSICALITY_TOLERANCE = 1e-9
SYMPLECTIC_TOLERANCE = 1e-12
UNITARITY_TOLERANCE = 1e-10
PURITY_TOLERANCE = 1e-9


def symplectic_form(m: int) -> np.ndarray:
    """Interleaved symplectic form :math:`\\Omega`, a direct sum of :math:`m` blocks [[0, 1], [-1, 0]].

    Args:
        m: Number of modes.

    Returns:
        omega: :math:`2m \\times 2m` antisymmetric matrix.
    """
    return np.kron(np.eye(m), np.array([[0., 1.], [-1., 0.]]))


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOLERANCE) -> bool:
    """Checks :math:`S \\Omega S^T = \\Omega` entrywise.

    Args:
        S: Square real matrix of even dimension.
        tol: Absolute tolerance.

    Returns:
        symplectic: True if S preserves the symplectic form.
    """
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    omega = symplectic_form(S.shape[0] // 2)
    return bool(np.max(np.abs(S @ omega @ S.T - omega)) <= tol)


class GaussianState:
    """Zero-mean Gaussian state described by its covariance matrix.

    The covariance matrix is copied and made read-only, so a state can be shared freely. Physicality is not enforced on construction, because estimated covariance matrices can be mildly unphysical at finite sample size; use :meth:`is_physical` to check.

    Args:
        cov: :math:`2m \\times 2m` real symmetric covariance matrix (interleaved ordering, vacuum = 1).
        mean: Optional mean vector. Must be zero.
    """
    def __init__(self, cov: np.ndarray, mean: Optional[np.ndarray] = None) -> None:
        cov = np.array(cov, dtype=np.float64)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] == 0 or cov.shape[0] % 2:
            raise ValueError(f"covariance matrix must be 2m x 2m with m >= 1, got shape {cov.shape}")
        asymmetry = np.max(np.abs(cov - cov.T))
        if asymmetry > SYMMETRY_TOLERANCE * max(1., np.max(np.abs(cov))):
            raise ValueError(f"covariance matrix is not symmetric (max asymmetry {asymmetry:.3e})")
        cov = (cov + cov.T) / 2
        if mean is None:
            mean = np.zeros(cov.shape[0])
        else:
            mean = np.array(mean, dtype=np.float64)
            if mean.shape != (cov.shape[0], ):
                raise ValueError(f"mean must have length {cov.shape[0]}, got shape {mean.shape}")
            if np.any(mean != 0):
                raise ValueError("only zero-mean Gaussian states are supported")
        cov.setflags(write=False)
        mean.setflags(write=False)
        self._cov = cov
        self._mean = mean

    @property
    def cov(self) -> np.ndarray:
        """
        Returns:
            np.ndarray: read-only covariance matrix
        """
        return self._cov

    @property
    def mean(self) -> np.ndarray:
        """
        Returns:
            np.ndarray: read-only mean vector (always zero)
        """
        return self._mean

    @property
    def m(self) -> int:
        """
        Returns:
            int: number of modes
        """
        return self._cov.shape[0] // 2

    @property
    def n_entries(self) -> int:
        """
        Returns:
            int: number of stored covariance entries, :math:`4m^2`
        """
        return self._cov.size

    def physicality_residual(self) -> float:
        """Smallest eigenvalue of :math:`\\Sigma + i\\Omega`. Negative values indicate an unphysical matrix."""
        return float(np.linalg.eigvalsh(self._cov + 1j * symplectic_form(self.m))[0])

    def is_physical(self, tol: float = PHYSICALITY_TOLERANCE) -> bool:
        """Checks the uncertainty principle :math:`\\Sigma + i\\Omega \\succeq 0` up to tol."""
        return self.physicality_residual() >= -tol

    def is_pure(self, tol: float = PURITY_TOLERANCE) -> bool:
        """A physical Gaussian state is pure if and only if :math:`\\det \\Sigma = 1`."""
        return abs(np.linalg.det(self._cov) - 1) <= tol

    def mean_photon_numbers(self) -> np.ndarray:
        """Mean photon number per mode, :math:`(\\Sigma_{xx} + \\Sigma_{pp} - 2) / 4`."""
        diagonal = np.diag(self._cov)
        return (diagonal[0::2] + diagonal[1::2] - 2) / 4

    def mean_photon_number(self) -> float:
        """Total mean photon number :math:`\\mathrm{tr}(\\Sigma - I) / 4`."""
        return float((np.trace(self._cov) - 2 * self.m) / 4)

    def reduced(self, modes: Sequence[int]) -> 'GaussianState':
        """Reduced state on a subset of modes.

        Args:
            modes: Mode indices to keep, in the order they appear in the reduced state.

        Returns:
            state: Reduced Gaussian state.
        """
        modes = [check_mode(self, mode) for mode in modes]
        indices = quadrature_indices(modes)
        return GaussianState(self._cov[np.ix_(indices, indices)])

    def __repr__(self) -> str:
        return f"GaussianState(m={self.m})"


def check_mode(state: GaussianState, mode: int) -> int:
    """Validates a 0-based mode index for the given state.

    Args:
        state: The Gaussian state.
        mode: Mode index.

    Returns:
        mode: The validated index as int.
    """
    if not (isinstance(mode, (int, np.integer)) and 0 <= mode < state.m):
        raise ValueError(f"mode {mode} out of range for a state of {state.m} modes")
    return int(mode)


def quadrature_indices(modes: Iterable[int]) -> list[int]:
    """Interleaved quadrature indices :math:`(x_k, p_k)` for the given modes."""
    indices = []
    for mode in modes:
        indices.extend((2 * mode, 2 * mode + 1))
    return indices


def vacuum_state(m: int) -> GaussianState:
    """Vacuum state of m modes, :math:`\\Sigma = I`.

    Args:
        m: Number of modes, at least 1.

    Returns:
        state: The vacuum state.
    """
    if m < 1:
        raise ValueError(f"number of modes must be at least 1, got {m}")
    return GaussianState(np.eye(2 * m))


def embed(S_local: np.ndarray, modes: Sequence[int], m: int) -> np.ndarray:
    """Embeds a symplectic acting on a few modes into the full 2m-dimensional phase space.

    Args:
        S_local: :math:`2k \\times 2k` symplectic matrix acting on ``modes``.
        modes: The k mode indices, in the order used by S_local.
        m: Total number of modes.

    Returns:
        S: :math:`2m \\times 2m` symplectic matrix.
    """
    S = np.eye(2 * m)
    indices = quadrature_indices(modes)
    S[np.ix_(indices, indices)] = S_local
    return S


def apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    """Applies a symplectic transform, :math:`\\Sigma \\to S \\Sigma S^T`.

    Args:
        state: Input state.
        S: :math:`2m \\times 2m` symplectic matrix.

    Returns:
        state: Transformed state.
    """
    S = np.asarray(S, dtype=np.float64)
    if S.shape != state.cov.shape:
        raise ValueError(f"symplectic of shape {S.shape} does not match state of {state.m} modes")
    cov = S @ state.cov @ S.T
    return GaussianState((cov + cov.T) / 2)


def squeeze_single(state: GaussianState, mode: int, r: float) -> GaussianState:
    """Single-mode squeezing along x: on vacuum the mode block becomes diag(:math:`e^{-2r}, e^{2r}`).

    Args:
        state: Input state.
        mode: Mode index.
        r: Squeezing parameter; negative values squeeze p.

    Returns:
        state: Squeezed state.
    """
    mode = check_mode(state, mode)
    S_local = np.diag([math.exp(-r), math.exp(r)])
    return apply_symplectic(state, embed(S_local, [mode], state.m))


def two_mode_squeeze(state: GaussianState, i: int, j: int, r: float) -> GaussianState:
    """Two-mode squeezing :math:`a_i \\to \\cosh r\\, a_i + \\sinh r\\, a_j^\\dagger`.

    On vacuum the diagonal blocks become :math:`\\cosh(2r) I_2` and the cross blocks :math:`\\sinh(2r)\\,\\mathrm{diag}(1, -1)`.

    Args:
        state: Input state.
        i: First mode.
        j: Second mode, different from i.
        r: Squeezing parameter.

    Returns:
        state: Squeezed state.
    """
    i, j = check_mode(state, i), check_mode(state, j)
    if i == j:
        raise ValueError(f"two-mode squeezing requires two different modes, got {i} twice")
    ch, sh = math.cosh(r), math.sinh(r)
    Z = np.diag([1., -1.])
    S_local = np.block([[ch * np.eye(2), sh * Z], [sh * Z, ch * np.eye(2)]])
    return apply_symplectic(state, embed(S_local, [i, j], state.m))


def beamsplitter_unitary(theta: float, phi: float) -> np.ndarray:
    """2x2 beamsplitter convention [[cos θ, sin θ], [sin θ, -cos θ]] with a pre-phase :math:`e^{i\\phi}` on the first mode.

    θ = π/4, φ = 0 is the 50:50 beamsplitter [[1, 1], [1, -1]]/√2.

    Args:
        theta: Mixing angle.
        phi: Phase applied to the first mode before mixing.

    Returns:
        U: 2x2 complex unitary.
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=np.complex128) @ np.diag([np.exp(1j * phi), 1.])


def beamsplitter(state: GaussianState, i: int, j: int, theta: float, phi: float = 0.) -> GaussianState:
    """Passive two-mode beamsplitter using the :func:`beamsplitter_unitary` convention.

    Args:
        state: Input state.
        i: First mode (receives the pre-phase).
        j: Second mode, different from i.
        theta: Mixing angle.
        phi: Phase.

    Returns:
        state: Transformed state.
    """
    i, j = check_mode(state, i), check_mode(state, j)
    if i == j:
        raise ValueError(f"beamsplitter requires two different modes, got {i} twice")
    return apply_passive(state, beamsplitter_unitary(theta, phi), [i, j])


def phase_shift(state: GaussianState, mode: int, phi: float) -> GaussianState:
    """Phase shift :math:`a \\to e^{i\\phi} a`, a rotation of the mode's quadrature block.

    Args:
        state: Input state.
        mode: Mode index.
        phi: Phase.

    Returns:
        state: Transformed state.
    """
    mode = check_mode(state, mode)
    c, s = math.cos(phi), math.sin(phi)
    return apply_symplectic(state, embed(np.array([[c, -s], [s, c]]), [mode], state.m))


def unitarity_residual(U: np.ndarray) -> float:
    """Largest entry of :math:`|U^\\dagger U - I|`."""
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def unitary_to_symplectic(U: np.ndarray) -> np.ndarray:
    """Orthogonal symplectic matrix of the interferometer :math:`a \\to U a` in interleaved ordering.

    With :math:`U = X + iY`, the quadratures transform as :math:`x \\to Xx - Yp` and :math:`p \\to Yx + Xp`.

    Args:
        U: m x m complex unitary.

    Returns:
        S: :math:`2m \\times 2m` orthogonal symplectic matrix.
    """
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] == 0:
        raise ValueError(f"unitary must be a non-empty square matrix, got shape {U.shape}")
    residual = unitarity_residual(U)
    if residual > UNITARITY_TOLERANCE:
        raise ValueError(f"matrix is not unitary (max |U^dagger U - I| = {residual:.3e})")
    m = U.shape[0]
    X, Y = U.real, U.imag
    S = np.empty((2 * m, 2 * m))
    S[0::2, 0::2] = X
    S[0::2, 1::2] = -Y
    S[1::2, 0::2] = Y
    S[1::2, 1::2] = X
    return S


def apply_passive(state: GaussianState, U: np.ndarray, modes: Optional[Sequence[int]] = None) -> GaussianState:
    """Applies an interferometer to a subset of modes.

    Args:
        state: Input state.
        U: k x k unitary.
        modes: The k modes the interferometer acts on. Defaults to all modes.

    Returns:
        state: Transformed state.
    """
    if modes is None:
        modes = range(state.m)
    modes = [check_mode(state, mode) for mode in modes]
    if len(set(modes)) != len(modes):
        raise ValueError(f"modes must be distinct, got {modes}")
    S_local = unitary_to_symplectic(U)
    if S_local.shape[0] != 2 * len(modes):
        raise ValueError(f"unitary of size {S_local.shape[0] // 2} does not match {len(modes)} modes")
    return apply_symplectic(state, embed(S_local, modes, state.m))


def apply_uniform_loss(state: GaussianState, eta: float) -> GaussianState:
    """Uniform photon loss on all modes, :math:`\\Sigma \\to \\eta \\Sigma + (1 - \\eta) I`.

    Args:
        state: Input state.
        eta: Transmissivity in [0, 1].

    Returns:
        state: Lossy state.
    """
    if not 0 <= eta <= 1:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    return GaussianState(eta * state.cov + (1 - eta) * np.eye(2 * state.m))


def min_quadrature_variance(state: Union[GaussianState, np.ndarray]) -> float:
    """Squeezing floor b: the smallest eigenvalue of Σ, so that :math:`\\Sigma \\succeq bI`.

    Args:
        state: Gaussian state or covariance matrix.

    Returns:
        b: Smallest quadrature variance over all quadrature directions.
    """
    cov = state.cov if isinstance(state, GaussianState) else np.asarray(state, dtype=np.float64)
    return float(np.linalg.eigvalsh(cov)[0])
