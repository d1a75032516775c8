# -*- coding: utf-8 -*-
"""Brute-force photon-counting oracle in a truncated Fock space.

A :class:`FockCircuit` consists of squeezed-vacuum sources followed by a passive interferometer. Source states are obtained by applying the exponential of the squeezing generator to the vacuum in a padded per-mode space, which is then cut back to ``cutoff + 1`` levels. The interferometer :math:`a \\to U a` acts as :math:`\\exp(\\sum_{ij} (\\log U)_{ij} a_i^\\dagger a_j)`, which conserves the total photon number, so the sector with at most ``cutoff`` photons is evolved without truncation error.

The oracle is independent of the covariance-matrix machinery and is meant for desk-scale cross-checks only.
"""
import logging
import numpy as np
import scipy.sparse as sp
from scipy.linalg import logm
from scipy.sparse.linalg import expm_multiply
from typing import Optional, Sequence

from cvsampling.errors import NumericGuardError
from cvsampling.library.gaussian import (
    GaussianState,
    apply_passive,
    squeeze_single,
    two_mode_squeeze,
    unitarity_residual,
    vacuum_state,
    UNITARITY_TOLERANCE,
)

logger = logging.getLogger(__name__)

MAX_MODES = 4
MAX_DIMENSION = 9 ** 4
EDGE_MASS_TOLERANCE = 1e-6
DEFAULT_PADDING = 80


class FockCircuit:
    """Squeezed-vacuum sources followed by a passive interferometer.

    Every mode carries at most one source.

    Args:
        m: Number of modes.
        squeezers: (mode, r) single-mode squeezers.
        pairs: (i, j, r) two-mode squeezers.
        unitary: m x m interferometer applied after the sources. Identity if omitted.
    """
    def __init__(
        self,
        m: int,
        squeezers: Sequence[tuple[int, float]] = (),
        pairs: Sequence[tuple[int, int, float]] = (),
        unitary: Optional[np.ndarray] = None
    ) -> None:
        if m < 1:
            raise ValueError(f"number of modes must be at least 1, got {m}")
        self.m = m
        self.squeezers = tuple((int(mode), float(r)) for mode, r in squeezers)
        self.pairs = tuple((int(i), int(j), float(r)) for i, j, r in pairs)
        used = [mode for mode, _ in self.squeezers] + [mode for i, j, _ in self.pairs for mode in (i, j)]
        if any(not 0 <= mode < m for mode in used):
            raise ValueError(f"source modes {used} out of range for {m} modes")
        if len(set(used)) != len(used):
            raise ValueError(f"every mode can carry at most one source, got source modes {used}")
        if unitary is None:
            unitary = np.eye(m)
        unitary = np.asarray(unitary, dtype=np.complex128)
        if unitary.shape != (m, m):
            raise ValueError(f"unitary of shape {unitary.shape} does not match {m} modes")
        residual = unitarity_residual(unitary)
        if residual > UNITARITY_TOLERANCE:
            raise ValueError(f"matrix is not unitary (max |U^dagger U - I| = {residual:.3e})")
        self.unitary = unitary

    def to_gaussian(self) -> GaussianState:
        """Covariance-matrix description of the same circuit."""
        state = vacuum_state(self.m)
        for mode, r in self.squeezers:
            state = squeeze_single(state, mode, r)
        for i, j, r in self.pairs:
            state = two_mode_squeeze(state, i, j, r)
        return apply_passive(state, self.unitary)

    def __repr__(self) -> str:
        return f"FockCircuit(m={self.m}, squeezers={self.squeezers}, pairs={self.pairs})"


def annihilation(levels: int) -> sp.csr_matrix:
    """Truncated annihilation operator on ``levels`` Fock levels."""
    return sp.diags(np.sqrt(np.arange(1, levels, dtype=np.float64)), offsets=1, format='csr')


def mode_operator(single: sp.spmatrix, mode: int, m: int, levels: int) -> sp.csr_matrix:
    """Embeds a single-mode operator into the m-mode tensor product space."""
    operator = sp.identity(1, format='csr')
    for k in range(m):
        operator = sp.kron(operator, single if k == mode else sp.identity(levels, format='csr'), format='csr')
    return operator


def padded_source(generator: sp.spmatrix, shape: tuple[int, ...], levels: int) -> tuple[np.ndarray, float]:
    """Applies exp(generator) to the vacuum of a padded space and cuts the result to ``levels`` per mode.

    Returns:
        amplitudes: Source amplitudes with ``levels`` levels per mode.
        edge_mass: Probability in the upper half of the padding, where truncation distorts the evolution.
    """
    vacuum = np.zeros(generator.shape[0], dtype=np.complex128)
    vacuum[0] = 1
    psi = expm_multiply(generator.astype(np.complex128), vacuum).reshape(shape)
    edge = levels + (shape[0] - levels) // 2
    occupation = np.indices(shape).max(axis=0)
    edge_mass = float(np.sum(np.abs(psi[occupation >= edge]) ** 2))
    return psi[tuple(slice(0, levels) for _ in shape)], edge_mass


def single_mode_source(r: float, levels: int, padding: int) -> tuple[np.ndarray, float]:
    """Squeezed vacuum :math:`\\exp(\\frac{r}{2}(a^2 - a^{\\dagger 2}))|0\\rangle`."""
    size = levels + padding
    a = annihilation(size)
    generator = r / 2 * (a @ a - a.T @ a.T)
    return padded_source(generator, (size, ), levels)


def two_mode_source(r: float, levels: int, padding: int) -> tuple[np.ndarray, float]:
    """Two-mode squeezed vacuum :math:`\\exp(r(a_1^\\dagger a_2^\\dagger - a_1 a_2))|0, 0\\rangle`."""
    size = levels + padding
    a = annihilation(size)
    a1 = mode_operator(a, 0, 2, size)
    a2 = mode_operator(a, 1, 2, size)
    generator = r * (a1.T @ a2.T - a1 @ a2)
    return padded_source(generator, (size, size), levels)


class OracleState:
    """Truncated state vector of a :class:`FockCircuit`.

    Args:
        psi: Amplitude tensor with ``cutoff + 1`` levels per mode; entries with more than ``cutoff`` photons in total are zero.
        cutoff: Maximum total photon number.
        edge_mass: Largest edge mass of the padded source states.
    """
    def __init__(self, psi: np.ndarray, cutoff: int, edge_mass: float) -> None:
        self.psi = psi
        self.cutoff = cutoff
        self.edge_mass = edge_mass

    @property
    def m(self) -> int:
        return self.psi.ndim

    @property
    def captured_mass(self) -> float:
        """Probability of detecting at most ``cutoff`` photons."""
        return float(np.sum(np.abs(self.psi) ** 2))

    def probability(self, outcome: Sequence[int]) -> float:
        outcome = tuple(int(n) for n in outcome)
        if len(outcome) != self.m or any(n < 0 for n in outcome):
            raise ValueError(f"invalid outcome {outcome} for {self.m} modes")
        if sum(outcome) > self.cutoff:
            raise ValueError(f"outcome {outcome} exceeds the oracle cutoff {self.cutoff}")
        return float(abs(self.psi[outcome]) ** 2)


def check_scale(m: int, cutoff: int) -> None:
    if m > MAX_MODES:
        raise NumericGuardError(f"the Fock oracle is limited to {MAX_MODES} modes, got {m}")
    if cutoff < 0:
        raise ValueError(f"cutoff must be non-negative, got {cutoff}")
    if (cutoff + 1) ** m > MAX_DIMENSION:
        raise NumericGuardError(f"Fock space of {m} modes with cutoff {cutoff} exceeds the oracle limit of {MAX_DIMENSION} states")


def passive_generator(U: np.ndarray, levels: int) -> sp.csr_matrix:
    """:math:`\\sum_{ij} (\\log U)_{ij} a_i^\\dagger a_j` on the truncated m-mode space."""
    m = U.shape[0]
    L = logm(U)
    a = annihilation(levels)
    modes = [mode_operator(a, k, m, levels) for k in range(m)]
    generator = sp.csr_matrix((levels ** m, levels ** m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            if L[i, j] != 0:
                generator = generator + L[i, j] * (modes[i].T @ modes[j])
    return generator


def oracle_state(circuit: FockCircuit, cutoff: int, padding: int = DEFAULT_PADDING) -> OracleState:
    """Builds the truncated state vector of a circuit.

    Args:
        circuit: Sources and interferometer.
        cutoff: Maximum total photon number kept.
        padding: Extra Fock levels per mode used while preparing the sources.

    Returns:
        state: Truncated state with its captured mass and source edge mass.
    """
    m = circuit.m
    check_scale(m, cutoff)
    levels = cutoff + 1
    factors, axes, edge_masses = [], [], [0.]
    for mode, r in circuit.squeezers:
        amplitudes, edge_mass = single_mode_source(r, levels, padding)
        factors.append(amplitudes)
        axes.append(mode)
        edge_masses.append(edge_mass)
    for i, j, r in circuit.pairs:
        amplitudes, edge_mass = two_mode_source(r, levels, padding)
        factors.append(amplitudes)
        axes.extend((i, j))
        edge_masses.append(edge_mass)
    vacuum = np.zeros(levels, dtype=np.complex128)
    vacuum[0] = 1
    for mode in range(m):
        if mode not in axes:
            factors.append(vacuum)
            axes.append(mode)
    edge_mass = max(edge_masses)
    if edge_mass > EDGE_MASS_TOLERANCE:
        raise NumericGuardError(f"source states reach the truncation edge (edge mass {edge_mass:.3e}); raise the padding above {padding}")

    psi = np.ones((), dtype=np.complex128)
    for factor in factors:
        psi = np.multiply.outer(psi, factor)
    psi = np.transpose(psi, np.argsort(axes))
    totals = np.indices(psi.shape).sum(axis=0)
    psi = np.where(totals <= cutoff, psi, 0)

    if not np.allclose(circuit.unitary, np.eye(m), rtol=0, atol=1e-15):
        generator = passive_generator(circuit.unitary, levels)
        psi = expm_multiply(generator, psi.reshape(-1)).reshape(psi.shape)
    state = OracleState(psi, cutoff, edge_mass)
    logger.debug(f"Oracle state of {m} modes, cutoff {cutoff}: captured mass {state.captured_mass:.8f}, edge mass {edge_mass:.3e}")
    return state


def oracle_probability(circuit: FockCircuit, outcome: Sequence[int], cutoff: int, padding: int = DEFAULT_PADDING) -> float:
    """Probability of a photon-counting outcome computed in the truncated Fock space.

    Args:
        circuit: Sources and interferometer.
        outcome: Photon number per mode, at most ``cutoff`` in total.
        cutoff: Maximum total photon number kept.
        padding: Extra Fock levels per mode used while preparing the sources.

    Returns:
        probability: Squared amplitude of the outcome.
    """
    return oracle_state(circuit, cutoff, padding).probability(outcome)


def oracle_overlap(first: FockCircuit, second: FockCircuit, cutoff: int, padding: int = DEFAULT_PADDING) -> float:
    """Fidelity :math:`|\\langle\\psi_1|\\psi_2\\rangle|^2` of two circuits, restricted to at most ``cutoff`` photons."""
    if first.m != second.m:
        raise ValueError(f"circuits have {first.m} and {second.m} modes")
    psi_1 = oracle_state(first, cutoff, padding).psi
    psi_2 = oracle_state(second, cutoff, padding).psi
    return float(abs(np.vdot(psi_1, psi_2)) ** 2)
