# -*- coding: utf-8 -*-
"""Interferometers for temporally encoded modes.

Time bins spaced by τ are coupled through a single delay loop and a programmable modulator. A :class:`LoopProgram` is an ordered list of gates on adjacent bins which :func:`compile_loop_program` turns into an m x m unitary. Arbitrary unitaries enter through :func:`haar_random_unitary` instead of a mesh decomposition.
"""
import logging
import math
import numpy as np
from scipy.linalg import qr
from typing import NamedTuple, Optional, Sequence

from cvsampling.library.gaussian import (
    GaussianState,
    apply_passive,
    beamsplitter,
    beamsplitter_unitary,
    squeeze_single,
    two_mode_squeeze,
    unitarity_residual,
    vacuum_state,
    UNITARITY_TOLERANCE,
)

logger = logging.getLogger(__name__)


class Gate(NamedTuple):
    """A single modulator primitive.

    ``kind`` is ``'BS'`` (uses i, j, theta, phi) or ``'PHASE'`` (uses i, phi).
    """
    kind: str
    i: int
    j: Optional[int] = None
    theta: float = 0.
    phi: float = 0.

    @classmethod
    def bs(cls, i: int, j: int, theta: float, phi: float = 0.) -> 'Gate':
        return cls('BS', int(i), int(j), float(theta), float(phi))

    @classmethod
    def phase(cls, i: int, phi: float) -> 'Gate':
        return cls('PHASE', int(i), None, 0., float(phi))


class LoopProgram:
    """Time-bin gate sequence for the single-loop architecture. Gates are applied in list order.

    Args:
        m: Number of time bins.
        gates: Gates in application order.
    """
    def __init__(self, m: int, gates: Sequence[Gate] = ()) -> None:
        if m < 1:
            raise ValueError(f"number of time bins must be at least 1, got {m}")
        self.m = int(m)
        self.gates = tuple(gates)
        for gate in self.gates:
            self.check_gate(gate)

    def check_gate(self, gate: Gate) -> None:
        """Validates indices and the adjacent-bin constraint of a gate."""
        if gate.kind not in ('BS', 'PHASE'):
            raise ValueError(f"unknown gate kind {gate.kind}")
        if not 0 <= gate.i < self.m:
            raise ValueError(f"time bin {gate.i} out of range for {self.m} bins")
        if gate.kind == 'BS':
            if gate.j is None or not 0 <= gate.j < self.m:
                raise ValueError(f"time bin {gate.j} out of range for {self.m} bins")
            if abs(gate.i - gate.j) != 1:
                raise ValueError(f"beamsplitter between bins {gate.i} and {gate.j} is not between adjacent bins")

    def append(self, gate: Gate) -> 'LoopProgram':
        """Returns a new program with one more gate."""
        return LoopProgram(self.m, self.gates + (gate, ))

    @classmethod
    def from_file(cls, path: str, m: Optional[int] = None) -> 'LoopProgram':
        """Reads a program with one gate per line, ``BS i j theta phi`` or ``PHASE i phi``.

        Everything after ``#`` is a comment. A ``# modes=m`` comment sets the number of time bins, otherwise it is taken from ``m`` or from the largest index used.

        Args:
            path: Program file.
            m: Number of time bins.

        Returns:
            program: The loop program.
        """
        gates = []
        with open(path, 'r') as f:
            for lineno, line in enumerate(f, start=1):
                line, _, comment = line.partition('#')
                if m is None and comment.strip().startswith('modes='):
                    m = int(comment.strip().split()[0].split('=')[1])
                fields = line.split()
                if not fields:
                    continue
                try:
                    if fields[0] == 'BS' and len(fields) == 5:
                        gates.append(Gate.bs(int(fields[1]), int(fields[2]), float(fields[3]), float(fields[4])))
                    elif fields[0] == 'PHASE' and len(fields) == 3:
                        gates.append(Gate.phase(int(fields[1]), float(fields[2])))
                    else:
                        raise ValueError
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: cannot parse gate '{line.strip()}'")
        if m is None:
            m = max((max(gate.i, gate.j if gate.j is not None else 0) for gate in gates), default=0) + 1
        return cls(m, gates)

    def to_file(self, path: str) -> None:
        """Writes the program in the format read by :meth:`from_file`."""
        with open(path, 'w') as f:
            f.write(f"# modes={self.m}\n")
            for gate in self.gates:
                if gate.kind == 'BS':
                    f.write(f"BS {gate.i} {gate.j} {gate.theta:.17g} {gate.phi:.17g}\n")
                else:
                    f.write(f"PHASE {gate.i} {gate.phi:.17g}\n")

    @property
    def depth(self) -> int:
        """Number of loop passes when each pass can apply at most one gate per time bin."""
        last_pass = np.zeros(self.m, dtype=np.int64)
        for gate in self.gates:
            bins = [gate.i] if gate.kind == 'PHASE' else [gate.i, gate.j]
            current = last_pass[bins].max() + 1
            last_pass[bins] = current
        return int(last_pass.max())

    def __len__(self) -> int:
        return len(self.gates)

    def __repr__(self) -> str:
        return f"LoopProgram(m={self.m}, gates={len(self.gates)})"


class CompiledInterferometer:
    """m x m unitary of a compiled program or a sampled instance.

    Args:
        U: m x m complex unitary.
    """
    def __init__(self, U: np.ndarray) -> None:
        U = np.array(U, dtype=np.complex128)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError(f"unitary must be square, got shape {U.shape}")
        residual = unitarity_residual(U)
        if residual > UNITARITY_TOLERANCE:
            raise ValueError(f"matrix is not unitary (max |U^dagger U - I| = {residual:.3e})")
        U.setflags(write=False)
        self.U = U

    @property
    def m(self) -> int:
        return self.U.shape[0]


def gate_unitary(gate: Gate, m: int) -> np.ndarray:
    """The m x m unitary of a single gate."""
    T = np.eye(m, dtype=np.complex128)
    if gate.kind == 'BS':
        block = beamsplitter_unitary(gate.theta, gate.phi)
        T[np.ix_([gate.i, gate.j], [gate.i, gate.j])] = block
    else:
        T[gate.i, gate.i] = np.exp(1j * gate.phi)
    return T


def compile_loop_program(program: LoopProgram) -> CompiledInterferometer:
    """Compiles a loop program into its unitary. The first gate is applied first, so U = G_k ... G_2 G_1.

    Args:
        program: The loop program.

    Returns:
        interferometer: Compiled unitary.
    """
    U = np.eye(program.m, dtype=np.complex128)
    for gate in program.gates:
        program.check_gate(gate)
        U = gate_unitary(gate, program.m) @ U
    return CompiledInterferometer(U)


def haar_random_unitary(m: int, seed: Optional[int] = None) -> CompiledInterferometer:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix.

    The phases of the diagonal of R are moved into Q so the distribution is exactly Haar.

    Args:
        m: Dimension, at least 1.
        seed: Seed for numpy's default generator.

    Returns:
        interferometer: The sampled unitary.
    """
    if m < 1:
        raise ValueError(f"dimension must be at least 1, got {m}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    logger.debug(f"Generated Haar-random unitary of size {m} (seed {seed})")
    return CompiledInterferometer(q)


class ScattershotArrangement:
    """Two groups of m modes: heralds are modes 0..m-1 and signals are modes m..2m-1, pair k couples herald k with signal m+k.

    Args:
        m: Number of sources.
        chi: Two-mode squeezing strength, :math:`\\chi = \\tanh r`.
        U: m x m unitary acting on the signal group.
        state: The 2m-mode Gaussian state.
    """
    def __init__(self, m: int, chi: float, U: np.ndarray, state: GaussianState) -> None:
        self.m = m
        self.chi = chi
        self.U = U
        self.state = state
        assert state.n_entries == 16 * m ** 2

    @property
    def heralds(self) -> list[int]:
        return list(range(self.m))

    @property
    def signals(self) -> list[int]:
        return list(range(self.m, 2 * self.m))


def build_scattershot_state(m: int, chi: float, U: np.ndarray) -> ScattershotArrangement:
    """m two-mode squeezed pairs with :math:`r = \\mathrm{artanh}\\,\\chi`, followed by U on the signal halves.

    Args:
        m: Number of sources.
        chi: Squeezing strength in (0, 1).
        U: m x m unitary (array or :class:`CompiledInterferometer`).

    Returns:
        arrangement: The scattershot arrangement and its 2m-mode state.
    """
    if not 0 < chi < 1:
        raise ValueError(f"chi must be in (0, 1), got {chi}")
    if isinstance(U, CompiledInterferometer):
        U = U.U
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (m, m):
        raise ValueError(f"unitary of shape {U.shape} does not match {m} sources")
    r = math.atanh(chi)
    state = vacuum_state(2 * m)
    for k in range(m):
        state = two_mode_squeeze(state, k, m + k, r)
    state = apply_passive(state, U, range(m, 2 * m))
    return ScattershotArrangement(m, chi, U, state)


def build_loop_state(program: LoopProgram, r: float) -> ScattershotArrangement:
    """State produced by the loop architecture with two pulsed squeezed sources.

    Source one emits x-squeezed pulses and source two p-squeezed pulses, one per time bin. Each pair of pulses interferes on a 50:50 beamsplitter, after which the upper arm passes the modulator (the compiled program) while the lower arm propagates freely. Each time bin then carries a two-mode squeezed pair, so the result has the scattershot layout with the free arm as heralds and the modulated arm as signals.

    Args:
        program: Modulator program on the m time bins of the upper arm.
        r: Squeezing parameter of both sources, r > 0.

    Returns:
        arrangement: The resulting 2m-mode arrangement.
    """
    if r <= 0:
        raise ValueError(f"squeezing parameter must be positive, got {r}")
    m = program.m
    U = compile_loop_program(program).U
    state = vacuum_state(2 * m)
    for k in range(m):
        state = squeeze_single(state, m + k, r)
        state = squeeze_single(state, k, -r)
        state = beamsplitter(state, m + k, k, math.pi / 4, 0.)
    state = apply_passive(state, U, range(m, 2 * m))
    return ScattershotArrangement(m, math.tanh(r), U, state)
