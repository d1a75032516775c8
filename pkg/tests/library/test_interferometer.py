# -*- coding: utf-8 -*-
import math
import os
import numpy as np
import pytest

from cvsampling.library.gaussian import (
    apply_passive,
    phase_shift,
    squeeze_single,
    two_mode_squeeze,
    unitarity_residual,
    vacuum_state,
)
from cvsampling.library.interferometer import (
    CompiledInterferometer,
    Gate,
    LoopProgram,
    build_loop_state,
    build_scattershot_state,
    compile_loop_program,
    gate_unitary,
    haar_random_unitary,
)


def test_compile_single_beamsplitter():
    program = LoopProgram(2, [Gate.bs(0, 1, math.pi / 4, 0.)])
    U = compile_loop_program(program).U
    np.testing.assert_allclose(U, np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-15)


def test_compile_empty_program():
    np.testing.assert_array_equal(compile_loop_program(LoopProgram(3)).U, np.eye(3))


def test_compile_order():
    gates = [Gate.phase(0, 0.4), Gate.bs(0, 1, 0.3, 0.1), Gate.bs(1, 2, 1.1, -0.5), Gate.phase(2, 2.)]
    program = LoopProgram(3, gates)
    expected = np.eye(3)
    for gate in gates:
        expected = gate_unitary(gate, 3) @ expected
    U = compile_loop_program(program).U
    np.testing.assert_allclose(U, expected, atol=1e-15)
    assert unitarity_residual(U) < 1e-12


def test_compiled_program_matches_gate_sequence_on_states():
    gates = [Gate.bs(0, 1, 0.7, 0.2), Gate.phase(1, 1.3), Gate.bs(1, 2, 0.4, 0.)]
    state = squeeze_single(squeeze_single(vacuum_state(3), 0, 0.5), 2, -0.3)
    sequential = state
    for gate in gates:
        sequential = apply_passive(sequential, gate_unitary(gate, 3))
    compiled = apply_passive(state, compile_loop_program(LoopProgram(3, gates)).U)
    np.testing.assert_allclose(compiled.cov, sequential.cov, atol=1e-12)


def test_phase_gate_matches_phase_shift():
    state = squeeze_single(vacuum_state(2), 1, 0.5)
    U = compile_loop_program(LoopProgram(2, [Gate.phase(1, 0.9)])).U
    np.testing.assert_allclose(apply_passive(state, U).cov, phase_shift(state, 1, 0.9).cov, atol=1e-12)


def test_program_validation():
    with pytest.raises(ValueError, match='adjacent'):
        LoopProgram(3, [Gate.bs(0, 2, 0.1, 0.)])
    with pytest.raises(ValueError):
        LoopProgram(2, [Gate.phase(2, 0.1)])
    with pytest.raises(ValueError):
        LoopProgram(2, [Gate('MIRROR', 0)])
    with pytest.raises(ValueError):
        LoopProgram(0)
    program = LoopProgram(3).append(Gate.bs(1, 2, 0.2))
    assert len(program) == 1


def test_program_depth():
    assert LoopProgram(4).depth == 0
    program = LoopProgram(4, [Gate.bs(0, 1, 0.1), Gate.bs(2, 3, 0.1), Gate.bs(1, 2, 0.1), Gate.phase(0, 0.5)])
    assert program.depth == 2
    assert LoopProgram(3, [Gate.bs(0, 1, 0.1), Gate.bs(1, 2, 0.1), Gate.bs(0, 1, 0.1)]).depth == 3


def test_program_file(tmp_path):
    program = LoopProgram(3, [Gate.bs(0, 1, math.pi / 4, 0.), Gate.phase(2, 1 / 3), Gate.bs(2, 1, 0.1234567890123, -2.5)])
    path = os.path.join(tmp_path, 'program.txt')
    program.to_file(path)
    read = LoopProgram.from_file(path)
    assert read.m == 3
    assert read.gates == program.gates


def test_program_file_comments(tmp_path):
    path = os.path.join(tmp_path, 'program.txt')
    with open(path, 'w') as f:
        f.write("# two time bins\n\nBS 0 1 0.7853981633974483 0  # balanced\nPHASE 1 3.141592653589793\n")
    program = LoopProgram.from_file(path)
    assert program.m == 2
    assert program.gates == (Gate.bs(0, 1, math.pi / 4, 0.), Gate.phase(1, math.pi))

    with open(path, 'w') as f:
        f.write("BS 0 1 0.5\n")
    with pytest.raises(ValueError, match=':1:'):
        LoopProgram.from_file(path)


def test_haar_random_unitary():
    U = haar_random_unitary(5, seed=42).U
    assert unitarity_residual(U) < 1e-12
    np.testing.assert_array_equal(U, haar_random_unitary(5, seed=42).U)
    assert not np.allclose(U, haar_random_unitary(5, seed=43).U)
    with pytest.raises(ValueError):
        haar_random_unitary(0)


def test_haar_moments(plt, pytestconfig):
    # |U_ij|^2 of a Haar unitary follows Beta(1, m - 1): mean 1/m, variance (m - 1)/(m^2 (m + 1))
    m = 4
    n = 20_000 if pytestconfig.getoption('extended') else 2_000
    entries = np.array([np.abs(haar_random_unitary(m, seed=seed).U[0, 1]) ** 2 for seed in range(n)])
    assert entries.mean() == pytest.approx(1 / m, abs=5 * math.sqrt((m - 1) / (m ** 2 * (m + 1)) / n))
    assert entries.var() == pytest.approx((m - 1) / (m ** 2 * (m + 1)), rel=0.15)

    phases = np.array([np.angle(haar_random_unitary(m, seed=seed).U[2, 3]) for seed in range(n)])
    hist, _ = np.histogram(phases, bins=8, range=(-math.pi, math.pi))
    assert hist.min() > 0.75 * n / 8

    plt.hist(entries, bins=50, density=True, label='|U_01|^2')
    x = np.linspace(0, 1, 100)
    plt.plot(x, (m - 1) * (1 - x) ** (m - 2), label='Beta(1, m-1)')
    plt.legend()


def test_compiled_interferometer_rejects_non_unitary():
    with pytest.raises(ValueError, match='not unitary'):
        CompiledInterferometer(np.ones((2, 2)))
    with pytest.raises(ValueError):
        CompiledInterferometer(np.ones((2, 3)))


def test_scattershot_state():
    m, chi = 3, 0.4
    U = haar_random_unitary(m, seed=1)
    arrangement = build_scattershot_state(m, chi, U)
    assert arrangement.state.m == 2 * m
    assert arrangement.state.n_entries == 16 * m ** 2
    assert arrangement.heralds == [0, 1, 2]
    assert arrangement.signals == [3, 4, 5]
    assert arrangement.state.is_pure()
    # heralds are untouched by the interferometer
    r = math.atanh(chi)
    np.testing.assert_allclose(arrangement.state.reduced([0]).cov, math.cosh(2 * r) * np.eye(2), atol=1e-12)
    for chi in (0., 1.):
        with pytest.raises(ValueError):
            build_scattershot_state(m, chi, np.eye(m))
    with pytest.raises(ValueError):
        build_scattershot_state(2, 0.5, np.eye(3))


@pytest.mark.parametrize('builder', ['scattershot', 'loop'])
def test_heralds_do_not_depend_on_the_interferometer(builder):
    m, r = 3, 0.6
    if builder == 'scattershot':
        first = build_scattershot_state(m, math.tanh(r), haar_random_unitary(m, seed=1))
        second = build_scattershot_state(m, math.tanh(r), haar_random_unitary(m, seed=2))
    else:
        first = build_loop_state(LoopProgram(m, [Gate.bs(0, 1, 0.4, 0.2), Gate.phase(2, 1.3)]), r)
        second = build_loop_state(LoopProgram(m, [Gate.bs(1, 2, 1.1, -0.7), Gate.bs(0, 1, 0.9, 0.)]), r)
    assert not np.allclose(first.U, second.U)
    np.testing.assert_allclose(first.state.reduced(first.heralds).cov, second.state.reduced(second.heralds).cov, rtol=0, atol=1e-12)
    assert not np.allclose(first.state.cov, second.state.cov)


def test_loop_state_is_two_mode_squeezed():
    r = 0.5
    arrangement = build_loop_state(LoopProgram(1), r)
    expected = two_mode_squeeze(vacuum_state(2), 0, 1, -r)
    np.testing.assert_allclose(arrangement.state.cov, expected.cov, atol=1e-12)
    assert arrangement.chi == pytest.approx(math.tanh(r))


def test_loop_state_applies_program_to_signals():
    r = 0.3
    program = LoopProgram(2, [Gate.bs(0, 1, 0.6, 0.3), Gate.phase(1, 0.5)])
    arrangement = build_loop_state(program, r)
    state = vacuum_state(4)
    for k in range(2):
        state = two_mode_squeeze(state, k, 2 + k, -r)
    expected = apply_passive(state, compile_loop_program(program).U, [2, 3])
    np.testing.assert_allclose(arrangement.state.cov, expected.cov, atol=1e-12)
    with pytest.raises(ValueError):
        build_loop_state(program, 0.)
