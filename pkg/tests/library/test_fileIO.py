# -*- coding: utf-8 -*-
import os
import numpy as np
import pytest

from cvsampling.library.fileIO import (
    read_covariance,
    read_distribution,
    read_fock_samples,
    read_header,
    read_homodyne_samples,
    read_json,
    read_unitary,
    write_covariance,
    write_distribution,
    write_fock_samples,
    write_homodyne_samples,
    write_json,
    write_unitary,
)
from cvsampling.library.fock import OutcomeDistribution, enumerate_distribution
from cvsampling.library.gaussian import apply_passive, apply_uniform_loss, squeeze_single, vacuum_state
from cvsampling.library.homodyne import draw_dual_homodyne_samples
from cvsampling.library.interferometer import haar_random_unitary


@pytest.fixture
def state():
    state = squeeze_single(squeeze_single(vacuum_state(3), 0, 0.7), 1, -0.2)
    return apply_uniform_loss(apply_passive(state, haar_random_unitary(3, seed=1).U), 0.9)


def test_covariance_is_reproduced_exactly(tmp_path, state):
    path = os.path.join(tmp_path, 'sigma.txt')
    write_covariance(path, state, config_hash='0123456789abcdef')
    read, metadata = read_covariance(path)
    np.testing.assert_array_equal(read.cov, state.cov)
    assert metadata == {'modes': '3', 'ordering': 'xpxp', 'vacuum': '1', 'config_hash': '0123456789abcdef'}

    with open(path, 'r') as f:
        lines = f.read().splitlines()
    assert lines[0] == '# modes=3 ordering=xpxp vacuum=1'
    assert len(lines) == 2 + 6
    assert all(len(line.split(',')) == 6 for line in lines[2:])


def test_covariance_without_hash(tmp_path):
    path = os.path.join(tmp_path, 'sigma.txt')
    write_covariance(path, vacuum_state(1))
    read, metadata = read_covariance(path)
    np.testing.assert_array_equal(read.cov, np.eye(2))
    assert 'config_hash' not in metadata


def test_covariance_header_is_checked(tmp_path):
    path = os.path.join(tmp_path, 'sigma.txt')
    with open(path, 'w') as f:
        f.write("# modes=2 ordering=xpxp vacuum=1\n1,0\n0,1\n")
    with pytest.raises(ValueError, match='modes=2'):
        read_covariance(path)
    with open(path, 'w') as f:
        f.write("# modes=1 ordering=xxpp vacuum=1\n1,0\n0,1\n")
    with pytest.raises(ValueError, match='ordering'):
        read_covariance(path)


def test_unitary(tmp_path):
    path = os.path.join(tmp_path, 'unitary.csv')
    U = haar_random_unitary(4, seed=2).U
    write_unitary(path, U, config_hash='abc')
    np.testing.assert_array_equal(read_unitary(path), U)
    assert read_header(path) == {'modes': '4', 'config_hash': 'abc'}


def test_homodyne_samples(tmp_path, state):
    path = os.path.join(tmp_path, 'samples.csv')
    samples = draw_dual_homodyne_samples(state, 25, seed=3)
    write_homodyne_samples(path, samples, config_hash='abc')
    np.testing.assert_array_equal(read_homodyne_samples(path), samples)
    with open(path, 'r') as f:
        assert f.read().splitlines()[1] == 'x1,p1,x2,p2,x3,p3'


def test_distribution(tmp_path):
    path = os.path.join(tmp_path, 'distribution.csv')
    distribution = enumerate_distribution(squeeze_single(vacuum_state(2), 1, 0.5), 4)
    write_distribution(path, distribution, seed=7, config_hash='abc')
    read, metadata = read_distribution(path)
    np.testing.assert_array_equal(read.outcomes, distribution.outcomes)
    np.testing.assert_array_equal(read.probabilities, distribution.probabilities)
    assert read.cutoff == 4
    assert metadata['seed'] == '7'
    assert float(metadata['mass']) == distribution.mass
    with open(path, 'r') as f:
        assert f.read().splitlines()[2] == 'n1,n2,probability'


def test_distribution_without_metadata(tmp_path):
    path = os.path.join(tmp_path, 'distribution.csv')
    write_distribution(path, OutcomeDistribution(np.array([[0], [2]]), np.array([0.75, 0.25]), 3))
    read, metadata = read_distribution(path)
    assert read.cutoff == 3
    assert 'seed' not in metadata
    assert read.probability((2, )) == 0.25


def test_fock_samples(tmp_path):
    path = os.path.join(tmp_path, 'samples.csv')
    samples = np.array([[0, 0, 1], [2, 0, 0], [1, 1, 0]])
    write_fock_samples(path, samples, cutoff=4, mass=0.9995, seed=11)
    np.testing.assert_array_equal(read_fock_samples(path), samples)
    metadata = read_header(path)
    assert metadata['cutoff'] == '4'
    assert metadata['seed'] == '11'
    assert float(metadata['mass']) == 0.9995


def test_json(tmp_path):
    path = os.path.join(tmp_path, 'report.json')
    data = {'fidelity': 0.1 + 0.2, 'pass': True, 'K': 11368, 'name': None}
    write_json(path, data)
    assert read_json(path) == data
