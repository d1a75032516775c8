# -*- coding: utf-8 -*-
"""This module writes the artifacts of an :class:`~cvsampling.model.Experiment` to its output folder and reads them back for later stages. All data is saved to the `out_dir` folder from the configuration file:

 - **homodyne_samples.csv**: dual-homodyne samples, header `x1,p1,...,xm,pm`.
 - **sigma_hat.txt**: reconstructed covariance matrix.
 - **sigma_target.txt**: covariance matrix of the pure target state.
 - **unitary.csv**: interferometer of the instance as complex CSV.
 - **chernoff.json**: multiplicative band check and Chernoff failure bound.
 - **verification.json**: fidelity, trace-distance bounds and verdict.
 - **distribution.csv**: enumerated photon-counting distribution, rows `n1,...,nm,probability`.
 - **fock_samples.csv**: photon-counting samples, rows `n1,...,nm`.
 - **tvd.json**: total variation distance between the samples and the enumeration.
 - **oracle_check.json**: largest deviation between the hafnian probabilities and the truncated-Fock oracle.

Every artifact carries the configuration hash of the run that wrote it. The characterization artifacts hash only the seed, instance and characterization settings. Artifacts written under a different configuration are refused.
"""
import math
import os
import numpy as np
from typing import Any

from cvsampling.errors import ArtifactMismatchError, MissingArtifactError
from cvsampling.library.fileIO import (
    read_covariance,
    read_json,
    write_covariance,
    write_distribution,
    write_fock_samples,
    write_homodyne_samples,
    write_json,
    write_unitary,
)
from cvsampling.library.fock import OutcomeDistribution
from cvsampling.library.gaussian import GaussianState


class Reporter:
    """Writes and reads the artifacts of an experiment.

    Args:
        experiment: The experiment; provides ``out_dir``, ``config_hash`` and ``characterization_hash``.
    """
    HOMODYNE_SAMPLES_FILE = 'homodyne_samples.csv'
    SIGMA_HAT_FILE = 'sigma_hat.txt'
    TARGET_FILE = 'sigma_target.txt'
    UNITARY_FILE = 'unitary.csv'
    CHERNOFF_FILE = 'chernoff.json'
    VERIFICATION_FILE = 'verification.json'
    DISTRIBUTION_FILE = 'distribution.csv'
    FOCK_SAMPLES_FILE = 'fock_samples.csv'
    TVD_FILE = 'tvd.json'
    ORACLE_FILE = 'oracle_check.json'
    CHARACTERIZATION_FILES = (HOMODYNE_SAMPLES_FILE, SIGMA_HAT_FILE, TARGET_FILE, UNITARY_FILE, CHERNOFF_FILE)

    def __init__(self, experiment) -> None:
        self.experiment = experiment
        self.export_folder = experiment.out_dir
        self.config_hash = experiment.config_hash
        self.characterization_hash = experiment.characterization_hash
        self.maybe_create_export_folder()

    def maybe_create_export_folder(self) -> None:
        """If required, create the export folder"""
        os.makedirs(self.export_folder, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.export_folder, name)

    def check_value(self, key: str, value: Any) -> None:
        """Check whether the value can be written to JSON: a Python bool, int, float or str, and not infinite or NaN.

        Args:
            key: Name of the value.
            value: The value to be checked.
        """
        if not (isinstance(value, (bool, int, float, str)) or value is None):
            raise ValueError(f"value {value} of {key} has type {type(value)}, not a Python bool, int, float or str")
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"value of {key} is not finite: {value}")

    def hash_for(self, name: str) -> str:
        """Hash stamped on an artifact. Characterization artifacts hash the seed, instance and characterization settings only."""
        return self.characterization_hash if name in self.CHARACTERIZATION_FILES else self.config_hash

    def check_hash(self, name: str, config_hash: Any) -> None:
        expected = self.hash_for(name)
        if config_hash != expected:
            raise ArtifactMismatchError(f"{name} was written with config hash {config_hash}, expected {expected}")

    def require(self, name: str, missing: str) -> str:
        path = self.path(name)
        if not os.path.exists(path):
            raise MissingArtifactError(f"{missing}: {path} not found")
        return path

    def export_json(self, name: str, data: dict) -> None:
        """Writes a flat JSON report, stamped with the config hash."""
        data = dict(data)
        for key, value in data.items():
            if isinstance(value, np.generic):
                value = data[key] = value.item()
            self.check_value(key, value)
        data['config_hash'] = self.hash_for(name)
        write_json(self.path(name), data)

    def load_json(self, name: str, missing: str) -> dict:
        data = read_json(self.require(name, missing))
        self.check_hash(name, data.get('config_hash'))
        return data

    def export_covariance(self, name: str, state: GaussianState) -> None:
        write_covariance(self.path(name), state, self.hash_for(name))

    def load_covariance(self, name: str, missing: str) -> GaussianState:
        state, metadata = read_covariance(self.require(name, missing))
        self.check_hash(name, metadata.get('config_hash'))
        return state

    def export_unitary(self, U: np.ndarray) -> None:
        write_unitary(self.path(self.UNITARY_FILE), U, self.hash_for(self.UNITARY_FILE))

    def export_homodyne_samples(self, samples: np.ndarray) -> None:
        write_homodyne_samples(self.path(self.HOMODYNE_SAMPLES_FILE), samples, self.hash_for(self.HOMODYNE_SAMPLES_FILE))

    def export_distribution(self, distribution: OutcomeDistribution, seed: int) -> None:
        write_distribution(self.path(self.DISTRIBUTION_FILE), distribution, seed, self.config_hash)

    def export_fock_samples(self, samples: np.ndarray, cutoff: int, mass: float, seed: int) -> None:
        write_fock_samples(self.path(self.FOCK_SAMPLES_FILE), samples, cutoff, mass, seed, self.config_hash)
