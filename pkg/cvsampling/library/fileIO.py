# -*- coding: utf-8 -*-
"""Reading and writing of covariance matrices, unitaries, homodyne samples, photon-counting distributions and reports.

Text formats carry their metadata in leading ``#`` comment lines of ``key=value`` pairs. Floating point values are written with 17 significant digits so that a write followed by a read reproduces every value exactly.
"""
import json
import numpy as np
import pandas as pd
from typing import Optional, Union

from cvsampling.library.fock import OutcomeDistribution
from cvsampling.library.gaussian import GaussianState

FLOAT_FORMAT = '%.17g'


def read_header(path: str) -> dict[str, str]:
    """Collects the ``key=value`` pairs of the leading comment lines of a text file.

    Args:
        path: File path.

    Returns:
        metadata: Header values as strings.
    """
    metadata = {}
    with open(path, 'r') as f:
        for line in f:
            if not line.startswith('#'):
                break
            for token in line[1:].split():
                if '=' in token:
                    key, value = token.split('=', 1)
                    metadata[key] = value
    return metadata


def header_lines(**metadata) -> str:
    """Comment lines for the given metadata, skipping None values."""
    tokens = ' '.join(f"{key}={value}" for key, value in metadata.items() if value is not None)
    return f"# {tokens}\n" if tokens else ''


def write_covariance(path: str, state: Union[GaussianState, np.ndarray], config_hash: Optional[str] = None) -> None:
    """Writes a covariance matrix as 2m lines of 2m comma-separated values.

    Args:
        path: File path.
        state: Gaussian state or covariance matrix.
        config_hash: Hash of the configuration that produced the matrix.
    """
    cov = state.cov if isinstance(state, GaussianState) else np.asarray(state, dtype=np.float64)
    with open(path, 'w') as f:
        f.write(f"# modes={cov.shape[0] // 2} ordering=xpxp vacuum=1\n")
        f.write(header_lines(config_hash=config_hash))
        np.savetxt(f, cov, fmt=FLOAT_FORMAT, delimiter=',')


def read_covariance(path: str) -> tuple[GaussianState, dict[str, str]]:
    """Reads a covariance matrix written by :func:`write_covariance`.

    Args:
        path: File path.

    Returns:
        state: The Gaussian state.
        metadata: Header values.
    """
    metadata = read_header(path)
    if metadata.get('ordering', 'xpxp') != 'xpxp' or metadata.get('vacuum', '1') != '1':
        raise ValueError(f"{path}: only xpxp ordering with vacuum variance 1 is supported")
    cov = np.loadtxt(path, delimiter=',', comments='#', ndmin=2)
    if 'modes' in metadata and cov.shape != (2 * int(metadata['modes']), 2 * int(metadata['modes'])):
        raise ValueError(f"{path}: matrix of shape {cov.shape} does not match modes={metadata['modes']}")
    return GaussianState(cov), metadata


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def write_unitary(path: str, U: np.ndarray, config_hash: Optional[str] = None) -> None:
    """Writes a complex matrix as comma-separated ``re+imj`` entries."""
    U = np.asarray(U, dtype=np.complex128)
    with open(path, 'w') as f:
        f.write(header_lines(modes=U.shape[0], config_hash=config_hash))
        for row in U:
            f.write(','.join(format_complex(z) for z in row) + '\n')


def read_unitary(path: str) -> np.ndarray:
    """Reads a complex matrix written by :func:`write_unitary`."""
    rows = []
    with open(path, 'r') as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            rows.append([complex(token) for token in line.split(',')])
    return np.array(rows, dtype=np.complex128)


def write_frame(path: str, df: pd.DataFrame, header: str) -> None:
    with open(path, 'w', newline='') as f:
        f.write(header)
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def write_homodyne_samples(path: str, samples: np.ndarray, config_hash: Optional[str] = None) -> None:
    """Writes dual-homodyne samples, one per row, under the header ``x1,p1,...,xm,pm``."""
    samples = np.atleast_2d(samples)
    m = samples.shape[1] // 2
    columns = [f"{quadrature}{k + 1}" for k in range(m) for quadrature in ('x', 'p')]
    write_frame(path, pd.DataFrame(samples, columns=columns), header_lines(config_hash=config_hash))


def read_homodyne_samples(path: str) -> np.ndarray:
    return pd.read_csv(path, comment='#', float_precision='round_trip').to_numpy(dtype=np.float64)


def outcome_columns(m: int) -> list[str]:
    return [f"n{k + 1}" for k in range(m)]


def write_distribution(
    path: str,
    distribution: OutcomeDistribution,
    seed: Optional[int] = None,
    config_hash: Optional[str] = None
) -> None:
    """Writes an outcome distribution as rows ``n1,...,nm,probability``."""
    df = pd.DataFrame(distribution.outcomes, columns=outcome_columns(distribution.m))
    df['probability'] = distribution.probabilities
    header = header_lines(cutoff=distribution.cutoff, mass=FLOAT_FORMAT % distribution.mass, seed=seed) + header_lines(config_hash=config_hash)
    write_frame(path, df, header)


def read_distribution(path: str) -> tuple[OutcomeDistribution, dict[str, str]]:
    """Reads a distribution written by :func:`write_distribution`.

    Returns:
        distribution: The outcome distribution.
        metadata: Header values.
    """
    metadata = read_header(path)
    df = pd.read_csv(path, comment='#', float_precision='round_trip')
    outcomes = df.drop(columns='probability').to_numpy(dtype=np.int64)
    cutoff = int(metadata['cutoff']) if 'cutoff' in metadata else int(outcomes.sum(axis=1).max())
    return OutcomeDistribution(outcomes, df['probability'].to_numpy(dtype=np.float64), cutoff), metadata


def write_fock_samples(
    path: str,
    samples: np.ndarray,
    cutoff: int,
    mass: float,
    seed: Optional[int] = None,
    config_hash: Optional[str] = None
) -> None:
    """Writes photon-counting samples as rows ``n1,...,nm``."""
    samples = np.atleast_2d(samples)
    header = header_lines(cutoff=cutoff, mass=FLOAT_FORMAT % mass, seed=seed) + header_lines(config_hash=config_hash)
    write_frame(path, pd.DataFrame(samples, columns=outcome_columns(samples.shape[1])), header)


def read_fock_samples(path: str) -> np.ndarray:
    return pd.read_csv(path, comment='#').to_numpy(dtype=np.int64)


def write_json(path: str, data: dict) -> None:
    with open(path, 'w') as f:
        json.dump(data, f, indent=4)
        f.write('\n')


def read_json(path: str) -> dict:
    with open(path, 'r') as f:
        return json.load(f)
