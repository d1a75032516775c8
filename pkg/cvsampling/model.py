# -*- coding: utf-8 -*-
"""The :class:`Experiment` runs the characterize, verify, sample and oracle-check stages of a desk-scale boson sampling experiment from a YAML configuration file.

The configuration file is formatted as follows (every key is optional except the seed and output folder, which may also be passed on the command line):

 - **general**:
    - **seed**: master seed; every stage derives its own seed from it.
    - **out_dir**: folder that receives all artifacts.
 - **logging**:
    - **loglevel**: DEBUG, INFO, WARNING or ERROR.
    - **logfile**: path of the log file (default: `cvsampling.log` in the output folder).
 - **instance**:
    - **source**: `single` (single-mode squeezers), `two-mode` (scattershot pairs), `loop` (two squeezed pulse trains and a delay loop) or `vacuum`.
    - **modes**: number of sources m.
    - **r**: squeezing parameter; a list with one value per source is accepted for single-mode sources.
    - **chi**: two-mode squeezing strength, alternative to r for two-mode sources.
    - **unitary**: `identity`, `haar` or the path of a loop program file.
    - **loss**: uniform transmissivity applied to the prepared state.
 - **characterization**: **K** samples, Chernoff deviation **eta** and target failure probability **delta**.
 - **verification**: tolerance **epsilon** and **budget_constant** c of the :math:`c\\,m^4` sample budget.
 - **sampling**: total photon **cutoff** (chosen automatically when omitted) and number of samples **N**.
 - **oracle**: total photon **cutoff** and Fock **padding** of the truncated-Fock oracle.
"""
import copy
import hashlib
import json
import logging
import math
import os
import numpy as np
import yaml
from scipy.linalg import block_diag
from typing import Any, Optional, Sequence

from cvsampling.errors import ConfigError, NumericGuardError
from cvsampling.reporter import Reporter
from cvsampling.library.fock import (
    OutcomeDistribution,
    check_captured_mass,
    default_cutoff,
    enumerate_distribution,
    outcome_probability,
    outcomes_up_to,
    sample_from_distribution,
    SAMPLING_MASS,
)
from cvsampling.library.gaussian import (
    GaussianState,
    apply_passive,
    apply_uniform_loss,
    beamsplitter_unitary,
    min_quadrature_variance,
    squeeze_single,
    vacuum_state,
)
from cvsampling.library.homodyne import (
    ChernoffReport,
    SampleMatrixAccumulator,
    draw_dual_homodyne_samples,
    multiplicative_band_check,
    reconstruct_covariance,
    required_sample_count,
    sample_average,
)
from cvsampling.library.interferometer import (
    LoopProgram,
    build_loop_state,
    build_scattershot_state,
    compile_loop_program,
    haar_random_unitary,
)
from cvsampling.library.oracle import FockCircuit, oracle_state
from cvsampling.library.verification import VerificationReport, TotalVariation, certify, total_variation

SOURCES = ('single', 'two-mode', 'loop', 'vacuum')
STAGES = ('characterize', 'verify', 'sample', 'oracle-check')
# settings the characterization artifacts depend on, besides the seed
CHARACTERIZATION_SECTIONS = ('instance', 'characterization')
SEED_COUNTERS = {'haar': 0, 'characterize': 1, 'sample': 2}
ORACLE_TOLERANCE = 1e-8

DEFAULT_CONFIG = {
    'general': {'seed': None, 'out_dir': None},
    'logging': {'loglevel': 'INFO', 'logfile': None},
    'instance': {'source': 'two-mode', 'modes': 1, 'r': 0.5, 'chi': None, 'unitary': 'identity', 'loss': 1.},
    'characterization': {'K': 100_000, 'eta': 0.2, 'delta': 0.01},
    'verification': {'epsilon': 0.05, 'budget_constant': 1.},
    'sampling': {'cutoff': None, 'N': 100_000},
    'oracle': {'cutoff': 6, 'padding': 80},
}

# command-line destination -> (section, key)
OVERRIDES = {
    'seed': ('general', 'seed'),
    'out_dir': ('general', 'out_dir'),
    'loglevel': ('logging', 'loglevel'),
    'source': ('instance', 'source'),
    'modes': ('instance', 'modes'),
    'r': ('instance', 'r'),
    'chi': ('instance', 'chi'),
    'unitary': ('instance', 'unitary'),
    'loss': ('instance', 'loss'),
    'K': ('characterization', 'K'),
    'eta': ('characterization', 'eta'),
    'delta': ('characterization', 'delta'),
    'epsilon': ('verification', 'epsilon'),
    'budget_constant': ('verification', 'budget_constant'),
    'cutoff': ('sampling', 'cutoff'),
    'N': ('sampling', 'N'),
    'oracle_cutoff': ('oracle', 'cutoff'),
    'padding': ('oracle', 'padding'),
}


def as_int(field: str, value: Any, minimum: int) -> int:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{field}: expected an integer, got {value!r}")
    if not number.is_integer():
        raise ConfigError(f"{field}: expected an integer, got {value!r}")
    if number < minimum:
        name = field.split('.')[-1]
        raise ConfigError(f"{field}: {name} must be ≥ {minimum}, got {int(number)}")
    return int(number)


def as_float(field: str, value: Any, low: float, high: float, include_low: bool = True, include_high: bool = True) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{field}: expected a number, got {value!r}")
    above = number >= low if include_low else number > low
    below = number <= high if include_high else number < high
    if not (above and below and math.isfinite(number)):
        interval = f"{'[' if include_low else '('}{low}, {high}{']' if include_high else ')'}"
        raise ConfigError(f"{field}: must lie in {interval}, got {number}")
    return number


class Experiment:
    """Configured experiment with one method per stage.

    Args:
        config_path: YAML configuration file, or None to use the defaults.
        args: Parsed command-line arguments; values that are not None override the configuration file.
    """
    def __init__(self, config_path: Optional[str] = None, args: Optional[Any] = None) -> None:
        self.config = self.setup_config(config_path, args)
        self.out_dir = self.config['general']['out_dir']
        self.seed = self.config['general']['seed']
        self.config_hash = self.hash_config(self.config)
        self.characterization_hash = self.hash_config(self.config, CHARACTERIZATION_SECTIONS)
        self.reporter = Reporter(self)
        self.logger = self.create_logger()
        self.logger.info(f"Initializing experiment (config hash {self.config_hash})")
        self._unitary = None

    def setup_config(self, config_path: Optional[str], args: Optional[Any] = None) -> dict:
        config = copy.deepcopy(DEFAULT_CONFIG)
        if config_path is not None:
            with open(config_path, 'r') as f:
                loaded = yaml.load(f, Loader=yaml.FullLoader) or {}
            if not isinstance(loaded, dict):
                raise ConfigError(f"{config_path}: configuration must be a mapping of sections")
            for section, values in loaded.items():
                if section not in config:
                    raise ConfigError(f"{section}: unknown configuration section")
                if not isinstance(values, dict):
                    raise ConfigError(f"{section}: section must be a mapping")
                for key, value in values.items():
                    if key not in config[section]:
                        raise ConfigError(f"{section}.{key}: unknown configuration key")
                    config[section][key] = value
        if args is not None:
            for dest, (section, key) in OVERRIDES.items():
                value = getattr(args, dest, None)
                if value is not None:
                    config[section][key] = value
        return self.validate_config(config)

    @staticmethod
    def validate_config(config: dict) -> dict:
        """Checks every field and converts it to its canonical type. Raises :class:`~cvsampling.errors.ConfigError` naming the offending field."""
        general = config['general']
        if general['seed'] is None:
            raise ConfigError("general.seed: a master seed is required (--seed)")
        general['seed'] = as_int('general.seed', general['seed'], 0)
        if not general['out_dir']:
            raise ConfigError("general.out_dir: an output folder is required (--out-dir)")
        general['out_dir'] = str(general['out_dir'])

        logging_config = config['logging']
        if str(logging_config['loglevel']).upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR'):
            raise ConfigError(f"logging.loglevel: unknown level {logging_config['loglevel']!r}")
        logging_config['loglevel'] = str(logging_config['loglevel']).upper()

        instance = config['instance']
        if instance['source'] not in SOURCES:
            raise ConfigError(f"instance.source: must be one of {', '.join(SOURCES)}, got {instance['source']!r}")
        m = instance['modes'] = as_int('instance.modes', instance['modes'], 1)
        if instance['chi'] is not None:
            if instance['source'] != 'two-mode':
                raise ConfigError("instance.chi: chi is only defined for two-mode sources")
            instance['chi'] = as_float('instance.chi', instance['chi'], 0, 1, include_low=False, include_high=False)
            instance['r'] = math.atanh(instance['chi'])
        if isinstance(instance['r'], (list, tuple)):
            if instance['source'] != 'single':
                raise ConfigError("instance.r: a list of squeezing parameters is only accepted for single-mode sources")
            if len(instance['r']) != m:
                raise ConfigError(f"instance.r: expected {m} squeezing parameters, got {len(instance['r'])}")
            instance['r'] = [as_float('instance.r', r, -10, 10) for r in instance['r']]
        elif instance['source'] in ('two-mode', 'loop'):
            instance['r'] = as_float('instance.r', instance['r'], 0, 10, include_low=False)
        else:
            instance['r'] = as_float('instance.r', instance['r'], -10, 10)
        unitary = instance['unitary']
        if unitary not in ('identity', 'haar'):
            if not os.path.isfile(str(unitary)):
                raise ConfigError(f"instance.unitary: must be identity, haar or an existing loop program file, got {unitary!r}")
            instance['unitary'] = str(unitary)
        elif unitary == 'haar' and instance['source'] == 'loop':
            raise ConfigError("instance.unitary: the loop source requires identity or a loop program file")
        instance['loss'] = as_float('instance.loss', instance['loss'], 0, 1)

        characterization = config['characterization']
        characterization['K'] = as_int('characterization.K', characterization['K'], 1)
        characterization['eta'] = as_float('characterization.eta', characterization['eta'], 0, 0.5, include_low=False, include_high=False)
        characterization['delta'] = as_float('characterization.delta', characterization['delta'], 0, 1, include_low=False, include_high=False)

        verification = config['verification']
        verification['epsilon'] = as_float('verification.epsilon', verification['epsilon'], 0, 1)
        verification['budget_constant'] = as_float('verification.budget_constant', verification['budget_constant'], 0, math.inf, include_low=False, include_high=False)

        sampling = config['sampling']
        if sampling['cutoff'] is not None:
            sampling['cutoff'] = as_int('sampling.cutoff', sampling['cutoff'], 0)
        sampling['N'] = as_int('sampling.N', sampling['N'], 1)

        oracle = config['oracle']
        oracle['cutoff'] = as_int('oracle.cutoff', oracle['cutoff'], 0)
        oracle['padding'] = as_int('oracle.padding', oracle['padding'], 2)
        return config

    @staticmethod
    def hash_config(config: dict, sections: Optional[Sequence[str]] = None) -> str:
        """First 16 hex digits of the SHA-256 of the canonical JSON configuration, without the output folder and logging settings.

        Args:
            config: Validated configuration.
            sections: If given, only the seed and these sections are hashed.
        """
        hashed = copy.deepcopy(config)
        del hashed['general']['out_dir']
        del hashed['logging']
        if sections is not None:
            hashed = {section: hashed[section] for section in ('general', *sections)}
        canonical = json.dumps(hashed, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]

    def create_logger(self) -> logging.Logger:
        logger = logging.getLogger('cvsampling')
        logger.setLevel(logging.getLevelName(self.config['logging']['loglevel']))

        for handler in list(logger.handlers):
            if isinstance(handler, logging.FileHandler):
                handler.close()
                logger.removeHandler(handler)

        logfile = self.config['logging']['logfile'] or os.path.join(self.out_dir, 'cvsampling.log')
        file_handler = logging.FileHandler(logfile, mode='w')
        logger.addHandler(file_handler)

        formatter = logging.Formatter('%(asctime)s : %(levelname)s : %(message)s')
        file_handler.setFormatter(formatter)

        return logger

    def sub_seed(self, stage: str) -> int:
        """Seed of a stage, derived from the master seed and a fixed per-stage counter."""
        sequence = np.random.SeedSequence([self.seed, SEED_COUNTERS[stage]])
        return int(sequence.generate_state(1)[0])

    @property
    def m(self) -> int:
        """
        Returns:
            int: number of sources
        """
        return self.config['instance']['modes']

    @property
    def source(self) -> str:
        return self.config['instance']['source']

    def loop_program(self) -> LoopProgram:
        unitary = self.config['instance']['unitary']
        if unitary == 'identity':
            return LoopProgram(self.m)
        return LoopProgram.from_file(unitary, self.m)

    @property
    def unitary(self) -> np.ndarray:
        """
        Returns:
            np.ndarray: m x m interferometer of the instance
        """
        if self._unitary is None:
            unitary = self.config['instance']['unitary']
            if unitary == 'identity':
                self._unitary = np.eye(self.m, dtype=np.complex128)
            elif unitary == 'haar':
                self._unitary = haar_random_unitary(self.m, seed=self.sub_seed('haar')).U
            else:
                self._unitary = compile_loop_program(self.loop_program()).U
        return self._unitary

    def build_target(self) -> GaussianState:
        """The pure, lossless state of the configured instance."""
        r = self.config['instance']['r']
        if self.source == 'vacuum':
            return vacuum_state(self.m)
        if self.source == 'single':
            rs = r if isinstance(r, list) else [r] * self.m
            state = vacuum_state(self.m)
            for mode, r_mode in enumerate(rs):
                state = squeeze_single(state, mode, r_mode)
            return apply_passive(state, self.unitary)
        if self.source == 'two-mode':
            return build_scattershot_state(self.m, math.tanh(r), self.unitary).state
        return build_loop_state(self.loop_program(), r).state

    def build_prepared(self) -> GaussianState:
        """The target after uniform loss, the state the detectors see."""
        return apply_uniform_loss(self.build_target(), self.config['instance']['loss'])

    def build_circuit(self) -> FockCircuit:
        """Truncated-Fock counterpart of :meth:`build_target`."""
        r = self.config['instance']['r']
        m = self.m
        if self.source == 'vacuum':
            return FockCircuit(m, unitary=self.unitary)
        if self.source == 'single':
            rs = r if isinstance(r, list) else [r] * m
            return FockCircuit(m, squeezers=list(enumerate(rs)), unitary=self.unitary)
        signals = block_diag(np.eye(m), self.unitary)
        if self.source == 'two-mode':
            return FockCircuit(2 * m, pairs=[(k, m + k, r) for k in range(m)], unitary=signals)
        interference = np.eye(2 * m, dtype=np.complex128)
        for k in range(m):
            interference[np.ix_([m + k, k], [m + k, k])] = beamsplitter_unitary(math.pi / 4, 0.)
        squeezers = [(m + k, r) for k in range(m)] + [(k, -r) for k in range(m)]
        return FockCircuit(2 * m, squeezers=squeezers, unitary=signals @ interference)

    def run_characterize(self) -> ChernoffReport:
        """Draws K dual-homodyne samples of the prepared state and reconstructs its covariance matrix.

        Writes the samples, the estimated and target covariance matrices, the unitary and the Chernoff report.
        """
        settings = self.config['characterization']
        state = self.build_prepared()
        K, eta, delta = settings['K'], settings['eta'], settings['delta']
        required = required_sample_count(state.m, eta, delta)
        if K < required:
            self.logger.warning(f"K={K} is below the {required} samples required for failure probability {delta} at eta={eta}")
        samples = draw_dual_homodyne_samples(state, K, seed=self.sub_seed('characterize'))
        accumulator = SampleMatrixAccumulator.from_samples(samples)
        sigma_hat = reconstruct_covariance(sample_average(accumulator))
        report = multiplicative_band_check(state, sigma_hat, eta, min_quadrature_variance(state), K)
        self.logger.info(f"Characterized {state.m} modes with K={K}: band_ok={report.band_ok}, failure bound {report.failure_bound:.3e}")

        self.reporter.export_homodyne_samples(samples)
        self.reporter.export_covariance(self.reporter.SIGMA_HAT_FILE, sigma_hat)
        self.reporter.export_covariance(self.reporter.TARGET_FILE, self.build_target())
        self.reporter.export_unitary(self.unitary)
        self.reporter.export_json(self.reporter.CHERNOFF_FILE, report.to_dict())
        return report

    def run_verify(self) -> VerificationReport:
        """Certifies the characterized covariance matrix against the pure target and writes the verification report."""
        settings = self.config['verification']
        chernoff = self.reporter.load_json(self.reporter.CHERNOFF_FILE, missing="characterization missing")
        if not chernoff['band_ok']:
            self.logger.warning(f"Characterization with K={chernoff['K']} left the multiplicative band")
        sigma_hat = self.reporter.load_covariance(self.reporter.SIGMA_HAT_FILE, missing="characterization missing")
        report = certify(self.build_target(), sigma_hat, settings['epsilon'], settings['budget_constant'])
        self.reporter.export_json(self.reporter.VERIFICATION_FILE, report.to_dict())
        return report

    def run_sample(self) -> TotalVariation:
        """Enumerates the photon-counting distribution of the prepared state, draws N samples and compares them with the enumeration."""
        settings = self.config['sampling']
        state = self.build_prepared()
        cutoff = settings['cutoff']
        if cutoff is None:
            cutoff = default_cutoff(state, SAMPLING_MASS)
        distribution = enumerate_distribution(state, cutoff, workers=os.cpu_count() or 1)
        check_captured_mass(state, distribution)
        seed = self.sub_seed('sample')
        samples = sample_from_distribution(distribution, settings['N'], seed)
        tvd = total_variation(OutcomeDistribution.from_samples(samples, cutoff), distribution)
        self.logger.info(f"Drew {settings['N']} samples at cutoff {cutoff}: TVD {tvd.distance:.5f} (residual {tvd.residual:.2e})")

        self.reporter.export_distribution(distribution, seed)
        self.reporter.export_fock_samples(samples, cutoff, distribution.mass, seed)
        self.reporter.export_json(self.reporter.TVD_FILE, {
            'distance': tvd.distance,
            'residual': tvd.residual,
            'N': settings['N'],
            'cutoff': cutoff,
        })
        return tvd

    def run_oracle_check(self) -> float:
        """Compares the hafnian probabilities of the target with the truncated-Fock oracle on every outcome up to the oracle cutoff.

        Returns:
            max_abs_error: Largest absolute probability difference.
        """
        settings = self.config['oracle']
        circuit = self.build_circuit()
        truncated = oracle_state(circuit, settings['cutoff'], settings['padding'])
        target = self.build_target()
        outcomes = outcomes_up_to(target.m, settings['cutoff'])
        errors = [abs(outcome_probability(target, outcome) - truncated.probability(outcome)) for outcome in outcomes]
        max_abs_error = float(max(errors))
        self.logger.info(f"Oracle check over {len(outcomes)} outcomes: max abs error {max_abs_error:.3e}")
        self.reporter.export_json(self.reporter.ORACLE_FILE, {
            'max_abs_error': max_abs_error,
            'outcomes': len(outcomes),
            'cutoff': settings['cutoff'],
            'captured_mass': truncated.captured_mass,
            'edge_mass': truncated.edge_mass,
        })
        return max_abs_error

    def run(self, stage: str) -> int:
        """Runs a stage, or all stages for ``'all'``, and returns the exit status.

        Args:
            stage: One of characterize, verify, sample, oracle-check or all.

        Returns:
            status: 0 on success, 1 when verification or the oracle check fails, 3 when a numeric guard refused (only for ``'all'``; single stages raise).
        """
        if stage == 'all':
            status = 0
            for name in STAGES:
                try:
                    status = max(status, self.run(name))
                except NumericGuardError as e:
                    self.logger.error(f"{name} refused: {e}")
                    status = max(status, 3)
            return status
        if stage == 'characterize':
            self.run_characterize()
            return 0
        if stage == 'verify':
            return 0 if self.run_verify().passed else 1
        if stage == 'sample':
            self.run_sample()
            return 0
        if stage == 'oracle-check':
            return 0 if self.run_oracle_check() < ORACLE_TOLERANCE else 1
        raise ValueError(f"{stage} not a known stage")
