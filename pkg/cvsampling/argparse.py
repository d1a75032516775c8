# -*- coding: utf-8 -*-
import argparse
from cvsampling import __name__

common = argparse.ArgumentParser(add_help=False)
common.add_argument('--config', dest='config', type=str, default=None, help="YAML configuration file. Values given on the command line override the values in this file.")
common.add_argument('--seed', dest='seed', type=int, required=True, help="Master seed. The seeds of the Haar unitary, the homodyne samples and the photon-counting samples are all derived from it, so a rerun with the same seed reproduces every artifact.")
common.add_argument('--out-dir', dest='out_dir', type=str, required=True, help="Folder that receives the artifacts of the run.")
common.add_argument('--loglevel', dest='loglevel', type=str, default=None, help="Log level (DEBUG, INFO, WARNING or ERROR).")

instance = common.add_argument_group('instance')
instance.add_argument('--source', dest='source', choices=['single', 'two-mode', 'loop', 'vacuum'], default=None, help="Type of squeezed source.")
instance.add_argument('--modes', dest='modes', type=int, default=None, help="Number of sources m.")
instance.add_argument('--r', dest='r', type=float, default=None, help="Squeezing parameter r.")
instance.add_argument('--chi', dest='chi', type=float, default=None, help="Two-mode squeezing strength, chi = tanh r.")
instance.add_argument('--unitary', dest='unitary', type=str, default=None, help="Interferometer: identity, haar or the path of a loop program file.")
instance.add_argument('--loss', dest='loss', type=float, default=None, help="Uniform transmissivity in [0, 1].")

stages = common.add_argument_group('stages')
stages.add_argument('--K', dest='K', type=int, default=None, help="Number of dual-homodyne samples.")
stages.add_argument('--eta', dest='eta', type=float, default=None, help="Chernoff deviation parameter in (0, 1/2).")
stages.add_argument('--delta', dest='delta', type=float, default=None, help="Target failure probability of the characterization.")
stages.add_argument('--epsilon', dest='epsilon', type=float, default=None, help="Verification tolerance; the state passes when 1 - F < epsilon.")
stages.add_argument('--budget-constant', dest='budget_constant', type=float, default=None, help="Constant c of the verification sample budget c m^4.")
stages.add_argument('--cutoff', dest='cutoff', type=int, default=None, help="Total photon cutoff of the sampler (chosen automatically when omitted).")
stages.add_argument('--N', dest='N', type=int, default=None, help="Number of photon-counting samples.")
stages.add_argument('--oracle-cutoff', dest='oracle_cutoff', type=int, default=None, help="Total photon cutoff of the truncated-Fock oracle.")
stages.add_argument('--padding', dest='padding', type=int, default=None, help="Extra Fock levels per mode used by the oracle to prepare squeezed sources.")

parser = argparse.ArgumentParser(prog=__name__, description=f"{__name__} simulates, characterizes and verifies continuous-variable boson sampling experiments at desk scale. Exit status: 0 on success, 1 when verification fails, 2 on invalid input or missing artifacts, 3 when a numeric guard refuses.")
subparsers = parser.add_subparsers(dest='command', required=True)
subparsers.add_parser('characterize', parents=[common], help="Draw dual-homodyne samples of the prepared state and reconstruct its covariance matrix.")
subparsers.add_parser('verify', parents=[common], help="Certify the reconstructed covariance matrix against the pure target state.")
subparsers.add_parser('sample', parents=[common], help="Enumerate the photon-counting distribution and draw samples from it.")
subparsers.add_parser('oracle-check', parents=[common], help="Compare hafnian probabilities with a brute-force truncated-Fock computation.")
subparsers.add_parser('all', parents=[common], help="Run characterize, verify, sample and oracle-check in sequence.")
