# -*- coding: utf-8 -*-
"""Numerical building blocks: Gaussian states, interferometers, homodyne characterization, photon-counting statistics, a truncated-Fock oracle and state verification."""
