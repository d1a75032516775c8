# -*- coding: utf-8 -*-
"""This package simulates, characterizes and verifies continuous-variable Gaussian boson sampling experiments.

Submodules
==========


"""

__title__ = 'cvsampling'
__version__ = 0.1
__email__ = "j.a.debruijn at outlook com"
__status__ = 'development'
