# -*- coding: utf-8 -*-
# Sphinx configuration for the cvsampling documentation.
import os
import sys
import sphinx_rtd_theme
sys.path.insert(0, os.path.abspath('..'))

project = 'cvsampling'
with open('copyright.rst', 'r') as f:
    copyright = f.read()
with open('authors.rst', 'r') as f:
    author = f.read()
release = '0.1'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    "sphinx_rtd_theme",
    "sphinx_autodoc_typehints",
    'sphinxcontrib.autoprogram',
]
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

# the library docstrings carry the probability and fidelity formulas
mathjax3_config = {'tex': {'macros': {'haf': r'\mathrm{haf}'}}}

html_theme = "sphinx_rtd_theme"
add_module_names = False
napoleon_custom_sections = [('Returns', 'params_style')]
autoclass_content = 'both'
autodoc_member_order = 'bysource'
