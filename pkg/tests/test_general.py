# -*- coding: utf-8 -*-
import pytest

import cvsampling
from cvsampling.argparse import parser
from cvsampling.library.hafnian import hafnian_subsets


def test_package_metadata():
    assert cvsampling.__title__ == 'cvsampling'
    assert cvsampling.__version__


def test_hafnian_kernel_releases_gil():
    # enumeration threads only run concurrently when the compiled kernel drops the GIL
    assert hafnian_subsets.targetoptions['nogil']


def test_parser():
    args = parser.parse_args(['sample', '--seed', '3', '--out-dir', 'out', '--N', '10', '--source', 'loop'])
    assert args.command == 'sample'
    assert args.seed == 3
    assert args.N == 10
    assert args.source == 'loop'
    assert args.cutoff is None
    with pytest.raises(SystemExit):
        parser.parse_args(['sample', '--out-dir', 'out'])
    with pytest.raises(SystemExit):
        parser.parse_args(['calibrate', '--seed', '1', '--out-dir', 'out'])
