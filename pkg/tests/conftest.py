"""
Shared pytest configuration: import path, hypothesis profiles, slow sweeps
"""

import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

settings.register_profile('default', settings(
    derandomize=True,
    max_examples=60,
    deadline=None,
))

settings.register_profile('thorough', settings(
    derandomize=True,
    max_examples=1000,
    deadline=None,
))

settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'default'))


def pytest_addoption(parser):
    parser.addoption(
        '--runslow',
        action='store_true',
        default=False,
        help='Run the exhaustive 4-state sweeps'
    )


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive sweep, needs --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)
