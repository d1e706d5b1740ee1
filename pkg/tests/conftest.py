"""
Test configuration and fixtures for pytest.
"""

import os
import sys
from pathlib import Path

import pytest

# Add project root to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# Set test environment variables
os.environ['GRIDWALK_ROOK_MAX_N'] = '6'
os.environ['GRIDWALK_KING_MAX_N'] = '5'
os.environ['GRIDWALK_WORKERS'] = '1'
os.environ['GRIDWALK_SPLIT_DEPTH'] = '1'
os.environ['GRIDWALK_AUDIT_MAX_N'] = '6'
os.environ['GRIDWALK_BASE_SIDE'] = '5'
os.environ['LOG_LEVEL'] = 'DEBUG'

from src.constructor import WalkConstructor  # noqa: E402
from src.enumerator import WalkEnumerator  # noqa: E402


@pytest.fixture
def enumerator():
    return WalkEnumerator()


@pytest.fixture
def constructor():
    return WalkConstructor()
