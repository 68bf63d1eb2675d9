"""Shared pytest setup: project root on sys.path, logs in a temporary directory."""

import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

os.environ.setdefault("STAIRCASE_LOG_DIR", tempfile.mkdtemp(prefix="staircase-logs-"))
os.environ.setdefault("STAIRCASE_THREADS", "1")


@pytest.fixture(scope="session")
def caps_b15():
    """Capacities c_0..c_400 of 5 H_{1/5}."""
    from core.echcap import toric_caps

    return toric_caps(Fraction(1, 5), 5, 400)
