#!/usr/bin/env python3
"""
Shared pytest setup for the NoisyLab suite.

Puts the repository root on sys.path, keeps logs and persisted settings in a
temporary NOISYLAB_HOME and registers hypothesis profiles
(select with HYPOTHESIS_PROFILE=fast|ci).
"""

import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

np.seterr(all="warn")

hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(autouse=True, scope="session")
def lab_home(tmp_path_factory):
    """Isolated NOISYLAB_HOME for the whole session."""
    home = tmp_path_factory.mktemp("noisylab_home")
    previous = os.environ.get("NOISYLAB_HOME")
    os.environ["NOISYLAB_HOME"] = str(home)
    yield home
    if previous is None:
        os.environ.pop("NOISYLAB_HOME", None)
    else:
        os.environ["NOISYLAB_HOME"] = previous


@pytest.fixture(scope="session")
def nah():
    """Bundled NaH Hamiltonian."""
    from src.ham_io import bundled_nah
    return bundled_nah()


@pytest.fixture(scope="session")
def nah_spectrum(nah):
    from src.simulation.exact_oracle import ground_state
    return ground_state(nah)
