"""Shared fixtures: prebuilt Haar systems at several grid resolutions.

Everything downstream of the filter is deterministic, so the systems are
built once per session.  The 1024 grid is the reference configuration for
the frame-property measurements; 256 and 512 keep the unit tests fast.
"""

import numpy as np
import pytest

from framelet2d import (
    SynthesisParams,
    WaveletSystem,
    build_system,
    haar_pair,
    standard_suite,
)

C1 = np.array([[1, 1], [1, -1]])
A0_QUINCUNX = np.array([[0, 2], [1, 0]])


def _haar_system(grid_n: int, a0=C1, depth: int = 20) -> WaveletSystem:
    return build_system(
        a0, n0=1, h=haar_pair(1),
        synth_params=SynthesisParams(j=depth, grid_n=grid_n),
    )


@pytest.fixture(scope="session")
def sys256() -> WaveletSystem:
    return _haar_system(256)


@pytest.fixture(scope="session")
def sys512() -> WaveletSystem:
    return _haar_system(512)


@pytest.fixture(scope="session")
def sys1024() -> WaveletSystem:
    return _haar_system(1024)


@pytest.fixture(scope="session")
def sys512_a0() -> WaveletSystem:
    """Same pipeline on A0 = [[0,2],[1,0]], which reduces to index 1."""
    return _haar_system(512, a0=A0_QUINCUNX)


@pytest.fixture(scope="session")
def suite():
    return standard_suite()
