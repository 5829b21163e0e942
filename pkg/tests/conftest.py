import importlib.resources

import numpy as np
import pytest

from robustkit.sets import PolyhedralSet


def box_set(center, radius):
    """Axis-aligned box as a polyhedral set."""
    c = np.asarray(center, dtype=float)
    r = np.asarray(radius, dtype=float)
    k = len(c)
    return PolyhedralSet(np.vstack([np.eye(k), -np.eye(k)]),
                         np.concatenate([c + r, -(c - r)]))


def interval(lo, hi):
    return PolyhedralSet([[1.0], [-1.0]], [hi, -lo])


@pytest.fixture(scope="session")
def fixture_dir():
    return importlib.resources.files("robustkit") / "fixtures"
