import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from feasilab.metrics import make_couple
from feasilab.sets import AffineSubspace, Ball, Halfspace, VPolytope, box


@pytest.fixture(scope="session")
def trapezoids_couple():
    A = VPolytope([[1, 1], [-1, 1], [1, 0], [-1, 0]])
    B = VPolytope([[1, -1], [-1, -1], [1, 0], [-1, 0]])
    return make_couple(A, B, E=VPolytope([[-1.0, 0.0], [1.0, 0.0]]))


@pytest.fixture(scope="session")
def rectangles_couple():
    A = box([-1, 1], [1, 2])
    B = box([-1, -2], [1, -1])
    return make_couple(A, B, E=VPolytope([[-1.0, 1.0], [1.0, 1.0]]))


@pytest.fixture(scope="session")
def axes_couple():
    A = AffineSubspace([0, 0], [[1, 0]])
    B = AffineSubspace([0, 0], [[0, 1]])
    return make_couple(A, B, E=VPolytope([[0.0, 0.0]]))


@pytest.fixture(scope="session")
def tangent_disc_couple():
    return make_couple(
        Ball([0, 0], 1.0), Halfspace([0, 1], 1.0), E=VPolytope([[0.0, 1.0]])
    )
