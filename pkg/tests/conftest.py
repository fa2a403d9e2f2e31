"""
Fixtures partagées : anneaux de base, points et symboles récurrents
"""

import random

import pytest

from eulerclass.groebner import IdealHandle
from eulerclass.quadric import QuadricPoint
from eulerclass.ring import make_ring


@pytest.fixture
def qx():
    """ℚ[x]"""
    return make_ring('QQ', ['x'])


@pytest.fixture
def qxy():
    """ℚ[x, y]"""
    return make_ring('QQ', ['x', 'y'])


@pytest.fixture
def f5xy():
    return make_ring('F5', ['x', 'y'])


@pytest.fixture
def sphere():
    """ℚ[x, y, z]/(x² + y² + z² − 1)"""
    return make_ring('QQ', ['x', 'y', 'z'], ['x^2 + y^2 + z^2 - 1'], name='S2')


@pytest.fixture
def origin(qxy):
    """((x, y), (0, 0), 0) sur Q4"""
    return QuadricPoint.of(qxy, ['x', 'y'], [0, 0], 0)


@pytest.fixture
def shifted(qxy):
    """((x − 1, y), (0, 0), 0) sur Q4"""
    return QuadricPoint.of(qxy, ['x - 1', 'y'], [0, 0], 0)


@pytest.fixture
def ideal(qxy):
    def build(*generators, ring=None):
        return IdealHandle(ring or qxy, list(generators))
    return build


@pytest.fixture
def rng():
    return random.Random(20240611)
