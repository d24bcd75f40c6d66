"""Shared fixtures: tolerance config and the worked example tuples."""

import numpy as np
import pytest

from rowcon.core import RowContraction, ToleranceConfig


@pytest.fixture
def cfg() -> ToleranceConfig:
    return ToleranceConfig()


def make_pair3() -> RowContraction:
    """Cuntz 2-tuple on C^3 whose transfer map has a 4-dimensional fixed
    space cut out by x12=x21=x23=x32=0 and x11+x13+x31+x33=2*x22."""
    s = 1.0 / np.sqrt(2.0)
    q = 1.0 / (2.0 * np.sqrt(2.0))
    a1 = np.array([[s, 0, 0], [q, 0.5, q], [0, 0, s]])
    a2 = np.array([[s, 0, 0], [-q, 0.5, -q], [0, 0, s]])
    return RowContraction([a1, a2])


def make_triple3() -> RowContraction:
    """Cuntz 3-tuple on C^3 generating a non-reflexive lower-triangular
    algebra; its dilation is irreducible with a unique minimal
    coinvariant line."""
    s = 1.0 / np.sqrt(2.0)
    a1 = np.diag([1.0, s, s])
    a2 = np.array([[0, 0, 0], [0, 0, 0], [0.5, 0.5, 0]])
    a3 = np.array([[0, 0, 0], [s, 0, 0], [0, 0, 0]])
    return RowContraction([a1, a2, a3])


def make_sigma11_pair() -> RowContraction:
    """Cuntz pair (diag(1,0), e21): irreducible, one minimal line C e1."""
    return RowContraction([np.diag([1.0, 0.0]), np.array([[0, 0], [1.0, 0]])])


def make_b_pair() -> RowContraction:
    """diag(1,1/2)-conjugate of the sigma11 pair: same Cuntz part but
    pure rank 1."""
    return RowContraction([np.diag([1.0, 0.0]), np.array([[0, 0], [0.5, 0]])])


def make_mixed3() -> RowContraction:
    """Pure-rank-2 tuple with a one-dimensional Cuntz summand on C e1."""
    a1 = np.zeros((3, 3))
    a1[0, 0] = 1.0
    a2 = np.zeros((3, 3))
    a2[1, 0] = 0.5
    a2[1, 2] = 0.5
    return RowContraction([a1, a2])


@pytest.fixture
def pair3() -> RowContraction:
    return make_pair3()


@pytest.fixture
def triple3() -> RowContraction:
    return make_triple3()


@pytest.fixture
def sigma11_pair() -> RowContraction:
    return make_sigma11_pair()


@pytest.fixture
def b_pair() -> RowContraction:
    return make_b_pair()


@pytest.fixture
def mixed3() -> RowContraction:
    return make_mixed3()
