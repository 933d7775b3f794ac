from fractions import Fraction

import pytest

from pseudodyn import FiniteMetricSpace, GeneratingSystem, PartialMap


@pytest.fixture
def line():
    """Three points on a line: d(a,b) = d(b,c) = 1, d(a,c) = 2."""
    return FiniteMetricSpace(["a", "b", "c"], [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture
def line_system(line):
    g = PartialMap.from_dict(line, {"a": "b", "b": "c"}, name="g")
    return GeneratingSystem.build(line, [g])


@pytest.fixture
def line_system_cores(line):
    g = PartialMap.from_dict(line, {"a": "b", "b": "c"}, name="g")
    return GeneratingSystem.build(line, [g],
                                  cores={"g": {0}, "g^-1": {2}})


def cyclic_space(n):
    return FiniteMetricSpace(
        list(range(n)),
        [[Fraction(min(abs(i - j), n - abs(i - j))) for j in range(n)]
         for i in range(n)],
    )


def rotation_system(n):
    space = cyclic_space(n)
    r = PartialMap.from_dict(space, {i: (i + 1) % n for i in range(n)}, name="r")
    return GeneratingSystem.build(space, [r])


@pytest.fixture
def z6():
    return cyclic_space(6)


@pytest.fixture
def z6_rotations():
    return rotation_system(6)


@pytest.fixture
def identity_system(line):
    return GeneratingSystem.build(line, [])
