import pytest
from hypothesis import HealthCheck, settings

from fewnomial.framework import ProblemInstance
from fewnomial.linalg import RatMatrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def two_component(k=(1, 1, 1, 1)):
    A = RatMatrix([[-1, 1, -1, 0], [0, -1, 1, 1]])
    B = RatMatrix([[1, 0, 1, 0], [0, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
    return ProblemInstance(A, B, tuple(k))


def trinomial(b1, b2, c1=1, c2=1):
    return ProblemInstance(RatMatrix([[1, 1, -1]]), RatMatrix([[b1, b2, 0]]), (c1, c2, 1))


def tri3d(b1, b2, b3, c=(1, 1, 1, 1, 1, 1)):
    A = RatMatrix([[1, 1, -1, 0, 0, 0], [0, 0, 0, 1, 1, -1]])
    B = RatMatrix([[1, 0, 0, 0, b1, 0], [0, 1, 0, 0, b2, 0], [0, 0, 0, 1, b3, 0]])
    return ProblemInstance(A, B, c)


def kouchnirenko(a=1.392):
    A = RatMatrix([[1, 1, -1, 0, 0, 0], [0, 0, 0, 1, 1, -1]])
    B = RatMatrix([[5, 0, 0, -1, 1, 0], [-1, 1, 0, 5, 0, 0]])
    return ProblemInstance(A, B, (1, a, 1, 1, a, 1))


@pytest.fixture
def ex41():
    return two_component()


@pytest.fixture
def haas():
    return kouchnirenko()

