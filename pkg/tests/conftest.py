import random
from fractions import Fraction

import pytest

from nordenlab import LieBackend, LieFrameData, canonical_structure
from nordenlab.pipeline import compute_pipeline
from nordenlab.registry import build_example


def lie_pipeline(triples, n=1):
    s = canonical_structure(n)
    lie = LieFrameData.from_triples(2 * n + 1, triples)
    return compute_pipeline(s, LieBackend(s, lie))


@pytest.fixture(scope="session")
def ex_flat():
    return compute_pipeline(*build_example("ex-flat"))


@pytest.fixture(scope="session")
def ex_f4():
    return compute_pipeline(*build_example("ex-f4"))


@pytest.fixture(scope="session")
def ex_f5():
    return compute_pipeline(*build_example("ex-f5"))


@pytest.fixture(scope="session")
def ex_f45():
    return compute_pipeline(*build_example("ex-f45"))


@pytest.fixture(scope="session")
def ex_chart_exp():
    return compute_pipeline(*build_example("ex-chart-exp"))


@pytest.fixture(scope="session")
def ex_chart_poly():
    return compute_pipeline(*build_example("ex-chart-poly"))


@pytest.fixture(scope="session")
def omega_generic():
    """A solvable frame with a xi-component in the bracket: omega != 0, so
    the parameter conditions of the almost contact family are detectable."""
    return lie_pipeline([(2, 0, 0, Fraction(1)), (2, 0, 2, Fraction(1))])


@pytest.fixture()
def rng():
    return random.Random(987654321)
