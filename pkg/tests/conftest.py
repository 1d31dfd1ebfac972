import json
import pathlib

import pytest

from wireqed import (DrudeModel, OMEGA_A, WireGeometry, fit_plasmon_lorentzian)
from wireqed.emitters import EmitterPair, PairInteraction

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def default_geom():
    return WireGeometry(radius=0.01, model=DrudeModel())


@pytest.fixture(scope="session")
def default_pair():
    return EmitterPair((0.015, 0.0, 0.0), (0.015, 0.0, 0.5))


@pytest.fixture(scope="session")
def pair_engine(default_geom, default_pair):
    # one shared build covers every separation the suite asks for
    return PairInteraction(default_geom, default_pair, tol=1e-6,
                           dz_refs=(0.0, 0.02, 0.5, 2.0, 4.0))


@pytest.fixture(scope="session")
def plasmon_fit(default_geom):
    return fit_plasmon_lorentzian(default_geom, 0.015, OMEGA_A)
