from pathlib import Path

import numpy as np
import pytest

from quasigate.core.loops import ClassTable, CoordinateAllocator
from quasigate.core.string_ops import LoopAlgebra
from quasigate.core.words import CyclicWord
from quasigate.scenario import Scenario

SCENARIOS = Path(__file__).parent / "data" / "scenarios"


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIOS


@pytest.fixture
def fixture_scenario() -> Scenario:
    return Scenario.load(SCENARIOS / "fixture.json")


@pytest.fixture
def w2_scenario() -> Scenario:
    return Scenario.load(SCENARIOS / "w2.json")


@pytest.fixture
def forced_scenario() -> Scenario:
    return Scenario.load(SCENARIOS / "forced_crossing.json")


@pytest.fixture
def surface(fixture_scenario):
    return fixture_scenario.surface


@pytest.fixture
def w() -> CyclicWord:
    return CyclicWord.parse("g1.g2^-1.y1^-1")


@pytest.fixture
def allocator(surface) -> CoordinateAllocator:
    return CoordinateAllocator(surface, seed=5)


@pytest.fixture
def algebra(surface) -> LoopAlgebra:
    return LoopAlgebra(surface, table=ClassTable(surface, seed=17))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
