import json
import pathlib

import pytest

from bankmap import ProblemSpec, SchedulePair, validate_permutation

FIXTURE_DIR = pathlib.Path(__file__).parent / "fixtures"

# the 12-element worked example used throughout the suite
DEMO_PERMUTATION = (1, 9, 10, 5, 0, 11, 2, 7, 3, 6, 8, 4)
DEMO_NATURAL = ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))
DEMO_INTERLEAVED = ((1, 5, 2, 6), (9, 0, 7, 8), (10, 11, 3, 4))
DEMO_TILES = ((1, 0, 2, 2), (3, 1, 3, 2), (3, 0, 0, 1))

# bank contents {0,1,6,3} / {4,5,10,7} / {8,9,2,11}; barrel-realizable
KNOWN_MAPPING = (0, 0, 2, 0, 1, 1, 0, 1, 2, 2, 1, 2)
# collision-free for both orders but realizable only by a crossbar
CROSSBAR_ONLY_MAPPING = (2, 0, 0, 2, 1, 1, 2, 1, 0, 2, 1, 0)


@pytest.fixture(scope="session")
def pinned():
    return json.loads((FIXTURE_DIR / "pinned.json").read_text())


@pytest.fixture
def demo_problem():
    return ProblemSpec(validate_permutation(DEMO_PERMUTATION), 3)


@pytest.fixture
def demo_pair(demo_problem):
    return SchedulePair.from_problem(demo_problem)
