import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    parser.addoption("--corpus-seed", type=int, default=20240601,
                     help="seed for randomly generated test graphs")


@pytest.fixture(scope="session")
def corpus_seed(request) -> int:
    return request.config.getoption("--corpus-seed")


@pytest.fixture
def rng(corpus_seed) -> random.Random:
    return random.Random(corpus_seed)


@pytest.fixture
def theta():
    from nestcycles.corpus import theta4_map
    return theta4_map()


@pytest.fixture
def k4map():
    from nestcycles.corpus import named_map
    return named_map("K4")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
