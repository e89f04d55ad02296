import random

import pytest
from hypothesis import HealthCheck, settings

from gmspp.instance import CostScheme, random_instance

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def seeded_instance(seed: int, n_range=(3, 6), m_range=(1, 2), **kw):
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    m = rng.randint(*m_range)
    scheme = list(CostScheme)[seed % 3]
    return random_instance(rng, n, m, scheme=scheme, **kw)


@pytest.fixture
def knapsack_instance():
    from gmspp.instance import make_instance
    return make_instance([(3, 4)], [(5, 1)], name="one")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one verdict line per acceptance criterion; echoed in the terminal summary."""
    def emit(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
