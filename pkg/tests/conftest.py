import pytest

from helpers import TOY_INTERACTIONS, TOY_TIMES, acceptance_log
from simplicial_closure import ComplexView, SimplicialDataset


@pytest.fixture
def toy():
    return SimplicialDataset.from_interactions(TOY_INTERACTIONS, TOY_TIMES, name="toy")


@pytest.fixture
def toy_view(toy):
    return ComplexView(toy, 0, len(toy))


@pytest.fixture
def toy_train_view(toy):
    """Everything before the closure of (3, 4, 5)."""
    return ComplexView(toy, 0, 5)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log:
            terminalreporter.write_line(line)
