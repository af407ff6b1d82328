import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def report(request, capsys):
    """Record a one-line verdict for the acceptance summary."""
    lines = request.config._acceptance_lines

    def emit(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}"
        lines.append(line)
        with capsys.disabled():
            print("\n" + line)

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
