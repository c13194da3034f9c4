import pytest

from helpers import load_grammar

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def grammars():
    return {name: load_grammar(f"{name}.dg") for name in ("trivial", "toy", "attach", "pp", "topic")}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
