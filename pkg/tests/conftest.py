import pytest

ACCEPTANCE = pytest.StashKey[list]()


def pytest_addoption(parser):
    parser.addoption("--regold", action="store_true", help="rewrite golden CLI outputs")


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
