import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pointedchains.files import load_algebra, load_pair  # noqa: E402
from pointedchains.linalg import Field  # noqa: E402


@pytest.fixture(scope="session")
def lam():
    return load_algebra("lambda")


@pytest.fixture(scope="session")
def pair_file():
    return load_pair("lambda_pair")


@pytest.fixture(scope="session")
def lam_f2():
    return load_algebra("lambda", field=Field(2, minimum=2))


@pytest.fixture(scope="session")
def lam_f3():
    return load_algebra("lambda", field=Field(3, minimum=2))


def pytest_terminal_summary(terminalreporter):
    from oracles import ACCEPTANCE_LINES
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
