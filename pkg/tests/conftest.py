import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from smoothcert import kernels  # noqa: E402


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return kernels.get_backend(request.param)


@pytest.fixture
def data_dir():
    return os.path.join(os.path.dirname(__file__), "data")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
