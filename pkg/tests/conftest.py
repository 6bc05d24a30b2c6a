import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from strengthlab import kernels  # noqa: E402
from strengthlab.gf import field_create  # noqa: E402


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


@pytest.fixture
def F2():
    return field_create(2)


@pytest.fixture
def F3():
    return field_create(3)


@pytest.fixture
def F5():
    return field_create(5)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
