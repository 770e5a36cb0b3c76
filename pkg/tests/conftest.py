import os
import tempfile

import pytest

from dirober.assembly import construct


def pytest_configure(config):
    # keep the quad cache out of the home directory during tests
    if "DIROBER_CACHE" not in os.environ:
        os.environ["DIROBER_CACHE"] = os.path.join(tempfile.mkdtemp(prefix="dirober-"), "quads.txt")


_BUILT = {}


def built(m):
    if m not in _BUILT:
        _BUILT[m] = construct(m)
    return _BUILT[m]


@pytest.fixture
def build():
    return built


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
