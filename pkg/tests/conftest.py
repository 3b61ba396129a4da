import sys

import pytest

from qhe_spectro.params import fig2_params


@pytest.fixture(scope="session")
def fig2():
    return fig2_params()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)  # filled while the acceptance tests run
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=int):
        terminalreporter.write_line(results[key])
