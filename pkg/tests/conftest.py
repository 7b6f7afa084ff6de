import sys
import warnings
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sharc_vqe.ansatz import build_uccsd  # noqa: E402
from sharc_vqe.hamiltonians import exact_spectrum, get_fixture  # noqa: E402
from sharc_vqe.sharc import SignificanceWarning  # noqa: E402


@pytest.fixture(scope="session")
def h2_fixture():
    return get_fixture("h2")


@pytest.fixture(scope="session")
def h2(h2_fixture):
    return h2_fixture.load()


@pytest.fixture(scope="session")
def h2_circuit(h2_fixture):
    return build_uccsd(4, h2_fixture.occupied_modes, h2_fixture.mapping)


@pytest.fixture(scope="session")
def h2_exact(h2):
    return exact_spectrum(h2, 5)


@pytest.fixture(scope="session")
def hubbard():
    return get_fixture("hubbard2").load()


@pytest.fixture(autouse=True)
def _quiet_significance():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SignificanceWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)
