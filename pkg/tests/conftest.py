import numpy as np
import pytest

from frameletshrink.imageio import bundled_image

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return np.random.default_rng(20171015)


@pytest.fixture(scope="session")
def camera():
    return bundled_image("camera")


@pytest.fixture(scope="session")
def astronaut():
    return bundled_image("astronaut")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}: {detail}")
