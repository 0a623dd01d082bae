import numpy as np
import pytest
from hypothesis import settings

from mziqfi.fock import Truncation
from mziqfi.optics import InputSpec, prepare_input

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

REF_ALPHA1 = 0.5 + 0.3j
REF_R = 0.4
REF_ALPHA2 = 0.7 - 0.2j

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ref_spec():
    return InputSpec(REF_ALPHA1, REF_R, REF_ALPHA2, Truncation(40, 40))


@pytest.fixture(scope="session")
def ref_state(ref_spec):
    return prepare_input(ref_spec)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def acceptance_report():
    def report(criterion: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
        print(line)
        _ACCEPTANCE_LINES.append(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
