import numpy as np
import pytest

from wepsim.model import SimConfig

ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


class StubRng:
    """Deterministic stand-in for numpy's Generator.

    ``random`` hands out ``values`` in order (cycling); ``integers`` always
    returns the lower bound.
    """

    def __init__(self, values=(0.0,)):
        self.values = list(values)
        self.i = 0

    def random(self, size=None):
        if size is None:
            return self._next()
        return np.array([self._next() for _ in range(size)], dtype=float)

    def _next(self):
        v = self.values[self.i % len(self.values)]
        self.i += 1
        return v

    def integers(self, low, high=None):
        return low if high is not None else 0


@pytest.fixture
def stub_rng():
    return StubRng


@pytest.fixture
def default_cfg():
    return SimConfig()


@pytest.fixture
def acceptance_record():
    def record(label: str, passed: bool, detail: str = ""):
        ACCEPTANCE_LINES.append((label, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_LINES:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f"  ({detail})" if detail else ""))
