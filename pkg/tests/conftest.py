import contextlib
import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "ffk", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ffk")

_RESULTS = {}


class _Record:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.detail = ""
        self.ok = None
        self.start = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.start

    def line(self):
        verdict = {True: "PASS", False: "FAIL", None: "EXCLUDED"}[self.ok]
        return f"criterion {self.number:>2}  {verdict:<8}  {self.title}: {self.detail}"


@pytest.fixture
def criterion():
    """Context manager recording one acceptance line, FAIL on any exception."""

    @contextlib.contextmanager
    def run(number, title, excluded=False):
        rec = _Record(number, title)
        _RESULTS[number] = rec
        if excluded:
            yield rec
            return
        try:
            yield rec
        except BaseException as exc:
            rec.ok = False
            rec.detail = (rec.detail + f" [{type(exc).__name__}: {exc}]").strip()
            raise
        else:
            rec.ok = True
        finally:
            print(rec.line())

    return run


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[number].line())
