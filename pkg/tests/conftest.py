import numpy as np
import pytest

from traspec import kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=["active", "python"])
def backend(request):
    """The backend picked at import, and the pure-Python fallback."""
    return kernels if request.param == "active" else kernels.python_backend


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Collects ``PASS/FAIL criterion N`` lines for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def report(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
