import numpy as np
import pytest

from jetfinsler.jetspace import CubicForm, JetPoint, TemporalMetric

_ACCEPTANCE_LINES: list[tuple[int, str]] = []


@pytest.fixture
def acceptance_log():
    """Collector for one pass/fail line per acceptance criterion."""

    def record(criterion: int, name: str, passed: bool, detail: str = ""):
        line = f"criterion {criterion} [{name}]: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        _ACCEPTANCE_LINES.append((criterion, line))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bm_cubic():
    return CubicForm.berwald_moor()


@pytest.fixture(scope="session")
def metrics():
    return {
        "1": TemporalMetric("1"),
        "exp(2*t)": TemporalMetric("exp(2*t)"),
        "t**2 + 1": TemporalMetric("t**2 + 1"),
    }


@pytest.fixture(scope="session")
def unit_point():
    return JetPoint.of(0.0, (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))


def sample_jet_points(seed: int, count: int, y_box=(0.2, 5.0), t_range=(-1.0, 1.0)):
    rng = np.random.Generator(np.random.PCG64(seed))
    ts = rng.uniform(*t_range, count)
    xs = rng.uniform(-1.0, 1.0, (count, 3))
    ys = rng.uniform(*y_box, (count, 3))
    return [JetPoint.of(ts[i], xs[i], ys[i]) for i in range(count)]


@pytest.fixture(scope="session")
def random_points():
    return sample_jet_points(seed=20240817, count=20)
