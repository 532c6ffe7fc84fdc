import numpy as np
import pytest

from bisd.distribution import SampleSet, UNIT_FRAME, build_cdf


def random_sampleset(rng, n_max=6, grid=None):
    """Random weighted atoms in the unit square; ``grid`` snaps coordinates to k/grid."""
    n = int(rng.integers(1, n_max + 1))
    if grid:
        pts = rng.integers(0, grid + 1, size=(n, 2)) / grid
    else:
        pts = rng.uniform(0.0, 1.0, size=(n, 2))
    return SampleSet.from_points(pts, rng.uniform(0.1, 1.0, n))


def random_cdf(rng, n_max=6, grid=None):
    return build_cdf(random_sampleset(rng, n_max, grid), UNIT_FRAME)


def brute_cdf(points, weights, s, t):
    pts = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    return float(np.sum(w[(pts[:, 0] <= s) & (pts[:, 1] <= t)]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def record_criterion(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
