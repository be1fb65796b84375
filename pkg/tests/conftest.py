import math

import numpy as np
import pytest

from dkwaves.fields import SpacetimePoint


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, n):
    return [SpacetimePoint(float(t), float(r), float(th), float(ph))
            for t, r, th, ph in zip(rng.uniform(0, 1, n), rng.uniform(1, 5, n),
                                    rng.uniform(0.4, 2.7, n), rng.uniform(0, 2 * math.pi, n))]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for n in sorted(REPORT):
            terminalreporter.write_line(REPORT[n])
