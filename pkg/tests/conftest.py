import numpy as np
import pytest

from mobius_stability import NormalizedMobius, normalize


def random_elliptic(rng, real=False, margin=0.05):
    """Random det-1 map with real trace in (-2 + margin, 2 - margin)."""
    t = rng.uniform(-2 + margin, 2 - margin)
    if real:
        a = rng.normal()
        c = rng.choice([-1, 1]) * rng.uniform(0.2, 3.0)
    else:
        a = complex(rng.normal(), rng.normal())
        c = rng.uniform(0.2, 3.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    d = t - a
    b = (a * d - 1) / c
    return NormalizedMobius(a, b, c, d)


def random_map(rng):
    while True:
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        try:
            return normalize(tuple(coeffs))
        except ValueError:
            continue


def random_points(rng, count, scale=2.0):
    return scale * (rng.normal(size=count) + 1j * rng.normal(size=count))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
