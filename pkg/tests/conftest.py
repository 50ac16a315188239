import os
import random

import pytest
from hypothesis import HealthCheck, settings

from brunonf.derivation import LogDerivation, from_vector_components, random_log_derivation
from brunonf.scalars import QQ, QQI
from brunonf.series import Automorphism, Series

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = {}


def record(number, passed, detail=""):
    CRITERIA[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def example_two(N):
    """i x dx - i y dy + (xy - z^2)(x dx + y dy + z dz) over QQ(i)."""
    x, y, z = [Series.var(i, 3, N + 1, QQI) for i in range(3)]
    h = x * y - z * z
    return from_vector_components([x.scale(QQI.I) + h * x, y.scale(-QQI.I) + h * y, h * z], N)


def random_resonant_field(rng, lam, N, degree=3, field=QQ, density=0.5):
    n = len(lam)
    return LogDerivation.diagonal(lam, N, field) + random_log_derivation(
        rng, n, N, field, degree, density=density, coeff_range=3)


def random_log_automorphism(rng, n, N, field=QQ, degree=2, coeff_range=2):
    """Polynomial logarithmic map x_i -> x_i (1 + p_i), tangent to the identity."""
    from brunonf.series import random_series

    units = []
    for _ in range(n):
        p = random_series(rng, n, N, field, degree, density=0.5, coeff_range=coeff_range,
                          min_degree=1)
        units.append(Series.one(n, N, field) + p)
    return Automorphism.logarithmic(units)


@pytest.fixture
def rng():
    return random.Random(20240601)
