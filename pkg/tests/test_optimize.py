import math

import numpy as np
import pytest

from satgeo.errors import BracketError, SolverFailure
from satgeo.optimize import (bisect_root, damped_newton, golden_max, golden_min,
                             numeric_jacobian)


def test_bisect_root_basic():
    r = bisect_root(lambda x: x * x - 2, 0.0, 2.0)
    assert r == pytest.approx(math.sqrt(2), rel=1e-13)
    assert bisect_root(lambda x: x, -1.0, 3.0, atol=1e-12, rtol=0) == pytest.approx(0, abs=1e-12)
    with pytest.raises(BracketError):
        bisect_root(lambda x: x * x + 1, -1.0, 1.0)


def test_bisect_root_endpoint_roots():
    assert bisect_root(lambda x: x - 1.0, 1.0, 2.0) == 1.0
    assert bisect_root(lambda x: x - 2.0, 1.0, 2.0) == 2.0


def test_golden_section():
    # comparison-based search resolves a quadratic minimum only to sqrt(eps)
    x, fx = golden_min(lambda t: (t - 0.3) ** 2 + 1, 0.0, 1.0, xtol=1e-12)
    assert x == pytest.approx(0.3, abs=5e-8)
    assert fx == pytest.approx(1.0)
    x, fx = golden_max(lambda t: -(t - 0.7) ** 2, 0.0, 1.0, xtol=1e-12)
    assert x == pytest.approx(0.7, abs=5e-8)


def test_numeric_jacobian_quadratic():
    F = lambda x: np.array([x[0] ** 2 + x[1], 3 * x[0] - x[1] ** 3])
    J = numeric_jacobian(F, np.array([1.0, 2.0]))
    assert J == pytest.approx(np.array([[2.0, 1.0], [3.0, -12.0]]), rel=1e-6)


def test_damped_newton_2d():
    F = lambda x: np.array([x[0] ** 2 + x[1] ** 2 - 1, x[0] - x[1]])
    x, r, iters = damped_newton(F, [0.9, 0.1])
    assert x == pytest.approx(np.array([1, 1]) / math.sqrt(2), rel=1e-10)
    assert np.abs(r).max() < 1e-12


def test_damped_newton_reports_failure_with_trace():
    F = lambda x: np.array([x[0] ** 2 + 1.0])
    with pytest.raises(SolverFailure) as exc:
        damped_newton(F, [1.0], maxiter=10)
    assert len(exc.value.trace) >= 1
