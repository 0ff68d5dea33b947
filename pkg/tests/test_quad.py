import math

import numpy as np
import pytest

from phaseint.errors import QuadratureError
from phaseint.quad import integrate, integrate_to_turning_point


def test_constant_exact():
    r = integrate(lambda z: np.ones_like(z), 0.0, 1.0)
    assert r.value == 1.0
    assert r.error_estimate <= 1e-12


def test_sqrt():
    r = integrate(np.sqrt, 1.0, 4.0)
    assert abs(r.value - 14 / 3) < 1e-12
    assert r.error_estimate <= max(1e-12, 1e-10 * abs(r.value))


def test_orientation():
    assert integrate(np.sqrt, 4.0, 1.0).value == -integrate(np.sqrt, 1.0, 4.0).value
    assert integrate(np.sqrt, 2.0, 2.0).value == 0.0


def test_polynomial_exact():
    r = integrate(lambda z: z**10 - 3 * z**3, -1.0, 2.0)
    assert r.value == pytest.approx((2**11 + 1) / 11 - 0.75 * (16 - 1), rel=1e-15)


def test_deterministic():
    f = lambda z: np.sin(30 * z) * np.exp(-z)
    a, b = integrate(f, 0, 5), integrate(f, 0, 5)
    assert a.value == b.value and a.evaluations == b.evaluations


def test_oscillatory():
    r = integrate(np.cos, 0.0, 50.0)
    assert abs(r.value - math.sin(50.0)) < 1e-11


def test_inverse_sqrt_near_guard():
    a = 1e-8
    r = integrate(lambda z: z**-0.5, a, 1.0, abs_tol=1e-10, rel_tol=1e-10)
    assert abs(r.value - 2 * (1 - math.sqrt(a))) < 1e-8
    assert r.value == pytest.approx(1.9998, abs=1e-4)


def test_subdivision_limit():
    with pytest.raises(QuadratureError):
        integrate(lambda z: np.abs(z) ** -0.999, 1e-300, 1.0, max_evaluations=2000)


def test_non_finite_integrand():
    with pytest.raises(QuadratureError), np.errstate(all="ignore"):
        integrate(lambda z: 1.0 / np.asarray(z), 0.0, 1.0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        integrate(np.sqrt, 0.0, math.inf)
    with pytest.raises(ValueError):
        integrate(np.sqrt, 0.0, 1.0, abs_tol=0.0)


def test_to_turning_point():
    r = integrate_to_turning_point(lambda z: np.sqrt(1 - z), 0.0, 1.0)
    assert abs(r.value - 2 / 3) < 1e-10
    # approach the turning point z = 0 of Q = sqrt(z) from the allowed side
    r = integrate_to_turning_point(np.sqrt, 0.25, 0.0)
    assert abs(r.value + 1 / 12) < 1e-12


def test_to_inverse_sqrt_endpoint():
    r = integrate_to_turning_point(lambda z: np.asarray(z) ** -0.5, 1.0, 0.0)
    assert abs(r.value + 2.0) < 1e-12


def test_half_circle_area():
    f = lambda z: np.sqrt(np.clip(1 - z * z, 0, None))
    total = integrate_to_turning_point(f, 0.0, 1.0).value - integrate_to_turning_point(f, 0.0, -1.0).value
    assert abs(total - math.pi / 2) < 1e-12
