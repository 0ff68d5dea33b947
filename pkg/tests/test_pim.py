import math

import numpy as np
import pytest
from scipy import integrate as spi

from phaseint import platform as pf
from phaseint.base import BaseSpec, make_base
from phaseint.errors import BreakdownError, GuardError
from phaseint.pim import (
    ExpansionOrder, PhaseApprox, amplitude, evaluate_grid, phase, phase_direct, phase_increment,
    psi, psi_derivative, wavefunction, wronskian_check,
)
from phaseint.potential import builtin, from_expression

ORDERS = ("first", "third")


@pytest.mark.parametrize("order", ORDERS)
def test_plane_wave(unit_base, order):
    pa = PhaseApprox(unit_base, order, 0.0)
    assert phase(pa, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert amplitude(pa, 2.5) == 1.0
    plus, minus = wavefunction(pa, math.pi)
    assert plus == pytest.approx(-1.0, abs=1e-13) and minus == pytest.approx(-1.0, abs=1e-13)
    assert wronskian_check(pa, 0.3) < 1e-9


def test_airy_phase(airy0):
    first = PhaseApprox(airy0, "first", 1.0)
    third = PhaseApprox(airy0, "third", 1.0)
    assert phase(first, 4.0) == pytest.approx(14 / 3, abs=1e-12)
    assert phase(third, 4.0) == pytest.approx(14 / 3 + 35 / 384, abs=1e-12)
    assert phase(third, 4.0) == pytest.approx(4.7578125, abs=1e-12)


def test_third_order_phase_brute_force_oracle(airy0):
    # independent oracle: scipy quadrature of (1 - P^2/2) Q plus the boundary term
    third = PhaseApprox(airy0, "third", 1.0)
    for z in (2.0, 6.0, 9.5):
        integral, _ = spi.quad(lambda x: (1 - 0.5 * (0.25 * x**-1.5) ** 2) * math.sqrt(x), 1.0, z,
                               epsabs=1e-13, epsrel=1e-13)
        boundary = 0.5 * (-0.25 * z**-1.5 + 0.25)
        assert phase(third, z) == pytest.approx(integral + boundary, abs=1e-11)


def test_phase_matches_direct_quadrature(airy0, hydrogen_langer):
    for b, a, zs in ((airy0, 2.0, (1.0, 5.0, 10.0)), (hydrogen_langer, 1.0, (0.4, 0.8, 1.5))):
        for order in ORDERS:
            pa = PhaseApprox(b, order, a)
            for z in zs:
                assert phase(pa, z) == pytest.approx(phase_direct(pa, z), abs=1e-10)


def test_airy_amplitude(airy0):
    assert amplitude(PhaseApprox(airy0, "first", 1.0), 4.0) == pytest.approx(4**-0.25, rel=1e-14)
    third = amplitude(PhaseApprox(airy0, "third", 1.0), 4.0)
    # q3 = dP/2 + (1 - P^2/2) Q at z = 4 with P = -1/32, dP = 3/256
    q3 = 0.5 * 3 / 256 + (1 - 0.5 / 1024) * 2
    assert third == pytest.approx(q3**-0.5, rel=1e-14)
    assert third == pytest.approx(0.7062451910, abs=1e-10)


def test_wavefunction_modulus_and_phase(airy0):
    pa = PhaseApprox(airy0, "third", 1.0)
    plus, minus = wavefunction(pa, 4.0)
    assert abs(plus) == pytest.approx(amplitude(pa, 4.0), rel=1e-15)
    assert np.angle(plus) == pytest.approx(4.7578125 - 2 * math.pi, abs=1e-12)
    assert minus == pytest.approx(np.conj(plus), abs=1e-15)
    assert psi(PhaseApprox(airy0, "third", 1.0, branch=-1), 4.0) == minus


@pytest.mark.parametrize("order", ORDERS)
def test_wronskian_airy(airy0, order):
    pa = PhaseApprox(airy0, order, 5.0)
    for z in np.linspace(2, 10, 9):
        assert wronskian_check(pa, z) < 1e-7


def test_wronskian_weber():
    b = make_base(builtin("weber", {"a": 5.0}), BaseSpec(s=0))
    for order in ORDERS:
        assert wronskian_check(PhaseApprox(b, order, 1.0), 0.0) < 1e-7


def test_anchor_invariance(airy0, hydrogen_langer):
    for b, (a1, a2), zs in ((airy0, (2.0, 5.0), (1.5, 3.0, 9.0)),
                            (hydrogen_langer, (0.6, 1.2), (0.4, 1.0, 1.6))):
        p1, p2 = PhaseApprox(b, "third", a1), PhaseApprox(b, "third", a2)
        offset = phase(p1, a2)
        for z in zs:
            assert abs(phase(p1, z) - phase(p2, z) - offset) < 1e-9


def test_order_consistency(airy0):
    # third-order corrections shrink like z^{-3/2} relative to the first-order phase density
    first, third = PhaseApprox(airy0, "first", 5.0), PhaseApprox(airy0, "third", 5.0)
    diffs = [abs(phase_increment(third, z, z + 1) - phase_increment(first, z, z + 1)) for z in (2, 4, 8)]
    assert diffs[0] > diffs[1] > diffs[2]


def test_guard_errors(airy0, hydrogen_langer):
    with pytest.raises(GuardError):
        PhaseApprox(airy0, "third", 0.0)
    pa = PhaseApprox(airy0, "third", 1.0)
    with pytest.raises(GuardError):
        phase(pa, -1.0)
    with pytest.raises(GuardError):
        phase(PhaseApprox(hydrogen_langer, "first", 1.0), 2.5)


def test_breakdown():
    # a narrow, deep well in Q^2: the third-order q_eff turns negative at its bottom
    b = make_base(from_expression("0.05 + z^2"), BaseSpec(s=0))
    pa = PhaseApprox(b, "third", 2.0)
    assert amplitude(PhaseApprox(b, "first", 2.0), 0.0) > 0
    assert amplitude(pa, 2.0) > 0
    with pytest.raises(BreakdownError) as info:
        amplitude(pa, np.array([2.0, 1.0, 0.0]))
    assert info.value.z == 0.0


def test_order_coercion():
    assert ExpansionOrder.coerce("3") is ExpansionOrder.THIRD
    with pytest.raises(ValueError):
        ExpansionOrder.coerce("fifth")


def test_evaluate_grid_matches_pointwise(airy0):
    pa = PhaseApprox(airy0, "third", 4.0)
    zs = np.array([6.0, 1.0, 4.0, 2.5, 9.0])
    amps, phases = evaluate_grid(pa, zs)
    for z, a, w in zip(zs, amps, phases):
        assert a == amplitude(pa, z)
        assert w == pytest.approx(phase(pa, z), abs=1e-12)


def test_psi_derivative_first_order_plane_wave(unit_base):
    pa = PhaseApprox(unit_base, "first", 0.0)
    assert psi_derivative(pa, 0.7) == pytest.approx(1j * np.exp(0.7j), abs=1e-9)


def test_override_phase_includes_mismatch():
    pot = builtin("airy", domain=(0.0, math.inf))
    b = make_base(pot, BaseSpec(s=0), q2_override=from_expression("z + 1/z", domain=(0.0, math.inf)))
    pa = PhaseApprox(b, "third", 2.0)
    for z in (1.0, 4.0):
        assert phase(pa, z) == pytest.approx(phase_direct(pa, z), abs=1e-10)
    assert pf.y2(b, 2.0) != pytest.approx(pf.y2(make_base(pot, BaseSpec(s=0)), 2.0))
