import math

import numpy as np
import pytest

from phaseint.base import BaseSpec, make_base, turning_points
from phaseint.errors import GuardError, PotentialError
from phaseint.potential import builtin, from_expression

INF = math.inf


def test_unmodified_base():
    b = make_base(builtin("airy"), BaseSpec(s=0))
    assert b.q2(4.0) == 4.0
    assert b.q(4.0) == 2.0


def test_kramers_langer_base():
    b = make_base(from_expression("1", domain=(0, INF)), BaseSpec(preset="kramers-langer"))
    assert b.s == 1.0
    assert b.q2(1.0) == 0.75


def test_no_centrifugal_base():
    p = from_expression("0*l", {"l": 1}, domain=(0, INF))
    b = make_base(p, BaseSpec(preset="no-centrifugal"))
    assert b.s == -2.0
    assert b.q2(2.0) == 0.5


def test_no_centrifugal_removes_barrier():
    b = make_base(builtin("radial-free", {"k": 1.3, "l": 2}), BaseSpec(preset="no-centrifugal"))
    zs = np.linspace(0.2, 30, 50)
    assert np.allclose(b.q2(zs), 1.3**2, rtol=1e-14, atol=0)


def test_langer_replaces_l_l_plus_1():
    l = 3
    b = make_base(builtin("coulomb", {"E": -0.1, "Z": 1, "l": l}), BaseSpec(s=1))
    zs = np.linspace(0.5, 40, 50)
    expected = -0.2 + 2 / zs - (l + 0.5) ** 2 / zs**2
    assert np.allclose(b.q2(zs), expected, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("s", [-3.0, -1.0, 0.5, 2.0, 4.0])
def test_q2_derivatives_consistent(s):
    from phaseint.numdiff import fd_derivative

    b = make_base(builtin("coulomb", {"E": -0.5, "Z": 1, "l": 1}), BaseSpec(s=s))
    for z in (0.7, 1.5, 3.0):
        assert b.dq2(z) == pytest.approx(fd_derivative(b.q2, z), rel=1e-8, abs=1e-9)
        assert b.d2q2(z) == pytest.approx(fd_derivative(b.dq2, z), rel=1e-8, abs=1e-9)


def test_s_zero_and_two_share_q2():
    p = builtin("coulomb", {"E": -0.5, "Z": 1, "l": 1})
    zs = np.linspace(0.5, 5, 9)
    assert np.array_equal(make_base(p, BaseSpec(s=0)).q2(zs), make_base(p, BaseSpec(s=2)).q2(zs))


def test_q_guard():
    b = make_base(builtin("airy"), BaseSpec(s=0))
    with pytest.raises(GuardError):
        b.q(-1.0)


def test_nonzero_s_needs_origin_outside_domain():
    with pytest.raises(PotentialError):
        make_base(builtin("airy"), BaseSpec(s=1))


def test_preset_validation():
    with pytest.raises(ValueError):
        BaseSpec(preset="langer")
    with pytest.raises(ValueError):
        BaseSpec()
    with pytest.raises(PotentialError):
        make_base(builtin("airy", domain=(0, INF)), BaseSpec(preset="no-centrifugal"))


def test_turning_points_airy():
    b = make_base(builtin("airy"), BaseSpec(s=0))
    assert turning_points(b, (-1, 1)) == [0.0]


def test_turning_points_hydrogen_langer():
    b = make_base(builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0}), BaseSpec(s=1))
    # oracle: r^2 Q^2 = -r^2 + 2r - 1/4, quadratic formula
    expected = sorted(np.roots([-1.0, 2.0, -0.25]).real)
    tps = turning_points(b, (0.01, 10))
    assert len(tps) == 2
    for got, want in zip(tps, expected):
        assert abs(got - want) < 1e-12
    assert turning_points(b, (0.01, 10), spacing="log") == pytest.approx(tps, abs=1e-12)


def test_no_turning_points():
    b = make_base(from_expression("1"), BaseSpec(s=0))
    assert turning_points(b, (0, 1)) == []


def test_weber_turning_points():
    b = make_base(builtin("weber", {"a": 5.0}), BaseSpec(s=0))
    tps = turning_points(b, (-10, 10))
    # documented accuracy is 1e-12 max(1, |z|)
    assert tps == pytest.approx([-math.sqrt(20), math.sqrt(20)], abs=5e-12)


def test_turning_points_skip_singularity():
    b = make_base(from_expression("1/z - 1", domain=(0, INF)), BaseSpec(s=0))
    assert turning_points(b, (1e-3, 5)) == pytest.approx([1.0], abs=1e-12)
