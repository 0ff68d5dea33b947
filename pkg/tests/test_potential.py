import math

import numpy as np
import pytest

from phaseint.errors import PotentialError, UnboundParameterError
from phaseint.potential import FAMILIES, Potential, builtin, from_expression, from_selector


def test_family_values():
    assert builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0}).r(2.0) == 0.0
    assert builtin("airy").r(4.0) == 4.0
    assert builtin("weber", {"a": 1.5}).r(0.0) == 1.5
    assert builtin("radial-free", {"k": 2.0, "l": 1}).r(1.0) == pytest.approx(2.0, abs=0)


def test_expression_matches_airy():
    rng = np.random.default_rng(3)
    zs = rng.uniform(-20, 20, 50)
    a, e = builtin("airy"), from_expression("z")
    assert np.array_equal(a.r(zs), e.r(zs))
    assert np.array_equal(a.dr(zs), e.dr(zs))


def test_expression_matches_coulomb():
    e = from_expression("2*(-0.5) + 2/z - 0", domain=(0, math.inf))
    c = builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0})
    zs = np.linspace(0.1, 20, 60)
    assert np.allclose(e.r(zs), c.r(zs), rtol=1e-15, atol=1e-15)
    assert e.singularities == (0.0,)


def test_unbound_parameter():
    with pytest.raises(UnboundParameterError):
        from_expression("k^2 - z")


def test_missing_family_parameter():
    with pytest.raises(PotentialError, match="missing"):
        builtin("weber")


def test_unknown_family():
    with pytest.raises(PotentialError, match="unknown potential family"):
        builtin("morse")


@pytest.mark.parametrize("name, params", [
    ("airy", {}), ("weber", {"a": 5.0}), ("coulomb", {"E": -0.3, "Z": 2.0, "l": 2}),
    ("radial-free", {"k": 1.5, "l": 3}),
])
def test_builtin_derivatives_consistent(name, params):
    p = builtin(name, params)
    p.check_consistency()
    zs = p.sample_points()
    assert len(zs) == 33


def test_inconsistent_derivative_rejected():
    bad = Potential(r=lambda z: z**2, dr=lambda z: 2.0 * z + 1e-3, d2r=lambda z: 2.0 + 0 * z,
                    singularities=(), domain=(-1.0, 1.0), label="bad")
    with pytest.raises(PotentialError, match="dr inconsistent"):
        bad.check_consistency()


def test_singularity_inside_domain_rejected():
    with pytest.raises(PotentialError):
        builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0}, domain=(-1.0, 1.0))


def test_with_params_rebinds():
    c = builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0})
    c2 = c.with_params(E=-0.125)
    assert c2.r(4.0) == pytest.approx(-0.25 + 0.5)
    assert c.params["E"] == -0.5
    e = from_expression("a - z^2/4", {"a": 1.0}).with_params(a=2.0)
    assert e.r(0.0) == 2.0


def test_selector_forms():
    assert from_selector("family:airy").label == from_selector("airy").label
    assert from_selector("expr:z^2", domain=(0, 1)).r(0.5) == 0.25
    with pytest.raises(PotentialError):
        from_selector("bogus:z")


def test_inside():
    c = builtin("coulomb", {"E": -0.5, "Z": 1, "l": 0})
    assert c.inside(1.0) and not c.inside(0.0) and not c.inside(-1.0)
    assert set(FAMILIES) == {"airy", "weber", "coulomb", "radial-free"}
