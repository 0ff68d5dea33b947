"""First-order phase-integral quantization

    int_{r1}^{r2} Q dz = (n_r + 1/2) pi

between the two turning points of a bound state.  With the Kramers-Langer
base (s = 1) this reproduces the hydrogen spectrum -Z^2/(2n^2) exactly.

Only first order is supported: the third-order boundary term P_s/2 diverges
at the turning points, and the proper higher-order condition needs complex
contours around them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .base import BaseSpec, make_base, roots_on_grid
from .errors import BracketError, NoAllowedRegionError, TurningPointCountError
from .potential import Potential, builtin
from .quad import integrate_to_turning_point

__all__ = ["BoundStateProblem", "action", "eigenvalue", "bohr_energy", "default_bracket"]

_SCAN_POINTS = 4096
ENERGY_XTOL = 1e-11


def _scan_grid(domain, n=_SCAN_POINTS):
    lo, hi = domain
    if math.isinf(lo) and math.isinf(hi):
        half = np.geomspace(1e-6, 1e6, n // 2)
        return np.concatenate([-half[::-1], [0.0], half])
    if math.isinf(hi):
        return lo + np.geomspace(1e-6, 1e6, n) * max(1.0, abs(lo))
    if math.isinf(lo):
        return hi - np.geomspace(1e-6, 1e6, n)[::-1] * max(1.0, abs(hi))
    return np.linspace(lo, hi, n + 2)[1:-1]


def _allowed_region(b, interval=None):
    """(left, right, left_is_singular, right_is_singular) of the single
    bounded classically allowed region."""
    p = b.potential
    if interval is None:
        zs = _scan_grid(p.domain)
    else:
        zs = np.linspace(float(interval[0]), float(interval[1]), _SCAN_POINTS)
    roots = roots_on_grid(b, zs)
    q2_first = float(b.q2(zs[0]))
    q2_last = float(b.q2(zs[-1]))
    lo, hi = p.domain
    left_sing = lo in p.singularities and interval is None and q2_first > 0.0
    right_sing = hi in p.singularities and interval is None and q2_last > 0.0

    if len(roots) == 2 and not left_sing and not right_sing:
        r1, r2 = roots
        if float(b.q2(0.5 * (r1 + r2))) > 0.0:
            return r1, r2, False, False
    if len(roots) == 1 and left_sing and q2_last < 0.0:
        return lo, roots[0], True, False
    if len(roots) == 1 and right_sing and q2_first < 0.0:
        return roots[0], hi, False, True
    if not roots and q2_first < 0.0 and q2_last < 0.0 and np.all(np.asarray(b.q2(zs)) < 0.0):
        raise NoAllowedRegionError(f"no classically allowed region for {p.label}")
    raise TurningPointCountError(
        f"{p.label}: expected one allowed region between two turning points, "
        f"found turning points {roots}"
    )


def action(p: Potential, spec: BaseSpec, E: float, interval=None,
           abs_tol: float = 1e-12) -> float:
    """int Q dz over the allowed region at energy ``E``.

    ``E`` is bound as the potential's ``E`` parameter.  The integral is split
    at the midpoint and each half is taken towards its turning point with
    the square-root substitution.  An integrable singular endpoint at the
    domain edge (Q^2 ~ 1/z, e.g. Coulomb with s = 0 and l = 0) is accepted in
    place of an inner turning point.
    """
    pe = p.with_params(E=float(E))
    b = make_base(pe, spec)
    left, right, _, _ = _allowed_region(b, interval)

    def momentum(z):
        return np.sqrt(np.clip(b.q2(z), 0.0, None))

    mid = 0.5 * (left + right)
    inner = integrate_to_turning_point(momentum, mid, left, abs_tol).value
    outer = integrate_to_turning_point(momentum, mid, right, abs_tol).value
    return outer - inner


@dataclass(frozen=True)
class BoundStateProblem:
    potential: Potential
    n_r: int
    spec: BaseSpec = field(default_factory=lambda: BaseSpec(s=1.0))

    def __post_init__(self):
        if int(self.n_r) != self.n_r or self.n_r < 0:
            raise ValueError("n_r must be a non-negative integer")

    @classmethod
    def hydrogen(cls, Z: float = 1.0, l: float = 0, n_r: int = 0, spec: BaseSpec | None = None):
        pot = builtin("coulomb", {"E": -0.5 * Z * Z, "Z": Z, "l": l})
        return cls(pot, n_r, spec if spec is not None else BaseSpec(s=1.0))

    @property
    def target(self) -> float:
        return (self.n_r + 0.5) * math.pi


def _mismatch(prob: BoundStateProblem, E: float) -> float:
    try:
        a = action(prob.potential, prob.spec, E)
    except NoAllowedRegionError:
        a = 0.0
    return a - prob.target


def default_bracket(prob: BoundStateProblem):
    """Energy window for Coulomb-type problems: [-10 Z^2, -1e-4 Z^2]."""
    Z = prob.potential.params.get("Z")
    if Z is None:
        raise BracketError("no default energy bracket for this potential; pass one")
    Z2 = float(Z) ** 2
    return (-10.0 * Z2, -1e-4 * Z2)


def eigenvalue(prob: BoundStateProblem, bracket=None) -> float:
    """Energy with action(E) = (n_r + 1/2) pi, by bisection to |dE| < 1e-11."""
    lo, hi = default_bracket(prob) if bracket is None else map(float, bracket)
    glo, ghi = _mismatch(prob, lo), _mismatch(prob, hi)
    if glo * ghi > 0.0:
        raise BracketError(
            f"action - (n_r+1/2)pi has the same sign at E={lo!r} ({glo:.3g}) "
            f"and E={hi!r} ({ghi:.3g})"
        )
    return bisect(lambda E: _mismatch(prob, E), lo, hi, xtol=0.5 * ENERGY_XTOL, maxiter=200)


def bohr_energy(Z: float, n: int) -> float:
    """-Z^2/(2 n^2), the exact hydrogenic level."""
    return -0.5 * Z * Z / (n * n)
