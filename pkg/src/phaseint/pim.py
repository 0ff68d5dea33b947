"""First- and third-order phase-integral approximations

    psi_pm(z) = q_eff(z)^{-1/2} exp(+-i phase(z))

anchored at a regular point ``z_a``.  First order uses q_eff = Q and
phase = int Q dz.  Third order uses q_eff = Q (1 + Y_2), and because
Q dP_s/dzeta = dP_s/dz is a total derivative its phase is evaluated as

    phase = [P_s/2]_{z_a}^{z} + int_{z_a}^{z} (1 - P_s^2/2) Q dz

(minus int mismatch/(2Q) dz for a non-canonical base).  The turning point
itself cannot be the anchor because P_s diverges there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import platform as pf
from .base import BaseFunction
from .errors import BreakdownError, GuardError
from .quad import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, integrate

__all__ = [
    "ExpansionOrder",
    "PhaseApprox",
    "phase",
    "phase_direct",
    "phase_increment",
    "effective_momentum",
    "amplitude",
    "wavefunction",
    "psi",
    "psi_derivative",
    "wronskian_check",
    "evaluate_grid",
]

_SCAN_POINTS = 65


class ExpansionOrder(str, enum.Enum):
    """Truncation of q/Q = Y_0 + Y_2 + ... after Y_0 or Y_2."""

    FIRST = "first"
    THIRD = "third"

    @classmethod
    def coerce(cls, value) -> "ExpansionOrder":
        if isinstance(value, cls):
            return value
        aliases = {"1": cls.FIRST, "3": cls.THIRD, "first": cls.FIRST, "third": cls.THIRD}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"order must be first or third, not {value!r}") from None


@dataclass(frozen=True)
class PhaseApprox:
    base: BaseFunction
    order: ExpansionOrder
    anchor: float
    branch: int = 1
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self):
        object.__setattr__(self, "order", ExpansionOrder.coerce(self.order))
        object.__setattr__(self, "anchor", float(self.anchor))
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        _check_point(self.base, self.anchor, "anchor")

    @property
    def third(self) -> bool:
        return self.order is ExpansionOrder.THIRD


def _check_point(b: BaseFunction, z, what="z"):
    if not b.potential.inside(z):
        raise GuardError(f"{what}={z!r} outside the domain {b.potential.domain}")
    q2 = float(b.q2(z))
    if q2 <= pf.GUARD:
        raise GuardError(
            f"{what}={z!r} is at a turning point or in a forbidden region (Q^2={q2:.3g})"
        )


def _check_interval(b: BaseFunction, z0, z1):
    lo, hi = min(z0, z1), max(z0, z1)
    for z in (z0, z1):
        _check_point(b, z)
    for s in b.potential.singularities:
        if lo <= s <= hi:
            raise GuardError(f"[{lo!r}, {hi!r}] contains the singular point z={s!r}")
    if b.s != 0.0 and lo <= 0.0 <= hi:
        raise GuardError(f"[{lo!r}, {hi!r}] contains z=0 where P_s is singular")
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    q2 = np.asarray(b.q2(grid))
    if np.any(q2 <= pf.GUARD):
        bad = float(grid[np.flatnonzero(q2 <= pf.GUARD)[0]])
        raise GuardError(
            f"[{lo!r}, {hi!r}] crosses a turning point or forbidden region near z={bad!r}"
        )


def _integrand(pa: PhaseApprox):
    b = pa.base
    if not pa.third:
        return b.q

    def f(z):
        q, _, _, p, _ = pf._terms(b, z)
        out = (1.0 - 0.5 * p * p) * q
        if not b.canonical:
            out = out - b.mismatch(z) / (2.0 * q)
        return out

    return f


def phase_increment(pa: PhaseApprox, z0: float, z1: float, check=True) -> float:
    """Phase accumulated from ``z0`` to ``z1``."""
    z0, z1 = float(z0), float(z1)
    if check:
        _check_interval(pa.base, z0, z1)
    res = integrate(_integrand(pa), z0, z1, pa.abs_tol, pa.rel_tol).value
    if pa.third:
        p0, p1 = pf.platform_value(pa.base, np.array([z0, z1]))
        res += 0.5 * (p1 - p0)
    return res


def phase(pa: PhaseApprox, z: float) -> float:
    """Phase measured from the anchor."""
    return phase_increment(pa, pa.anchor, z)


def phase_direct(pa: PhaseApprox, z: float) -> float:
    """int_{anchor}^{z} Q (1 + Y_2) dz by plain quadrature.

    Cross-check for :func:`phase`; it integrates the total-derivative piece
    numerically instead of taking the boundary term.
    """
    _check_interval(pa.base, pa.anchor, z)
    b = pa.base
    if not pa.third:
        f = b.q
    else:
        def f(x):
            return b.q(x) * (1.0 + pf.y2(b, x))
    return integrate(f, pa.anchor, z, pa.abs_tol, pa.rel_tol).value


def effective_momentum(pa: PhaseApprox, z):
    """Q for first order; dP_s/dz/2 + (1 - P_s^2/2) Q - mismatch/(2Q) for third."""
    b = pa.base
    if not pa.third:
        pf._guard(b, z)
        return b.q(z)
    q, _, _, p, dp = pf._terms(b, z)
    out = 0.5 * dp + (1.0 - 0.5 * p * p) * q
    if not b.canonical:
        out = out - b.mismatch(z) / (2.0 * q)
    return out


def amplitude(pa: PhaseApprox, z):
    """q_eff^{-1/2}; BreakdownError where the third-order q_eff <= 0."""
    qe = effective_momentum(pa, z)
    if np.any(np.asarray(qe) <= 0.0):
        zz = np.atleast_1d(z)
        bad = float(zz[np.flatnonzero(np.atleast_1d(qe) <= 0.0)[0]])
        raise BreakdownError(
            f"third-order effective momentum {np.min(qe):.3g} <= 0 at z={bad!r}; "
            "the approximation has broken down",
            z=bad,
        )
    return 1.0 / np.sqrt(qe)


def wavefunction(pa: PhaseApprox, z: float):
    """(psi_plus, psi_minus) at ``z``."""
    amp = amplitude(pa, z)
    w = phase(pa, z)
    return amp * np.exp(1j * w), amp * np.exp(-1j * w)


def psi(pa: PhaseApprox, z: float) -> complex:
    """The branch selected by ``pa.branch``."""
    plus, minus = wavefunction(pa, z)
    return plus if pa.branch > 0 else minus


def _local_pair(pa, z, w, dz):
    zz = z + dz
    amp = float(amplitude(pa, zz))
    wz = w + phase_increment(pa, z, zz, check=False)
    return amp * np.exp(1j * wz), amp * np.exp(-1j * wz)


def _pair_derivative(pa: PhaseApprox, z: float, w: float):
    """d/dz of (psi_plus, psi_minus) by Richardson-extrapolated central
    differences; neighbouring phases come from short local increments so
    the anchor quadrature error does not enter the difference."""
    h = 1e-6 * max(1.0, abs(z))

    def central(step):
        fp = _local_pair(pa, z, w, step)
        fm = _local_pair(pa, z, w, -step)
        return np.array([(fp[k] - fm[k]) / (2.0 * step) for k in (0, 1)])

    coarse, fine = central(h), central(0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def psi_derivative(pa: PhaseApprox, z: float) -> complex:
    """d psi/dz of the selected branch (numerical, see _pair_derivative)."""
    w = phase(pa, z)
    d = _pair_derivative(pa, z, w)
    return complex(d[0] if pa.branch > 0 else d[1])


def wronskian_check(pa: PhaseApprox, z: float) -> float:
    """|W + 2i| with W = psi_+ psi_-' - psi_- psi_+' differenced numerically."""
    z = float(z)
    w = phase(pa, z)
    amp = float(amplitude(pa, z))
    plus, minus = amp * np.exp(1j * w), amp * np.exp(-1j * w)
    dplus, dminus = _pair_derivative(pa, z, w)
    wr = plus * dminus - minus * dplus
    return float(abs(wr + 2j))


def evaluate_grid(pa: PhaseApprox, zs):
    """Amplitudes and phases on a grid, integrating segment by segment
    outwards from the anchor.  Returns two arrays in the order of ``zs``."""
    zs = np.asarray(zs, dtype=float)
    amps = np.asarray(amplitude(pa, zs), dtype=float).reshape(zs.shape)
    phases = np.empty_like(zs)
    order = np.argsort(zs, kind="stable")
    sorted_z = zs[order]
    right = sorted_z >= pa.anchor
    for idx in (np.flatnonzero(right), np.flatnonzero(~right)[::-1]):
        prev, acc = pa.anchor, 0.0
        for k in idx:
            z = sorted_z[k]
            acc += phase_increment(pa, prev, z)
            prev = z
            phases[order[k]] = acc
    return amps, phases
