"""Base function Q(z) with Q^2 = R(z) + s(s-2)/(4 z^2).

The platform parameter ``s`` picks the base: ``s = 0`` keeps Q^2 = R,
``s = 1`` is the Kramers-Langer choice Q^2 = R - 1/(4z^2) and ``s = -2l``
drops the centrifugal term, Q^2 = R + l(l+1)/z^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, GuardError, PotentialError
from .potential import Potential

__all__ = ["BaseSpec", "BaseFunction", "PRESETS", "make_base", "turning_points", "roots_on_grid"]

PRESETS = ("unmodified", "kramers-langer", "no-centrifugal")
_FIXED_S = {"unmodified": 0.0, "kramers-langer": 1.0}


@dataclass(frozen=True)
class BaseSpec:
    """Platform parameter ``s`` or one of the named presets.

    ``no-centrifugal`` leaves ``s`` open until it is bound to a potential,
    whose ``l`` parameter then fixes ``s = -2l``.
    """

    s: float | None = None
    preset: str | None = None

    def __post_init__(self):
        if self.preset is not None and self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}; choose from {', '.join(PRESETS)}")
        if self.preset in _FIXED_S:
            if self.s is None:
                object.__setattr__(self, "s", _FIXED_S[self.preset])
            elif self.s != _FIXED_S[self.preset]:
                raise ValueError(f"preset {self.preset} requires s={_FIXED_S[self.preset]:g}")
        if self.s is None and self.preset is None:
            raise ValueError("give s or a preset")
        if self.s is not None and not math.isfinite(self.s):
            raise ValueError("s must be finite")

    @classmethod
    def from_preset(cls, name: str) -> "BaseSpec":
        return cls(preset=name)

    def resolve(self, potential: Potential) -> "BaseSpec":
        """Bind an open ``no-centrifugal`` preset to ``potential``."""
        if self.preset != "no-centrifugal":
            return self
        if "l" not in potential.params:
            raise PotentialError(
                f"preset no-centrifugal needs an 'l' parameter on {potential.label}"
            )
        s = -2.0 * float(potential.params["l"])
        if self.s is not None and self.s != s:
            raise ValueError(f"no-centrifugal preset: s={self.s:g} but -2l={s:g}")
        return BaseSpec(s=s, preset="no-centrifugal")

    @property
    def coefficient(self) -> float:
        """The constant s(s-2)/4 multiplying 1/z^2 in Q^2."""
        return self.s * (self.s - 2.0) / 4.0


@dataclass(frozen=True)
class BaseFunction:
    potential: Potential
    spec: BaseSpec
    q2_override: Potential | None = None

    @property
    def s(self) -> float:
        return self.spec.s

    @property
    def canonical(self) -> bool:
        return self.q2_override is None

    @property
    def experimental(self) -> bool:
        """Third-order results for an overridden Q^2 keep the mismatch term
        but have not been validated beyond the reduction check."""
        return not self.canonical

    def r(self, z):
        return self.potential.r(z)

    def _sterm(self, z, k):
        c = self.spec.coefficient
        if c == 0.0:
            return 0.0
        if np.any(np.asarray(z) == 0.0):
            raise DomainError(f"s={self.s:g} term is singular at z=0")
        return (c, -2.0 * c, 6.0 * c)[k] / np.power(z, 2 + k)

    def q2(self, z):
        if self.q2_override is not None:
            return self.q2_override.r(z)
        return self.potential.r(z) + self._sterm(z, 0)

    def dq2(self, z):
        if self.q2_override is not None:
            return self.q2_override.dr(z)
        return self.potential.dr(z) + self._sterm(z, 1)

    def d2q2(self, z):
        if self.q2_override is not None:
            return self.q2_override.d2r(z)
        return self.potential.d2r(z) + self._sterm(z, 2)

    def mismatch(self, z):
        """Q^2 - R - s(s-2)/(4z^2); identically zero for the canonical base."""
        if self.canonical:
            return np.zeros(np.shape(z))[()]
        return self.q2(z) - self.potential.r(z) - self._sterm(z, 0)

    def q(self, z):
        """Principal root +sqrt(Q^2); GuardError where Q^2 <= 0."""
        q2 = self.q2(z)
        if np.any(np.asarray(q2) <= 0.0):
            raise GuardError(f"Q^2 <= 0 (classically forbidden) at z={_first_bad(z, q2)}")
        return np.sqrt(q2)

    def dq(self, z):
        return self.dq2(z) / (2.0 * self.q(z))

    def d2q(self, z):
        q = self.q(z)
        dq = self.dq2(z) / (2.0 * q)
        return (0.5 * self.d2q2(z) - dq * dq) / q

    def derivatives(self, z):
        """(Q, Q', Q'') in one pass."""
        q = self.q(z)
        dq = self.dq2(z) / (2.0 * q)
        d2q = (0.5 * self.d2q2(z) - dq * dq) / q
        return q, dq, d2q


def _first_bad(z, q2):
    z = np.atleast_1d(z)
    bad = np.flatnonzero(np.atleast_1d(q2) <= 0.0)
    return float(z[bad[0]]) if z.size > 1 else float(z[0])


def make_base(p: Potential, spec: BaseSpec, q2_override: Potential | None = None) -> BaseFunction:
    """Compose Q^2 from ``p`` and ``spec``.

    ``q2_override`` replaces the canonical Q^2 by an arbitrary potential-like
    object; the third-order formulas then keep the mismatch term.
    """
    spec = spec.resolve(p)
    lo, hi = p.domain
    if spec.coefficient != 0.0 and lo < 0.0 < hi:
        raise PotentialError(
            f"s={spec.s:g} makes Q^2 singular at z=0, inside the domain of {p.label}"
        )
    return BaseFunction(p, spec, q2_override)


def _q2_safe(b: BaseFunction, zs):
    try:
        return np.asarray(b.q2(zs), dtype=float)
    except DomainError:
        out = np.empty(len(zs))
        for i, z in enumerate(zs):
            try:
                out[i] = b.q2(float(z))
            except DomainError:
                out[i] = np.nan
        return out


def turning_points(b: BaseFunction, interval, n_scan: int = 1024, spacing: str = "linear"):
    """Real zeros of Q^2 in ``interval``.

    Scans ``n_scan`` points (uniform, or geometric with ``spacing="log"``
    for ``0 < lo < hi``) for sign changes and refines each bracket by
    bisection to ``|dz| < 1e-12 max(1, |z|)``.  Brackets containing a
    declared singularity or an unevaluable point are skipped.  A tangential
    double root is reported as zero or two roots depending on what the
    scan sees.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    if n_scan < 2:
        raise ValueError("n_scan must be at least 2")
    if spacing == "log":
        if lo <= 0.0:
            raise ValueError("log spacing needs lo > 0")
        zs = np.geomspace(lo, hi, n_scan)
    else:
        zs = np.linspace(lo, hi, n_scan)
    return roots_on_grid(b, zs)


def roots_on_grid(b: BaseFunction, zs):
    """Bisection-refined zeros of Q^2 between sign changes on the sorted
    grid ``zs``."""
    zs = np.asarray(zs, dtype=float)
    vals = _q2_safe(b, zs)
    sing = b.potential.singularities
    roots = [float(z) for z in zs[vals == 0.0]]
    for i in np.flatnonzero(vals[:-1] * vals[1:] < 0.0):
        za, zc = float(zs[i]), float(zs[i + 1])
        if any(za <= s <= zc for s in sing):
            continue
        roots.append(bisect(b.q2, za, zc, xtol=5e-13, rtol=5e-13, maxiter=200))
    return sorted(roots)
