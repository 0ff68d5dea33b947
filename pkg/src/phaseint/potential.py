"""The coefficient function R(z) of psi'' + R(z) psi = 0.

A :class:`Potential` bundles vectorised evaluators for R, R' and R'' with
its real domain and declared singular points.  Built-in families carry
hand-written derivatives; parsed expressions get theirs symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import expr as ex
from .errors import DomainError, PotentialError, UnboundParameterError
from .numdiff import fd_derivative

__all__ = ["Potential", "builtin", "from_expression", "from_selector", "FAMILIES"]

INF = math.inf
CONSISTENCY_RTOL = 1e-8
N_CONSISTENCY_POINTS = 33


@dataclass(frozen=True)
class Potential:
    r: Callable
    dr: Callable
    d2r: Callable
    singularities: tuple[float, ...]
    domain: tuple[float, float]
    label: str
    params: Mapping[str, float] = field(default_factory=dict)
    rebuild: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise PotentialError(f"empty domain {self.domain}")
        for zs in self.singularities:
            if lo < zs < hi:
                raise PotentialError(
                    f"{self.label}: singularity at z={zs} lies inside the domain {self.domain}"
                )

    def with_params(self, **updates) -> "Potential":
        """Same family or expression with some parameters rebound."""
        if self.rebuild is None:
            raise PotentialError(f"{self.label}: parameters cannot be rebound")
        return self.rebuild({**self.params, **updates})

    def inside(self, z) -> bool:
        lo, hi = self.domain
        z = np.asarray(z)
        return bool(np.all((z > lo) & (z < hi)))

    def check_consistency(self, points=None):
        """Compare dr and d2r with finite differences of r and dr.

        Raises PotentialError on a relative mismatch above 1e-8 (scaled by
        max(|derivative|, |function|, 1) so that zeros of the derivative do
        not demand impossible relative accuracy).
        """
        points = self.sample_points() if points is None else np.asarray(points, dtype=float)
        for f, df, name in ((self.r, self.dr, "dr"), (self.dr, self.d2r, "d2r")):
            try:
                exact = np.asarray(df(points), dtype=float) * np.ones_like(points)
                approx = fd_derivative(f, points)
                scale = np.maximum(np.maximum(np.abs(exact), np.abs(f(points))), 1.0)
            except DomainError as err:
                raise PotentialError(
                    f"{self.label}: not evaluable on the interior sample points: {err}"
                ) from err
            bad = np.flatnonzero(np.abs(exact - approx) > CONSISTENCY_RTOL * scale)
            if bad.size:
                i = bad[0]
                raise PotentialError(
                    f"{self.label}: {name} inconsistent at z={points[i]!r}: "
                    f"analytic {exact[i]!r}, finite difference {approx[i]!r}"
                )

    def sample_points(self, n=N_CONSISTENCY_POINTS):
        lo, hi = self.domain
        if math.isinf(lo) and math.isinf(hi):
            pts = np.linspace(-10.0, 10.0, n)
        elif math.isinf(hi):
            pts = lo + np.geomspace(0.1, 10.0, n) * max(1.0, abs(lo))
        elif math.isinf(lo):
            pts = hi - np.geomspace(0.1, 10.0, n) * max(1.0, abs(hi))
        else:
            pts = np.linspace(lo, hi, n + 2)[1:-1]
        # keep the finite-difference stencil off the singular points
        keep = [z for z in pts if all(abs(z - s) > 1e-3 * max(1.0, abs(z)) for s in self.singularities)]
        return np.array(keep)


def _no_zero(z, label):
    if np.any(np.asarray(z) == 0.0):
        raise DomainError(f"{label} is singular at z=0")
    return z


def _constant(c):
    return lambda z: np.full(np.shape(z), c)[()]


def _require(params, names, family):
    missing = [n for n in names if n not in params]
    if missing:
        raise PotentialError(f"{family}: missing parameter(s) {', '.join(missing)}")
    for n in names:
        if not math.isfinite(float(params[n])):
            raise PotentialError(f"{family}: parameter {n} must be finite")
    return [float(params[n]) for n in names]


def _airy(params):
    return dict(
        r=lambda z: np.add(z, 0.0),
        dr=_constant(1.0),
        d2r=_constant(0.0),
        singularities=(),
        domain=(-INF, INF),
        label="airy",
    )


def _weber(params):
    (a,) = _require(params, ["a"], "weber")
    return dict(
        r=lambda z: a - 0.25 * np.square(z),
        dr=lambda z: -0.5 * np.asarray(z, dtype=float),
        d2r=_constant(-0.5),
        singularities=(),
        domain=(-INF, INF),
        label=f"weber(a={a:g})",
    )


def _coulomb(params):
    E, Z, l = _require(params, ["E", "Z", "l"], "coulomb")
    L = l * (l + 1.0)
    lab = "coulomb"

    def r(z):
        z = _no_zero(z, lab)
        return 2.0 * E + 2.0 * Z / z - L / (z * z)

    def dr(z):
        z = _no_zero(z, lab)
        return -2.0 * Z / (z * z) + 2.0 * L / z**3

    def d2r(z):
        z = _no_zero(z, lab)
        return 4.0 * Z / z**3 - 6.0 * L / z**4

    return dict(
        r=r, dr=dr, d2r=d2r, singularities=(0.0,), domain=(0.0, INF),
        label=f"coulomb(E={E:g}, Z={Z:g}, l={l:g})",
    )


def _radial_free(params):
    k, l = _require(params, ["k", "l"], "radial-free")
    L = l * (l + 1.0)
    lab = "radial-free"

    def r(z):
        z = _no_zero(z, lab)
        return k * k - L / (z * z)

    def dr(z):
        z = _no_zero(z, lab)
        return 2.0 * L / z**3

    def d2r(z):
        z = _no_zero(z, lab)
        return -6.0 * L / z**4

    return dict(
        r=r, dr=dr, d2r=d2r, singularities=(0.0,), domain=(0.0, INF),
        label=f"radial-free(k={k:g}, l={l:g})",
    )


FAMILIES = {
    "airy": _airy,
    "weber": _weber,
    "coulomb": _coulomb,
    "radial-free": _radial_free,
}


def builtin(name: str, params: Mapping[str, float] | None = None, domain=None) -> Potential:
    """One of the named families.

    =========== ======================== ========= ===========
    name        R(z)                     params    domain
    =========== ======================== ========= ===========
    airy        z                                  (-inf, inf)
    weber       a - z^2/4                a         (-inf, inf)
    coulomb     2E + 2Z/z - l(l+1)/z^2   E, Z, l   (0, inf)
    radial-free k^2 - l(l+1)/z^2         k, l      (0, inf)
    =========== ======================== ========= ===========

    ``domain`` overrides the default interval.
    """
    params = dict(params or {})
    try:
        make = FAMILIES[name]
    except KeyError:
        raise PotentialError(
            f"unknown potential family {name!r}; choose from {', '.join(FAMILIES)}"
        ) from None
    parts = make(params)
    if domain is not None:
        parts["domain"] = tuple(float(d) for d in domain)
        lo, hi = parts["domain"]
        parts["singularities"] = tuple(s for s in parts["singularities"] if lo <= s <= hi)
    pot = Potential(
        **parts,
        params=params,
        rebuild=lambda p: builtin(name, p, domain),
    )
    pot.check_consistency()
    return pot


def from_expression(e, params: Mapping[str, float] | None = None, domain=(-INF, INF),
                    label: str | None = None) -> Potential:
    """Potential from an expression tree (or source string).

    Derivatives come from :func:`phaseint.expr.differentiate`.  A pole at
    ``z = 0`` is declared as a singularity when 0 lies in the closure of the
    domain; a pole strictly inside the domain is an error.
    """
    params = {k: float(v) for k, v in dict(params or {}).items()}
    source = e if isinstance(e, str) else None
    tree = ex.parse(e) if isinstance(e, str) else e
    unbound = sorted(ex.parameters(tree) - set(params))
    if unbound:
        raise UnboundParameterError(unbound[0])
    d1 = ex.differentiate(tree)
    d2 = ex.differentiate(d1)
    lo, hi = (float(domain[0]), float(domain[1]))
    singular = ()
    if lo <= 0.0 <= hi and ex.has_pole_at_zero(tree, params):
        singular = (0.0,)
    text = source if source is not None else ex.to_string(tree)
    pot = Potential(
        r=lambda z: ex.evaluate(tree, z, params),
        dr=lambda z: ex.evaluate(d1, z, params),
        d2r=lambda z: ex.evaluate(d2, z, params),
        singularities=singular,
        domain=(lo, hi),
        label=label or f"expr:{text}",
        params=params,
        rebuild=lambda p: from_expression(tree, p, (lo, hi), label),
    )
    pot.check_consistency()
    return pot


def from_selector(selector: str, params=None, domain=None) -> Potential:
    """Resolve ``family:<name>``, ``expr:<source>`` or a bare family name."""
    kind, sep, rest = selector.partition(":")
    if sep and kind == "expr":
        dom = (-INF, INF) if domain is None else domain
        return from_expression(rest, params, dom)
    name = rest if sep and kind == "family" else selector
    if sep and kind not in ("family", "expr"):
        raise PotentialError(f"bad potential selector {selector!r}")
    return builtin(name, params, domain)

