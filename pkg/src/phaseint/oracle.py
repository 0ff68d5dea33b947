"""Reference solutions of psi'' + R(z) psi = 0 and order-by-order comparison.

The ODE is integrated as the first-order system (psi, psi') with scipy's
DOP853 embedded Runge-Kutta pair.  The comparison convention: the exact
solution is the one whose value and slope at the anchor equal those of the
third-order psi_+.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate as spi

from .base import BaseSpec, make_base
from .errors import GuardError, OracleError
from .numdiff import fd_derivative
from .pim import PhaseApprox, psi, psi_derivative
from .potential import Potential

__all__ = ["OracleSolution", "CompareResult", "solve_ivp", "compare_orders", "fd_derivative"]

MIN_TOL, MAX_TOL = 1e-13, 1e-6
# step controller runs tighter than the requested local tolerance so that
# halving tol moves the result by less than tol
_CONTROLLER_SAFETY = 0.25


@dataclass(frozen=True)
class OracleSolution:
    grid: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    tol: float

    def at_end(self) -> complex:
        return complex(self.psi[-1])


@dataclass(frozen=True)
class CompareResult:
    err_first: float
    err_third: float

    @property
    def ratio(self) -> float:
        return self.err_third / self.err_first if self.err_first else float("inf")


def solve_ivp(p: Potential, z0: float, psi0: complex, dpsi0: complex, z1: float,
              tol: float = 1e-12, grid=None) -> OracleSolution:
    """Integrate from ``z0`` to ``z1`` with local error per step <= ``tol``.

    ``grid`` selects the output points (dense output, must lie between z0
    and z1); by default only the two endpoints are returned.
    """
    if not MIN_TOL <= tol <= MAX_TOL:
        raise ValueError(f"tol must lie in [{MIN_TOL:g}, {MAX_TOL:g}]")
    z0, z1 = float(z0), float(z1)
    if z0 == z1:
        raise ValueError("z0 and z1 coincide")
    lo, hi = min(z0, z1), max(z0, z1)
    if not (p.inside(lo) and p.inside(hi)):
        raise GuardError(f"[{lo!r}, {hi!r}] is not inside the domain {p.domain}")
    for s in p.singularities:
        if lo <= s <= hi:
            raise GuardError(f"[{lo!r}, {hi!r}] contains the singular point z={s!r}")
    grid = np.array([z0, z1]) if grid is None else np.asarray(grid, dtype=float)
    if np.any(grid < lo) or np.any(grid > hi):
        raise ValueError("output grid leaves the integration interval")
    step = np.diff(grid)
    if np.any(step * (z1 - z0) <= 0.0):
        raise ValueError("output grid must be strictly monotone in the integration direction")

    def rhs(z, y):
        return np.array([y[1], -p.r(z) * y[0]])

    sol = spi.solve_ivp(
        rhs, (z0, z1), np.array([psi0, dpsi0], dtype=complex),
        method="DOP853", rtol=_CONTROLLER_SAFETY * tol, atol=_CONTROLLER_SAFETY * tol,
        t_eval=grid,
    )
    if sol.status != 0:
        raise OracleError(f"reference integration failed: {sol.message}")
    y = sol.y
    if not np.all(np.isfinite(y)):
        raise OracleError("reference solution is not finite")
    return OracleSolution(grid=sol.t, psi=y[0], dpsi=y[1], tol=tol)


def compare_orders(p: Potential, spec: BaseSpec, anchor: float, probe: float,
                   tol: float = 1e-12) -> CompareResult:
    """Relative errors of first- and third-order psi_+ at ``probe``."""
    b = make_base(p, spec)
    first = PhaseApprox(b, "first", anchor)
    third = PhaseApprox(b, "third", anchor)
    seed = psi(third, anchor)
    dseed = psi_derivative(third, anchor)
    ref = solve_ivp(p, anchor, seed, dseed, probe, tol).at_end()
    scale = abs(ref)
    return CompareResult(
        err_first=abs(psi(first, probe) - ref) / scale,
        err_third=abs(psi(third, probe) - ref) / scale,
    )
