"""Platform function P_s = (1/2) z^s d/dz [1/(z^s Q)] and the third-order
correction built on it.

Everything is evaluated from the expanded form

    P_s = -s/(2 z Q) - Q'/(2 Q^2)

with analytic Q' and Q'', never by differencing 1/(z^s Q).  Derivatives with
respect to the phase variable zeta (d zeta = Q dz) are (d/dz)/Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseFunction
from .errors import GuardError

__all__ = [
    "GUARD",
    "PlatformEval",
    "platform_value",
    "platform_derivative",
    "y2",
    "epsilon0",
    "identity_residual",
    "platform_eval",
]

# Q^2 at or below this is treated as a turning point
GUARD = 1e-12


@dataclass(frozen=True)
class PlatformEval:
    z: float
    p: float
    dp_dz: float
    y2: float


def _guard(b: BaseFunction, z):
    if b.s != 0.0 and np.any(np.asarray(z) == 0.0):
        raise GuardError(f"P_s with s={b.s:g} is singular at z=0")
    q2 = np.asarray(b.q2(z))
    if np.any(q2 <= GUARD):
        zz = np.atleast_1d(z)
        bad = zz[np.flatnonzero(np.atleast_1d(q2) <= GUARD)[0]] if zz.size > 1 else zz[0]
        raise GuardError(
            f"Q^2 = {np.atleast_1d(q2).min():.3g} <= {GUARD:g} near z={float(bad)!r}: "
            "turning point or forbidden region"
        )


def _terms(b: BaseFunction, z):
    """Q, Q', Q'', P_s, dP_s/dz."""
    _guard(b, z)
    q, dq, d2q = b.derivatives(z)
    q2 = q * q
    p = -dq / (2.0 * q2)
    dp = -d2q / (2.0 * q2) + dq * dq / (q2 * q)
    s = b.s
    if s != 0.0:
        p = p - s / (2.0 * z * q)
        dp = dp + s / (2.0 * z * z * q) + s * dq / (2.0 * z * q2)
    return q, dq, d2q, p, dp


def platform_value(b: BaseFunction, z):
    """P_s(z)."""
    return _terms(b, z)[3]


def platform_derivative(b: BaseFunction, z):
    """dP_s/dz.  Divide by Q for the zeta-derivative."""
    return _terms(b, z)[4]


def y2(b: BaseFunction, z):
    """Relative third-order correction Y_2 = -P^2/2 + (dP/dzeta)/2 - mismatch/(2Q^2)."""
    q, _, _, p, dp = _terms(b, z)
    out = -0.5 * p * p + 0.5 * dp / q
    if not b.canonical:
        out = out - b.mismatch(z) / (2.0 * q * q)
    return out


def epsilon0(b: BaseFunction, z):
    """Conventional platform Q^{-3/2} (Q^{-1/2})'' + (R - Q^2)/Q^2.

    Computed directly from Q, Q', Q'', independently of P_s.
    """
    _guard(b, z)
    q, dq, d2q = b.derivatives(z)
    q2 = q * q
    return _curvature(q, dq, d2q) + (b.r(z) - q2) / q2


def _curvature(q, dq, d2q):
    # Q^{-3/2} d^2/dz^2 Q^{-1/2}
    return 0.75 * dq * dq / q**4 - 0.5 * d2q / q**3


def identity_residual(b: BaseFunction, z):
    """|LHS - RHS| of

        Q^{-3/2} (Q^{-1/2})'' = (dP_s/dz)/Q - P_s^2 + s(s-2)/(4 z^2 Q^2)

    which holds exactly for every Q and s.
    """
    q, dq, d2q, p, dp = _terms(b, z)
    lhs = _curvature(q, dq, d2q)
    rhs = dp / q - p * p
    c = b.spec.coefficient
    if c != 0.0:
        rhs = rhs + c / (z * z * q * q)
    return np.abs(lhs - rhs)


def platform_eval(b: BaseFunction, z: float) -> PlatformEval:
    q, _, _, p, dp = _terms(b, z)
    corr = -0.5 * p * p + 0.5 * dp / q
    if not b.canonical:
        corr = corr - b.mismatch(z) / (2.0 * q * q)
    return PlatformEval(z=float(z), p=float(p), dp_dz=float(dp), y2=float(corr))
