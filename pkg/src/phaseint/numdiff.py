"""Richardson-extrapolated central differences.

Used only as an independent check on analytic derivatives, never on the
main computational path.
"""

import numpy as np


def _central(f, z, h, order):
    if order == 1:
        return (f(z + h) - f(z - h)) / (2.0 * h)
    return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h)


def fd_derivative(f, z, order=1, h=None):
    """First or second derivative of ``f`` at ``z``.

    Central differences at steps ``h`` and ``h/2`` combined by one
    Richardson step, so the truncation error is O(h^4).  ``z`` may be an
    array when ``f`` is vectorised.  The default step
    is ``max(1e-5, 1e-5|z|)`` for first derivatives; second derivatives
    divide roundoff by h^2 and use ``max(1e-3, 1e-3|z|)`` instead.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if h is None:
        rel = 1e-5 if order == 1 else 1e-3
        h = np.maximum(rel, rel * np.abs(z))
    coarse = _central(f, z, h, order)
    fine = _central(f, z, 0.5 * h, order)
    return (4.0 * fine - coarse) / 3.0

