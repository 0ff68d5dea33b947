"""Phase-integral approximations of order one and three built on the
platform function P_s(z) = (1/2) z^s d/dz [1/(z^s Q(z))]."""

from .base import BaseFunction, BaseSpec, make_base, turning_points
from .errors import (
    BreakdownError,
    DomainError,
    ExprSyntaxError,
    GuardError,
    PhaseIntegralError,
    QuadratureError,
)
from .expr import differentiate, evaluate, parse, to_string
from .oracle import compare_orders, solve_ivp
from .pim import ExpansionOrder, PhaseApprox, amplitude, phase, wavefunction, wronskian_check
from .platform import epsilon0, identity_residual, platform_derivative, platform_value, y2
from .potential import Potential, builtin, from_expression
from .quad import QuadResult, integrate, integrate_to_turning_point
from .quantize import BoundStateProblem, action, eigenvalue

__version__ = "0.1.0"
