"""Identity checks over a small corpus of potentials.

Each check returns the worst residual it saw together with its threshold.
The corpus covers every platform preset: Airy and Weber with s = 0,
Coulomb with the Kramers-Langer base and the free radial equation with the
centrifugal term removed from the base.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import platform as pf
from .base import BaseFunction, BaseSpec, make_base
from .pim import PhaseApprox, phase, wronskian_check
from .potential import builtin, from_expression
from .quad import integrate

__all__ = ["CorpusEntry", "CheckResult", "default_corpus", "CHECKS", "run_suite"]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    base: BaseFunction
    points: np.ndarray  # allowed-region sample points, |Q^2| bounded away from 0
    wronskian_points: np.ndarray  # where both orders are valid
    anchors: tuple[float, float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    threshold: float
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.worst < self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: worst {self.worst:.3e} "
                f"(threshold {self.threshold:.0e}, {self.seconds:.2f} s)")


def default_corpus(n_points: int = 100, n_wronskian: int = 20) -> list[CorpusEntry]:
    airy = make_base(builtin("airy"), BaseSpec(s=0))
    weber = make_base(builtin("weber", {"a": 5.0}), BaseSpec(s=0))
    coulomb = make_base(
        builtin("coulomb", {"E": -0.5, "Z": 1.0, "l": 0.0}), BaseSpec(preset="kramers-langer")
    )
    radial = make_base(
        builtin("radial-free", {"k": 1.0, "l": 1.0}), BaseSpec(preset="no-centrifugal")
    )
    return [
        CorpusEntry("airy/s=0", airy, np.linspace(1.0, 10.0, n_points),
                    np.linspace(2.0, 10.0, n_wronskian), (2.0, 5.0)),
        CorpusEntry("weber(a=5)/s=0", weber, np.linspace(-3.5, 3.5, n_points),
                    np.linspace(-3.0, 3.0, n_wronskian), (-1.0, 0.5)),
        CorpusEntry("coulomb(E=-0.5,Z=1,l=0)/s=1", coulomb, np.linspace(0.3, 1.6, n_points),
                    np.linspace(0.35, 1.5, n_wronskian), (0.6, 1.2)),
        CorpusEntry("radial-free(k=1,l=1)/s=-2", radial, np.linspace(0.5, 10.0, n_points),
                    np.linspace(2.0, 10.0, n_wronskian), (3.0, 6.0)),
    ]


def override_entry(n_points: int = 100) -> CorpusEntry:
    """Airy with a non-canonical base Q^2 = z + 1/z on z > 0."""
    pot = builtin("airy", domain=(0.0, np.inf))
    q2 = from_expression("z + 1/z", domain=(0.0, np.inf))
    b = make_base(pot, BaseSpec(s=0), q2_override=q2)
    pts = np.linspace(0.5, 10.0, n_points)
    return CorpusEntry("airy/s=0 with Q^2 = z + 1/z", b, pts, pts[::5], (1.0, 4.0))


def check_identity(corpus):
    return max(float(np.max(pf.identity_residual(e.base, e.points))) for e in corpus)


def check_reduction(corpus):
    entries = [e for e in corpus if e.base.s == 0.0] + [override_entry()]
    return max(
        float(np.max(np.abs(2.0 * pf.y2(e.base, e.points) - pf.epsilon0(e.base, e.points))))
        for e in entries
    )


def check_airy_closed_form(corpus=None):
    b = make_base(builtin("airy"), BaseSpec(s=0))
    z = np.arange(1.0, 10.0 + 0.25, 0.5)
    return float(np.max(np.abs(pf.y2(b, z) * 32.0 * z**3 / 5.0 - 1.0)))


def check_total_derivative(corpus):
    worst = 0.0
    for e in corpus:
        a, b = e.points[0], e.points[-1]
        lhs = integrate(lambda z: 0.5 * pf.platform_derivative(e.base, z), a, b).value
        rhs = 0.5 * (pf.platform_value(e.base, b) - pf.platform_value(e.base, a))
        worst = max(worst, abs(lhs - rhs))
    return worst


def anchor_invariance(b: BaseFunction, anchors, points, order="third"):
    a1, a2 = anchors
    p1 = PhaseApprox(b, order, a1)
    p2 = PhaseApprox(b, order, a2)
    offset = phase(p1, a2)
    return max(abs(phase(p1, z) - phase(p2, z) - offset) for z in points)


def check_anchor_invariance(corpus):
    chosen = [e for e in corpus if e.name.startswith(("airy", "coulomb"))]
    return max(anchor_invariance(e.base, e.anchors, e.points[::10]) for e in chosen)


def check_wronskian(corpus):
    worst = 0.0
    for e in corpus:
        anchor = float(e.wronskian_points[len(e.wronskian_points) // 2])
        for order in ("first", "third"):
            pa = PhaseApprox(e.base, order, anchor)
            worst = max(worst, max(wronskian_check(pa, z) for z in e.wronskian_points))
    return worst


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable
    threshold: float


CHECKS = {
    "identity": Check("identity", check_identity, 1e-9),
    "reduction": Check("reduction", check_reduction, 1e-9),
    "airy-closed-form": Check("airy-closed-form", check_airy_closed_form, 1e-9),
    "total-derivative": Check("total-derivative", check_total_derivative, 1e-10),
    "anchor-invariance": Check("anchor-invariance", check_anchor_invariance, 1e-9),
    "wronskian": Check("wronskian", check_wronskian, 1e-7),
}


def run_suite(names=None, corpus=None) -> list[CheckResult]:
    """Run the named checks (all by default) over ``corpus``.

    Raises ValueError("no checks selected") when nothing would run, which
    includes an empty corpus.
    """
    names = list(CHECKS) if names is None else list(names)
    corpus = default_corpus() if corpus is None else list(corpus)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    if not names or not corpus:
        raise ValueError("no checks selected")
    results = []
    for chk in (CHECKS[n] for n in names):
        t0 = time.perf_counter()
        worst = chk.run(corpus)
        results.append(CheckResult(chk.name, worst, chk.threshold, time.perf_counter() - t0))
    return results
