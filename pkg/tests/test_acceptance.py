"""Acceptance criteria 1-8, each with its tolerance and runtime bound.

Every test prints one PASS/FAIL line (visible with ``pytest -s`` or ``-v``).
"""

import time

import pytest

from phaseint import expr as ex
from phaseint import verify
from phaseint.base import BaseSpec
from phaseint.errors import ExprSyntaxError, UnknownFunctionError
from phaseint.oracle import compare_orders
from phaseint.potential import builtin
from phaseint.quantize import BoundStateProblem, bohr_energy, eigenvalue

from _exprgen import relative_derivative_error, sample_expressions


@pytest.fixture(scope="module")
def corpus():
    return verify.default_corpus()


def report(capsys, number, title, ok, detail, seconds, limit):
    status = "PASS" if ok and seconds < limit else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] criterion {number} {title}: {detail}; {seconds:.3f} s (limit {limit:g} s)")
    assert ok, detail
    assert seconds < limit, f"took {seconds:.3f} s, limit {limit} s"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_identity(capsys, corpus):
    assert len(corpus) == 4 and all(len(e.points) == 100 for e in corpus)
    worst, dt = timed(lambda: verify.check_identity(corpus))
    report(capsys, 1, "identity residual", worst < 1e-9, f"worst {worst:.2e} < 1e-9", dt, 2.0)


def test_criterion_2_reduction(capsys, corpus):
    entries = [e for e in corpus if e.base.s == 0.0]
    assert len(entries) == 2
    assert not verify.override_entry().base.canonical
    worst, dt = timed(lambda: verify.check_reduction(entries))
    report(capsys, 2, "2 Y2 = eps0 at s=0 (incl. Q^2 override)", worst < 1e-9,
           f"worst {worst:.2e} < 1e-9", dt, 1.0)


def test_criterion_3_airy_closed_form(capsys):
    worst, dt = timed(verify.check_airy_closed_form)
    report(capsys, 3, "Airy Y2 = 5/(32 z^3)", worst < 1e-9, f"worst {worst:.2e} < 1e-9", dt, 0.1)


def test_criterion_4_anchor_invariance(capsys, corpus):
    worst, dt = timed(lambda: verify.check_anchor_invariance(corpus))
    report(capsys, 4, "anchor invariance (airy, coulomb)", worst < 1e-9,
           f"worst {worst:.2e} < 1e-9", dt, 1.0)


def test_criterion_5_accuracy_ordering(capsys):
    res, dt = timed(lambda: compare_orders(builtin("airy"), BaseSpec(s=0), 10.0, 3.0, 1e-12))
    ok = res.err_third <= 0.05 * res.err_first and res.err_first > 1e-4
    report(capsys, 5, "third order beats first order",
           ok, f"err_first {res.err_first:.3e}, err_third {res.err_third:.3e}, "
           f"ratio {res.ratio:.3f} <= 0.05", dt, 1.0)


def test_criterion_6_langer_exactness(capsys):
    def run():
        worst, count = 0.0, 0
        for n in range(1, 6):
            for l in range(n):
                E = eigenvalue(BoundStateProblem.hydrogen(1.0, l, n - l - 1))
                worst = max(worst, abs(E - bohr_energy(1.0, n)))
                count += 1
        unmodified = eigenvalue(BoundStateProblem.hydrogen(1.0, 0, 0, BaseSpec(s=0)))
        return worst, count, unmodified

    (worst, count, e0), dt = timed(run)
    deviation = abs(e0 - bohr_energy(1.0, 1))
    ok = count == 15 and worst < 1e-9 and deviation > 1e-3
    report(capsys, 6, "Langer base reproduces -Z^2/(2n^2)", ok,
           f"{count} states, worst |dE| {worst:.2e} < 1e-9; s=0 ground state E={e0:.6f} "
           f"(deviation {deviation:.3f})", dt, 5.0)


def test_criterion_7_wronskian(capsys, corpus):
    assert all(len(e.wronskian_points) == 20 for e in corpus)
    worst, dt = timed(lambda: verify.check_wronskian(corpus))
    report(capsys, 7, "Wronskian, both orders", worst < 1e-7, f"worst {worst:.2e} < 1e-7", dt, 2.0)


def test_criterion_8_parser(capsys):
    bad_inputs = {"z +": 3, "(z": 2, "z * * 2": 4, "sqrt z": 5, "tan(z)": 0}

    def run():
        samples = sample_expressions(200)
        worst = max(relative_derivative_error(tree, z) for tree, z in samples)
        offsets = {}
        for src in bad_inputs:
            try:
                ex.parse(src)
            except UnknownFunctionError as err:
                offsets[src] = err.offset
            except ExprSyntaxError as err:
                offsets[src] = err.offset
        return len(samples), worst, offsets

    (n, worst, offsets), dt = timed(run)
    ok = n == 200 and worst < 1e-8 and offsets == bad_inputs
    report(capsys, 8, "parser derivative property and diagnostics", ok,
           f"{n} expressions, worst relative error {worst:.2e} < 1e-8; "
           f"error offsets {offsets}", dt, 2.0)
