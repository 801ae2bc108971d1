"""Acceptance gate: eleven criteria, exact tolerances, explicit budgets.

Each test prints one [PASS]/[FAIL] line (visible with ``pytest -s`` or in
captured output) and enforces its runtime budget with an assertion.
"""

import json
import time
from contextlib import contextmanager

import pytest

from ktangent.scalars import make_tower, Algebraic, Transcendental
from ktangent.funcrings import FunctionRing
from ktangent.differentials import base_q, base_top, base_change_kernel_letters
from ktangent.cech import (TruncationPolicy, Sheaf, sheaf_cohomology,
                           verify_splitting, cover_pn, cover_plane_curve,
                           weierstrass_cubic)
from ktangent.cycletangent import composed_infinitesimal
from ktangent.errors import NotNumberField
from ktangent.suites import (codifferential_suite, beta_agreement_suite,
                             absolute_square_suite, relations_suite,
                             diagram_suite)
from ktangent.cli import make_report, render_json

QQ = make_tower([])
POLICY = TruncationPolicy(2, 2)


@contextmanager
def criterion(num, label, budget):
    t0 = time.time()
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {num:2d}: {label}")
        raise
    dt = time.time() - t0
    line = f"[PASS] criterion {num:2d}: {label} ({dt:.2f}s, budget {budget:.0f}s)"
    print(line)
    assert dt < budget, f"criterion {num} exceeded its budget: {dt:.2f}s"


def _all_pass(checks, min_count=None):
    for c in checks:
        assert c["status"] == "pass", c
        if min_count is not None:
            assert c["count"] >= min_count, c
    return checks


def test_criterion_01_codifferential_family():
    with criterion(1, "tilde_dlog agrees with the signed d of beta", 10):
        _all_pass(codifferential_suite(), min_count=50)


def test_criterion_02_beta_truncation_agreement():
    with criterion(2, "beta via dual-number truncation agrees with beta", 10):
        _all_pass(beta_agreement_suite(), min_count=50)


def test_criterion_03_absolute_comparison_square():
    with criterion(3, "absolute beta pushed up the tower recovers beta", 10):
        _all_pass(absolute_square_suite(), min_count=50)


def test_criterion_04_relations_die():
    with criterion(4, "symbol relations vanish under all four maps", 10):
        checks = _all_pass(relations_suite(), min_count=100)
        kinds = checks[0]["kinds"]
        # the quantifier counts Steinberg/multilinearity/commutativity
        # instances; the eps-additivity extras are on top of the 100
        assert kinds["steinberg"] + kinds["bilinear"] + kinds["skew"] >= 100


def test_criterion_05_comparison_diagram():
    with criterion(5, "comparison diagram commutes for p = 2, 3, 4", 5):
        checks = _all_pass(diagram_suite())
        assert len(checks) == 3


def test_criterion_06_cech_calibration():
    with criterion(6, "line and plane cohomology at the classical values", 60):
        line = cover_pn(1, QQ)
        for d in range(0, 6):
            rep = sheaf_cohomology(line, Sheaf.twisted(d),
                                   TruncationPolicy(max(2, d), 2),
                                   require_stable=True, with_reps=False)
            assert rep.dims == {0: d + 1, 1: 0}, (d, rep.dims)
        for d in range(2, 6):
            rep = sheaf_cohomology(line, Sheaf.twisted(-d),
                                   TruncationPolicy(max(2, d), 2),
                                   require_stable=True, with_reps=False)
            assert rep.dims == {0: 0, 1: d - 1}, (-d, rep.dims)
        plane = cover_pn(2, QQ)
        for r in range(3):
            rep = sheaf_cohomology(plane, Sheaf.forms(r), POLICY,
                                   require_stable=True, with_reps=False)
            want = {q: (1 if q == r else 0) for q in range(3)}
            assert rep.dims == want, (r, rep.dims)


def test_criterion_07_splitting():
    with criterion(7, "hypercohomology splits into its graded pieces", 120):
        line = cover_pn(1, QQ)
        plane = cover_pn(2, QQ)
        curve = cover_plane_curve(weierstrass_cubic(QQ, 0, -1, 1), QQ)
        for cover, p in ((line, 1), (plane, 1), (plane, 2), (curve, 1)):
            rep = verify_splitting(p, cover, POLICY)
            assert rep["status"] == "pass", rep
            assert rep["stabilized"] is True
        # on the plane at p = 2 the odd total degree just below carries rank 1
        rep = verify_splitting(2, plane, POLICY)
        odd = [c for c in rep["checks"] if c["name"] == "total degree 3"]
        assert odd and odd[0]["hyper"] == 1


def test_criterion_08_curve_tangent_dimension():
    with criterion(8, "H^1 of the structure sheaf of the cubic is 1", 120):
        curve = cover_plane_curve(weierstrass_cubic(QQ, 0, -1, 1), QQ)
        rep = sheaf_cohomology(curve, Sheaf.forms(0), POLICY,
                               require_stable=True, with_reps=False)
        assert rep.dims[1] == 1, rep.dims
        assert rep.stabilized


def test_criterion_09_injectivity():
    with criterion(9, "composed infinitesimal map is injective", 120):
        curve = cover_plane_curve(weierstrass_cubic(QQ, 0, -1, 1), QQ)
        rep = composed_infinitesimal(curve, 1, POLICY)
        assert rep.verdict == "injective"
        assert rep.kernel_dim == 0
        assert len(rep.matrix) == 1 and len(rep.matrix[0]) == 1
        assert not rep.matrix[0][0].is_zero()

        sqrt2 = make_tower([Algebraic("r2", [-2, 0, 1])])
        plane = cover_pn(2, sqrt2)
        rep2 = composed_infinitesimal(plane, 1, POLICY)
        assert rep2.verdict == "injective"
        assert rep2.kernel_dim == 0


def test_criterion_10_transcendental_refusal():
    with criterion(10, "transcendental base is detected and refused", 1):
        qs = make_tower([Transcendental("s")])
        ring = FunctionRing(qs, ("x", "y"))
        letters = base_change_kernel_letters(ring, base_q(), base_top(qs))
        assert letters == ["ds"]
        plane = cover_pn(2, qs)
        with pytest.raises(NotNumberField):
            composed_infinitesimal(plane, 1, POLICY)


def test_criterion_11_byte_identical_reports():
    with criterion(11, "same seed gives byte-identical reports", 60):
        def full(seed):
            checks = (codifferential_suite(seed=seed)
                      + beta_agreement_suite(seed=seed)
                      + absolute_square_suite(seed=seed)
                      + relations_suite(seed=seed)
                      + diagram_suite())
            report = make_report("full-suite", {"seed": seed}, checks)
            return render_json(report).encode("utf-8")

        first = full(123)
        second = full(123)
        assert first == second
        json.loads(first.decode("utf-8"))
