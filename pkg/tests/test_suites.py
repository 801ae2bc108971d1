"""Seeded families: determinism, coverage, and the identities they enforce."""

import random

from ktangent.suites import (standard_towers, symbol_ring, unit_pool,
                             random_symbol, codifferential_suite,
                             beta_agreement_suite, absolute_square_suite,
                             relations_suite, diagram_suite)
from ktangent.milnor import EpsSymbol


def test_standard_towers_shapes():
    (l0, t0), (l1, t1), (l2, t2) = standard_towers()
    assert t0.num_levels == 0
    assert t1.is_number_field() and t1.num_levels == 1
    assert not t2.is_number_field()


def test_unit_pool_is_invertible():
    for _, tw in standard_towers():
        ring = symbol_ring(tw)
        for f in unit_pool(ring):
            assert f.is_unit()
            f.inv()


def test_random_symbol_is_reproducible():
    ring = symbol_ring(standard_towers()[0][1])
    pool = unit_pool(ring)
    a = random_symbol(random.Random(5), ring, 3, pool)
    b = random_symbol(random.Random(5), ring, 3, pool)
    assert isinstance(a, EpsSymbol)
    assert str(a) == str(b)
    assert a.p == 3


def test_codifferential_suite_small():
    checks = codifferential_suite(p=2, seed=11, count=6)
    assert len(checks) == 1
    assert checks[0]["status"] == "pass"
    assert checks[0]["count"] == 6
    assert checks[0]["witnesses"] == []


def test_suite_reports_are_deterministic():
    a = codifferential_suite(p=3, seed=4, count=4)
    b = codifferential_suite(p=3, seed=4, count=4)
    assert a == b


def test_all_p_shape():
    checks = beta_agreement_suite(seed=2, count=3)
    assert [c["name"] for c in checks] == [
        "beta agreement p=2", "beta agreement p=3", "beta agreement p=4"]
    assert all(c["status"] == "pass" for c in checks)


def test_absolute_square_small():
    checks = absolute_square_suite(p=4, seed=9, count=6)
    assert checks[0]["status"] == "pass"


def test_relations_small():
    checks = relations_suite(seed=3, count=12)
    assert len(checks) == 1
    assert checks[0]["status"] == "pass"
    assert checks[0]["count"] == 12
    # all four kinds appear in the spread, counted in the structured field
    for kind in ("steinberg", "bilinear", "skew", "eps_additive"):
        assert kind in checks[0]["name"]
        assert checks[0]["kinds"][kind] == 3


def test_diagram_suite_single_p():
    checks = diagram_suite(p=2)
    assert len(checks) == 1 and checks[0]["status"] == "pass"
