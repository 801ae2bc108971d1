"""Exterior derivative, wedge, bases, contraction, pullback."""

import random

import pytest

from ktangent.differentials import (
    BaseTag,
    DiffForm,
    absolute_on_dual,
    base_change,
    base_change_kernel_letters,
    base_q,
    base_top,
    contract_deps,
    d,
    dlog,
    dual_relative,
    eps_part,
    pullback,
    specialize_eps,
    wedge,
)
from ktangent.errors import BaseIncompatible, Mismatch, NoDualBase, NotAnEnlargement
from ktangent.funcrings import DualElem, FunctionRing, transport
from ktangent.mpoly import MPoly
from ktangent.scalars import QQ, Transcendental, make_tower


def ring_xy():
    return FunctionRing(QQ, ("x", "y"))


def ring_elliptic():
    xv, yv = MPoly.variable(QQ, 2, 0), MPoly.variable(QQ, 2, 1)
    return FunctionRing(QQ, ("x", "y"), yv * yv - xv**3 + xv - 1)


def ring_qt():
    tw = make_tower([Transcendental("t")])
    return FunctionRing(tw, ("x", "y"))


def test_d_polynomial():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    w = d(x * x * y, base_q())
    assert w.coeff([("v", 0)]) == 2 * x * y
    assert w.coeff([("v", 1)]) == x * x
    v = d(x / y, base_q())
    assert v.coeff([("v", 0)]) == y.inv()
    assert v.coeff([("v", 1)]) == -x / (y * y)


def test_d_through_relation():
    r = ring_elliptic()
    x, y = r.var("x"), r.var("y")
    w = d(y, base_q())
    # 2y dy = (3x^2 - 1) dx
    assert w.coeff([("v", 0)]) == (3 * x * x - 1) / (2 * y)
    assert d(y * y, base_q()) == d(x**3 - x + 1, base_q())


def test_d_squared_zero():
    rng = random.Random(2026)
    for r in (ring_xy(), ring_elliptic(), ring_qt()):
        gens = list(r.gens().values())
        if r.tower.num_levels:
            gens.append(r.const(r.tower.gen("t")))
        for base in (base_q(), base_top(r.tower)):
            for _ in range(8):
                f = rng.choice(gens) * rng.choice(gens) + rng.choice(gens)
                g = rng.choice(gens) + 2
                w = d(f / g, base)
                assert d(w).is_zero()


def test_wedge_signs():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    dx = d(x, base_q())
    dy = d(y, base_q())
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(dx, dx).is_zero()
    w = wedge(x * dx + y * dy, dy)
    assert w.coeff([("v", 0), ("v", 1)]) == x


def test_leibniz_on_products():
    r = ring_elliptic()
    rng = random.Random(13)
    gens = list(r.gens().values())
    for _ in range(10):
        f = rng.choice(gens) + rng.choice(gens) * rng.choice(gens)
        g = rng.choice(gens) + 1
        lhs = d(f * g, base_q())
        rhs = d(f, base_q()) * g + d(g, base_q()) * f
        assert lhs == rhs


def test_base_levels_and_change():
    r = ring_qt()
    t = r.const(r.tower.gen("t"))
    x = r.var("x")
    w = d(t * x, base_q())
    assert w.coeff([("t", 1)]) == x
    assert w.coeff([("v", 0)]) == t
    top = d(t * x, base_top(r.tower))
    assert top.coeff([("v", 0)]) == t
    assert top == base_change(w, base_top(r.tower))
    assert base_change_kernel_letters(r, base_q(), base_top(r.tower)) == ["dt"]
    with pytest.raises(NotAnEnlargement):
        base_change(top, base_q())


def test_dual_derivative_free_eps():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    u = DualElem(r, x, y)
    w = d(u, absolute_on_dual())
    assert w.coeff([("v", 0)]) == DualElem(r, r.one())
    assert w.coeff([("v", 1)]) == DualElem(r, r.zero(), r.one())
    assert w.coeff([("e",)]) == DualElem(r, y)
    # over the dual-relative base d(eps) vanishes
    v = d(u, dual_relative(QQ))
    assert v.coeff([("e",)]) == DualElem(r, r.zero()) or ("e",) not in [
        k[0] for k in v.terms
    ]
    assert d(w).is_zero()
    assert d(v).is_zero()


def test_eps_times_deps_is_zero():
    r = ring_xy()
    x = r.var("x")
    base = absolute_on_dual()
    w = d(DualElem(r, x), base)  # dx with dual coefficients
    deps = DiffForm(r, base, 1, {(("e",),): DualElem(r, r.one())})
    eps = DualElem(r, r.zero(), r.one())
    assert (deps * eps).is_zero()
    assert wedge(w * eps, deps) == wedge(w, deps) * eps


def test_dlog_dual_unit():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    u = DualElem(r, r.one(), y / x)  # 1 + eps y/x
    w = dlog(u, absolute_on_dual())
    got = contract_deps(w)
    assert got.degree == 0
    assert got.coeff([]) == y / x
    # letter parts are eps * d(y/x)
    assert w.coeff([("v", 1)]) == DualElem(r, r.zero(), x.inv())


def test_contract_deps_signs():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    base = absolute_on_dual()
    dx = d(DualElem(r, x), base)
    deps = DiffForm(r, base, 1, {(("e",),): DualElem(r, r.one())})
    w = wedge(dx, deps) * y
    assert contract_deps(w) == d(x, base_q()) * y
    # deps in front costs a sign when commuted to the back
    v = wedge(deps, dx) * y
    assert contract_deps(v) == -(d(x, base_q()) * y)


def test_specialize_and_eps_part():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    base = dual_relative(QQ)
    u = DualElem(r, x * y, y)
    w = d(u, base)
    body = specialize_eps(w)
    slope = eps_part(w)
    assert body == d(x * y, base_top(QQ))
    assert slope == d(y, base_top(QQ))


def test_mismatch_errors():
    r = ring_xy()
    x, y = r.var("x"), r.var("y")
    with pytest.raises(Mismatch):
        d(x, base_q()) + DiffForm.of_elem(y, base_q())
    rt = ring_qt()
    xt = rt.var("x")
    with pytest.raises(BaseIncompatible):
        d(xt, base_q()) + d(xt, base_top(rt.tower))
    with pytest.raises(NoDualBase):
        d(DualElem(r, x, y), base_q())
    with pytest.raises(NoDualBase):
        contract_deps(d(x, base_q()))


def test_pullback_commutes_with_d():
    # P^1 transition u = 1/v
    r0 = FunctionRing(QQ, ("u",))
    r1 = FunctionRing(QQ, ("v",))
    v = r1.var("v")
    subst = [v.inv()]
    rng = random.Random(3)
    u = r0.var("u")
    for _ in range(6):
        k = rng.randint(1, 4)
        f = u**k + rng.randint(-2, 2) * u + 1
        left = pullback(d(f, base_q()), subst, r1)
        right = d(transport(f, subst, r1), base_q())
        assert left == right


def test_pullback_chain_rule_on_curve():
    # overlap of the two cubic charts: x = xb/zb, y = 1/zb
    ra = ring_elliptic()
    xbv, zbv = MPoly.variable(QQ, 2, 0), MPoly.variable(QQ, 2, 1)
    rb = FunctionRing(QQ, ("xb", "zb"), zbv**3 - xbv * zbv**2 - zbv + xbv**3)
    xb, zb = rb.var("xb"), rb.var("zb")
    subst = [xb / zb, zb.inv()]
    x, y = ra.var("x"), ra.var("y")
    f = (x + y * y) / (x - 2)
    assert pullback(d(f, base_q()), subst, rb) == d(transport(f, subst, rb), base_q())
