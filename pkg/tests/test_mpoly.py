"""Sparse multivariate polynomial layer: gcd, exact division, reduction."""

import random

import pytest

from ktangent.errors import DivisionByZero
from ktangent.mpoly import MPoly, div_exact, mp_gcd, reduce_mod
from ktangent.scalars import QQ, Algebraic, make_tower


def xy(tower=QQ):
    return MPoly.variable(tower, 2, 0), MPoly.variable(tower, 2, 1)


def test_arith_and_degrees():
    x, y = xy()
    f = (x + y) ** 2
    assert f == x**2 + 2 * x * y + y**2
    assert f.total_degree() == 2
    assert f.degree_in(0) == 2
    assert f.deriv(0) == 2 * x + 2 * y
    assert (f - f).is_zero()


def test_reduce_mod_relation():
    x, y = xy()
    rel = y**2 - x**3 + x - 1  # monic degree 2 in y
    r = reduce_mod(y**4, rel, 1)
    assert r.degree_in(1) <= 1
    # y^4 = (x^3 - x + 1)^2 after substitution
    assert r == (x**3 - x + 1) ** 2


def test_exact_division():
    x, y = xy()
    f = (x**2 + y) * (x * y - 3)
    assert div_exact(f, x * y - 3) == x**2 + y
    with pytest.raises(DivisionByZero):
        div_exact(x**2 + y + 1, x * y - 3)


def test_gcd_basic():
    x, y = xy()
    f = (x + y) * (x - 1) ** 2
    g = (x + y) * (y + 2)
    assert mp_gcd(f, g) == x + y
    assert mp_gcd(x**2 - y**2, x + y) == x + y
    assert mp_gcd(x + 1, y + 1) == 1


def test_gcd_over_extension():
    tw = make_tower([Algebraic("r2", [-2, 0, 1])])
    r2 = tw.gen("r2")
    x, y = xy(tw)
    # (x - r2)(x + r2) = x^2 - 2
    f = (x - r2) * (x + r2) * y
    g = (x - r2) * (y + r2)
    assert mp_gcd(f, g) == x - r2


def test_gcd_random_products():
    rng = random.Random(99)
    x, y = xy()
    mons = [x, y, x + 1, y - 2, x + y, x * y - 1, x - y + 3]
    for _ in range(25):
        h = rng.choice(mons) * rng.choice(mons)
        a = h * rng.choice(mons)
        b = h * rng.choice(mons)
        g = mp_gcd(a, b)
        # gcd divides both and is divisible by h
        div_exact(a, g), div_exact(b, g)
        div_exact(g, mp_gcd(g, h))


def test_eval():
    x, y = xy()
    f = x**2 * y - 3
    assert f.eval_scalars([QQ.from_fraction(2), QQ.from_fraction(5)]) == QQ.from_fraction(17)
    assert f.render(["x", "y"]) == "x^2*y - 3"
