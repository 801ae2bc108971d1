"""Exact arithmetic in iterated field extensions of Q.

A tower is a list of steps, each either a new transcendental generator
(the field of rational functions in it) or an algebraic generator given
by a monic minimal polynomial over the tower built so far.  Elements are
kept in a recursive normal form so that structural equality is semantic
equality:

* level 0 values are ``fractions.Fraction``;
* a transcendental step stores ``("q", num, den)`` with ``num``/``den``
  coefficient tuples over the level below, ``den`` monic, gcd 1;
* an algebraic step of degree d stores ``("a", coeffs)`` with exactly d
  coefficients over the level below (the residue ring basis 1, g, .., g^(d-1)).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero, DuplicateName, NonMonic, ReducibleMinpoly, TowerMismatch


class Transcendental:
    """Tower step adjoining an independent transcendental generator."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


class Algebraic:
    """Tower step adjoining a root of a monic irreducible polynomial.

    ``minpoly`` lists coefficients from the constant term upward; entries
    may be ints, Fractions, or Scalars of the tower built so far.
    """

    __slots__ = ("name", "minpoly")

    def __init__(self, name: str, minpoly):
        self.name = name
        self.minpoly = list(minpoly)


# ---------------------------------------------------------------------------
# recursive value arithmetic
#
# All helpers take the tower and a level index: level 0 is Q, level i is the
# field after steps[i-1].  Values at each level are immutable, canonical, and
# compare correctly with ==.


def _zero(tw, lv):
    if lv == 0:
        return Fraction(0)
    kind = tw.steps[lv - 1][0]
    if kind == "tr":
        return ("q", (), (_one(tw, lv - 1),))
    d = len(tw.steps[lv - 1][2]) - 1
    return ("a", (_zero(tw, lv - 1),) * d)


def _one(tw, lv):
    if lv == 0:
        return Fraction(1)
    kind = tw.steps[lv - 1][0]
    if kind == "tr":
        one = _one(tw, lv - 1)
        return ("q", (one,), (one,))
    d = len(tw.steps[lv - 1][2]) - 1
    coeffs = [_one(tw, lv - 1)] + [_zero(tw, lv - 1)] * (d - 1)
    return ("a", tuple(coeffs))


def _from_fraction(tw, lv, fr):
    if lv == 0:
        return Fraction(fr)
    below = _from_fraction(tw, lv - 1, fr)
    return _lift_one(tw, lv, below)


def _lift_one(tw, lv, v):
    """Embed a level lv-1 value as a constant at level lv."""
    kind = tw.steps[lv - 1][0]
    if kind == "tr":
        if _is_zero(tw, lv - 1, v):
            return ("q", (), (_one(tw, lv - 1),))
        return ("q", (v,), (_one(tw, lv - 1),))
    d = len(tw.steps[lv - 1][2]) - 1
    return ("a", (v,) + (_zero(tw, lv - 1),) * (d - 1))


def _is_zero(tw, lv, a):
    if lv == 0:
        return a == 0
    if a[0] == "q":
        return not a[1]
    return all(_is_zero(tw, lv - 1, c) for c in a[1])


def _add(tw, lv, a, b):
    if lv == 0:
        return a + b
    if a[0] == "q":
        n1, d1 = a[1], a[2]
        n2, d2 = b[1], b[2]
        num = _padd(tw, lv - 1, _pmul(tw, lv - 1, n1, d2), _pmul(tw, lv - 1, n2, d1))
        return _mkq(tw, lv, num, _pmul(tw, lv - 1, d1, d2))
    return ("a", tuple(_add(tw, lv - 1, x, y) for x, y in zip(a[1], b[1])))


def _neg(tw, lv, a):
    if lv == 0:
        return -a
    if a[0] == "q":
        return ("q", tuple(_neg(tw, lv - 1, c) for c in a[1]), a[2])
    return ("a", tuple(_neg(tw, lv - 1, c) for c in a[1]))


def _sub(tw, lv, a, b):
    return _add(tw, lv, a, _neg(tw, lv, b))


def _mul(tw, lv, a, b):
    if lv == 0:
        return a * b
    if a[0] == "q":
        return _mkq(tw, lv, _pmul(tw, lv - 1, a[1], b[1]), _pmul(tw, lv - 1, a[2], b[2]))
    m = tw.steps[lv - 1][2]
    prod = _pmul(tw, lv - 1, a[1], b[1])
    return ("a", _amod(tw, lv, prod))


def _inv(tw, lv, a):
    if _is_zero(tw, lv, a):
        raise DivisionByZero("inverse of zero")
    if lv == 0:
        return 1 / a
    if a[0] == "q":
        num, den = a[1], a[2]
        lead = num[-1]
        c = _inv(tw, lv - 1, lead)
        return ("q", tuple(_mul(tw, lv - 1, c, x) for x in den),
                tuple(_mul(tw, lv - 1, c, x) for x in num))
    m = tw.steps[lv - 1][2]
    g, s = _pxgcd_first(tw, lv - 1, _pstrip(tw, lv - 1, list(a[1])), list(m))
    if len(g) != 1:
        name = tw.steps[lv - 1][1]
        raise ReducibleMinpoly(
            f"minimal polynomial of {name} shares a factor with a nonzero element; tower is invalid")
    c = _inv(tw, lv - 1, g[0])
    inv_coeffs = [_mul(tw, lv - 1, c, x) for x in s]
    return ("a", _apad(tw, lv, inv_coeffs))


def _div(tw, lv, a, b):
    return _mul(tw, lv, a, _inv(tw, lv, b))


def _amod(tw, lv, coeffs):
    """Reduce a coefficient list modulo the (monic) minpoly at this level."""
    m = tw.steps[lv - 1][2]
    d = len(m) - 1
    cs = list(coeffs)
    while len(cs) > d:
        top = cs.pop()
        if _is_zero(tw, lv - 1, top):
            continue
        k = len(cs) - d
        for i in range(d):
            cs[k + i] = _sub(tw, lv - 1, cs[k + i], _mul(tw, lv - 1, top, m[i]))
    return _apad_list(tw, lv, cs)


def _apad(tw, lv, coeffs):
    return _apad_list(tw, lv, list(coeffs))


def _apad_list(tw, lv, cs):
    d = len(tw.steps[lv - 1][2]) - 1
    z = _zero(tw, lv - 1)
    while len(cs) < d:
        cs.append(z)
    return tuple(cs[:d])


# --- polynomial helpers over a tower level (lists of values, low degree first)


def _pstrip(tw, lv, p):
    while p and _is_zero(tw, lv, p[-1]):
        p.pop()
    return p


def _padd(tw, lv, p, q):
    n = max(len(p), len(q))
    z = _zero(tw, lv)
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else z
        b = q[i] if i < len(q) else z
        out.append(_add(tw, lv, a, b))
    return _pstrip(tw, lv, out)


def _pneg(tw, lv, p):
    return [_neg(tw, lv, c) for c in p]

def _psub(tw, lv, p, q):
    return _padd(tw, lv, p, _pneg(tw, lv, q))


def _pscale(tw, lv, c, p):
    return _pstrip(tw, lv, [_mul(tw, lv, c, x) for x in p])


def _pmul(tw, lv, p, q):
    if not p or not q:
        return ()
    z = _zero(tw, lv)
    out = [z] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _is_zero(tw, lv, a):
            continue
        for j, b in enumerate(q):
            out[i + j] = _add(tw, lv, out[i + j], _mul(tw, lv, a, b))
    return _pstrip(tw, lv, out)


def _pdivmod(tw, lv, p, q):
    """Division with remainder; the divisor's lead must be invertible (field)."""
    p = _pstrip(tw, lv, list(p))
    q = _pstrip(tw, lv, list(q))
    if not q:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = _inv(tw, lv, q[-1])
    quot = [_zero(tw, lv)] * max(0, len(p) - len(q) + 1)
    rem = list(p)
    while len(rem) >= len(q):
        c = _mul(tw, lv, rem[-1], inv_lead)
        k = len(rem) - len(q)
        quot[k] = c
        for i in range(len(q)):
            rem[k + i] = _sub(tw, lv, rem[k + i], _mul(tw, lv, c, q[i]))
        rem.pop()
        rem = _pstrip(tw, lv, rem)
    return quot, rem


def _pgcd(tw, lv, p, q):
    """Monic gcd over the (field) coefficients at this level."""
    a = _pstrip(tw, lv, list(p))
    b = _pstrip(tw, lv, list(q))
    while b:
        _, r = _pdivmod(tw, lv, a, b)
        a, b = b, r
    if not a:
        return []
    c = _inv(tw, lv, a[-1])
    return [_mul(tw, lv, c, x) for x in a]


def _pxgcd_first(tw, lv, p, q):
    """Extended Euclid returning (g, s) with s*p = g mod q, g monic."""
    a, b = list(p), list(q)
    sa, sb = [_one(tw, lv)], []
    while b:
        quot, r = _pdivmod(tw, lv, a, b)
        a, b = b, r
        sa, sb = sb, _psub(tw, lv, sa, _pmul(tw, lv, quot, sb))
    if not a:
        raise DivisionByZero("extended gcd of zero polynomials")
    c = _inv(tw, lv, a[-1])
    return [_mul(tw, lv, c, x) for x in a], _pscale(tw, lv, c, sa)


def _peval(tw, lv, p, at):
    acc = _zero(tw, lv)
    for c in reversed(list(p)):
        acc = _add(tw, lv, _mul(tw, lv, acc, at), c)
    return acc


def _pformal_deriv(tw, lv, p):
    out = []
    for k in range(1, len(p)):
        out.append(_mul(tw, lv, _from_fraction(tw, lv, Fraction(k)), p[k]))
    return _pstrip(tw, lv, out)


def _mkq(tw, lv, num, den):
    """Canonical rational-function value at a transcendental level."""
    num = _pstrip(tw, lv - 1, list(num))
    den = _pstrip(tw, lv - 1, list(den))
    if not den:
        raise DivisionByZero("zero denominator in tower element")
    if not num:
        return ("q", (), (_one(tw, lv - 1),))
    g = _pgcd(tw, lv - 1, num, den)
    if len(g) > 1 or (g and not _is_zero(tw, lv - 1, _sub(tw, lv - 1, g[0], _one(tw, lv - 1)))):
        num, _ = _pdivmod(tw, lv - 1, num, g)
        den, _ = _pdivmod(tw, lv - 1, den, g)
    c = _inv(tw, lv - 1, den[-1])
    num = [_mul(tw, lv - 1, c, x) for x in num]
    den = [_mul(tw, lv - 1, c, x) for x in den]
    return ("q", tuple(num), tuple(den))


def _dgen(tw, lv, a, j):
    """Partial derivative with respect to the transcendental generator at level j."""
    if lv < j:
        return _zero(tw, lv)
    if lv == 0:
        return Fraction(0)
    if lv == j:
        num, den = list(a[1]), list(a[2])
        dn = _pformal_deriv(tw, lv - 1, num)
        dd = _pformal_deriv(tw, lv - 1, den)
        top = _psub(tw, lv - 1, _pmul(tw, lv - 1, dn, den), _pmul(tw, lv - 1, num, dd))
        return _mkq(tw, lv, top, _pmul(tw, lv - 1, den, den))
    # lv > j: the level-lv generator is independent of (or algebraic over) the
    # lower field; differentiate coefficients, with the implicit-function rule
    # supplying the generator's own derivative in the algebraic case.
    if a[0] == "q":
        num, den = list(a[1]), list(a[2])
        dn = [_dgen(tw, lv - 1, c, j) for c in num]
        dd = [_dgen(tw, lv - 1, c, j) for c in den]
        dn = _pstrip(tw, lv - 1, dn)
        dd = _pstrip(tw, lv - 1, dd)
        top = _psub(tw, lv - 1, _pmul(tw, lv - 1, dn, den), _pmul(tw, lv - 1, num, dd))
        return _mkq(tw, lv, top, _pmul(tw, lv - 1, den, den))
    m = tw.steps[lv - 1][2]
    coeff_part = ("a", tuple(_dgen(tw, lv - 1, c, j) for c in a[1]))
    dm = [_dgen(tw, lv - 1, c, j) for c in m]
    if all(_is_zero(tw, lv - 1, c) for c in dm):
        return coeff_part
    # dg = -(sum dm_k g^k) / m'(g)
    g_val = ("a", _apad(tw, lv, [_zero(tw, lv - 1), _one(tw, lv - 1)]))
    dm_at_g = ("a", _amod(tw, lv, dm))
    mprime = _pformal_deriv(tw, lv - 1, list(m))
    mprime_at_g = ("a", _amod(tw, lv, mprime))
    dg = _neg(tw, lv, _div(tw, lv, dm_at_g, mprime_at_g))
    aprime = [_mul(tw, lv - 1, _from_fraction(tw, lv - 1, Fraction(k)), c)
              for k, c in enumerate(a[1])][1:]
    aprime_at_g = ("a", _amod(tw, lv, aprime)) if aprime else _zero(tw, lv)
    return _add(tw, lv, coeff_part, _mul(tw, lv, aprime_at_g, dg))


# --- rendering


def _needs_parens(s):
    return ("+" in s[1:]) or ("-" in s[1:]) or ("/" in s) or (" " in s)


def _render_poly(tw, lv, coeffs, name):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if _is_zero(tw, lv, c):
            continue
        cs = _render(tw, lv, c)
        if k == 0:
            terms.append(cs)
            continue
        xs = name if k == 1 else f"{name}^{k}"
        if cs == "1":
            terms.append(xs)
        elif cs == "-1":
            terms.append(f"-{xs}")
        else:
            if _needs_parens(cs):
                cs = f"({cs})"
            terms.append(f"{cs}*{xs}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _render(tw, lv, v):
    if lv == 0:
        return str(v)
    name = tw.steps[lv - 1][1]
    if v[0] == "q":
        num, den = v[1], v[2]
        ns = _render_poly(tw, lv - 1, num, name)
        if len(den) == 1 and _is_zero(tw, lv - 1, _sub(tw, lv - 1, den[0], _one(tw, lv - 1))):
            return ns
        ds = _render_poly(tw, lv - 1, den, name)
        if _needs_parens(ns):
            ns = f"({ns})"
        if _needs_parens(ds) or "^" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"
    return _render_poly(tw, lv - 1, v[1], name)


# ---------------------------------------------------------------------------


class Tower:
    """An iterated extension of Q; construct with :func:`make_tower`."""

    __slots__ = ("steps", "names")

    def __init__(self, steps, names):
        self.steps = steps
        self.names = names

    @property
    def num_levels(self):
        return len(self.steps)

    def is_number_field(self):
        return all(s[0] == "alg" for s in self.steps)

    def transcendental_levels(self):
        return [i + 1 for i, s in enumerate(self.steps) if s[0] == "tr"]

    def zero(self):
        return Scalar(self, _zero(self, self.num_levels))

    def one(self):
        return Scalar(self, _one(self, self.num_levels))

    def from_fraction(self, fr):
        return Scalar(self, _from_fraction(self, self.num_levels, Fraction(fr)))

    def gen(self, name):
        lv = self.level_of(name)
        top = self.num_levels
        if self.steps[lv - 1][0] == "tr":
            one = _one(self, lv - 1)
            v = ("q", (_zero(self, lv - 1), one), (one,))
        else:
            v = ("a", _apad(self, lv, [_zero(self, lv - 1), _one(self, lv - 1)]))
        for k in range(lv + 1, top + 1):
            v = _lift_one(self, k, v)
        return Scalar(self, v)

    def level_of(self, name):
        for i, s in enumerate(self.steps):
            if s[1] == name:
                return i + 1
        raise KeyError(f"no tower generator named {name!r}")

    def is_prefix_of(self, other):
        return self.steps == other.steps[: len(self.steps)]

    def embed(self, scalar):
        """Re-express a scalar from a prefix tower as an element of this tower."""
        src = scalar.tower
        if not src.is_prefix_of(self):
            raise TowerMismatch("embed: source tower is not a prefix of the target")
        v = scalar.val
        for k in range(src.num_levels + 1, self.num_levels + 1):
            v = _lift_one(self, k, v)
        return Scalar(self, v)

    def extend(self, steps):
        return make_tower(list(_spec_of(s) for s in self.steps) + list(steps))

    def __repr__(self):
        if not self.steps:
            return "Q"
        return "Q(" + ", ".join(self.names) + ")"

    def __eq__(self, other):
        return isinstance(other, Tower) and self.steps == other.steps

    def __hash__(self):
        return hash(("Tower", self.names))


def _spec_of(step):
    if step[0] == "tr":
        return Transcendental(step[1])
    return _RawAlgebraic(step[1], step[2])


class _RawAlgebraic:
    __slots__ = ("name", "minpoly_values")

    def __init__(self, name, values):
        self.name = name
        self.minpoly_values = values


def _root_candidates(tw, lv):
    """Small rationals plus prior generators, shifted a little."""
    cands = []
    for n in range(-8, 9):
        for d in (1, 2, 3, 4):
            fr = Fraction(n, d)
            if fr.denominator == d:
                cands.append(_from_fraction(tw, lv, fr))
    one = _one(tw, lv)
    for j in range(1, lv + 1):
        if tw.steps[j - 1][0] == "tr":
            g = ("q", (_zero(tw, j - 1), _one(tw, j - 1)), (_one(tw, j - 1),))
        else:
            g = ("a", _apad(tw, j, [_zero(tw, j - 1), _one(tw, j - 1)]))
        for k in range(j + 1, lv + 1):
            g = _lift_one(tw, k, g)
        for shift in (_zero(tw, lv), one, _neg(tw, lv, one)):
            cands.append(_add(tw, lv, g, shift))
            cands.append(_add(tw, lv, _neg(tw, lv, g), shift))
    return cands


def make_tower(specs):
    """Build a Tower from Transcendental/Algebraic step descriptors."""
    steps = []
    names = []
    for spec in specs:
        tw = Tower(tuple(steps), tuple(names))
        lv = len(steps)
        if isinstance(spec, Transcendental):
            name = spec.name
            _check_name(name, names)
            steps.append(("tr", name))
            names.append(name)
            continue
        if isinstance(spec, _RawAlgebraic):
            name = spec.name
            _check_name(name, names)
            coeffs = list(spec.minpoly_values)
        elif isinstance(spec, Algebraic):
            name = spec.name
            _check_name(name, names)
            coeffs = []
            for c in spec.minpoly:
                if isinstance(c, Scalar):
                    if c.tower.num_levels > lv or not c.tower.is_prefix_of(tw):
                        raise TowerMismatch(
                            f"minpoly coefficient for {name} lives outside the lower tower")
                    v = c.val
                    for k in range(c.tower.num_levels + 1, lv + 1):
                        v = _lift_one(tw, k, v)
                    coeffs.append(v)
                else:
                    coeffs.append(_from_fraction(tw, lv, Fraction(c)))
        else:
            raise TypeError(f"unknown tower step descriptor: {spec!r}")
        coeffs = _pstrip(tw, lv, coeffs)
        if len(coeffs) < 3:
            raise NonMonic(f"minimal polynomial of {name} must have degree >= 2")
        if not _is_zero(tw, lv, _sub(tw, lv, coeffs[-1], _one(tw, lv))):
            raise NonMonic(f"minimal polynomial of {name} is not monic")
        for cand in _root_candidates(tw, lv):
            if _is_zero(tw, lv, _peval(tw, lv, coeffs, cand)):
                raise ReducibleMinpoly(
                    f"minimal polynomial of {name} vanishes at {_render(tw, lv, cand)}")
        steps.append(("alg", name, tuple(coeffs)))
        names.append(name)
        # separability probe: m'(g) must be invertible in the new tower
        tw2 = Tower(tuple(steps), tuple(names))
        mprime = _pformal_deriv(tw2, lv, list(coeffs))
        val = ("a", _amod(tw2, lv + 1, mprime))
        _inv(tw2, lv + 1, val)
    return Tower(tuple(steps), tuple(names))


def _check_name(name, names):
    if not name.isidentifier():
        raise DuplicateName(f"bad generator name {name!r}")
    if name in names:
        raise DuplicateName(f"generator {name!r} declared twice")


class Scalar:
    """An element of a tower field, in canonical form."""

    __slots__ = ("tower", "val")

    def __init__(self, tower, val):
        self.tower = tower
        self.val = val

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.tower != self.tower:
                raise TowerMismatch("scalars from different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.from_fraction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tw = self.tower
        return Scalar(tw, _add(tw, tw.num_levels, self.val, o.val))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tw = self.tower
        return Scalar(tw, _sub(tw, tw.num_levels, self.val, o.val))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tw = self.tower
        return Scalar(tw, _sub(tw, tw.num_levels, o.val, self.val))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tw = self.tower
        return Scalar(tw, _mul(tw, tw.num_levels, self.val, o.val))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tw = self.tower
        return Scalar(tw, _div(tw, tw.num_levels, self.val, o.val))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tw = self.tower
        return Scalar(tw, _div(tw, tw.num_levels, o.val, self.val))

    def __neg__(self):
        tw = self.tower
        return Scalar(tw, _neg(tw, tw.num_levels, self.val))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        tw = self.tower
        if n < 0:
            base = Scalar(tw, _inv(tw, tw.num_levels, self.val))
            n = -n
        else:
            base = self
        out = tw.one()
        for _ in range(n):
            out = out * base
        return out

    def inv(self):
        tw = self.tower
        return Scalar(tw, _inv(tw, tw.num_levels, self.val))

    def d(self, level):
        """Partial derivative with respect to the transcendental generator at ``level``."""
        tw = self.tower
        if tw.steps[level - 1][0] != "tr":
            raise ValueError(f"level {level} is not a transcendental step")
        return Scalar(tw, _dgen(tw, tw.num_levels, self.val, level))

    def is_zero(self):
        tw = self.tower
        return _is_zero(tw, tw.num_levels, self.val)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.tower == other.tower and self.val == other.val

    def __hash__(self):
        return hash((self.tower.names, self.val))

    def __str__(self):
        tw = self.tower
        return _render(tw, tw.num_levels, self.val)

    def __repr__(self):
        return f"Scalar({self})"


QQ = make_tower([])
