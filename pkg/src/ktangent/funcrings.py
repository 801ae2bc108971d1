"""Function rings of affine charts and their dual-number extensions.

A FunctionRing models the fraction field of K[x_1..x_n] or of
K[x_1..x_n]/(F) with F monic in one (eliminated) variable.  Elements are
canonical fractions num/den: num reduced modulo the relation, den free of
the eliminated variable (denominators are rationalized), the pair in
lowest terms with num's graded-lex leading coefficient equal to 1.

DualElem adjoins a square-zero infinitesimal: body + eps * slope.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DivisionByZero,
    DuplicateName,
    NameClash,
    NonMonic,
    NonUnitBody,
    RingMismatch,
    SingularRelation,
)
from .mpoly import MPoly, div_exact, mp_gcd, reduce_mod
from .scalars import Scalar

_PROBE = [Fraction(v) for v in (0, 1, -1, 2, -2, 3)] + [Fraction(1, 2), Fraction(-1, 2)]


class FunctionRing:
    """Chart coordinate ring (optionally with one monic relation)."""

    __slots__ = ("tower", "varnames", "relation", "elim")

    def __init__(self, tower, varnames, relation=None, smooth_check=True):
        varnames = tuple(varnames)
        if len(set(varnames)) != len(varnames):
            raise DuplicateName(f"repeated variable in {varnames}")
        for nm in varnames:
            if nm in tower.names:
                raise NameClash(f"variable {nm!r} collides with a tower generator")
        self.tower = tower
        self.varnames = varnames
        self.relation = relation
        self.elim = None
        if relation is not None:
            if relation.tower != tower or relation.nvars != len(varnames):
                raise RingMismatch("relation polynomial belongs to a different ring")
            self.elim = self._pick_elim(relation)
            if smooth_check:
                self._probe_smooth(relation)

    def _pick_elim(self, rel):
        for v in range(len(self.varnames) - 1, -1, -1):
            d = rel.degree_in(v)
            if d >= 2 and rel.coeff_of(v, d) == 1:
                return v
        raise NonMonic("relation must be monic of degree >= 2 in some variable")

    def _probe_smooth(self, rel):
        """Bounded search for a singular point among small rational tuples."""
        n = len(self.varnames)
        grads = [rel.deriv(v) for v in range(n)]

        def walk(vals):
            if len(vals) == n:
                pt = [self.tower.from_fraction(f) for f in vals]
                if not rel.eval_scalars(pt).is_zero():
                    return
                if all(g.eval_scalars(pt).is_zero() for g in grads):
                    raise SingularRelation(
                        f"relation is singular at ({', '.join(map(str, vals))})")
                return
            for f in _PROBE:
                walk(vals + [f])

        walk([])

    # -- element constructors

    def const(self, c):
        return RingElem(self, MPoly.const(self.tower, len(self.varnames), c), None)

    def zero(self):
        return self.const(0)

    def one(self):
        return self.const(1)

    def var(self, name):
        i = self.varnames.index(name)
        return RingElem(self, MPoly.variable(self.tower, len(self.varnames), i), None)

    def gens(self):
        return {nm: self.var(nm) for nm in self.varnames}

    def from_mpoly(self, num, den=None):
        return RingElem(self, num, den)

    def mpoly_var(self, i):
        return MPoly.variable(self.tower, len(self.varnames), i)

    def _invert_reduced(self, den):
        """Invert a relation-ring element with den containing the eliminated var.

        Returns (P, q): P basis-reduced, q free of the eliminated variable,
        with den * P = q in the quotient ring.
        """
        rel, v = self.relation, self.elim
        d = rel.degree_in(v)
        cols = []
        for i in range(d):
            img = reduce_mod(den.shift(v, i), rel, v)
            cols.append([img.coeff_of(v, j) for j in range(d)])
        mat = [[_MF(cols[i][j]) for i in range(d)] for j in range(d)]
        rhs = [_MF(MPoly.const(self.tower, len(self.varnames), 1 if j == 0 else 0))
               for j in range(d)]
        sol = _solve_mf(mat, rhs)
        if sol is None:
            raise DivisionByZero("denominator is not invertible modulo the relation")
        q = sol[0].den
        for s in sol[1:]:
            q = div_exact(q * s.den, mp_gcd(q, s.den))
        P = MPoly.const(self.tower, len(self.varnames), 0)
        for j, s in enumerate(sol):
            P = P + (s.num * div_exact(q, s.den)).shift(v, j)
        return P, q

    def __eq__(self, other):
        return (isinstance(other, FunctionRing) and self.tower == other.tower
                and self.varnames == other.varnames and self.relation == other.relation)

    def __hash__(self):
        return hash((self.tower, self.varnames))

    def __repr__(self):
        base = f"{self.tower!r}[{', '.join(self.varnames)}]"
        if self.relation is None:
            return base
        return f"{base}/({self.relation.render(self.varnames)})"


class _MF:
    """Fraction of MPolys; just enough for small linear solves."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = MPoly.const(num.tower, num.nvars, 1)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            den = MPoly.const(num.tower, num.nvars, 1)
        else:
            g = mp_gcd(num, den)
            if not (g.is_constant() and g.constant_value() == 1):
                num, den = div_exact(num, g), div_exact(den, g)
        self.num = num
        self.den = den

    def add(self, o):
        return _MF(self.num * o.den + o.num * self.den, self.den * o.den)

    def sub(self, o):
        return _MF(self.num * o.den - o.num * self.den, self.den * o.den)

    def mul(self, o):
        return _MF(self.num * o.num, self.den * o.den)

    def div(self, o):
        if o.num.is_zero():
            raise DivisionByZero("division by zero fraction")
        return _MF(self.num * o.den, self.den * o.num)

    def is_zero(self):
        return self.num.is_zero()


def _solve_mf(mat, rhs):
    """Gaussian elimination over _MF; returns solution list or None if singular."""
    n = len(mat)
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        for r in range(n):
            if r == col or m[r][col].is_zero():
                continue
            f = m[r][col].div(pv)
            m[r] = [a.sub(f.mul(b)) for a, b in zip(m[r], m[col])]
    return [m[i][n].div(m[i][i]) for i in range(n)]


class RingElem:
    """Canonical fraction in a function ring."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring, num, den=None):
        if den is None:
            den = MPoly.const(ring.tower, len(ring.varnames), 1)
        rel, v = ring.relation, ring.elim
        if rel is not None:
            num = reduce_mod(num, rel, v)
            den = reduce_mod(den, rel, v)
            if den.is_zero():
                raise DivisionByZero("zero denominator")
            if den.degree_in(v) > 0:
                inv_p, inv_q = ring._invert_reduced(den)
                num = reduce_mod(num * inv_p, rel, v)
                den = inv_q
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.ring = ring
            self.num = num
            self.den = MPoly.const(ring.tower, len(ring.varnames), 1)
            return
        if not (den.is_constant() or num.is_constant()):
            g = mp_gcd(num, den)
            if not (g.is_constant() and g.constant_value() == 1):
                num, den = div_exact(num, g), div_exact(den, g)
        _, lc = num.lead_term()
        if not (lc == 1):
            c = lc.inv()
            num = num * c
            den = den * c
        self.ring = ring
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise RingMismatch("elements of different function rings")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RingElem(self.ring, self.num + o.num, self.den)
        return RingElem(self.ring, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ring, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElem(self.ring, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def inv(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RingElem(self.ring, self.den, self.num)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        b = self if n >= 0 else self.inv()
        out = self.ring.one()
        for _ in range(abs(n)):
            out = out * b
        return out

    def is_zero(self):
        return self.num.is_zero()

    def is_unit(self):
        return not self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = self.ring.const(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return (self.ring == other.ring and self.num.terms == other.num.terms
                and self.den.terms == other.den.terms)

    def __hash__(self):
        return hash((frozenset(self.num.terms.items()), frozenset(self.den.terms.items())))

    def __str__(self):
        ns = self.num.render(self.ring.varnames)
        if self.den.is_constant() and self.den.constant_value() == 1:
            return ns
        ds = self.den.render(self.ring.varnames)
        if " " in ns or "/" in ns:
            ns = f"({ns})"
        if " " in ds or "/" in ds or "*" in ds or "^" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"RingElem({self})"


class DualElem:
    """body + eps * slope over a function ring, with eps^2 = 0."""

    __slots__ = ("ring", "body", "slope")

    def __init__(self, ring, body, slope=None):
        if slope is None:
            slope = ring.zero()
        if body.ring != ring or slope.ring != ring:
            raise RingMismatch("dual parts from a different ring")
        self.ring = ring
        self.body = body
        self.slope = slope

    def _coerce(self, other):
        if isinstance(other, DualElem):
            if other.ring != self.ring:
                raise RingMismatch("dual numbers over different rings")
            return other
        if isinstance(other, RingElem):
            return DualElem(self.ring, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return DualElem(self.ring, self.ring.const(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualElem(self.ring, self.body + o.body, self.slope + o.slope)

    __radd__ = __add__

    def __neg__(self):
        return DualElem(self.ring, -self.body, -self.slope)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualElem(self.ring, self.body * o.body,
                        self.body * o.slope + self.slope * o.body)

    __rmul__ = __mul__

    def inv(self):
        if self.body.is_zero():
            raise NonUnitBody("dual number with zero body has no inverse")
        b = self.body.inv()
        return DualElem(self.ring, b, -(b * b) * self.slope)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        b = self if n >= 0 else self.inv()
        out = DualElem(self.ring, self.ring.one())
        for _ in range(abs(n)):
            out = out * b
        return out

    def specialize(self):
        """Set eps to 0."""
        return self.body

    def is_unit(self):
        return self.body.is_unit()

    def is_zero(self):
        return self.body.is_zero() and self.slope.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar, RingElem)):
            other = self._coerce(other)
        if not isinstance(other, DualElem):
            return NotImplemented
        return self.ring == other.ring and self.body == other.body and self.slope == other.slope

    def __hash__(self):
        return hash((self.body, self.slope))

    def __str__(self):
        if self.slope.is_zero():
            return str(self.body)
        return f"({self.body}) + eps*({self.slope})"

    def __repr__(self):
        return f"DualElem({self})"


def transport(elem, vals, target):
    """Substitute ring variables by target-ring elements (chart transition map)."""
    num = elem.num.eval_generic(vals, target.one())
    den = elem.den.eval_generic(vals, target.one())
    return num / den
