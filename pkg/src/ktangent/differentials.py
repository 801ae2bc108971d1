"""Exterior algebra over function rings, relative to a choice of base.

A BaseTag says which part of the scalar tower is treated as constants:
``level`` k kills d(g) for every generator at tower level <= k, while the
transcendental generators above k contribute genuine letters d(g).  Ring
variables always contribute letters, except a relation's eliminated
variable, whose differential expands through implicit differentiation.
Dual-number coefficients come in two flavors: ``eps="base"`` differentiates
over the dual base (d(eps) = 0) and ``eps="free"`` keeps d(eps) as an extra
letter, with eps * d(eps) = 0 because eps squares to zero.

Forms are dicts from sorted letter tuples to coefficients; structural
equality is semantic equality.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BaseIncompatible, Mismatch, NoDualBase, NotAnEnlargement, RingMismatch
from .funcrings import DualElem, RingElem, transport
from .scalars import Scalar


class BaseTag:
    """Base of the derivation: tower level held constant, plus the eps mode."""

    __slots__ = ("level", "eps")

    def __init__(self, level, eps="none"):
        if eps not in ("none", "free", "base"):
            raise ValueError(f"bad eps mode {eps!r}")
        self.level = level
        self.eps = eps

    def is_dual(self):
        return self.eps != "none"

    def __eq__(self, other):
        return (isinstance(other, BaseTag) and self.level == other.level
                and self.eps == other.eps)

    def __hash__(self):
        return hash((self.level, self.eps))

    def __repr__(self):
        if self.eps == "none":
            return f"BaseTag(level={self.level})"
        return f"BaseTag(level={self.level}, eps={self.eps})"


def base_q():
    """Differentiate over Q: every tower generator gets a letter."""
    return BaseTag(0)


def base_level(k):
    return BaseTag(k)


def base_top(tower):
    """Differentiate over the whole tower (the analytic-model base)."""
    return BaseTag(tower.num_levels)


def absolute_on_dual(level=0):
    """d on A[eps] with eps free: d(eps) is a letter and eps*d(eps) = 0."""
    return BaseTag(level, "free")


def dual_relative(tower):
    """d on A[eps] over (base tower)[eps]: dual coefficients, d(eps) = 0."""
    return BaseTag(tower.num_levels, "base")


# letters: ("v", var_index) | ("t", tower_level) | ("e",)

_letters_cache = {}


def letters_of(ring, base):
    key = (ring, base)
    got = _letters_cache.get(key)
    if got is not None:
        return got
    letters = []
    for i in range(len(ring.varnames)):
        if i != ring.elim:
            letters.append(("v", i))
    for lv in ring.tower.transcendental_levels():
        if lv > base.level:
            letters.append(("t", lv))
    if base.eps == "free":
        letters.append(("e",))
    _letters_cache[key] = letters
    return letters


def letter_name(ring, letter):
    if letter[0] == "v":
        return "d" + ring.varnames[letter[1]]
    if letter[0] == "t":
        return "d" + ring.tower.names[letter[1] - 1]
    return "deps"


class DiffForm:
    """A differential form of fixed degree over (ring, base)."""

    __slots__ = ("ring", "base", "degree", "terms")

    def __init__(self, ring, base, degree, terms):
        self.ring = ring
        self.base = base
        self.degree = degree
        clean = {}
        for key, c in terms.items():
            if base.eps == "free" and any(l[0] == "e" for l in key):
                # eps * d(eps) = 0: the d(eps) component lives in A, not A[eps]
                if isinstance(c, DualElem) and not c.slope.is_zero():
                    c = DualElem(ring, c.body)
            if isinstance(c, (RingElem, DualElem)) and c.is_zero():
                continue
            clean[key] = c
        self.terms = clean

    # -- constructors

    @classmethod
    def zero(cls, ring, base, degree=0):
        return cls(ring, base, degree, {})

    @classmethod
    def of_elem(cls, elem, base):
        """Wrap a ring element (degree-0 form)."""
        ring = elem.ring
        if base.is_dual() and isinstance(elem, RingElem):
            elem = DualElem(ring, elem)
        if not base.is_dual() and isinstance(elem, DualElem):
            raise NoDualBase("dual coefficient over a plain base")
        return cls(ring, base, 0, {(): elem})

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch("forms over different rings")
        if self.base != other.base:
            raise BaseIncompatible(f"forms over {self.base!r} and {other.base!r}")

    def __add__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        self._check(other)
        if self.degree != other.degree:
            raise Mismatch("adding forms of different degree")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return DiffForm(self.ring, self.base, self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DiffForm(self.ring, self.base, self.degree,
                        {k: -c for k, c in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, Scalar)):
            c = self.ring.const(c)
        if isinstance(c, RingElem) and self.base.is_dual():
            c = DualElem(self.ring, c)
        if isinstance(c, DualElem) and not self.base.is_dual():
            raise NoDualBase("dual scalar on a plain-base form")
        return DiffForm(self.ring, self.base, self.degree,
                        {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self.ring == other.ring and self.base == other.base
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.keys())))

    def coeff(self, key):
        z = self.ring.zero()
        if self.base.is_dual():
            z = DualElem(self.ring, z)
        return self.terms.get(tuple(key), z)

    def __str__(self):
        if not self.terms:
            return "0"
        letters = letters_of(self.ring, self.base)
        order = {l: i for i, l in enumerate(letters)}
        bits = []
        for key in sorted(self.terms, key=lambda k: tuple(order[l] for l in k)):
            c = self.terms[key]
            cs = str(c)
            if any(ch in cs for ch in "+-*/ ") and not (cs.startswith("(") and cs.endswith(")")):
                cs = f"({cs})"
            mono = " ^ ".join(letter_name(self.ring, l) for l in key)
            bits.append(f"{cs} {mono}".strip())
        return "  +  ".join(bits)

    def __repr__(self):
        return f"DiffForm<{self.degree}>({self})"


def _letter_sort_key(ring, base):
    letters = letters_of(ring, base)
    return {l: i for i, l in enumerate(letters)}


def _merge_letters(order, k1, k2):
    """Merge two sorted letter tuples; return (sign, merged) or (0, None)."""
    i, j = 0, 0
    out = []
    sign = 1
    while i < len(k1) and j < len(k2):
        a, b = order[k1[i]], order[k2[j]]
        if a == b:
            return 0, None
        if a < b:
            out.append(k1[i])
            i += 1
        else:
            # k2[j] hops over the remaining letters of k1
            if (len(k1) - i) % 2 == 1:
                sign = -sign
            out.append(k2[j])
            j += 1
    out.extend(k1[i:])
    out.extend(k2[j:])
    return sign, tuple(out)


def wedge(a, b):
    """Exterior product of forms over the same (ring, base)."""
    a._check(b)
    order = _letter_sort_key(a.ring, a.base)
    out = {}
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            sign, key = _merge_letters(order, k1, k2)
            if sign == 0:
                continue
            c = c1 * c2
            if sign < 0:
                c = -c
            s = out.get(key)
            out[key] = c if s is None else s + c
    return DiffForm(a.ring, a.base, a.degree + b.degree, out)


# -- exterior derivative ----------------------------------------------------

_delim_cache = {}


def _delim_parts(ring, base):
    """Expansion of d(eliminated var) as {letter: RingElem} via implicit diff."""
    key = (ring, base)
    got = _delim_cache.get(key)
    if got is not None:
        return got
    rel, v = ring.relation, ring.elim
    f_v = RingElem(ring, rel.deriv(v))
    parts = {}
    for letter in letters_of(ring, base):
        if letter[0] == "v":
            p = RingElem(ring, rel.deriv(letter[1]))
        elif letter[0] == "t":
            p = RingElem(ring, rel.coeff_deriv(letter[1]))
        else:
            continue
        if p.is_zero():
            continue
        parts[letter] = -(p / f_v)
    _delim_cache[key] = parts
    return parts


def _d_mpoly(ring, base, P):
    """d of a polynomial as {letter: RingElem}, including the chain rule
    through the eliminated variable."""
    out = {}
    delim = _delim_parts(ring, base) if ring.relation is not None else None
    p_elim = P.deriv(ring.elim) if ring.elim is not None else None
    for letter in letters_of(ring, base):
        if letter[0] == "v":
            c = RingElem(ring, P.deriv(letter[1]))
        elif letter[0] == "t":
            c = RingElem(ring, P.coeff_deriv(letter[1]))
        else:
            continue
        if delim is not None and letter in delim and not p_elim.is_zero():
            c = c + RingElem(ring, p_elim) * delim[letter]
        if not c.is_zero():
            out[letter] = c
    return out


def _d_ringelem(f, base):
    """Quotient rule; returns {letter: RingElem}."""
    ring = f.ring
    dn = _d_mpoly(ring, base, f.num)
    dd = _d_mpoly(ring, base, f.den)
    den = RingElem(ring, f.den)
    num = RingElem(ring, f.num)
    out = {}
    for letter in set(dn) | set(dd):
        a = dn.get(letter, ring.zero())
        b = dd.get(letter, ring.zero())
        c = (a * den - num * b) / (den * den)
        if not c.is_zero():
            out[letter] = c
    return out


def d(obj, base=None):
    """Exterior derivative of a ring element, dual element, or form."""
    if isinstance(obj, DiffForm):
        if base is not None and base != obj.base:
            raise BaseIncompatible("explicit base disagrees with the form's base")
        return _d_form(obj)
    if base is None:
        raise TypeError("d of a ring element needs a base")
    ring = obj.ring
    if isinstance(obj, RingElem):
        if base.is_dual():
            obj = DualElem(ring, obj)
        else:
            return DiffForm(ring, base, 1,
                            {(letter,): c for letter, c in _d_ringelem(obj, base).items()})
    if not isinstance(obj, DualElem):
        raise TypeError(f"cannot differentiate {obj!r}")
    if not base.is_dual():
        raise NoDualBase("dual element differentiated over a plain base")
    da = _d_ringelem(obj.body, base)
    db = _d_ringelem(obj.slope, base)
    terms = {}
    for letter in set(da) | set(db):
        terms[(letter,)] = DualElem(ring, da.get(letter, ring.zero()),
                                    db.get(letter, ring.zero()))
    if base.eps == "free" and not obj.slope.is_zero():
        terms[(("e",),)] = DualElem(ring, obj.slope)
    return DiffForm(ring, base, 1, terms)


def _d_form(w):
    ring, base = w.ring, w.base
    order = _letter_sort_key(ring, base)
    out = DiffForm.zero(ring, base, w.degree + 1)
    for key, c in w.terms.items():
        dc = d(c, base)
        merged = {}
        for (letter,), cc in dc.terms.items():
            sign, k = _merge_letters(order, (letter,), key)
            if sign == 0:
                continue
            v = cc if sign > 0 else -cc
            s = merged.get(k)
            merged[k] = v if s is None else s + v
        out = out + DiffForm(ring, base, w.degree + 1, merged)
    return out


def dlog(f, base):
    """d(f)/f for a unit f (ring or dual element)."""
    return d(f, base) * f.inv()


def contract_deps(w):
    """Coefficient of the trailing d(eps), with eps then set to 0.

    Letters sort with d(eps) last, so stored coefficients already carry the
    sign of commuting d(eps) to the end of the word.
    """
    if w.base.eps != "free":
        raise NoDualBase("contract_deps needs a free-eps base")
    ring = w.ring
    tgt = BaseTag(w.base.level, "none")
    out = {}
    for key, c in w.terms.items():
        if key and key[-1] == ("e",):
            out[key[:-1]] = c.body if isinstance(c, DualElem) else c
    return DiffForm(ring, tgt, max(w.degree - 1, 0), out)


def specialize_eps(w):
    """Set eps = 0 (and drop d(eps) terms): lands over the plain base."""
    if not w.base.is_dual():
        return w
    ring = w.ring
    tgt = BaseTag(w.base.level, "none")
    out = {}
    for key, c in w.terms.items():
        if any(l[0] == "e" for l in key):
            continue
        body = c.body if isinstance(c, DualElem) else c
        if not body.is_zero():
            out[key] = body
    return DiffForm(ring, tgt, w.degree, out)


def eps_part(w):
    """The slope component: w = specialize(w) + eps * eps_part(w) (no d(eps) terms)."""
    if not w.base.is_dual():
        raise NoDualBase("eps_part of a plain form")
    ring = w.ring
    tgt = BaseTag(w.base.level, "none")
    out = {}
    for key, c in w.terms.items():
        if any(l[0] == "e" for l in key):
            continue
        slope = c.slope if isinstance(c, DualElem) else ring.zero()
        if not slope.is_zero():
            out[key] = slope
    return DiffForm(ring, tgt, w.degree, out)


def base_change(w, to):
    """Enlarge the base: letters d(g) with g now in the base are killed."""
    frm = w.base
    if to.eps != frm.eps or to.level < frm.level:
        raise NotAnEnlargement(f"cannot change base {frm!r} -> {to!r}")
    out = {}
    for key, c in w.terms.items():
        if any(l[0] == "t" and l[1] <= to.level for l in key):
            continue
        out[key] = c
    return DiffForm(w.ring, to, w.degree, out)


def base_change_kernel_letters(ring, frm, to):
    """The letters annihilated by base_change, rendered as strings."""
    if to.eps != frm.eps or to.level < frm.level:
        raise NotAnEnlargement(f"cannot change base {frm!r} -> {to!r}")
    out = []
    for lv in ring.tower.transcendental_levels():
        if frm.level < lv <= to.level:
            out.append(letter_name(ring, ("t", lv)))
    return out


def pullback(w, subst, target_ring):
    """Transport a form along a chart substitution (source var -> target elem).

    ``subst`` lists an image for every source variable, eliminated one
    included (needed to transport coefficients).
    """
    base = w.base
    if target_ring.tower != w.ring.tower:
        raise RingMismatch("pullback between different towers")
    letter_imgs = {}
    for letter in letters_of(w.ring, base):
        if letter[0] == "v":
            letter_imgs[letter] = d(subst[letter[1]], base)
        else:
            letter_imgs[letter] = DiffForm(target_ring, base, 1,
                                           {(letter,): _one_coeff(target_ring, base)})
    out = DiffForm.zero(target_ring, base, w.degree)
    for key, c in w.terms.items():
        if isinstance(c, DualElem):
            cc = DualElem(target_ring,
                          transport(c.body, subst, target_ring),
                          transport(c.slope, subst, target_ring))
        else:
            cc = transport(c, subst, target_ring)
        term = DiffForm(target_ring, base, 0, {(): cc})
        for letter in key:
            term = wedge(term, letter_imgs[letter])
        out = out + term
    return out


def _one_coeff(ring, base):
    one = ring.one()
    return DualElem(ring, one) if base.is_dual() else one
