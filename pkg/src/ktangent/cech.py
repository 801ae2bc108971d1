"""Desk-scale Čech cohomology and hypercohomology on small covers.

Covers: the standard affine covers of P^1 and P^2, and a two-chart cover of
a smooth plane cubic in Weierstrass form.  Section spaces are truncated to
finite monomial windows; all linear algebra is exact.  A computation is
trusted only when the reported dimensions agree at two window sizes
(``stabilized``).

Section models
--------------
On P^n a section of O(d) over the intersection U_S is a homogeneous Laurent
monomial X^a with sum(a) = d and negative exponents only at indices in S.
A section of Omega^r over U_S is a sum of X^a dy_J with sum(a) = 0, where
y_j = X_j / X_min(S) are the affine coordinates of the smallest chart in S.
Both kinds restrict along inclusions S in T by exact rewriting, and the
windows are sized so that every restriction and every exterior derivative
of a window element stays inside the target window: the truncated complex
is a genuine subcomplex, and its differential squares to zero on the nose.

On the cubic y^2 = g(x) (deg g = 3, monic) the two charts are z != 0 and
y != 0.  Chart sections are spanned by x^i y^delta and xb^i zb^j; overlap
sections by the partial-fraction family x^i y^delta g^{-e}.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .differentials import DiffForm, base_top, d, pullback, wedge
from .errors import (
    Mismatch,
    NotStabilized,
    SingularRelation,
    Unsupported,
    WindowOverflow,
)
from .funcrings import FunctionRing, transport
from .linalg import RowSpan, kernel_basis
from .mpoly import MPoly, mp_gcd


class TruncationPolicy:
    """Window size D and the stabilization increment delta."""

    __slots__ = ("D", "delta")

    def __init__(self, D=2, delta=2):
        if D < 1 or delta < 1:
            raise ValueError("truncation policy needs D >= 1 and delta >= 1")
        self.D = D
        self.delta = delta

    def to_dict(self):
        return {"D": self.D, "delta": self.delta}

    def __repr__(self):
        return f"TruncationPolicy(D={self.D}, delta={self.delta})"


class Sheaf:
    """What to take sections of: Omega^r at a base, or a twist O(d)."""

    __slots__ = ("r", "twist", "base")

    def __init__(self, r, twist, base):
        self.r = r
        self.twist = twist
        self.base = base

    @classmethod
    def forms(cls, r, base=None):
        return cls(r, 0, base)

    @classmethod
    def twisted(cls, dtw):
        return cls(0, dtw, None)

    def describe(self):
        if self.twist:
            return f"O({self.twist})"
        return f"Omega^{self.r}"


class _Model:
    """An intersection: the smallest chart's ring plus inverted coordinates."""

    __slots__ = ("ring", "inverted", "subs")

    def __init__(self, ring, inverted, subs):
        self.ring = ring
        self.inverted = inverted
        self.subs = subs


class Cover:
    __slots__ = ("kind", "tower", "charts", "intersections", "n", "gcoeffs")

    def __init__(self, kind, tower, charts, intersections, n=None, gcoeffs=None):
        self.kind = kind
        self.tower = tower
        self.charts = charts
        self.intersections = intersections
        self.n = n
        self.gcoeffs = gcoeffs

    def subsets(self, size):
        return [tuple(c) for c in combinations(range(len(self.charts)), size)]

    def model(self, S):
        return self.intersections[tuple(sorted(S))]

    @property
    def qmax(self):
        return len(self.charts) - 1


def _pn_varname(n, i, j):
    """Name of the coordinate X_j/X_i on chart i."""
    if n == 1:
        return "z" if i == 0 else "w"
    return {0: "u", 1: "v", 2: "w"}[i] + str(j)


def _ratio(cover, m, j):
    """X_j / X_m as an element of chart m's ring (= 1 when j == m)."""
    ring = cover.charts[m]
    if j == m:
        return ring.one()
    return ring.var(_pn_varname(cover.n, m, j))


def cover_pn(n, tower):
    """The standard (n+1)-chart affine cover of P^n, n in {1, 2}."""
    if n not in (1, 2):
        raise Unsupported(f"projective cover only modeled for n in {{1, 2}}, got {n}")
    charts = []
    for i in range(n + 1):
        names = tuple(_pn_varname(n, i, j) for j in range(n + 1) if j != i)
        charts.append(FunctionRing(tower, names))
    cover = Cover("pn", tower, charts, {}, n=n)
    for size in range(1, n + 2):
        for S in cover.subsets(size):
            m = min(S)
            ring = charts[m]
            inverted = [_ratio(cover, m, k) for k in S if k != m]
            subs = {}
            for i in S:
                imgs = []
                for j in range(n + 1):
                    if j == i:
                        continue
                    imgs.append(_ratio(cover, m, j) / _ratio(cover, m, i))
                subs[i] = imgs
            cover.intersections[S] = _Model(ring, inverted, subs)
    verify_cover(cover)
    return cover


def cover_plane_curve(F, tower):
    """Two-chart cover of the plane cubic F = 0, F = Y^2 Z - g_h(X, Z).

    F is a homogeneous cubic MPoly in three variables (X, Y, Z) whose
    dehomogenization at Z has the shape y^2 = g(x) with g monic of degree 3
    and g(0) != 0 (translate x if needed).  Smoothness is checked exactly
    via gcd(g, g').
    """
    if F.tower != tower or F.nvars != 3:
        raise Unsupported("curve equation must be a 3-variable polynomial over the tower")
    c1 = None
    for mono, c in F.terms.items():
        if mono[1] not in (0, 2) or sum(mono) != 3:
            raise Unsupported("curve equation must be a homogeneous cubic "
                              "Y^2*Z - (cubic in X, Z)")
        if mono[1] == 2:
            if mono != (0, 2, 1):
                raise Unsupported("the Y-part of the cubic must be exactly Y^2*Z")
            c1 = c
    if c1 is None or c1.is_zero():
        raise Unsupported("curve equation needs a Y^2*Z term")
    # normalize so F = Y^2 Z - X^3 - g2 X^2 Z - g1 X Z^2 - g0 Z^3
    gc = {}
    for mono, c in F.terms.items():
        if mono[1] == 2:
            continue
        gc[mono[0]] = -(c / c1)
    if gc.get(3, tower.zero()) != tower.one():
        raise Unsupported("the cubic must be monic in X after normalizing Y^2*Z")
    g0 = gc.get(0, tower.zero())
    g1 = gc.get(1, tower.zero())
    g2 = gc.get(2, tower.zero())
    # exact smoothness: y^2 = g(x) is singular iff g has a repeated root
    gx = MPoly.const(tower, 1, 0)
    for k, c in ((0, g0), (1, g1), (2, g2), (3, tower.one())):
        gx = gx + MPoly.const(tower, 1, c) * MPoly.variable(tower, 1, 0) ** k
    if not mp_gcd(gx, gx.deriv(0)).is_constant():
        raise SingularRelation("the cubic has a repeated root: the curve is singular")
    if g0.is_zero():
        raise Unsupported("need g(0) != 0 for the second chart; translate x first")

    ra = FunctionRing(tower, ("x", "y"), _chart_a_relation(tower, g0, g1, g2))
    rb = FunctionRing(tower, ("xb", "zb"), _chart_b_relation(tower, g0, g1, g2))
    x, y = ra.var("x"), ra.var("y")
    cover = Cover("curve", tower, [ra, rb], {}, gcoeffs=(g0, g1, g2))
    cover.intersections[(0,)] = _Model(ra, [], {0: [x, y]})
    cover.intersections[(1,)] = _Model(rb, [], {1: [rb.var("xb"), rb.var("zb")]})
    cover.intersections[(0, 1)] = _Model(ra, [y], {0: [x, y], 1: [x / y, y.inv()]})
    # the second chart's relation must vanish under the transition map
    imgs = cover.intersections[(0, 1)].subs[1]
    pulled = _chart_b_relation(tower, g0, g1, g2).eval_generic(imgs, ra.one())
    if not pulled.is_zero():
        raise Mismatch("chart transition does not carry the relation to zero")
    verify_cover(cover)
    return cover


def _chart_a_relation(tower, g0, g1, g2):
    x = MPoly.variable(tower, 2, 0)
    y = MPoly.variable(tower, 2, 1)
    c = lambda v: MPoly.const(tower, 2, v)
    return y * y - x ** 3 - c(g2) * x * x - c(g1) * x - c(g0)


def _chart_b_relation(tower, g0, g1, g2):
    # F / Y^3 with xb = X/Y, zb = Z/Y, scaled monic in zb:
    # zb^3 + (g1/g0) xb zb^2 + (g2/g0) xb^2 zb - zb/g0 + xb^3/g0
    xb = MPoly.variable(tower, 2, 0)
    zb = MPoly.variable(tower, 2, 1)
    c = lambda v: MPoly.const(tower, 2, v)
    inv = tower.one() / g0
    return (zb ** 3 + c(g1 * inv) * xb * zb * zb + c(g2 * inv) * xb * xb * zb
            - c(inv) * zb + c(inv) * xb ** 3)


def verify_cover(cover):
    """Check that restriction substitutions compose along every inclusion."""
    nch = len(cover.charts)
    for size in range(1, nch):
        for S in cover.subsets(size):
            mdl_s = cover.model(S)
            for k in range(nch):
                if k in S:
                    continue
                T = tuple(sorted(S + (k,)))
                mdl_t = cover.model(T)
                bridge = mdl_t.subs[min(S)]
                for i in S:
                    got = [transport(e, bridge, mdl_t.ring) for e in mdl_s.subs[i]]
                    if got != mdl_t.subs[i]:
                        raise Mismatch(
                            f"substitutions for chart {i} disagree along {S} in {T}")


def extend_cover(cover, tower):
    """The same cover with scalars embedded into a larger tower."""
    if cover.kind == "pn":
        return cover_pn(cover.n, tower)
    g0, g1, g2 = (tower.embed(c) for c in cover.gcoeffs)
    return cover_plane_curve(_weierstrass(tower, g0, g1, g2), tower)


def _weierstrass(tower, g0, g1, g2):
    """The homogeneous cubic Y^2 Z - X^3 - g2 X^2 Z - g1 X Z^2 - g0 Z^3."""
    X = MPoly.variable(tower, 3, 0)
    Y = MPoly.variable(tower, 3, 1)
    Z = MPoly.variable(tower, 3, 2)
    c = lambda v: MPoly.const(tower, 3, v)
    return Y * Y * Z - X ** 3 - c(g2) * X * X * Z - c(g1) * X * Z * Z - c(g0) * Z ** 3


def weierstrass_cubic(tower, a, b, c):
    """Convenience: the cubic for y^2 = x^3 + a x^2 + b x + c."""
    fr = tower.from_fraction
    return _weierstrass(tower, fr(Fraction(c)), fr(Fraction(b)), fr(Fraction(a)))


# ---------------------------------------------------------------------------
# the engine: truncated total complex of a (possibly one-row) double complex


class CechEngine:
    """Bases and exact differentials at one window size.

    ``rows`` maps a complex degree j to the form degree of its term; a bare
    sheaf is the single row {0: r}.  Total degree k holds the blocks
    (q = k - j, j); the total differential is the Čech differential plus
    (-1)^q times the exterior derivative.
    """

    def __init__(self, cover, rows, base, twist, D):
        self.cover = cover
        self.rows = dict(sorted(rows.items()))
        self.base = base
        self.twist = twist
        self.D = D
        tower = cover.tower
        self._plain = tower.num_levels == 0
        if base.eps != "none":
            raise Unsupported("cohomology over a dual-number base is not modeled")
        js = list(self.rows)
        for a, b in zip(js, js[1:]):
            if b != a + 1 or self.rows[b] != self.rows[a] + 1:
                raise Unsupported("rows must be consecutive with form degree "
                                  "rising by one")
        if twist and (len(js) > 1 or self.rows[js[0]] != 0):
            raise Unsupported("twists are modeled for function sheaves only")
        self.tlevels = tuple(lv for lv in tower.transcendental_levels()
                             if lv > base.level)
        if len(js) > 1 and self.tlevels:
            raise Unsupported("hypercohomology is modeled at the full base only")
        if cover.kind == "curve":
            if twist or any(r != 0 for r in self.rows.values()):
                raise Unsupported("the curve cover exposes only sections of "
                                  "regular functions (0-forms)")
        self._labels = {}
        self._pos = {}
        self._total = {}
        self._ranks = {}
        self._pf_memo = {}
        for j, r in self.rows.items():
            for q in range(cover.qmax + 1):
                labs = []
                for S in cover.subsets(q + 1):
                    for lab in self._subset_labels(S, r):
                        labs.append((S, lab))
                self._labels[(q, j)] = labs
                self._pos[(q, j)] = {sl: i for i, sl in enumerate(labs)}

    # -- scalars

    def _sc(self, v):
        if self._plain:
            return Fraction(v)
        return self.cover.tower.from_fraction(Fraction(v))

    # -- label enumeration
    #
    # Each basis label has an invariant multidegree: the exponent vector of
    # its homogeneous-coordinate representation, counting every coordinate
    # differential once.  Restrictions, chart changes, and the exterior
    # derivative all preserve that vector, so truncating to the window
    # min(v) >= -D keeps a genuine subcomplex which splits as a direct sum
    # of complete multidegree pieces -- each piece computed exactly.

    def _subset_labels(self, S, r):
        if self.cover.kind == "curve":
            return self._curve_labels(S)
        n = self.cover.n
        m = min(S)
        out = []
        for tsz in range(len(self.tlevels) + 1):
            jsz = r - tsz
            if jsz < 0 or jsz > n:
                continue
            jchoices = [tuple(c) for c in combinations(
                [j for j in range(n + 1) if j != m], jsz)]
            tchoices = [tuple(c) for c in combinations(self.tlevels, tsz)]
            for J in jchoices:
                # legality off S asks for a nonnegative monomial exponent,
                # which in multidegree terms is v_j >= 1 when dy_j is present
                lows = [-self.D if i in S else (1 if i in J else 0)
                        for i in range(n + 1)]
                vecs = []
                self._enum(lows, self.twist, 0, [], vecs)
                for v in vecs:
                    a = list(v)
                    for j in J:
                        a[j] -= 1
                    a[m] += jsz
                    a = tuple(a)
                    for T in tchoices:
                        out.append((a, J, T))
        out.sort()
        return out

    def _enum(self, lows, total, i, acc, out):
        n1 = len(lows)
        if i == n1 - 1:
            last = total - sum(acc)
            if last >= lows[i]:
                out.append(tuple(acc + [last]))
            return
        rest = sum(lows[i + 1:])
        for v in range(lows[i], total - sum(acc) - rest + 1):
            self._enum(lows, total, i + 1, acc + [v], out)

    def _curve_labels(self, S):
        D = self.D
        if S == (0,):
            return [(i, dl, 0) for i in range(2 * D + 1) for dl in (0, 1)]
        if S == (1,):
            return [(i, j) for j in (0, 1, 2) for i in range(2 * D + 1 - j)]
        labs = [(i, dl, 0) for i in range(2 * D + 1) for dl in (0, 1)]
        labs += [(i, dl, e) for e in range(1, D + 1)
                 for i in (0, 1, 2) for dl in (0, 1)]
        labs.sort()
        return labs

    # -- restriction of one basis element along S -> T (one new chart)

    def _restrict(self, S, T, lab, r):
        if self.cover.kind == "curve":
            return self._curve_restrict(S, lab)
        m, m2 = min(S), min(T)
        if m2 == m:
            return {lab: self._sc(1)}
        a, J, Tset = lab
        out = {}
        self._pn_expand(a, J, m, m2, 0, tuple(), 1, out)
        return {(av, jv, Tset): self._sc(c) for (av, jv), c in out.items()}

    def _pn_expand(self, a, J, m, m2, k, seq, sgn, out):
        # rewrite dy_J (chart-m coordinates) in chart-m2 coordinates,
        # accumulating Laurent-monomial coefficient shifts into a
        if k == len(J):
            inv = 0
            for i in range(len(seq)):
                for i2 in range(i + 1, len(seq)):
                    if seq[i] > seq[i2]:
                        inv += 1
            key = (a, tuple(sorted(seq)))
            out[key] = out.get(key, 0) + sgn * (-1) ** inv
            return
        j = J[k]
        n = len(a) - 1
        if j == m2:
            # y_{m2} = 1/w_m, so dy_{m2} = -(X_{m2}/X_m)^2 dw_m
            if m not in seq:
                a2 = self._shift(a, {m2: 2, m: -2})
                self._pn_expand(a2, J, m, m2, k + 1, seq + (m,), -sgn, out)
            return
        # y_j = w_j / w_m: dy_j = (X_{m2}/X_m) dw_j - (X_j X_{m2} / X_m^2) dw_m
        if j not in seq:
            a2 = self._shift(a, {m2: 1, m: -1})
            self._pn_expand(a2, J, m, m2, k + 1, seq + (j,), sgn, out)
        if m not in seq:
            a2 = self._shift(a, {j: 1, m2: 1, m: -2})
            self._pn_expand(a2, J, m, m2, k + 1, seq + (m,), -sgn, out)

    @staticmethod
    def _shift(a, delta):
        v = list(a)
        for i, dv in delta.items():
            v[i] += dv
        return tuple(v)

    def _curve_restrict(self, S, lab):
        one = self._sc(1)
        if S == (0,):
            i, dl, _ = lab
            return {(i, dl, 0): one}
        i, j = lab
        mm = i + j
        if mm == 0:
            return {(0, 0, 0): one}
        if mm % 2 == 0:
            pf = self._pf(i, mm // 2)
            dl = 0
        else:
            pf = self._pf(i, (mm + 1) // 2)
            dl = 1
        return {(i2, dl, e2): c for (i2, e2), c in pf.items()}

    def _pf(self, i, e):
        """Partial fractions of x^i g^{-e}: dict (i', e') -> coefficient."""
        key = (i, e)
        hit = self._pf_memo.get(key)
        if hit is not None:
            return hit
        if e == 0 or i <= 2:
            res = {(i, e): self._sc(1)}
        else:
            g0, g1, g2 = self.cover.gcoeffs
            if self._plain:
                g0, g1, g2 = g0.val, g1.val, g2.val
            res = {}
            # x^i g^-e = x^(i-3) g^-(e-1) - g2 x^(i-1) g^-e - g1 x^(i-2) g^-e
            #            - g0 x^(i-3) g^-e
            for part, c in ((self._pf(i - 3, e - 1), None),
                            (self._pf(i - 1, e), -g2),
                            (self._pf(i - 2, e), -g1),
                            (self._pf(i - 3, e), -g0)):
                for k2, v in part.items():
                    add = v if c is None else c * v
                    cur = res.get(k2)
                    res[k2] = add if cur is None else cur + add
            res = {k2: v for k2, v in res.items() if v}
        self._pf_memo[key] = res
        return res

    # -- exterior derivative of one basis element (within a subset)

    def _d_label(self, S, lab):
        if self.cover.kind == "curve":
            raise Unsupported("no form modules on the curve cover")
        a, J, Tset = lab
        if Tset:
            raise Unsupported("exterior derivative with explicit base letters "
                              "is not part of the hypercohomology model")
        m = min(S)
        out = {}
        for j in range(len(a)):
            if j == m or j in J or a[j] == 0:
                continue
            sign = (-1) ** sum(1 for jj in J if jj < j)
            a2 = self._shift(a, {j: -1, m: 1})
            J2 = tuple(sorted(J + (j,)))
            out[(a2, J2, Tset)] = self._sc(sign * a[j])
        return out

    # -- total-degree bases and differential columns

    def total_basis(self, k):
        hit = self._total.get(k)
        if hit is None:
            hit = []
            for j in self.rows:
                q = k - j
                if 0 <= q <= self.cover.qmax:
                    hit.extend((q, j, S, lab) for S, lab in self._labels[(q, j)])
            self._total[k] = hit
        return hit

    def _offsets(self, k):
        offs = {}
        at = 0
        for j in self.rows:
            q = k - j
            if 0 <= q <= self.cover.qmax:
                offs[(q, j)] = at
                at += len(self._labels[(q, j)])
        return offs

    def column(self, k, q, j, S, lab):
        """The total differential of one basis element, as a sparse vector."""
        offs = self._offsets(k + 1)
        col = {}
        r = self.rows[j]
        if q + 1 <= self.cover.qmax:
            base_off = offs[(q + 1, j)]
            pos = self._pos[(q + 1, j)]
            for knew in range(len(self.cover.charts)):
                if knew in S:
                    continue
                T = tuple(sorted(S + (knew,)))
                sgn = (-1) ** T.index(knew)
                for lab2, c in self._restrict(S, T, lab, r).items():
                    idx = pos.get((T, lab2))
                    if idx is None:
                        raise WindowOverflow(
                            f"restriction image {lab2} missed the window of {T}")
                    _acc(col, base_off + idx, c if sgn > 0 else -c)
        if j + 1 in self.rows and (q, j + 1) in offs:
            base_off = offs[(q, j + 1)]
            pos = self._pos[(q, j + 1)]
            dsgn = (-1) ** q
            for lab2, c in self._d_label(S, lab).items():
                idx = pos.get((S, lab2))
                if idx is None:
                    raise WindowOverflow(
                        f"derivative image {lab2} missed the window of {S}")
                _acc(col, base_off + idx, c if dsgn > 0 else -c)
        return col

    def columns(self, k):
        return [self.column(k, q, j, S, lab) for q, j, S, lab in self.total_basis(k)]

    def rank(self, k):
        hit = self._ranks.get(k)
        if hit is None:
            span = RowSpan()
            for col in self.columns(k):
                span.add(col, None)
            hit = span.rank
            self._ranks[k] = hit
        return hit

    def degree_range(self):
        js = list(self.rows)
        return range(js[0], js[-1] + self.cover.qmax + 1)

    def dim_at(self, k):
        nk = len(self.total_basis(k))
        if nk == 0:
            return 0
        below = self.rank(k - 1) if self.total_basis(k - 1) else 0
        return nk - self.rank(k) - below

    def representatives(self, k):
        """A basis of cocycles at total degree k, independent mod coboundaries."""
        span = RowSpan()
        if self.total_basis(k - 1):
            for col in self.columns(k - 1):
                span.add(col, None)
        reps = []
        for vec in kernel_basis(self.columns(k), self._sc(1)):
            res, _ = span.reduce(vec, None)
            if res:
                span.add(res, None)
                reps.append(vec)
        return reps

    def express_span(self, k):
        """Tracked span of coboundaries plus chosen representatives.

        solve() against it writes a cocycle as (image part) + (combination
        of representatives); the ("rep", i) tags carry the class coordinates.
        """
        span = RowSpan(track=True)
        if self.total_basis(k - 1):
            for i, col in enumerate(self.columns(k - 1)):
                span.add(col, ("im", i))
        reps = []
        for vec in kernel_basis(self.columns(k), self._sc(1)):
            tag = ("rep", len(reps))
            if span.add(dict(vec), tag) is not None:
                reps.append(vec)
        return span, reps

    # -- rendering

    def render_label(self, S, lab):
        if self.cover.kind == "curve":
            return self._render_curve(S, lab)
        n = self.cover.n
        m = min(S)
        a, J, Tset = lab
        parts = []
        for j in range(n + 1):
            if j == m or a[j] == 0:
                continue
            nm = _pn_varname(n, m, j)
            parts.append(nm if a[j] == 1 else f"{nm}^{a[j]}")
        body = "*".join(parts) if parts else "1"
        dparts = [f"d{_pn_varname(n, m, j)}" for j in J]
        dparts += [f"d{self.cover.tower.names[lv - 1]}" for lv in Tset]
        where = "{" + ",".join(map(str, S)) + "}"
        if dparts:
            joined = "/\\".join(dparts)
            return f"{where} {body}*{joined}"
        return f"{where} {body}"

    def _render_curve(self, S, lab):
        where = "{" + ",".join("AB"[i] for i in S) + "}"
        if S == (1,):
            i, j = lab
            parts = [p for p in (f"xb^{i}" if i > 1 else "xb" * i,
                                 f"zb^{j}" if j > 1 else "zb" * j) if p]
            return where + " " + ("*".join(parts) if parts else "1")
        i, dl, e = lab
        parts = [p for p in (f"x^{i}" if i > 1 else "x" * i, "y" * dl) if p]
        body = "*".join(parts) if parts else "1"
        if e:
            body += f"/g^{e}" if e > 1 else "/g"
        return where + " " + body

    def render_vector(self, k, vec):
        basis = self.total_basis(k)
        bits = []
        for idx in sorted(vec):
            c = vec[idx]
            q, j, S, lab = basis[idx]
            bits.append(f"({c})*{self.render_label(S, lab)}")
        return " + ".join(bits) if bits else "0"


def _acc(dct, key, val):
    cur = dct.get(key)
    if cur is None:
        dct[key] = val
    else:
        s = cur + val
        if s:
            dct[key] = s
        else:
            del dct[key]


# ---------------------------------------------------------------------------
# reports


class CohomologyReport:
    """Exact dimensions at two window sizes, with representatives at the first."""

    __slots__ = ("kind", "dims", "dims_again", "stabilized", "policy",
                 "reps", "reps_rendered", "engine")

    def __init__(self, kind, dims, dims_again, policy, reps, reps_rendered, engine):
        self.kind = kind
        self.dims = dims
        self.dims_again = dims_again
        self.stabilized = dims == dims_again
        self.policy = policy
        self.reps = reps
        self.reps_rendered = reps_rendered
        self.engine = engine

    def dim(self, k):
        return self.dims.get(k, 0)

    def to_dict(self):
        return {
            "kind": self.kind,
            "dims": {str(k): v for k, v in self.dims.items()},
            "dims_at_larger_window": {str(k): v for k, v in self.dims_again.items()},
            "stabilized": self.stabilized,
            "policy": self.policy.to_dict(),
            "representatives": {str(k): v for k, v in self.reps_rendered.items()},
        }


def _run(cover, rows, base, twist, policy, require_stable, with_reps, kind):
    lo = CechEngine(cover, rows, base, twist, policy.D)
    hi = CechEngine(cover, rows, base, twist, policy.D + policy.delta)
    dims = {k: lo.dim_at(k) for k in lo.degree_range()}
    dims_again = {k: hi.dim_at(k) for k in hi.degree_range()}
    reps, rendered = {}, {}
    if with_reps:
        for k, dk in dims.items():
            if dk > 0:
                vecs = lo.representatives(k)
                if len(vecs) != dk:
                    raise Mismatch(f"rank bookkeeping disagrees at degree {k}: "
                                   f"{len(vecs)} representatives for dimension {dk}")
                reps[k] = vecs
                rendered[k] = [lo.render_vector(k, v) for v in vecs]
    report = CohomologyReport(kind, dims, dims_again, policy, reps, rendered, lo)
    if require_stable and not report.stabilized:
        raise NotStabilized(f"dimensions moved: {dims} at D={policy.D} vs "
                            f"{dims_again} at D={policy.D + policy.delta}")
    return report


def sheaf_cohomology(cover, sheaf, policy, require_stable=False, with_reps=True):
    base = sheaf.base if sheaf.base is not None else base_top(cover.tower)
    return _run(cover, {0: sheaf.r}, base, sheaf.twist, policy,
                require_stable, with_reps, "sheaf")


def hypercohomology(cover, cx, policy, require_stable=False, with_reps=True):
    rows = {}
    for j in cx.degrees():
        if len(cx.terms[j]) != 1:
            raise Unsupported("hypercohomology is modeled for one-term rows only")
        rows[j] = cx.terms[j][0]
    if cx.base != base_top(cover.tower):
        raise Unsupported("the sheaf-level complex differentiates over the "
                          "full tower; its base must be the top base")
    return _run(cover, rows, cx.base, 0, policy, require_stable, with_reps, "hyper")


def verify_splitting(p, cover, policy):
    """dim H^(2p) of the tangent complex against the sum of its graded pieces.

    Also compares at total degree 2p-1.
    """
    from .complexes import tangent_deligne

    template = tangent_deligne(p, cover.charts[0])
    hyper = hypercohomology(cover, template, policy, require_stable=True,
                            with_reps=False)
    parts = []
    for i in range(1, p + 1):
        parts.append(sheaf_cohomology(cover, Sheaf.forms(i - 1), policy,
                                      require_stable=True, with_reps=False))
    checks = []
    for k in (2 * p, 2 * p - 1):
        lhs = hyper.dim(k)
        terms = {f"H^{k - i}(Omega^{i - 1})": parts[i - 1].dim(k - i)
                 for i in range(1, p + 1)}
        rhs = sum(terms.values())
        checks.append({
            "name": f"total degree {k}",
            "status": "pass" if lhs == rhs else "fail",
            "hyper": lhs,
            "sum": rhs,
            "pieces": terms,
        })
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"name": f"splitting p={p}", "status": status, "checks": checks,
            "stabilized": hyper.stabilized and all(x.stabilized for x in parts)}


# ---------------------------------------------------------------------------
# symbolic cross-checks: engine vectors as honest differential forms


def label_form(engine, S, lab, base):
    """One basis label as a DiffForm over the intersection's model ring."""
    cover = engine.cover
    ring = cover.model(S).ring
    if cover.kind == "curve":
        i, dl, e = lab
        x, y = ring.var("x"), ring.var("y")
        g0, g1, g2 = cover.gcoeffs
        g = x ** 3 + x * x * g2 + x * g1 + g0
        val = x ** i * (y if dl else ring.one()) * g ** (-e)
        return DiffForm.of_elem(val, base)
    m = min(S)
    a, J, Tset = lab
    coeff = ring.one()
    for j in range(len(a)):
        if j != m and a[j]:
            coeff = coeff * _ratio(cover, m, j) ** a[j]
    form = DiffForm.of_elem(coeff, base)
    for j in J:
        form = wedge(form, d(ring.var(_pn_varname(cover.n, m, j)), base))
    for lv in Tset:
        one = DiffForm.of_elem(ring.one(), base)
        tletter = DiffForm(ring, base, 1, {(("t", lv),): one.terms[()]})
        form = wedge(form, tletter)
    return form


def cochain_forms(engine, k, vec, base):
    """An engine vector at total degree k as per-subset differential forms."""
    basis = engine.total_basis(k)
    out = {}
    for idx, c in vec.items():
        q, j, S, lab = basis[idx]
        f = label_form(engine, S, lab, base) * c
        cur = out.get(S)
        out[S] = f if cur is None else cur + f
    return out


def cech_cocycle_check(cover, base, q, comp_forms):
    """Alternating pullback sum over every (q+2)-subset; True iff all vanish."""
    for T in cover.subsets(q + 2):
        mdl_t = cover.model(T)
        total = None
        for pos in range(len(T)):
            S = T[:pos] + T[pos + 1:]
            f = comp_forms.get(S)
            if f is None:
                continue
            if min(S) == min(T):
                img = f
            else:
                img = pullback(f, mdl_t.subs[min(S)], mdl_t.ring)
            img = img if pos % 2 == 0 else -img
            total = img if total is None else total + img
        if total is not None and not total.is_zero():
            return False
    return True
