"""Sparse exact Gaussian elimination over any field-like coefficients.

Vectors are dicts mapping integer indices to nonzero coefficients; the
coefficient type only needs +, -, *, /, bool (Fraction and Scalar both
qualify).  RowSpan keeps an incremental echelon basis and can track how
each stored row decomposes over the originally inserted vectors, which is
what cohomology representatives and induced-map matrices are read from.
"""

from __future__ import annotations


def vec_is_zero(v):
    return not v


def vec_sub_scaled(v, c, w):
    """v - c*w, in place on a copy of v."""
    out = dict(v)
    for k, a in w.items():
        b = out.get(k)
        val = (b - c * a) if b is not None else -(c * a)
        if val:
            out[k] = val
        else:
            out.pop(k, None)
    return out


class RowSpan:
    """Incremental row echelon form with optional combination tracking."""

    __slots__ = ("rows", "combos", "track")

    def __init__(self, track=False):
        self.rows = {}
        self.combos = {}
        self.track = track

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec, tag=None):
        """Return (residual, expansion): vec = residual + sum expansion[t]*original_t."""
        v = dict(vec)
        expansion = {}
        while v:
            hits = [k for k in v if k in self.rows]
            if not hits:
                break
            p = min(hits)
            c = v[p]  # stored rows have pivot coefficient 1
            v = vec_sub_scaled(v, c, self.rows[p])
            v.pop(p, None)
            if self.track:
                for t, a in self.combos[p].items():
                    prev = expansion.get(t)
                    val = (prev + c * a) if prev is not None else c * a
                    if val:
                        expansion[t] = val
                    else:
                        expansion.pop(t, None)
        return v, expansion

    def add(self, vec, tag=None):
        """Insert vec; returns the new pivot index or None if dependent."""
        res, expansion = self.reduce(vec, tag)
        if not res:
            return None
        p = min(res)
        c = res[p]
        row = {k: a / c for k, a in res.items()}
        self.rows[p] = row
        if self.track:
            combo = {t: -(a / c) for t, a in expansion.items()}
            prev = combo.get(tag)
            combo[tag] = (prev + 1 / c) if prev is not None else 1 / c
            self.combos[p] = combo
        return p

    def solve(self, vec):
        """Expansion of vec over the original inserted vectors, or None."""
        res, expansion = self.reduce(vec)
        if res:
            return None
        return expansion


def rank_of(vectors):
    span = RowSpan()
    for v in vectors:
        span.add(v)
    return span.rank


def kernel_basis(cols, one=1):
    """Kernel of the map e_j -> cols[j]; vectors are dicts over column index.

    ``one`` is the multiplicative unit of the coefficient type, so that the
    free coordinate of each kernel vector matches the rest exactly.
    """
    span = RowSpan(track=True)
    out = []
    for j, col in enumerate(cols):
        res, expansion = span.reduce(col, j)
        if res:
            span.add(col, j)
            continue
        ker = {t: -a for t, a in expansion.items()}
        ker[j] = one if j not in ker else ker[j] + one
        out.append({k: v for k, v in ker.items() if v})
    return out
