"""Seeded randomized check families shared by the command line and tests.

Each family is driven by a single ``random.Random(seed)``, so a fixed seed
reproduces the identical instances and the identical report.  Families
range over three scalar towers — the rationals, a quadratic extension, and
a rational-function field — with instances split round-robin between them.
Every runner returns a list of check dicts shaped like
``{"name", "status", "count", "witnesses"}`` that the report layer embeds
directly.
"""

import random

from .scalars import make_tower, Algebraic, Transcendental
from .funcrings import FunctionRing
from .differentials import base_top, base_change
from .milnor import (EpsSymbol, SymbolWord, beta, beta_via_truncation,
                     tilde_dlog, eps_to_absolute, check_codifferential,
                     relation_check)
from .complexes import alpha_delta_diagram

DEFAULT_SEED = 20260401
_PS = (2, 3, 4)


def standard_towers():
    """The three scalar towers the randomized families range over."""
    return (("rationals", make_tower([])),
            ("quadratic", make_tower([Algebraic("r2", [-2, 0, 1])])),
            ("function-field", make_tower([Transcendental("t")])))


def symbol_ring(tower):
    """Four variables: enough room for nonzero degree-4 forms over Q."""
    return FunctionRing(tower, ("x", "y", "z", "v"))


def unit_pool(ring):
    """Nonzero elements the generators draw entries from.

    Everything here is a unit of the function field; the single quotient
    keeps a monomial denominator so arithmetic stays quick.
    """
    x, y, z, v = (ring.var(n) for n in ring.varnames)
    pool = [x, y, z, v, x + 1, y - 2, z + 3, x + y, x * y + 1, (x + 2) / y]
    for nm in ring.tower.names:
        g = ring.const(ring.tower.gen(nm))
        pool += [g, g + x]
    return pool


def random_symbol(rng, ring, p, pool):
    """A random symbol over the dual numbers with one or two parts."""
    s = None
    for _ in range(rng.choice((1, 1, 2))):
        h = rng.choice(pool) + rng.choice((0, 1, -1))
        tails = tuple(rng.choice(pool) for _ in range(p - 1))
        part = EpsSymbol.of(h, tails, rng.choice((-2, -1, 1, 2)))
        s = part if s is None else s * part
    return s


def _symbol_family(p, seed, count):
    """(label, tower, symbol) triples, spread round-robin over the towers."""
    rng = random.Random(seed)
    towers = standard_towers()
    rings = [(label, tw, symbol_ring(tw)) for label, tw in towers]
    pools = [unit_pool(ring) for _, _, ring in rings]
    out = []
    for i in range(count):
        label, tw, ring = rings[i % len(rings)]
        out.append((label, tw, random_symbol(rng, ring, p, pools[i % len(rings)])))
    return out


def _aggregate(name, count, bad):
    return {"name": name, "status": "pass" if not bad else "fail",
            "count": count, "witnesses": bad[:3]}


def codifferential_suite(p=None, seed=DEFAULT_SEED, count=51):
    """tilde_dlog(s) agrees with the signed derivative of beta(s)."""
    checks = []
    for pp in _PS if p is None else (p,):
        bad = []
        fam = _symbol_family(pp, seed + pp, count)
        for label, tw, s in fam:
            rep = check_codifferential(s)
            if rep["status"] != "pass":
                bad.append(f"{label}: {s}")
        checks.append(_aggregate(f"codifferential p={pp}", len(fam), bad))
    return checks


def beta_agreement_suite(p=None, seed=DEFAULT_SEED, count=51):
    """beta computed directly agrees with beta via dual-number truncation."""
    checks = []
    for pp in _PS if p is None else (p,):
        bad = []
        fam = _symbol_family(pp, seed + pp, count)
        for label, tw, s in fam:
            if not (beta_via_truncation(s) - beta(s)).is_zero():
                bad.append(f"{label}: {s}")
        checks.append(_aggregate(f"beta agreement p={pp}", len(fam), bad))
    return checks


def absolute_square_suite(p=None, seed=DEFAULT_SEED, count=51):
    """beta over the absolute base, pushed up the tower, recovers beta."""
    checks = []
    for pp in _PS if p is None else (p,):
        bad = []
        fam = _symbol_family(pp, seed + pp, count)
        for label, tw, s in fam:
            pushed = base_change(eps_to_absolute(s), base_top(tw))
            if not (pushed - beta(s)).is_zero():
                bad.append(f"{label}: {s}")
        checks.append(_aggregate(f"absolute square p={pp}", len(fam), bad))
    return checks


def relations_suite(seed=DEFAULT_SEED, count=134):
    """The defining relations die under every map to forms.

    Steinberg, bilinearity, and commutation instances go through dlog;
    additivity instances over the dual numbers go through tilde_dlog, both
    beta computations, and beta over the absolute base.  The default count
    leaves at least 100 instances of the first three kinds.
    """
    rng = random.Random(seed)
    towers = standard_towers()
    rings = [(label, symbol_ring(tw)) for label, tw in towers]
    pools = {label: unit_pool(ring) for label, ring in rings}
    kinds = ("steinberg", "bilinear", "skew", "eps_additive")
    per_kind = {k: 0 for k in kinds}
    bad = []
    for i in range(count):
        label, ring = rings[i % len(rings)]
        pool = pools[label]
        kind = kinds[i % len(kinds)]
        p = rng.choice((2, 3))
        rest = tuple(rng.choice(pool) for _ in range(p - 2))
        if kind == "steinberg":
            a, b = rng.choice(pool), rng.choice(pool)
            if (a + b).is_zero():
                b = b + ring.one()
            data = (a / (a + b), rest)
        elif kind in ("bilinear", "skew"):
            data = (rng.choice(pool), rng.choice(pool) + 3, rest)
        else:
            a = rng.choice(pool) + rng.choice((0, 1))
            b = rng.choice(pool)
            tails = tuple(rng.choice(pool) for _ in range(p - 1))
            data = (a, b, tails)
        rep = relation_check(kind, ring, p, data)
        per_kind[kind] += 1
        if rep["status"] != "pass":
            bad.append(f"{label} {kind}: {rep['witnesses'][:1]}")
        if kind == "eps_additive":
            a, b, tails = data
            s = (EpsSymbol.of(a + b, tails) * EpsSymbol.of(a, tails).inv()
                 * EpsSymbol.of(b, tails).inv())
            if not eps_to_absolute(s).is_zero():
                bad.append(f"{label} eps_additive absolute: {s}")
    name = "relations " + " ".join(f"{k}={n}" for k, n in sorted(per_kind.items()))
    check = _aggregate(name, count, bad)
    check["kinds"] = dict(sorted(per_kind.items()))
    return [check]


def diagram_suite(p=None):
    """The comparison diagram between the two complexes, on sample forms."""
    ring = FunctionRing(make_tower([]), ("x", "y", "z"))
    checks = []
    for pp in _PS if p is None else (p,):
        rep = alpha_delta_diagram(pp, ring)
        bad = [c["name"] for c in rep["checks"] if c["status"] != "pass"]
        checks.append(_aggregate(f"comparison diagram p={pp}",
                                 len(rep["checks"]), bad))
    return checks
