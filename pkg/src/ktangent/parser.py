"""Plain-text expression language for symbols, forms, and derivatives.

The grammar, from loosest to tightest binding::

    sum      :=  wedgeprod (('+' | '-') wedgeprod)*
    wedgeprod:=  product (('/\\' | '∧') product)*
    product  :=  signed (('*' | '/') signed)*
    signed   :=  '-' signed | power
    power    :=  atom ['^' exponent]          exponent: optional '-', digits,
                                              optionally parenthesized
    atom     :=  integer | name | 'eps'
              |  '(' sum ')'
              |  '{' sum (',' sum)* '}'
              |  ('d_Q' | 'd_k' | 'd_C' | 'd_Ceps') '(' sum ')'

so ``^`` binds tighter than unary minus, which binds tighter than ``*`` and
``/``, which bind tighter than the wedge, which binds tighter than ``+`` and
``-``.  Rationals are spelled as quotients of integers.  Braces build a
Milnor symbol from their entries.  ``d_Q``/``d_k``/``d_C``/``d_Ceps`` apply
the exterior derivative over whichever base the evaluation context assigns
to that keyword; dlog is deliberately not a primitive (spell it
``d_C(f)/f``).  The wedge accepts the unicode sign and the two-character
ASCII fallback interchangeably.  For convenience when pasting typeset text,
``·`` is read as ``*`` and ``−`` as ``-``.

``parse`` produces an `Expr` tree whose printed form (`str`) parses back to
an equal tree.  ``evaluate`` interprets a tree against a function ring and
optional named bindings; it is where unknown identifiers are reported.
"""

from fractions import Fraction

from .errors import (InstanceSyntaxError, UnknownIdentifier, Unsupported,
                     Mismatch, DivisionByZero)
from .scalars import Scalar
from .funcrings import RingElem, DualElem
from .differentials import DiffForm, d, wedge
from .milnor import SymbolWord

DIFF_KEYWORDS = ("d_Q", "d_k", "d_C", "d_Ceps")

_BINARY = {"add": " + ", "sub": " - ", "wedge": " /\\ ", "mul": "*", "div": "/"}

# printing precedence; higher binds tighter
_PREC = {"add": 1, "sub": 1, "wedge": 2, "mul": 3, "div": 3,
         "neg": 4, "pow": 5, "num": 6, "name": 6, "eps": 6,
         "symbol": 6, "diff": 6}


class Expr:
    """A parsed expression; equality and hashing ignore source positions."""

    __slots__ = ("kind", "args", "pos")

    def __init__(self, kind, args, pos=(0, 0)):
        self.kind = kind
        self.args = tuple(args)
        self.pos = pos

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.kind == other.kind and self.args == other.args

    def __hash__(self):
        return hash((self.kind, self.args))

    def __str__(self):
        return _render(self)

    def __repr__(self):
        return f"Expr({self.kind}: {self})"


def _wrap(e, outer, tie_breaks):
    s = _render(e)
    p = _PREC[e.kind]
    if p < outer or (tie_breaks and p == outer):
        return f"({s})"
    return s


def _render(e):
    k = e.kind
    if k == "num":
        return str(e.args[0])
    if k == "name":
        return e.args[0]
    if k == "eps":
        return "eps"
    if k == "neg":
        return "-" + _wrap(e.args[0], _PREC["neg"], False)
    if k in _BINARY:
        p = _PREC[k]
        # the right operand re-parses into the left-nested slot, so a tie
        # in precedence there needs parentheses; on the left it does not
        return _wrap(e.args[0], p, False) + _BINARY[k] + _wrap(e.args[1], p, True)
    if k == "pow":
        return _wrap(e.args[0], _PREC["pow"], True) + "^" + str(e.args[1])
    if k == "symbol":
        return "{" + ", ".join(_render(a) for a in e.args) + "}"
    if k == "diff":
        return f"{e.args[0]}({_render(e.args[1])})"
    raise Mismatch(f"unprintable expression kind {k!r}")


# -- tokenizer ---------------------------------------------------------------

_PUNCT = "+-*/^(){},"


def _lex(text):
    toks = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        at = (line, col)
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", int(text[i:j]), at))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], at))
            col += j - i
            i = j
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "\\":
            toks.append(("op", "/\\", at))
            i += 2
            col += 2
            continue
        if ch == "∧":  # the wedge sign
            toks.append(("op", "/\\", at))
            i += 1
            col += 1
            continue
        if ch == "·":  # typeset product dot
            toks.append(("op", "*", at))
            i += 1
            col += 1
            continue
        if ch == "−":  # typeset minus
            toks.append(("op", "-", at))
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            toks.append(("op", ch, at))
            i += 1
            col += 1
            continue
        raise InstanceSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(("end", "", (line, col)))
    return toks


# -- recursive-descent parser ------------------------------------------------

class _Parser:
    __slots__ = ("toks", "i")

    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def take(self, text):
        kind, val, at = self.peek()
        if kind == "op" and val == text:
            self.i += 1
            return True
        return False

    def expect(self, text, what):
        if not self.take(text):
            kind, val, (ln, c) = self.peek()
            found = "end of input" if kind == "end" else repr(val)
            raise InstanceSyntaxError(f"expected {what}, found {found}", ln, c)

    def sum(self):
        e = self.wedgeprod()
        while True:
            if self.take("+"):
                e = Expr("add", (e, self.wedgeprod()), e.pos)
            elif self.take("-"):
                e = Expr("sub", (e, self.wedgeprod()), e.pos)
            else:
                return e

    def wedgeprod(self):
        e = self.product()
        while self.take("/\\"):
            e = Expr("wedge", (e, self.product()), e.pos)
        return e

    def product(self):
        e = self.signed()
        while True:
            if self.take("*"):
                e = Expr("mul", (e, self.signed()), e.pos)
            elif self.take("/"):
                e = Expr("div", (e, self.signed()), e.pos)
            else:
                return e

    def signed(self):
        kind, val, at = self.peek()
        if kind == "op" and val == "-":
            self.i += 1
            return Expr("neg", (self.signed(),), at)
        return self.power()

    def power(self):
        e = self.atom()
        if self.take("^"):
            return Expr("pow", (e, self.exponent()), e.pos)
        return e

    def exponent(self):
        paren = self.take("(")
        sign = -1 if self.take("-") else 1
        kind, val, (ln, c) = self.next()
        if kind != "num":
            raise InstanceSyntaxError("exponent must be an integer", ln, c)
        if paren:
            self.expect(")", "')' closing the exponent")
        return sign * val

    def atom(self):
        kind, val, at = self.next()
        if kind == "num":
            return Expr("num", (val,), at)
        if kind == "name":
            if val in DIFF_KEYWORDS:
                self.expect("(", f"'(' after {val}")
                inner = self.sum()
                self.expect(")", f"')' closing {val}(...)")
                return Expr("diff", (val, inner), at)
            if val == "eps":
                return Expr("eps", (), at)
            return Expr("name", (val,), at)
        if kind == "op" and val == "(":
            inner = self.sum()
            self.expect(")", "')'")
            return inner
        if kind == "op" and val == "{":
            entries = [self.sum()]
            while self.take(","):
                entries.append(self.sum())
            self.expect("}", "'}' closing the symbol")
            return Expr("symbol", tuple(entries), at)
        found = "end of input" if kind == "end" else repr(val)
        raise InstanceSyntaxError(f"expected an expression, found {found}",
                                  at[0], at[1])


def parse(text):
    """Parse an expression; raise InstanceSyntaxError with line/column."""
    p = _Parser(_lex(text))
    e = p.sum()
    kind, val, (ln, c) = p.peek()
    if kind != "end":
        raise InstanceSyntaxError(f"unexpected {val!r} after the expression",
                                  ln, c)
    return e


# -- evaluation --------------------------------------------------------------

def _located(e):
    ln, c = e.pos
    return f"(line {ln}, col {c})"


def _invert(v):
    if isinstance(v, int):
        v = Fraction(v)
    if isinstance(v, Fraction):
        if v == 0:
            raise DivisionByZero("division by zero")
        return Fraction(1) / v
    if isinstance(v, Scalar):
        return Fraction(1) / v
    if isinstance(v, (RingElem, DualElem, SymbolWord)):
        return v.inv()
    if isinstance(v, DiffForm):
        if v.degree == 0:
            return v.coeff(()).inv()
        raise Mismatch("cannot divide by a positive-degree form")
    raise Mismatch(f"cannot invert {v!r}")


def _as_coeff(v, ring):
    if isinstance(v, (int, Fraction, Scalar)):
        if ring is None:
            raise Unsupported("a function ring is needed to interpret this expression")
        return ring.const(v)
    return v


def evaluate(e, ring=None, names=None, bases=None):
    """Interpret a parsed expression.

    ``ring`` resolves variable names and hosts eps and symbol entries;
    ``names`` supplies extra bindings (named forms, precomputed values);
    ``bases`` maps each derivative keyword that may occur to its BaseTag.
    Names are looked up as ring variables first, then tower generators,
    then ``names``.
    """
    k = e.kind
    if k == "num":
        return Fraction(e.args[0])
    if k == "eps":
        if ring is None:
            raise Unsupported(f"eps needs a function ring {_located(e)}")
        return DualElem(ring, ring.zero(), ring.one())
    if k == "name":
        nm = e.args[0]
        if ring is not None:
            if nm in ring.varnames:
                return ring.var(nm)
            if nm in ring.tower.names:
                return ring.const(ring.tower.gen(nm))
        if names and nm in names:
            return names[nm]
        raise UnknownIdentifier(f"'{nm}' is not defined {_located(e)}")
    if k == "neg":
        return -evaluate(e.args[0], ring, names, bases)
    if k == "pow":
        v = evaluate(e.args[0], ring, names, bases)
        n = e.args[1]
        if isinstance(v, int):
            v = Fraction(v)
        return v ** n
    if k in ("add", "sub", "mul", "div"):
        a = evaluate(e.args[0], ring, names, bases)
        b = evaluate(e.args[1], ring, names, bases)
        if isinstance(a, DiffForm) and isinstance(b, DiffForm):
            if k == "mul" and (a.degree == 0 or b.degree == 0):
                return wedge(a, b)
            if k == "div" and b.degree == 0:
                return a * _invert(b)
            if k in ("mul", "div"):
                raise Mismatch(f"products of forms need the wedge, in '{e}'")
        try:
            if k == "add":
                return a + b
            if k == "sub":
                return a - b
            if k == "mul":
                return a * b
            return a * _invert(b)
        except TypeError:
            raise Mismatch(f"cannot combine operands in '{e}' {_located(e)}")
    if k == "wedge":
        a = evaluate(e.args[0], ring, names, bases)
        b = evaluate(e.args[1], ring, names, bases)
        if isinstance(a, DiffForm) and not isinstance(b, DiffForm):
            b = DiffForm.of_elem(_as_coeff(b, a.ring), a.base)
        elif isinstance(b, DiffForm) and not isinstance(a, DiffForm):
            a = DiffForm.of_elem(_as_coeff(a, b.ring), b.base)
        if not (isinstance(a, DiffForm) and isinstance(b, DiffForm)):
            raise Mismatch(f"wedge of non-forms in '{e}' {_located(e)}")
        return wedge(a, b)
    if k == "diff":
        kw, inner = e.args
        if not bases or kw not in bases:
            raise Unsupported(f"{kw} has no base assigned here {_located(e)}")
        v = evaluate(inner, ring, names, bases)
        v = _as_coeff(v, ring)
        return d(v, bases[kw])
    if k == "symbol":
        vals = [evaluate(a, ring, names, bases) for a in e.args]
        host = ring
        for v in vals:
            if isinstance(v, (RingElem, DualElem)):
                host = v.ring
                break
        if host is None:
            raise Unsupported(f"symbol entries need a function ring {_located(e)}")
        vals = [_as_coeff(v, host) for v in vals]
        if any(isinstance(v, DualElem) for v in vals):
            vals = [v if isinstance(v, DualElem) else DualElem(host, v)
                    for v in vals]
        for v in vals:
            if not isinstance(v, (RingElem, DualElem)):
                raise Mismatch(f"a symbol entry is not a ring element in '{e}'")
        return SymbolWord.of(vals)
    raise Mismatch(f"unevaluable expression kind {k!r}")


# -- instance files ----------------------------------------------------------
#
# A declarative instance lives in a small sectioned text file:
#
#     # comments run to the end of the line
#     [tower]
#     gen r2 = algebraic -2, 0, 1     # minimal polynomial, low degree first
#     gen t = transcendental
#
#     [cover]
#     kind = plane-curve              # or projective-line, projective-plane
#     weierstrass = 0, -1, 1          # y^2 z = x^3 + a x^2 z + b x z^2 + c z^3
#
#     [ring]                          # alternative to [cover] for symbol suites
#     vars = x, y
#
#     [policy]
#     D = 2
#     delta = 2
#
#     [checks]
#     p = 1
#     seed = 20260401
#     sheaf = omega0                  # or omega1, omega2, O(3), O(-2)
#
# Every section is optional; an empty tower means the rationals.  The same
# data is accepted as a JSON object with keys tower (list of
# {name, kind, minpoly}), cover, ring, policy, and checks.

import json as _json

from .scalars import make_tower, Algebraic, Transcendental
from .funcrings import FunctionRing
from .cech import (TruncationPolicy, cover_pn, cover_plane_curve,
                   weierstrass_cubic)

_COVER_KINDS = ("projective-line", "projective-plane", "plane-curve")


class SuiteConfig:
    """A resolved instance: tower, geometry, truncation policy, check knobs."""

    __slots__ = ("tower", "cover", "ring", "policy", "p", "seed", "checks")

    def __init__(self, tower, cover, ring, policy, p, seed, checks):
        self.tower = tower
        self.cover = cover
        self.ring = ring
        self.policy = policy
        self.p = p
        self.seed = seed
        self.checks = checks

    def describe(self):
        """A JSON-ready echo of the resolved configuration."""
        out = {"tower": [list(step) for step in _tower_steps(self.tower)],
               "policy": {"D": self.policy.D, "delta": self.policy.delta},
               "p": self.p, "seed": self.seed}
        if self.cover is not None:
            out["cover"] = self.checks.get("_coverdesc", "")
        if self.ring is not None:
            out["ring"] = {"vars": list(self.ring.varnames)}
        for k, v in self.checks.items():
            if not k.startswith("_"):
                out[k] = v
        return out


def _tower_steps(tower):
    trans = set(tower.transcendental_levels())
    return [(nm, "transcendental" if (i + 1) in trans else "algebraic")
            for i, nm in enumerate(tower.names)]


def _rat(text, ln):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InstanceSyntaxError(f"expected a rational number, got {text.strip()!r}",
                                  ln, 1)


def _int(text, ln):
    try:
        return int(str(text).strip())
    except ValueError:
        raise InstanceSyntaxError(f"expected an integer, got {str(text).strip()!r}",
                                  ln, 1)


def _read_sections(text):
    """Split instance text into {section: [(line, key, value), ...]}."""
    sections = {}
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise InstanceSyntaxError("unterminated section header", ln, 1)
            current = line[1:-1].strip()
            if current not in ("tower", "cover", "ring", "policy", "checks"):
                raise InstanceSyntaxError(f"unknown section [{current}]", ln, 1)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise InstanceSyntaxError("a key appears before any [section]", ln, 1)
        if "=" not in line:
            raise InstanceSyntaxError("expected 'key = value'", ln, 1)
        key, value = line.split("=", 1)
        sections[current].append((ln, key.strip(), value.strip()))
    return sections


def _spec_from_text(text):
    sections = _read_sections(text)
    spec = {"tower": [], "cover": {}, "ring": {}, "policy": {}, "checks": {}}
    for ln, key, value in sections.get("tower", ()):
        words = key.split()
        if len(words) != 2 or words[0] != "gen":
            raise InstanceSyntaxError("tower lines look like 'gen NAME = ...'", ln, 1)
        nm = words[1]
        fields = [w.strip() for w in value.split(",")]
        head = fields[0].split()
        if head[0] == "transcendental" and len(head) == 1 and len(fields) == 1:
            spec["tower"].append({"name": nm, "kind": "transcendental"})
        elif head[0] == "algebraic" and len(head) == 2:
            coeffs = [_rat(head[1], ln)] + [_rat(f, ln) for f in fields[1:]]
            spec["tower"].append({"name": nm, "kind": "algebraic",
                                  "minpoly": coeffs})
        else:
            raise InstanceSyntaxError(
                "expected 'transcendental' or 'algebraic c0, c1, ...'", ln, 1)
    for section in ("cover", "ring", "policy", "checks"):
        for ln, key, value in sections.get(section, ()):
            if key in spec[section]:
                raise InstanceSyntaxError(f"duplicate key {key!r}", ln, 1)
            spec[section][key] = (ln, value)
    return spec


def _take(table, key, default=None):
    v = table.pop(key, None)
    if v is None:
        return (0, default)
    if isinstance(v, tuple):
        return v
    return (0, v)


def _reject_extras(table, section):
    if table:
        key, v = next(iter(table.items()))
        ln = v[0] if isinstance(v, tuple) else 0
        raise InstanceSyntaxError(f"unknown {section} key {key!r}", ln, 1)


def _build_config(spec):
    steps = []
    for entry in spec.get("tower", ()):
        nm, kind = entry.get("name"), entry.get("kind")
        if kind == "transcendental":
            steps.append(Transcendental(nm))
        elif kind == "algebraic":
            coeffs = [Fraction(c) for c in entry.get("minpoly", ())]
            steps.append(Algebraic(nm, coeffs))
        else:
            raise Unsupported(f"unknown tower step kind {kind!r}")
    tower = make_tower(steps)

    cover = None
    coverdesc = ""
    ctab = dict(spec.get("cover", {}))
    ln, kind = _take(ctab, "kind")
    if kind is not None:
        if kind == "projective-line":
            cover = cover_pn(1, tower)
        elif kind == "projective-plane":
            cover = cover_pn(2, tower)
        elif kind == "plane-curve":
            wln, wtext = _take(ctab, "weierstrass")
            if wtext is None:
                raise InstanceSyntaxError("plane-curve needs 'weierstrass = a, b, c'",
                                          ln, 1)
            if isinstance(wtext, str):
                abc = [_rat(w, wln) for w in wtext.split(",")]
            else:
                abc = [Fraction(w) for w in wtext]
            if len(abc) != 3:
                raise InstanceSyntaxError("weierstrass takes exactly three values",
                                          wln, 1)
            cover = cover_plane_curve(weierstrass_cubic(tower, *abc), tower)
            coverdesc = f"plane-curve {abc[0]},{abc[1]},{abc[2]}"
        else:
            raise InstanceSyntaxError(f"unknown cover kind {kind!r}", ln, 1)
        if not coverdesc:
            coverdesc = kind
    _reject_extras(ctab, "cover")

    ring = None
    rtab = dict(spec.get("ring", {}))
    ln, varstext = _take(rtab, "vars")
    if varstext is not None:
        if isinstance(varstext, str):
            varnames = [w.strip() for w in varstext.split(",") if w.strip()]
        else:
            varnames = list(varstext)
        ring = FunctionRing(tower, varnames)
    _reject_extras(rtab, "ring")

    ptab = dict(spec.get("policy", {}))
    ln, Dv = _take(ptab, "D", 2)
    ln2, dv = _take(ptab, "delta", 2)
    _reject_extras(ptab, "policy")
    policy = TruncationPolicy(_int(Dv, ln), _int(dv, ln2))

    checks = {}
    ktab = dict(spec.get("checks", {}))
    ln, pv = _take(ktab, "p", 1)
    ln2, seedv = _take(ktab, "seed", 20260401)
    p = _int(pv, ln)
    seed = _int(seedv, ln2)
    for key, v in ktab.items():
        checks[key] = v[1] if isinstance(v, tuple) else v
    if coverdesc:
        checks["_coverdesc"] = coverdesc
    return SuiteConfig(tower, cover, ring, policy, p, seed, checks)


def load_instance(text):
    """Read an instance from sectioned text or its JSON mirror."""
    if text.lstrip().startswith("{"):
        try:
            obj = _json.loads(text)
        except ValueError as exc:
            raise InstanceSyntaxError(f"bad JSON instance: {exc}", 1, 1)
        return _build_config(obj)
    return _build_config(_spec_from_text(text))
