"""Exponential polynomials: the free E-ring over Q on indeterminates and coefficient symbols.

Canonical form
--------------
An :class:`ExpPoly` is a finite Q-linear combination of monomials.  A
monomial is a product of atoms raised to powers:

* coefficient symbols and indeterminates, with natural powers;
* exp-atoms ``exp(m)`` where ``m`` is a monomial with coefficient 1, with
  nonzero rational powers.  ``exp(c*m)`` is stored as ``exp(m)^c`` and the
  constant part of an exponent lives on the atom ``exp(1)``.

So ``exp(u + v) = exp(u) * exp(v)`` and ``exp(0) = 1`` hold syntactically.
Atoms, monomials and polynomials are hash-consed: structurally equal values
are the same object, and ``==`` is identity.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .exact import as_rational

SYM, VAR, EXP = 1, 2, 3

_TABLE: dict = {}
_LOCK = threading.Lock()


def _intern(key, build):
    obj = _TABLE.get(key)
    if obj is not None:
        return obj
    with _LOCK:
        obj = _TABLE.get(key)
        if obj is None:
            obj = build()
            _TABLE[key] = obj
    return obj


class Atom:
    __slots__ = ("kind", "name", "arg", "sort_key", "depth")

    def __repr__(self):
        if self.kind == EXP:
            return "Atom(exp(%s))" % _format_monomial(self.arg)
        return "Atom(%s)" % self.name


def _named_atom(kind, name):
    def build():
        a = Atom()
        a.kind, a.name, a.arg = kind, name, None
        a.sort_key = (kind, name)
        a.depth = 0
        return a
    return _intern(("atom", kind, name), build)


def _exp_atom(mono: "Monomial"):
    def build():
        a = Atom()
        a.kind, a.name, a.arg = EXP, None, mono
        a.sort_key = (EXP, mono.sort_key)
        a.depth = 1 + mono.depth
        return a
    return _intern(("atom", EXP, mono), build)


class Monomial:
    """Interned product of atoms; ``factors`` is sorted by the atom order."""

    __slots__ = ("factors", "sort_key", "depth")

    def __repr__(self):
        return "Monomial(%s)" % _format_monomial(self)


def _monomial(powers: dict) -> Monomial:
    factors = tuple(sorted(((a, p) for a, p in powers.items() if p), key=lambda ap: ap[0].sort_key))

    def build():
        m = Monomial()
        m.factors = factors
        m.sort_key = tuple((a.sort_key, p) for a, p in factors)
        m.depth = max((a.depth for a, _ in factors), default=0)
        return m
    return _intern(("mono", factors), build)


ONE = _monomial({})


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if a is ONE:
        return b
    if b is ONE:
        return a
    powers = dict(a.factors)
    for atom, p in b.factors:
        powers[atom] = powers.get(atom, 0) + p
    return _monomial(powers)


class ExpPoly:
    """Interned exponential polynomial.  Build with :func:`var`, :func:`sym`, :func:`const`."""

    __slots__ = ("terms", "_depth")

    # identity semantics: equal canonical forms are the same object
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self is const(other)
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return "ExpPoly(%s)" % format_exppoly(self)

    def __str__(self):
        return format_exppoly(self)

    def __bool__(self):
        return bool(self.terms)

    @property
    def depth(self) -> int:
        return self._depth

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return _from_dict(_combine(self, other, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return _from_dict(_combine(self, other, -1))

    def __rsub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return _from_dict({m: -c for m, c in self.terms})

    def __mul__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return _from_dict(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = _lift(other)
        if other is not None and other.is_constant() and other.terms:
            return self * (1 / other.terms[0][1])
        raise ValueError("exponential polynomials can only be divided by nonzero rationals")

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponential polynomials only take natural powers")
        result = const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exp(self) -> "ExpPoly":
        return ep_exp(self)

    def is_constant(self) -> bool:
        return all(m is ONE for m, _ in self.terms)

    def indeterminates(self) -> set:
        return _collect(self, VAR)

    def symbols(self) -> set:
        return _collect(self, SYM)


def _collect(f: ExpPoly, kind) -> set:
    seen = set()
    out = set()

    def walk_mono(m):
        for atom, _ in m.factors:
            if atom in seen:
                continue
            seen.add(atom)
            if atom.kind == kind:
                out.add(atom.name)
            elif atom.kind == EXP:
                walk_mono(atom.arg)

    for m, _ in f.terms:
        walk_mono(m)
    return out


def _from_dict(d: dict) -> ExpPoly:
    terms = tuple(sorted(((m, Fraction(c)) for m, c in d.items() if c), key=lambda mc: mc[0].sort_key))

    def build():
        p = ExpPoly()
        p.terms = terms
        p._depth = max((m.depth for m, _ in terms), default=0)
        return p
    return _intern(("poly", terms), build)


def _combine(a: ExpPoly, b: ExpPoly, sign) -> dict:
    out = dict(a.terms)
    for m, c in b.terms:
        out[m] = out.get(m, 0) + sign * c
    return out


def _lift(x):
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    return None


def const(q) -> ExpPoly:
    q = as_rational(q)
    return _from_dict({ONE: q} if q else {})


def var(name: str) -> ExpPoly:
    """An indeterminate X_i."""
    return _from_dict({_monomial({_named_atom(VAR, name): 1}): 1})


def sym(name: str) -> ExpPoly:
    """A coefficient symbol (an element of the coefficient E-ring)."""
    return _from_dict({_monomial({_named_atom(SYM, name): 1}): 1})


ZERO = const(0)


def ep_add(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f + g


def ep_mul(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f * g


def ep_exp(f: ExpPoly) -> ExpPoly:
    """exp of an exponential polynomial, split over the monomial summands of the exponent."""
    powers: dict = {}
    for m, c in f.terms:
        atom = _exp_atom(m)
        powers[atom] = powers.get(atom, 0) + c
    return _from_dict({_monomial(powers): 1})


_DIFF_CACHE: dict = {}


def _diff_monomial(m: Monomial, name: str) -> ExpPoly:
    key = (m, name)
    hit = _DIFF_CACHE.get(key)
    if hit is not None:
        return hit
    total: dict = {}
    for atom, p in m.factors:
        if atom.kind == SYM:
            continue
        if atom.kind == VAR:
            if atom.name != name:
                continue
            inner = const(1)
        else:
            inner = _diff_monomial(atom.arg, name)
            if not inner:
                continue
        # d(atom^p) = p * atom^p * d(atom)/atom, with d(exp(u))/exp(u) = du
        rest = dict(m.factors)
        if atom.kind == VAR:
            rest[atom] = p - 1
        outer = _monomial(rest)
        for mi, ci in inner.terms:
            mm = _mono_mul(outer, mi)
            total[mm] = total.get(mm, 0) + p * ci
    result = _from_dict(total)
    _DIFF_CACHE[key] = result
    return result


def ep_partial(f: ExpPoly, name) -> ExpPoly:
    """Formal partial derivative with respect to the indeterminate ``name``."""
    out: dict = {}
    for m, c in f.terms:
        for mi, ci in _diff_monomial(m, name).terms:
            out[mi] = out.get(mi, 0) + c * ci
    return _from_dict(out)


def evaluate(f: ExpPoly, values: dict, one, exp_fn):
    """Evaluate into a ring: ``values`` maps indeterminate and symbol names to ring elements.

    ``exp_fn`` computes exp of a ring element and may raise when the element
    is outside the domain of a partial exponential map.
    """
    atom_cache: dict = {}
    mono_cache: dict = {}

    def eval_mono(m):
        if m in mono_cache:
            return mono_cache[m]
        v = one
        for atom, p in m.factors:
            v = v * eval_atom(atom, p)
        mono_cache[m] = v
        return v

    def eval_atom(atom, p):
        key = (atom, p)
        if key in atom_cache:
            return atom_cache[key]
        if atom.kind == EXP:
            v = exp_fn(eval_mono(atom.arg) * p)
        else:
            if atom.name not in values:
                raise KeyError("no value supplied for %r" % atom.name)
            v = values[atom.name] ** p
        atom_cache[key] = v
        return v

    total = one * 0
    for m, c in f.terms:
        total = total + eval_mono(m) * c
    return total


def substitute(f: ExpPoly, mapping: dict) -> ExpPoly:
    """Replace indeterminates/symbols by exponential polynomials (the free E-ring's universal map)."""
    return evaluate(f, mapping, const(1), ep_exp)


@dataclass(frozen=True)
class ExpPolyMap:
    """A tuple of exponential polynomials over a shared list of indeterminates."""

    entries: tuple
    indeterminates: tuple

    def __post_init__(self):
        extra = set().union(*(e.indeterminates() for e in self.entries)) - set(self.indeterminates)
        if extra:
            raise ValueError("entries use undeclared indeterminates %s" % sorted(extra))

    def __len__(self):
        return len(self.entries)

    def jacobian(self):
        return [[ep_partial(f, x) for x in self.indeterminates] for f in self.entries]


# --------------------------------------------------------------------------
# text form


def _fmt_q(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def _format_monomial(m: Monomial) -> str:
    parts = []
    for atom, p in m.factors:
        if atom.kind == EXP:
            if atom.arg is ONE:
                parts.append("exp(%s)" % _fmt_q(Fraction(p)))
            else:
                parts.append("exp(%s)" % format_exppoly(_from_dict({atom.arg: p})))
        elif p == 1:
            parts.append(atom.name)
        else:
            parts.append("%s^%d" % (atom.name, p))
    return "*".join(parts)


def format_exppoly(f: ExpPoly) -> str:
    """Canonical text; parsing it back yields the identical object."""
    if not f.terms:
        return "0"
    out = []
    for m, c in f.terms:
        mag = abs(c)
        body = _format_monomial(m)
        if m is ONE:
            body = _fmt_q(mag)
        elif mag != 1:
            body = _fmt_q(mag) + "*" + body
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def ep_eval(f: ExpPoly, point, target, indeterminates=None, symbols=None):
    """Value of ``f`` in a presented partial E-field.

    ``point`` assigns field elements to the indeterminates (in the order of
    ``indeterminates``, default: sorted names); ``symbols`` maps coefficient
    symbols to field elements and defaults to the generators of ``target``.
    Raises :class:`~expfield.errors.ExpUndefinedError` when an exponent value
    falls outside A(F).
    """
    if indeterminates is None:
        indeterminates = sorted(f.indeterminates())
    if len(point) != len(indeterminates):
        raise ValueError("point has %d entries for %d indeterminates" % (len(point), len(indeterminates)))
    values = dict(zip(indeterminates, point))
    for s in f.symbols():
        if symbols is not None and s in symbols:
            values[s] = symbols[s]
        else:
            values[s] = target.gen(s)
    return evaluate(f, values, target.field.one(), target.exp_of)
