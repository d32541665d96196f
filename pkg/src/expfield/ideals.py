"""Multivariate polynomials over Q, Groebner bases and presented fraction fields.

Polynomials are sparse maps from exponent tuples to ``Fraction``.  The
Groebner kernel works on plain dicts for speed; :class:`Poly` is the public,
immutable wrapper.
"""

from __future__ import annotations

import os
import threading
from fractions import Fraction
from itertools import combinations

from .errors import FieldDivisionError, ResourceLimitError, UnitIdealError
from .exact import as_rational, solve

DEFAULT_SPAIR_BUDGET = 10_000


def spair_budget() -> int:
    value = os.environ.get("EXPFIELD_SPAIR_BUDGET")
    return int(value) if value else DEFAULT_SPAIR_BUDGET


# --------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """Polynomial ring Q[gens] with a fixed variable order."""

    __slots__ = ("gens", "index", "nvars")

    def __init__(self, gens):
        self.gens = tuple(gens)
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("duplicate variable names in %r" % (self.gens,))
        self.index = {g: i for i, g in enumerate(self.gens)}
        self.nvars = len(self.gens)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return "PolyRing(%s)" % ", ".join(self.gens)

    def zero_exp(self):
        return (0,) * self.nvars

    def poly(self, terms) -> "Poly":
        return Poly(self, {e: c for e, c in terms.items() if c})

    def const(self, c) -> "Poly":
        c = as_rational(c)
        return Poly(self, {self.zero_exp(): c} if c else {})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def gen(self, name) -> "Poly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def embed(self, p: "Poly") -> "Poly":
        """Rename-free inclusion of a polynomial from a ring over a subset of our variables."""
        if p.ring == self:
            return p
        pos = [self.index[g] for g in p.ring.gens]
        out = {}
        for e, c in p.terms.items():
            ne = [0] * self.nvars
            for k, x in zip(pos, e):
                ne[k] = x
            out[tuple(ne)] = c
        return Poly(self, out)


class Poly:
    """Immutable polynomial; ``terms`` must not be mutated after construction."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic protocol
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({self.ring.zero_exp(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.gens, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return "Poly(%s)" % format_poly(self)

    def __str__(self):
        return format_poly(self)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("ring mismatch: %r vs %r" % (self.ring, other.ring))
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly(self.ring, _add(self.terms, other.terms, Fraction(1)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly(self.ring, _add(self.terms, other.terms, Fraction(-1)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return self.ring.zero()
            return Poly(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly(self.ring, _mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be natural numbers")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- queries
    def is_constant(self) -> bool:
        z = self.ring.zero_exp()
        return all(e == z for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(self.ring.zero_exp(), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def support(self) -> set:
        """Names of variables that actually occur."""
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.ring.gens[i])
        return used

    def diff(self, name) -> "Poly":
        i = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.ring, out)

    def substitute(self, values, one):
        """Evaluate with ``values[i]`` for variable i in any commutative ring.

        ``one`` is the multiplicative identity of the target ring; rational
        coefficients are applied with ``one * c``.
        """
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = one if k == 0 else (values[i] if k == 1 else power(i, k - 1) * values[i])
            return powers[key]

        total = one * 0
        for e, c in sorted(self.terms.items()):
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def leading(self, order) -> tuple:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order) -> Fraction:
        return self.terms[self.leading(order)]


def _add(a: dict, b: dict, sign: Fraction) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def format_poly(p: Poly) -> str:
    """Deterministic text form, highest graded-reverse-lex term first."""
    if not p.terms:
        return "0"
    order = grevlex(p.ring.nvars)
    pieces = []
    for e in sorted(p.terms, key=order.key, reverse=True):
        c = p.terms[e]
        mono = "*".join(
            g if k == 1 else "%s^%d" % (g, k) for g, k in zip(p.ring.gens, e) if k)
        mag = abs(c)
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = _fmt_coeff(mag) + "*" + mono
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces)


# --------------------------------------------------------------------------
# monomial orders


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class MonomialOrder:
    """A total monomial order given by a sort key on exponent tuples."""

    __slots__ = ("name", "key")

    def __init__(self, name, key):
        self.name = name
        self.key = key

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return "MonomialOrder(%s)" % self.name


def grevlex(nvars: int = 0) -> MonomialOrder:
    return MonomialOrder("grevlex", _grevlex_key)


def lex(nvars: int = 0) -> MonomialOrder:
    return MonomialOrder("lex", tuple)


def block_order(first: int) -> MonomialOrder:
    """Elimination order: grevlex on the first ``first`` variables, ties by grevlex on the rest."""

    def key(e):
        return (_grevlex_key(e[:first]), _grevlex_key(e[first:]))

    return MonomialOrder("block(%d)" % first, key)


# --------------------------------------------------------------------------
# Buchberger kernel on raw dicts


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(f: dict, key) -> dict:
    c = f[max(f, key=key)]
    if c == 1:
        return f
    return {e: v / c for e, v in f.items()}


def _reduce(f: dict, basis, key) -> dict:
    """Full normal form of ``f`` modulo monic ``basis`` given as (lm, dict) pairs."""
    f = dict(f)
    rem = {}
    while f:
        m = max(f, key=key)
        c = f[m]
        for lm, g in basis:
            if _divides(lm, m):
                shift = tuple(x - y for x, y in zip(m, lm))
                for e, v in g.items():
                    ne = tuple(x + y for x, y in zip(e, shift))
                    nv = f.get(ne, 0) - c * v
                    if nv:
                        f[ne] = nv
                    else:
                        del f[ne]
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _spoly(f, lf, g, lg):
    lcm = _lcm(lf, lg)
    sf = tuple(x - y for x, y in zip(lcm, lf))
    sg = tuple(x - y for x, y in zip(lcm, lg))
    out = {}
    for e, v in f.items():
        out[tuple(x + y for x, y in zip(e, sf))] = v
    for e, v in g.items():
        ne = tuple(x + y for x, y in zip(e, sg))
        nv = out.get(ne, 0) - v
        if nv:
            out[ne] = nv
        else:
            out.pop(ne, None)
    return out


def _groebner_raw(polys, key, budget):
    G: list[dict] = []
    LM: list[tuple] = []
    pairs: set = set()

    def update(f):
        nonlocal pairs
        lmf = max(f, key=key)
        k = len(G)
        kept = set()
        for (i, j) in pairs:
            L = _lcm(LM[i], LM[j])
            if not _divides(lmf, L) or L == _lcm(LM[i], lmf) or L == _lcm(LM[j], lmf):
                kept.add((i, j))
        groups: dict = {}
        for i in range(k):
            groups.setdefault(_lcm(LM[i], lmf), []).append(i)
        minimal = []
        for L in sorted(groups, key=key):
            if all(not _divides(M, L) for M in minimal):
                minimal.append(L)
        for L in minimal:
            idx = groups[L]
            coprime = any(L == tuple(x + y for x, y in zip(LM[i], lmf)) for i in idx)
            if not coprime:
                kept.add((min(idx), k))
        pairs = kept
        G.append(f)
        LM.append(lmf)

    for p in polys:
        if not p:
            continue
        h = _reduce(p, list(zip(LM, G)), key)
        if h:
            update(_monic(h, key))

    processed = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (key(_lcm(LM[p[0]], LM[p[1]])), p))
        pairs.discard((i, j))
        processed += 1
        if processed > budget:
            raise ResourceLimitError(
                "Groebner S-pair budget of %d exceeded; the instance is too large "
                "(raise EXPFIELD_SPAIR_BUDGET to allow more)" % budget)
        s = _spoly(G[i], LM[i], G[j], LM[j])
        h = _reduce(s, list(zip(LM, G)), key)
        if h:
            update(_monic(h, key))

    # minimalise then interreduce
    order_idx = sorted(range(len(G)), key=lambda t: key(LM[t]))
    minimal = []
    for t in order_idx:
        if all(not _divides(LM[s], LM[t]) for s in minimal):
            minimal.append(t)
    reduced = []
    for t in minimal:
        others = [(LM[s], G[s]) for s in minimal if s != t]
        head = LM[t]
        tail = {e: v for e, v in G[t].items() if e != head}
        r = _reduce(tail, others, key)
        r[head] = G[t][head]
        reduced.append(_monic(r, key))
    reduced.sort(key=lambda f: key(max(f, key=key)), reverse=True)
    return reduced


# --------------------------------------------------------------------------
# public ideal API


class GroebnerBasis:
    """Reduced Groebner basis of an ideal under a fixed monomial order."""

    def __init__(self, ring: PolyRing, order: MonomialOrder, basis):
        self.ring = ring
        self.order = order
        self.basis = tuple(basis)
        self.leading_monomials = tuple(p.leading(order) for p in self.basis)
        self._pairs = [(lm, p.terms) for lm, p in zip(self.leading_monomials, self.basis)]

    def __repr__(self):
        return "GroebnerBasis(%s, [%s])" % (self.order.name, ", ".join(map(str, self.basis)))

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    @property
    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials)

    def reduce(self, p: Poly) -> Poly:
        if p.ring != self.ring:
            p = self.ring.embed(p)
        if not p.terms:
            return p
        return Poly(self.ring, _reduce(p.terms, self._pairs, self.order.key))

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p)

    def is_zero_dimensional(self) -> bool:
        pure = set()
        for lm in self.leading_monomials:
            support = [i for i, x in enumerate(lm) if x]
            if len(support) == 1:
                pure.add(support[0])
        return len(pure) == self.ring.nvars

    def standard_monomials(self):
        """Monomials not divisible by any leading monomial (finite ideals only)."""
        if self.is_unit:
            return []
        if not self.is_zero_dimensional():
            raise ValueError("standard monomials are infinite for a positive-dimensional ideal")
        bounds = [0] * self.ring.nvars
        for lm in self.leading_monomials:
            support = [i for i, x in enumerate(lm) if x]
            if len(support) == 1:
                i = support[0]
                bounds[i] = lm[i] if not bounds[i] else min(bounds[i], lm[i])
        out = []

        def rec(prefix):
            if len(prefix) == self.ring.nvars:
                e = tuple(prefix)
                if not any(_divides(lm, e) for lm in self.leading_monomials):
                    out.append(e)
                return
            for k in range(bounds[len(prefix)]):
                rec(prefix + [k])

        rec([])
        out.sort(key=self.order.key)
        return out


class Ideal:
    """Ideal of a polynomial ring given by generators."""

    def __init__(self, ring: PolyRing, generators=()):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                g = ring.embed(g)
            if g and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)

    def __repr__(self):
        return "Ideal<%s>" % ", ".join(map(str, self.generators))

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and set(self.generators) == set(other.generators))

    def __hash__(self):
        return hash((self.ring, frozenset(self.generators)))

    def groebner(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        return buchberger(self, order)


_GB_CACHE: dict = {}
_GB_LOCK = threading.Lock()


def buchberger(ideal: Ideal, order: MonomialOrder | None = None, budget: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are selected by the normal strategy (least lcm first) and pruned
    with the Gebauer-Moeller criteria.  Processing more than ``budget``
    S-pairs raises :class:`ResourceLimitError`.
    """
    order = order or grevlex(ideal.ring.nvars)
    budget = spair_budget() if budget is None else budget
    cache_key = (ideal.ring.gens, tuple(sorted(ideal.generators, key=str)), order.name)
    with _GB_LOCK:
        hit = _GB_CACHE.get(cache_key)
    if hit is not None:
        return hit
    raw = _groebner_raw([g.terms for g in sorted(ideal.generators, key=str)], order.key, budget)
    gb = GroebnerBasis(ideal.ring, order, [Poly(ideal.ring, f) for f in raw])
    with _GB_LOCK:
        _GB_CACHE[cache_key] = gb
    return gb


def ideal_member(p: Poly, gb: GroebnerBasis) -> bool:
    return gb.contains(p)


def _max_independent(lead_masks, candidates: list[int]) -> int:
    n = len(candidates)
    full = 0
    for i in candidates:
        full |= 1 << i
    relevant = [m for m in lead_masks if m & ~full == 0]
    for size in range(n, -1, -1):
        for subset in combinations(candidates, size):
            u = 0
            for i in subset:
                u |= 1 << i
            if all(m & ~u for m in relevant):
                return size
    return 0


def _mask(e):
    m = 0
    for i, x in enumerate(e):
        if x:
            m |= 1 << i
    return m


def krull_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of ``Q[x]/I``: the largest set of variables independent modulo ``in(I)``."""
    if gb.is_unit:
        raise UnitIdealError("the unit ideal has no Krull dimension")
    masks = [_mask(lm) for lm in gb.leading_monomials]
    return _max_independent(masks, list(range(gb.ring.nvars)))


def eliminate(gb: GroebnerBasis | Ideal, keep) -> Ideal:
    """Generators of ``I ∩ Q[keep]`` as an ideal of the ring on ``keep``."""
    ideal = gb if isinstance(gb, Ideal) else Ideal(gb.ring, gb.basis)
    keep = [g for g in ideal.ring.gens if g in set(keep)]
    drop = [g for g in ideal.ring.gens if g not in set(keep)]
    ring2 = PolyRing(drop + keep)
    big = buchberger(Ideal(ring2, [ring2.embed(g) for g in ideal.generators]), block_order(len(drop)))
    target = PolyRing(keep)
    out = []
    nd = len(drop)
    for p in big.basis:
        if all(not any(e[:nd]) for e in p.terms):
            out.append(Poly(target, {e[nd:]: c for e, c in p.terms.items()}))
    return Ideal(target, out)


# --------------------------------------------------------------------------
# fraction field of a presented domain


class PresentedField:
    """Fraction field of ``Q[gens]/P`` for an ideal P declared prime."""

    def __init__(self, ideal: Ideal):
        self.ring = ideal.ring
        self.ideal = ideal
        self.gb = buchberger(ideal)
        if self.gb.is_unit:
            raise UnitIdealError("relation ideal is the unit ideal")
        self._std = None
        if self.gb.is_zero_dimensional():
            self._std = self.gb.standard_monomials()
            self._std_index = {e: i for i, e in enumerate(self._std)}
        self._order = self.gb.order

    def __repr__(self):
        return "PresentedField(%s / %s)" % (", ".join(self.ring.gens), self.ideal)

    def reduce(self, p: Poly) -> Poly:
        return self.gb.reduce(p)

    def element(self, num, den=None) -> "FieldElement":
        if not isinstance(num, Poly):
            num = self.ring.const(num)
        if den is None:
            den = self.ring.one()
        elif not isinstance(den, Poly):
            den = self.ring.const(den)
        return FieldElement._make(self, self.ring.embed(num), self.ring.embed(den))

    def gen(self, name) -> "FieldElement":
        return self.element(self.ring.gen(name))

    def const(self, q) -> "FieldElement":
        return self.element(self.ring.const(q))

    def zero(self):
        return self.const(0)

    def one(self):
        return self.const(1)

    def _invert_zero_dim(self, den: Poly):
        # multiplication-by-den on the standard monomial basis, solved for 1
        n = len(self._std)
        cols = []
        for e in self._std:
            r = self.reduce(den * Poly(self.ring, {e: Fraction(1)}))
            col = [Fraction(0)] * n
            for m, c in r.terms.items():
                col[self._std_index[m]] = c
            cols.append(col)
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(0)] * n
        rhs[self._std_index[self.ring.zero_exp()]] = Fraction(1)
        x = solve(rows, rhs, n, Fraction(0))
        if x is None:
            raise FieldDivisionError("element is a zero divisor; is the relation ideal prime?")
        return self.reduce(Poly(self.ring, {e: c for e, c in zip(self._std, x) if c}))


class FieldElement:
    """Element of a :class:`PresentedField`, stored as a reduced fraction of normal forms.

    Equality is decided by ideal membership of the cross product.  Elements
    are not hashable (representations are not unique); use :meth:`key`.
    """

    __slots__ = ("field", "num", "den")
    __hash__ = None

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def _make(cls, field: PresentedField, num: Poly, den: Poly):
        den = field.reduce(den)
        if not den:
            raise FieldDivisionError("denominator reduces to zero")
        num = field.reduce(num)
        if not num:
            return cls(field, num, field.ring.one())
        if den.is_constant():
            c = den.constant_value()
            return cls(field, num * (1 / c), field.ring.one())
        if field._std is not None:
            return cls(field, field.reduce(num * field._invert_zero_dim(den)), field.ring.one())
        lc = den.leading_coefficient(field._order)
        if lc != 1:
            num = num * (1 / lc)
            den = den * (1 / lc)
        return cls(field, num, den)

    def key(self):
        return (self.num, self.den)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different presented fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.const(other)
        if isinstance(other, Poly):
            return self.field.element(other)
        return None

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return not self.field.reduce(self.num * other.den - other.num * self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return FieldElement._make(self.field, self.num + other.num, self.den)
        return FieldElement._make(self.field, self.num * other.den + other.num * self.den,
                                  self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.field.zero()
            return FieldElement(self.field, self.num * Fraction(other), self.den)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldElement._make(self.field, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise FieldDivisionError("division by zero in the presented field")
        return FieldElement._make(self.field, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise FieldDivisionError("division by zero in the presented field")
        return FieldElement._make(self.field, self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("only integer powers of field elements are defined")
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement._make(self.field, self.num ** k, self.den ** k)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __repr__(self):
        return "FieldElement(%s)" % self

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return "(%s)/(%s)" % (self.num, self.den)


def fe_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch one of ``+ - * /`` (``÷`` and ``×`` accepted)."""
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError("unknown field operation %r" % op)


# --------------------------------------------------------------------------
# relations among field elements


def _relation_basis(field: PresentedField, elements):
    ring = field.ring
    reuse: dict[int, str] = {}
    fresh = []
    for i, el in enumerate(elements):
        name = _single_generator(el)
        if name is not None and name not in reuse.values():
            reuse[i] = name
        else:
            fresh.append(i)
    dens = [elements[i].den for i in fresh if not elements[i].den.is_constant()]
    fresh_names = ["__t%d" % i for i in fresh]
    sat = ["__w"] if dens else []
    kept_gens = list(reuse.values())
    drop = [g for g in ring.gens if g not in kept_gens] + sat
    big = PolyRing(drop + kept_gens + fresh_names)
    gens = [big.embed(p) for p in field.gb.basis]
    for i, tn in zip(fresh, fresh_names):
        el = elements[i]
        gens.append(big.embed(el.den) * big.gen(tn) - big.embed(el.num))
    if dens:
        prod = big.one()
        for d in dens:
            prod = prod * big.embed(d)
        gens.append(big.gen("__w") * prod - 1)
    gb = buchberger(Ideal(big, gens), block_order(len(drop)))
    nd = len(drop)
    restricted = [p for p in gb.basis if all(not any(e[:nd]) for e in p.terms)]
    position = {}
    for i, g in reuse.items():
        position[i] = nd + kept_gens.index(g)
    for k, i in enumerate(fresh):
        position[i] = nd + len(kept_gens) + k
    return big, nd, restricted, position


def relation_ideal(field: PresentedField, elements, names=None) -> Ideal:
    """Ideal of polynomial relations satisfied by ``elements`` over Q.

    Fresh variables ``t_i`` are mapped to the elements; the kernel of
    ``Q[t] -> F`` is ``(P + <den_i t_i - num_i> : (prod den_i)^inf) ∩ Q[t]``,
    computed with one block-order elimination.  Elements that are literally
    generators reuse the generator variable instead of a fresh one.
    """
    elements = list(elements)
    if names is None:
        names = ["t%d" % i for i in range(len(elements))]
    big, nd, restricted, position = _relation_basis(field, elements)
    target = PolyRing(names)
    out = []
    for p in restricted:
        terms = {}
        for e, c in p.terms.items():
            terms[tuple(e[position[i]] for i in range(len(elements)))] = c
        out.append(Poly(target, terms))
    return Ideal(target, out)


def _single_generator(el: FieldElement):
    if el.den != 1 or len(el.num.terms) != 1:
        return None
    (e, c), = el.num.terms.items()
    if c != 1 or sum(e) != 1:
        return None
    return el.field.ring.gens[e.index(1)]


def transcendence_degree(field: PresentedField, elements) -> int:
    """td over Q of the subfield generated by ``elements``.

    Krull dimension of the relation ideal, read off the leading monomials of
    the elimination basis (a Groebner basis of the relation ideal for the
    graded reverse lex order on the kept block).
    """
    elements = [e for e in elements if not e.is_constant()]
    if not elements:
        return 0
    big, nd, restricted, position = _relation_basis(field, elements)
    order = block_order(nd)
    masks = [_mask(p.leading(order)) for p in restricted]
    return _max_independent(masks, sorted(set(position.values())))
