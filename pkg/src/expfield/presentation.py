"""Finitely presented partial exponential fields and the predimension.

A presentation lists generators, a relation ideal over Q (declared prime),
exponential-graph pairs ``exp(a) = E`` between generators, and optionally a
base sub-presentation given by a subset of the generators.  A(F) is the
Q-span of the exp arguments; its elements are handled as coordinate vectors
over :attr:`EFieldPresentation.exp_args`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ExpUndefinedError, NotInAError, PresentationError, UnitIdealError
from .exact import q_kernel, q_rank, q_solve
from .ideals import (FieldElement, Ideal, Poly, PolyRing, PresentedField, buchberger,
                     eliminate, transcendence_degree)


@dataclass
class Failure:
    kind: str
    message: str
    witness: str | None = None

    def as_dict(self):
        return {"kind": self.kind, "message": self.message, "witness": self.witness}


@dataclass
class ValidationReport:
    name: str
    failures: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.valid


@dataclass(frozen=True)
class DeltaReport:
    """Predimension of a tuple: ``delta = td_value - ldim_value``."""

    tuple: tuple
    over: tuple
    td_value: int
    ldim_value: int
    delta: int

    def __post_init__(self):
        if self.delta != self.td_value - self.ldim_value:
            raise ValueError("inconsistent DeltaReport")


class EFieldPresentation:
    """A finitely presented partial E-field.

    Parameters
    ----------
    name : str
    generators : sequence of str
    relations : sequence of Poly
        Generators of the relation ideal, over the ring on ``generators``.
    exp_graph : sequence of (str, str)
        Pairs ``(a, E)`` meaning ``exp(a) = E``.
    base_gens : sequence of str
        Generators of the base subfield.
    base : EFieldPresentation, optional
        The base as its own presentation.  Built by elimination from
        ``base_gens`` when omitted.
    egg : bool
        Declares F generated (over the base) by the graph of exp.
    """

    def __init__(self, name, generators, relations=(), exp_graph=(), base_gens=(), base=None,
                 egg=False):
        self.name = name
        self.generators = tuple(generators)
        self.ring = PolyRing(self.generators)
        self.relations = tuple(self.ring.embed(r) for r in relations)
        self.ideal = Ideal(self.ring, self.relations)
        self.exp_graph = tuple((a, e) for a, e in exp_graph)
        for a, e in self.exp_graph:
            for g in (a, e):
                if g not in self.ring.index:
                    raise PresentationError("exp clause names unknown generator %r" % g)
        self.base_gens = tuple(base_gens)
        for g in self.base_gens:
            if g not in self.ring.index:
                raise PresentationError("base names unknown generator %r" % g)
        self._base = base
        self.egg = egg
        self._field = None
        self._cache: dict = {}
        args = []
        for a, _ in self.exp_graph:
            if a not in args:
                args.append(a)
        self.exp_args = tuple(args)
        self.partner = {}
        for a, e in self.exp_graph:
            self.partner.setdefault(a, e)
        self._arg_index = {a: i for i, a in enumerate(self.exp_args)}

    def __repr__(self):
        return "EFieldPresentation(%s: %s)" % (self.name, ", ".join(self.generators))

    # -- structure
    @property
    def field(self) -> PresentedField:
        if self._field is None:
            self._field = PresentedField(self.ideal)
        return self._field

    @property
    def base(self):
        if self._base is None and self.base_gens:
            self._base = self.restrict(self.base_gens, name=self.name + ".base")
        return self._base

    def gen(self, name) -> FieldElement:
        return self.field.gen(name)

    def element(self, num, den=None) -> FieldElement:
        return self.field.element(num, den)

    def restrict(self, gens, name=None) -> "EFieldPresentation":
        """Sub-presentation on a subset of the generators (relations by elimination)."""
        gens = [g for g in self.generators if g in set(gens)]
        rel = eliminate(buchberger(self.ideal), gens)
        pairs = [(a, e) for a, e in self.exp_graph if a in gens and e in gens]
        return EFieldPresentation(name or self.name + "|" + ",".join(gens), gens,
                                  rel.generators, pairs)

    def import_element(self, el: FieldElement) -> FieldElement:
        """Transport an element of a sub-presentation (same generator names) into this field."""
        if el.field is self.field:
            return el
        return self.field.element(self.ring.embed(el.num), self.ring.embed(el.den))

    # -- A(F) as a coordinate space
    def _arg_normal_forms(self, den: Poly | None = None):
        out = []
        for a in self.exp_args:
            p = self.ring.gen(a) if den is None else den * self.ring.gen(a)
            out.append(self.field.reduce(p))
        return out

    @property
    def arg_relations(self) -> list:
        """Q-basis of homogeneous linear relations among the exp arguments modulo the ideal."""
        if "arg_rel" not in self._cache:
            nfs = self._arg_normal_forms()
            monos = sorted({m for p in nfs for m in p.terms})
            rows = [[p.terms.get(m, Fraction(0)) for p in nfs] for m in monos]
            self._cache["arg_rel"] = q_kernel(rows, len(self.exp_args)) if self.exp_args else []
        return self._cache["arg_rel"]

    def a_basis_over(self, over_gens=()) -> tuple:
        """Greedy Q-basis of A(F) over the span of the exp arguments lying in ``over_gens``."""
        over_gens = set(over_gens)
        key = ("abasis", frozenset(over_gens))
        if key not in self._cache:
            rel = self.arg_relations
            chosen = [self._unit(a) for a in self.exp_args if a in over_gens]
            basis = []
            current = q_rank(chosen + rel) if (chosen or rel) else 0
            for a in self.exp_args:
                if a in over_gens:
                    continue
                trial = q_rank(chosen + rel + [self._unit(a)])
                if trial > current:
                    chosen.append(self._unit(a))
                    basis.append(a)
                    current = trial
            self._cache[key] = tuple(basis)
        return self._cache[key]

    @property
    def a_basis(self) -> tuple:
        """Designated Q-basis of A(F) over A(base)."""
        return self.a_basis_over(self.base_gens)

    def _unit(self, a):
        v = [Fraction(0)] * len(self.exp_args)
        v[self._arg_index[a]] = Fraction(1)
        return v

    def unit_vector(self, a) -> tuple:
        return tuple(self._unit(a))

    def a_value(self, vec) -> FieldElement:
        p = self.ring.zero()
        for a, q in zip(self.exp_args, vec):
            if q:
                p = p + self.ring.gen(a) * q
        return self.field.element(p)

    def a_coords(self, el) -> tuple:
        """Coordinates of an element of A(F) over the exp arguments."""
        if isinstance(el, tuple) and len(el) == len(self.exp_args):
            return tuple(Fraction(x) for x in el)
        key = ("coords", el.key())
        if key in self._cache:
            return self._cache[key]
        if not self.exp_args:
            if not el:
                return ()
            raise NotInAError("%s is not in A(%s): the exponential map is empty" % (el, self.name))
        nfs = self._arg_normal_forms(None if el.den == 1 else el.den)
        target = el.num
        monos = sorted({m for p in nfs for m in p.terms} | set(target.terms))
        rows = [[p.terms.get(m, Fraction(0)) for p in nfs] for m in monos]
        rhs = [target.terms.get(m, Fraction(0)) for m in monos]
        sol = q_solve(rows, rhs, len(self.exp_args)) if monos else [Fraction(0)] * len(self.exp_args)
        if sol is None:
            raise NotInAError("%s is not in A(%s) (not a Q-combination of %s)"
                              % (el, self.name, ", ".join(self.exp_args)))
        self._cache[key] = tuple(sol)
        return self._cache[key]

    def exp_vector(self, vec) -> FieldElement:
        """exp of the A-element with the given coordinates."""
        vec = tuple(Fraction(x) for x in vec)
        key = ("expv", vec)
        if key in self._cache:
            return self._cache[key]
        if any(q.denominator != 1 for q in vec):
            vec2 = self._integral_representative(vec)
            if vec2 is None:
                raise ExpUndefinedError(
                    "exp(%s) needs a root of an exponential value that is not presented"
                    % self.format_vector(vec), value=self.format_vector(vec))
        else:
            vec2 = vec
        value = self.field.one()
        for a, q in zip(self.exp_args, vec2):
            if q:
                value = value * (self.gen(self.partner[a]) ** int(q))
        self._cache[key] = value
        return value

    def _integral_representative(self, vec):
        """Integral coordinates for the same A-element, if some set of arguments gives one.

        Coordinates are unique only up to the argument relations; each subset
        of arguments spanning A(F) is tried as the support of the solution.
        """
        rel = self.arg_relations
        if not rel:
            return None
        m = len(self.exp_args)
        k = m - q_rank(rel)
        target = [list(r) for r in rel]
        for support in combinations(range(m), k):
            # solve vec + Σ t_j rel_j = w with w vanishing off the support
            off = [i for i in range(m) if i not in support]
            rows = [[r[i] for r in rel] for i in off]
            rhs = [-vec[i] for i in off]
            t = q_solve(rows, rhs, len(rel)) if off else [Fraction(0)] * len(rel)
            if t is None:
                continue
            w = [vec[i] + sum((tj * r[i] for tj, r in zip(t, target)), Fraction(0))
                 for i in range(m)]
            if all(x.denominator == 1 for x in w):
                return tuple(w)
        return None

    def exp_of(self, el: FieldElement) -> FieldElement:
        """exp of a field element, defined only on A(F)."""
        try:
            coords = self.a_coords(el)
        except NotInAError:
            raise ExpUndefinedError("exp is undefined at %s: not in A(%s)" % (el, self.name),
                                    value=str(el)) from None
        return self.exp_vector(coords)

    def format_vector(self, vec) -> str:
        parts = []
        for a, q in zip(self.exp_args, vec):
            if not q:
                continue
            q = Fraction(q)
            mag = abs(q)
            coeff = "" if mag == 1 else (str(mag) + "*")
            parts.append(("-" if q < 0 else "+") + " " + coeff + a)
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    # -- transcendence degree
    def td_absolute(self, elements) -> int:
        elements = [e for e in elements if not e.is_constant()]
        uniq = {}
        for e in elements:
            uniq.setdefault(e.key(), e)
        key = ("td", frozenset(uniq))
        if key not in self._cache:
            self._cache[key] = transcendence_degree(self.field, list(uniq.values()))
        return self._cache[key]


# --------------------------------------------------------------------------
# validation


def _univariate_reducible(p: Poly) -> bool:
    import sympy

    (name,) = p.support()
    i = p.ring.index[name]
    x = sympy.Symbol(name)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** e[i] for e, c in p.terms.items())
    _, factors = sympy.factor_list(expr, x, domain="QQ")
    nonconst = [(f, k) for f, k in factors if sympy.degree(f, x) > 0]
    return len(nonconst) > 1 or any(k > 1 for _, k in nonconst)


def _exp_monomial(p: EFieldPresentation, vec) -> Poly:
    out = p.ring.one()
    for a, q in zip(p.exp_args, vec):
        if q:
            out = out * p.ring.gen(p.partner[a]) ** abs(int(q))
    return out


def validate(p: EFieldPresentation) -> ValidationReport:
    """Check every presentation invariant; failures carry a witness polynomial."""
    report = ValidationReport(p.name)
    fail = report.failures
    try:
        _ = p.field
    except UnitIdealError:
        fail.append(Failure("improper-ideal", "the relation ideal is the unit ideal", "1"))
        return report
    for r in p.relations:
        if len(r.support()) == 1 and r.total_degree() > 1 and _univariate_reducible(r):
            fail.append(Failure("reducible-generator",
                                "univariate relation factors over Q, so the ideal is not prime",
                                str(r)))
    base = set(p.base_gens)
    if p._base is not None:
        # the base's own exponential graph must be part of this one
        for a, e in p._base.exp_graph:
            if a not in p.partner:
                fail.append(Failure("base-exp-mismatch",
                                    "base declares exp(%s) = %s but %s is not an exp argument here"
                                    % (a, e, a), a))
            elif p.field.reduce(p.ring.gen(p.partner[a]) - p.ring.gen(e)):
                fail.append(Failure("base-exp-mismatch",
                                    "base declares exp(%s) = %s, here exp(%s) = %s"
                                    % (a, e, a, p.partner[a]), str(p.ring.gen(p.partner[a]) - p.ring.gen(e))))
    for a, e in p.exp_graph:
        if not p.field.reduce(p.ring.gen(e)):
            fail.append(Failure("not-a-unit", "exp(%s) = %s is zero in F" % (a, e), e))
    for e1 in p.exp_graph:
        for e2 in p.exp_graph:
            if e1[0] == e2[0] and e1[1] != e2[1]:
                w = p.ring.gen(e1[1]) - p.ring.gen(e2[1])
                if p.field.reduce(w) and e1 < e2:
                    fail.append(Failure("exp-not-a-function",
                                        "%s has two different exponentials" % e1[0], str(w)))
    # Q-linear independence of the designated basis
    basis = list(p.a_basis_over(()))
    if basis:
        rows = [p.unit_vector(a) for a in basis]
        if q_rank([list(r) for r in rows] + p.arg_relations) != len(basis) + len(p.arg_relations):
            fail.append(Failure("a-basis-dependent",
                                "designated A-basis is Q-linearly dependent modulo the ideal"))
    # homomorphism law on the integer relations among exp arguments
    for rel in p.arg_relations:
        den = 1
        for q in rel:
            den = den * q.denominator // _gcd(den, q.denominator)
        ints = [q * den for q in rel]
        pos = _exp_monomial(p, [q if q > 0 else 0 for q in ints])
        neg = _exp_monomial(p, [-q if q < 0 else 0 for q in ints])
        if p.field.reduce(pos - neg):
            linear = " + ".join("%s*%s" % (q, a) for q, a in zip(ints, p.exp_args) if q)
            fail.append(Failure("multiplicativity",
                                "%s = 0 holds but the exponentials disagree" % linear,
                                str(pos - neg)))
    if p.egg:
        allowed = set(p.exp_args) | set(p.partner.values()) | base
        for g in p.generators:
            if g not in allowed:
                fail.append(Failure("not-egg",
                                    "%s is neither an exp argument, an exponential, nor a base "
                                    "generator" % g, g))
    if p.base_gens and p._base is not None:
        # the base must embed: no new relations among base generators
        contracted = eliminate(buchberger(p.ideal), p.base_gens)
        base_gb = buchberger(Ideal(contracted.ring, [contracted.ring.embed(r) for r in
                                                     p._base.relations]))
        for g in contracted.generators:
            if not base_gb.contains(g):
                fail.append(Failure("base-not-embedded",
                                    "relation among base generators not present in the base",
                                    str(g)))
    return report


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# --------------------------------------------------------------------------
# numeric invariants


def _split_over(p: EFieldPresentation, over):
    """``over`` items: generator names, field elements, or A-coordinate tuples."""
    names, elements, vectors = [], [], []
    for item in over or ():
        if isinstance(item, str):
            if item not in p.ring.index:
                raise PresentationError("unknown generator %r" % item)
            names.append(item)
        elif isinstance(item, FieldElement):
            elements.append(item)
        else:
            vectors.append(tuple(Fraction(x) for x in item))
    return names, elements, vectors


def td(p: EFieldPresentation, elements: Sequence, over: Iterable = ()) -> int:
    """Transcendence degree of ``elements`` over the field generated by ``over``.

    Computed as ``td(elements ∪ over) - td(over)`` with both terms obtained
    from elimination ideals.
    """
    names, extra, vectors = _split_over(p, over)
    base = [p.gen(g) for g in names] + list(extra) + [p.a_value(v) for v in vectors]
    elements = [p.a_value(e) if isinstance(e, tuple) else e for e in elements]
    return p.td_absolute(list(elements) + base) - p.td_absolute(base)


def _ldim_rows(p, vectors):
    return [list(v) for v in vectors] + [list(r) for r in p.arg_relations]


def ldim_q(p: EFieldPresentation, elements: Sequence, over: Iterable = ()) -> int:
    """Dimension of ``<elements, over>_Q / <over>_Q`` inside A(F)."""
    names, extra, vectors = _split_over(p, over)
    over_vecs = [p.unit_vector(a) for a in names if a in p._arg_index]
    over_vecs += [p.a_coords(e) for e in extra] + vectors
    vecs = [p.a_coords(e) for e in elements]
    if not vecs:
        return 0
    top = _ldim_rows(p, over_vecs + vecs)
    bottom = _ldim_rows(p, over_vecs)
    return q_rank(top) - q_rank(bottom)


def delta(p: EFieldPresentation, elements: Sequence, over: Iterable = ()) -> DeltaReport:
    """Predimension ``td(x, exp x / B, exp B) - ldim_Q(x / B)``.

    ``over`` is a mix of generator names (the subfield they generate, with
    the exp arguments among them spanning the A-part) and A-elements (which
    contribute themselves and their exponentials).
    """
    names, extra, vectors = _split_over(p, over)
    over_vecs = [p.a_coords(e) for e in extra] + vectors
    vecs = [p.a_coords(e) for e in elements]
    x_elems = [p.a_value(v) for v in vecs] + [p.exp_vector(v) for v in vecs]
    b_elems = [p.gen(g) for g in names]
    b_elems += [p.a_value(v) for v in over_vecs] + [p.exp_vector(v) for v in over_vecs]
    td_value = p.td_absolute(x_elems + b_elems) - p.td_absolute(b_elems)
    ldim_value = ldim_q(p, vecs, list(names) + over_vecs)
    return DeltaReport(tuple(p.format_vector(v) for v in vecs),
                       tuple(names) + tuple(p.format_vector(v) for v in over_vecs),
                       td_value, ldim_value, td_value - ldim_value)
