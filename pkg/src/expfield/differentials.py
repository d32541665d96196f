"""Differential modules Ω(F/C), Ξ(F/C), the closure cl and E-derivations.

Ξ(F/C) is presented by the relations Σ ∂f/∂X_i(ā) da_i = 0, one per relation
generator of F rewritten as an exponential polynomial in the A-basis.  The
rewrite sends

* generators in C to coefficient symbols,
* exp arguments outside C to indeterminates X_a,
* other exponentials E = exp(a) to exp(rewrite(a)),
* any remaining generator to a plain indeterminate.

Exp pairs whose two sides do not rewrite to the same exponential polynomial
(for instance ``exp(a) = E`` with E in C and a outside it) contribute the
relation ``rewrite(E) - exp(rewrite(a))``.  Extra elements of C that are
not generators contribute the row ``dh = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import (DimensionMismatchError, EggRequiredError, InputError, NoExtensionError,
                     NotApplicableError)
from .exact import (fraction_free_rank, kernel_basis, primitive_integer_vector, q_kernel, q_rank,
                    solve)
from .exppoly import ExpPoly, const, ep_exp, ep_eval, ep_partial, sym, var
from .ideals import FieldElement, Poly
from .presentation import EFieldPresentation, _split_over


def _clear_row(row):
    """Scale a row of field elements by the product of its distinct denominators."""
    dens = []
    for x in row:
        if x.den != 1 and x.den not in dens:
            dens.append(x.den)
    if not dens:
        return list(row)
    field = row[0].field
    out = []
    for x in row:
        p = x.num
        for d in dens:
            if d != x.den:
                p = p * d
        out.append(field.element(p))
    return out


def fe_rank(rows, ncols: int) -> int:
    """Rank over a presented fraction field: clear denominators, then fraction-free elimination."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return fraction_free_rank([_clear_row(r) for r in rows], ncols)


class DiffModule:
    """Matrix presentation of Ξ(F/C) over the fraction field of F."""

    def __init__(self, field: EFieldPresentation, over=()):
        self.field = field
        names, extra, vectors = _split_over(field, over)
        self.over_gens = tuple(g for g in field.generators if g in set(names))
        self.over_elements = tuple(extra) + tuple(field.a_value(v) for v in vectors)
        cset = set(self.over_gens)
        self.rewrite: dict[str, ExpPoly] = {}
        indets = []
        for g in field.generators:
            if g in cset:
                continue
            if g in field.partner or not _is_partner(field, g):
                indets.append(g)
        self.indeterminates = tuple(indets)
        for g in field.generators:
            self._rewrite(g)
        self.basis_symbols = tuple("d" + g for g in self.indeterminates)
        self.point = tuple(field.gen(g) for g in self.indeterminates)
        rels = []
        for r in field.relations:
            f = r.substitute([self.rewrite[g] for g in field.generators], const(1))
            if f and f not in rels:
                rels.append(f)
        for a, e in field.exp_graph:
            f = self.rewrite[e] - ep_exp(self.rewrite[a])
            if f and f not in rels:
                rels.append(f)
        self.relations = tuple(rels)
        self.lambda_forms = tuple((a, field.partner[a]) for a in field.a_basis_over(self.over_gens))
        self._dgen: dict = {}
        matrix = [[ep_eval(ep_partial(f, x), self.point, field, self.indeterminates)
                   for x in self.indeterminates] for f in self.relations]
        matrix += [self.differential(h) for h in self.over_elements]
        self.relation_matrix = tuple(tuple(r) for r in matrix)
        self._rank = None

    def _rewrite(self, g) -> ExpPoly:
        if g in self.rewrite:
            return self.rewrite[g]
        f = self.field
        if g in self.over_gens:
            out = sym(g)
        elif g in self.indeterminates:
            out = var(g)
        else:
            arg = next(a for a, e in f.exp_graph if e == g)
            out = ep_exp(self._rewrite(arg))
        self.rewrite[g] = out
        return out

    def __repr__(self):
        return "DiffModule(%s over {%s}: %d symbols, %d relations)" % (
            self.field.name, ", ".join(self.over_gens), self.n, len(self.relation_matrix))

    @property
    def n(self) -> int:
        return len(self.indeterminates)

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = fe_rank(self.relation_matrix, self.n)
        return self._rank

    @property
    def dim(self) -> int:
        return self.n - self.rank

    def generator_differential(self, g) -> list:
        """Coordinates of dg in the basis symbols."""
        if g not in self._dgen:
            f = self.rewrite[g]
            self._dgen[g] = [ep_eval(ep_partial(f, x), self.point, self.field, self.indeterminates)
                             for x in self.indeterminates]
        return self._dgen[g]

    def _poly_differential(self, p: Poly):
        F = self.field
        zero = F.field.zero()
        out = [zero] * self.n
        for g in p.support():
            coeff = F.element(p.diff(g))
            if not coeff:
                continue
            out = [o + coeff * v for o, v in zip(out, self.generator_differential(g))]
        return out

    def differential(self, h: FieldElement) -> list:
        """dh in the basis symbols, by the quotient rule through the generator rewrite."""
        h = self.field.import_element(h)
        dnum = self._poly_differential(h.num)
        if h.den == 1:
            return dnum
        dden = self._poly_differential(h.den)
        num = self.field.element(h.num)
        den = self.field.element(h.den)
        den2 = den * den
        return [(den * a - num * b) / den2 for a, b in zip(dnum, dden)]

    def in_row_space(self, vec) -> bool:
        if not any(vec):
            return True
        return fe_rank(list(self.relation_matrix) + [vec], self.n) == self.rank

    def rank_of(self, vectors) -> int:
        """Rank of the images of ``vectors`` in Ξ (quotient by the relation rows)."""
        vectors = [v for v in vectors if any(v)]
        if not vectors:
            return 0
        return fe_rank(list(self.relation_matrix) + vectors, self.n) - self.rank


def _is_partner(F: EFieldPresentation, g) -> bool:
    return any(e == g for _, e in F.exp_graph)


def _over_key(F, over):
    names, extra, vectors = _split_over(F, over)
    return (frozenset(names), tuple(sorted(str(e.key()) for e in extra)),
            tuple(sorted(vectors)))


def xi_presentation(F: EFieldPresentation, C=()) -> DiffModule:
    """Ξ(F/C) as a :class:`DiffModule`; F must be declared exponential-graph-generated."""
    if not F.egg:
        raise EggRequiredError("%s is not declared exponential-graph-generated (egg)" % F.name)
    return _module(F, C)


def _module(F, C) -> DiffModule:
    key = ("xi", _over_key(F, C))
    if key not in F._cache:
        F._cache[key] = DiffModule(F, C)
    return F._cache[key]


def xi_dim(F: EFieldPresentation, C=()) -> int:
    return xi_presentation(F, C).dim


def _as_element(F, h):
    if isinstance(h, str):
        return F.gen(h)
    if isinstance(h, tuple):
        return F.a_value(h)
    return F.import_element(h)


def cl_member(F: EFieldPresentation, C, h) -> bool:
    """``h ∈ cl(C)``: dh vanishes in Ξ(F/C)."""
    M = xi_presentation(F, C)
    return M.in_row_space(M.differential(_as_element(F, h)))


def closure_generators(F: EFieldPresentation, C=()) -> tuple:
    """The generators lying in cl(C), in presentation order."""
    key = ("clgens", _over_key(F, C))
    if key not in F._cache:
        F._cache[key] = tuple(g for g in F.generators if cl_member(F, C, g))
    return F._cache[key]


def closure_a_span(F: EFieldPresentation, C=()) -> tuple:
    """Q-basis of cl(C) ∩ A(F), in coordinates over the exp arguments.

    v lies in cl(C) iff every E-derivation over C kills Σ v_i a_i, which is
    a Q-linear condition on v; vectors already spanned by the exp arguments
    among the generators of C (or by the argument relations) are left out.
    """
    key = ("clspan", _over_key(F, C))
    if key in F._cache:
        return F._cache[key]
    M = xi_presentation(F, C)
    m = len(F.exp_args)
    ders = kernel_basis(M.relation_matrix, M.n, F.field.zero(), F.field.one())
    rows = []
    if ders:
        diffs = [M.differential(F.gen(a)) for a in F.exp_args]
        for D in ders:
            pairing = []
            for w in diffs:
                total = F.field.zero()
                for x, y in zip(w, D):
                    if x and y:
                        total = total + x * y
                pairing.append(total)
            cleared = [F.field.reduce(p.num) for p in _clear_row(pairing)] if any(pairing) \
                else [F.ring.zero()] * m
            monos = sorted({e for p in cleared for e in p.terms})
            rows += [[p.terms.get(e, Fraction(0)) for p in cleared] for e in monos]
    span = q_kernel(rows, m) if rows else [F.unit_vector(a) for a in F.exp_args]
    names = set(_split_over(F, C)[0])
    known = [list(r) for r in F.arg_relations] + [list(F.unit_vector(a)) for a in F.exp_args
                                                    if a in names]
    out = []
    for v in span:
        if q_rank(known + [list(v)]) > q_rank(known):
            known.append(list(v))
            out.append(tuple(Fraction(x) for x in primitive_integer_vector(v)))
    F._cache[key] = tuple(out)
    return F._cache[key]


def closure_over(F: EFieldPresentation, C=()) -> list:
    """cl(C) as an ``over`` argument: its generators followed by the rest of its A-part."""
    return list(closure_generators(F, C)) + list(closure_a_span(F, list(closure_generators(F, C))))


def exchange_check(F: EFieldPresentation, C, a, b) -> bool:
    """Does ``a ∈ cl(C ∪ {b}) \\ cl(C)  ⟹  b ∈ cl(C ∪ {a})`` hold here?"""
    C = list(C)
    if not cl_member(F, C + [b], a) or cl_member(F, C, a):
        return True
    return cl_member(F, C + [a], b)


# --------------------------------------------------------------------------
# derivations


@dataclass
class Derivation:
    """An E-derivation given by its values on the basis symbols of Ξ(F/∅)."""

    field: EFieldPresentation
    values: dict
    scale: FieldElement | None = None

    def _module(self):
        return _module(self.field, ())

    def on_generator(self, g) -> FieldElement:
        M = self._module()
        if g in self.values:
            return self.values[g]
        total = self.field.field.zero()
        for x, c in zip(M.indeterminates, M.generator_differential(g)):
            if c:
                total = total + c * self.values[x]
        return total

    def __call__(self, h) -> FieldElement:
        M = self._module()
        h = _as_element(self.field, h)
        total = self.field.field.zero()
        for x, c in zip(M.indeterminates, M.differential(h)):
            if c:
                total = total + c * self.values[x]
        return total

    def is_zero(self) -> bool:
        return not any(self.values.values())


def eder_basis(F: EFieldPresentation, C=()) -> list:
    """Basis of EDer(F/C) as derivations (values vanish on C)."""
    xi_presentation(F, C)
    return derivation_basis(F, C)


def derivation_basis(F: EFieldPresentation, C=()) -> list:
    """Kernel of the relation matrix as derivations; no exponential-graph-generated requirement.

    For any presentation the kernel consists exactly of the derivations that
    respect the relations and the exponential rule on the declared pairs.
    """
    M = _module(F, C)
    zero, one = F.field.zero(), F.field.one()
    vecs = kernel_basis(M.relation_matrix, M.n, zero, one)
    out = []
    for v in vecs:
        vals = dict(zip(M.indeterminates, v))
        for g in M.over_gens:
            vals[g] = zero
        out.append(_full_derivation(F, vals))
    return out


def _full_derivation(F, vals):
    # values on the Ξ(F/∅) symbols; generators in C carry 0
    return Derivation(F, {x: vals[x] for x in _module(F, ()).indeterminates})


def eder_dim(F: EFieldPresentation, C=()) -> int:
    """dim EDer(F/C), computed as the kernel dimension of the relation matrix.

    Raises if it disagrees with :func:`xi_dim` (duality).
    """
    M = xi_presentation(F, C)
    k = len(kernel_basis(M.relation_matrix, M.n, F.field.zero(), F.field.one()))
    if k != M.dim:
        raise DimensionMismatchError("EDer dimension %d disagrees with Ξ dimension %d" % (k, M.dim))
    return k


def verify_derivation(D: Derivation) -> list:
    """Violations of the exponential rule and of Leibniz on the relation generators (empty if valid)."""
    F = D.field
    bad = []
    for a, e in F.exp_graph:
        if D.on_generator(e) != F.gen(e) * D.on_generator(a):
            bad.append("D(%s) != %s*D(%s)" % (e, e, a))
    gvals = {g: D.on_generator(g) for g in F.generators}
    for r in F.relations:
        total = F.field.zero()
        for g in r.support():
            total = total + F.element(r.diff(g)) * gvals[g]
        if total:
            bad.append("Leibniz fails on %s" % r)
    return bad


def extend_derivation(F1: EFieldPresentation, F2: EFieldPresentation, d: Derivation) -> Derivation:
    """Extend an E-derivation of F1 to F2 by solving the linear system of Ξ(F2/∅).

    Unconstrained coordinates are set to zero.  Raises
    :class:`NoExtensionError` when the system is inconsistent.
    """
    if not F2.egg:
        raise EggRequiredError("%s is not declared exponential-graph-generated" % F2.name)
    missing = set(F1.generators) - set(F2.generators)
    if missing:
        raise InputError("%s does not contain the generators %s of %s"
                         % (F2.name, sorted(missing), F1.name))
    M = xi_presentation(F2, ())
    fixed = {}
    for x in M.indeterminates:
        if x in F1.generators:
            fixed[x] = F2.import_element(d.on_generator(x))
    free = [x for x in M.indeterminates if x not in fixed]
    zero = F2.field.zero()
    rows, rhs = [], []
    for row in M.relation_matrix:
        acc = zero
        for x, c in zip(M.indeterminates, row):
            if x in fixed and c:
                acc = acc + c * fixed[x]
        rows.append([c for x, c in zip(M.indeterminates, row) if x not in fixed])
        rhs.append(zero - acc)
    if free:
        sol = solve(rows, rhs, len(free), zero)
    else:
        sol = [] if not any(rhs) else None
    if sol is None:
        raise NoExtensionError("the derivation of %s does not extend to %s" % (F1.name, F2.name))
    values = dict(fixed)
    values.update(zip(free, sol))
    return Derivation(F2, values)


# --------------------------------------------------------------------------
# Ω(F2/F1) and the integer-relation witness


def omega_rows(F: EFieldPresentation, over=()) -> list:
    """Relations of Ω(F/C) in the coordinates dg, g ranging over all generators."""
    names = set(_split_over(F, over)[0])
    rows = []
    for r in F.relations:
        rows.append([F.element(r.diff(g)) for g in F.generators])
    one, zero = F.field.one(), F.field.zero()
    for g in F.generators:
        if g in names:
            rows.append([one if h == g else zero for h in F.generators])
    return rows


def omega_hat(F2: EFieldPresentation, F1: EFieldPresentation) -> list:
    """The forms dE/E - da for the A-basis of F2 over F1, in Ω(F2) coordinates."""
    out = []
    zero = F2.field.zero()
    for a in F2.a_basis_over(F1.generators):
        e = F2.partner[a]
        v = [zero] * len(F2.generators)
        v[F2.ring.index[e]] = v[F2.ring.index[e]] + F2.gen(e).inverse()
        v[F2.ring.index[a]] = v[F2.ring.index[a]] - F2.field.one()
        out.append(v)
    return out


def omega_hat_rank(F2, F1) -> tuple:
    rows = omega_rows(F2, F1.generators)
    m = len(F2.generators)
    base = fe_rank(rows, m)
    forms = omega_hat(F2, F1)
    return fe_rank(rows + forms, m) - base, len(forms)


def _candidates(n, bound):
    # lexicographic over [-bound, bound]^n, one sign per line through 0
    for m in product(range(-bound, bound + 1), repeat=n):
        lead = next((x for x in m if x), 0)
        if lead > 0:
            yield m


def ax_fact_witness(F2: EFieldPresentation, F1: EFieldPresentation, bound: int):
    """Integer vector m with b = Σ m_i a_i and e^b both algebraic over F1.

    Candidates have entries in [-bound, bound] and a positive first nonzero
    coordinate, and are searched in lexicographic order.  Returns None when nothing is found
    within ``bound``.  Raises :class:`NotApplicableError` when the forms
    dE/E - da are independent in Ω(F2/F1).
    """
    r, n = omega_hat_rank(F2, F1)
    if r == n:
        raise NotApplicableError("the forms dE/E - da are independent in Ω(%s/%s)"
                                 % (F2.name, F1.name))
    basis = F2.a_basis_over(F1.generators)
    base = [F2.gen(g) for g in F1.generators]
    td_base = F2.td_absolute(base)
    for m in _candidates(n, bound):
        vec = [Fraction(0)] * len(F2.exp_args)
        for a, k in zip(basis, m):
            vec[F2.exp_args.index(a)] += k
        b = F2.a_value(vec)
        eb = F2.exp_vector(vec)
        if F2.td_absolute(base + [b]) == td_base and F2.td_absolute(base + [eb]) == td_base:
            return tuple(m)
    return None
