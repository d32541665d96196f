"""Strong extensions, the Ax inequality, dimension via δ, chains and essential tuples.

Universally quantified statements over A(F) are checked over bounded
integer coordinate spans.  A Q-span is enumerated once: candidates are
keyed by the primitive integer form of their reduced row echelon matrix and
visited in order of (dimension, key).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .differentials import closure_over, xi_presentation
from .errors import DimensionMismatchError, InputError, NotApplicableError, NotClosedError
from .exact import primitive_integer_vector, q_rank, rref
from .presentation import DeltaReport, EFieldPresentation, delta

STRONG = "strong_up_to_bound"
NOT_STRONG = "not_strong"
ESSENTIAL = "essential_up_to_bound"
NOT_ESSENTIAL = "not_essential"


# --------------------------------------------------------------------------
# bounded span enumeration


def primitive_vectors(n: int, bound: int):
    """Primitive integer vectors in [-bound, bound]^n with positive leading entry, lexicographically."""
    for m in product(range(-bound, bound + 1), repeat=n):
        lead = next((x for x in m if x), 0)
        if lead <= 0:
            continue
        g = 0
        for x in m:
            g = gcd(g, x)
        if g == 1:
            yield m


def span_key(rows, n) -> tuple:
    reduced, _ = rref([[Fraction(x) for x in r] for r in rows], n)
    return tuple(primitive_integer_vector(r) for r in reduced)


def subspaces(n: int, bound: int, max_dim: int | None = None, within=None):
    """Distinct nonzero Q-spans of bounded integer vectors, by (dimension, key).

    ``within`` restricts to spans contained in the row space of a given
    integer matrix (used for sub-spans of a tuple).
    """
    if n == 0:
        return
    vecs = list(primitive_vectors(n, bound))
    if within is not None:
        r = q_rank(within)
        vecs = [v for v in vecs if q_rank(list(within) + [v]) == r]
    top = min(n if max_dim is None else max_dim, n)
    level = sorted({span_key([v], n) for v in vecs})
    dim = 1
    while level and dim <= top:
        yield from level
        if dim == top:
            break
        nxt = set()
        for key in level:
            for v in vecs:
                if q_rank(list(key) + [v]) > dim:
                    nxt.add(span_key(list(key) + [v], n))
        level = sorted(nxt)
        dim += 1


def _lift(F: EFieldPresentation, basis, coords) -> tuple:
    """A-coordinates over F.exp_args of Σ coords_i * basis_i."""
    vec = [Fraction(0)] * len(F.exp_args)
    for a, c in zip(basis, coords):
        vec[F.exp_args.index(a)] += c
    return tuple(vec)


def _lift_vec(F, basis_vecs, coords) -> tuple:
    vec = [Fraction(0)] * len(F.exp_args)
    for b, c in zip(basis_vecs, coords):
        if c:
            vec = [x + c * y for x, y in zip(vec, b)]
    return tuple(vec)


# --------------------------------------------------------------------------
# strong extensions


@dataclass
class StrengthReport:
    pair: tuple
    bound: int
    verdict: str
    witness: tuple | None = None
    witness_delta: DeltaReport | None = None
    new_basis: tuple = ()
    checked: int = 0

    def __post_init__(self):
        if self.verdict == NOT_STRONG and not (self.witness_delta and self.witness_delta.delta < 0):
            raise ValueError("a not_strong verdict needs a witness with negative δ")

    @property
    def strong(self) -> bool:
        return self.verdict == STRONG


def _check_pair(F1: EFieldPresentation, F2: EFieldPresentation):
    missing = [g for g in F1.generators if g not in F2.ring.index]
    if missing:
        raise InputError("%s is not a sub-presentation of %s (missing %s)"
                         % (F1.name, F2.name, ", ".join(missing)))


def _strong_search(F, over_names, over_vecs, new_vecs, bound):
    """First span of ``new_vecs`` (bounded coordinates) with δ < 0 over the given base."""
    checked = 0
    for key in subspaces(len(new_vecs), bound):
        checked += 1
        tup = [_lift_vec(F, new_vecs, row) for row in key]
        rep = delta(F, tup, list(over_names) + list(over_vecs))
        if rep.delta < 0:
            return key, rep, checked
    return None, None, checked


def is_strong(F1: EFieldPresentation, F2: EFieldPresentation, bound: int = 3) -> StrengthReport:
    """Search bounded spans of A(F2) over A(F1) for a tuple of negative predimension."""
    _check_pair(F1, F2)
    basis = F2.a_basis_over(F1.generators)
    new_vecs = [F2.unit_vector(a) for a in basis]
    key, rep, checked = _strong_search(F2, F1.generators, (), new_vecs, bound)
    if key is None:
        return StrengthReport((F1.name, F2.name), bound, STRONG, new_basis=basis, checked=checked)
    return StrengthReport((F1.name, F2.name), bound, NOT_STRONG, rep.tuple, rep,
                          new_basis=basis, checked=checked)


# --------------------------------------------------------------------------
# Ax inequality and dimension


@dataclass
class AxReport:
    tuple: tuple
    over: tuple
    closure: tuple
    was_closed: bool
    delta: int
    dim: int

    @property
    def holds(self) -> bool:
        return self.delta >= self.dim

    def __bool__(self):
        return self.holds


def _over_names(C):
    C = tuple(C)
    if not all(isinstance(g, str) for g in C):
        raise InputError("C must be given as a set of generators")
    return C


def xi_rank_dim(F: EFieldPresentation, tuple_, C) -> int:
    """dim(tuple/C) in the pregeometry: rank of the differentials in Ξ(F/C)."""
    M = xi_presentation(F, C)
    vecs = [M.differential(F.a_value(F.a_coords(_elem(F, t)))) for t in tuple_]
    return M.rank_of(vecs)


def _elem(F, t):
    if isinstance(t, str):
        return F.gen(t)
    if isinstance(t, tuple):
        return F.a_value(t)
    return t


def _format_over(F, over):
    return tuple(x if isinstance(x, str) else F.format_vector(x) for x in over)


def ax_inequality_check(F: EFieldPresentation, C, tuple_, require_closed: bool = False) -> AxReport:
    """δ(tuple/C) ≥ dim(tuple/C), with C replaced by its closure when it is not cl-closed.

    The closure includes the part of cl(C) ∩ A(F) not spanned by generators.
    """
    C = _over_names(C)
    closure = closure_over(F, C)
    extra = [x for x in closure if not (isinstance(x, str) and x in C)]
    closed = not extra
    if not closed and require_closed:
        raise NotClosedError("C is not cl-closed: %s lie in cl(C)"
                             % ", ".join(_format_over(F, extra)))
    tup = [_elem(F, t) for t in tuple_]
    rep = delta(F, tup, closure)
    dim = xi_rank_dim(F, tup, closure)
    return AxReport(rep.tuple, tuple(C), _format_over(F, closure), closed, rep.delta, dim)


def _a_complement(F, over) -> tuple:
    """Exp arguments completing the A-part of ``over`` to a basis of A(F)."""
    names = [x for x in over if isinstance(x, str)]
    rows = [list(r) for r in F.arg_relations]
    rows += [list(F.unit_vector(a)) for a in F.exp_args if a in names]
    rows += [list(x) for x in over if not isinstance(x, str)]
    out = []
    for a in F.exp_args:
        u = list(F.unit_vector(a))
        if q_rank(rows + [u]) > q_rank(rows):
            rows.append(u)
            out.append(a)
    return tuple(out)


def dim_via_min_delta(F: EFieldPresentation, tuple_, bound: int = 3) -> int:
    """min δ(tuple·ȳ / cl(∅)) over bounded spans ȳ of the A-basis, cross-checked against Ξ.

    The search stops once the Ξ-rank value is reached.  Raises
    :class:`DimensionMismatchError` if the bounded search never gets there.
    """
    C0 = closure_over(F, ())
    tup = [_elem(F, t) for t in tuple_]
    expected = xi_rank_dim(F, tup, C0)
    basis = _a_complement(F, C0)
    x_coords = [F.a_coords(t) for t in tup]
    best = delta(F, tup, C0).delta
    seen = set()
    for key in subspaces(len(basis), bound):
        # δ(x̄ȳ/C0) ≥ dim(x̄ȳ/C0) ≥ dim(x̄/C0) by the Ax inequality, so nothing lower can appear
        if best == expected:
            break
        ys = [_lift(F, basis, row) for row in key]
        span = _span_id(x_coords + ys, len(F.exp_args))
        if span in seen:
            continue
        seen.add(span)
        best = min(best, delta(F, list(x_coords) + ys, C0).delta)
    if best != expected:
        raise DimensionMismatchError(
            "min δ over bound %d is %d but the Ξ-rank dimension is %d (bound too small?)"
            % (bound, best, expected))
    return best


def _span_id(vecs, n):
    rows = [list(v) for v in vecs if any(v)]
    return span_key(rows, n) if rows else ()


# --------------------------------------------------------------------------
# chains


@dataclass
class ChainStep:
    """G_{i+1} = G_i together with ``added`` (A-elements of the ambient field) and their exponentials."""

    index: int
    added: tuple
    delta: int
    td: int
    strong: StrengthReport
    span: tuple = field(default=(), repr=False)


def decompose_chain(F1: EFieldPresentation, F2: EFieldPresentation, bound: int = 3) -> list:
    """Chain F1 = G_0 ◁ G_1 ◁ … ◁ G_k = F2 adjoining one new basis element per step.

    Each step adds the next basis element r not yet in the span together
    with a δ-minimal bounded span containing it (ties go to the smaller
    dimension, then the lexicographically least coordinate matrix).  The
    intermediate fields live inside F2 and are described by their A-spans.
    """
    _check_pair(F1, F2)
    if not F2.egg:
        raise NotApplicableError("%s is not declared exponential-graph-generated" % F2.name)
    top = is_strong(F1, F2, bound)
    if not top.strong:
        raise NotApplicableError("%s is not strong over %s (witness %s)"
                                 % (F2.name, F1.name, ", ".join(top.witness)))
    basis = F2.a_basis_over(F1.generators)
    n = len(basis)
    names = list(F1.generators)
    span: list = []
    steps = []
    while q_rank(span) < n:
        r = next(i for i in range(n) if q_rank(span + [_unit(n, i)]) > q_rank(span))
        cur = [_unit(n, r)] + span
        best = None
        seen = set()
        for key in [()] + list(subspaces(n, bound)):
            total = _span_id(cur + list(key), n)
            if total in seen:
                continue
            seen.add(total)
            added = _reduce_mod(total, span, n)
            tup = [_lift(F2, basis, row) for row in added]
            base = [_lift(F2, basis, row) for row in span]
            d = delta(F2, tup, names + base).delta
            if best is None or d < best[0]:
                best = (d, total, added, tup, base)
        d, total, added, tup, base = best
        td_step = d + len(added)
        step_vecs = [_lift(F2, basis, row) for row in added]
        key, rep, checked = _strong_search(F2, names, base, step_vecs, bound)
        sub = StrengthReport(("G%d" % len(steps), "G%d" % (len(steps) + 1)), bound,
                             STRONG if key is None else NOT_STRONG,
                             None if key is None else rep.tuple, rep if key is not None else None,
                             checked=checked)
        steps.append(ChainStep(len(steps), tuple(F2.format_vector(v) for v in tup), d, td_step, sub,
                               span=total))
        span = [list(r) for r in total]
    return steps


def chain_transitivity(F1, F2, steps, bound: int = 3) -> bool:
    """Re-check G_i ◁ G_k = F2 for every intermediate G_i of a chain."""
    basis = F2.a_basis_over(F1.generators)
    n = len(basis)
    prev: list = []
    for st in steps:
        base = [_lift(F2, basis, row) for row in prev]
        rest = _complement(prev, n)
        key, _, _ = _strong_search(F2, F1.generators, base,
                                   [_lift(F2, basis, row) for row in rest], bound)
        if key is not None:
            return False
        prev = [list(r) for r in st.span]
    return True


def _unit(n, i):
    return [1 if j == i else 0 for j in range(n)]


def _reduce_mod(total, span, n):
    """Rows of ``total`` completing ``span`` to a basis (unit vectors where possible)."""
    rows = [list(r) for r in span]
    out = []
    for row in total:
        if q_rank(rows + [list(row)]) > q_rank(rows):
            rows.append(list(row))
            out.append(tuple(row))
    return out


def _complement(span, n):
    rows = [list(r) for r in span]
    out = []
    for i in range(n):
        u = _unit(n, i)
        if q_rank(rows + [u]) > q_rank(rows):
            rows.append(u)
            out.append(tuple(u))
    return out


# --------------------------------------------------------------------------
# essential counterexamples


@dataclass
class EssentialReport:
    tuple: tuple
    delta_a: int
    verdict: str
    counter: tuple | None = None
    counter_delta: int | None = None
    bound: int = 3
    over: tuple = ()
    in_cl_over: bool | None = None
    in_cl_empty: bool | None = None

    def __post_init__(self):
        if self.verdict == NOT_ESSENTIAL and not (self.counter_delta < self.delta_a):
            raise ValueError("a not_essential verdict needs a counter with smaller δ")

    @property
    def is_counterexample(self) -> bool:
        """δ(ā) < 0, i.e. the tuple violates the Schanuel inequality."""
        return self.delta_a < 0

    @property
    def essential(self) -> bool:
        return self.verdict == ESSENTIAL


def essential_check(F: EFieldPresentation, tuple_, bound: int = 3, over=None) -> EssentialReport:
    """Is δ(ā) ≤ δ(c̄) for every c̄ spanning a proper nonzero sub-span of ⟨ā⟩_Q (up to bound)?

    δ is taken over ``over`` (default: the base generators of F).  For an
    essential tuple with δ < 0 the report records whether every entry lies
    in cl(over) and in cl(∅).
    """
    from .differentials import cl_member

    over = tuple(F.base_gens if over is None else _over_names(over))
    tup = [_elem(F, t) for t in tuple_]
    coords = [F.a_coords(t) for t in tup]
    rep = delta(F, tup, over)
    # a basis of the span of ā, chosen greedily from its entries
    basis = []
    for c in coords:
        rows = [list(b) for b in basis] + [list(r) for r in F.arg_relations]
        if q_rank(rows + [list(c)]) > q_rank(rows):
            basis.append(c)
    k = len(basis)
    for key in subspaces(k, bound, max_dim=k - 1):
        sub = [_lift_vec(F, basis, row) for row in key]
        d = delta(F, sub, over).delta
        if d < rep.delta:
            return EssentialReport(rep.tuple, rep.delta, NOT_ESSENTIAL,
                                   tuple(F.format_vector(v) for v in sub), d, bound, over)
    in_over = in_empty = None
    if rep.delta < 0 and F.egg:
        in_over = all(cl_member(F, over, t) for t in tup)
        in_empty = all(cl_member(F, (), t) for t in tup)
    return EssentialReport(rep.tuple, rep.delta, ESSENTIAL, None, None, bound, over,
                           in_over, in_empty)
