"""Independent reference computations built on sympy, used only by the tests."""

from fractions import Fraction
from itertools import combinations

import sympy

from expfield import Ideal, Poly, PolyRing
from expfield.syntax import parse_tuple, to_poly


def poly(ring, text):
    return to_poly(parse_tuple(text)[0], ring)


def ideal(gens, *texts):
    ring = PolyRing(gens)
    return Ideal(ring, [poly(ring, t) for t in texts])


def to_sympy(p: Poly):
    xs = sympy.symbols(p.ring.gens) if p.ring.gens else ()
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for x, k in zip(xs, e):
            term *= x ** k
        out += term
    return out


def from_sympy(expr, ring):
    xs = sympy.symbols(ring.gens)
    sp = sympy.Poly(expr, *xs, domain="QQ")
    return Poly(ring, {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in sp.terms() if c})


def sympy_groebner(idl: Ideal, order="grevlex"):
    xs = sympy.symbols(idl.ring.gens)
    gens = [to_sympy(g) for g in idl.generators]
    if not gens:
        return []
    G = sympy.groebner(gens, *xs, order=order, domain="QQ")
    return [from_sympy(g.as_expr(), idl.ring) for g in G.exprs]


def sympy_eliminate(idl: Ideal, keep):
    """I ∩ Q[keep] from a sympy lex basis with the dropped variables first."""
    drop = [g for g in idl.ring.gens if g not in keep]
    kept = [g for g in idl.ring.gens if g in keep]
    ring = PolyRing(drop + kept)
    moved = Ideal(ring, [ring.embed(g) for g in idl.generators])
    target = PolyRing(kept)
    out = []
    for g in sympy_groebner(moved, "lex"):
        if all(not any(e[:len(drop)]) for e in g.terms):
            out.append(Poly(target, {e[len(drop):]: c for e, c in g.terms.items()}))
    return out


def brute_krull(idl: Ideal) -> int:
    """Largest variable subset S with I ∩ Q[S] = 0, by elimination for every subset."""
    gens = idl.ring.gens
    for k in range(len(gens), -1, -1):
        for S in combinations(gens, k):
            if not sympy_eliminate(idl, S):
                return k
    raise AssertionError("unreachable")


def jacobian_td(exprs, symbols, point_values=None):
    """Generic rank of the Jacobian of polynomial expressions (td of a free image)."""
    J = sympy.Matrix([[sympy.diff(e, s) for s in symbols] for e in exprs])
    if point_values is not None:
        J = J.subs(point_values)
    return J.rank()
