import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from expfield import EFieldPresentation, delta, ldim_q, parse, td, validate
from expfield.errors import ExpUndefinedError, NotInAError
from expfield.exact import q_rank

from conftest import FREE, ANCHOR, corpus_fields
from oracles import poly, sympy_eliminate, ideal as make_ideal


def kinds(report):
    return {f.kind for f in report.failures}


def test_validate_examples():
    assert validate(FREE.presentation("F")).valid
    bad = EFieldPresentation("U", ["x"], [poly(make_ideal(("x",)).ring, "1")])
    assert kinds(validate(bad)) == {"improper-ideal"}
    doc = parse("field F { gens a, b, E, G; exp a = E; exp b = G; rel a - b = 0; }")
    rep = validate(doc.presentation("F"))
    assert "multiplicativity" in kinds(rep)
    (f,) = [f for f in rep.failures if f.kind == "multiplicativity"]
    assert f.witness is not None


def test_validate_flags_reducible_and_non_egg():
    doc = parse("field F { gens x, y, ey; exp y = ey; rel x^2 - 4 = 0; egg; }")
    assert kinds(validate(doc.presentation("F"))) == {"reducible-generator", "not-egg"}


def test_validate_flags_exp_of_zero():
    doc = parse("field F { gens a, E; exp a = E; rel E = 0; }")
    assert "not-a-unit" in kinds(validate(doc.presentation("F")))


@pytest.mark.parametrize("fname,name,F", corpus_fields(), ids=lambda v: str(v) if isinstance(v, str) else "")
def test_corpus_is_valid(fname, name, F):
    assert validate(F).valid, validate(F).failures


def test_td_examples(free, anchor):
    x, ex = free.gen("x"), free.gen("ex")
    assert td(free, [x, ex]) == 2
    doc = parse("field F { gens a, b; }")
    F = doc.presentation("F")
    assert td(F, [F.gen("a")], ["a"]) == 0
    assert td(F, [F.gen("a") ** 2], ["a"]) == 0
    assert td(anchor, [anchor.gen("x"), anchor.gen("E")], ["r", "s"]) == 0


def test_ldim_examples():
    F = parse("field F { gens x, ex, y, ey; exp x = ex; exp y = ey; }").presentation("F")
    x, y = F.gen("x"), F.gen("y")
    assert ldim_q(F, [x]) == 1
    assert ldim_q(F, [x, 2 * x]) == 1
    assert ldim_q(F, [x + y, x - y], ["x"]) == 1
    with pytest.raises(NotInAError):
        ldim_q(F, [F.gen("ex")])


def test_delta_examples(free, anchor):
    assert delta(free, []).delta == 0
    rep = delta(free, [free.gen("x")])
    assert (rep.td_value, rep.ldim_value, rep.delta) == (2, 1, 1)
    # x^2 = -1 is algebraic, its exponential too, so δ = 0 - 1
    rep = delta(anchor, [anchor.gen("x")], anchor.base_gens)
    assert (rep.td_value, rep.ldim_value, rep.delta) == (0, 1, -1)


def test_delta_needs_presented_roots(free):
    with pytest.raises(ExpUndefinedError):
        delta(free, [free.gen("x") / 2])


# -- td against an independent elimination oracle

def oracle_td(F, polys):
    """Largest subset of fresh t_i with no relation, using sympy lex bases."""
    from expfield import Ideal, PolyRing
    names = ["t%d" % i for i in range(len(polys))]
    ring = PolyRing(list(F.generators) + names)
    gens = [ring.embed(r) for r in F.relations]
    gens += [ring.gen(t) - ring.embed(p) for t, p in zip(names, polys)]
    I = Ideal(ring, gens)
    for k in range(len(names), -1, -1):
        for S in itertools.combinations(names, k):
            if not sympy_eliminate(I, S):
                return k


TD_CASES = [
    ("01_imaginary_unit.efd", "P", ["x", "E", "r"]),
    ("01_imaginary_unit.efd", "P", ["x*E", "s"]),
    ("03_free_two.efd", "F2", ["x + y", "ex*ey", "x*ex"]),
    ("03_free_two.efd", "F2", ["x", "ex", "y", "ey"]),
    ("06_ax_fact.efd", "F", ["a1 - a2", "E1"]),
    ("06_ax_fact.efd", "F", ["a1", "E1*E2"]),
    ("07_essential.efd", "F", ["b", "Eb"]),
    ("07_essential.efd", "F", ["a", "Ea"]),
]


@pytest.mark.parametrize("fname,name,texts", TD_CASES)
def test_td_matches_elimination_oracle(fname, name, texts):
    from conftest import load
    F = load(fname).presentation(name)
    polys = [poly(F.ring, t) for t in texts]
    assert td(F, [F.element(p) for p in polys]) == oracle_td(F, polys)


def test_td_matches_jacobian_rank_on_free_field():
    import sympy
    F = FREE.presentation("F")
    x, ex = sympy.symbols("x ex")
    # in the free field x and ex are independent, so td = generic Jacobian rank
    for exprs in ([x, ex], [x * ex, x + ex], [x ** 2 * ex, x * ex ** 2, x * ex]):
        J = sympy.Matrix([[sympy.diff(e, s) for s in (x, ex)] for e in exprs])
        els = [F.element(poly(F.ring, str(e).replace("**", "^"))) for e in exprs]
        assert td(F, els) == J.rank()


# -- properties over the corpus

_EGG = [(f, n, F) for f, n, F in corpus_fields() if F.exp_args]
coeff = st.integers(-2, 2)


def _vector(data, F):
    return tuple(Fraction(data.draw(coeff)) for _ in F.exp_args)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_delta_depends_only_on_span(data):
    _, _, F = data.draw(st.sampled_from(_EGG))
    k = data.draw(st.integers(1, 2))
    vecs = [_vector(data, F) for _ in range(k)]
    # an invertible integer recombination with unit determinant keeps integral coordinates
    if k == 2:
        t = data.draw(coeff)
        new = [vecs[0], tuple(b + t * a for a, b in zip(*vecs))]
        if data.draw(st.booleans()):
            new = new[::-1]
    else:
        new = [tuple(-x for x in vecs[0])]
    assert delta(F, vecs, F.base_gens).delta == delta(F, new, F.base_gens).delta


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_td_monotone_and_ldim_bounded(data):
    _, _, F = data.draw(st.sampled_from(_EGG))
    vecs = [_vector(data, F) for _ in range(data.draw(st.integers(0, 3)))]
    els = [F.a_value(v) for v in vecs]
    small = data.draw(st.sets(st.sampled_from(F.generators), max_size=2))
    big = small | data.draw(st.sets(st.sampled_from(F.generators), max_size=2))
    assert td(F, els, sorted(big)) <= td(F, els, sorted(small))
    assert ldim_q(F, els, sorted(small)) <= len(els)


def test_exp_uses_any_integral_representative():
    from conftest import load
    F = load("21_half_exp.efd").presentation("F")
    E, H = F.gen("E"), F.gen("H")
    assert F.exp_vector((0, 3)) == E * H
    # 3/2 x is the same element as 3h, whose exponential is presented
    assert F.exp_vector((Fraction(3, 2), 0)) == E * H
    assert F.exp_vector((Fraction(1, 2), 0)) == H
    with pytest.raises(ExpUndefinedError):
        F.exp_vector((Fraction(1, 4), 0))
