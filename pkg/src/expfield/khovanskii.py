"""Khovanskii systems: certified witnesses of exponential algebraicity.

A certificate is a square system of exponential polynomials with
coefficients in the E-subring generated by a set B of generators, and a
witness tuple at which every equation vanishes and the Jacobian determinant
does not.  Membership in ecl is only ever certified, never searched for.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .differentials import fe_rank, xi_presentation, cl_member
from .errors import CoefficientScopeError, InputError, NotApplicableError
from .exact import bareiss_det
from .exppoly import ExpPolyMap, ep_eval, ep_partial, substitute, sym, var
from .ideals import FieldElement
from .presentation import EFieldPresentation


@dataclass
class KhovanskiiCertificate:
    system: ExpPolyMap
    witness: tuple
    coeff_gens: tuple = ()
    name: str = ""
    _det: FieldElement | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.witness = tuple(self.witness)
        self.coeff_gens = tuple(self.coeff_gens)
        n = len(self.system.entries)
        if n < 1:
            raise InputError("a Khovanskii system needs at least one equation")
        if n != len(self.system.indeterminates) or n != len(self.witness):
            raise InputError("Khovanskii system must be square with a matching witness "
                             "(%d equations, %d indeterminates, %d witness entries)"
                             % (n, len(self.system.indeterminates), len(self.witness)))

    @property
    def n(self) -> int:
        return len(self.witness)

    @property
    def jacobian_det(self) -> FieldElement | None:
        """Set by :func:`verify_witness` (None before verification)."""
        return self._det


def jacobian(system: ExpPolyMap, point, F: EFieldPresentation, symbols=None):
    """Jacobian matrix of ``system`` at ``point`` and its determinant (Bareiss)."""
    if len(system.entries) != len(system.indeterminates):
        raise InputError("the Jacobian determinant needs a square system")
    pf = F.field
    point = [F.import_element(p) for p in point]
    xs = system.indeterminates
    matrix = [[ep_eval(ep_partial(f, x), point, F, xs, symbols) for x in xs]
              for f in system.entries]
    return matrix, bareiss_det(matrix, pf.one(), pf.zero())


def check_scope(F: EFieldPresentation, cert: KhovanskiiCertificate):
    allowed = set(cert.coeff_gens)
    for g in allowed:
        if g not in F.ring.index:
            raise CoefficientScopeError("coefficient generator %r is not a generator of %s"
                                        % (g, F.name))
    for i, f in enumerate(cert.system.entries, 1):
        outside = f.symbols() - allowed
        if outside:
            raise CoefficientScopeError("f%d uses coefficient(s) %s outside the subring generated "
                                        "by {%s}" % (i, ", ".join(sorted(outside)),
                                                     ", ".join(cert.coeff_gens)))


def residuals(F: EFieldPresentation, cert: KhovanskiiCertificate) -> list:
    point = [F.import_element(w) for w in cert.witness]
    return [ep_eval(f, point, F, cert.system.indeterminates) for f in cert.system.entries]


def verify_witness(F: EFieldPresentation, cert: KhovanskiiCertificate) -> bool:
    """All equations vanish at the witness and the Jacobian determinant does not."""
    check_scope(F, cert)
    if any(residuals(F, cert)):
        return False
    _, det = jacobian(cert.system, cert.witness, F)
    cert._det = det
    return bool(det)


def ecl_implies_cl_check(F: EFieldPresentation, C, cert: KhovanskiiCertificate) -> bool:
    """Every entry of a verified witness over C lies in cl(C)."""
    C = tuple(C)
    if not set(cert.coeff_gens) <= set(g for g in C if isinstance(g, str)):
        raise NotApplicableError("certificate coefficients {%s} are not generated by C"
                                 % ", ".join(cert.coeff_gens))
    if not verify_witness(F, cert):
        raise NotApplicableError("the certificate does not verify")
    return all(cl_member(F, C, w) for w in cert.witness)


def construct_certificate(F: EFieldPresentation, C=()) -> KhovanskiiCertificate:
    """Build a certificate for the Ξ-indeterminates of F over C when Ξ(F/C) is zero.

    Chooses relation rewrites whose differential rows are independent, in
    order, until the Jacobian is square and non-singular.
    """
    C = tuple(C)
    if not all(isinstance(g, str) for g in C):
        raise InputError("certificate construction takes C as a set of generators")
    M = xi_presentation(F, C)
    if M.dim != 0:
        raise NotApplicableError("Ξ(%s/C) has dimension %d; no square system exists"
                                 % (F.name, M.dim))
    n = M.n
    if n == 0:
        raise NotApplicableError("every generator already lies in C")
    chosen, rows = [], []
    for f, row in zip(M.relations, M.relation_matrix):
        if fe_rank(rows + [list(row)], n) > len(rows):
            chosen.append(f)
            rows.append(list(row))
            if len(rows) == n:
                break
    names = ["X%d" % (i + 1) for i in range(n)]
    mapping = {x: var(nm) for x, nm in zip(M.indeterminates, names)}
    for s in M.over_gens:
        mapping[s] = sym(s)
    system = ExpPolyMap(tuple(substitute(f, mapping) for f in chosen), tuple(names))
    cert = KhovanskiiCertificate(system, M.point, M.over_gens,
                                 name="%s_over_%s" % (F.name, "_".join(M.over_gens) or "Q"))
    if not verify_witness(F, cert):
        raise AssertionError("constructed certificate fails verification")
    return cert
